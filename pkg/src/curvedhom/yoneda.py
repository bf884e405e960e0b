"""Chain-level n-extensions and the degree-2 square of a deformation.

An n-extension is kept as n mapping-cone triangles chained tip to tail:
the cone over each map is the source of the next.  Its class is the
composite of the shifted connecting projections, an explicit closed map
from the top object to the n-fold shift of the bottom one, and the
spliced sequence through the middle terms comes with strict contraction
certificates for every consecutive pair.

The degree-2 square attached to a square-zero extension is assembled
here the honest way: split the two generator-level short exact sequences
through the torsion quotient, differentiate the splittings, and read off
where the defect escapes.  The closed-form entries in deform.iota must
agree with this construction entry for entry, which the tests enforce;
verify_class_theorem then compares the square against the
transformation that the defining cochain induces on the totalization.

Homotopy questions are settled inside materialized hom complexes.  Each
hom degree carries an intrinsic finite coefficient basis, so a
single-degree solve is a global answer even when the underlying modules
have unbounded support, and infeasibility comes with a verified linear
functional rather than a shrug.
"""

from __future__ import annotations

from .ainfinity import extend_object, extend_transformation
from .deform import coker_t, im_t, ker_t
from .dgcore import (CdgModule, Gen, MaterializedHom, ModuleMap, cone,
                     cone_inclusion, cone_projection, shift_map, shift_module)
from .errors import TypeMismatch, VerificationFailed, WindowIncomplete
from .exactalg import Window


class HomotopyVerdict:
    """Outcome of an up-to-homotopy comparison.

    status       -- "exact", "homotopic" or "failed"
    homotopy     -- ModuleMap h with delta(h) = difference (when homotopic)
    certificate  -- infeasibility functional from the solver (when failed)
    window       -- the window the hom complex was materialized in
    """

    def __init__(self, status, window=None, homotopy=None, certificate=None):
        self.status = status
        self.window = window
        self.homotopy = homotopy
        self.certificate = certificate

    @property
    def passed(self):
        return self.status in ("exact", "homotopic")

    def __bool__(self):
        return self.passed

    def __repr__(self):
        return "HomotopyVerdict(%s, window=%r)" % (self.status, self.window)


def certify_homotopic(f, g=None, window=None):
    """Decide f = g up to homotopy at the module level.

    Solves delta(h) = f - g in the materialized hom complex; g = None
    compares against zero.  The equation lives in a single hom degree
    whose basis is intrinsic, so the verdict does not depend on the
    window as long as the two degrees it touches are materialized.
    """
    if g is not None and f.degree != g.degree and not (f.is_zero() or g.is_zero()):
        raise TypeMismatch("cannot compare maps of degrees %d and %d"
                           % (f.degree, g.degree))
    diff = f if g is None else f.sub(g)
    k = diff.degree
    if diff.is_zero():
        return HomotopyVerdict("exact", window=window)
    if window is None:
        window = Window(k - 2, k + 1)
    if window.lo > k - 1 or window.hi < k + 1:
        raise WindowIncomplete("window %r cannot hold hom degrees %d and %d"
                               % (window, k - 1, k))
    mh = MaterializedHom(f.source, f.target, window)
    d = mh.complex.diff.block(k - 1)
    status, out = d.solve(mh.vector(diff))
    if status == "infeasible":
        cert = [(i, out.rows[0][i]) for i in range(out.ncols)
                if out.rows[0][i] != 0]
        return HomotopyVerdict("failed", window=window, certificate=cert)
    h = mh.map_from_vector(k - 1, out)
    if h.delta() != diff:
        raise VerificationFailed("solver returned a non-homotopy")
    return HomotopyVerdict("homotopic", window=window, homotopy=h)


# --- extensions as chains of cone triangles ---

class ConeTriangleChain:
    """n mapping-cone triangles chained tip to tail.

    maps[i] is a closed degree-0 map out of cones[i]; cones[i + 1] is its
    cone.  cones[0] is the bottom of the extension and cones[n] the top.
    Maps written against a structurally equal copy of the expected source
    are rebound rather than rejected."""

    def __init__(self, maps):
        if not maps:
            raise ValueError("an extension needs at least one triangle")
        self.maps = []
        self.cones = [maps[0].source]
        for k, f in enumerate(maps):
            if f.degree != 0 or not f.is_closed():
                raise ValueError("triangle map %d is not closed of degree 0" % k)
            cur = self.cones[-1]
            if f.source is not cur:
                if not f.source.same_shape(cur):
                    raise ValueError(
                        "map %d does not start at the previous cone" % k)
                f = ModuleMap(cur, f.target, 0, f.entries)
            self.maps.append(f)
            self.cones.append(cone(f))
        self.n = len(self.maps)

    @property
    def bottom(self):
        return self.cones[0]

    @property
    def top(self):
        return self.cones[-1]

    def middle(self, i):
        return self.maps[i].target

    def connecting(self, i):
        return cone_projection(self.maps[i], self.cones[i + 1])

    def inclusion(self, i):
        return cone_inclusion(self.maps[i], self.cones[i + 1])

    def contraction(self, i):
        """h of degree -1 with delta(h) = inclusion(i) . maps[i]."""
        return cone_contraction(self.maps[i], self.cones[i + 1])

    def splice(self):
        """(sequence, certificates): bottom -> middles -> top with one
        explicit contraction per consecutive pair."""
        seq = [self.maps[0]]
        for i in range(self.n - 1):
            seq.append(self.maps[i + 1].compose(self.inclusion(i)))
        seq.append(self.inclusion(self.n - 1))
        certs = []
        for k in range(self.n):
            c = self.contraction(k)
            if k + 1 < self.n:
                c = self.maps[k + 1].compose(c)
            if k >= 1:
                c = c.compose(self.inclusion(k - 1))
            certs.append(c)
        return seq, certs


class ExtClassWitness:
    """The class of an extension with the data that assembled it: the
    composite of shifted connecting maps, the spliced sequence, and the
    strict contractions of its consecutive composites."""

    def __init__(self, chain, composite, sequence, certificates):
        if not composite.is_closed():
            raise VerificationFailed("extension class is not closed")
        self.chain = chain
        self.composite = composite
        self.sequence = sequence
        self.certificates = certificates


def ext_class(chain):
    """Composite of the connecting maps, top -> bottom[n]."""
    n = chain.n
    comp = chain.connecting(n - 1)
    for i in range(n - 2, -1, -1):
        comp = shift_map(chain.connecting(i), n - 1 - i).compose(comp)
    seq, certs = chain.splice()
    return ExtClassWitness(chain, comp, seq, certs)


class ExtensionMorphism:
    """Ladder between two chains of the same length: maps on the cones
    and on the middle terms, identity at both ends, every triangle square
    commuting up to homotopy inside the window.  Construction fails hard
    when an end map is not the identity or a square does not commute."""

    def __init__(self, src, tgt, cone_maps, middle_maps, window=None):
        if tgt.n != src.n:
            raise ValueError("extensions have different lengths")
        if len(cone_maps) != src.n + 1 or len(middle_maps) != src.n:
            raise ValueError("wrong number of ladder maps")
        if not cone_maps[0].is_identity_shaped():
            raise ValueError("a morphism of extensions fixes the bottom object")
        if not cone_maps[-1].is_identity_shaped():
            raise ValueError("a morphism of extensions fixes the top object")
        for m in cone_maps + middle_maps:
            if m.degree != 0 or not m.is_closed():
                raise ValueError("ladder maps must be closed of degree 0")
        self.src = src
        self.tgt = tgt
        self.cone_maps = cone_maps
        self.middle_maps = middle_maps
        self.window = window
        self.squares = []
        for i in range(src.n):
            g0, g1, e = cone_maps[i], cone_maps[i + 1], middle_maps[i]
            pairs = [
                (e.compose(src.maps[i]), tgt.maps[i].compose(g0)),
                (g1.compose(src.inclusion(i)), tgt.inclusion(i).compose(e)),
                (shift_map(g0, 1).compose(src.connecting(i)),
                 tgt.connecting(i).compose(g1)),
            ]
            for a, b in pairs:
                v = certify_homotopic(a, b, window)
                if not v.passed:
                    raise VerificationFailed(
                        "triangle %d square does not commute up to homotopy" % i)
                self.squares.append(v)


def morphism_preserves_class(m, window=None):
    """Compare the classes of the two ends of a morphism of extensions:
    exact equality when the entries agree, a homotopy certificate via the
    hom-complex solve otherwise."""
    window = window if window is not None else m.window
    a = ext_class(m.src).composite
    b = ext_class(m.tgt).composite
    return certify_homotopic(a, ModuleMap(a.source, a.target, 0, b.entries),
                             window)


# --- the degree-2 square of a square-zero extension ---

def torsion_quotient(module):
    """Ker t / t M: the span of the t-killed generators over the base."""
    A = module.algebra
    if A.base is None:
        raise TypeMismatch("module is not over a square-zero extension")
    quot = [i for i, g in enumerate(module.gens) if g.kind == "quot"]
    pos = {i: p for p, i in enumerate(quot)}
    gens = [Gen(module.gens[i].name, module.gens[i].degree, "full")
            for i in quot]
    D = {}
    for (i, j), e in module.D.items():
        if i in pos and j in pos:
            r = A.reduce_mod_t(e)
            if r:
                D[(pos[i], pos[j])] = r
    return CdgModule(A.base, gens, D)


def _readoff(defect, rowmap, target):
    """A delta-of-splitting lands in the rows of a subquotient by
    exactness; reindex it there and fail hard on any escaping entry."""
    out = ModuleMap(defect.source, target, defect.degree)
    for (r, c), e in defect.entries.items():
        if r not in rowmap:
            raise VerificationFailed("splitting defect escapes row %d" % r)
        out.set_entry(rowmap[r], c, e)
    return out


def deformation_iota(module):
    """Degree-2 composite of the connecting maps of the two
    generator-split short exact sequences through the torsion quotient:

        0 -> t M -> Ker t -> Q -> 0,  0 -> Q -> Coker t -> t M -> 0.

    Lift along the generator splitting, differentiate, read off where the
    boundary escapes; no solver is involved because the splittings are
    entrywise.  Agreement with the closed-form entries of deform.iota is
    a test invariant, not an input."""
    A = module.algebra
    if A.base is None:
        raise TypeMismatch("module is not over a square-zero extension")
    unit = A.base.unit
    I = im_t(module)
    C = coker_t(module)
    K = ker_t(module)
    Q = torsion_quotient(module)
    full = [i for i, g in enumerate(module.gens) if g.kind == "full"]
    quot = [i for i, g in enumerate(module.gens) if g.kind == "quot"]
    fpos = {i: p for p, i in enumerate(full)}
    qpos = {i: p for p, i in enumerate(quot)}

    s2 = ModuleMap(I, C, 0, {(i, fpos[i]): dict(unit) for i in full})
    zeta2 = _readoff(s2.delta(), qpos, Q)

    s1 = ModuleMap(Q, K, 0, {(i, qpos[i]): dict(unit) for i in quot})
    eta1 = _readoff(s1.delta(), fpos, I)

    return eta1.compose(zeta2)


def verify_class_theorem(dfm, x, window=None):
    """The degree-2 square of the extended module carried by a twisted
    complex, against the transformation its defining cochain induces on
    the totalization.  The t-image of the extension matches the
    totalization generator by generator, which is re-checked before
    transporting; the comparison reports exact equality when it holds and
    otherwise settles the difference in the hom complex."""
    E = extend_object(dfm, x)
    I = im_t(E)
    tot = x.totalize()
    if not I.same_shape(tot):
        raise VerificationFailed(
            "t-image of the extension does not match the totalization")
    lhs = deformation_iota(E)
    T = extend_transformation(dfm, x)
    rhs = ModuleMap(I, I, 2, T.entries)
    return certify_homotopic(lhs, rhs, window)


# --- the octahedron on cones ---

class OctahedronWitness:
    """The three cones of a composable pair with the comparison maps
    between them and the certificates that they form a triangle: four
    strict square faces, strict contractions for the three consecutive
    composites around the new triangle, and closedness throughout."""

    def __init__(self, u, v, w, faces, h_vu, h_wv, h_uw):
        self.u = u
        self.v = v
        self.w = w
        self.faces = faces
        self.h_vu = h_vu
        self.h_wv = h_wv
        self.h_uw = h_uw

    @property
    def passed(self):
        return all(self.faces.values())


def _unit_block(src, tgt, degree, offset_row, offset_col, count):
    A = src.algebra
    ent = {}
    for j in range(count):
        g = tgt.gens[offset_row + j]
        u = A.unit if g.kind == "full" else A.reduce_mod_t(A.unit)
        ent[(offset_row + j, offset_col + j)] = u
    return ModuleMap(src, tgt, degree, ent)


def octahedron_check(f, g):
    """For closed degree-0 maps f then g, compare the cones of f, gf and
    g.  The two middle maps and the connecting composite form a triangle:
    all four squares against the defining cone triangles hold on the
    nose, and each consecutive composite bounds an explicit contraction.
    """
    if f.degree != 0 or g.degree != 0 or not f.is_closed() or not g.is_closed():
        raise ValueError("octahedron needs closed degree-0 maps")
    if not (g.source is f.target or g.source.same_shape(f.target)):
        raise TypeMismatch("the maps do not compose")
    gf = g.compose(f)
    Cf, Cgf, Cg = cone(f), cone(gf), cone(g)
    ny, nx = len(f.target.gens), len(f.source.gens)
    nz = len(g.target.gens)

    u = ModuleMap(Cf, Cgf, 0)
    for (i, j), e in g.entries.items():
        u.set_entry(i, j, dict(e))
    for j in range(nx):
        gen = Cgf.gens[nz + j]
        uu = f.source.algebra.unit if gen.kind == "full" \
            else f.source.algebra.reduce_mod_t(f.source.algebra.unit)
        u.set_entry(nz + j, ny + j, uu)

    v = ModuleMap(Cgf, Cg, 0)
    for j in range(nz):
        gen = Cg.gens[j]
        uu = g.target.algebra.unit if gen.kind == "full" \
            else g.target.algebra.reduce_mod_t(g.target.algebra.unit)
        v.set_entry(j, j, uu)
    for (i, j), e in f.entries.items():
        v.set_entry(nz + i, nz + j, dict(e))

    prj_g = cone_projection(g, Cg)
    w = shift_map(cone_inclusion(f, Cf), 1).compose(prj_g)

    inc_f, prj_f = cone_inclusion(f, Cf), cone_projection(f, Cf)
    inc_gf, prj_gf = cone_inclusion(gf, Cgf), cone_projection(gf, Cgf)
    inc_g = cone_inclusion(g, Cg)
    faces = {
        "target inclusion": u.compose(inc_f) == inc_gf.compose(g),
        "source projection": prj_gf.compose(u) == prj_f,
        "middle inclusion": v.compose(inc_gf) == inc_g,
        "middle projection": prj_g.compose(v)
        == shift_map(f, 1).compose(prj_gf),
        "maps closed": u.is_closed() and v.is_closed() and w.is_closed(),
    }

    h_vu = _unit_block(Cf, Cg, -1, nz, 0, ny)
    h_wv = shift_map(cone_contraction(f, Cf), 1).compose(prj_gf)
    h_uw = shift_map(inc_gf, 1).compose(
        _unit_block(Cg, shift_module(g.target, 1), -1, 0, 0, nz))
    faces["vu bounds"] = h_vu.delta() == v.compose(u)
    faces["wv bounds"] = h_wv.delta() == w.compose(v)
    faces["uw bounds"] = h_uw.delta() == shift_map(u, 1).compose(w)
    return OctahedronWitness(u, v, w, faces, h_vu, h_wv, h_uw)


def cone_contraction(f, C=None):
    """h of degree -1 with delta(h) = cone_inclusion(f) . f: the unit
    block into the shifted-source rows of the cone."""
    C = C if C is not None else cone(f)
    A = f.source.algebra
    off = len(f.target.gens)
    ent = {}
    for j, g in enumerate(f.source.gens):
        u = A.unit if g.kind == "full" else A.reduce_mod_t(A.unit)
        ent[(off + j, j)] = u
    return ModuleMap(f.source, C, -1, ent)
