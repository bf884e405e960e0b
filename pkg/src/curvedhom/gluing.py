"""Gluing of two dg algebras along a bimodule.

The gluing datum is a bimodule: free as a right module over the receiving
algebra on finitely many generators p_s of degrees d_s, with the other
algebra acting on the left through matrices beta(b) over the receiving one
and an internal differential matrix d_phi.  Module maps in this package
are strictly right-linear (the (-1)^{|gen|} in the module delta is the
right Leibniz rule, composition is a plain matrix product), so the two
actions commuting forces beta to be a plain homomorphism of matrix
algebras, with no Koszul signs even when nothing commutes.  What remains
of the graded structure is the left Leibniz rule tying d_phi to both
differentials, entry by entry:

    (d_phi beta(b))_{rs} + (-1)^{d_r} d(beta(b)_{rs})
        = beta(db)_{rs} + (-1)^{|b|} (beta(b) d_phi)_{rs}.

Tensoring a twisted complex over the acting algebra with the bimodule
gives a module over the receiving one (realize): generators (i, s) of
degree d_s - n_i, twist blocks beta(f_ij) placed plainly, and the d_phi
block of summand i scaled by (-1)^{n_i} from moving d_phi past the degree
-n_i summand generator.  That one sign is the whole story: morphisms
realize entrywise through beta with no signs at all, realize is a strict
dg functor, and it commutes with shifts on the nose.

A glued object is a pair of twisted complexes, one over each algebra,
with a closed degree-0 gluing map n: tot(X) -> realize(Y).  A glued
morphism is a triple (f1, f2, g) whose corner g has degree one less;

    delta (f1, f2, g) = (delta f1, delta f2,
                         -delta g + realize(f2) n - n' f1)

so closed degree-0 morphisms are exactly homotopy-commuting squares.  The
triple is faithfully a block-triangular map between the corner modules
cone(n)[-1], which is where the delta and composition formulas come from;
corner() and block() expose that model, and the corner functor sends the
embedded first side to tot(X) and the embedded second side to
realize(Y)[-1] literally.  The canonical triangle through the two
embeddings is strict at the chain level: both composites around it are
delta of explicit homotopies, and the cone of the shifted connecting map
reproduces the glued object it came from entry for entry.
"""

from __future__ import annotations

from .dgcore import (CdgModule, Gen, MaterializedHom, ModuleMap, cone,
                     elem_add, elem_neg, elem_scale, shift_module)
from .exactalg import Matrix, Window
from .twist import TwistedComplex, cone_summand_maps, twisted_cone


def _matmul(A, P, Q):
    """Product of sparse matrices with entries in A."""
    out = {}
    for (r, m), a in P.items():
        for (mm, s), b in Q.items():
            if mm != m:
                continue
            p = A.mul(a, b)
            if p:
                out[(r, s)] = elem_add(A.field, out.get((r, s), {}), p)
    return {k: v for k, v in out.items() if v}


class Bimodule:
    """Left action of `source` on a free right `target`-module.

    degrees[s] is the degree of the s-th module generator; action[label]
    is the sparse matrix of that label's left action, entry (r, s) the
    component s -> r, of degree |label| + d_s - d_r; diff is the sparse
    matrix of the internal differential, entry (r, s) of degree
    d_s - d_r + 1.  Missing labels and positions act by zero."""

    def __init__(self, source, target, degrees, action, diff=None, check=True):
        self.source = source
        self.target = target
        self.degrees = list(degrees)
        self.rank = len(self.degrees)
        F = target.field
        self.action = {}
        for label, mat in action.items():
            clean = {}
            for pos, e in mat.items():
                e = {k: F.of(v) for k, v in e.items() if F.of(v) != 0}
                if e:
                    clean[pos] = e
            if clean:
                self.action[label] = clean
        self.diff = {}
        for pos, e in (diff or {}).items():
            e = {k: F.of(v) for k, v in e.items() if F.of(v) != 0}
            if e:
                self.diff[pos] = e
        if check:
            bad = self.check()
            if bad:
                raise ValueError("; ".join(bad))

    def act(self, e):
        """Sparse action matrix of an arbitrary element of source."""
        A = self.target
        out = {}
        for (label, k), c in e.items():
            for pos, ent in self.action.get(label, {}).items():
                v = elem_scale(A.field, c, ent)
                if k:
                    v = A.mul(v, {("1", k): A.field.one()})
                out[pos] = elem_add(A.field, out.get(pos, {}), v)
        return {p: v for p, v in out.items() if v}

    def _identity(self):
        return {(r, r): dict(self.target.unit) for r in range(self.rank)}

    def check(self):
        bad = []
        A, B = self.target, self.source
        if A.field != B.field:
            bad.append("the two algebras must share a field")
            return bad
        if B.periodicity is not None and A.periodicity != B.periodicity:
            bad.append("periodicity degrees disagree")
            return bad
        for label, mat in self.action.items():
            if label not in B.labels:
                bad.append("action of unknown label %r" % label)
                continue
            for (r, s), e in mat.items():
                if not (0 <= r < self.rank and 0 <= s < self.rank):
                    bad.append("action entry %r out of range" % ((r, s),))
                    continue
                want = B.labels[label] + self.degrees[s] - self.degrees[r]
                if not A.is_homogeneous(e, want):
                    bad.append("action of %r at %r not of degree %d"
                               % (label, (r, s), want))
        for (r, s), e in self.diff.items():
            want = self.degrees[s] - self.degrees[r] + 1
            if not A.is_homogeneous(e, want):
                bad.append("differential entry %r not of degree %d"
                           % ((r, s), want))
        if bad:
            return bad
        if self.act(B.unit) != self._identity():
            bad.append("unit does not act by the identity")
        for l1 in B.labels:
            m1 = self.action.get(l1, {})
            for l2 in B.labels:
                prod = B.mul({(l1, 0): A.field.one()}, {(l2, 0): A.field.one()})
                lhs = self.act(prod)
                rhs = _matmul(A, m1, self.action.get(l2, {}))
                if lhs != rhs:
                    bad.append("action not multiplicative on (%r, %r)"
                               % (l1, l2))
        for label in B.labels:
            if not self._leibniz_ok(label):
                bad.append("left Leibniz rule fails on %r" % label)
        if B.curvature:
            want = {(r, r): dict(A.curvature) for r in range(self.rank)
                    if A.curvature}
            if self.act(B.curvature) != want:
                bad.append("curvatures not intertwined")
        point = self.realize(TwistedComplex(B, [0], check=False))
        bad.extend("point realization: " + s for s in point.check_axioms())
        return bad

    def _leibniz_ok(self, label):
        A, B = self.target, self.source
        F = A.field
        mat = self.action.get(label, {})
        lhs = _matmul(A, self.diff, mat)
        for (r, s), e in mat.items():
            de = A.d(e)
            if de:
                sg = F.of(1 if self.degrees[r] % 2 == 0 else -1)
                lhs[(r, s)] = elem_add(F, lhs.get((r, s), {}),
                                       elem_scale(F, sg, de))
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = self.act(B.d({(label, 0): F.one()}))
        sg = F.of(1 if B.labels[label] % 2 == 0 else -1)
        for pos, e in _matmul(A, mat, self.diff).items():
            rhs[pos] = elem_add(F, rhs.get(pos, {}), elem_scale(F, sg, e))
        return lhs == {k: v for k, v in rhs.items() if v}

    def realize(self, tc):
        """The twisted complex over source, tensored into a module over
        target.  Strictly compatible with shifts: realize(tc.shift(k))
        equals shift_module(realize(tc), k) entry for entry."""
        F = self.target.field
        nb = self.rank
        gens = [Gen((i, s), d - n, "full")
                for i, n in enumerate(tc.shifts)
                for s, d in enumerate(self.degrees)]
        D = {}
        for i, n in enumerate(tc.shifts):
            sg = F.of(1 if n % 2 == 0 else -1)
            for (r, s), e in self.diff.items():
                D[(i * nb + r, i * nb + s)] = elem_scale(F, sg, e)
        for (i, j), f in tc.twists.items():
            for (r, s), e in self.act(f).items():
                key = (i * nb + r, j * nb + s)
                D[key] = elem_add(F, D.get(key, {}), e)
        return CdgModule(self.target, gens,
                         {k: v for k, v in D.items() if v}, check=False)

    def realize_map(self, f, rsrc, rtgt):
        """Entrywise realization of a map of totalizations, through the
        action and with no signs; a strict dg functor."""
        nb = self.rank
        out = ModuleMap(rsrc, rtgt, f.degree)
        for (i, j), e in f.entries.items():
            for (r, s), ent in self.act(e).items():
                key = (i * nb + r, j * nb + s)
                out.set_entry(*key, elem_add(self.target.field,
                                             out.entry(*key), ent))
        return out


class GluedObject:
    """A twisted complex over each algebra of a bimodule, glued by a
    closed degree-0 map of modules n: tot(x) -> realize(y)."""

    def __init__(self, bim, x, y, glue=None, check=True):
        self.bim = bim
        self.x = x
        self.y = y
        self.ry = bim.realize(y)
        if glue is None:
            self.glue = ModuleMap(x.totalize(), self.ry, 0)
        else:
            self.glue = ModuleMap(x.totalize(), self.ry, glue.degree,
                                  glue.entries)
        self._corner = None
        if check:
            bad = self.check()
            if bad:
                raise ValueError("; ".join(bad))

    def check(self):
        bad = []
        if self.x.algebra is not self.bim.target:
            bad.append("first component lives over the wrong algebra")
        if self.y.algebra is not self.bim.source:
            bad.append("second component lives over the wrong algebra")
        if self.glue.entries and self.glue.degree != 0:
            bad.append("gluing map must have degree 0")
        elif not self.glue.is_closed():
            bad.append("gluing map not closed")
        return bad

    @classmethod
    def from_x(cls, bim, x):
        """Embedding of the receiving side, (x, 0, 0)."""
        return cls(bim, x, TwistedComplex(bim.source, []), check=False)

    @classmethod
    def from_y(cls, bim, y):
        """Embedding of the acting side, (0, y, 0)."""
        return cls(bim, TwistedComplex(bim.target, []), y, check=False)

    def corner(self):
        """cone(glue)[-1]: realize(y) shifted up in front of tot(x).  The
        corner of the embedded first side is tot(x) itself, that of the
        embedded second side is realize(y)[-1]."""
        if self._corner is None:
            self._corner = shift_module(cone(self.glue), -1)
        return self._corner

    def shift(self, k=1):
        """Both sides shift; the gluing entries do not move because
        realize commutes with shifts on the nose."""
        out = GluedObject(self.bim, self.x.shift(k), self.y.shift(k),
                          check=False)
        out.glue = ModuleMap(out.x.totalize(), out.ry, 0, self.glue.entries)
        return out

    def same_as(self, other):
        return (self.x.shifts == other.x.shifts
                and self.x.twists == other.x.twists
                and self.y.shifts == other.y.shifts
                and self.y.twists == other.y.twists
                and self.glue == other.glue)

    def canonical_triangle(self):
        """(into, onto, connect): the embedded second side maps in, the
        embedded first side is mapped onto, and the gluing map itself is
        the corner of the connecting morphism into the shifted embedding.
        Both consecutive composites are delta of explicit homotopies
        (triangle_homotopies)."""
        E2 = GluedObject.from_y(self.bim, self.y)
        E1 = GluedObject.from_x(self.bim, self.x)
        into = GluedMorphism(E2, self,
                             ModuleMap(E2.x.totalize(), self.x.totalize(), 0),
                             ModuleMap.identity(self.y.totalize()),
                             check=False)
        onto = GluedMorphism(self, E1,
                             ModuleMap.identity(self.x.totalize()),
                             ModuleMap(self.y.totalize(), E1.y.totalize(), 0),
                             check=False)
        S = E2.shift(1)
        connect = GluedMorphism(E1, S,
                                ModuleMap(E1.x.totalize(), S.x.totalize(), 0),
                                ModuleMap(E1.y.totalize(), S.y.totalize(), 0),
                                ModuleMap(E1.x.totalize(), S.ry, -1,
                                          self.glue.entries),
                                check=False)
        return into, onto, connect

    def triangle_homotopies(self):
        """(h_mid, h_out) with connect . onto = delta(h_mid) and
        into[1] . connect = delta(h_out): the strict chain-level
        exactness of the canonical triangle."""
        into, onto, connect = self.canonical_triangle()
        X1 = self.shift(1)
        s2 = ModuleMap(self.y.totalize(), connect.tgt.y.totalize(), -1,
                       {(i, i): dict(self.bim.source.unit)
                        for i in range(len(self.y.shifts))})
        h_mid = GluedMorphism(self, connect.tgt,
                              ModuleMap(self.x.totalize(),
                                        connect.tgt.x.totalize(), -1),
                              s2, check=False)
        s1 = ModuleMap(connect.src.x.totalize(), X1.x.totalize(), -1,
                       {(i, i): dict(self.bim.target.unit)
                        for i in range(len(self.x.shifts))})
        h_out = GluedMorphism(connect.src, X1, s1.scale(-1),
                              ModuleMap(connect.src.y.totalize(),
                                        X1.y.totalize(), -1),
                              check=False)
        return h_mid, h_out

    def corner_triangle(self):
        """(alpha, beta, gamma): the corner projects onto the first side,
        which the gluing map carries into the realized second side, which
        includes into the shifted corner.  This is the rotation of the
        mapping-cone triangle of the gluing map; see corner_homotopies for
        the strict contractions of the consecutive composites."""
        K = self.corner()
        tx = self.x.totalize()
        A = self.bim.target
        off = len(self.ry.gens)
        alpha = ModuleMap(K, tx, 0,
                          {(j, off + j): dict(A.unit)
                           for j in range(len(tx.gens))})
        beta = self.glue
        gamma = ModuleMap(self.ry, shift_module(K, 1), 0,
                          {(i, i): dict(A.unit)
                           for i in range(len(self.ry.gens))})
        return alpha, beta, gamma

    def corner_homotopies(self):
        """(h_ba, h_gb) with beta . alpha = delta(h_ba) and
        gamma . beta = delta(h_gb); the third composite
        alpha[1] . gamma is zero on the nose."""
        K = self.corner()
        A = self.bim.target
        off = len(self.ry.gens)
        h_ba = ModuleMap(K, self.ry, -1,
                         {(i, i): elem_neg(A.field, A.unit)
                          for i in range(len(self.ry.gens))})
        h_gb = ModuleMap(self.x.totalize(), shift_module(K, 1), -1,
                         {(off + j, j): dict(A.unit)
                          for j in range(len(self.x.totalize().gens))})
        return h_ba, h_gb

    def __repr__(self):
        return "GluedObject(%r / %r, %d gluing entries)" % (
            self.x, self.y, len(self.glue.entries))


class GluedMorphism:
    """Triple (f1, f2, corner g) between glued objects; the corner has
    degree one less and witnesses the square against the gluing maps.
    Faithfully a block-triangular map of the corner modules (block)."""

    def __init__(self, src, tgt, f1, f2, corner=None, degree=None,
                 check=True):
        self.src = src
        self.tgt = tgt
        self.f1 = f1
        self.f2 = f2
        self.degree = f1.degree if degree is None else degree
        if corner is None:
            corner = ModuleMap(src.x.totalize(), tgt.ry, self.degree - 1)
        self.g = corner
        if check:
            bad = self.check()
            if bad:
                raise ValueError("; ".join(bad))

    def check(self):
        bad = []
        for f, want, what in ((self.f1, self.degree, "first component"),
                              (self.f2, self.degree, "second component"),
                              (self.g, self.degree - 1, "corner")):
            if f.entries and f.degree != want:
                bad.append("%s must have degree %d" % (what, want))
        return bad

    def _rf2(self):
        return self.src.bim.realize_map(self.f2, self.src.ry, self.tgt.ry)

    def delta(self):
        corner = self.g.delta().scale(-1)
        corner = corner.add(self._rf2().compose(self.src.glue))
        corner = corner.sub(self.tgt.glue.compose(self.f1))
        return GluedMorphism(self.src, self.tgt, self.f1.delta(),
                             self.f2.delta(), corner,
                             degree=self.degree + 1, check=False)

    def is_closed(self):
        d = self.delta()
        return d.f1.is_zero() and d.f2.is_zero() and d.g.is_zero()

    def is_zero(self):
        return self.f1.is_zero() and self.f2.is_zero() and self.g.is_zero()

    def compose(self, other):
        """self after other."""
        sign = 1 if self.degree % 2 == 0 else -1
        corner = self._rf2().compose(other.g).scale(sign)
        corner = corner.add(self.g.compose(other.f1))
        return GluedMorphism(other.src, self.tgt,
                             self.f1.compose(other.f1),
                             self.f2.compose(other.f2), corner,
                             degree=self.degree + other.degree, check=False)

    def scale(self, c):
        return GluedMorphism(self.src, self.tgt, self.f1.scale(c),
                             self.f2.scale(c), self.g.scale(c),
                             degree=self.degree, check=False)

    def add(self, other):
        return GluedMorphism(self.src, self.tgt, self.f1.add(other.f1),
                             self.f2.add(other.f2), self.g.add(other.g),
                             degree=self.degree, check=False)

    @classmethod
    def identity(cls, obj):
        return cls(obj, obj, ModuleMap.identity(obj.x.totalize()),
                   ModuleMap.identity(obj.y.totalize()), check=False)

    def shift(self, k=1):
        S, T = self.src.shift(k), self.tgt.shift(k)
        F = self.src.bim.target.field
        def moved(f, source, target, sign):
            out = ModuleMap(source, target, f.degree)
            s = F.of(1 if sign % 2 == 0 else -1)
            for (i, j), e in f.entries.items():
                out.set_entry(i, j, elem_scale(F, s, e))
            return out
        m = self.degree
        return GluedMorphism(
            S, T,
            moved(self.f1, S.x.totalize(), T.x.totalize(), k * m),
            moved(self.f2, S.y.totalize(), T.y.totalize(), k * m),
            moved(self.g, S.x.totalize(), T.ry, k * (m - 1)),
            degree=m, check=False)

    def block(self):
        """The triple as one map corner(src) -> corner(tgt): f2 realizes
        into the shifted diagonal with the Koszul sign of the shift, the
        corner g sits above f1."""
        Ks, Kt = self.src.corner(), self.tgt.corner()
        out = ModuleMap(Ks, Kt, self.degree)
        F = self.src.bim.target.field
        sign = F.of(1 if self.degree % 2 == 0 else -1)
        off_t = len(self.tgt.ry.gens)
        off_s = len(self.src.ry.gens)
        for (i, j), e in self._rf2().entries.items():
            out.set_entry(i, j, elem_scale(F, sign, e))
        for (i, j), e in self.g.entries.items():
            out.set_entry(i, off_s + j, e)
        for (i, j), e in self.f1.entries.items():
            out.set_entry(off_t + i, off_s + j, e)
        return out

    def __repr__(self):
        return "GluedMorphism(degree %d, %d/%d/%d entries)" % (
            self.degree, len(self.f1.entries), len(self.f2.entries),
            len(self.g.entries))


def glued_cone(t):
    """Cone of a closed degree-0 glued morphism: the cone on each side,
    glued by the two gluing maps on the diagonal with the corner homotopy,
    negated, connecting them.  Closedness of the resulting gluing map is
    exactly closedness of t."""
    if t.degree != 0 or not t.is_closed():
        raise ValueError("glued cone needs a closed degree-0 morphism")
    bim = t.src.bim
    cx = twisted_cone(t.f1, t.src.x, t.tgt.x)
    cy = twisted_cone(t.f2, t.src.y, t.tgt.y)
    out = GluedObject(bim, cx, cy, check=False)
    nb = bim.rank
    off_row = len(t.src.y.shifts) * nb
    off_col = len(t.src.x.shifts)
    glue = ModuleMap(cx.totalize(), out.ry, 0)
    for (i, j), e in t.src.glue.entries.items():
        glue.set_entry(i, j, e)
    for (i, j), e in t.tgt.glue.entries.items():
        glue.set_entry(off_row + i, off_col + j, e)
    for (i, j), e in t.g.entries.items():
        glue.set_entry(off_row + i, j, elem_scale(bim.target.field,
                                                  bim.target.field.of(-1), e))
    out.glue = glue
    bad = out.check()
    if bad:
        raise ValueError("; ".join(bad))
    return out


def glued_cone_maps(t, C=None):
    """(inclusion of the target, projection onto the shifted source) for
    the glued cone; both are closed with zero corner, and the composite
    vanishes."""
    C = C or glued_cone(t)
    inc_x, prj_x = cone_summand_maps(t.f1, t.src.x, t.tgt.x, C.x)
    inc_y, prj_y = cone_summand_maps(t.f2, t.src.y, t.tgt.y, C.y)
    S1 = t.src.shift(1)
    inc = GluedMorphism(t.tgt, C, inc_x, inc_y, check=False)
    prj = GluedMorphism(
        C, S1,
        ModuleMap(C.x.totalize(), S1.x.totalize(), 0, prj_x.entries),
        ModuleMap(C.y.totalize(), S1.y.totalize(), 0, prj_y.entries),
        check=False)
    return inc, prj


def random_hom(rng, source, target, degree):
    """Random module map of the given degree, not closed in general."""
    A = target.algebra
    out = ModuleMap(source, target, degree)
    for i, gi in enumerate(target.gens):
        for j, gj in enumerate(source.gens):
            e = A.random_element(rng, gj.degree - gi.degree + degree)
            if e:
                out.set_entry(i, j, e)
    return out


def random_closed_hom(rng, source, target, degree, window=None):
    """Random closed module map, sampled from the kernel of the
    materialized hom differential."""
    if window is None:
        window = Window(degree - 2, degree + 2)
    H = MaterializedHom(source, target, window)
    ker = H.complex.d(degree).kernel()
    F = source.algebra.field
    if ker.ncols == 0:
        return ModuleMap(source, target, degree)
    coeffs = [F.of(rng.randrange(F.p)) if F.p is not None
              else F.of(rng.randrange(-2, 3)) for _ in range(ker.ncols)]
    v = ker @ Matrix(F, ker.ncols, 1, [[c] for c in coeffs])
    return H.map_from_vector(degree, v)


def random_glued(bim, rng, steps=2):
    """Random glued object: a random twisted complex on each side and a
    closed gluing map sampled from the materialized hom kernel."""
    from .twist import random_twisted
    x = random_twisted(bim.target, rng, steps=steps)
    y = random_twisted(bim.source, rng, steps=steps)
    glue = random_closed_hom(rng, x.totalize(), bim.realize(y), 0)
    return GluedObject(bim, x, y, glue)


def random_glued_morphism(rng, src, tgt, degree=0):
    """Random triple of the given degree, with no closedness imposed."""
    return GluedMorphism(
        src, tgt,
        random_hom(rng, src.x.totalize(), tgt.x.totalize(), degree),
        random_hom(rng, src.y.totalize(), tgt.y.totalize(), degree),
        random_hom(rng, src.x.totalize(), tgt.ry, degree - 1),
        degree=degree, check=False)


def random_closed_glued_morphism(rng, src, tgt, degree=0):
    """Random closed glued morphism: delta of a random triple one degree
    down, plus the identity when source and target coincide and the
    degree is 0."""
    t = random_glued_morphism(rng, src, tgt, degree - 1).delta()
    if src is tgt and degree == 0:
        t = t.add(GluedMorphism.identity(src))
    return t
