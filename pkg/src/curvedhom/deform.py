"""Square-zero deformations of dg algebras along degree-2 cochains.

Given a dg algebra A and a cochain mu with components mu0 (an element of
degree 2), mu1 (arity 1, degree 1) and mu2 (arity 2, degree 0), the
deformation A_eps is A + tA with t central of degree 0 and t^2 = 0,

    product        (a + tb)(a' + tb') = aa' + t(ba' + ab' + mu2(a, a'))
    differential   d(a + tb) = da + t(mu1(a) + db)
    curvature      c = t mu0
    unit           1 - t mu2(1, 1)

The axioms of a curved dg algebra for A_eps unwind, component by component,
to the cocycle equations for mu (see hochschild.component_residuals); the
test suite checks the equivalence both ways on random cochains.

Over A_eps the distinguished two-generator module Gamma (one free generator
g0 in degree 0, one generator g1 in degree 1 killed by t) has differential

    d(g0) = g1,   d(g1) = -g0 * (t mu0)

and its endomorphism complex together with the maps g1, g2 below realizes
A up to quasi-isomorphism; the projection onto the reduced (0,0) entry is a
strict dg algebra retraction.

The kernel, image and cokernel of multiplication by t are honest dg modules
over A, assembled here entrywise from the generator kinds, along with the
four-term exact sequence connecting them and the degree-2 connecting
composite iota built from its two generator-split extensions.
"""

from __future__ import annotations

from .dgcore import (CdgModule, DgAlgebra, Gen, MaterializedModule, ModuleMap,
                     T_PREFIX, elem_add, elem_neg, elem_scale, materialize_map)
from .errors import TypeMismatch


def check_cdg(algebra):
    """Violated curved dg algebra axioms of a deformation (empty is good)."""
    return algebra.check()


class Deformation:
    """A dg algebra together with a degree-2 cochain and the square-zero
    extension they generate."""

    def __init__(self, base, mu):
        if mu.total != 2:
            raise ValueError("deformation cochain must have total degree 2")
        if any(k > 2 for k in mu.arities()):
            raise ValueError("components of arity > 2 do not define a "
                             "square-zero deformation")
        if any(l.startswith(T_PREFIX) for l in base.labels):
            raise ValueError("base labels may not start with %r" % T_PREFIX)
        self.base = base
        self.mu = mu
        self.algebra = self._build()
        self._gamma = None

    def mu0(self):
        return self.mu.ev([])

    def mu1(self, a):
        return self.mu.ev([a])

    def mu2(self, a, b):
        return self.mu.ev([a, b])

    def _build(self):
        A = self.base
        F = A.field

        def embed(e):
            return dict(e)

        def t_of(e):
            return {(T_PREFIX + l, x): c for (l, x), c in e.items()}

        labels = dict(A.labels)
        for l, d in A.labels.items():
            labels[T_PREFIX + l] = d

        mul = {}
        for l1 in A.labels:
            for l2 in A.labels:
                b1 = {(l1, 0): F.one()}
                b2 = {(l2, 0): F.one()}
                prod = elem_add(F, embed(A.mul(b1, b2)), t_of(self.mu2(b1, b2)))
                if prod:
                    mul[(l1, l2)] = prod
                tprod = t_of(A.mul(b1, b2))
                if tprod:
                    mul[(T_PREFIX + l1, l2)] = tprod
                    mul[(l1, T_PREFIX + l2)] = dict(tprod)
        diff = {}
        for l in A.labels:
            b = {(l, 0): F.one()}
            dl = elem_add(F, embed(A.d(b)), t_of(self.mu1(b)))
            if dl:
                diff[l] = dl
            tdl = t_of(A.d(b))
            if tdl:
                diff[T_PREFIX + l] = tdl
        unit = elem_add(F, embed(A.unit),
                        elem_neg(F, t_of(self.mu2(A.unit, A.unit))))
        return DgAlgebra(F, labels, mul, diff_table=diff, unit=unit,
                         periodicity=A.periodicity, curvature=t_of(self.mu0()),
                         base=A)

    # -- the distinguished module --

    def gamma(self):
        """Two-generator module over the extension: a free generator in
        degree 0 and a t-killed one in degree 1."""
        if self._gamma is None:
            Aeps = self.algebra
            F = Aeps.field
            D = {(1, 0): dict(self.base.unit)}
            c = Aeps.curvature
            if c:
                D[(0, 1)] = elem_neg(F, c)
            self._gamma = CdgModule(Aeps, [Gen("g0", 0, "full"),
                                           Gen("g1", 1, "quot")], D)
        return self._gamma

    # -- the quasi-inverse components into End(Gamma) --

    def g1(self, a):
        """Linear component: a base element as an endomorphism of Gamma."""
        A = self.base
        d = A.deg_of(a)
        if d is None:
            return ModuleMap(self.gamma(), self.gamma(), 0)
        F = A.field
        sign = F.of(1 if d % 2 == 0 else -1)
        Aeps = self.algebra
        entries = {(0, 0): Aeps.embed_base(a),
                   (0, 1): elem_scale(F, sign, Aeps.t_times(self.mu1(a))),
                   (1, 1): elem_scale(F, sign, dict(a))}
        return ModuleMap(self.gamma(), self.gamma(), d, entries)

    def g2(self, a, b):
        """Quadratic component, concentrated in the corner entry."""
        A = self.base
        da, db = A.deg_of(a), A.deg_of(b)
        if da is None or db is None:
            return ModuleMap(self.gamma(), self.gamma(), -1)
        F = A.field
        sign = F.of(1 if (da + db + 1) % 2 == 0 else -1)
        Aeps = self.algebra
        entries = {(0, 1): elem_scale(F, sign, Aeps.t_times(self.mu2(a, b)))}
        return ModuleMap(self.gamma(), self.gamma(), da + db - 1, entries)

    def projection(self, f):
        """Reduced (0, 0) entry of an endomorphism of Gamma; a strict dg
        algebra map onto the base with projection(g1(a)) = a."""
        return self.algebra.reduce_mod_t(f.entry(0, 0))


# --- multiplication-by-t functors ---

def _require_t_module(module):
    if module.algebra.base is None:
        raise TypeMismatch("module is not over a square-zero extension")


def im_t(module):
    """The submodule M t, free over the base on the full generators."""
    _require_t_module(module)
    A = module.algebra
    full = [i for i, g in enumerate(module.gens) if g.kind == "full"]
    pos = {i: p for p, i in enumerate(full)}
    gens = [Gen(module.gens[i].name, module.gens[i].degree, "full") for i in full]
    D = {}
    for (i, j), e in module.D.items():
        if i in pos and j in pos:
            r = A.reduce_mod_t(e)
            if r:
                D[(pos[i], pos[j])] = r
    return CdgModule(A.base, gens, D)


def coker_t(module):
    """M / M t, free over the base on all generators."""
    _require_t_module(module)
    A = module.algebra
    gens = [Gen(g.name, g.degree, "full") for g in module.gens]
    D = {}
    for (i, j), e in module.D.items():
        gi, gj = module.gens[i], module.gens[j]
        if gi.kind == "full" and gj.kind == "quot":
            continue  # a multiple of t dies in the quotient
        r = A.reduce_mod_t(e) if gi.kind == "full" else dict(e)
        if r:
            D[(i, j)] = r
    return CdgModule(A.base, gens, D)


def ker_t(module):
    """The t-torsion submodule, generated by g*t for full generators g and
    by the quot generators themselves."""
    _require_t_module(module)
    A = module.algebra
    gens = []
    for g in module.gens:
        name = ("kappa", g.name) if g.kind == "full" else g.name
        gens.append(Gen(name, g.degree, "full"))
    D = {}
    for (i, j), e in module.D.items():
        gi, gj = module.gens[i], module.gens[j]
        if gi.kind == "full" and gj.kind == "full":
            r = A.reduce_mod_t(e)
        elif gi.kind == "full" and gj.kind == "quot":
            r = A.t_divide(e)
        elif gi.kind == "quot" and gj.kind == "full":
            continue  # kappa columns only hit kappa rows
        else:
            r = dict(e)
        if r:
            D[(i, j)] = r
    return CdgModule(A.base, gens, D)


def t_sequence_maps(module):
    """The maps of the four-term sequence

        0 -> Im t -> Ker t -> Coker t -> Im t -> 0

    as chain maps over the base: (inclusion, middle, multiplication-by-t).
    """
    _require_t_module(module)
    A = module.algebra
    unit = A.base.unit
    I, K, C = im_t(module), ker_t(module), coker_t(module)
    full = [i for i, g in enumerate(module.gens) if g.kind == "full"]
    pos = {i: p for p, i in enumerate(full)}

    delta1 = ModuleMap(I, K, 0)
    for i in full:
        delta1.set_entry(i, pos[i], dict(unit))

    alpha = ModuleMap(K, C, 0)
    for i, g in enumerate(module.gens):
        if g.kind == "quot":
            alpha.set_entry(i, i, dict(unit))

    delta2 = ModuleMap(C, I, 0)
    for i in full:
        delta2.set_entry(pos[i], i, dict(unit))

    return delta1, alpha, delta2


def four_term_exactness(module, window):
    """Degreewise exactness of 0 -> Im t -> Ker t -> Coker t -> Im t -> 0
    after materializing over the base.  Exactness of the sequence involves
    only the maps, not the differentials, so every window degree is checked.
    Returns violation strings (empty is exact)."""
    _require_t_module(module)
    I, K, C = im_t(module), ker_t(module), coker_t(module)
    d1, al, d2 = t_sequence_maps(module)
    mi = MaterializedModule(I, window)
    mk = MaterializedModule(K, window)
    mc = MaterializedModule(C, window)
    f1 = materialize_map(d1, mi, mk)
    fa = materialize_map(al, mk, mc)
    f2 = materialize_map(d2, mc, mi)
    bad = []
    if not al.compose(d1).is_zero():
        bad.append("middle map . inclusion nonzero")
    if not d2.compose(al).is_zero():
        bad.append("multiplication-by-t . middle map nonzero")
    for n in window.degrees():
        di, dk, dc = mi.space.dim(n), mk.space.dim(n), mc.space.dim(n)
        r1 = f1.block(n).rank()
        ra = fa.block(n).rank()
        r2 = f2.block(n).rank()
        if r1 != di:
            bad.append("inclusion not injective in degree %d" % n)
        if r1 + ra != dk:
            bad.append("not exact at Ker t in degree %d" % n)
        if ra + r2 != dc:
            bad.append("not exact at Coker t in degree %d" % n)
        if r2 != di:
            bad.append("multiplication by t not surjective in degree %d" % n)
    return bad


def iota(module):
    """Connecting composite of the two generator-split extensions

        0 -> Im t -> Ker t -> Q -> 0,   0 -> Q -> Coker t -> Im t -> 0

    (Q the span of the quot generators): a closed degree-2 element of
    End(Im t), with entries sum_q (t-divided full<-quot) * (quot<-full)."""
    _require_t_module(module)
    A = module.algebra
    B = A.base
    F = A.field
    I = im_t(module)
    full = [i for i, g in enumerate(module.gens) if g.kind == "full"]
    pos = {i: p for p, i in enumerate(full)}
    quot = [q for q, g in enumerate(module.gens) if g.kind == "quot"]
    out = ModuleMap(I, I, 2)
    for i in full:
        for j in full:
            acc = {}
            for q in quot:
                e1 = module.entry(i, q)
                e2 = module.entry(q, j)
                if e1 and e2:
                    acc = elem_add(F, acc, B.mul(A.t_divide(e1), e2))
            if acc:
                out.set_entry(pos[i], pos[j], acc)
    return out
