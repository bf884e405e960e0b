"""One-sided twisted complexes over a dg algebra.

A twisted complex is a finite list of integer shifts n_i together with
twisting elements f_ij in A of degree n_i - n_j + 1, nonzero only below the
diagonal (i > j), subject to the Maurer-Cartan equation

    d f_ij + (-1)^{n_i} sum_k f_ik f_kj = 0.

The totalization is the module on generators e_i of degree -n_i with the
twists as differential entries; the Maurer-Cartan equation is exactly the
module axiom there, which is how check() verifies it.  Morphisms of twisted
complexes are module maps between totalizations, built from blocks with
build_map.

Strict lower-triangularity makes cones stay inside the class: the cone of a
closed degree-0 map glues the shifted source in front of the target
(twisted_cone).  random_twisted grows random examples by iterating that
construction with closed maps sampled from the kernel of the materialized
hom differential.
"""

from __future__ import annotations

from .dgcore import (CdgModule, Gen, MaterializedHom, ModuleMap, elem_neg,
                     elem_scale, shift_module)
from .exactalg import Matrix, Window


class TwistedComplex:

    def __init__(self, algebra, shifts, twists=None, check=True):
        self.algebra = algebra
        self.shifts = list(shifts)
        self.twists = {}
        for (i, j), e in (twists or {}).items():
            if i <= j:
                raise ValueError("twist (%d, %d) not strictly lower" % (i, j))
            e = {k: algebra.field.of(v) for k, v in e.items()
                 if algebra.field.of(v) != 0}
            if not e:
                continue
            want = self.shifts[i] - self.shifts[j] + 1
            if not algebra.is_homogeneous(e, want):
                raise ValueError("twist (%d, %d) not of degree %d"
                                 % (i, j, want))
            self.twists[(i, j)] = e
        self._tot = None
        if check:
            bad = self.check()
            if bad:
                raise ValueError("; ".join(bad))

    def n_summands(self):
        return len(self.shifts)

    def totalize(self):
        if self._tot is None:
            gens = [Gen(("e", i), -n, "full")
                    for i, n in enumerate(self.shifts)]
            self._tot = CdgModule(self.algebra, gens, dict(self.twists),
                                  check=False)
        return self._tot

    def check(self):
        """Maurer-Cartan violations, via the module axioms of the
        totalization."""
        return self.totalize().check_axioms()

    def shift(self, k=1):
        sign = self.algebra.field.of(1 if k % 2 == 0 else -1)
        twists = {key: elem_scale(self.algebra.field, sign, e)
                  for key, e in self.twists.items()}
        return TwistedComplex(self.algebra, [n + k for n in self.shifts],
                              twists, check=False)

    def build_map(self, other, degree, blocks):
        """ModuleMap of totalizations from blocks[(i, j)]: the coefficient
        of other's summand i on this complex's summand j."""
        return ModuleMap(self.totalize(), other.totalize(), degree,
                         dict(blocks))

    def __repr__(self):
        return "TwistedComplex(shifts=%r, %d twists)" % (
            self.shifts, len(self.twists))


def summand(algebra, n):
    """The one-summand complex A[n]."""
    return TwistedComplex(algebra, [n])


def tot_shift_compatible(x, k=1):
    """tot(X[k]) coincides with tot(X)[k] on the nose."""
    return x.shift(k).totalize().same_shape(shift_module(x.totalize(), k))


def twisted_cone(phi, src, tgt):
    """Cone of a closed degree-0 morphism as a twisted complex: shifted
    source summands in front, target behind, the map in the corner."""
    if phi.degree != 0 or not phi.is_closed():
        raise ValueError("cone needs a closed degree-0 morphism")
    F = src.algebra.field
    ns = len(src.shifts)
    shifts = [n + 1 for n in src.shifts] + list(tgt.shifts)
    twists = {}
    for (i, j), e in src.twists.items():
        twists[(i, j)] = elem_neg(F, e)
    for (i, j), e in tgt.twists.items():
        twists[(ns + i, ns + j)] = e
    for (i, j), e in phi.entries.items():
        twists[(ns + i, j)] = e
    return TwistedComplex(src.algebra, shifts, twists, check=False)


def cone_summand_maps(phi, src, tgt, c=None):
    """(inclusion of tgt, projection onto src[1]) for the cone of phi."""
    if c is None:
        c = twisted_cone(phi, src, tgt)
    F = src.algebra.field
    ns = len(src.shifts)
    inc = ModuleMap(tgt.totalize(), c.totalize(), 0,
                    {(ns + i, i): dict(src.algebra.unit)
                     for i in range(len(tgt.shifts))})
    prj = ModuleMap(c.totalize(), src.shift(1).totalize(), 0,
                    {(i, i): dict(src.algebra.unit) for i in range(ns)})
    return inc, prj


def random_closed_map(rng, src, tgt, degree, window=None):
    """Random closed ModuleMap tot(src) -> tot(tgt) of the given degree,
    sampled from the kernel of the hom differential."""
    if window is None:
        window = Window(degree - 2, degree + 2)
    H = MaterializedHom(src.totalize(), tgt.totalize(), window)
    ker = H.complex.d(degree).kernel()
    F = src.algebra.field
    if ker.ncols == 0:
        return ModuleMap(src.totalize(), tgt.totalize(), degree)
    coeffs = [F.of(rng.randrange(F.p)) if F.p is not None
              else F.of(rng.randrange(-2, 3)) for _ in range(ker.ncols)]
    v = ker @ Matrix(F, ker.ncols, 1, [[c] for c in coeffs])
    return H.map_from_vector(degree, v)


def random_twisted(algebra, rng, steps=2, shift_range=(-2, 3)):
    """Random twisted complex grown by iterated cones of random closed
    maps from single shifted summands."""
    x = summand(algebra, rng.randrange(*shift_range))
    for _ in range(steps):
        s = summand(algebra, rng.randrange(*shift_range))
        phi = random_closed_map(rng, s, x, 0)
        x = twisted_cone(phi, s, x)
    bad = x.check()
    assert not bad, bad
    return x
