"""Graded algebras with exact coefficients and their curved dg modules.

An algebra here is a finite list of labelled basis elements with a
multiplication table, an optional differential, an optional curvature
element, and optionally an invertible central generator u of even degree
adjoined.  Bases then look like label * u^exp, so every degree stays finite
dimensional without truncation and windows are only needed when a complex
is materialized.

Modules carry two kinds of generators: "full" ones spanning a free rank-one
summand over the algebra, and "quot" ones spanning a copy of the algebra
modulo its distinguished square-zero central element t (these only make
sense over an algebra built as a square-zero extension; see deform).
Differentials and homomorphisms are matrices of coefficients whose entry
types are forced by the generator kinds:

    full <- full : any coefficient
    quot <- any  : coefficient modulo t (stored reduced, no t labels)
    full <- quot : a multiple of t (enforced)

Entry arithmetic lifts to the algebra, multiplies there and projects back
to the entry type; square-zero-ness of t makes the result lift independent.
"""

from __future__ import annotations

from collections import namedtuple

from .errors import NotFiniteDimensional, TypeMismatch, VerificationFailed, WindowIncomplete
from .exactalg import (CochainComplex, GradedLinearMap, GradedVectorSpace,
                       Matrix, Window)

T_PREFIX = "t."


# --- elements: dict[(label, exp)] -> coefficient, zero coefficients dropped ---

def elem_add(field, x, y):
    out = dict(x)
    for k, c in y.items():
        s = field.add(out.get(k, field.zero()), c)
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out

def elem_scale(field, c, x):
    if c == 0:
        return {}
    return {k: field.mul(c, v) for k, v in x.items()}

def elem_neg(field, x):
    return {k: field.neg(v) for k, v in x.items()}

def elem_sub(field, x, y):
    return elem_add(field, x, elem_neg(field, y))


class DgAlgebra:
    """Finite-basis graded algebra, possibly curved, possibly periodic.

    labels       -- dict basis label -> internal degree
    unit         -- element acting as two-sided identity
    mul_table    -- dict (label, label) -> element; missing pairs multiply to 0
    diff_table   -- dict label -> element; missing labels have d = 0
    periodicity  -- even degree of an adjoined invertible central u, or None
    curvature    -- closed degree-2 element c with d^2 = [c, -]
    base         -- for square-zero extensions: the underlying algebra whose
                    labels are a subset of ours, the rest being t.<label>
    """

    def __init__(self, field, labels, mul_table, diff_table=None, unit=None,
                 periodicity=None, curvature=None, base=None):
        self.field = field
        self.labels = dict(labels)
        self.mul_table = {k: dict(v) for k, v in mul_table.items()}
        self.diff_table = {k: dict(v) for k, v in (diff_table or {}).items()}
        self.unit = dict(unit) if unit is not None else {("1", 0): field.one()}
        if periodicity is not None and periodicity % 2 != 0:
            raise ValueError("periodicity generator must have even degree")
        self.periodicity = periodicity
        self.curvature = dict(curvature) if curvature else {}
        self.base = base

    # -- element plumbing --

    def of(self, x):
        """Validate and normalize an element given as {(label, exp): coeff}."""
        out = {}
        for (lab, exp), c in x.items():
            if lab not in self.labels:
                raise KeyError("unknown basis label %r" % (lab,))
            if exp != 0 and self.periodicity is None:
                raise ValueError("nonzero u-power in a non-periodic algebra")
            c = self.field.of(c)
            if c != 0:
                out[(lab, exp)] = c
        return out

    def deg(self, key):
        lab, exp = key
        return self.labels[lab] + exp * (self.periodicity or 0)

    def deg_of(self, x):
        """Degree of a homogeneous element, None for zero."""
        degs = {self.deg(k) for k in x}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous element %r" % (x,))
        return degs.pop()

    def is_homogeneous(self, x, degree=None):
        try:
            d = self.deg_of(x)
        except ValueError:
            return False
        return d is None or degree is None or d == degree

    def mul(self, x, y):
        out = {}
        F = self.field
        for (l1, e1), c1 in x.items():
            for (l2, e2), c2 in y.items():
                prod = self.mul_table.get((l1, l2))
                if not prod:
                    continue
                c = F.mul(c1, c2)
                for (l, e), cv in prod.items():
                    k = (l, e + e1 + e2)
                    s = F.add(out.get(k, F.zero()), F.mul(c, cv))
                    if s == 0:
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    def d(self, x):
        out = {}
        F = self.field
        for (l, e), c in x.items():
            dl = self.diff_table.get(l)
            if not dl:
                continue
            for (l2, e2), cv in dl.items():
                k = (l2, e2 + e)
                s = F.add(out.get(k, F.zero()), F.mul(c, cv))
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    def basis_in_degree(self, n):
        """All basis pairs (label, exp) of degree n; finite by construction."""
        out = []
        for lab in sorted(self.labels):
            d = self.labels[lab]
            if self.periodicity is None:
                if d == n:
                    out.append((lab, 0))
            else:
                if (n - d) % self.periodicity == 0:
                    out.append((lab, (n - d) // self.periodicity))
        return out

    def degrees_with_basis(self):
        """Sorted degrees carrying basis elements; None when unbounded."""
        if self.periodicity is not None and self.labels:
            return None
        return sorted({d for d in self.labels.values()})

    def random_element(self, rng, degree):
        basis = self.basis_in_degree(degree)
        F = self.field
        out = {}
        for b in basis:
            c = F.of(rng.randrange(F.p)) if F.p is not None else F.of(rng.randrange(-3, 4))
            if c != 0:
                out[b] = c
        return out

    # -- square-zero extension plumbing (t-structure) --

    def _need_base(self):
        if self.base is None:
            raise TypeMismatch("algebra has no distinguished square-zero element t")

    def embed_base(self, x):
        """Base element viewed in the extension (labels coincide)."""
        self._need_base()
        return dict(x)

    def t_times(self, x):
        """t * (base element), as an element of the extension."""
        self._need_base()
        return {(T_PREFIX + l, e): c for (l, e), c in x.items()}

    def reduce_mod_t(self, x):
        """Image in the base algebra; drops every t.<label> term."""
        self._need_base()
        return {(l, e): c for (l, e), c in x.items() if not l.startswith(T_PREFIX)}

    def t_part(self, x):
        """The y with x = embed(reduce(x)) + t*y."""
        self._need_base()
        return {(l[len(T_PREFIX):], e): c for (l, e), c in x.items()
                if l.startswith(T_PREFIX)}

    def is_t_multiple(self, x):
        self._need_base()
        return not self.reduce_mod_t(x)

    def t_divide(self, x):
        self._need_base()
        if not self.is_t_multiple(x):
            raise TypeMismatch("element is not divisible by t: %r" % (x,))
        return self.t_part(x)

    def base_d(self, x):
        """Differential of the base algebra (used for reduced entries)."""
        self._need_base()
        return self.base.d(x)

    # -- display / parsing (used by the CLI and reports) --

    def show_elem(self, x):
        if not x:
            return "0"
        parts = []
        for (l, e) in sorted(x):
            c = x[(l, e)]
            key = l if e == 0 else "%s@%d" % (l, e)
            parts.append("%s*%s" % (self.field.show(c), key))
        return " + ".join(parts)

    def parse_elem(self, data):
        """Element from JSON form {"label" or "label@exp": coeff-or-string}."""
        out = {}
        for key, c in data.items():
            if "@" in key:
                lab, exp = key.rsplit("@", 1)
                exp = int(exp)
            else:
                lab, exp = key, 0
            out[(lab, exp)] = self.field.parse(c)
        return self.of(out)

    def elem_to_json(self, x):
        out = {}
        for (l, e) in sorted(x):
            key = l if e == 0 else "%s@%d" % (l, e)
            out[key] = self.field.show(x[(l, e)])
        return out

    # -- structure checks --

    def check(self):
        """List of violated axioms (empty list means the algebra is valid)."""
        bad = []
        F = self.field
        for (l1, l2), prod in sorted(self.mul_table.items()):
            want = self.labels[l1] + self.labels[l2]
            if not self.is_homogeneous(prod, want):
                bad.append("product %s*%s not homogeneous of degree %d" % (l1, l2, want))
        for l, dl in sorted(self.diff_table.items()):
            if not self.is_homogeneous(dl, self.labels[l] + 1):
                bad.append("d(%s) not homogeneous of degree %d" % (l, self.labels[l] + 1))
        if self.curvature and not self.is_homogeneous(self.curvature, 2):
            bad.append("curvature not homogeneous of degree 2")
        if self.deg_of(self.unit) not in (None, 0):
            bad.append("unit not of degree 0")
        for l in sorted(self.labels):
            b = {(l, 0): F.one()}
            if self.mul(self.unit, b) != b:
                bad.append("unit fails on the left of %s" % l)
            if self.mul(b, self.unit) != b:
                bad.append("unit fails on the right of %s" % l)
        labs = sorted(self.labels)
        for l1 in labs:
            for l2 in labs:
                for l3 in labs:
                    a = {(l1, 0): F.one()}
                    b = {(l2, 0): F.one()}
                    c = {(l3, 0): F.one()}
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        bad.append("associativity fails on (%s, %s, %s)" % (l1, l2, l3))
        for l1 in labs:
            for l2 in labs:
                a = {(l1, 0): F.one()}
                b = {(l2, 0): F.one()}
                lhs = self.d(self.mul(a, b))
                sign = F.one() if self.labels[l1] % 2 == 0 else F.neg(F.one())
                rhs = elem_add(F, self.mul(self.d(a), b),
                               elem_scale(F, sign, self.mul(a, self.d(b))))
                if lhs != rhs:
                    bad.append("Leibniz fails on (%s, %s)" % (l1, l2))
        for l in labs:
            a = {(l, 0): F.one()}
            lhs = self.d(self.d(a))
            rhs = elem_sub(F, self.mul(self.curvature, a), self.mul(a, self.curvature))
            if lhs != rhs:
                bad.append("d^2 != [c, -] on %s" % l)
        if self.d(self.curvature):
            bad.append("curvature is not closed")
        return bad

    def assert_valid(self):
        bad = self.check()
        if bad:
            raise VerificationFailed("; ".join(bad))


def typed_mul(algebra, kind_row_a, a, kind_row_b, b):
    """Product of typed entries a (row kind kind_row_a) and b, projected to
    the row type of a.  Lift independence holds because t^2 = 0."""
    x = a if kind_row_a == "full" else algebra.embed_base(a)
    y = b if kind_row_b == "full" else algebra.embed_base(b)
    p = algebra.mul(x, y)
    return p if kind_row_a == "full" else algebra.reduce_mod_t(p)


def entry_d(algebra, kind_row, a):
    return algebra.d(a) if kind_row == "full" else algebra.base_d(a)


Gen = namedtuple("Gen", "name degree kind")


class CdgModule:
    """Right module over a DgAlgebra presented by generators and a
    differential matrix D with d(g_j) = sum_i g_i * D[i, j]."""

    def __init__(self, algebra, gens, D=None, check=True):
        self.algebra = algebra
        self.gens = [Gen(*g) if not isinstance(g, Gen) else g for g in gens]
        self.D = {}
        for (i, j), e in (D or {}).items():
            self.set_entry(i, j, e)
        if check:
            self.assert_valid()

    def set_entry(self, i, j, e):
        e = self._normalize_entry(i, j, e)
        if e:
            self.D[(i, j)] = e
        else:
            self.D.pop((i, j), None)

    def _normalize_entry(self, i, j, e):
        gi, gj = self.gens[i], self.gens[j]
        A = self.algebra
        if gi.kind == "quot" or gj.kind == "quot":
            A._need_base()
        if gi.kind == "quot":
            e = {k: v for k, v in e.items() if not k[0].startswith(T_PREFIX)}
        elif gj.kind == "quot" and e and not A.is_t_multiple(e):
            raise TypeMismatch("entry (%d, %d) from a quot generator into a "
                               "full one must be a multiple of t" % (i, j))
        return {k: A.field.of(v) for k, v in e.items() if A.field.of(v) != 0}

    def entry(self, i, j):
        return self.D.get((i, j), {})

    def n_gens(self):
        return len(self.gens)

    def kinds(self):
        return [g.kind for g in self.gens]

    def compose_D(self, E1, E2):
        """Matrix product of two typed entry matrices over this module's gens."""
        out = {}
        F = self.algebra.field
        for (i, j), a in E1.items():
            for (jj, k), b in E2.items():
                if jj != j:
                    continue
                p = typed_mul(self.algebra, self.gens[i].kind, a, self.gens[j].kind, b)
                if p:
                    out[(i, k)] = elem_add(F, out.get((i, k), {}), p)
        return {k: v for k, v in out.items() if v}

    def check_axioms(self):
        """Entry degrees, typing, and d^2 = -(. c) blockwise."""
        bad = []
        A = self.algebra
        for (i, j), e in sorted(self.D.items()):
            want = self.gens[j].degree - self.gens[i].degree + 1
            ref = A if self.gens[i].kind == "full" else A.base
            if not ref.is_homogeneous(e, want):
                bad.append("entry (%d, %d) not of degree %d" % (i, j, want))
        dd = self.compose_D(self.D, self.D)
        for i, gi in enumerate(self.gens):
            for j in range(len(self.gens)):
                acc = dict(dd.get((i, j), {}))
                e = self.entry(i, j)
                if e:
                    de = entry_d(A, gi.kind, e)
                    sign = 1 if gi.degree % 2 == 0 else -1
                    acc = elem_add(A.field, acc, elem_scale(A.field, A.field.of(sign), de))
                if i == j and self.gens[i].kind == "full" and A.curvature:
                    acc = elem_add(A.field, acc, A.curvature)
                # quot rows never see the curvature: it reduces to zero there
                if i == j and self.gens[i].kind == "quot" and A.curvature:
                    acc = elem_add(A.field, acc, A.reduce_mod_t(A.curvature))
                if acc:
                    bad.append("d^2 + (. c) nonzero at (%d, %d)" % (i, j))
        return bad

    def assert_valid(self):
        if any(g.kind not in ("full", "quot") for g in self.gens):
            raise ValueError("generator kind must be full or quot")
        bad = self.check_axioms()
        if bad:
            raise VerificationFailed("; ".join(bad))

    def same_shape(self, other):
        """Structural equality ignoring generator names."""
        if [g[1:] for g in self.gens] != [g[1:] for g in other.gens]:
            return False
        keys = set(self.D) | set(other.D)
        return all(self.entry(*k) == other.entry(*k) for k in keys)

    def __repr__(self):
        return "CdgModule(%s)" % ", ".join(
            "%s:%d:%s" % (g.name, g.degree, g.kind) for g in self.gens)


class ModuleMap:
    """Homogeneous element of the hom complex between two modules over the
    same algebra: entries[(i, j)] is the coefficient of target generator i
    in the image of source generator j, typed like differentials."""

    def __init__(self, source, target, degree, entries=None):
        assert source.algebra is target.algebra or source.algebra == target.algebra
        self.source = source
        self.target = target
        self.degree = degree
        self.entries = {}
        for (i, j), e in (entries or {}).items():
            self.set_entry(i, j, e)

    def set_entry(self, i, j, e):
        gi, gj = self.target.gens[i], self.source.gens[j]
        A = self.target.algebra
        if gi.kind == "quot":
            e = {k: v for k, v in e.items() if not k[0].startswith(T_PREFIX)}
        elif gj.kind == "quot" and e and not A.is_t_multiple(e):
            raise TypeMismatch("map entry (%d, %d) must be a multiple of t" % (i, j))
        e = {k: A.field.of(v) for k, v in e.items() if A.field.of(v) != 0}
        want = gj.degree - gi.degree + self.degree
        ref = A if gi.kind == "full" else A.base
        if e and not ref.is_homogeneous(e, want):
            raise ValueError("map entry (%d, %d) not of degree %d" % (i, j, want))
        if e:
            self.entries[(i, j)] = e
        else:
            self.entries.pop((i, j), None)

    def entry(self, i, j):
        return self.entries.get((i, j), {})

    @classmethod
    def identity(cls, module):
        A = module.algebra
        m = cls(module, module, 0)
        for i, g in enumerate(module.gens):
            u = A.unit if g.kind == "full" else A.reduce_mod_t(A.unit)
            m.set_entry(i, i, u)
        return m

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree)

    def add(self, other):
        # the zero map lives in every degree
        if self.degree != other.degree:
            if self.is_zero():
                return ModuleMap(other.source, other.target, other.degree,
                                 other.entries)
            if other.is_zero():
                return ModuleMap(self.source, self.target, self.degree,
                                 self.entries)
            raise ValueError("cannot add maps of degrees %d and %d"
                             % (self.degree, other.degree))
        F = self.source.algebra.field
        out = ModuleMap(self.source, self.target, self.degree)
        for k in sorted(set(self.entries) | set(other.entries)):
            out.set_entry(*k, elem_add(F, self.entry(*k), other.entry(*k)))
        return out

    def scale(self, c):
        F = self.source.algebra.field
        out = ModuleMap(self.source, self.target, self.degree)
        for (i, j), e in self.entries.items():
            out.set_entry(i, j, elem_scale(F, F.of(c), e))
        return out

    def sub(self, other):
        return self.add(other.scale(-1))

    def compose(self, other):
        """self after other."""
        assert other.target.same_shape(self.source) or other.target is self.source
        A = self.source.algebra
        F = A.field
        out = ModuleMap(other.source, self.target, self.degree + other.degree)
        acc = {}
        for (i, j), a in self.entries.items():
            for (jj, k), b in other.entries.items():
                if jj != j:
                    continue
                p = typed_mul(A, self.target.gens[i].kind, a,
                              self.source.gens[j].kind, b)
                if p:
                    acc[(i, k)] = elem_add(F, acc.get((i, k), {}), p)
        for (i, k), e in acc.items():
            out.set_entry(i, k, e)
        return out

    def delta(self):
        """Hom-complex differential:
        (dF)_kj = (D_tgt F)_kj + (-1)^{|g_k|} d(F_kj) - (-1)^{|F|} (F D_src)_kj."""
        A = self.source.algebra
        F = A.field
        out = ModuleMap(self.source, self.target, self.degree + 1)
        acc = {}

        def bump(i, j, e):
            if e:
                acc[(i, j)] = elem_add(F, acc.get((i, j), {}), e)

        for (i, m), a in self.target.D.items():
            for (mm, j), b in self.entries.items():
                if mm != m:
                    continue
                bump(i, j, typed_mul(A, self.target.gens[i].kind, a,
                                     self.target.gens[m].kind, b))
        for (k, j), e in self.entries.items():
            de = entry_d(A, self.target.gens[k].kind, e)
            sign = 1 if self.target.gens[k].degree % 2 == 0 else -1
            bump(k, j, elem_scale(F, F.of(sign), de))
        msign = F.of(-1 if self.degree % 2 == 0 else 1)
        for (k, m), a in self.entries.items():
            for (mm, j), b in self.source.D.items():
                if mm != m:
                    continue
                p = typed_mul(A, self.target.gens[k].kind, a,
                              self.source.gens[m].kind, b)
                bump(k, j, elem_scale(F, msign, p))
        for (i, j), e in acc.items():
            out.set_entry(i, j, e)
        return out

    def is_closed(self):
        return not self.delta().entries

    def is_chain_map(self):
        return self.degree == 0 and self.is_closed()

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        if self.degree != other.degree:
            return self.is_zero() and other.is_zero()
        keys = set(self.entries) | set(other.entries)
        return all(self.entry(*k) == other.entry(*k) for k in keys)

    def is_identity_shaped(self):
        if self.degree != 0 or not self.source.same_shape(self.target):
            return False
        return self == ModuleMap.identity(self.source)


# --- constructions ---

def shift_module(module, k):
    """M[k]: generator degrees drop by k, differential entries scale by (-1)^k."""
    sign = module.algebra.field.of(1 if k % 2 == 0 else -1)
    gens = [Gen(g.name, g.degree - k, g.kind) for g in module.gens]
    D = {key: elem_scale(module.algebra.field, sign, e)
         for key, e in module.D.items()}
    return CdgModule(module.algebra, gens, D, check=False)


def shift_map(f, k):
    """f[k]: same entries up to the Koszul sign (-1)^(k |f|), a strict dg
    functor: delta(f[k]) = (delta f)[k]."""
    src = shift_module(f.source, k)
    tgt = shift_module(f.target, k)
    sign = 1 if (k * f.degree) % 2 == 0 else -1
    out = ModuleMap(src, tgt, f.degree)
    for (i, j), e in f.entries.items():
        out.set_entry(i, j, elem_scale(f.source.algebra.field,
                                       f.source.algebra.field.of(sign), e))
    return out


def direct_sum(M, N):
    gens = [Gen(("L", g.name), g.degree, g.kind) for g in M.gens] + \
           [Gen(("R", g.name), g.degree, g.kind) for g in N.gens]
    D = {}
    for (i, j), e in M.D.items():
        D[(i, j)] = e
    off = len(M.gens)
    for (i, j), e in N.D.items():
        D[(i + off, j + off)] = e
    return CdgModule(M.algebra, gens, D, check=False)


def cone(phi):
    """Cone of a closed degree-0 map phi: M -> N, as N + M[1] with
    differential [[D_N, phi], [0, -D_M]]."""
    if phi.degree != 0 or not phi.is_closed():
        raise ValueError("cone needs a closed degree-0 map")
    M, N = phi.source, phi.target
    F = M.algebra.field
    gens = [Gen(("t", g.name), g.degree, g.kind) for g in N.gens] + \
           [Gen(("s", g.name), g.degree - 1, g.kind) for g in M.gens]
    off = len(N.gens)
    D = {}
    for (i, j), e in N.D.items():
        D[(i, j)] = e
    for (i, j), e in phi.entries.items():
        D[(i, j + off)] = e
    for (i, j), e in M.D.items():
        D[(i + off, j + off)] = elem_neg(F, e)
    return CdgModule(M.algebra, gens, D, check=False)


def cone_inclusion(phi, C=None):
    """The canonical chain map N -> cone(phi)."""
    C = C or cone(phi)
    N = phi.target
    out = ModuleMap(N, C, 0)
    A = N.algebra
    for i, g in enumerate(N.gens):
        u = A.unit if g.kind == "full" else A.reduce_mod_t(A.unit)
        out.set_entry(i, i, u)
    return out

def cone_projection(phi, C=None):
    """The canonical chain map cone(phi) -> M[1]."""
    C = C or cone(phi)
    M1 = shift_module(phi.source, 1)
    out = ModuleMap(C, M1, 0)
    A = M1.algebra
    off = len(phi.target.gens)
    for i, g in enumerate(M1.gens):
        u = A.unit if g.kind == "full" else A.reduce_mod_t(A.unit)
        out.set_entry(i, i + off, u)
    return out


# --- materialization into exact windowed complexes ---

def _coefficient_basis(algebra, kind_row, kind_col, degree):
    """Basis of the typed coefficient space in a given internal degree."""
    if kind_row == "quot":
        return [b for b in algebra.base.basis_in_degree(degree)]
    basis = algebra.basis_in_degree(degree)
    if kind_col == "quot":
        return [b for b in basis if b[0].startswith(T_PREFIX)]
    return basis


def _expand_in_row(algebra, kind_row, elem):
    """Coefficient element -> list of ((label, exp), coeff) in row typing."""
    return sorted(elem.items())


class MaterializedModule:
    """Degreewise basis of a module inside a window, with its differential
    as an exact cochain complex.  Basis labels are (gen index, (label, exp)).

    Requires the curvature to act as zero (plain algebras, or modules whose
    full generators never meet a nonzero curvature)."""

    def __init__(self, module, window):
        A = module.algebra
        if A.curvature and any(g.kind == "full" for g in module.gens):
            raise ValueError("cannot materialize: curvature acts nontrivially")
        self.module = module
        self.window = window
        basis = {}
        for n in window.degrees():
            labs = []
            for i, g in enumerate(module.gens):
                for b in _coefficient_basis(A, g.kind, "full", n - g.degree):
                    labs.append((i, b))
            if labs:
                basis[n] = labs
        self.space = GradedVectorSpace(basis)
        complete = self._detect_complete()
        blocks = {}
        top = window.hi if complete else window.hi - 1
        for n in range(window.lo, top + 1):
            if self.space.dim(n) == 0:
                continue
            m = Matrix.zero(A.field, self.space.dim(n + 1), self.space.dim(n))
            for col, (i, b) in enumerate(self.space.labels(n)):
                img = self._d_of_basis(i, b)
                for (k, bb), c in img:
                    m.rows[self.space.index(n + 1, (k, bb))][col] = c
            blocks[n] = m
        self.complex = CochainComplex(A.field, self.space, blocks, window,
                                      complete=complete)

    def _detect_complete(self):
        A = self.module.algebra
        if not self.module.gens:
            return True
        if A.periodicity is not None:
            return self.space.total_dim() == 0
        if not A.labels:
            return True
        degs = list(A.labels.values())
        lo = min(g.degree for g in self.module.gens) + min(degs)
        hi = max(g.degree for g in self.module.gens) + max(degs)
        return self.window.lo <= lo and hi <= self.window.hi

    def _d_of_basis(self, i, b):
        """Image of g_i * b under d, as [((gen, basis), coeff)]."""
        A = self.module.algebra
        F = A.field
        gi = self.module.gens[i]
        out = {}
        for (k, ii), e in self.module.D.items():
            if ii != i:
                continue
            p = typed_mul(A, self.module.gens[k].kind, e, gi.kind, {b: F.one()})
            for bb, c in p.items():
                key = (k, bb)
                s = F.add(out.get(key, F.zero()), c)
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        db = entry_d(A, gi.kind, {b: F.one()})
        sign = F.of(1 if gi.degree % 2 == 0 else -1)
        for bb, c in db.items():
            key = (i, bb)
            s = F.add(out.get(key, F.zero()), F.mul(sign, c))
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return sorted(out.items())

    def vector(self, comb, n):
        """Column vector of a combination {gen index: coefficient element}
        homogeneous of total degree n."""
        F = self.module.algebra.field
        v = Matrix.zero(F, self.space.dim(n), 1)
        for i, e in comb.items():
            for b, c in e.items():
                v.rows[self.space.index(n, (i, b))][0] = F.add(
                    v.rows[self.space.index(n, (i, b))][0], c)
        return v


def materialize_map(f, msrc, mtgt):
    """GradedLinearMap of a ModuleMap between two materialized modules."""
    A = f.source.algebra
    F = A.field
    out = GradedLinearMap(F, msrc.space, mtgt.space, f.degree)
    for n in msrc.space.degrees():
        tn = n + f.degree
        if tn not in mtgt.window:
            if mtgt.complex.complete:
                continue
            raise WindowIncomplete("map image leaves the target window")
        m = Matrix.zero(F, mtgt.space.dim(tn), msrc.space.dim(n))
        for col, (j, b) in enumerate(msrc.space.labels(n)):
            for (i, jj), e in f.entries.items():
                if jj != j:
                    continue
                p = typed_mul(A, f.target.gens[i].kind, e,
                              f.source.gens[j].kind, {b: F.one()})
                for bb, c in p.items():
                    m.rows[mtgt.space.index(tn, (i, bb))][col] = F.add(
                        m.rows[mtgt.space.index(tn, (i, bb))][col], c)
        out.set_block(n, m)
    return out


class MaterializedHom:
    """The hom complex Hom(M, N) materialized in a window.

    Basis labels in degree n are (i, j, (label, exp)): the map sending
    source generator j to target generator i times the basis coefficient,
    zero elsewhere.  The differential is exact in every materialized degree
    because coefficient bases are intrinsic (no truncation happens inside
    a fixed degree)."""

    def __init__(self, source, target, window):
        self.source = source
        self.target = target
        self.window = window
        A = source.algebra
        F = A.field
        basis = {}
        for n in window.degrees():
            labs = []
            for i, gi in enumerate(target.gens):
                for j, gj in enumerate(source.gens):
                    cdeg = gj.degree - gi.degree + n
                    for b in _coefficient_basis(A, gi.kind, gj.kind, cdeg):
                        labs.append((i, j, b))
            if labs:
                basis[n] = labs
        self.space = GradedVectorSpace(basis)
        complete = self._detect_complete()
        blocks = {}
        top = window.hi if complete else window.hi - 1
        for n in range(window.lo, top + 1):
            if self.space.dim(n) == 0:
                continue
            m = Matrix.zero(F, self.space.dim(n + 1), self.space.dim(n))
            for col, (i, j, b) in enumerate(self.space.labels(n)):
                single = ModuleMap(source, target, n, {(i, j): {b: F.one()}})
                img = single.delta()
                for (ii, jj), e in img.entries.items():
                    for bb, c in e.items():
                        m.rows[self.space.index(n + 1, (ii, jj, bb))][col] = c
            blocks[n] = m
        self.complex = CochainComplex(F, self.space, blocks, window, complete=complete)

    def _detect_complete(self):
        A = self.source.algebra
        if not self.source.gens or not self.target.gens:
            return True
        if A.periodicity is not None:
            return self.space.total_dim() == 0
        if not A.labels:
            return True
        degs = list(A.labels.values())
        # entry (i, j) at hom degree n has coefficient degree
        # src_j.degree - tgt_i.degree + n
        lo = min(degs) - max(g.degree for g in self.source.gens) \
            + min(g.degree for g in self.target.gens)
        hi = max(degs) - min(g.degree for g in self.source.gens) \
            + max(g.degree for g in self.target.gens)
        return self.window.lo <= lo and hi <= self.window.hi

    def vector(self, f):
        """Column of a ModuleMap in its degree."""
        F = self.source.algebra.field
        n = f.degree
        v = Matrix.zero(F, self.space.dim(n), 1)
        for (i, j), e in f.entries.items():
            for b, c in e.items():
                v.rows[self.space.index(n, (i, j, b))][0] = c
        return v

    def map_from_vector(self, n, v):
        F = self.source.algebra.field
        acc = {}
        for r, (i, j, b) in enumerate(self.space.labels(n)):
            c = v.rows[r][0]
            if c != 0:
                acc.setdefault((i, j), {})[b] = c
        return ModuleMap(self.source, self.target, n, acc)
