"""Hochschild cochains and their differential.

A cochain of total degree n is a family of multilinear maps, one per arity
k, sending k-tuples of algebra elements to elements of internal degree
n - k.  Components are stored as tables on basis labels and extended
u-linearly (the periodicity generator is central of even degree, so no
signs appear in that extension).

The differential is the commutator with the structure maps (differential
and product) computed entirely in the bar-shifted picture: cochains are
conjugated by the suspension, inserted with Koszul signs, and unshifted at
the end.  No sign in this file was transcribed by hand; they all come out
of the two standard formulas

    (s^-1)^{tensor n} (s a_1, ..., s a_n)
        = (-1)^{sum_i (n-i)(|a_i|-1)} (a_1, ..., a_n)

    (phi . psi) = sum over insertion slots with Koszul factor
        (-1)^{|psi| * (|s a_1| + ... + |s a_{i-1}|)}.
"""

from __future__ import annotations

import itertools

from .dgcore import elem_add, elem_neg, elem_scale
from .errors import NotFiniteDimensional
from .exactalg import Matrix


class Cochain:
    """Multilinear cochain with labelled component tables.

    components: {arity: {tuple of labels: element}}; the arity-0 table has
    the single key ().  Entry at labels (l_1..l_k) must be homogeneous of
    degree deg(l_1) + ... + deg(l_k) + total - k.
    """

    def __init__(self, algebra, total, components=None):
        self.algebra = algebra
        self.total = total
        self.components = {}
        for arity, table in (components or {}).items():
            clean = {}
            for labs, e in table.items():
                labs = tuple(labs)
                assert len(labs) == arity
                e = algebra.of(e)
                if not e:
                    continue
                want = sum(algebra.labels[l] for l in labs) + total - arity
                if not algebra.is_homogeneous(e, want):
                    raise ValueError("cochain entry at %r not of degree %d"
                                     % (labs, want))
                clean[labs] = e
            if clean:
                self.components[arity] = clean

    def arities(self):
        return sorted(self.components)

    def table(self, arity):
        return self.components.get(arity, {})

    def ev(self, elems):
        """Multilinear evaluation on a tuple of algebra elements."""
        k = len(elems)
        table = self.components.get(k)
        if not table:
            return {}
        F = self.algebra.field
        out = {}
        for combo in itertools.product(*[sorted(e.items()) for e in elems]):
            labs = tuple(l for (l, _), _ in combo)
            entry = table.get(labs)
            if not entry:
                continue
            coeff = F.one()
            shift = 0
            for (_, exp), c in combo:
                coeff = F.mul(coeff, c)
                shift += exp
            for (l, e), cv in entry.items():
                key = (l, e + shift)
                s = F.add(out.get(key, F.zero()), F.mul(coeff, cv))
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return out

    def add(self, other):
        assert self.total == other.total and self.algebra is other.algebra
        F = self.algebra.field
        comps = {}
        for k in set(self.components) | set(other.components):
            table = {}
            for labs in set(self.table(k)) | set(other.table(k)):
                e = elem_add(F, self.table(k).get(labs, {}),
                             other.table(k).get(labs, {}))
                if e:
                    table[labs] = e
            if table:
                comps[k] = table
        return Cochain(self.algebra, self.total, comps)

    def scale(self, c):
        F = self.algebra.field
        c = F.of(c)
        comps = {k: {labs: elem_scale(F, c, e) for labs, e in t.items()}
                 for k, t in self.components.items()}
        return Cochain(self.algebra, self.total, comps)

    def sub(self, other):
        return self.add(other.scale(-1))

    def is_zero(self):
        return not self.components

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.total == other.total
                and self.components == other.components)


def structure_cochain(algebra):
    """The differential and product of the algebra, as one total-degree-2
    cochain (arities 1 and 2)."""
    comps = {}
    t1 = {(l,): e for l, e in algebra.diff_table.items() if e}
    if t1:
        comps[1] = t1
    t2 = {k: e for k, e in algebra.mul_table.items() if e}
    if t2:
        comps[2] = t2
    return Cochain(algebra, 2, comps)


def _unsuspension_sign(degrees):
    n = len(degrees)
    return sum((n - 1 - i) * (degrees[i] - 1) for i in range(n)) % 2


def _ev_shifted(coch, args):
    """coch~ evaluated on suspended arguments, stripped of the outer s.

    args is a list of (element, degree) pairs; returns (element, degree)."""
    val = coch.ev([a for a, _ in args])
    deg = sum(d for _, d in args) + coch.total - len(args)
    if val and _unsuspension_sign([d for _, d in args]):
        val = elem_neg(coch.algebra.field, val)
    return val, deg


def _circle_eval(f, g, args):
    """(f~ . g~) on suspended arguments, stripped of the outer s."""
    F = f.algebra.field
    N = len(args)
    out = {}
    for n in g.arities():
        m = N - n + 1
        if m < 1 or m not in f.components:
            continue
        for i in range(m):
            inner, inner_deg = _ev_shifted(g, args[i:i + n])
            if not inner:
                continue
            koszul = ((g.total - 1) * sum(d - 1 for _, d in args[:i])) % 2
            v, _ = _ev_shifted(f, args[:i] + [(inner, inner_deg)] + args[i + n:])
            if not v:
                continue
            if koszul:
                v = elem_neg(F, v)
            out = elem_add(F, out, v)
    return out


def hochschild_d(coch):
    """Gerstenhaber commutator with the structure maps, unshifted."""
    A = coch.algebra
    F = A.field
    m = structure_cochain(A)
    out_arities = sorted({k for k in coch.arities()} | {k + 1 for k in coch.arities()})
    comm_sign = (coch.total - 1) % 2
    comps = {}
    for N in out_arities:
        table = {}
        for labs in itertools.product(sorted(A.labels), repeat=N):
            args = [({(l, 0): F.one()}, A.labels[l]) for l in labs]
            v = _circle_eval(m, coch, args)
            w = _circle_eval(coch, m, args)
            if comm_sign == 0:
                w = elem_neg(F, w)
            v = elem_add(F, v, w)
            if v and _unsuspension_sign([d for _, d in args]):
                v = elem_neg(F, v)
            if v:
                table[labs] = v
        if table:
            comps[N] = table
    return Cochain(A, coch.total + 1, comps)


def is_cocycle(coch):
    return hochschild_d(coch).is_zero()


def component_residuals(mu):
    """The cocycle condition of a total-degree-2 cochain with components of
    arity at most 2, written out per arity on basis labels:

        arity 0:  d(mu0)
        arity 1:  d(mu1(a)) + mu1(d a) - mu0 a + a mu0
        arity 2:  mu1(a b) - mu1(a) b - (-1)^|a| a mu1(b)
                  + d(mu2(a, b)) - mu2(d a, b) - (-1)^|a| mu2(a, d b)
        arity 3:  a mu2(b, c) - mu2(a b, c) + mu2(a, b c) - mu2(a, b) c

    These are the equations the square-zero deformation builder needs; the
    test suite checks that their simultaneous vanishing agrees with the
    suspension-computed differential being zero.
    """
    A = mu.algebra
    F = A.field
    labs = sorted(A.labels)
    basis = {l: {(l, 0): F.one()} for l in labs}
    sgn = {l: F.of(1 if A.labels[l] % 2 == 0 else -1) for l in labs}

    def mu1(x):
        return mu.ev([x])

    def mu2(x, y):
        return mu.ev([x, y])

    out = {0: {}, 1: {}, 2: {}, 3: {}}
    e0 = A.d(mu.ev([]))
    if e0:
        out[0][()] = e0
    for a in labs:
        r = A.d(mu1(basis[a]))
        r = elem_add(F, r, mu1(A.d(basis[a])))
        r = elem_add(F, r, elem_neg(F, A.mul(mu.ev([]), basis[a])))
        r = elem_add(F, r, A.mul(basis[a], mu.ev([])))
        if r:
            out[1][(a,)] = r
    for a in labs:
        for b in labs:
            r = mu1(A.mul(basis[a], basis[b]))
            r = elem_add(F, r, elem_neg(F, A.mul(mu1(basis[a]), basis[b])))
            r = elem_add(F, r, elem_scale(F, F.neg(sgn[a]),
                                          A.mul(basis[a], mu1(basis[b]))))
            r = elem_add(F, r, A.d(mu2(basis[a], basis[b])))
            r = elem_add(F, r, elem_neg(F, mu2(A.d(basis[a]), basis[b])))
            r = elem_add(F, r, elem_scale(F, F.neg(sgn[a]),
                                          mu2(basis[a], A.d(basis[b]))))
            if r:
                out[2][(a, b)] = r
    for a in labs:
        for b in labs:
            for c in labs:
                r = A.mul(basis[a], mu2(basis[b], basis[c]))
                r = elem_add(F, r, elem_neg(F, mu2(A.mul(basis[a], basis[b]), basis[c])))
                r = elem_add(F, r, mu2(basis[a], A.mul(basis[b], basis[c])))
                r = elem_add(F, r, elem_neg(F, A.mul(mu2(basis[a], basis[b]), basis[c])))
                if r:
                    out[3][(a, b, c)] = r
    return {k: t for k, t in out.items() if t}


# --- cochain spaces as exact vector spaces ---

def _arity_bound(algebra, total):
    degs = sorted(set(algebra.labels.values()))
    if algebra.periodicity is not None:
        raise NotFiniteDimensional(
            "periodic algebra: pass max_arity to bound the cochain space")
    if not degs:
        return 0
    if degs[-1] >= 1:
        raise NotFiniteDimensional(
            "labels of positive degree: pass max_arity explicitly")
    # max achievable target degree at arity k is k*max_deg + total - k
    # which is <= total - k; spaces die once that drops below min label degree
    return max(total - degs[0] + 1, 0)


def cochain_basis(algebra, total, max_arity=None):
    """Deterministic basis of the cochain space: (arity, labels, basis key)."""
    if max_arity is None:
        max_arity = _arity_bound(algebra, total)
    out = []
    for k in range(max_arity + 1):
        for labs in itertools.product(sorted(algebra.labels), repeat=k):
            want = sum(algebra.labels[l] for l in labs) + total - k
            for b in algebra.basis_in_degree(want):
                out.append((k, labs, b))
    return out


def cochain_from_coords(algebra, total, basis, coords):
    F = algebra.field
    comps = {}
    for (k, labs, b), c in zip(basis, coords):
        if c == 0:
            continue
        comps.setdefault(k, {}).setdefault(labs, {})
        e = comps[k][labs]
        e[b] = F.add(e.get(b, F.zero()), c)
    comps = {k: {labs: {b: c for b, c in e.items() if c != 0} for labs, e in t.items()}
             for k, t in comps.items()}
    return Cochain(algebra, total, comps)


def hochschild_matrix(algebra, total, max_arity=None):
    """Matrix of the differential from total degree `total` to total + 1.

    Output arities run one higher than the (possibly capped) input arities,
    so nothing the differential produces is truncated away.  Returns
    (matrix, domain basis, codomain basis)."""
    dom = cochain_basis(algebra, total, max_arity)
    cod_cap = (max_arity + 1) if max_arity is not None else None
    cod = cochain_basis(algebra, total + 1, cod_cap)
    idx = {key: i for i, key in enumerate(cod)}
    F = algebra.field
    m = Matrix.zero(F, len(cod), len(dom))
    for col, (k, labs, b) in enumerate(dom):
        single = Cochain(algebra, total, {k: {labs: {b: F.one()}}})
        img = hochschild_d(single)
        for kk, table in img.components.items():
            for ll, e in table.items():
                for bb, c in e.items():
                    m.rows[idx[(kk, ll, bb)]][col] = c
    return m, dom, cod


def hh_dim(algebra, total=2, max_arity=None):
    """dim HH^total as kernel minus image of the exact differential."""
    m_out, dom, _ = hochschild_matrix(algebra, total, max_arity)
    cap_below = None if max_arity is None else max_arity
    m_in, dom_below, cod_below = hochschild_matrix(algebra, total - 1, cap_below)
    # the incoming matrix lands in a possibly larger basis than dom; restrict
    idx = {key: i for i, key in enumerate(cod_below)}
    F = algebra.field
    m_in_restr = Matrix.zero(F, len(dom), len(dom_below))
    for r, key in enumerate(dom):
        if key in idx:
            m_in_restr.rows[r] = m_in.rows[idx[key]][:]
    kernel_dim = m_out.kernel().ncols
    image_dim = m_in_restr.rank()
    return kernel_dim - image_dim


def cocycle_space(algebra, total=2, max_arity=2):
    """Basis of the space of cocycles with arities capped, as Cochains.

    The kernel is of the full differential (outputs up to arity cap + 1),
    so members are honest cocycles, not cocycles-modulo-truncation."""
    m, dom, _ = hochschild_matrix(algebra, total, max_arity)
    ker = m.kernel()
    out = []
    for j in range(ker.ncols):
        coords = [ker.rows[i][j] for i in range(ker.nrows)]
        out.append(cochain_from_coords(algebra, total, dom, coords))
    return out


def random_cocycle(algebra, rng, total=2, max_arity=2):
    basis = cocycle_space(algebra, total, max_arity)
    F = algebra.field
    out = Cochain(algebra, total)
    for b in basis:
        c = rng.randrange(F.p) if F.p is not None else rng.randrange(-3, 4)
        out = out.add(b.scale(c))
    return out


def random_cochain(algebra, rng, total=2, max_arity=2):
    basis = cochain_basis(algebra, total, max_arity)
    F = algebra.field
    coords = [F.of(rng.randrange(F.p) if F.p is not None else rng.randrange(-3, 4))
              for _ in basis]
    return cochain_from_coords(algebra, total, basis, coords)


def hh_representatives(algebra, total=2, max_arity=None):
    """Deterministic cocycle representatives of a basis of HH^total:
    kernel vectors that extend a basis of the coboundaries, taken in
    kernel-basis order so reruns pick the same cochains."""
    m_out, dom, _ = hochschild_matrix(algebra, total, max_arity)
    m_in, dom_below, cod_below = hochschild_matrix(algebra, total - 1,
                                                   max_arity)
    idx = {key: i for i, key in enumerate(cod_below)}
    F = algebra.field
    m_in_restr = Matrix.zero(F, len(dom), len(dom_below))
    for r, key in enumerate(dom):
        if key in idx:
            m_in_restr.rows[r] = m_in.rows[idx[key]][:]
    K = m_out.kernel()
    cur = m_in_restr.column_space()
    out = []
    for j in range(K.ncols):
        cand = cur.hstack(K.col(j))
        if cand.rank() > cur.rank():
            cur = cand
            coords = [K.rows[i][j] for i in range(K.nrows)]
            out.append(cochain_from_coords(algebra, total, dom, coords))
    return out
