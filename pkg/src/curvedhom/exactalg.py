"""Exact linear algebra over prime fields and the rationals.

Everything downstream reduces to the routines in this module: deterministic
row echelon form with an operation certificate, kernels and column spaces,
degreewise cohomology of windowed cochain complexes, and a homotopy solver
that returns either a homotopy or a linear-functional witness that none
exists.

There are no floats.  GF(p) elements are ints normalized to [0, p) and
rational elements are fractions.Fraction, so every equality test is exact.
Pivoting is positional (first usable row, columns left to right), which
makes every result reproducible across runs and platforms.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import WindowIncomplete


class Field:
    """GF(p) for prime p, or the rationals when p is None.

    Elements are plain values (int resp. Fraction); all arithmetic goes
    through this object so callers never spell out `%` reductions.
    """

    def __init__(self, p=None):
        if p is not None:
            if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
                raise ValueError("p must be prime, got %r" % (p,))
        self.p = p

    def of(self, x):
        if isinstance(x, Fraction) and self.p is not None:
            if x.denominator % self.p == 0:
                raise ZeroDivisionError("denominator not invertible mod %d" % self.p)
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return Fraction(x) if self.p is None else x % self.p

    def zero(self):
        return self.of(0)

    def one(self):
        return self.of(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverting zero")
        return pow(a, -1, self.p) if self.p is not None else Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, s):
        """Parse "3" or "2/3" (the latter meaning 2 * 3^-1 in GF(p))."""
        s = str(s).strip()
        if "/" in s:
            num, den = s.split("/")
            return self.div(self.of(int(num)), self.of(int(den)))
        return self.of(int(s))

    def show(self, x):
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else "GF(%d)" % self.p


QQ = Field(None)
GF = Field


class Matrix:
    """Dense exact matrix.  Rows are lists of field elements."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, nrows, ncols, rows):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows
        assert len(rows) == nrows and all(len(r) == ncols for r in rows)

    @classmethod
    def from_rows(cls, field, rows):
        rows = [[field.of(x) for x in r] for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zero(cls, field, nrows, ncols):
        z = field.zero()
        return cls(field, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n):
        m = cls.zero(field, n, n)
        one = field.one()
        for i in range(n):
            m.rows[i][i] = one
        return m

    def copy(self):
        return Matrix(self.field, self.nrows, self.ncols, [r[:] for r in self.rows])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        raise TypeError("matrices are mutable, do not hash")

    def __repr__(self):
        return "Matrix(%d x %d over %r)" % (self.nrows, self.ncols, self.field)

    def is_zero(self):
        z = self.field.zero()
        return all(x == z for r in self.rows for x in r)

    def __matmul__(self, other):
        assert self.ncols == other.nrows, (self.ncols, other.nrows)
        F = self.field
        out = Matrix.zero(F, self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out.rows[i]
            for k in range(self.ncols):
                a = ri[k]
                if a == 0:
                    continue
                rk = other.rows[k]
                for j in range(other.ncols):
                    if rk[j] != 0:
                        oi[j] = F.add(oi[j], F.mul(a, rk[j]))
        return out

    def __add__(self, other):
        assert self.nrows == other.nrows and self.ncols == other.ncols
        F = self.field
        return Matrix(F, self.nrows, self.ncols,
                      [[F.add(a, b) for a, b in zip(r, s)]
                       for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one()))

    def scale(self, c):
        F = self.field
        return Matrix(F, self.nrows, self.ncols,
                      [[F.mul(c, a) for a in r] for r in self.rows])

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one()))

    def transpose(self):
        return Matrix(self.field, self.ncols, self.nrows,
                      [[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)])

    def hstack(self, other):
        assert self.nrows == other.nrows
        return Matrix(self.field, self.nrows, self.ncols + other.ncols,
                      [r + s for r, s in zip(self.rows, other.rows)])

    def vstack(self, other):
        assert self.ncols == other.ncols
        return Matrix(self.field, self.nrows + other.nrows, self.ncols,
                      [r[:] for r in self.rows] + [r[:] for r in other.rows])

    def submatrix(self, row_idx, col_idx):
        return Matrix(self.field, len(row_idx), len(col_idx),
                      [[self.rows[i][j] for j in col_idx] for i in row_idx])

    def col(self, j):
        return self.submatrix(range(self.nrows), [j])

    def rref(self):
        """Reduced row echelon form.  Returns (R, pivots).

        Pivot choice is the first row (smallest index) with a nonzero entry
        in the current column, columns scanned left to right; fully
        deterministic.
        """
        R, piv, _ = self._rref_impl(track=False)
        return R, piv

    def rref_with_transform(self):
        """Returns (R, pivots, T) with T @ self == R and T invertible."""
        return self._rref_impl(track=True)

    def _rref_impl(self, track):
        F = self.field
        R = self.copy()
        T = Matrix.identity(F, self.nrows) if track else None
        pivots = []
        row = 0
        for col in range(self.ncols):
            sel = None
            for i in range(row, self.nrows):
                if R.rows[i][col] != 0:
                    sel = i
                    break
            if sel is None:
                continue
            if sel != row:
                R.rows[row], R.rows[sel] = R.rows[sel], R.rows[row]
                if track:
                    T.rows[row], T.rows[sel] = T.rows[sel], T.rows[row]
            c = F.inv(R.rows[row][col])
            if c != F.one():
                R.rows[row] = [F.mul(c, x) for x in R.rows[row]]
                if track:
                    T.rows[row] = [F.mul(c, x) for x in T.rows[row]]
            for i in range(self.nrows):
                if i == row:
                    continue
                a = R.rows[i][col]
                if a == 0:
                    continue
                R.rows[i] = [F.sub(x, F.mul(a, y)) for x, y in zip(R.rows[i], R.rows[row])]
                if track:
                    T.rows[i] = [F.sub(x, F.mul(a, y)) for x, y in zip(T.rows[i], T.rows[row])]
            pivots.append(col)
            row += 1
            if row == self.nrows:
                break
        return R, pivots, T

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Matrix whose columns are a basis of the right kernel."""
        F = self.field
        R, pivots = self.rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivot_set]
        cols = []
        for j in free:
            v = [F.zero()] * self.ncols
            v[j] = F.one()
            for i, p in enumerate(pivots):
                v[p] = F.neg(R.rows[i][j])
            cols.append(v)
        return Matrix(F, self.ncols, len(cols),
                      [[cols[k][i] for k in range(len(cols))] for i in range(self.ncols)])

    def pivot_columns(self):
        return self.rref()[1]

    def column_space(self):
        """Matrix whose columns are a basis of the column space
        (the pivot columns of self, in order)."""
        piv = self.pivot_columns()
        return self.submatrix(range(self.nrows), piv)

    def solve(self, b):
        """Solve self @ x = b for a single column b.

        Returns ("solution", x) or ("infeasible", y) where y is a row vector
        with y @ self == 0 and y @ b != 0; the witness is verified before it
        is returned.
        """
        assert b.nrows == self.nrows and b.ncols == 1
        F = self.field
        R, pivots, T = self.rref_with_transform()
        c = T @ b
        r = len(pivots)
        for i in range(r, self.nrows):
            if c.rows[i][0] != 0:
                y = Matrix(F, 1, self.nrows, [T.rows[i][:]])
                assert (y @ self).is_zero() and (y @ b).rows[0][0] != 0
                return "infeasible", y
        x = Matrix.zero(F, self.ncols, 1)
        for i, p in enumerate(pivots):
            x.rows[p][0] = c.rows[i][0]
        assert self @ x == b
        return "solution", x

    def inverse(self):
        if self.nrows != self.ncols:
            return None
        R, pivots, T = self.rref_with_transform()
        if len(pivots) != self.ncols:
            return None
        return T


class Window:
    """Closed degree interval [lo, hi]."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if lo > hi:
            raise ValueError("empty window [%d, %d]" % (lo, hi))
        self.lo = int(lo)
        self.hi = int(hi)

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def __eq__(self, other):
        return isinstance(other, Window) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return "Window(%d, %d)" % (self.lo, self.hi)


class GradedVectorSpace:
    """Finite labelled basis in each degree.  Labels are any hashables."""

    def __init__(self, basis):
        self.basis = {int(n): list(labs) for n, labs in sorted(basis.items()) if labs}
        self._index = {n: {lab: i for i, lab in enumerate(labs)}
                       for n, labs in self.basis.items()}
        for n, idx in self._index.items():
            if len(idx) != len(self.basis[n]):
                raise ValueError("duplicate basis label in degree %d" % n)

    def dim(self, n):
        return len(self.basis.get(n, ()))

    def labels(self, n):
        return self.basis.get(n, [])

    def index(self, n, label):
        return self._index[n][label]

    def degrees(self):
        return sorted(self.basis)

    def total_dim(self):
        return sum(len(v) for v in self.basis.values())

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.basis == other.basis


class GradedLinearMap:
    """Degree-k linear map between graded spaces, one matrix per degree.

    blocks[n] : source^n -> target^(n+k).  Missing blocks are zero.
    """

    def __init__(self, field, source, target, degree, blocks=None):
        self.field = field
        self.source = source
        self.target = target
        self.degree = degree
        self.blocks = {}
        for n, m in (blocks or {}).items():
            self.set_block(n, m)

    def set_block(self, n, m):
        assert m.nrows == self.target.dim(n + self.degree), (n, m.nrows)
        assert m.ncols == self.source.dim(n), (n, m.ncols)
        if not m.is_zero():
            self.blocks[n] = m

    def block(self, n):
        if n in self.blocks:
            return self.blocks[n]
        return Matrix.zero(self.field, self.target.dim(n + self.degree), self.source.dim(n))

    @classmethod
    def zero_map(cls, field, source, target, degree):
        return cls(field, source, target, degree)

    @classmethod
    def identity_map(cls, field, space):
        m = cls(field, space, space, 0)
        for n in space.degrees():
            m.set_block(n, Matrix.identity(field, space.dim(n)))
        return m

    def compose(self, other):
        """self after other."""
        assert other.target is self.source or other.target == self.source
        out = GradedLinearMap(self.field, other.source, self.target,
                              self.degree + other.degree)
        for n in other.source.degrees():
            out.set_block(n, self.block(n + other.degree) @ other.block(n))
        return out

    def add(self, other):
        assert self.degree == other.degree
        out = GradedLinearMap(self.field, self.source, self.target, self.degree)
        for n in sorted(set(self.blocks) | set(other.blocks)):
            out.set_block(n, self.block(n) + other.block(n))
        return out

    def sub(self, other):
        return self.add(other.scale(self.field.neg(self.field.one())))

    def scale(self, c):
        out = GradedLinearMap(self.field, self.source, self.target, self.degree)
        for n, m in self.blocks.items():
            out.set_block(n, m.scale(c))
        return out

    def is_zero(self):
        return not self.blocks

    def __eq__(self, other):
        if not isinstance(other, GradedLinearMap):
            return NotImplemented
        if (self.degree != other.degree or self.source != other.source
                or self.target != other.target):
            return False
        for n in sorted(set(self.blocks) | set(other.blocks)):
            if self.block(n) != other.block(n):
                return False
        return True


class CochainComplex:
    """Windowed complex of finite-dimensional spaces.

    d_blocks[n] : space^n -> space^(n+1).  `complete` records that the
    complex is genuinely zero outside the window; when False, degreewise
    questions that would need data beyond an edge raise WindowIncomplete
    instead of guessing.
    """

    def __init__(self, field, space, d_blocks, window, complete=False, check=True):
        self.field = field
        self.space = space
        self.window = window
        self.complete = complete
        for n in space.degrees():
            if n not in window:
                raise ValueError("basis in degree %d outside %r" % (n, window))
        self.diff = GradedLinearMap(field, space, space, 1, d_blocks)
        if check:
            self.check_d_squared()

    def d(self, n):
        if not self.complete and not (n in self.window and n + 1 in self.window):
            if self.space.dim(n) or self.space.dim(n + 1):
                raise WindowIncomplete("d in degree %d exits %r" % (n, self.window))
        return self.diff.block(n)

    def check_d_squared(self):
        lo, hi = self.window.lo, self.window.hi
        ns = range(lo - 1, hi + 1) if self.complete else range(lo, hi - 1)
        for n in ns:
            m = self.diff.block(n + 1) @ self.diff.block(n)
            if not m.is_zero():
                raise ValueError("d^2 != 0 leaving degree %d" % n)

    def _cohomology_range(self):
        if self.complete:
            degs = self.space.degrees()
            if not degs:
                return range(0, 0)
            return range(degs[0] - 1, degs[-1] + 2)
        return range(self.window.lo + 1, self.window.hi)

    def require_degree(self, n):
        if not self.complete and not (self.window.lo < n < self.window.hi):
            raise WindowIncomplete("degree %d cohomology needs data outside %r"
                                   % (n, self.window))

    def cocycles(self, n):
        """Basis of ker d^n, as columns."""
        self.require_degree(n)
        return self.diff.block(n).kernel()

    def coboundaries(self, n):
        """Basis of im d^(n-1), as columns."""
        self.require_degree(n)
        return self.diff.block(n - 1).column_space()

    def cohomology_dim(self, n):
        self.require_degree(n)
        return self.cocycles(n).ncols - self.coboundaries(n).ncols

    def cohomology_reps(self, n):
        """Columns representing a basis of H^n: kernel vectors extending a
        basis of the coboundaries, chosen deterministically."""
        K = self.cocycles(n)
        B = self.coboundaries(n)
        reps = []
        cur = B
        for j in range(K.ncols):
            cand = cur.hstack(K.col(j))
            if cand.rank() > cur.rank():
                cur = cand
                reps.append(j)
        out = K.submatrix(range(K.nrows), reps)
        return out


def coordinates_in_quotient(field, reps, boundaries, v):
    """Coordinates of cocycle column v in the basis [reps] of ker/im.

    Solves [reps | boundaries] c = v and returns the reps part.
    """
    if reps.ncols + boundaries.ncols == 0:
        assert v.is_zero()
        return Matrix.zero(field, 0, 1)
    status, c = reps.hstack(boundaries).solve(v)
    assert status == "solution", "vector not a cocycle of the target"
    return c.submatrix(range(reps.ncols), [0])


def induced_map_on_cohomology(f, src, dst, n):
    """Matrix of H^n(f) for a degree-0 chain map f : src -> dst."""
    src.require_degree(n)
    dst.require_degree(n)
    Ks = src.cohomology_reps(n)
    Rd = dst.cohomology_reps(n)
    Bd = dst.coboundaries(n)
    out = Matrix.zero(f.field, Rd.ncols, Ks.ncols)
    for j in range(Ks.ncols):
        v = f.block(n) @ Ks.col(j)
        c = coordinates_in_quotient(f.field, Rd, Bd, v)
        for i in range(Rd.ncols):
            out.rows[i][j] = c.rows[i][0]
    return out


def is_quasi_iso(f, src, dst, degrees):
    """True when H^n(f) is invertible for every n in degrees."""
    for n in degrees:
        m = induced_map_on_cohomology(f, src, dst, n)
        if m.nrows != m.ncols or m.inverse() is None:
            return False
    return True


class HomotopyOutcome:
    """Result of a homotopy search.

    success      -- whether a homotopy was found
    homotopy     -- GradedLinearMap of degree -1 with dh + hd = rhs (when found)
    certificate  -- linear functional on the equations proving infeasibility:
                    list of ((degree, row, col), coeff) with nonzero pairing
                    against rhs but zero against every dh + hd
    degrees      -- degrees whose equations the solve enforced
    """

    def __init__(self, success, homotopy, certificate, degrees):
        self.success = success
        self.homotopy = homotopy
        self.certificate = certificate
        self.degrees = degrees


def solve_homotopy(src, dst, rhs):
    """Find h of degree -1 with d_dst h + h d_src = rhs, exactly.

    src, dst are CochainComplex, rhs a degree-0 GradedLinearMap between
    their spaces.  For incomplete windows only the interior equations are
    posed (degrees lo+1 .. hi-1); completeness of both complexes extends
    the system to everything.  Infeasibility comes with a verified witness.
    """
    F = rhs.field
    if src.complete and dst.complete:
        degs = sorted(set(src.space.degrees()) | set(dst.space.degrees()))
        if not degs:
            return HomotopyOutcome(True, GradedLinearMap(F, src.space, dst.space, -1), None, [])
        eq_degrees = list(range(degs[0] - 1, degs[-1] + 2))
    else:
        lo = max(src.window.lo, dst.window.lo)
        hi = min(src.window.hi, dst.window.hi)
        eq_degrees = list(range(lo + 1, hi))

    h_degrees = sorted({n for n in eq_degrees} | {n + 1 for n in eq_degrees})
    var_index = {}
    for n in h_degrees:
        rows = dst.space.dim(n - 1)
        cols = src.space.dim(n)
        for i in range(rows):
            for j in range(cols):
                var_index[(n, i, j)] = len(var_index)
    nvars = len(var_index)

    eq_index = []
    coeffs = []
    rhs_vec = []
    for n in eq_degrees:
        dn_dst = dst.diff.block(n - 1)
        dn_src = src.diff.block(n)
        rows = dst.space.dim(n)
        cols = src.space.dim(n)
        rn = rhs.block(n)
        for a in range(rows):
            for b in range(cols):
                row = {}
                for k in range(dn_dst.ncols):
                    c = dn_dst.rows[a][k]
                    if c != 0:
                        row[var_index[(n, k, b)]] = F.add(row.get(var_index[(n, k, b)], F.zero()), c)
                for m in range(dn_src.nrows):
                    c = dn_src.rows[m][b]
                    if c != 0:
                        key = var_index[(n + 1, a, m)]
                        row[key] = F.add(row.get(key, F.zero()), c)
                eq_index.append((n, a, b))
                coeffs.append(row)
                rhs_vec.append(rn.rows[a][b])

    A = Matrix.zero(F, len(eq_index), nvars)
    for r, row in enumerate(coeffs):
        for c, v in row.items():
            A.rows[r][c] = v
    b = Matrix(F, len(eq_index), 1, [[v] for v in rhs_vec])

    status, out = A.solve(b)
    if status == "infeasible":
        cert = [(eq_index[i], out.rows[0][i]) for i in range(len(eq_index))
                if out.rows[0][i] != 0]
        return HomotopyOutcome(False, None, cert, eq_degrees)

    h = GradedLinearMap(F, src.space, dst.space, -1)
    for n in h_degrees:
        rows = dst.space.dim(n - 1)
        cols = src.space.dim(n)
        m = Matrix.zero(F, rows, cols)
        for i in range(rows):
            for j in range(cols):
                m.rows[i][j] = out.rows[var_index[(n, i, j)]][0]
        h.set_block(n, m)
    return HomotopyOutcome(True, h, None, eq_degrees)


def homotopy_residual(src, dst, rhs, h, degrees):
    """dh + hd - rhs blockwise on the given degrees (diagnostic helper)."""
    F = rhs.field
    out = {}
    for n in degrees:
        m = dst.diff.block(n - 1) @ h.block(n)
        m = m + h.block(n + 1) @ src.diff.block(n)
        m = m - rhs.block(n)
        if not m.is_zero():
            out[n] = m
    return out
