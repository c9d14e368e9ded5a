"""Exact dense linear algebra over a field, plus integer Smith normal form.

Matrices are small (homology-sized), so plain Gaussian elimination over exact
scalars is the right tool.  0 x n and n x 0 matrices are legal everywhere; the
determinant of the 0 x 0 matrix is 1 (empty-product convention).
"""

from __future__ import annotations

from .fields import Field, FieldError


class LinAlgError(Exception):
    pass


class Matrix:
    """Dense matrix over a :class:`Field`; entries are raw field values."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows, nrows=None, ncols=None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows) if nrows is None else nrows
        self.ncols = (len(self.rows[0]) if self.rows else 0) if ncols is None else ncols
        for r in self.rows:
            if len(r) != self.ncols:
                raise LinAlgError("ragged rows")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero()
        return cls(field, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        one = field.one()
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def from_int_rows(cls, field, int_rows, nrows=None, ncols=None):
        rows = [[field.from_int(x) for x in r] for r in int_rows]
        return cls(field, rows, nrows, ncols)

    @classmethod
    def column(cls, field, entries):
        return cls(field, [[e] for e in entries], len(entries), 1)

    def copy(self):
        return Matrix(self.field, [list(r) for r in self.rows], self.nrows, self.ncols)

    # -- basic algebra -----------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field == self.field
                and other.nrows == self.nrows and other.ncols == self.ncols
                and other.rows == self.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(r) for r in self.rows)))

    def __add__(self, other):
        self._check_shape(other, same=True)
        F = self.field
        rows = [[F.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        return Matrix(F, rows, self.nrows, self.ncols)

    def __sub__(self, other):
        self._check_shape(other, same=True)
        F = self.field
        rows = [[F.sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        return Matrix(F, rows, self.nrows, self.ncols)

    def __neg__(self):
        F = self.field
        return Matrix(F, [[F.neg(a) for a in r] for r in self.rows], self.nrows, self.ncols)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.ncols != other.nrows:
            raise LinAlgError(f"shape mismatch {self.nrows}x{self.ncols} * {other.nrows}x{other.ncols}")
        F = self.field
        z = F.zero()
        out = Matrix.zeros(F, self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out.rows[i]
            for k in range(self.ncols):
                a = ri[k]
                if F.is_zero(a):
                    continue
                rk = other.rows[k]
                for j in range(other.ncols):
                    b = rk[j]
                    if b != z:
                        oi[j] = F.add(oi[j], F.mul(a, b))
        return out

    def scale(self, c):
        F = self.field
        return Matrix(F, [[F.mul(c, a) for a in r] for r in self.rows], self.nrows, self.ncols)

    def transpose(self):
        return Matrix(self.field, [[self.rows[i][j] for i in range(self.nrows)]
                                   for j in range(self.ncols)], self.ncols, self.nrows)

    def is_zero(self):
        F = self.field
        return all(F.is_zero(a) for r in self.rows for a in r)

    def _check_shape(self, other, same=False):
        if other.field != self.field:
            raise LinAlgError("field mismatch")
        if same and (other.nrows != self.nrows or other.ncols != self.ncols):
            raise LinAlgError("shape mismatch")

    # -- slicing / stacking ------------------------------------------------

    def col(self, j):
        return Matrix(self.field, [[r[j]] for r in self.rows], self.nrows, 1)

    def cols(self, js):
        return Matrix(self.field, [[r[j] for j in js] for r in self.rows], self.nrows, len(js))

    def submatrix(self, ris, cjs):
        return Matrix(self.field, [[self.rows[i][j] for j in cjs] for i in ris],
                      len(ris), len(cjs))

    def hstack(self, other):
        self._check_shape(other)
        if other.nrows != self.nrows:
            raise LinAlgError("row count mismatch in hstack")
        rows = [r1 + r2 for r1, r2 in zip(self.rows, other.rows)]
        return Matrix(self.field, rows, self.nrows, self.ncols + other.ncols)

    def vstack(self, other):
        self._check_shape(other)
        if other.ncols != self.ncols:
            raise LinAlgError("column count mismatch in vstack")
        return Matrix(self.field, self.rows + other.rows, self.nrows + other.nrows, self.ncols)

    @classmethod
    def hstack_all(cls, field, mats, nrows=None):
        mats = list(mats)
        if not mats:
            if nrows is None:
                raise LinAlgError("hstack_all of nothing needs nrows")
            return cls.zeros(field, nrows, 0)
        out = mats[0]
        for m in mats[1:]:
            out = out.hstack(m)
        return out

    @classmethod
    def block(cls, field, grid, row_dims, col_dims):
        """Assemble a block matrix; ``None`` blocks are zero."""
        out = cls.zeros(field, sum(row_dims), sum(col_dims))
        r0 = 0
        for bi, rdim in enumerate(row_dims):
            c0 = 0
            for bj, cdim in enumerate(col_dims):
                blk = grid[bi][bj]
                if blk is not None:
                    if blk.nrows != rdim or blk.ncols != cdim:
                        raise LinAlgError("block shape mismatch")
                    for i in range(rdim):
                        out.rows[r0 + i][c0:c0 + cdim] = list(blk.rows[i])
                c0 += cdim
            r0 += rdim
        return out

    # -- elimination -------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        F = self.field
        R = self.copy()
        pivots = []
        pr = 0
        for pc in range(self.ncols):
            pivot_row = None
            for i in range(pr, self.nrows):
                if not F.is_zero(R.rows[i][pc]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            R.rows[pr], R.rows[pivot_row] = R.rows[pivot_row], R.rows[pr]
            inv = F.inv(R.rows[pr][pc])
            R.rows[pr] = [F.mul(inv, a) for a in R.rows[pr]]
            for i in range(self.nrows):
                if i == pr:
                    continue
                c = R.rows[i][pc]
                if F.is_zero(c):
                    continue
                R.rows[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(R.rows[i], R.rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.nrows:
                break
        return R, pivots

    def rank(self):
        return len(self.rref()[1])

    def pivot_columns(self):
        return self.rref()[1]

    def kernel_basis(self):
        """Matrix whose columns form a basis of the kernel."""
        F = self.field
        R, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        out = Matrix.zeros(F, self.ncols, len(free))
        for idx, j in enumerate(free):
            out.rows[j][idx] = F.one()
            for pi, pc in enumerate(pivots):
                out.rows[pc][idx] = F.neg(R.rows[pi][j])
        return out

    def column_space_basis(self):
        """Columns of self at the rref pivot set: a basis of the image."""
        return self.cols(self.pivot_columns())

    def determinant(self):
        if self.nrows != self.ncols:
            raise LinAlgError("determinant of non-square matrix")
        F = self.field
        n = self.nrows
        if n == 0:
            return F.one()
        M = [list(r) for r in self.rows]
        det = F.one()
        for c in range(n):
            piv = None
            for i in range(c, n):
                if not F.is_zero(M[i][c]):
                    piv = i
                    break
            if piv is None:
                return F.zero()
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = F.neg(det)
            det = F.mul(det, M[c][c])
            inv = F.inv(M[c][c])
            for i in range(c + 1, n):
                f = F.mul(M[i][c], inv)
                if F.is_zero(f):
                    continue
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[c])]
        return det

    def solve(self, b: "Matrix"):
        """Some X with self @ X = b, or None when there is no solution."""
        if b.nrows != self.nrows:
            raise LinAlgError("rhs row count mismatch")
        F = self.field
        aug = self.hstack(b)
        R, pivots = aug.rref()
        n = self.ncols
        for pi, pc in enumerate(pivots):
            if pc >= n:
                return None
        X = Matrix.zeros(F, n, b.ncols)
        for pi, pc in enumerate(pivots):
            X.rows[pc] = list(R.rows[pi][n:])
        return X

    def inverse(self):
        if self.nrows != self.ncols:
            raise LinAlgError("inverse of non-square matrix")
        X = self.solve(Matrix.identity(self.field, self.nrows))
        if X is None or not (self * X == Matrix.identity(self.field, self.nrows)):
            raise LinAlgError("matrix is singular")
        return X

    def __repr__(self):
        F = self.field
        body = "; ".join(" ".join(F.format(a) for a in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols} over {F!r}: [{body}])"


# ---------------------------------------------------------------------------
# Integer matrices and Smith normal form
# ---------------------------------------------------------------------------

class IntegerMatrix:
    """Dense matrix with arbitrary-precision integer entries."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, nrows=None, ncols=None):
        self.rows = [list(map(int, r)) for r in rows]
        self.nrows = len(self.rows) if nrows is None else nrows
        self.ncols = (len(self.rows[0]) if self.rows else 0) if ncols is None else ncols
        for r in self.rows:
            if len(r) != self.ncols:
                raise LinAlgError("ragged rows")

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n):
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = 1
        return m

    def copy(self):
        return IntegerMatrix([list(r) for r in self.rows], self.nrows, self.ncols)

    def __eq__(self, other):
        return (isinstance(other, IntegerMatrix) and other.nrows == self.nrows
                and other.ncols == self.ncols and other.rows == self.rows)

    def __mul__(self, other):
        if self.ncols != other.nrows:
            raise LinAlgError("shape mismatch")
        out = IntegerMatrix.zeros(self.nrows, other.ncols)
        for i in range(self.nrows):
            for k in range(self.ncols):
                a = self.rows[i][k]
                if a == 0:
                    continue
                for j in range(other.ncols):
                    out.rows[i][j] += a * other.rows[k][j]
        return out

    def __neg__(self):
        return IntegerMatrix([[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def is_zero(self):
        return all(a == 0 for r in self.rows for a in r)

    def transpose(self):
        return IntegerMatrix([[self.rows[i][j] for i in range(self.nrows)]
                              for j in range(self.ncols)], self.ncols, self.nrows)

    def to_field(self, field) -> Matrix:
        return Matrix.from_int_rows(field, self.rows, self.nrows, self.ncols)

    def determinant(self) -> int:
        """Integer determinant (Bareiss fraction-free elimination)."""
        if self.nrows != self.ncols:
            raise LinAlgError("determinant of non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        M = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if M[k][k] == 0:
                piv = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
                if piv is None:
                    return 0
                M[k], M[piv] = M[piv], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
                M[i][k] = 0
            prev = M[k][k]
        return sign * M[n - 1][n - 1]

    def __repr__(self):
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"IntegerMatrix({self.nrows}x{self.ncols}: [{body}])"


class SmithDecomposition:
    """U @ A @ V = D with U, V unimodular and D diagonal with a divisibility chain."""

    __slots__ = ("U", "D", "V")

    def __init__(self, U, D, V):
        self.U = U
        self.D = D
        self.V = V

    @property
    def diagonal(self):
        n = min(self.D.nrows, self.D.ncols)
        return [self.D.rows[i][i] for i in range(n)]

    @property
    def invariant_factors(self):
        """Nontrivial invariant factors (entries > 1)."""
        return [d for d in self.diagonal if d > 1]


def smith_normal_form(A: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivoting picks the smallest-absolute-value nonzero entry (rows swapped
    before columns) so the output is deterministic.
    """
    D = A.copy()
    U = IntegerMatrix.identity(A.nrows)
    V = IntegerMatrix.identity(A.ncols)
    n, m = A.nrows, A.ncols

    def row_op(i, j, q):
        # row_i -= q * row_j in D and U
        for M in (D, U):
            M.rows[i] = [a - q * b for a, b in zip(M.rows[i], M.rows[j])]

    def col_op(i, j, q):
        # col_i -= q * col_j in D and V
        for M in (D, V):
            for r in M.rows:
                r[i] -= q * r[j]

    def swap_rows(i, j):
        for M in (D, U):
            M.rows[i], M.rows[j] = M.rows[j], M.rows[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M.rows:
                r[i], r[j] = r[j], r[i]

    def negate_row(i):
        for M in (D, U):
            M.rows[i] = [-a for a in M.rows[i]]

    def diagonalize(t0):
        t = t0
        while t < min(n, m):
            # re-select the smallest-abs nonzero pivot on every pass; this
            # keeps intermediate entries from exploding on scrambled inputs
            while True:
                best = None
                for i in range(t, n):
                    for j in range(t, m):
                        a = D.rows[i][j]
                        if a != 0 and (best is None or
                                       abs(a) < abs(D.rows[best[0]][best[1]])):
                            best = (i, j)
                if best is None:
                    return
                bi, bj = best
                if bi != t:
                    swap_rows(t, bi)
                if bj != t:
                    swap_cols(t, bj)
                p = D.rows[t][t]
                cleared = True
                for i in range(t + 1, n):
                    a = D.rows[i][t]
                    if a != 0:
                        row_op(i, t, a // p)
                        if D.rows[i][t] != 0:
                            cleared = False
                for j in range(t + 1, m):
                    a = D.rows[t][j]
                    if a != 0:
                        col_op(j, t, a // p)
                        if D.rows[t][j] != 0:
                            cleared = False
                if not cleared:
                    continue
                bad = next(((i, j) for i in range(t + 1, n)
                            for j in range(t + 1, m) if D.rows[i][j] % p),
                           None)
                if bad is None:
                    break
                # fold a non-divisible row into the pivot row so the next
                # pass strictly shrinks the pivot
                row_op(t, bad[0], -1)
            if D.rows[t][t] < 0:
                negate_row(t)
            t += 1

    diagonalize(0)
    # enforce the divisibility chain: where it fails, mix the two columns and
    # rediagonalize from that spot (yields gcd/lcm of the offending pair)
    k = min(n, m)
    while True:
        bad = None
        for i in range(k - 1):
            a, b = D.rows[i][i], D.rows[i + 1][i + 1]
            if a != 0 and b % a != 0:
                bad = i
                break
        if bad is None:
            break
        col_op(bad, bad + 1, -1)  # col_bad += col_{bad+1}
        diagonalize(bad)
    return SmithDecomposition(U, D, V)
