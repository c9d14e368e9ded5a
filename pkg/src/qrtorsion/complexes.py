"""Bounded based chain complexes, twisted pearl complexes, and 2-periodic folds.

A based complex carries the standard basis of each chain group as its
preferred basis.  Pearl complexes are stored over a field, already twisted:
the Morse part lowers degree by one, the disc corrections d1 (degree +1) and
d2 (degree +3) come from the minimal Maslov number being two on a 3-fold.
"""

from __future__ import annotations

from .fields import Field, QQ
from .linalg import IntegerMatrix, Matrix, smith_normal_form


class ComplexError(Exception):
    pass


class BasedChainComplex:
    """Bounded complex with integer or field boundary matrices.

    ``boundaries[k]`` is d_k : C_k -> C_{k-1} for k = 1..n (index 0 is None).
    Over the integers pass ``field=None`` and IntegerMatrix boundaries.
    """

    def __init__(self, field, ranks, boundaries):
        self.field: Field | None = field
        self.ranks = list(ranks)
        n = len(self.ranks) - 1
        if len(boundaries) != n:
            raise ComplexError(f"expected {n} boundary maps, got {len(boundaries)}")
        self.boundaries = [None] + list(boundaries)
        for k in range(1, n + 1):
            d = self.boundaries[k]
            if d.nrows != self.ranks[k - 1] or d.ncols != self.ranks[k]:
                raise ComplexError(f"boundary d_{k} has shape {d.nrows}x{d.ncols}, "
                                   f"expected {self.ranks[k - 1]}x{self.ranks[k]}")
        for k in range(2, n + 1):
            if not (self.boundaries[k - 1] * self.boundaries[k]).is_zero():
                raise ComplexError(f"d_{k - 1} d_{k} != 0")

    @property
    def top_degree(self):
        return len(self.ranks) - 1

    def boundary(self, k):
        """d_k : C_k -> C_{k-1}; zero map outside the stored range."""
        n = self.top_degree
        if 1 <= k <= n:
            return self.boundaries[k]
        rows = self.ranks[k - 1] if 0 <= k - 1 <= n else 0
        cols = self.ranks[k] if 0 <= k <= n else 0
        if self.field is None:
            return IntegerMatrix.zeros(rows, cols)
        return Matrix.zeros(self.field, rows, cols)

    def to_field(self, field: Field) -> "BasedChainComplex":
        """Reduce an integral complex modulo the field (or inject into Q)."""
        if self.field is not None:
            raise ComplexError("complex already has field coefficients")
        return BasedChainComplex(field, self.ranks,
                                 [self.boundaries[k].to_field(field)
                                  for k in range(1, self.top_degree + 1)])


class IntegralHomology:
    """Per-degree free ranks and invariant factors (divisibility chains)."""

    def __init__(self, free_ranks, torsion):
        self.free_ranks = list(free_ranks)
        self.torsion = [list(t) for t in torsion]

    def torsion_order(self, k) -> int:
        out = 1
        for a in (self.torsion[k] if k < len(self.torsion) else []):
            out *= a
        return out

    def __repr__(self):
        return f"IntegralHomology(b={self.free_ranks}, tor={self.torsion})"

    def __eq__(self, other):
        return (isinstance(other, IntegralHomology)
                and other.free_ranks == self.free_ranks and other.torsion == self.torsion)


def integral_homology(C: BasedChainComplex):
    """Homology of an integral complex: ranks, invariant factors, and integral
    cycle representatives whose classes base the free part in every degree.

    Representatives stay a basis after reduction modulo any admissible prime.
    """
    if C.field is not None:
        raise ComplexError("integral_homology needs integer coefficients")
    n = C.top_degree
    free_ranks, torsion, reps = [], [], []
    for k in range(n + 1):
        dk = C.boundary(k)
        dk1 = C.boundary(k + 1)
        # integral kernel of d_k via SNF: columns of V at zero invariant factors
        s = smith_normal_form(dk)
        diag = s.diagonal
        rank_dk = sum(1 for a in diag if a != 0)
        kernel_cols = list(range(rank_dk, dk.ncols))
        Z = IntegerMatrix([[s.V.rows[i][j] for j in kernel_cols] for i in range(dk.ncols)],
                          dk.ncols, len(kernel_cols))
        zk = Z.ncols
        # boundaries in kernel coordinates (integral since Z is a lattice basis)
        ZQ = Z.to_field(QQ)
        BQ = dk1.to_field(QQ)
        Y = ZQ.solve(BQ)
        if Y is None:
            raise ComplexError("image does not lie in the kernel (d^2 != 0?)")
        Yint = IntegerMatrix([[_as_int(x) for x in row] for row in Y.rows], zk, dk1.ncols)
        sq = smith_normal_form(Yint)
        dq = sq.diagonal
        rank_im = sum(1 for a in dq if a != 0)
        invf = [a for a in dq if a > 1]
        free_ranks.append(zk - rank_im)
        torsion.append(invf)
        # free-part representatives: Z * U^{-1} columns past the image rank.
        # U^{-1} is recovered by solving over Q (entries are integers).
        Uinv = sq.U.to_field(QQ).inverse()
        Uinv_int = IntegerMatrix([[_as_int(x) for x in row] for row in Uinv.rows], zk, zk)
        pick = IntegerMatrix([[1 if (i == rank_im + j) else 0 for j in range(zk - rank_im)]
                              for i in range(zk)], zk, zk - rank_im)
        reps.append(Z * (Uinv_int * pick))
    return IntegralHomology(free_ranks, torsion), reps


def _as_int(x):
    if x.denominator != 1:
        raise ComplexError("expected an integral solution")
    return x.numerator


def admissible_characteristic(H: IntegralHomology, field: Field) -> bool:
    """True iff the field characteristic is 0, or an odd prime dividing no
    invariant factor of the homology."""
    if field.char == 0:
        return True
    if field.char == 2:
        return False
    for t in H.torsion:
        for a in t:
            if a % field.char == 0:
                return False
    return True


class TwistedPearlComplex:
    """Morse complex (degrees 0..3) over a field with disc corrections.

    dM[k] : C_k -> C_{k-1} (k=1..3), d1[k] : C_k -> C_{k+1} (k=0..2),
    d2 : C_0 -> C_3.
    """

    TOP = 3

    def __init__(self, field, ranks, dM, d1, d2):
        if len(ranks) != 4:
            raise ComplexError("pearl complexes live in degrees 0..3")
        self.field = field
        self.ranks = list(ranks)
        self.base = BasedChainComplex(field, ranks, dM)
        if len(d1) != 3:
            raise ComplexError("expected d1 maps for degrees 0..2")
        self.d1 = list(d1)
        for k in range(3):
            m = self.d1[k]
            if m.nrows != ranks[k + 1] or m.ncols != ranks[k]:
                raise ComplexError(f"d1[{k}] has shape {m.nrows}x{m.ncols}, "
                                   f"expected {ranks[k + 1]}x{ranks[k]}")
        if d2.nrows != ranks[3] or d2.ncols != ranks[0]:
            raise ComplexError("d2 must map C_0 -> C_3")
        self.d2 = d2

    def dM(self, k) -> Matrix:
        return self.base.boundary(k)

    def d1_map(self, k) -> Matrix:
        """d1 : C_k -> C_{k+1}; zero outside 0..2."""
        if 0 <= k <= 2:
            return self.d1[k]
        rows = self.ranks[k + 1] if 0 <= k + 1 <= 3 else 0
        cols = self.ranks[k] if 0 <= k <= 3 else 0
        return Matrix.zeros(self.field, rows, cols)


def validate_pearl(P: TwistedPearlComplex) -> list[str]:
    """Names of the graded components of d^2 = 0 that fail; empty iff valid."""
    bad = []
    # d_M^2 = 0 is enforced by BasedChainComplex; re-check the two disc identities.
    for k in range(4):
        # (d_M d1 + d1 d_M) : C_k -> C_k
        t = P.dM(k + 1) * P.d1_map(k)
        t = t + P.d1_map(k - 1) * P.dM(k)
        if not t.is_zero():
            bad.append(f"d_M d1 + d1 d_M != 0 in degree {k}")
    for k in range(2):
        # (d1^2 + d_M d2 + d2 d_M) : C_k -> C_{k+2}
        t = P.d1_map(k + 1) * P.d1_map(k)
        if k == 0:
            t = t + P.dM(3) * P.d2
        if k == 1:
            t = t + P.d2 * P.dM(1)
        if not t.is_zero():
            bad.append(f"d1^2 + d_M d2 + d2 d_M != 0 in degree {k}")
    return bad


class PeriodicComplex:
    """2-periodic complex: d_oe : C_odd -> C_even and d_eo : C_even -> C_odd."""

    def __init__(self, field, n_odd, n_even, d_oe, d_eo):
        self.field = field
        self.n_odd = n_odd
        self.n_even = n_even
        if d_oe.nrows != n_even or d_oe.ncols != n_odd:
            raise ComplexError("d_oe must map C_odd -> C_even")
        if d_eo.nrows != n_odd or d_eo.ncols != n_even:
            raise ComplexError("d_eo must map C_even -> C_odd")
        self.d_oe = d_oe
        self.d_eo = d_eo
        if not (d_oe * d_eo).is_zero() or not (d_eo * d_oe).is_zero():
            raise ComplexError("periodic differentials do not compose to zero")

    def is_acyclic(self) -> bool:
        # im(d_eo) sits inside ker(d_oe); equality is a rank count (same on
        # the other side by symmetry of the two rank-nullity identities).
        return self.d_oe.rank() + self.d_eo.rank() == self.n_odd == self.n_even


def fold_periodic(P: TwistedPearlComplex) -> PeriodicComplex:
    """Fold the pearl complex to its 2-periodic form: C_odd = C_1 + C_3,
    C_even = C_0 + C_2, blocks taken from d_M, d1, d2 by degree."""
    bad = validate_pearl(P)
    if bad:
        raise ComplexError("invalid pearl complex: " + "; ".join(bad))
    F = P.field
    r = P.ranks
    d_oe = Matrix.block(F, [[P.dM(1), None],
                            [P.d1_map(1), P.dM(3)]],
                        [r[0], r[2]], [r[1], r[3]])
    d_eo = Matrix.block(F, [[P.d1_map(0), P.dM(2)],
                            [P.d2, P.d1_map(2)]],
                        [r[1], r[3]], [r[0], r[2]])
    return PeriodicComplex(F, r[1] + r[3], r[0] + r[2], d_oe, d_eo)
