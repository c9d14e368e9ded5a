"""Synthetic instance generators.

realize_morse builds an integral chain complex with prescribed 3-fold
homology (perfect bases, torsion blocks, birth pairs, then a seeded
unimodular scramble).  The lift_* functions solve, at chain level, for disc
differentials inducing prescribed homology-level structure: the solution
space of "chain map with prescribed induced map" is an affine subspace, so
we assemble one linear system and sample it.
"""

from __future__ import annotations

import random

from .fields import Field, QQ
from .linalg import Matrix, IntegerMatrix
from .complexes import (BasedChainComplex, TwistedPearlComplex, validate_pearl,
                        integral_homology, admissible_characteristic)
from .threefold import ThreefoldHomology, TripleForm
from .spectral import Contraction, page1, page2_rate, collapsing_page, PAGE2, PAGE3

RETRY_BOUND = 32


class ModelError(Exception):
    pass


class Page2Spec:
    """Odd-b narrow data: a triple form with a slice and the rate vector of
    the degree-0 derivation."""

    def __init__(self, H: ThreefoldHomology, I: TripleForm, r):
        if H.b % 2 == 0:
            raise ModelError("odd Betti number required")
        if I.b != H.b:
            raise ModelError("form rank does not match the Betti number")
        if len(r) != H.b or all(x == 0 for x in r):
            raise ModelError("rate vector must be nonzero of length b")
        self.H = H
        self.I = I
        self.r = [int(x) for x in r]


class Page3Spec:
    """Even-b narrow data: the invertible antisymmetric pairing and the
    page-2 rate; the induced degree-1 derivation is A = r * Qprime^{-1}."""

    def __init__(self, H: ThreefoldHomology, Qprime, r: int):
        b = H.b
        if b % 2 == 1:
            raise ModelError("no invertible antisymmetric matrix in odd dimension")
        Q = [[int(x) for x in row] for row in Qprime]
        if len(Q) != b or any(len(row) != b for row in Q):
            raise ModelError("pairing matrix must be b x b")
        for i in range(b):
            for j in range(b):
                if Q[i][j] != -Q[j][i]:
                    raise ModelError("pairing matrix must be antisymmetric")
        if int(r) == 0:
            raise ModelError("rate must be nonzero")
        QM = Matrix.from_int_rows(QQ, Q, nrows=b, ncols=b)
        if b and QQ.is_zero(QM.determinant()):
            raise ModelError("pairing matrix must be invertible")
        self.H = H
        self.Qprime = Q
        self.r = int(r)


def _unimodular(rng, n: int):
    """Random integer matrix of determinant +-1 via elementary row sums."""
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n) if n else 0, rng.randrange(n) if n else 0
        if n == 0 or i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            U[i][k] += c * U[j][k]
    return U


def _int_inverse(U):
    n = len(U)
    M = Matrix.from_int_rows(QQ, U, nrows=n, ncols=n)
    inv = M.inverse()
    out = []
    for row in inv.rows:
        r = []
        for x in row:
            if x.denominator != 1:
                raise ModelError("matrix is not unimodular")
            r.append(int(x))
        out.append(r)
    return out


def realize_morse(H: ThreefoldHomology, shape=(0, 0, 0, 0), seed: int = 0
                  ) -> BasedChainComplex:
    """Integral complex of ranks (1, b, b, 1) plus the given rank surplus,
    whose integral homology is exactly H.

    Torsion factors become diagonal boundary blocks; surplus ranks pair up
    into birth pairs with unit boundary entries (the surplus must decompose
    that way or the shape is infeasible).  A seeded unimodular basis change
    per degree hides the block structure.
    """
    b, tor = H.b, H.torsion
    t = len(tor)
    s0, s1, s2, s3 = (int(x) for x in shape)
    if min(s0, s1, s2, s3) < 0:
        raise ModelError("negative surplus")
    p10, p32 = s0, s3
    p21 = s1 - s0
    if p21 < 0 or s2 - s3 != p21:
        raise ModelError("infeasible shape: surplus does not split into "
                         "cancelling birth pairs")
    r0, r1, r2, r3 = 1 + s0, b + t + s1, b + t + s2, 1 + s3
    # C_1 columns: b free | t torsion targets | p10 deaths to C_0 | p21 targets
    # C_2 columns: b free | t torsion sources | p21 deaths to C_1 | p32 targets
    d1 = [[0] * r1 for _ in range(r0)]
    for a in range(p10):
        d1[1 + a][b + t + a] = 1
    d2 = [[0] * r2 for _ in range(r1)]
    for a, factor in enumerate(tor):
        d2[b + a][b + a] = factor
    for a in range(p21):
        d2[b + t + p10 + a][b + t + a] = 1
    d3 = [[0] * r3 for _ in range(r2)]
    for a in range(p32):
        d3[b + t + p21 + a][1 + a] = 1
    rng = random.Random(seed)
    ranks = [r0, r1, r2, r3]
    U = [_unimodular(rng, n) for n in ranks]
    Ui = [_int_inverse(u) for u in U]

    def conj(d, k):
        A = Matrix.from_int_rows(QQ, Ui[k - 1], nrows=ranks[k - 1], ncols=ranks[k - 1])
        D = Matrix.from_int_rows(QQ, d, nrows=ranks[k - 1], ncols=ranks[k])
        B = Matrix.from_int_rows(QQ, U[k], nrows=ranks[k], ncols=ranks[k])
        out = A * D * B
        return IntegerMatrix([[int(x) for x in row] for row in out.rows],
                             ranks[k - 1], ranks[k])

    C = BasedChainComplex(None, ranks, [conj(d1, 1), conj(d2, 2), conj(d3, 3)])
    got, _reps = integral_homology(C)
    if got.free_ranks != [1, b, b, 1] or got.torsion != [[], tor, [], []]:
        raise ModelError("internal error: realized homology mismatch")
    return C


def homology_bases(morse: BasedChainComplex, field: Field):
    """The distinguished homology bases over the field: integral free-part
    cycle representatives reduced mod the (admissible) characteristic."""
    H, reps = integral_homology(morse)
    if not admissible_characteristic(H, field):
        raise ModelError("characteristic divides the integral torsion")
    out = []
    for k in range(4):
        R = reps[k]
        out.append(Matrix.from_int_rows(field, R.rows, nrows=morse.ranks[k],
                                        ncols=R.ncols))
    return out


class _AffineSystem:
    """Linear equations sum_t A_t U_t B_t = C in several unknown matrices,
    solved by flattening row-major; solutions sampled from the affine space."""

    def __init__(self, field: Field):
        self.field = field
        self.shapes = {}
        self.offsets = {}
        self.size = 0
        self.rows = []
        self.rhs = []

    def unknown(self, name, m, n):
        self.shapes[name] = (m, n)
        self.offsets[name] = self.size
        self.size += m * n

    def equation(self, terms, C: Matrix):
        """terms: list of (A, name, B); A or B may be None for identity."""
        F = self.field
        m_out, n_out = C.nrows, C.ncols
        for p in range(m_out):
            for q in range(n_out):
                row = [F.zero()] * self.size
                for A, name, B in terms:
                    m, n = self.shapes[name]
                    off = self.offsets[name]
                    for i in range(m):
                        a = A.rows[p][i] if A is not None else \
                            (F.one() if p == i else F.zero())
                        if F.is_zero(a):
                            continue
                        for j in range(n):
                            bb = B.rows[j][q] if B is not None else \
                                (F.one() if j == q else F.zero())
                            if F.is_zero(bb):
                                continue
                            row[off + i * n + j] = F.add(row[off + i * n + j],
                                                         F.mul(a, bb))
                self.rows.append(row)
                self.rhs.append(C.rows[p][q])

    def sample(self, rng=None):
        """A random solution, or None when the system is infeasible."""
        F = self.field
        M = Matrix(F, self.rows) if self.rows else Matrix.zeros(F, 0, self.size)
        target = Matrix(F, [[x] for x in self.rhs]) if self.rhs else \
            Matrix.zeros(F, 0, 1)
        x0 = M.solve(target)
        if x0 is None:
            return None
        vec = [x0.rows[i][0] for i in range(self.size)]
        if rng is not None:
            K = M.kernel_basis()
            for c in range(K.ncols):
                coef = F.from_int(rng.randint(-4, 4))
                for i in range(self.size):
                    vec[i] = F.add(vec[i], F.mul(coef, K.rows[i][c]))
        out = {}
        for name, (m, n) in self.shapes.items():
            off = self.offsets[name]
            out[name] = Matrix(F, [[vec[off + i * n + j] for j in range(n)]
                                   for i in range(m)])
        return out


def _lift_d1(morse_F, H, delta, field, rng):
    """Sample d1 maps anticommuting with the Morse boundary and inducing the
    prescribed maps delta[k] : H_k -> H_{k+1} on homology."""
    ranks = morse_F.ranks
    dM = [morse_F.boundary(k) for k in range(5)]
    sysm = _AffineSystem(field)
    for k in range(3):
        sysm.unknown(f"d1_{k}", ranks[k + 1], ranks[k])
    # auxiliary boundary witnesses for the homology conditions
    sysm.unknown("X0", ranks[2], H[0].ncols)
    sysm.unknown("X1", ranks[3], H[1].ncols)
    zero = lambda m, n: Matrix.zeros(field, m, n)
    # anticommutation, one component per degree
    sysm.equation([(dM[1], "d1_0", None)], zero(ranks[0], ranks[0]))
    sysm.equation([(dM[2], "d1_1", None), (None, "d1_0", dM[1])],
                  zero(ranks[1], ranks[1]))
    sysm.equation([(dM[3], "d1_2", None), (None, "d1_1", dM[2])],
                  zero(ranks[2], ranks[2]))
    sysm.equation([(None, "d1_2", dM[3])], zero(ranks[3], ranks[3]))
    # induced maps on homology, with boundary freedom in degrees 0 and 1
    sysm.equation([(None, "d1_0", H[0]), (-dM[2], "X0", None)], H[1] * delta[0])
    sysm.equation([(None, "d1_1", H[1]), (-dM[3], "X1", None)], H[2] * delta[1])
    sysm.equation([(None, "d1_2", H[2])], H[3] * delta[2])
    sol = sysm.sample(rng)
    if sol is None:
        return None
    return [sol["d1_0"], sol["d1_1"], sol["d1_2"]]


def _solve_d2(morse_F, d1, field, rng, rate_target=None, contraction=None,
              h0=None):
    """Sample d2 : C_0 -> C_3 completing d1 to a pearl differential; when
    rate_target is given, also pin the induced page-2 rate."""
    ranks = morse_F.ranks
    dM = [morse_F.boundary(k) for k in range(5)]
    sysm = _AffineSystem(field)
    sysm.unknown("d2", ranks[3], ranks[0])
    sysm.equation([(dM[3], "d2", None)], -(d1[1] * d1[0]))
    sysm.equation([(None, "d2", dM[1])], -(d1[2] * d1[1]))
    if rate_target is not None:
        con, c = contraction, h0
        x2 = dM[2].solve(-(d1[0] * c))
        if x2 is None:
            return None
        rest = con.pi(3) * d1[2] * x2
        want = Matrix(field, [[field.sub(rate_target, rest.rows[0][0])]])
        sysm.equation([(con.pi(3), "d2", c)], want)
    sol = sysm.sample(rng)
    return None if sol is None else sol["d2"]


def _kronecker(field, i, j):
    return field.one() if i == j else field.zero()


def solve_leibniz_derivation(I: TripleForm, r, field: Field, rng=None):
    """The degree-1 component of a derivation extending the rate vector:
    antisymmetric c with, writing the form values as structure constants,
      sum_m I(i,m,k) c_mj = r_i d_jk - d_ij r_k      (duality pairing)
      sum_k I(i,j,k) c_mk = r_i d_jm - r_j d_im      (degree-2 products)
      c r = 0                                        (squares to zero)
    Returns a sampled solution or None when the constraints are infeasible.
    """
    b = I.b
    F = field
    rF = [F.from_int(x) for x in r]
    sysm = _AffineSystem(F)
    sysm.unknown("c", b, b)
    rows = []
    rhs = []
    def coeff_row():
        return [F.zero()] * (b * b)
    for i in range(1, b + 1):
        for j in range(1, b + 1):
            for k in range(1, b + 1):
                row = coeff_row()
                for m in range(1, b + 1):
                    row[(m - 1) * b + (j - 1)] = F.from_int(I.value(i, m, k))
                rows.append(row)
                rhs.append(F.sub(F.mul(rF[i - 1], _kronecker(F, j, k)),
                                 F.mul(_kronecker(F, i, j), rF[k - 1])))
            for m in range(1, b + 1):
                row = coeff_row()
                for k in range(1, b + 1):
                    row[(m - 1) * b + (k - 1)] = F.from_int(I.value(i, j, k))
                rows.append(row)
                rhs.append(F.sub(F.mul(rF[i - 1], _kronecker(F, j, m)),
                                 F.mul(rF[j - 1], _kronecker(F, i, m))))
    for i in range(b):
        for j in range(b):
            row = coeff_row()
            row[i * b + j] = F.one()
            row[j * b + i] = F.add(row[j * b + i], F.one())
            rows.append(row)
            rhs.append(F.zero())
        row = coeff_row()
        for j in range(b):
            row[i * b + j] = rF[j]
        rows.append(row)
        rhs.append(F.zero())
    sysm.rows = rows
    sysm.rhs = rhs
    sol = sysm.sample(rng)
    return None if sol is None else sol["c"]


def _check_spec_homology(morse, H: ThreefoldHomology):
    got, _ = integral_homology(morse)
    if got.free_ranks != [1, H.b, H.b, 1]:
        raise ModelError("complex does not realize the requested Betti numbers")
    if got.torsion != [[], H.torsion, [], []]:
        raise ModelError("complex does not realize the requested torsion")


def lift_derivation_page2(spec: Page2Spec, morse: BasedChainComplex,
                          field: Field, seed: int = 0) -> TwistedPearlComplex:
    """A pearl complex over the field whose page-1 differential is exactly
    the spec's derivation and whose spectral sequence collapses at page 2."""
    _check_spec_homology(morse, spec.H)
    b = spec.H.b
    F = field
    H = homology_bases(morse, F)
    rng = random.Random(seed)
    rF = [F.from_int(x) for x in spec.r]
    if all(F.is_zero(x) for x in rF):
        raise ModelError("not page-2 narrow: rate vector vanishes over the field")
    delta0 = Matrix(F, [[x] for x in rF])
    delta2 = Matrix(F, [list(rF)])
    c = None
    for _ in range(RETRY_BOUND):
        c = solve_leibniz_derivation(spec.I, spec.r, F, rng)
        if c is None:
            raise ModelError("not page-2 narrow: no derivation satisfies the "
                             "product constraints")
        if c.rank() == b - 1:
            break
        c = None
    if c is None:
        raise ModelError("not page-2 narrow: the induced page-1 complex is "
                         "never exact")
    delta = [delta0, c, delta2]
    morse_F = morse.to_field(F)
    for _ in range(RETRY_BOUND):
        d1 = _lift_d1(morse_F, H, delta, F, rng)
        if d1 is None:
            continue
        d2 = _solve_d2(morse_F, d1, F, rng)
        if d2 is None:
            continue
        P = TwistedPearlComplex(F, morse.ranks, morse_F.boundaries[1:], d1, d2)
        if validate_pearl(P):
            continue
        pg = page1(P, H)
        if not all(a == bmat for a, bmat in zip(pg.d1star, delta)):
            continue
        if collapsing_page(P, H) != PAGE2:
            continue
        return P
    raise ModelError("chain-level lift failed within the retry bound")


def lift_derivation_page3(spec: Page3Spec, morse: BasedChainComplex,
                          field: Field, seed: int = 0) -> TwistedPearlComplex:
    """A pearl complex whose page-1 differential is A = r * Qprime^{-1} on
    degree 1 (zero elsewhere) and whose page-2 rate is exactly r."""
    _check_spec_homology(morse, spec.H)
    b = spec.H.b
    F = field
    H = homology_bases(morse, F)
    rng = random.Random(seed)
    rF = F.from_int(spec.r)
    if F.is_zero(rF):
        raise ModelError("rate vanishes over the field")
    Qp = Matrix.from_int_rows(F, spec.Qprime, nrows=b, ncols=b)
    rI = Matrix(F, [[F.mul(rF, _kronecker(F, i, j)) for j in range(b)]
                    for i in range(b)])
    try:
        A = rI * Qp.inverse()
    except Exception as e:
        raise ModelError("pairing matrix is singular over the field") from e
    delta = [Matrix.zeros(F, b, 1), A, Matrix.zeros(F, 1, b)]
    morse_F = morse.to_field(F)
    zero_pearl = TwistedPearlComplex(
        F, morse.ranks, morse_F.boundaries[1:],
        [Matrix.zeros(F, morse.ranks[k + 1], morse.ranks[k]) for k in range(3)],
        Matrix.zeros(F, morse.ranks[3], morse.ranks[0]))
    con = Contraction(zero_pearl, H)
    for _ in range(RETRY_BOUND):
        d1 = _lift_d1(morse_F, H, delta, F, rng)
        if d1 is None:
            continue
        d2 = _solve_d2(morse_F, d1, F, rng, rate_target=rF, contraction=con,
                       h0=H[0])
        if d2 is None:
            continue
        P = TwistedPearlComplex(F, morse.ranks, morse_F.boundaries[1:], d1, d2)
        if validate_pearl(P):
            continue
        pg = page1(P, H)
        if not all(a == bmat for a, bmat in zip(pg.d1star, delta)):
            continue
        if collapsing_page(P, H) != PAGE3:
            continue
        if page2_rate(P, H) != rF:
            continue
        return P
    raise ModelError("chain-level lift failed within the retry bound")


def _random_matrix(field, rng, m, n):
    return Matrix(field, [[field.from_int(rng.randint(-2, 2)) for _ in range(n)]
                          for i in range(m)])


def _sample_square_zero(field, rng, outer_in, outer_out, m, n):
    """Random middle map D (m x n) with D * outer_in = 0 and outer_out * D = 0."""
    sysm = _AffineSystem(field)
    sysm.unknown("D", m, n)
    sysm.equation([(None, "D", outer_in)], Matrix.zeros(field, m, outer_in.ncols))
    sysm.equation([(outer_out, "D", None)], Matrix.zeros(field, outer_out.nrows, n))
    sol = sysm.sample(rng)
    return None if sol is None else sol["D"]


def random_pearl(morse: BasedChainComplex, field: Field,
                 seed: int = 0) -> TwistedPearlComplex:
    """A random valid pearl structure on the Morse complex: a random
    homology-level structure (the square-zero condition is linear in the
    middle map once the outer maps are drawn) lifted to chain level.  No
    narrowness promise."""
    F = field
    morse_F = morse.to_field(F)
    ranks = morse.ranks
    rng = random.Random(seed)
    perfect = all(morse_F.boundary(k).is_zero() for k in range(1, 4))
    H = None if perfect else homology_bases(morse, F)
    hd = ranks if perfect else [H[k].ncols for k in range(4)]
    for _ in range(RETRY_BOUND):
        d0 = _random_matrix(F, rng, hd[1], hd[0])
        d2s = _random_matrix(F, rng, hd[3], hd[2])
        mid = _sample_square_zero(F, rng, d0, d2s, hd[2], hd[1])
        if mid is None:
            continue
        delta = [d0, mid, d2s]
        if perfect:
            d2 = _random_matrix(F, rng, ranks[3], ranks[0])
            P = TwistedPearlComplex(F, ranks, morse_F.boundaries[1:], delta, d2)
            if not validate_pearl(P):
                return P
            continue
        d1 = _lift_d1(morse_F, H, delta, F, rng)
        if d1 is None:
            continue
        d2 = _solve_d2(morse_F, d1, F, rng)
        if d2 is None:
            continue
        P = TwistedPearlComplex(F, ranks, morse_F.boundaries[1:], d1, d2)
        if not validate_pearl(P):
            return P
    raise ModelError("random pearl sampling failed within the retry bound")
