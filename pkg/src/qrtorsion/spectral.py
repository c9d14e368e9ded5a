"""The degree spectral sequence of a twisted pearl complex.

Page 1 is homology of the Morse part with the disc map d1 projected to it;
the page-2 differential is computed literally from the filtration quotients
Z^r / (Z^{r-1} + B^{r-1}), so the adapted-basis closed form (alpha - M6 M1)
is an independent path to the same scalar.  The power of the page variable is
never materialized: each d_i carries a fixed power, so the bookkeeping is the
degree index alone.

Degrees are 0..3 throughout (pearl complexes of 3-folds, minimal Maslov
number two).
"""

from __future__ import annotations

import random

from .fields import Field, SignClass
from .linalg import Matrix
from .complexes import ComplexError, TwistedPearlComplex, validate_pearl
from .torsion import _image_basis, _lift


class SpectralError(Exception):
    pass


class WrongPageError(SpectralError):
    pass


PAGE2 = "Page2"
PAGE3 = "Page3"
NOT_NARROW = "NotNarrow"


class PageOne:
    """Homology ranks of the Morse part and the induced degree +1 differential
    d1star_k : H_k -> H_{k+1} in the chosen homology bases."""

    def __init__(self, ranks, d1star, bases):
        self.ranks = list(ranks)
        self.d1star = list(d1star)
        self.bases = list(bases)

    def homology_ranks(self):
        """Ranks of the homology of (E^1, d1star), degree by degree."""
        out = []
        for k in range(4):
            din = self.d1star[k - 1] if k >= 1 else None
            dout = self.d1star[k] if k <= 2 else None
            z = self.ranks[k] - (dout.rank() if dout is not None else 0)
            b = din.rank() if din is not None else 0
            out.append(z - b)
        return out

    def is_exact(self):
        return all(r == 0 for r in self.homology_ranks())


class PageTwo:
    """Survivor ranks on page two and the induced rate on the two 3-fold
    survivor slots (degree 0 to degree 3) when both have rank one."""

    def __init__(self, surviving_ranks, rate):
        self.surviving_ranks = list(surviving_ranks)
        self.rate = rate


class Contraction:
    """Deterministic strong deformation retraction of (C_*, d_M) onto its
    homology: inclusion iota (the given representatives), projection pi, and
    a homotopy K with d_M K + K d_M = 1 - iota pi, K^2 = 0, pi K = 0,
    K iota = 0.

    Built from the adapted bases [h_k | b_k | s(b_{k-1})] of each chain
    group; pass an rng to randomize the image bases and sections.
    """

    def __init__(self, P: TwistedPearlComplex, H, rng=None):
        F = P.field
        self.field = F
        self.P = P
        self.H = list(H)
        self.hdims = [H[k].ncols for k in range(4)]
        self.b = []        # basis of B_k = im(d_M : C_{k+1} -> C_k), inside C_k
        self.s = []        # lifts: s[k] has d_M s[k] = b[k], columns in C_{k+1}
        for k in range(4):
            bk = _image_basis(P.dM(k + 1), rng)
            self.b.append(bk)
            self.s.append(_lift(P.dM(k + 1), bk, rng) if bk.ncols else
                          Matrix.zeros(F, P.ranks[k + 1] if k + 1 <= 3 else 0, 0))
        self.T = []        # adapted basis per degree, and its inverse
        self.Tinv = []
        for k in range(4):
            below = self.s[k - 1] if k >= 1 else Matrix.zeros(F, P.ranks[k], 0)
            Tk = Matrix.hstack_all(F, [H[k], self.b[k], below], nrows=P.ranks[k])
            if Tk.ncols != P.ranks[k]:
                raise SpectralError(f"homology basis in degree {k} has the wrong rank")
            try:
                self.Tinv.append(Tk.inverse())
            except Exception as e:
                raise SpectralError(f"degree {k}: homology representatives do not "
                                    "base the Morse homology") from e
            self.T.append(Tk)
        if not all((P.dM(k) * H[k]).is_zero() for k in range(4)):
            raise SpectralError("homology representatives must be cycles")

    def pi(self, k) -> Matrix:
        """Projection C_k -> H_k along boundaries and section columns."""
        return self.Tinv[k].submatrix(range(self.hdims[k]), range(self.P.ranks[k]))

    def b_coords(self, k) -> Matrix:
        """Coordinates on the boundary block of C_k."""
        h = self.hdims[k]
        return self.Tinv[k].submatrix(range(h, h + self.b[k].ncols),
                                      range(self.P.ranks[k]))

    def K(self, k) -> Matrix:
        """Homotopy component C_k -> C_{k+1}: send each boundary basis vector
        to its chosen lift, kill homology and section directions."""
        F = self.field
        if k >= 3 or self.b[k].ncols == 0:
            rows = self.P.ranks[k + 1] if k + 1 <= 3 else 0
            return Matrix.zeros(F, rows, self.P.ranks[k])
        return self.s[k] * self.b_coords(k)


def page1(P: TwistedPearlComplex, H, rng=None) -> PageOne:
    """First page: Morse homology with the projection of d1.

    The projection is well defined because d1 anticommutes with d_M, so d1 of
    a cycle is again a cycle.
    """
    bad = validate_pearl(P)
    if bad:
        raise SpectralError("invalid pearl complex: " + "; ".join(bad))
    con = Contraction(P, H, rng)
    d1star = [con.pi(k + 1) * P.d1_map(k) * H[k] for k in range(3)]
    for k in range(2):
        if not (d1star[k + 1] * d1star[k]).is_zero():
            raise SpectralError("page-1 differential does not square to zero")
    return PageOne([H[k].ncols for k in range(4)], d1star, H)


def page2_rate(P: TwistedPearlComplex, H, rng=None):
    """The page-2 differential on the two survivor slots, computed from the
    literal filtration quotients Z^2 / (Z^1 + B^1).

    Requires the 3-fold narrow page-3 pattern: page-1 homology of ranks
    (1, 0, 0, 1).  Returns the rate as a scalar.
    """
    F = P.field
    pg1 = page1(P, H, rng)
    if pg1.homology_ranks() != [1, 0, 0, 1]:
        raise WrongPageError(f"page-1 homology ranks {pg1.homology_ranks()} "
                             "do not match the page-3 survivor pattern")
    r0, r1, r2, r3 = P.ranks
    # E^2 at the degree-0 slot: pairs (x0, x2) with d1 x0 + d_M x2 = 0,
    # modulo d_M-cycles in C_2 and the boundary pairs (d_M y1, d1 y1 + d_M y3).
    big = Matrix.hstack_all(F, [P.d1_map(0), P.dM(2)], nrows=r1)
    V = big.kernel_basis()                      # columns in C_0 + C_2
    z2 = P.dM(2).kernel_basis()
    Wcols = []
    Wcols.append(Matrix.block(F, [[Matrix.zeros(F, r0, z2.ncols)], [z2]],
                              [r0, r2], [z2.ncols]))
    bdry = Matrix.block(F, [[P.dM(1), Matrix.zeros(F, r0, r3)],
                            [P.d1_map(1), P.dM(3)]], [r0, r2], [r1, r3])
    Wcols.append(bdry)
    W = Matrix.hstack_all(F, Wcols, nrows=r0 + r2)
    dimE2 = V.rank() - W.rank()
    if dimE2 != 1:
        raise WrongPageError(f"E^2 at the bottom slot has rank {dimE2}, expected 1")
    # representative of the generator: the degree-0 homology class lifted so
    # its differential drops two filtration steps
    c = H[0]                                    # single column (rank pattern)
    x2 = P.dM(2).solve(-(P.d1_map(0) * c))
    if x2 is None:
        raise WrongPageError("degree-0 class does not lift into Z^2")
    u = P.d2 * c + P.d1_map(2) * x2             # lands in cycles of C_3
    if not (P.dM(3) * u).is_zero():
        raise SpectralError("page-2 image is not a cycle (internal error)")
    # express u in E^2 at the top slot = Z_3(d_M) / d1(Z_2(d_M)), basis [h_3]
    denom = P.d1_map(2) * z2
    sol = Matrix.hstack_all(F, [H[3], denom], nrows=r3).solve(u)
    if sol is None:
        raise SpectralError("page-2 image escapes the top-slot quotient")
    rate = sol.rows[0][0]
    if F.is_zero(rate):
        raise WrongPageError("not narrow at page 3: the page-2 rate vanishes")
    return rate


def closed_form_r(P: TwistedPearlComplex, H, rng=None):
    """The same rate read off the adapted-basis block matrices: extract the
    blocks alpha (top row of d2 at the degree-0 class), M1 (boundary rows of
    d1 at the degree-0 class) and M6 (top row of d1 on the section columns of
    C_2), and return alpha - M6 M1."""
    pg1 = page1(P, H)
    if pg1.homology_ranks() != [1, 0, 0, 1]:
        raise WrongPageError(f"page-1 homology ranks {pg1.homology_ranks()} "
                             "do not match the page-3 survivor pattern")
    con = Contraction(P, H, rng)
    alpha = con.pi(3) * P.d2 * H[0]
    M1 = con.b_coords(1) * P.d1_map(0) * H[0]
    M6 = con.pi(3) * P.d1_map(2) * con.s[1]
    val = alpha - M6 * M1
    rate = val.rows[0][0]
    if P.field.is_zero(rate):
        raise WrongPageError("not narrow at page 3: the closed-form rate vanishes")
    return rate


def collapsing_page(P: TwistedPearlComplex, H) -> str:
    """Classify the collapse: Page2 when the first page is exact, Page3 when
    only the two survivor slots remain and the page-2 rate is invertible,
    NotNarrow otherwise."""
    pg1 = page1(P, H)
    hr = pg1.homology_ranks()
    if all(r == 0 for r in hr):
        return PAGE2
    if hr == [1, 0, 0, 1]:
        try:
            page2_rate(P, H)
            return PAGE3
        except WrongPageError:
            return NOT_NARROW
    return NOT_NARROW


class MinimalModel:
    """Pearl complex on the homology (vanishing Morse part) together with the
    comparison quasi-isomorphisms to and from the original complex and the
    chain homotopy tying them together."""

    def __init__(self, model, phi, psi, homotopy, hdims):
        self.model = model          # TwistedPearlComplex with d_M = 0
        self.phi = phi              # total matrix: original -> model
        self.psi = psi              # total matrix: model -> original
        self.homotopy = homotopy    # total matrix on the original complex
        self.hdims = hdims

    @property
    def delta1(self):
        return self.model.d1

    @property
    def delta2(self):
        return self.model.d2


def _offsets(ranks):
    out = [0]
    for r in ranks:
        out.append(out[-1] + r)
    return out


def _total_map(field, src_ranks, dst_ranks, blocks):
    """Assemble a sum-of-degrees map from graded blocks.

    ``blocks`` is a list of (src_degree, dst_degree, Matrix).
    """
    so = _offsets(src_ranks)
    do = _offsets(dst_ranks)
    M = Matrix.zeros(field, do[-1], so[-1])
    for sd, dd, blk in blocks:
        if blk.nrows != dst_ranks[dd] or blk.ncols != src_ranks[sd]:
            raise SpectralError("graded block shape mismatch")
        for i in range(blk.nrows):
            row = M.rows[do[dd] + i]
            for j in range(blk.ncols):
                row[so[sd] + j] = blk.rows[i][j]
    return M


def _block_of(M, src_ranks, dst_ranks, sd, dd):
    so = _offsets(src_ranks)
    do = _offsets(dst_ranks)
    return M.submatrix(range(do[dd], do[dd + 1]), range(so[sd], so[sd + 1]))


def minimal_model(P: TwistedPearlComplex, H, rng=None) -> MinimalModel:
    """Homological perturbation of the contraction onto Morse homology by the
    disc maps; yields the minimal pearl complex with its comparison data.

    Every stored identity is verified exactly at construction time.
    """
    bad = validate_pearl(P)
    if bad:
        raise SpectralError("invalid pearl complex: " + "; ".join(bad))
    F = P.field
    con = Contraction(P, H, rng)
    cr = P.ranks
    hr = con.hdims
    iota = _total_map(F, hr, cr, [(k, k, H[k]) for k in range(4)])
    pi = _total_map(F, cr, hr, [(k, k, con.pi(k)) for k in range(4)])
    K = _total_map(F, cr, cr, [(k, k + 1, con.K(k)) for k in range(3)])
    dM = _total_map(F, cr, cr, [(k, k - 1, P.dM(k)) for k in range(1, 4)])
    pert = _total_map(F, cr, cr, [(k, k + 1, P.d1_map(k)) for k in range(3)]
                      + [(0, 3, P.d2)])
    n = sum(cr)
    ident = Matrix.identity(F, n)
    # the perturbation series wants the opposite homotopy convention
    K = -K
    # geometric series (1 - K t)^{-1}, finite because K t raises degree
    KT = K * pert
    series = ident
    power = KT
    while not power.is_zero():
        series = series + power
        power = power * KT
    TK = pert * K
    series_tk = ident
    power = TK
    while not power.is_zero():
        series_tk = series_tk + power
        power = power * TK
    delta = pi * pert * series * iota
    psi = series * iota
    phi = pi * series_tk
    hom = K * series_tk

    d_full = dM + pert
    # graded content of the perturbed differential
    delta1 = [_block_of(delta, hr, hr, k, k + 1) for k in range(3)]
    delta2 = _block_of(delta, hr, hr, 0, 3)
    model_c = TwistedPearlComplex(F, hr, [Matrix.zeros(F, hr[k - 1], hr[k])
                                          for k in range(1, 4)], delta1, delta2)
    if validate_pearl(model_c):
        raise SpectralError("perturbed differential does not square to zero")
    # allowed blocks only: degree +1 and +3
    check = _total_map(F, hr, hr, [(k, k + 1, delta1[k]) for k in range(3)]
                       + [(0, 3, delta2)])
    if not (delta - check).is_zero():
        raise SpectralError("perturbed differential has unexpected graded blocks")
    # comparison identities, all exact
    nh = sum(hr)
    if not (phi * psi == Matrix.identity(F, nh)):
        raise SpectralError("phi psi is not the identity on the model")
    if not (phi * d_full - delta * phi).is_zero():
        raise SpectralError("phi is not a chain map")
    if not (d_full * psi - psi * delta).is_zero():
        raise SpectralError("psi is not a chain map")
    lhs = psi * phi - ident
    rhs = d_full * hom + hom * d_full
    if not (lhs - rhs).is_zero():
        raise SpectralError("stored homotopy identity fails")
    return MinimalModel(model_c, phi, psi, hom, hr)
