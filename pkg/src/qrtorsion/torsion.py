"""Torsion of based chain complexes, in the graded and 2-periodic flavors.

All values live in the unit group of the field modulo sign.  The graded
torsion multiplies determinants of assembled bases [h_i  b_i  lift(b_{i-1})]
against the preferred bases; internal image-basis and section choices can be
randomized to exercise well-definedness.
"""

from __future__ import annotations

import random

from .fields import Field, SignClass
from .linalg import Matrix
from .complexes import (BasedChainComplex, ComplexError, PeriodicComplex,
                        TwistedPearlComplex, admissible_characteristic,
                        fold_periodic, integral_homology)


class TorsionError(Exception):
    pass


class NotNarrowError(TorsionError):
    pass


def _random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    span = field.char - 1 if field.char else 9
    while True:
        M = Matrix.from_int_rows(field, [[rng.randint(-span, span) for _ in range(n)]
                                         for _ in range(n)], n, n)
        if not field.is_zero(M.determinant()):
            return M


def _image_basis(d: Matrix, rng=None) -> Matrix:
    """Basis of im(d): pivot columns of d, optionally mixed at random."""
    b = d.column_space_basis()
    if rng is not None and b.ncols:
        b = b * _random_invertible(d.field, b.ncols, rng)
    return b


def _lift(d: Matrix, target: Matrix, rng=None) -> Matrix:
    """X with d X = target; randomized lifts differ by kernel columns."""
    X = d.solve(target)
    if X is None:
        raise TorsionError("basis of boundaries does not lift")
    if rng is not None and target.ncols:
        K = d.kernel_basis()
        if K.ncols:
            mix = Matrix.from_int_rows(d.field, [[rng.randint(-5, 5) for _ in range(target.ncols)]
                                                 for _ in range(K.ncols)], K.ncols, target.ncols)
            X = X + K * mix
    return X


def milnor_torsion(C: BasedChainComplex, homology_bases, rng=None) -> SignClass:
    """Torsion of a based complex over a field with chosen homology bases.

    ``homology_bases[k]`` holds cycle representatives (columns) whose classes
    base H_k; an empty matrix where the complex is acyclic.  Passing an ``rng``
    randomizes the internal image bases and sections, which must not change
    the result.
    """
    F = C.field
    if F is None:
        raise TorsionError("milnor_torsion needs field coefficients")
    n = C.top_degree
    if len(homology_bases) != n + 1:
        raise TorsionError("need one homology basis per degree")
    img = [_image_basis(C.boundary(k + 1), rng) for k in range(n + 1)]
    value = F.one()
    for k in range(n + 1):
        h = homology_bases[k]
        if h.nrows != C.ranks[k]:
            raise TorsionError(f"homology basis in degree {k} has wrong length")
        if not (C.boundary(k) * h).is_zero():
            raise TorsionError(f"homology basis in degree {k} contains non-cycles")
        lift = (_lift(C.boundary(k), img[k - 1], rng) if k > 0
                else Matrix.zeros(F, C.ranks[k], 0))
        M = Matrix.hstack_all(F, [h, img[k], lift], nrows=C.ranks[k])
        if M.ncols != C.ranks[k]:
            raise TorsionError(f"degree {k}: homology basis rank mismatch "
                               f"({M.ncols} basis vectors for rank {C.ranks[k]})")
        det = M.determinant()
        if F.is_zero(det):
            raise TorsionError(f"degree {k}: assembled basis is singular "
                               "(homology classes not independent)")
        value = F.mul(value, det) if k % 2 == 0 else F.mul(value, F.inv(det))
    return SignClass(F, value)


def torsion_basis_change(C: BasedChainComplex, homology_bases, new_c, new_h,
                         rng=None) -> SignClass:
    """Torsion after changing preferred and homology bases, with the exact
    change-of-basis law checked against the direct recomputation.

    ``new_c[k]`` expresses the new preferred basis of C_k in the old one
    (columns); ``new_h[k]`` holds new homology representatives in old
    coordinates.  Returns tau(C, c', h').
    """
    F = C.field
    n = C.top_degree
    tau_old = milnor_torsion(C, homology_bases, rng)
    inv_c = []
    for k in range(n + 1):
        if new_c[k].nrows != C.ranks[k] or new_c[k].ncols != C.ranks[k]:
            raise TorsionError(f"new basis in degree {k} has wrong shape")
        try:
            inv_c.append(new_c[k].inverse())
        except Exception as e:
            raise TorsionError(f"singular change matrix in degree {k}") from e
    new_d = [inv_c[k - 1] * C.boundary(k) * new_c[k] for k in range(1, n + 1)]
    Cnew = BasedChainComplex(F, C.ranks, new_d)
    h_new_coords = [inv_c[k] * new_h[k] for k in range(n + 1)]
    tau_new = milnor_torsion(Cnew, h_new_coords, rng)

    factor = F.one()
    for k in range(n + 1):
        # det[c_k / c'_k]: old preferred basis written in the new one
        fk = inv_c[k].determinant()
        # det[h'_k / h_k]: new homology classes written in the old homology basis
        hk = homology_bases[k]
        if hk.ncols:
            sol = Matrix.hstack_all(F, [hk, C.boundary(k + 1)],
                                    nrows=C.ranks[k]).solve(new_h[k])
            if sol is None:
                raise TorsionError(f"new homology classes in degree {k} do not "
                                   "span the old basis")
            W = sol.submatrix(range(hk.ncols), range(new_h[k].ncols))
            fk = F.mul(fk, W.determinant())
        # the change factors enter with the same alternating exponents as the
        # determinants they rescale
        factor = F.mul(factor, fk) if k % 2 == 0 else F.mul(factor, F.inv(fk))
    expected = tau_old * factor
    if expected != tau_new:
        raise TorsionError("basis-change law violated (internal error)")
    return tau_new


def periodic_torsion(P: PeriodicComplex, rng=None) -> SignClass:
    """Torsion of an acyclic 2-periodic complex in the preferred bases."""
    F = P.field
    if not P.is_acyclic():
        raise NotNarrowError("torsion undefined, complex not narrow")
    b_even = _image_basis(P.d_oe, rng)   # boundaries inside C_even
    b_odd = _image_basis(P.d_eo, rng)    # boundaries inside C_odd
    num = Matrix.hstack_all(F, [b_even, _lift(P.d_eo, b_odd, rng)], nrows=P.n_even)
    den = Matrix.hstack_all(F, [b_odd, _lift(P.d_oe, b_even, rng)], nrows=P.n_odd)
    if num.ncols != P.n_even or den.ncols != P.n_odd:
        raise NotNarrowError("torsion undefined, complex not narrow")
    return SignClass(F, F.div(num.determinant(), den.determinant()))


def quantum_torsion(P: TwistedPearlComplex, rng=None) -> SignClass:
    """Torsion of the folded 2-periodic pearl complex in the critical-point
    bases; defined exactly when the twisted complex is narrow (acyclic fold)."""
    return periodic_torsion(fold_periodic(P), rng)


def morse_torsion_identity(C: BasedChainComplex, field: Field):
    """Both sides of the torsion-equals-torsion identity for an integral
    complex: the field torsion in integral homology bases, and the alternating
    product of torsion-subgroup orders.  Asserts they agree."""
    if C.field is not None:
        raise TorsionError("expected an integral complex")
    H, reps = integral_homology(C)
    if not admissible_characteristic(H, field):
        raise TorsionError(f"inadmissible characteristic {field.char} "
                           f"for torsion {H.torsion}")
    CF = C.to_field(field)
    hF = [r.to_field(field) for r in reps]
    lhs = milnor_torsion(CF, hF)
    value = field.one()
    for k in range(C.top_degree + 1):
        t = field.from_int(H.torsion_order(k))
        value = field.mul(value, t) if k % 2 == 0 else field.mul(value, field.inv(t))
    rhs = SignClass(field, value)
    if lhs != rhs:
        raise TorsionError("torsion-equals-torsion identity failed")
    return lhs, rhs
