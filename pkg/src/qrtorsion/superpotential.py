"""Superpotential algebra from disc data.

A disc system lists boundary classes in Z^b with their counts; the potential
is the corresponding integer Laurent polynomial.  Evaluation happens at
points of the torus (F^x)^b, exactly.  The degree-0 and degree-2 disc
differentials are assembled from the same weighted sums and are transposes
of each other; the degree-2 row doubles as the logarithmic gradient of the
potential, which is the consistency identity checked here and in the tests.
"""

from __future__ import annotations

from .fields import Field
from .laurent import LaurentPolynomial
from .linalg import Matrix


class PotentialError(Exception):
    pass


class DiscSystem:
    """Finite list of (boundary class in Z^b, integer count)."""

    def __init__(self, b: int, discs=()):
        if b < 0:
            raise PotentialError("negative variable count")
        self.b = b
        self.discs = []
        for bd, m0 in discs:
            vec = [int(x) for x in bd]
            if len(vec) != b:
                raise PotentialError("boundary vector length mismatch")
            self.discs.append((vec, int(m0)))


class Representation:
    """A point of the torus: one invertible scalar per variable (torsion
    classes are implicitly sent to 1)."""

    def __init__(self, field: Field, values):
        self.field = field
        self.values = list(values)
        if any(field.is_zero(v) for v in self.values):
            raise PotentialError("representation values must be invertible")

    @property
    def b(self):
        return len(self.values)

    def monomial(self, exps):
        """The value z^e at this point."""
        F = self.field
        out = F.one()
        for v, e in zip(self.values, exps):
            out = F.mul(out, F.pow(v, e))
        return out


class WideNarrowReport:
    def __init__(self, is_critical, gradient, discriminant_value, w_constant,
                 consistent_with_page, notes):
        self.is_critical = is_critical
        self.gradient = gradient
        self.discriminant_value = discriminant_value
        self.w_constant = w_constant
        self.consistent_with_page = consistent_with_page
        self.notes = notes


def build_potential(D: DiscSystem) -> LaurentPolynomial:
    """Sum of count * z^{boundary} over the discs; colliding boundary
    classes accumulate."""
    W = LaurentPolynomial.zero(D.b)
    for bd, m0 in D.discs:
        W = W + LaurentPolynomial.monomial(D.b, bd, m0)
    return W


def log_gradient(W: LaurentPolynomial, phi: Representation):
    """The vector of z_i * dW/dz_i evaluated at phi; on a monomial this
    multiplies its value by the exponent, so no division ever happens."""
    F = phi.field
    out = [F.zero()] * phi.b
    for exps, coeff in W.terms.items():
        val = F.mul(F.from_int(coeff), phi.monomial(exps))
        for i, e in enumerate(exps):
            if e:
                out[i] = F.add(out[i], F.mul(F.from_int(e), val))
    return out


def discriminant(W: LaurentPolynomial, phi: Representation, n: int = 3):
    """Signed torus-weighted Hessian determinant at a critical point:
    (-1)^{n b + 1} * z_1^2 ... z_b^2 * det(d^2 W / dz_i dz_j)."""
    F = phi.field
    b = phi.b
    if any(not F.is_zero(g) for g in log_gradient(W, phi)):
        raise PotentialError("discriminant is only defined at critical points")
    H = Matrix.zeros(F, b, b)
    for i in range(b):
        Wi = W.partial(i)
        for j in range(i, b):
            val = Wi.partial(j).evaluate(F, phi.values)
            H.rows[i][j] = val
            H.rows[j][i] = val
    det = H.determinant()
    sign = F.from_int((-1) ** (n * b + 1))
    weight = F.one()
    for v in phi.values:
        weight = F.mul(weight, F.mul(v, v))
    return F.mul(sign, F.mul(weight, det))


def d1_from_discs(D: DiscSystem, phi: Representation):
    """The two disc differentials determined by the divisor axiom: as a row
    (degree 2 to degree 3) and a column (degree 0 to degree 1), both with
    i-th weight sum_A m0(A) * phi(dA) * (dA)_i.  Their transpose relation is
    asserted, and the row equals log_gradient of the potential."""
    F = phi.field
    if phi.b != D.b:
        raise PotentialError("representation size mismatch")
    weights = [F.zero()] * D.b
    for bd, m0 in D.discs:
        val = F.mul(F.from_int(m0), phi.monomial(bd))
        for i, e in enumerate(bd):
            if e:
                weights[i] = F.add(weights[i], F.mul(F.from_int(e), val))
    row = Matrix(F, [list(weights)], nrows=1, ncols=D.b)
    col = Matrix(F, [[w] for w in weights], nrows=D.b, ncols=1)
    assert row.transpose() == col, "disc differentials lost their duality"
    grad = log_gradient(build_potential(D), phi)
    assert list(row.rows[0]) == grad, \
        "disc differential disagrees with the potential gradient"
    return row, col


PAGE2_NAME = "Page2"
PAGE3_NAME = "Page3"


def classify_representation(D: DiscSystem, phi: Representation,
                            collapse=None) -> WideNarrowReport:
    """Critical-point report for the representation, checked against an
    observed collapsing page when one is supplied: collapse at page 3 demands
    a critical point, collapse at page 2 a nonvanishing gradient entry."""
    F = phi.field
    W = build_potential(D)
    grad = log_gradient(W, phi)
    critical = all(F.is_zero(g) for g in grad)
    disc = discriminant(W, phi) if critical else None
    constant = W.is_constant()
    notes = []
    if constant:
        notes.append("potential is constant: gradient and discriminant vanish "
                     "identically")
    consistent = None
    if collapse == PAGE3_NAME:
        consistent = critical
        if not critical:
            notes.append("page-3 collapse requires a critical representation")
    elif collapse == PAGE2_NAME:
        consistent = not critical
        if critical:
            notes.append("page-2 collapse requires a noncritical representation")
    return WideNarrowReport(critical, grad, disc, constant, consistent, notes)
