"""Orchestration: classify an instance, compute its quantum torsion along
independent paths, and check every identity the dichotomy promises.

The two torsion paths are the point: the direct path folds the pearl complex
and takes periodic torsion of the chain-level matrices; the formula path only
sees homology-level data (rates, intersection forms, the pairing Q).  Their
agreement, as sign classes, is the verified content of the torsion theorems.
"""

from __future__ import annotations

from .fields import Field, SignClass
from .linalg import Matrix
from .complexes import BasedChainComplex, TwistedPearlComplex, validate_pearl
from .torsion import milnor_torsion, quantum_torsion, NotNarrowError
from .spectral import (page1, page2_rate, closed_form_r, collapsing_page,
                       PAGE2, PAGE3, NOT_NARROW, SpectralError, WrongPageError)
from .threefold import (ThreefoldHomology, TripleForm, symplectic_slice,
                        find_slice)
from .superpotential import (DiscSystem, Representation, build_potential,
                             log_gradient, d1_from_discs, classify_representation)


class VerifierError(Exception):
    pass


class Instance:
    """Everything the theorems quantify over: 3-fold homology, the triple
    form, the pearl complex over its field, and the distinguished homology
    bases (integral representatives reduced to the field).  Disc data and a
    representation are optional extras."""

    def __init__(self, homology: ThreefoldHomology, form: TripleForm,
                 field: Field, pearl: TwistedPearlComplex, bases,
                 discs: DiscSystem = None, representation: Representation = None,
                 ident=None):
        self.homology = homology
        self.form = form
        self.field = field
        self.pearl = pearl
        self.bases = list(bases)
        self.discs = discs
        self.representation = representation
        self.ident = ident


class VerificationReport:
    def __init__(self, collapse, torsion_direct, torsion_formula, A_det, r,
                 Q_det, flags, implied, notes):
        self.collapse = collapse
        self.torsion_direct = torsion_direct
        self.torsion_formula = torsion_formula
        self.A_det = A_det
        self.r = r
        self.Q_det = Q_det
        self.flags = flags
        self.implied = implied
        self.notes = notes

    @property
    def all_pass(self) -> bool:
        return all(self.flags.values())


def torsion_ratio(H: ThreefoldHomology, field: Field):
    """|Tor_ev| / |Tor_odd| in the field; for 3-folds all integral torsion
    sits in degree 1, so this is the inverse of its order."""
    return field.inv(field.from_int(H.torsion_order()))


def _e1_complex(pg1, field) -> BasedChainComplex:
    """The page-1 data regraded as a descending chain complex (degree k holds
    the homology of degree 3 - k) so that graded Milnor torsion applies."""
    ranks = list(reversed(pg1.ranks))
    bnds = [pg1.d1star[2], pg1.d1star[1], pg1.d1star[0]]
    return BasedChainComplex(field, ranks, bnds)


def e1_milnor_torsion(inst: Instance) -> SignClass:
    """Milnor torsion of the acyclic page-1 complex in the distinguished
    homology bases.

    The page-1 differential ascends, so the complex is stored with degrees
    reversed; that regrading flips every degree parity, which inverts the
    torsion, so the inverse is returned.
    """
    pg1 = page1(inst.pearl, inst.bases)
    if not pg1.is_exact():
        raise WrongPageError("page-1 complex is not acyclic")
    C = _e1_complex(pg1, inst.field)
    n = len(C.ranks) - 1
    empty = [Matrix.zeros(inst.field, C.ranks[k], 0) for k in range(n + 1)]
    return milnor_torsion(C, empty).inv()


def torsion_via_page2_formula(inst: Instance) -> SignClass:
    """The closed torsion formula for page-2 collapse: torsion ratio times
    r_i^{b-3} over the slice determinant at the pivot index i (the first
    index with nonzero rate), cross-checked against the page-1 Milnor
    torsion path."""
    F = inst.field
    b = inst.homology.b
    pg1 = page1(inst.pearl, inst.bases)
    if not pg1.is_exact():
        raise WrongPageError("not a page-2 instance")
    rates = [pg1.d1star[0].rows[i][0] for i in range(b)]
    pivot = next((i for i, x in enumerate(rates) if not F.is_zero(x)), None)
    if pivot is None:
        raise VerifierError("page-2 instance with zero rate vector")
    v = [F.one() if j == pivot else F.zero() for j in range(b)]
    det_slice = symplectic_slice(inst.form, v, F)
    if det_slice is None:
        raise VerifierError("slice at the pivot index is degenerate")
    ratio = torsion_ratio(inst.homology, F)
    val = F.mul(ratio, F.div(F.pow(rates[pivot], b - 3), det_slice))
    formula = SignClass(F, val)
    cross = SignClass(F, ratio) * e1_milnor_torsion(inst)
    if formula != cross:
        raise VerifierError("closed formula disagrees with the page-1 "
                            "torsion path")
    return formula


def torsion_via_page3_formula(inst: Instance) -> SignClass:
    """The page-3 torsion formula: torsion ratio times det A over the page-2
    rate, with the rate cross-checked against its closed form."""
    F = inst.field
    A = page1(inst.pearl, inst.bases).d1star[1]
    r = page2_rate(inst.pearl, inst.bases)
    r_cf = closed_form_r(inst.pearl, inst.bases)
    if r != r_cf:
        raise VerifierError("page-2 rate disagrees with its closed form")
    ratio = torsion_ratio(inst.homology, F)
    return SignClass(F, F.mul(ratio, F.div(A.determinant(), r)))


class QForm:
    def __init__(self, Q, det, antisymmetric):
        self.Q = Q
        self.det = det
        self.antisymmetric = antisymmetric


def q_form(A: Matrix, r, field: Field) -> QForm:
    """The pairing Q = r * A^{-1}: the unique solution of Q A = r Id.  Its
    determinant identity det Q = r^b / det A is pure algebra and asserted;
    antisymmetry is the geometric constraint and only reported."""
    b = A.nrows
    detA = A.determinant()
    if field.is_zero(detA):
        raise VerifierError("singular degree-1 differential on page 3")
    Q = A.inverse()
    for i in range(b):
        for j in range(b):
            Q.rows[i][j] = field.mul(r, Q.rows[i][j])
    detQ = Q.determinant()
    assert detQ == field.div(field.pow(r, b), detA), \
        "determinant identity for Q failed"
    anti = (Q + Q.transpose()).is_zero()
    return QForm(Q, detQ, anti)


def verify_main_theorem(inst: Instance) -> VerificationReport:
    """Full dichotomy check; failures land in flags, never in exceptions."""
    F = inst.field
    b = inst.homology.b
    flags = {}
    implied = {}
    notes = []
    collapse = None
    direct = formula = None
    A_det = r_val = Q_det = None

    flags["pearl_valid"] = not validate_pearl(inst.pearl)
    try:
        collapse = collapsing_page(inst.pearl, inst.bases)
    except SpectralError as e:
        notes.append(f"collapse classification failed: {e}")
        flags["narrow"] = False
        return VerificationReport(collapse, None, None, None, None, None,
                                  flags, implied, notes)
    flags["narrow"] = collapse in (PAGE2, PAGE3)
    if not flags["narrow"]:
        notes.append("torsion undefined, complex not narrow")
        return VerificationReport(collapse, None, None, None, None, None,
                                  flags, implied, notes)
    try:
        direct = quantum_torsion(inst.pearl)
    except NotNarrowError:
        flags["narrow"] = False
        notes.append("fold is not acyclic despite page collapse")
        return VerificationReport(collapse, None, None, None, None, None,
                                  flags, implied, notes)

    if collapse == PAGE2:
        flags["b_parity"] = b % 2 == 1
        # slice test directly: for b = 1 the complement is 0-dimensional and
        # the slice exists vacuously even though the form is zero
        flags["dichotomy_consistent"] = find_slice(inst.form, F) is not None
        implied["rationally_prime"] = True
        try:
            formula = torsion_via_page2_formula(inst)
            flags["e1_torsion_identity"] = True
        except (VerifierError, WrongPageError, SpectralError) as e:
            notes.append(str(e))
            flags["e1_torsion_identity"] = False
        flags["two_path_torsion"] = formula is not None and direct == formula
    else:
        flags["b_parity"] = b % 2 == 0
        flags["dichotomy_consistent"] = inst.form.is_zero_over(F)
        try:
            pg1 = page1(inst.pearl, inst.bases)
            A = pg1.d1star[1]
            A_det = A.determinant()
            r_val = page2_rate(inst.pearl, inst.bases)
            flags["rate_cross_check"] = r_val == closed_form_r(inst.pearl,
                                                               inst.bases)
            formula = torsion_via_page3_formula(inst)
            qf = q_form(A, r_val, F)
            Q_det = qf.det
            flags["q_antisymmetric"] = qf.antisymmetric
            flags["q_det_identity"] = True
            ratio = torsion_ratio(inst.homology, F)
            rhs = SignClass(F, F.div(F.mul(F.pow(ratio, b),
                                           F.pow(A_det, b - 1)), Q_det))
            flags["power_identity"] = direct.pow(b) == rhs
        except (VerifierError, WrongPageError, SpectralError, AssertionError) as e:
            notes.append(str(e))
            for name in ("rate_cross_check", "q_antisymmetric",
                         "q_det_identity", "power_identity"):
                flags.setdefault(name, False)
        flags["two_path_torsion"] = formula is not None and direct == formula

    if inst.discs is not None and inst.representation is not None:
        phi = inst.representation
        W = build_potential(inst.discs)
        implied["w_constant"] = W.is_constant()
        try:
            row, col = d1_from_discs(inst.discs, phi)
            pg1 = page1(inst.pearl, inst.bases)
            flags["disc_differential_match"] = (row == pg1.d1star[2]
                                                and col == pg1.d1star[0])
        except AssertionError as e:
            notes.append(str(e))
            flags["disc_differential_match"] = False
        rep = classify_representation(inst.discs, phi, collapse)
        flags["representation_page_consistent"] = bool(rep.consistent_with_page)
        notes.extend(rep.notes)
        if collapse == PAGE3 and "q_antisymmetric" in flags and Q_det is not None:
            # symmetrized-product identity: Q_ij + Q_ji must match the
            # n = 3 signed torus-weighted Hessian of the potential
            qf = q_form(page1(inst.pearl, inst.bases).d1star[1], r_val, F)
            ok = True
            for i in range(b):
                Wi = W.partial(i)
                for j in range(b):
                    hess = Wi.partial(j).evaluate(F, phi.values)
                    lhs = F.mul(F.from_int(-1),
                                F.mul(F.mul(phi.values[i], phi.values[j]), hess))
                    rhs = F.add(qf.Q.rows[i][j], qf.Q.rows[j][i])
                    if lhs != rhs:
                        ok = False
            flags["symmetrized_product_identity"] = ok

    return VerificationReport(collapse, direct, formula, A_det, r_val, Q_det,
                              flags, implied, notes)
