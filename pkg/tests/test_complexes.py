import random

import pytest

from qrtorsion.fields import QQ, GF
from qrtorsion.linalg import IntegerMatrix, Matrix
from qrtorsion.complexes import (BasedChainComplex, ComplexError,
                                 TwistedPearlComplex, fold_periodic,
                                 integral_homology, validate_pearl,
                                 admissible_characteristic)
from qrtorsion.threefold import ThreefoldHomology
from qrtorsion.models import realize_morse
from util import random_acyclic


def test_square_zero_enforced():
    d1 = IntegerMatrix([[1]], 1, 1)
    d2 = IntegerMatrix([[1]], 1, 1)
    with pytest.raises(ComplexError):
        BasedChainComplex(None, [1, 1, 1], [d1, d2])


def test_boundary_padding():
    C = BasedChainComplex(QQ, [2, 1], [Matrix.zeros(QQ, 2, 1)])
    assert C.boundary(0).ncols == 2 and C.boundary(0).nrows == 0
    assert C.boundary(5).is_zero()


def test_integral_homology_circle_like():
    # 0 -> Z -0-> Z -> 0 : two free classes
    C = BasedChainComplex(None, [1, 1], [IntegerMatrix.zeros(1, 1)])
    H, reps = integral_homology(C)
    assert H.free_ranks == [1, 1]
    assert H.torsion == [[], []]
    assert reps[0].ncols == 1


def test_integral_homology_torsion():
    C = BasedChainComplex(None, [1, 1], [IntegerMatrix([[6]], 1, 1)])
    H, _ = integral_homology(C)
    assert H.free_ranks == [0, 0]
    assert H.torsion == [[6], []]
    assert H.torsion_order(0) == 6
    assert admissible_characteristic(H, GF(5))
    assert not admissible_characteristic(H, GF(3))


def test_integral_homology_matches_realize_morse():
    for tor, shape in [([], (0, 0, 0, 0)), ([3, 9], (0, 2, 2, 0)),
                       ([5], (1, 1, 1, 1))]:
        spec = ThreefoldHomology(3, tor)
        C = realize_morse(spec, shape, seed=11)
        H, _ = integral_homology(C)
        assert H.free_ranks == [1, 3, 3, 1]
        assert H.torsion == [[], tor, [], []]


def test_random_acyclic_is_acyclic():
    rng = random.Random(1)
    for _ in range(20):
        C = random_acyclic(GF(5), rng)
        for k in range(C.top_degree + 1):
            # ker d_k = im d_{k+1} degreewise
            assert C.boundary(k).rank() + C.boundary(k + 1).rank() == C.ranks[k]


def test_validate_pearl_flags_bad_anticommutation():
    F = GF(3)
    ranks = [1, 1, 1, 1]
    dM = [Matrix.zeros(F, 1, 1) for _ in range(3)]
    d1 = [Matrix.from_int_rows(F, [[1]], 1, 1) for _ in range(3)]
    d2 = Matrix.zeros(F, 1, 1)
    P = TwistedPearlComplex(F, ranks, dM, d1, d2)
    assert validate_pearl(P)  # d1 squared is nonzero


def test_fold_periodic_blocks():
    F = GF(5)
    spec = ThreefoldHomology(1)
    morse = realize_morse(spec, seed=0).to_field(F)
    P = TwistedPearlComplex(F, morse.ranks, morse.boundaries[1:],
                            [Matrix.zeros(F, morse.ranks[k + 1],
                                          morse.ranks[k]) for k in range(3)],
                            Matrix.zeros(F, morse.ranks[3], morse.ranks[0]))
    assert not validate_pearl(P)
    fold = fold_periodic(P)
    assert fold.n_odd == morse.ranks[1] + morse.ranks[3]
    assert fold.n_even == morse.ranks[0] + morse.ranks[2]
    assert not fold.is_acyclic()  # no quantum corrections, homology survives
