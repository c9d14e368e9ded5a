"""Seeded construction of verifiable pearl-complex instances.

One 64-bit seed drives everything.  The master PRNG is split into named
subseeds drawn in a fixed order (morse, transport, lift, rate), so the
same seed always yields byte-identical instances regardless of how many
random draws each stage consumes internally.
"""

from __future__ import annotations

import random

from .fields import Field, field_to_string
from .threefold import ThreefoldHomology, TripleForm
from .models import (Page2Spec, Page3Spec, ModelError, realize_morse,
                     homology_bases, lift_derivation_page2,
                     lift_derivation_page3, _unimodular, RETRY_BOUND)
from .verifier import Instance


class GenerateError(Exception):
    pass


def canonical_form(b: int) -> TripleForm:
    """Block triple form I(1, 2i, 2i+1) = 1 for odd b; zero when b = 1.

    Each block contributes a symplectic plane to the slice at the first
    generator, so the slice pairing is invertible on the complement.
    """
    if b % 2 == 0:
        raise GenerateError("odd rank required")
    entries = {}
    for i in range(1, (b - 1) // 2 + 1):
        entries[(1, 2 * i, 2 * i + 1)] = 1
    return TripleForm(b, entries)


def standard_symplectic(b: int):
    """Block-diagonal [[0,1],[-1,0]] pairing of even rank b."""
    J = [[0] * b for _ in range(b)]
    for i in range(0, b, 2):
        J[i][i + 1] = 1
        J[i + 1][i] = -1
    return J


def _transpose_apply(U, v):
    n = len(v)
    return [sum(U[i][j] * v[i] for i in range(n)) for j in range(n)]


def check_admissible(field: Field, torsion):
    p = field.char
    if p:
        for a in torsion:
            if a % p == 0:
                raise GenerateError(
                    f"characteristic {p} divides invariant factor {a}")


def generate_instance(page: int, b: int, field: Field, seed: int,
                      torsion=(), surplus=(0, 0, 0, 0)) -> Instance:
    """A fresh narrow instance of the requested collapse page.

    The canonical spec (block form with unit rate for page 2, standard
    pairing for page 3) is hidden behind a seeded unimodular change of
    homology basis, so repeated calls explore genuinely different data.
    """
    torsion = [int(a) for a in torsion]
    check_admissible(field, torsion)
    master = random.Random(seed)
    morse_seed = master.getrandbits(32)
    transport = random.Random(master.getrandbits(32))
    lift_seed = master.getrandbits(32)
    rate_pick = random.Random(master.getrandbits(32))
    H = ThreefoldHomology(b, torsion)
    morse = realize_morse(H, surplus, seed=morse_seed)
    F = field
    if page == 2:
        if b == 1:
            base_form, base_r = TripleForm(1), None
        else:
            base_form, base_r = canonical_form(b), [1] + [0] * (b - 1)
        last = None
        for attempt in range(RETRY_BOUND):
            if b == 1:
                I, r = base_form, [rate_pick.randint(1, 4)]
            else:
                U = _unimodular(transport, b)
                I = base_form.apply_unimodular(U)
                r = _transpose_apply(U, base_r)
            try:
                pearl = lift_derivation_page2(Page2Spec(H, I, r), morse, F,
                                              seed=lift_seed + attempt)
                break
            except ModelError as e:
                last = e
        else:
            raise GenerateError(f"page-2 lift failed: {last}")
        form = I
    elif page == 3:
        J = standard_symplectic(b)
        last = None
        for attempt in range(RETRY_BOUND):
            U = _unimodular(transport, b)
            # congruence transport keeps the pairing antisymmetric and
            # invertible over the integers
            Qp = [[sum(U[a][i] * J[a][c] * U[c][j] for a in range(b)
                       for c in range(b)) for j in range(b)]
                  for i in range(b)]
            r = rate_pick.randint(1, 5)
            if F.char and r % F.char == 0:
                r = 1
            try:
                pearl = lift_derivation_page3(Page3Spec(H, Qp, r), morse, F,
                                              seed=lift_seed + attempt)
                break
            except ModelError as e:
                last = e
        else:
            raise GenerateError(f"page-3 lift failed: {last}")
        form = TripleForm(b)
    else:
        raise GenerateError("page must be 2 or 3")
    bases = homology_bases(morse, F)
    ident = f"page{page}-b{b}-{field_to_string(F)}-s{seed}"
    return Instance(H, form, F, pearl, bases, ident=ident)


def mutate_d2(inst: Instance, seed: int) -> Instance:
    """Negate one seeded nonzero entry of the degree-3 disc map.

    Characteristic two is excluded globally, so the entry always changes.
    """
    P = inst.pearl
    F = inst.field
    nz = [(i, j) for i in range(P.d2.nrows) for j in range(P.d2.ncols)
          if not F.is_zero(P.d2.rows[i][j])]
    if not nz:
        raise GenerateError("no nonzero entry to mutate")
    i, j = random.Random(seed).choice(nz)
    rows = [list(r) for r in P.d2.rows]
    rows[i][j] = F.neg(rows[i][j])
    from .linalg import Matrix
    from .complexes import TwistedPearlComplex
    d2 = Matrix(F, rows, nrows=P.d2.nrows, ncols=P.d2.ncols)
    mutated = TwistedPearlComplex(F, P.ranks, [P.dM(k) for k in range(1, 4)],
                                  [P.d1_map(k) for k in range(3)], d2)
    return Instance(inst.homology, inst.form, F, mutated, inst.bases,
                    inst.discs, inst.representation,
                    (inst.ident or "instance") + "-mutated")
