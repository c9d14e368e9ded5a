import json

import pytest

from qrtorsion.fields import QQ, GF
from qrtorsion import schemas
from qrtorsion.generate import generate_instance
from qrtorsion.threefold import TripleForm, ThreefoldHomology
from qrtorsion.superpotential import DiscSystem
from qrtorsion.complexes import fold_periodic
from qrtorsion.verifier import verify_main_theorem


def test_instance_roundtrip_stable():
    inst = generate_instance(3, 4, GF(5), 7, torsion=(7,),
                             surplus=(1, 1, 1, 1))
    text = schemas.dump(schemas.instance_to_json(inst))
    back = schemas.instance_from_json(json.loads(text))
    assert schemas.dump(schemas.instance_to_json(back)) == text
    assert verify_main_theorem(back).all_pass


def test_pearl_and_periodic_roundtrip():
    inst = generate_instance(2, 3, QQ, 0)
    P = inst.pearl
    back = schemas.pearl_from_json(schemas.pearl_to_json(P))
    assert back.d2 == P.d2 and all(back.d1[k] == P.d1[k] for k in range(3))
    fold = fold_periodic(P)
    fold2 = schemas.periodic_from_json(schemas.periodic_to_json(fold))
    assert fold2.d_oe == fold.d_oe and fold2.d_eo == fold.d_eo


def test_form_roundtrip():
    I = TripleForm(5, {(1, 2, 3): 2, (1, 4, 5): -1})
    assert schemas.form_from_json(schemas.form_to_json(I)).entries() == \
        I.entries()


def test_homology_and_discs_roundtrip():
    H = ThreefoldHomology(3, [3, 9])
    H2 = schemas.homology_from_json(schemas.homology_to_json(H))
    assert H2.b == 3 and H2.torsion == [3, 9]
    D = DiscSystem(2, [([1, 0], 1), ([-1, -1], 2)])
    D2 = schemas.discs_from_json(schemas.discs_to_json(D))
    assert D2.b == 2 and D2.discs == D.discs


def test_malformed_scalar_rejected():
    with pytest.raises(schemas.SchemaError):
        schemas.matrix_from_json(QQ, [["1/0"]], 1, 1, "test")
    with pytest.raises(schemas.SchemaError):
        schemas.matrix_from_json(QQ, [["1", "2"]], 1, 1, "test")


def test_missing_key_reported():
    with pytest.raises(schemas.SchemaError) as err:
        schemas.pearl_from_json({"field": "Q", "ranks": [1, 1, 1, 1]})
    assert "dM" in str(err.value)


def test_load_reports_json_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\n  broken\n}")
    with pytest.raises(schemas.SchemaError) as err:
        schemas.load(p)
    assert "line 2" in str(err.value)
