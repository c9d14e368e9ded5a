"""JSON serialization for every object the command line moves around.

All documents carry a version field ("v": 1) and a "kind".  Scalars are
strings ("p/q" over the rationals, a decimal residue over a prime field);
matrices are row-major arrays of scalar strings.
"""

from __future__ import annotations

import json

from .fields import Field, field_from_string, field_to_string
from .linalg import Matrix
from .complexes import BasedChainComplex, TwistedPearlComplex, PeriodicComplex
from .threefold import ThreefoldHomology, TripleForm
from .superpotential import DiscSystem, Representation
from .verifier import Instance, VerificationReport

VERSION = 1


class SchemaError(Exception):
    pass


def _require(doc, key, where):
    if key not in doc:
        raise SchemaError(f"missing key '{key}' in {where}")
    return doc[key]


def matrix_to_json(M: Matrix):
    return [[M.field.format(x) for x in row] for row in M.rows]


def matrix_from_json(field: Field, data, nrows, ncols, where):
    if len(data) != nrows or any(len(r) != ncols for r in data):
        raise SchemaError(f"matrix in {where} must be {nrows}x{ncols}")
    try:
        rows = [[field.parse(x) for x in r] for r in data]
    except Exception as e:
        raise SchemaError(f"bad scalar in {where}: {e}") from e
    return Matrix(field, rows, nrows=nrows, ncols=ncols)


def field_from_doc(doc, where="document") -> Field:
    try:
        return field_from_string(_require(doc, "field", where))
    except SchemaError:
        raise
    except Exception as e:
        raise SchemaError(f"bad field spec in {where}: {e}") from e


def complex_to_json(C: BasedChainComplex):
    return {"v": VERSION, "kind": "complex",
            "field": field_to_string(C.field),
            "ranks": list(C.ranks),
            "boundaries": [matrix_to_json(C.boundaries[k])
                           for k in range(1, C.top_degree + 1)]}


def complex_from_json(doc) -> BasedChainComplex:
    F = field_from_doc(doc, "complex")
    ranks = [int(r) for r in _require(doc, "ranks", "complex")]
    data = _require(doc, "boundaries", "complex")
    if len(data) != len(ranks) - 1:
        raise SchemaError("complex needs one boundary per positive degree")
    bnds = [matrix_from_json(F, data[k - 1], ranks[k - 1], ranks[k],
                             f"boundary d_{k}")
            for k in range(1, len(ranks))]
    return BasedChainComplex(F, ranks, bnds)


def bases_from_json(field, ranks, data, where="bases"):
    if len(data) != len(ranks):
        raise SchemaError(f"{where} must list one matrix per degree")
    out = []
    for k, mat in enumerate(data):
        ncols = len(mat[0]) if mat else 0
        out.append(matrix_from_json(field, mat, ranks[k], ncols,
                                    f"{where}[{k}]"))
    return out


def bases_to_json(bases):
    return [matrix_to_json(M) for M in bases]


def pearl_to_json(P: TwistedPearlComplex):
    return {"v": VERSION, "kind": "pearl",
            "field": field_to_string(P.field),
            "ranks": list(P.ranks),
            "dM": [matrix_to_json(P.dM(k)) for k in range(1, 4)],
            "d1": [matrix_to_json(P.d1_map(k)) for k in range(3)],
            "d2": matrix_to_json(P.d2)}


def pearl_from_json(doc) -> TwistedPearlComplex:
    F = field_from_doc(doc, "pearl")
    ranks = [int(r) for r in _require(doc, "ranks", "pearl")]
    if len(ranks) != 4:
        raise SchemaError("pearl complexes have degrees 0..3")
    dM = [matrix_from_json(F, m, ranks[k], ranks[k + 1], f"dM_{k + 1}")
          for k, m in enumerate(_require(doc, "dM", "pearl"))]
    d1 = [matrix_from_json(F, m, ranks[k + 1], ranks[k], f"d1_{k}")
          for k, m in enumerate(_require(doc, "d1", "pearl"))]
    d2 = matrix_from_json(F, _require(doc, "d2", "pearl"), ranks[3], ranks[0],
                          "d2")
    return TwistedPearlComplex(F, ranks, dM, d1, d2)


def periodic_to_json(P: PeriodicComplex):
    return {"v": VERSION, "kind": "periodic",
            "field": field_to_string(P.field),
            "n_odd": P.n_odd, "n_even": P.n_even,
            "d_oe": matrix_to_json(P.d_oe), "d_eo": matrix_to_json(P.d_eo)}


def periodic_from_json(doc) -> PeriodicComplex:
    F = field_from_doc(doc, "periodic complex")
    n_odd = int(_require(doc, "n_odd", "periodic complex"))
    n_even = int(_require(doc, "n_even", "periodic complex"))
    d_oe = matrix_from_json(F, _require(doc, "d_oe", "periodic"), n_even,
                            n_odd, "d_oe")
    d_eo = matrix_from_json(F, _require(doc, "d_eo", "periodic"), n_odd,
                            n_even, "d_eo")
    return PeriodicComplex(F, n_odd, n_even, d_oe, d_eo)


def form_to_json(I: TripleForm):
    return {"b": I.b, "entries": [{"ijk": list(k), "v": v}
                                  for k, v in I.entries()]}


def form_from_json(doc) -> TripleForm:
    b = int(_require(doc, "b", "triple form"))
    entries = []
    for e in doc.get("entries", []):
        ijk = _require(e, "ijk", "form entry")
        if len(ijk) != 3:
            raise SchemaError("form entries index three generators")
        entries.append((tuple(int(x) for x in ijk), int(_require(e, "v",
                                                                 "form entry"))))
    return TripleForm(b, entries)


def homology_to_json(H: ThreefoldHomology):
    return {"b": H.b, "torsion": list(H.torsion)}


def homology_from_json(doc) -> ThreefoldHomology:
    return ThreefoldHomology(int(_require(doc, "b", "homology")),
                             [int(t) for t in doc.get("torsion", [])])


def discs_to_json(D: DiscSystem):
    return {"b": D.b, "discs": [{"d": list(bd), "m0": m0}
                                for bd, m0 in D.discs]}


def discs_from_json(doc) -> DiscSystem:
    b = int(_require(doc, "b", "disc system"))
    discs = [( [int(x) for x in _require(e, "d", "disc")],
              int(_require(e, "m0", "disc")))
             for e in doc.get("discs", [])]
    return DiscSystem(b, discs)


def instance_to_json(inst: Instance):
    doc = {"v": VERSION, "kind": "instance",
           "field": field_to_string(inst.field),
           "homology": homology_to_json(inst.homology),
           "form": form_to_json(inst.form),
           "pearl": pearl_to_json(inst.pearl),
           "bases": bases_to_json(inst.bases)}
    if inst.ident is not None:
        doc["id"] = inst.ident
    if inst.discs is not None:
        doc["discs"] = discs_to_json(inst.discs)
    if inst.representation is not None:
        doc["representation"] = [inst.field.format(v)
                                 for v in inst.representation.values]
    return doc


def instance_from_json(doc) -> Instance:
    F = field_from_doc(doc, "instance")
    pearl_doc = dict(_require(doc, "pearl", "instance"))
    pearl_doc.setdefault("field", field_to_string(F))
    pearl = pearl_from_json(pearl_doc)
    homology = homology_from_json(_require(doc, "homology", "instance"))
    form = form_from_json(_require(doc, "form", "instance"))
    bases = bases_from_json(F, pearl.ranks, _require(doc, "bases", "instance"))
    discs = discs_from_json(doc["discs"]) if "discs" in doc else None
    representation = None
    if "representation" in doc:
        representation = Representation(F, [F.parse(s)
                                            for s in doc["representation"]])
    return Instance(homology, form, F, pearl, bases, discs, representation,
                    doc.get("id"))


def report_to_json(rep: VerificationReport, field: Field = None):
    fmt = (lambda x: field.format(x)) if field is not None else str
    return {"v": VERSION, "kind": "report",
            "collapse": rep.collapse,
            "torsion_direct": str(rep.torsion_direct.canonical())
            if rep.torsion_direct is not None else None,
            "torsion_formula": str(rep.torsion_formula.canonical())
            if rep.torsion_formula is not None else None,
            "A_det": fmt(rep.A_det) if rep.A_det is not None else None,
            "r": fmt(rep.r) if rep.r is not None else None,
            "Q_det": fmt(rep.Q_det) if rep.Q_det is not None else None,
            "flags": dict(rep.flags),
            "implied": dict(rep.implied),
            "notes": list(rep.notes),
            "all_pass": rep.all_pass}


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"malformed JSON at line {e.lineno}, column "
                          f"{e.colno}: {e.msg}")
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e}")


def dump(doc, path=None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text
