import json
from fractions import Fraction

import pytest

from logres import (
    LogConnection,
    MatrixPolyMap,
    ModuliPoint,
    RationalMatrix,
    WeightedPoly,
    catalog,
    moduli_system,
)
from logres import serialize
from logres.serialize import SchemaError

from conftest import S01, residue_for


def test_fraction_roundtrip():
    assert serialize.fraction_to_json(Fraction(-3, 7)) == "-3/7"
    assert serialize.fraction_from_json("-3/7") == Fraction(-3, 7)
    assert serialize.fraction_from_json("4") == Fraction(4)
    assert serialize.fraction_from_json(4) == Fraction(4)
    with pytest.raises(SchemaError):
        serialize.fraction_from_json("x")


def test_poly_roundtrip(cusp):
    p = cusp.f * Fraction(2, 3)
    data = serialize.poly_to_json(p)
    assert serialize.poly_from_json(data, cusp.weights) == p
    # graded-lex term order in the serialized form
    assert data == sorted(data, key=lambda t: (sum(w * e for w, e in zip(cusp.weights, t["exponents"])), tuple(t["exponents"])))


def test_matrix_roundtrip():
    m = RationalMatrix([[Fraction(1, 2), 3], [0, -2]])
    assert serialize.matrix_from_json(serialize.matrix_to_json(m)) == m


def test_divisor_roundtrip():
    for name in ("cusp", "borel2", "g2", "d4", "sekiguchi_b5", "normal_crossing_3"):
        d = catalog(name)
        data = serialize.divisor_to_json(d)
        back = serialize.divisor_from_json(json.loads(json.dumps(data)))
        assert back.variables == d.variables
        assert back.weights == d.weights
        assert back.f == d.f
        assert back.degree == d.degree
        assert back.positive_combination == d.positive_combination
        assert back.factors == d.factors
        for e1, e2 in zip(back.frame, d.frame):
            assert e1.kind == e2.kind and e1.grade == e2.grade
            assert e1.field.coefficients == e2.field.coefficients


def test_residue_roundtrip(seki):
    r = residue_for(seki, S01)
    data = serialize.residue_to_json(r)
    back = serialize.residue_from_json(data)
    assert back == r


def test_residue_k_mismatch_rejected(seki):
    data = serialize.residue_to_json(residue_for(seki, S01))
    data["k"] = 5
    with pytest.raises(SchemaError):
        serialize.residue_from_json(data)


def test_connection_roundtrip(cusp):
    conn = LogConnection(
        cusp,
        (MatrixPolyMap.from_constant(S01, cusp.weights), MatrixPolyMap.zeros(2, cusp.weights)),
    )
    back = serialize.connection_from_json(json.loads(json.dumps(serialize.connection_to_json(conn))))
    assert back.divisor.name == "cusp"
    assert back.components == conn.components


def test_point_roundtrip(cusp):
    x = WeightedPoly.variable(0, cusp.weights)
    point = ModuliPoint(
        components=(MatrixPolyMap.zeros(2, cusp.weights),),
        corrections=(MatrixPolyMap.from_constant(S01, cusp.weights).scale(x),),
    )
    back = serialize.point_from_json(json.loads(json.dumps(serialize.point_to_json(point))), cusp.weights)
    assert back == point


def test_system_roundtrip(seki):
    problem = moduli_system(seki, residue_for(seki, S01))
    data = serialize.system_to_json(problem.system, seki.variables)
    back = serialize.system_from_json(json.loads(json.dumps(data)))
    assert back.coordinate_names == problem.system.coordinate_names
    assert back.equations == problem.system.equations


def test_canonical_dumps_is_stable():
    payload = {"b": [1, 2], "a": {"y": Fraction is not None, "x": 0}}
    assert serialize.canonical_dumps(payload) == serialize.canonical_dumps(payload)
    assert serialize.canonical_dumps(payload).startswith('{"a":')


def test_load_json_file_errors(tmp_path):
    missing = tmp_path / "missing.json"
    with pytest.raises(SchemaError):
        serialize.load_json_file(str(missing))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError) as err:
        serialize.load_json_file(str(bad))
    assert "line" in str(err.value)
