import json
from fractions import Fraction

import pytest

from ehrhart_forge import serialize
from ehrhart_forge.counting import CountTable, TranslationFamily
from ehrhart_forge.errors import InvalidInputError
from ehrhart_forge.fluctuation import realize_sequence, sequence_to_qp
from ehrhart_forge.geometry import unit_vector
from ehrhart_forge.qde import QdeInstance, build_gadget
from ehrhart_forge.transform import EhrhartPolynomial, to_dilation_family

from conftest import box_polytope


def test_polytope_round_trip(unit_square):
    doc = serialize.polytope_to_json(unit_square)
    assert doc["vertices"][0] == ["0/1", "0/1"]
    assert serialize.polytope_from_json(doc) == unit_square
    # survives a JSON text cycle too
    again = serialize.polytope_from_json(json.loads(json.dumps(doc)))
    assert again == unit_square


def test_gadget_round_trip_and_tag_schema():
    g = build_gadget(QdeInstance(1, 2, 1))
    doc = serialize.gadget_to_json(g)
    assert doc["N"] == "2" and doc["L"] == str(g.big_l)
    tags = [p["tag"] for p in doc["hull"]["pieces"]]
    assert tags[0] == {"6": "1"}  # 1-indexed axis keys, integer tag values
    back = serialize.gadget_from_json(json.loads(json.dumps(doc)))
    assert back.hull == g.hull
    assert back.factorization == g.factorization
    assert back.family == g.family


def test_real_gadget_round_trip():
    g = build_gadget(QdeInstance(1, 2, 1), "real")
    doc = serialize.gadget_to_json(g)
    assert "delta" in doc and "K" in doc
    back = serialize.gadget_from_json(doc)
    assert back.delta == g.delta and back.big_k == g.big_k
    assert back.parallelogram == g.parallelogram


def test_family_and_table_round_trip():
    fam = TranslationFamily(box_polytope((0, 1)), unit_vector(1, 0), 4)
    doc = serialize.family_to_json(fam)
    assert doc["direction"] == ["1/1"]
    assert doc["denominator"] == "4"
    assert serialize.family_from_json(doc) == fam

    table = CountTable(((0, 2), (1, 3)), 0, 2)
    tdoc = serialize.count_table_to_json(table)
    assert tdoc == {"entries": [[0, 2], [1, 3]], "argmin": 0, "min": 2}
    assert serialize.count_table_from_json(tdoc) == table


def test_dilation_and_realization_round_trip():
    fam = TranslationFamily(box_polytope((0, Fraction(1, 2))), unit_vector(1, 0), 2)
    conv = to_dilation_family(fam)
    doc = serialize.dilation_family_to_json(conv)
    assert doc["M"] == str(conv.m)
    assert serialize.dilation_family_from_json(doc) == conv

    res = realize_sequence([2, 0])
    rdoc = serialize.realization_to_json(res)
    assert rdoc["dim"] == res.dim and rdoc["vertexCount"] == res.vertex_count
    back = serialize.realization_from_json(json.loads(json.dumps(rdoc)))
    assert back == res


def test_qp_round_trip():
    qp = sequence_to_qp([3, 1, 4])
    doc = serialize.qp_to_json(qp)
    assert serialize.qp_from_json(json.loads(json.dumps(doc))) == qp
    assert doc["terms"][1]["gamma"] == "-3"


def test_ehrhart_poly_round_trip():
    p = EhrhartPolynomial((Fraction(1), Fraction(3, 2), Fraction(1, 2)))
    doc = serialize.ehrhart_poly_to_json(p)
    assert doc == {"coefficients": ["1/1", "3/2", "1/2"]}
    assert serialize.ehrhart_poly_from_json(doc) == p


def test_malformed_json_rejected():
    with pytest.raises(InvalidInputError):
        serialize.polytope_from_json({"dim": 2})
    with pytest.raises(InvalidInputError):
        serialize.load_file("/nonexistent/path.json")
