from __future__ import annotations

import json
from fractions import Fraction

import pytest

from mapsphere.poincare import (
    InvalidRingError, RingParseError, load_ring, parse_coefficient, parse_ring, ring_to_document,
    validate_ring,
)

from conftest import CORPUS, DATA, ring


def test_parse_coefficient():
    assert parse_coefficient("3/6") == Fraction(1, 2)
    assert parse_coefficient("-2") == -2
    with pytest.raises(RingParseError):
        parse_coefficient("1/0")
    with pytest.raises(RingParseError):
        parse_coefficient("0.5")


def test_bad_coefficient_file_is_a_parse_error():
    with pytest.raises(RingParseError) as exc:
        load_ring(DATA / "bad_coefficient.json")
    assert "products[0]" in str(exc.value)


def test_truncated_json_reports_position():
    with pytest.raises(RingParseError) as exc:
        load_ring(DATA / "truncated.json")
    assert "line" in str(exc.value) and "column" in str(exc.value)


def test_singular_pairing_names_the_degree():
    with pytest.raises(InvalidRingError) as exc:
        validate_ring(load_ring(DATA / "singular_pairing.json"))
    assert any(d.code == "duality" and "H^2" in d.message for d in exc.value.diagnostics)


@pytest.mark.parametrize("mutation, code", [
    (lambda d: d.update(dimension=5), "dimension"),
    (lambda d: d["generators"].append({"label": "z", "degree": 1}), "odd-edge"),
    (lambda d: d.update(fundamental_class="t"), "top"),
    (lambda d: d["products"].append(["t", "t2", {"t3": "2/1"}]), None),
])
def test_validation_diagnostics(mutation, code):
    doc = json.loads((CORPUS / "cp3.json").read_text())
    mutation(doc)
    if code is None:
        with pytest.raises(RingParseError):
            parse_ring(doc)
        return
    with pytest.raises(InvalidRingError) as exc:
        validate_ring(parse_ring(doc))
    assert code in {d.code for d in exc.value.diagnostics}


def test_rescaled_structure_constant_is_accepted():
    doc = json.loads((CORPUS / "cp3.json").read_text())
    doc["products"][0][2]["t2"] = "2/1"
    P = validate_ring(parse_ring(doc))
    assert P.coeff("t", "t", "t2") == 2


def test_document_round_trip(corpus):
    for P in corpus.values():
        again = validate_ring(parse_ring(ring_to_document(P.ring)))
        assert again.table == P.table


def test_cp3_basis_and_flags():
    P = ring("cp3")
    assert P.basis.labels() == ["1", "t", "PD(t)", "w"]
    assert P.is_primitive() is False
    assert P.d_of_X() == 4
    assert P.epsilon("t", "PD(t)", "w") == 1
    assert P.hat("t") == "PD(t)"


def test_middle_degree_normal_forms():
    assert ring("s2xs2").basis.gram == [[2, 0], [0, -2]]
    assert ring("s3xs3").basis.gram == [[0, -1], [1, 0]]
    assert ring("cp2xcp2").basis.gram == [[1, 0, 0], [0, 2, 0], [0, 0, -2]]


def test_primitivity_flags(corpus):
    flags = {k: P.is_primitive() for k, P in corpus.items()}
    assert flags == {"cp2": True, "cp3": False, "s2xs2": True, "s3xs3": True, "cp2xcp2": False}


def test_epsilon_unit_symmetry_and_degree(corpus):
    for P in corpus.values():
        cls = P.basis.classes
        for x in cls:
            assert P.epsilon(x.label, "1", x.label) == 1 == P.epsilon("1", x.label, x.label)
        for (i, j, k), c in P.epsilon_items():
            assert cls[i].degree + cls[j].degree == cls[k].degree
            sign = -1 if cls[i].degree * cls[j].degree % 2 else 1
            assert P.eps_idx(j, i, k) == sign * c


def test_e_matrix_shape(corpus):
    P = corpus["cp2xcp2"]
    assert len(P.e_matrix(2, "w")) == 2 and len(P.e_matrix(2, "w")[0]) == 2
    m = P.e_matrix(4, "w")
    assert len(m) == 3 and len(m[0]) == 3
