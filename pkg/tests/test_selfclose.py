from __future__ import annotations

import pytest

from mapsphere.cga import AlgebraMap, first_singular_degree, linear_part
from mapsphere.models import minimal_k0, u, v
from mapsphere.selfclose import (
    NotADGAMap, UnsupportedComponent, matrices_of, ne_value, scalar_map, self_closeness,
    verify_matrix_relations, witness_k0, witness_k1,
)

from conftest import ring

# value table: primitivity and d(X) read off by hand from each ring
EXPECTED = {
    "cp2": (4, 7), "cp3": (4, 11), "s2xs2": (4, 7), "s3xs3": (6, 11), "cp2xcp2": (4, 15),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_values(name):
    P = ring(name)
    for k, want in enumerate(EXPECTED[name]):
        rep = self_closeness(P, k)
        assert rep.value == want == ne_value(P, k)
        assert rep.verified
        assert first_singular_degree(linear_part(rep.witness.map)) == want


def test_primitivity_and_dx():
    assert ring("s3xs3").is_primitive() and ring("cp2").is_primitive()
    assert not ring("cp3").is_primitive() and ring("cp3").d_of_X() == 4
    assert ring("cp2xcp2").d_of_X() == 4


def test_unsupported_component():
    with pytest.raises(UnsupportedComponent):
        self_closeness(ring("cp2"), 2)


def test_cp2_degree_zero_witness():
    P = ring("cp2")
    w = witness_k0(P)
    assert w.claimed == 4
    M = matrices_of(w.map, P)
    assert M.a(0) == [[0]] and M.a(2) == [[1]]
    # primitive ring: the top v generator is fixed, the other v generators die
    assert M.b(0) == [[0]] and M.b(2) == [[0]] and M.b(4) == [[1]]
    assert verify_matrix_relations(w.map, P).passed


def test_s3xs3_primitive_witness_keeps_top():
    P = ring("s3xs3")
    w = witness_k0(P)
    A = w.algebra
    assert w.map.image(v("w")) == A.gen(v("w"))
    assert not w.map.image(u("1"))


@pytest.mark.parametrize("c", [1, 2, -3])
def test_scalar_map_matrices(c):
    P = ring("cp2")
    f = scalar_map(minimal_k0(P), c)
    M = matrices_of(f, P)
    assert M.a(0) == [[c]] and M.a(2) == [[c]]
    assert M.b(4) == [[c * c]]
    assert verify_matrix_relations(f, P).passed


def test_identity_relations_on_corpus(corpus):
    for P in corpus.values():
        A = minimal_k0(P).algebra
        ident = AlgebraMap(A, A, {g.label: A.gen(g.label) for g in A.generators})
        assert verify_matrix_relations(ident, P).passed


def test_non_dga_map_rejected():
    P = ring("cp2")
    A = minimal_k0(P).algebra
    vals = {g.label: A.gen(g.label) for g in A.generators}
    vals[u("t")] = 2 * A.gen(u("t"))
    with pytest.raises(NotADGAMap) as exc:
        verify_matrix_relations(AlgebraMap(A, A, vals), P)
    assert exc.value.generator == v("w")


def test_witness_after_automorphism():
    P = ring("cp3")
    M = minimal_k0(P)
    w = witness_k0(P, M)
    g = w.map.compose(scalar_map(M, 2))
    assert verify_matrix_relations(g, P).passed
    assert first_singular_degree(linear_part(g)) == 4


def test_degree_one_witness_cp3():
    w = witness_k1(ring("cp3"))
    assert w.claimed == 11
    assert {c.name for c in w.transcript} >= {"witness-fixes-U", "witness-sends-vdot1-to-zeta"}


def test_export_shape():
    doc = self_closeness(ring("cp3"), 1).export()
    assert doc["NE"] == 11 and doc["verified"] is True
    assert doc["witness"]["claimed_singular_degree"] == 11
    assert "cited" in doc["upper_bound"]
