from __future__ import annotations

from fractions import Fraction

import pytest

from mapsphere.cga import check_d_squared, is_minimal
from mapsphere.models import (
    export_model, full_model, homotopy_ranks, minimal_k0, minimal_k1, substitute_top, u, v, vdot,
)

from conftest import ring


def test_cp2_degree_zero_model_by_hand():
    A = minimal_k0(ring("cp2")).algebra
    assert [(g.label, g.degree) for g in A.generators] == [
        ("u⊗t", 2), ("v⊗w", 3), ("u⊗1", 4), ("v⊗t", 5), ("v⊗1", 7)]
    ut, u1 = A.gen("u⊗t"), A.gen("u⊗1")
    assert A.d_gen("v⊗w") == ut * ut
    assert A.d_gen("v⊗t") == 2 * ut * u1
    assert A.d_gen("v⊗1") == u1 * u1


def test_full_model_keeps_degree_zero_generator():
    F = full_model(ring("cp2"))
    assert F.algebra.generator(u("w")).degree == 0
    assert is_minimal(F.algebra) is None
    assert check_d_squared(F.algebra)


def test_component_substitution():
    F = full_model(ring("cp2"))
    C1 = substitute_top(F, 1).algebra
    # d(v⊗w) picks up 2 u⊗1 from the two orderings of (1, w)
    assert C1.d_gen(v("w")) == 2 * C1.gen(u("1")) + C1.gen(u("t")) ** 2
    C3 = substitute_top(F, 3).algebra
    assert C3.d_gen(v("w")) == 6 * C3.gen(u("1")) + C3.gen(u("t")) ** 2
    assert is_minimal(C1) is False


def test_cp2_degree_one_minimal_model():
    M = minimal_k1(ring("cp2"))
    A = M.algebra
    ut = A.gen(u("t"))
    assert [g.label for g in A.generators] == [u("t"), vdot("t"), vdot("1")]
    assert A.d_gen(vdot("t")) == ut ** 3
    assert A.d_gen(vdot("1")) == Fraction(1, 4) * ut ** 4
    assert M.eta == ut * ut
    assert all(M.checks.values())


def test_cp3_degree_one_eta_is_mixed():
    M = minimal_k1(ring("cp3"))
    A = M.algebra
    assert M.eta == 2 * A.gen(u("t")) * A.gen(u("PD(t)"))
    assert A.d_gen(vdot("PD(t)")) == M.eta * A.gen(u("PD(t)")) - A.gen(u("t")) ** 2


def test_s3xs3_differentials_vanish():
    A = minimal_k1(ring("s3xs3")).algebra
    assert all(not A.d_gen(g.label) for g in A.generators)


def test_s2xs2_top_differential():
    A = minimal_k0(ring("s2xs2")).algebra
    assert A.d_gen(v("w")) == 2 * A.gen(u("m2_1")) ** 2 - 2 * A.gen(u("m2_2")) ** 2


def test_rank_tables():
    P = ring("cp2")
    assert homotopy_ranks(minimal_k0(P).algebra) == {2: 1, 3: 1, 4: 1, 5: 1, 7: 1}
    assert homotopy_ranks(minimal_k1(P).algebra) == {2: 1, 5: 1, 7: 1}
    with pytest.raises(ValueError):
        homotopy_ranks(full_model(P).algebra)


def test_degree_one_ranks_start_at_two(corpus):
    for P in corpus.values():
        assert min(homotopy_ranks(minimal_k1(P).algebra)) >= 2


def test_models_have_square_zero_differential(corpus):
    for P in corpus.values():
        for alg in (full_model(P).algebra, minimal_k0(P).algebra, minimal_k1(P).algebra):
            assert check_d_squared(alg)
        assert is_minimal(minimal_k0(P).algebra) is True
        assert is_minimal(minimal_k1(P).algebra) is True


def test_export_format():
    doc = export_model(minimal_k1(ring("cp3")).wbar)
    assert doc["minimal"] is True and doc["d_squared_zero"] is True
    assert doc["eta"] == [["2/1", ["u⊗PD(t)", "u⊗t"]]]
    gen = doc["generators"][0]
    assert set(gen) == {"label", "degree", "provenance"}
    assert set(gen["provenance"]) == {"family", "class"}
