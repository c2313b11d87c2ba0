"""Extremal host family and constructive tiling tests.

Degree lists and class profiles asserted here were computed by hand from
the construction descriptions before the code existed; they are frozen as
oracles.
"""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tilekit.constructions import (
    ExtremalOneSpec,
    HStarSpec,
    apex_augment,
    build_h1,
    build_hstar,
    extremal_one,
    extremal_three,
    extremal_two,
    lemma62_perfect_tiling,
    neighborhood_partite_witness,
)
from tilekit.graphs import Graph, bottle_graph, complete_multipartite, is_valid_tiling
from tilekit.solver import max_tiling

PROPERTY_SETTINGS = settings(
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

C5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
K3 = complete_multipartite([1, 1, 1]).graph
K4 = complete_multipartite([1, 1, 1, 1]).graph


# ---------------------------------------------------------------------------
# family 1: the staircase window
# ---------------------------------------------------------------------------

EX1_SPEC = ExtremalOneSpec(r=2, sigma=1, omega=2, n=15, eta=Fraction(1, 15), k=2)


def test_extremal_one_frozen_degree_list():
    inst = extremal_one(EX1_SPEC)
    assert sorted(inst.host.graph.degrees()) == [
        1, 1, 1, 1, 3, 3, 4, 4, 5, 5, 6, 8, 10, 10, 14,
    ]
    assert inst.A == (0,)
    assert inst.C == (5, 6, 7, 8)


def test_extremal_one_window_rows_flatten():
    # rows k .. k + 2*eta*n of the staircase all keep the same degree
    inst = extremal_one(EX1_SPEC)
    neck = len(inst.host.classes[0])
    k, window = EX1_SPEC.k, 2
    row_degree = {
        i: inst.host.graph.degree(neck + i - 1) for i in range(k, k + window + 1)
    }
    assert len(set(row_degree.values())) == 1


def test_extremal_one_c_structure():
    inst = extremal_one(EX1_SPEC)
    g = inst.host.graph
    blocked = set(inst.host.classes[0]) - set(inst.A)
    for u in inst.C:
        for v in inst.C:
            assert u == v or not g.has_edge(u, v)
        for w in blocked:
            assert not g.has_edge(u, w)


def test_extremal_one_copies_through_c_must_use_a():
    # any pattern copy meeting C spends a vertex inside A, so |A| caps them
    inst = extremal_one(EX1_SPEC)
    g = inst.host.graph
    for u in inst.C:
        outside_v2 = [w for w in g.neighbors(u) if w not in inst.host.classes[1]]
        assert set(outside_v2) <= set(inst.A)


def test_extremal_one_validation():
    with pytest.raises(ValueError, match="divide"):
        extremal_one(ExtremalOneSpec(r=2, sigma=1, omega=2, n=16, eta=Fraction(1, 16), k=2))
    with pytest.raises(ValueError, match="not an integer"):
        extremal_one(ExtremalOneSpec(r=2, sigma=1, omega=2, n=15, eta=Fraction(1, 7), k=2))
    with pytest.raises(ValueError, match="1 <= sigma <= omega"):
        extremal_one(ExtremalOneSpec(r=2, sigma=3, omega=2, n=15, eta=Fraction(1, 15), k=2))
    with pytest.raises(ValueError, match="k must satisfy"):
        extremal_one(ExtremalOneSpec(r=2, sigma=1, omega=2, n=15, eta=Fraction(1, 15), k=9))


# ---------------------------------------------------------------------------
# family 2: the degree dip
# ---------------------------------------------------------------------------


def test_neighborhood_witness_default_is_always_none():
    # restricting an optimal colouring to N(v) drops v's own colour
    for g in (C5, K3, K4):
        assert neighborhood_partite_witness(g) is None


def test_neighborhood_witness_with_fewer_parts():
    assert neighborhood_partite_witness(K4, 2) == 0
    assert neighborhood_partite_witness(C5, 1) is None


def test_extremal_two_frozen_profile():
    inst = extremal_two(C5, 40, Fraction(1, 20))
    assert inst.host.class_sizes() == (11, 13, 16)
    assert inst.v_prime == (0, 1, 2)
    g = inst.host.graph
    for v in inst.v_prime:
        assert g.degree(v) == 16  # (1 - (omega+sigma)/h) n
    others = set(range(40)) - set(inst.v_prime)
    assert all(g.degree(v) >= 24 for v in others)  # (1 - omega/h) n


def test_extremal_two_dip_is_exactly_blocked_from_one_class():
    inst = extremal_two(C5, 40, Fraction(1, 20))
    g = inst.host.graph
    class_two = set(inst.host.classes[1])
    for v in inst.v_prime:
        assert class_two.isdisjoint(g.neighbors(v))


def test_extremal_two_validation():
    with pytest.raises(ValueError, match="sigma < omega"):
        extremal_two(K3, 12, Fraction(1, 12))
    with pytest.raises(ValueError, match="must divide"):
        extremal_two(C5, 41, Fraction(1, 20))
    with pytest.raises(ValueError, match="positive"):
        extremal_two(C5, 40, 0)
    with pytest.raises(ValueError, match=">= 1"):
        extremal_two(C5, 40, Fraction(1, 2))


# ---------------------------------------------------------------------------
# family 3: the proportional bottleneck
# ---------------------------------------------------------------------------


def test_extremal_three_frozen_profile():
    host = extremal_three(K3, 18, Fraction(1, 3), Fraction(1, 18))
    assert host.class_sizes() == (1, 9, 8)


def test_extremal_three_first_class_caps_the_tiling():
    host = extremal_three(K3, 18, Fraction(1, 3), Fraction(1, 18))
    result = max_tiling(host.graph, [K3])
    assert result.proven_optimal
    assert result.covered_count == 3  # one triangle per first-class vertex


def test_extremal_three_validation():
    with pytest.raises(ValueError, match="strictly inside"):
        extremal_three(K3, 18, 1, Fraction(1, 18))
    with pytest.raises(ValueError, match="not an integer"):
        extremal_three(K3, 19, Fraction(1, 3), Fraction(1, 19))
    with pytest.raises(ValueError, match="positive"):
        extremal_three(K3, 18, Fraction(1, 3), Fraction(1, 2))


# ---------------------------------------------------------------------------
# apex augmentation
# ---------------------------------------------------------------------------


def test_apex_augment():
    g = Graph(3, [(0, 1)])
    aug = apex_augment(g, 2)
    assert aug.n == 5
    assert aug.degree(3) == 4 and aug.degree(4) == 4
    assert aug.has_edge(3, 4)
    assert aug.degree(2) == 2
    with pytest.raises(ValueError):
        apex_augment(g, -1)


def test_apex_augment_zero_is_identity():
    g = Graph(4, [(0, 1), (2, 3)])
    assert apex_augment(g, 0) == g


# ---------------------------------------------------------------------------
# perfect tilings of the four blow-up targets
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("target", ["B", "B*", "B'", "Kr"])
@pytest.mark.parametrize("m", [1, 2])
def test_lemma62_targets_are_perfectly_tiled(target: str, m: int):
    B = bottle_graph(3, 1, 2)
    result = lemma62_perfect_tiling(target, B, m)
    assert is_valid_tiling(result.host.graph, result.tiling)
    assert len(result.tiling.covered) == result.host.graph.n
    bstar_order = 1 * m + 2 * (3 - 1) * m
    assert len(result.tiling) == result.host.graph.n // bstar_order


def test_lemma62_kr_copy_counts():
    B = bottle_graph(3, 1, 2)  # t = (2-1)*5 = 5
    result = lemma62_perfect_tiling("Kr", B, 1)
    assert result.host.class_sizes() == (5, 5, 5)
    assert result.copy_counts == {"rotated": 3}


def test_lemma62_bprime_counts():
    B = bottle_graph(3, 1, 3)  # b = 7, t = 14
    result = lemma62_perfect_tiling("B'", B, 1)
    assert result.host.class_sizes() == (14, 28, 28)
    assert result.copy_counts == {"aligned": 7, "rotated": 3}


def test_lemma62_validation():
    with pytest.raises(ValueError, match="t = .* 0"):
        lemma62_perfect_tiling("B", bottle_graph(3, 2, 2), 1)
    with pytest.raises(ValueError, match="unknown target"):
        lemma62_perfect_tiling("C", bottle_graph(3, 1, 2), 1)
    with pytest.raises(ValueError, match="m must be"):
        lemma62_perfect_tiling("B", bottle_graph(3, 1, 2), 0)


@PROPERTY_SETTINGS
@given(
    st.sampled_from(["B", "B*", "B'", "Kr"]),
    st.integers(min_value=2, max_value=3),
    st.integers(min_value=1, max_value=2),
    st.integers(min_value=1, max_value=2),
)
def test_lemma62_random_bottles(target: str, r: int, sigma: int, extra: int):
    B = bottle_graph(r, sigma, sigma + extra)
    result = lemma62_perfect_tiling(target, B, 1)
    assert is_valid_tiling(result.host.graph, result.tiling)
    assert len(result.tiling.covered) == result.host.graph.n


# ---------------------------------------------------------------------------
# the relaxed-neck bottle with a perfect pattern tiling
# ---------------------------------------------------------------------------


def test_hstar_c5_with_fractional_neck():
    result = build_hstar(HStarSpec(C5, Fraction(3, 2)))
    assert result.hstar.class_sizes() == (6, 7, 7)
    assert result.direct_count == 2
    assert result.companion_count == 1
    assert len(result.tiling) == 4  # 2 direct + 1 companion of r-1 = 2 copies
    assert is_valid_tiling(result.hstar.graph, result.tiling)
    assert len(result.tiling.covered) == 20


def test_hstar_at_sigma_is_all_direct():
    result = build_hstar(HStarSpec(C5, 1))
    assert result.companion_count == 0
    assert result.direct_count == len(result.tiling)
    assert len(result.tiling.covered) == result.hstar.graph.n


def test_hstar_at_top_of_range():
    # sigma' = h/r makes the host balanced
    result = build_hstar(HStarSpec(C5, Fraction(5, 3)))
    sizes = set(result.hstar.class_sizes())
    assert len(sizes) == 1
    assert is_valid_tiling(result.hstar.graph, result.tiling)
    assert len(result.tiling.covered) == result.hstar.graph.n


def test_hstar_rejections():
    with pytest.raises(ValueError, match="fractional"):
        build_hstar(HStarSpec(complete_multipartite([1, 2, 3]).graph, Fraction(3, 2)))
    with pytest.raises(ValueError, match="no proper colouring"):
        build_hstar(HStarSpec(complete_multipartite([1, 2, 4]).graph, Fraction(3, 2)))
    with pytest.raises(ValueError, match="t = 0"):
        build_hstar(HStarSpec(K3, 1))
    with pytest.raises(ValueError, match="sigma'"):
        build_hstar(HStarSpec(C5, 2))


# ---------------------------------------------------------------------------
# the exactly-proportional bottle
# ---------------------------------------------------------------------------


def test_h1_k3_frozen():
    result = build_h1(K3, Fraction(1, 2))
    assert result.h1.class_sizes() == (2, 5, 5)
    assert len(result.tiling.covered) == 6
    assert is_valid_tiling(result.h1.graph, result.tiling)


def test_h1_c5_frozen():
    result = build_h1(C5, Fraction(1, 2))
    assert result.h1.class_sizes() == (2, 9, 9)
    assert len(result.tiling.covered) == 10
    assert is_valid_tiling(result.h1.graph, result.tiling)


@PROPERTY_SETTINGS
@given(
    st.sampled_from([K3, C5, complete_multipartite([1, 2]).graph]),
    st.fractions(min_value=Fraction(1, 6), max_value=Fraction(5, 6), max_denominator=6),
)
def test_h1_covers_exactly_the_x_fraction(pattern: Graph, x: Fraction):
    result = build_h1(pattern, x)
    assert is_valid_tiling(result.h1.graph, result.tiling)
    assert len(result.tiling.covered) == x * result.h1.graph.n


def test_h1_neck_is_exactly_filled():
    result = build_h1(K3, Fraction(1, 2))
    neck = set(result.h1.classes[0])
    assert neck <= result.tiling.covered


def test_h1_domain():
    with pytest.raises(ValueError, match="strictly inside"):
        build_h1(K3, 1)
