"""Structural gadget tests: expanding/swapping sets, greedy cliques,
regularity, blow-up inheritance.

The matching-based finders are compared against the brute-force existence
oracles in _oracles.py on randomly planted tilings.
"""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from _oracles import expanding_set_exists, regularity_violation, swapping_set_exists
from tilekit.gadgets import (
    ExpandingSet,
    GreedyFailure,
    GreedyKrParams,
    SlackParams,
    check_expanding_set,
    check_swapping_set,
    epsilon_regular_check,
    expand_or_swap_step,
    find_expanding_set,
    find_swapping_set,
    greedy_kr,
    small_big_split,
    verify_blowup_inheritance,
)
from tilekit.graphs import (
    Embedding,
    Graph,
    Tiling,
    VertexOrdering,
    bottle_graph,
    complete_multipartite,
)
from tilekit.harness import random_tiling_instance
from tilekit.thresholds import chromatic_data, komlos_line

PROPERTY_SETTINGS = settings(
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

C5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
K3_CLASSES = ((0,), (1,), (2,))
K3 = Graph(3, [(0, 1), (1, 2), (2, 0)])


def k3_copy(u: int, v: int, w: int) -> Embedding:
    # neck u, width classes {v} and {w}
    return Embedding(K3, (u, v, w), K3_CLASSES)


# ---------------------------------------------------------------------------
# parameter bundles
# ---------------------------------------------------------------------------


def test_slack_params_hierarchy():
    SlackParams(eta=Fraction(1, 10), gamma=Fraction(1, 100))
    with pytest.raises(ValueError, match="gamma <= eta"):
        SlackParams(eta=Fraction(1, 10), gamma=Fraction(1, 50))
    with pytest.raises(ValueError, match="positive"):
        SlackParams(eta=Fraction(1, 10), gamma=0)
    with pytest.raises(ValueError, match="m must be"):
        SlackParams(eta=Fraction(1, 10), gamma=Fraction(1, 200), m=0)
    # larger m tightens the gamma cap
    with pytest.raises(ValueError, match="gamma <= eta"):
        SlackParams(eta=Fraction(1, 10), gamma=Fraction(1, 100), m=2)


def test_greedy_params_validation():
    params = GreedyKrParams(r=3, sigma=1, omega=2, eta=Fraction(1, 10))
    assert params.b == 5
    with pytest.raises(ValueError):
        GreedyKrParams(r=1, sigma=1, omega=1, eta=Fraction(1, 10))
    with pytest.raises(ValueError):
        GreedyKrParams(r=3, sigma=2, omega=1, eta=Fraction(1, 10))
    with pytest.raises(ValueError):
        GreedyKrParams(r=3, sigma=1, omega=1, eta=0)


# ---------------------------------------------------------------------------
# expanding sets
# ---------------------------------------------------------------------------


def test_expanding_set_found_when_vertex_sees_both_width_classes():
    host = Graph(4, [(0, 1), (1, 2), (2, 0), (3, 1), (3, 2)])
    tiling = Tiling((k3_copy(0, 1, 2),))
    found = find_expanding_set(host, tiling, 1)
    assert found is not None
    assert found.vertices == (3,)
    assert check_expanding_set(host, tiling, found)


def test_expanding_set_needs_every_width_class():
    # 3 sees only one width class; the neck does not help
    host = Graph(4, [(0, 1), (1, 2), (2, 0), (3, 1), (3, 0)])
    tiling = Tiling((k3_copy(0, 1, 2),))
    assert find_expanding_set(host, tiling, 1) is None


def test_expanding_set_saturation():
    # two eligible outside vertices, one copy: size 1 works, size 2 cannot
    host = Graph(5, [(0, 1), (1, 2), (2, 0), (3, 1), (3, 2), (4, 1), (4, 2)])
    tiling = Tiling((k3_copy(0, 1, 2),))
    assert find_expanding_set(host, tiling, 2) is None
    found = find_expanding_set(host, tiling, 1)
    assert found is not None and len(found) == 1


def test_check_expanding_set_catches_violations():
    host = Graph(4, [(0, 1), (1, 2), (2, 0), (3, 1), (3, 2)])
    tiling = Tiling((k3_copy(0, 1, 2),))
    copy = tiling.embeddings[0]
    inside = ExpandingSet(vertices=(0,), assignment=(copy,))
    assert "inside the tiling" in check_expanding_set(host, tiling, inside).violation
    foreign = ExpandingSet(vertices=(3,), assignment=(k3_copy(1, 0, 2),))
    assert "not in tiling" in check_expanding_set(host, tiling, foreign).violation
    with pytest.raises(ValueError, match="align"):
        ExpandingSet(vertices=(3,), assignment=())


def test_expanding_set_requires_positive_size():
    with pytest.raises(ValueError, match="size"):
        find_expanding_set(Graph(1), Tiling(), 0)


@PROPERTY_SETTINGS
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=3))
def test_expanding_finder_matches_brute_force(seed: int, size: int):
    host, tiling, _pattern = random_tiling_instance(seed)
    found = find_expanding_set(host, tiling, size)
    assert (found is not None) == expanding_set_exists(host, tiling, size)
    if found is not None:
        assert check_expanding_set(host, tiling, found)
        assert len(found) == size


# ---------------------------------------------------------------------------
# swapping sets
# ---------------------------------------------------------------------------


def _swap_fixture():
    # triangle copy on {0,1,2}; 3 sees neck 0 and width 1 but misses width 2;
    # pendant 4 keeps the witness vertex 2 late in the degree order
    host = Graph(5, [(0, 1), (1, 2), (2, 0), (3, 0), (3, 1), (4, 2)])
    tiling = Tiling((k3_copy(0, 1, 2),))
    ordering = VertexOrdering.by_degree(host)
    return host, tiling, ordering


def test_swapping_pair_with_index_gap():
    host, tiling, ordering = _swap_fixture()
    found = find_swapping_set(host, tiling, ordering, 1, 1)
    assert found is not None
    assert found.pairs == ((3, 2),)
    assert check_swapping_set(host, tiling, found)


def test_swapping_boundary_is_inclusive():
    host, tiling, ordering = _swap_fixture()
    gap = ordering.position(2) - ordering.position(3)
    assert find_swapping_set(host, tiling, ordering, gap, 1) is not None
    assert find_swapping_set(host, tiling, ordering, gap + 1, 1) is None


def test_swapping_offset_beyond_n_is_hopeless():
    host, tiling, ordering = _swap_fixture()
    assert find_swapping_set(host, tiling, ordering, host.n + 1, 1) is None


def test_check_swapping_set_catches_gap_violation():
    host, tiling, ordering = _swap_fixture()
    found = find_swapping_set(host, tiling, ordering, 1, 1)
    bad = type(found)(
        ordering=ordering, offset=host.n + 1, pairs=found.pairs, m=found.m
    )
    assert "index gap" in check_swapping_set(host, tiling, bad).violation


@PROPERTY_SETTINGS
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.integers(min_value=0, max_value=4),
    st.integers(min_value=1, max_value=2),
)
def test_swapping_finder_matches_brute_force(seed: int, k: int, size: int):
    host, tiling, _pattern = random_tiling_instance(seed)
    ordering = VertexOrdering.by_degree(host)
    found = find_swapping_set(host, tiling, ordering, k, size)
    assert (found is not None) == swapping_set_exists(host, tiling, ordering, k, size)
    if found is not None:
        assert check_swapping_set(host, tiling, found)


# ---------------------------------------------------------------------------
# the expand-or-swap step
# ---------------------------------------------------------------------------

STEP_PARAMS = SlackParams(eta=Fraction(1, 10), gamma=Fraction(1, 100))
K3_BOTTLE = bottle_graph(3, 1, 1)


def test_small_big_threshold_frozen():
    pattern = bottle_graph(2, 1, 2)  # b = 3, omega = 2
    g = Graph(300)
    report = small_big_split(
        g, Tiling(), pattern, STEP_PARAMS, VertexOrdering.by_degree(g)
    )
    assert report.threshold == 124
    assert len(report.small) == 300 and not report.big


def test_small_big_split_orders_by_ordering():
    host = Graph(6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2)])
    ordering = VertexOrdering.by_degree(host)
    report = small_big_split(host, Tiling(), K3_BOTTLE, STEP_PARAMS, ordering)
    both = list(report.small) + list(report.big)
    assert sorted(both) == list(range(6))
    for seq in (report.small, report.big):
        positions = [ordering.position(v) for v in seq]
        assert positions == sorted(positions)


def test_step_prefers_expansion():
    host = Graph(4, [(0, 1), (1, 2), (2, 0), (3, 1), (3, 2)])
    tiling = Tiling((k3_copy(0, 1, 2),))
    out = expand_or_swap_step(
        host, tiling, K3_BOTTLE, STEP_PARAMS, VertexOrdering.by_degree(host)
    )
    assert out.kind == "expanding"
    assert out.expanding.vertices == (3,)


def test_step_falls_back_to_swapping():
    host, tiling, ordering = _swap_fixture()
    out = expand_or_swap_step(host, tiling, K3_BOTTLE, STEP_PARAMS, ordering)
    assert out.kind == "swapping"
    assert out.swapping.pairs == ((3, 2),)


def test_step_finds_new_copy_with_empty_tiling():
    host = Graph(3, [(0, 1), (1, 2), (2, 0)])
    out = expand_or_swap_step(
        host, Tiling(), K3_BOTTLE, STEP_PARAMS, VertexOrdering.by_degree(host)
    )
    assert out.kind == "new-copy"
    assert out.new_copy.image_set == frozenset({0, 1, 2})


def test_step_exhausted_reports_split():
    host = Graph(4)
    out = expand_or_swap_step(
        host, Tiling(), K3_BOTTLE, STEP_PARAMS, VertexOrdering.by_degree(host)
    )
    assert out.kind == "exhausted"
    assert set(out.report.small) == {0, 1, 2, 3}


# ---------------------------------------------------------------------------
# greedy clique extraction
# ---------------------------------------------------------------------------


def test_greedy_succeeds_on_slack_balanced_host():
    host = complete_multipartite([4, 4, 4]).graph
    params = GreedyKrParams(r=3, sigma=1, omega=2, eta=Fraction(1, 10))
    result = greedy_kr(host, params)
    assert isinstance(result, Embedding)
    assert result.image == (0, 4, 8)


def test_greedy_fails_at_step_two_on_a_star():
    # center (vertex 0, degree 11) passes the floor of 8.4; every leaf misses it
    host = complete_multipartite([1, 11]).graph
    params = GreedyKrParams(r=3, sigma=1, omega=1, eta=Fraction(1, 10))
    result = greedy_kr(host, params)
    assert isinstance(result, GreedyFailure)
    assert result.step == 2
    assert result.neighborhood_size == 11


def test_greedy_fails_at_step_one_without_slack_room():
    host = complete_multipartite([6, 6]).graph
    params = GreedyKrParams(r=2, sigma=1, omega=1, eta=Fraction(1, 10))
    result = greedy_kr(host, params)
    assert isinstance(result, GreedyFailure)
    assert result.step == 1
    assert result.neighborhood_size == 12


def test_greedy_last_step_takes_any_common_neighbor():
    # K2 target: step 2 has no degree floor
    host = complete_multipartite([1, 11]).graph
    params = GreedyKrParams(r=2, sigma=1, omega=1, eta=Fraction(1, 10))
    result = greedy_kr(host, params)
    assert isinstance(result, Embedding)


@PROPERTY_SETTINGS
@given(
    st.integers(min_value=4, max_value=10),
    st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=30),
    st.integers(min_value=2, max_value=4),
)
def test_greedy_outcome_is_sound(n: int, raw_edges: list, r: int):
    edges = [(u % n, v % n) for u, v in raw_edges if u % n != v % n]
    host = Graph(n, edges)
    params = GreedyKrParams(r=r, sigma=1, omega=2, eta=Fraction(1, 10))
    result = greedy_kr(host, params)
    if isinstance(result, GreedyFailure):
        assert 1 <= result.step <= r
        return
    # a genuine clique, with every prefix inside the promised neighborhood size
    picks = result.image
    assert len(picks) == r
    for a in range(r):
        for b in range(a + 1, r):
            assert host.has_edge(picks[a], picks[b])
    k = host.n
    common = set(range(k))
    for i, x in enumerate(picks[:-1], start=1):
        bound = k - Fraction(i * params.omega, params.b) * k + i * params.eta * k / 3
        common &= set(host.neighbors(x))
        assert len(common) >= bound


# ---------------------------------------------------------------------------
# regularity
# ---------------------------------------------------------------------------


def test_half_graph_witness_frozen():
    # half graph on 5+5: i ~ j iff j - 5 >= i
    edges = [(i, j) for i in range(5) for j in range(5, 10) if j - 5 >= i]
    g = Graph(10, edges)
    result = epsilon_regular_check(range(5), range(5, 10), g, Fraction(1, 4))
    assert not result
    assert result.density == Fraction(3, 5)
    assert result.witness.X == (0, 1)
    assert result.witness.Y == (6, 7)
    assert result.witness.gap == Fraction(2, 5)


def test_complete_bipartite_is_regular():
    g = complete_multipartite([4, 4]).graph
    result = epsilon_regular_check(range(4), range(4, 8), g, Fraction(1, 10))
    assert result
    assert result.density == 1


def test_empty_side_is_regular():
    result = epsilon_regular_check([], [0, 1], Graph(2), Fraction(1, 2))
    assert result and result.density == 0


def test_regularity_validation():
    with pytest.raises(ValueError, match="disjoint"):
        epsilon_regular_check([0, 1], [1, 2], Graph(3), Fraction(1, 2))
    with pytest.raises(ValueError, match="at most"):
        epsilon_regular_check(range(11), range(11, 13), Graph(13), Fraction(1, 2))
    with pytest.raises(ValueError, match="positive"):
        epsilon_regular_check([0], [1], Graph(2), 0)


@PROPERTY_SETTINGS
@given(
    st.lists(st.tuples(st.integers(0, 3), st.integers(4, 7)), max_size=16),
    st.fractions(min_value=Fraction(1, 8), max_value=Fraction(7, 8), max_denominator=8),
)
def test_regularity_matches_fraction_brute_force(raw_edges: list, eps: Fraction):
    g = Graph(8, raw_edges)
    result = epsilon_regular_check(range(4), range(4, 8), g, eps)
    violation = regularity_violation(range(4), range(4, 8), g, eps)
    assert result.regular == (violation is None)


# ---------------------------------------------------------------------------
# blow-up inheritance
# ---------------------------------------------------------------------------


def test_blowup_inheritance_on_a_passing_host():
    line = komlos_line(chromatic_data(C5))
    host = complete_multipartite([6, 12, 12]).graph
    for s in (1, 2, 3):
        report = verify_blowup_inheritance(host, s, line)
        assert report
        assert report.scale == s


def test_blowup_input_failure_short_circuits():
    line = komlos_line(chromatic_data(C5))
    report = verify_blowup_inheritance(C5, 2, line)
    assert not report
    assert not report.input_check
    assert report.failed_index is None


def test_blowup_identity_matches_materialized_graph():
    from tilekit.graphs import blow_up
    from tilekit.thresholds import check_degree_sequence

    line = komlos_line(chromatic_data(K3))
    host = complete_multipartite([3, 3, 3]).graph
    s = 3
    report = verify_blowup_inheritance(host, s, line)
    blown = blow_up(host, s).graph
    # the symbolic check agrees with the literal one on the blown graph
    assert bool(report) == bool(check_degree_sequence(blown, line))
    assert sorted(blown.degrees()) == sorted(
        s * d for d in host.degrees() for _ in range(s)
    )


@PROPERTY_SETTINGS
@given(
    st.integers(min_value=2, max_value=6),
    st.integers(min_value=1, max_value=4),
)
def test_blowup_never_fails_after_input_passes(width: int, s: int):
    # the inherited bound is implied by the input bound; only the input gates
    line = komlos_line(chromatic_data(K3))
    host = complete_multipartite([width] * 3).graph
    report = verify_blowup_inheritance(host, s, line)
    assert report.ok == report.input_check.ok
