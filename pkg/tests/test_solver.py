"""Maximum-tiling solver tests: catalogs, branch and bound, oracle agreement."""

from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tilekit.graphs import (
    Graph,
    Tiling,
    bottle_graph,
    complete_multipartite,
    is_valid_tiling,
)
from tilekit.solver import (
    CopyCatalog,
    TilingResult,
    coverage_deficit,
    enumerate_copies,
    max_tiling,
    max_tiling_oracle,
)

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

K2 = Graph(2, [(0, 1)])
K3 = Graph(3, [(0, 1), (1, 2), (2, 0)])
P3 = Graph(3, [(0, 1), (1, 2)])
C5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])

PETERSEN = Graph(
    10,
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
     (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
     (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)],
)


@st.composite
def hosts(draw: st.DrawFn, max_n: int = 10) -> Graph:
    n = draw(st.integers(min_value=2, max_value=max_n))
    possible = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(possible), max_size=len(possible)))
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# copy enumeration
# ---------------------------------------------------------------------------


def test_triangles_in_k4():
    cat = enumerate_copies(complete_multipartite([1] * 4).graph, K3)
    assert len(cat) == 4
    assert not cat.truncated
    assert cat.image_sets() == [
        frozenset(s) for s in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
    ]


def test_copies_deduplicate_by_image_set():
    # 12 automorphic embeddings of C5 into K5, one catalog entry
    cat = enumerate_copies(complete_multipartite([1] * 5).graph, C5)
    assert len(cat) == 1


def test_within_and_touching_filters():
    host = complete_multipartite([1] * 5).graph
    cat = enumerate_copies(host, K3, within=[0, 1, 2, 3])
    assert len(cat) == 4
    cat = enumerate_copies(host, K3, touching=[4])
    assert len(cat) == 6
    assert all(4 in emb.image for emb in cat.copies)


def test_cap_semantics():
    host = complete_multipartite([1] * 4).graph
    exact = enumerate_copies(host, K3, cap=4)
    assert len(exact) == 4 and not exact.truncated
    cut = enumerate_copies(host, K3, cap=2)
    assert len(cut) == 2 and cut.truncated


def test_enumerate_rejects_degenerate_inputs():
    with pytest.raises(ValueError, match="empty pattern"):
        enumerate_copies(K3, Graph(0))
    with pytest.raises(ValueError, match="host only"):
        enumerate_copies(K2, K3)


@PROPERTY_SETTINGS
@given(hosts(max_n=8))
def test_enumerated_copies_are_valid_embeddings(host: Graph):
    for pattern in (K2, P3, K3):
        if pattern.n > host.n:
            continue
        for emb in enumerate_copies(host, pattern).copies:
            assert emb.violation_in(host) is None


def test_bottle_pattern_carries_classes():
    host = complete_multipartite([2, 2, 2]).graph
    cat = enumerate_copies(host, bottle_graph(3, 1, 1))
    assert cat.pattern_classes == ((0,), (1,), (2,))
    assert all(emb.pattern_classes == ((0,), (1,), (2,)) for emb in cat.copies)


# ---------------------------------------------------------------------------
# branch and bound on known instances
# ---------------------------------------------------------------------------


def test_perfect_triangle_tiling_of_octahedron():
    result = max_tiling(complete_multipartite([2, 2, 2]).graph, [K3])
    assert result.proven_optimal
    assert result.covered_count == 6
    assert len(result.tiling) == 2


def test_petersen_splits_into_two_five_cycles():
    result = max_tiling(PETERSEN, [C5])
    assert result.proven_optimal
    assert result.covered_count == 10


def test_mixed_patterns_cover_disjoint_union():
    host = Graph(5, [(0, 1), (1, 2), (2, 0), (3, 4)])
    only_triangles = max_tiling(host, [K3])
    assert only_triangles.covered_count == 3
    mixed = max_tiling(host, [K3, K2])
    assert mixed.covered_count == 5
    assert sorted(e.pattern.n for e in mixed.tiling.embeddings) == [2, 3]


def test_result_is_validated():
    host = Graph(4, [(0, 1), (2, 3)])
    result = max_tiling(host, [K2])
    assert is_valid_tiling(host, result.tiling)
    assert coverage_deficit(result, host.n) == 0


def test_tiling_result_rejects_inconsistent_count():
    with pytest.raises(ValueError, match="disagrees"):
        TilingResult(tiling=Tiling(), covered_count=1, optimality="proven-optimal")


def test_tiling_result_rejects_unknown_optimality():
    with pytest.raises(ValueError, match="unknown optimality"):
        TilingResult(tiling=Tiling(), covered_count=0, optimality="maybe")


# ---------------------------------------------------------------------------
# resource limits
# ---------------------------------------------------------------------------


def test_budget_exhaustion_downgrades_optimality():
    host = complete_multipartite([4, 4, 4]).graph
    result = max_tiling(host, [K3], budget=5)
    assert not result.proven_optimal
    assert result.optimality == "best-found"
    assert "node-budget-hit" in result.reason


def test_copy_cap_downgrades_optimality():
    host = complete_multipartite([1] * 6).graph
    result = max_tiling(host, [K3], copy_cap=3)
    assert not result.proven_optimal
    assert "copy-cap-hit" in result.reason


def test_oracle_size_limit():
    with pytest.raises(ValueError, match="oracle refuses"):
        max_tiling_oracle(Graph(17), [K2])


# ---------------------------------------------------------------------------
# solver vs oracle
# ---------------------------------------------------------------------------


@PROPERTY_SETTINGS
@given(hosts(max_n=10))
def test_solver_agrees_with_oracle(host: Graph):
    patterns = [p for p in (K2, P3, K3) if p.n <= host.n]
    if not patterns:
        return
    ours = max_tiling(host, patterns)
    oracle = max_tiling_oracle(host, patterns)
    assert ours.proven_optimal
    assert ours.covered_count == oracle.covered_count
    assert is_valid_tiling(host, ours.tiling)
    assert is_valid_tiling(host, oracle.tiling)


def test_adding_edges_never_hurts_coverage():
    rng = random.Random(20240817)
    for _ in range(50):
        n = rng.randint(4, 9)
        possible = [(u, v) for u in range(n) for v in range(u + 1, n)]
        edges = [e for e in possible if rng.random() < 0.4]
        host = Graph(n, edges)
        before = max_tiling(host, [K3, K2]).covered_count
        missing = [e for e in possible if e not in set(edges)]
        if not missing:
            continue
        host2 = host.with_edges([rng.choice(missing)])
        after = max_tiling(host2, [K3, K2]).covered_count
        assert after >= before


def test_deterministic_reruns():
    host = Graph(8, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 7), (2, 3)])
    first = max_tiling(host, [K3, K2])
    second = max_tiling(host, [K3, K2])
    assert first == second
    o1 = max_tiling_oracle(host, [K3, K2])
    o2 = max_tiling_oracle(host, [K3, K2])
    assert o1 == o2


def test_covered_count_is_sum_of_copy_sizes():
    host = complete_multipartite([3, 3, 3]).graph
    result = max_tiling(host, [K3])
    assert result.covered_count == sum(e.pattern.n for e in result.tiling.embeddings)


# ---------------------------------------------------------------------------
# lexicographic overlap objective
# ---------------------------------------------------------------------------


def test_oracle_overlap_steers_among_equal_optima():
    # P3 has two maximum K2-tilings: {0,1} and {1,2}
    result = max_tiling_oracle(P3, [K2], maximize_overlap=[2])
    assert result.covered_count == 2
    assert 2 in result.tiling.covered
    other = max_tiling_oracle(P3, [K2], maximize_overlap=[0])
    assert 0 in other.tiling.covered


def test_oracle_overlap_never_beats_coverage():
    # covering wins even when overlap prefers a smaller tiling
    host = Graph(5, [(0, 1), (1, 2), (2, 0), (3, 4)])
    result = max_tiling_oracle(host, [K3, K2], maximize_overlap=[3, 4])
    assert result.covered_count == 5
