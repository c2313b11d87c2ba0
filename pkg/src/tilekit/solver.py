"""Exact maximum-tiling search with an independent exhaustive oracle.

A tiling is a set of vertex-disjoint pattern copies in a host; the solver
maximizes the number of covered host vertices, allowing several patterns at
once (mixed tilings).  Copies are identified with their image vertex sets:
automorphism-distinct embeddings of the same set are redundant branches.

Two implementations deliberately share nothing beyond the Graph type:

* :func:`max_tiling` -- branch and bound on the lowest uncovered vertex;
  either a copy through that vertex is chosen or the vertex is permanently
  skipped.  Upper bound: covered + the best coin sum of pattern sizes that
  fits in the remaining free-vertex count.
* :func:`max_tiling_oracle` -- memoized recursion over free-vertex bitmasks
  with naive permutation-based copy detection, for hosts up to 16 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence, Union

from .graphs import Embedding, Graph, PartitionedGraph, Tiling, iter_bits

__all__ = [
    "DEFAULT_BUDGET",
    "ORACLE_MAX_VERTICES",
    "CopyCatalog",
    "TilingResult",
    "coverage_deficit",
    "enumerate_copies",
    "max_tiling",
    "max_tiling_oracle",
]

DEFAULT_BUDGET = 10_000_000
ORACLE_MAX_VERTICES = 16

PatternLike = Union[Graph, PartitionedGraph]


def _pattern_parts(p: PatternLike):
    """Split a pattern into (graph, classes-or-None).

    Partitioned patterns keep their class structure so tilings of bottle
    graphs can report which host vertices landed in width classes.
    """
    if isinstance(p, PartitionedGraph):
        return p.graph, p.classes
    return p, None


# ---------------------------------------------------------------------------
# copy enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CopyCatalog:
    """All (or the first `cap`) copies of one pattern in a host.

    Copies are deduplicated by image vertex set and listed in lexicographic
    order of the sorted image set; each carries one witness embedding.  When
    a cap cut the enumeration short, ``truncated`` is set and downstream
    optimality claims must be downgraded.
    """

    host: Graph
    pattern: Graph
    pattern_classes: Optional[tuple[tuple[int, ...], ...]]
    copies: tuple[Embedding, ...]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.copies)

    def image_sets(self) -> list[frozenset[int]]:
        return [emb.image_set for emb in self.copies]


def _embed_into(host: Graph, pattern: Graph, subset: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Witness map pattern -> subset (a bijection preserving pattern edges).

    Deterministic: pattern vertices are placed most-constrained-first and host
    candidates are tried in ascending order, so the first witness found is a
    function of the inputs alone.
    """
    h = pattern.n
    smask = 0
    for v in subset:
        smask |= 1 << v
    # necessary condition: sorted induced degrees dominate pattern degrees
    induced = sorted((host.rows[v] & smask).bit_count() for v in subset)
    wanted = sorted(pattern.degrees())
    if any(a < b for a, b in zip(induced, wanted)):
        return None
    order = sorted(range(h), key=lambda v: (-pattern.degree(v), v))
    image = [-1] * h
    used = 0

    def rec(i: int) -> bool:
        nonlocal used
        if i == h:
            return True
        u = order[i]
        cand = smask & ~used
        for w in iter_bits(pattern.rows[u]):
            if image[w] >= 0:
                cand &= host.rows[image[w]]
        for x in iter_bits(cand):
            image[u] = x
            used |= 1 << x
            if rec(i + 1):
                return True
            used &= ~(1 << x)
            image[u] = -1
        return False

    return tuple(image) if rec(0) else None


def enumerate_copies(
    host: Graph,
    pattern: PatternLike,
    cap: Optional[int] = None,
    *,
    within: Optional[Iterable[int]] = None,
    touching: Optional[Iterable[int]] = None,
) -> CopyCatalog:
    """Every distinct-vertex-set copy of `pattern` inside `host`.

    within: restrict images to this vertex pool.
    touching: keep only copies meeting this set (used to ask "does any copy
        pass through V?" cheaply with cap=1).
    """
    pg, pcls = _pattern_parts(pattern)
    if pg.n == 0:
        raise ValueError("empty pattern")
    if pg.n > host.n:
        raise ValueError(f"pattern has {pg.n} vertices, host only {host.n}")
    pool = sorted(set(within)) if within is not None else list(range(host.n))
    touch = frozenset(touching) if touching is not None else None
    copies = []
    truncated = False
    for subset in combinations(pool, pg.n):
        if touch is not None and touch.isdisjoint(subset):
            continue
        image = _embed_into(host, pg, subset)
        if image is None:
            continue
        if cap is not None and len(copies) >= cap:
            truncated = True
            break
        copies.append(Embedding(pg, image, pcls))
    return CopyCatalog(
        host=host,
        pattern=pg,
        pattern_classes=pcls,
        copies=tuple(copies),
        truncated=truncated,
    )


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TilingResult:
    """Outcome of a maximum-tiling search.

    optimality is "proven-optimal" only when the search tree was exhausted
    with no truncation anywhere; otherwise "best-found" with the reason.
    """

    tiling: Tiling
    covered_count: int
    optimality: str
    reason: Optional[str] = None
    nodes: int = 0

    def __post_init__(self) -> None:
        if self.optimality not in ("proven-optimal", "best-found"):
            raise ValueError(f"unknown optimality {self.optimality!r}")
        if self.covered_count != len(self.tiling.covered):
            raise ValueError("covered_count disagrees with the tiling")

    @property
    def proven_optimal(self) -> bool:
        return self.optimality == "proven-optimal"


def coverage_deficit(result: TilingResult, host_n: int) -> int:
    """Number of host vertices the tiling leaves uncovered."""
    return host_n - result.covered_count


def max_tiling(
    host: Graph,
    patterns: Sequence[PatternLike],
    budget: int = DEFAULT_BUDGET,
    copy_cap: Optional[int] = None,
) -> TilingResult:
    """Maximum mixed tiling by branch and bound.

    Branch vertex = lowest uncovered vertex; its options are the copies
    through it (larger patterns first, then lexicographic image), followed by
    permanently skipping it.  The first tiling attaining the optimum in this
    deterministic order is returned.
    """
    if not patterns:
        raise ValueError("need at least one pattern")
    catalogs = []
    seen = set()
    truncated_any = False
    for p in patterns:
        pg, pcls = _pattern_parts(p)
        if pg.n == 0:
            raise ValueError("empty pattern")
        key = (pg, pcls)
        if key in seen or pg.n > host.n:
            continue
        seen.add(key)
        cat = enumerate_copies(host, p, cap=copy_cap)
        truncated_any = truncated_any or cat.truncated
        catalogs.append(cat)

    by_set: dict[frozenset, Embedding] = {}
    for cat in catalogs:
        for emb in cat.copies:
            by_set.setdefault(emb.image_set, emb)
    options = sorted(
        by_set.values(), key=lambda e: (-e.pattern.n, tuple(sorted(e.image)))
    )
    per_vertex: list[list] = [[] for _ in range(host.n)]
    for emb in options:
        mask = 0
        for w in emb.image:
            mask |= 1 << w
        for w in emb.image:
            per_vertex[w].append((mask, emb.pattern.n, emb))

    # best coverable total from m free vertices, ignoring adjacency
    sizes = sorted({emb.pattern.n for emb in options})
    fit = [0] * (host.n + 1)
    for m in range(1, host.n + 1):
        best = fit[m - 1]
        for s in sizes:
            if s <= m:
                best = max(best, fit[m - s] + s)
        fit[m] = best

    best_count = 0
    best_embs: tuple[Embedding, ...] = ()
    chosen: list[Embedding] = []
    nodes = 0
    budget_hit = False

    def rec(free: int, covered: int) -> None:
        nonlocal best_count, best_embs, nodes, budget_hit
        if budget_hit:
            return
        nodes += 1
        if nodes > budget:
            budget_hit = True
            return
        if covered > best_count:
            best_count = covered
            best_embs = tuple(chosen)
        if not free or covered + fit[free.bit_count()] <= best_count:
            return
        v = (free & -free).bit_length() - 1
        for mask, size, emb in per_vertex[v]:
            if mask & free == mask:
                chosen.append(emb)
                rec(free & ~mask, covered + size)
                chosen.pop()
                if budget_hit:
                    return
        rec(free & ~(1 << v), covered)

    rec((1 << host.n) - 1, 0)

    reasons = []
    if budget_hit:
        reasons.append("node-budget-hit")
    if truncated_any:
        reasons.append("copy-cap-hit")
    return TilingResult(
        tiling=Tiling(best_embs),
        covered_count=best_count,
        optimality="best-found" if reasons else "proven-optimal",
        reason=", ".join(reasons) or None,
        nodes=nodes,
    )


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------

def max_tiling_oracle(
    host: Graph,
    patterns: Sequence[PatternLike],
    *,
    maximize_overlap: Optional[Iterable[int]] = None,
) -> TilingResult:
    """Exhaustive maximum tiling on hosts with at most 16 vertices.

    Copies are found by trying raw vertex permutations per subset (no shared
    code with the main search); the optimum is a memoized recursion over
    free-vertex bitmasks.  With ``maximize_overlap`` the objective becomes
    lexicographic (covered vertices, then overlap with the given set), which
    answers "how much of this set can an optimal tiling cover?" exactly.
    """
    if host.n > ORACLE_MAX_VERTICES:
        raise ValueError(
            f"oracle refuses hosts above {ORACLE_MAX_VERTICES} vertices, got {host.n}"
        )
    if not patterns:
        raise ValueError("need at least one pattern")

    copy_map: dict[int, Embedding] = {}
    seen_pattern_graphs = set()
    for p in patterns:
        pg, pcls = _pattern_parts(p)
        if pg.n == 0:
            raise ValueError("empty pattern")
        if pg in seen_pattern_graphs or pg.n > host.n:
            continue
        seen_pattern_graphs.add(pg)
        pedges = list(pg.edges())
        for subset in combinations(range(host.n), pg.n):
            mask = 0
            for v in subset:
                mask |= 1 << v
            if mask in copy_map:
                continue
            for perm in permutations(subset):
                if all(host.has_edge(perm[a], perm[b]) for a, b in pedges):
                    copy_map[mask] = Embedding(pg, perm, pcls)
                    break

    per_vertex: list[list] = [[] for _ in range(host.n)]
    for mask in sorted(copy_map):
        emb = copy_map[mask]
        for w in emb.image:
            per_vertex[w].append((mask, emb))

    overlap_mask = 0
    if maximize_overlap is not None:
        for v in maximize_overlap:
            overlap_mask |= 1 << v

    memo: dict[int, tuple[int, int]] = {}
    pick: dict[int, tuple[str, int]] = {}

    def value(free: int) -> tuple[int, int]:
        if not free:
            return (0, 0)
        got = memo.get(free)
        if got is not None:
            return got
        v = (free & -free).bit_length() - 1
        best = value(free & ~(1 << v))
        best_pick = ("skip", v)
        for mask, emb in per_vertex[v]:
            if mask & free == mask:
                sub = value(free & ~mask)
                cand = (
                    sub[0] + emb.pattern.n,
                    sub[1] + (mask & overlap_mask).bit_count(),
                )
                if cand > best:
                    best = cand
                    best_pick = ("copy", mask)
        memo[free] = best
        pick[free] = best_pick
        return best

    full = (1 << host.n) - 1
    covered, _overlap = value(full)

    embs = []
    cursor = full
    while cursor:
        kind, payload = pick[cursor]
        if kind == "skip":
            cursor &= ~(1 << payload)
        else:
            embs.append(copy_map[payload])
            cursor &= ~payload
    return TilingResult(
        tiling=Tiling(tuple(embs)),
        covered_count=covered,
        optimality="proven-optimal",
        nodes=len(memo),
    )
