"""Combinatorial gadgets for growing and rotating bottle-graph tilings.

Expanding sets push a tiling past its current size; swapping sets rotate
which vertices stay uncovered so a later expansion can succeed.  Both
finders are exact: eligibility is decided per (vertex, copy) pair straight
from the definition, and realizability of a full set reduces to maximum
bipartite matching, so `none` really means no such set exists.

The remaining gadgets are the greedy clique extraction, the exhaustive
epsilon-regularity check on small sides, and the symbolic verifier that a
degree-sequence bound survives blowing up every vertex s times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

from .graphs import (
    Embedding,
    Graph,
    PartitionedGraph,
    Tiling,
    ValidationReport,
    VertexOrdering,
    iter_bits,
)
from .solver import enumerate_copies
from .thresholds import BoundLine, DegreeCheck, check_degree_sequence

__all__ = [
    "BlowupReport",
    "ExpandingSet",
    "GreedyFailure",
    "GreedyKrParams",
    "RegularityResult",
    "RegularityWitness",
    "SlackParams",
    "SmallBigReport",
    "StepOutcome",
    "SwappingSet",
    "check_expanding_set",
    "check_swapping_set",
    "epsilon_regular_check",
    "expand_or_swap_step",
    "find_expanding_set",
    "find_swapping_set",
    "greedy_kr",
    "small_big_split",
    "verify_blowup_inheritance",
]

Rational = Union[int, Fraction]

REGULARITY_MAX_SIDE = 10


# ---------------------------------------------------------------------------
# parameter bundles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlackParams:
    """Slack hierarchy for the expand-or-swap step.

    gamma controls the requested set size (gamma * n) and eta the degree
    slack; the hierarchy gamma << 1/m << eta is enforced at construction as
    gamma <= eta / (10 m).
    """

    eta: Fraction
    gamma: Fraction
    m: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", Fraction(self.eta))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.gamma > self.eta / (10 * self.m):
            raise ValueError(
                f"need gamma <= eta/(10 m) = {self.eta / (10 * self.m)}, "
                f"got gamma = {self.gamma}"
            )


@dataclass(frozen=True)
class GreedyKrParams:
    """Bottle-shape parameters driving the greedy clique extraction."""

    r: int
    sigma: int
    omega: int
    eta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", Fraction(self.eta))
        if self.r < 2:
            raise ValueError("need r >= 2")
        if not 1 <= self.sigma <= self.omega:
            raise ValueError("need 1 <= sigma <= omega")
        if self.eta <= 0:
            raise ValueError("eta must be positive")

    @property
    def b(self) -> int:
        return self.sigma + (self.r - 1) * self.omega


# ---------------------------------------------------------------------------
# expanding sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpandingSet:
    """Vertices outside a tiling, injectively assigned to copies.

    assignment[i] is the copy receiving vertices[i]; the defining property
    is a neighbour in every width class of that copy.
    """

    vertices: tuple[int, ...]
    assignment: tuple[Embedding, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.assignment):
            raise ValueError("vertices and assignment must align")

    def __len__(self) -> int:
        return len(self.vertices)


def _class_images(emb: Embedding) -> list[tuple[int, ...]]:
    # class 0 is the neck; the rest are width classes
    if emb.pattern_classes is None:
        raise ValueError("tiling copy lacks class structure")
    return [tuple(emb.image[p] for p in cls) for cls in emb.pattern_classes]


def _max_bipartite_matching(
    adj: Sequence[Sequence[int]], n_right: int
) -> list[Optional[int]]:
    """Kuhn augmenting paths; adj[i] lists right-neighbours of left i.

    Left vertices are processed in index order and right candidates in the
    order given, so the matching is deterministic.
    """
    match_left: list[Optional[int]] = [None] * len(adj)
    match_right: list[Optional[int]] = [None] * n_right

    def augment(i: int, seen: set[int]) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            owner = match_right[j]
            if owner is None or augment(owner, seen):
                match_left[i] = j
                match_right[j] = i
                return True
        return False

    for i in range(len(adj)):
        augment(i, set())
    return match_left


def find_expanding_set(G: Graph, T: Tiling, size: int) -> Optional[ExpandingSet]:
    """Expanding set of exactly `size` vertices for T in G, or None.

    A vertex is eligible for a copy iff it has a neighbour in every width
    class of that copy; a maximum matching between outside vertices and
    copies then decides existence exactly.  None means the matching number
    is below `size`, so no expanding set of that size exists at all.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    copies = T.embeddings
    widths = [_class_images(emb)[1:] for emb in copies]
    outside = [v for v in range(G.n) if v not in T.covered]
    adj = []
    for z in outside:
        row = G.rows[z]
        adj.append(
            [
                ci
                for ci, wcs in enumerate(widths)
                if all(any(row >> w & 1 for w in wc) for wc in wcs)
            ]
        )
    match_left = _max_bipartite_matching(adj, len(copies))
    matched = [(z, j) for z, j in zip(outside, match_left) if j is not None]
    if len(matched) < size:
        return None
    chosen = matched[:size]
    return ExpandingSet(
        vertices=tuple(z for z, _ in chosen),
        assignment=tuple(copies[j] for _, j in chosen),
    )


def check_expanding_set(G: Graph, T: Tiling, es: ExpandingSet) -> ValidationReport:
    """Re-check the defining properties of an expanding set."""
    if len(set(es.vertices)) != len(es.vertices):
        return ValidationReport(False, "repeated vertex")
    covered = T.covered
    pool = list(T.embeddings)
    for z, emb in zip(es.vertices, es.assignment):
        if z in covered:
            return ValidationReport(False, f"vertex {z} lies inside the tiling")
        if emb not in pool:
            return ValidationReport(False, "assigned copy not in tiling (or reused)")
        pool.remove(emb)  # injectivity: each copy spent once
        for wc in _class_images(emb)[1:]:
            if not any(G.has_edge(z, w) for w in wc):
                return ValidationReport(
                    False, f"vertex {z} misses width class {wc} of its copy"
                )
    return ValidationReport(True, None)


# ---------------------------------------------------------------------------
# swapping sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SwappingSet:
    """Pairs (z, y) forming k-swapping pairs into pairwise-distinct copies.

    z is uncovered; y sits in a width class of its copy; z sees at least
    sigma neck vertices and at least omega vertices of every other width
    class of that copy; and y follows z in the ordering by at least
    `offset` positions.  Class sizes are sigma*m and omega*m, so the
    adjacency thresholds are the class sizes divided by m.
    """

    ordering: VertexOrdering
    offset: int
    pairs: tuple[tuple[int, int], ...]
    m: int = 1

    def __len__(self) -> int:
        return len(self.pairs)


def _bottle_thresholds(class_images: Sequence[tuple[int, ...]], m: int) -> tuple[int, int]:
    # neck sigma*m, widths omega*m -> thresholds (sigma, omega)
    neck = len(class_images[0])
    width = len(class_images[1]) if len(class_images) > 1 else neck
    if neck % m or width % m:
        raise ValueError(f"class sizes ({neck}, {width}) not divisible by m = {m}")
    return neck // m, width // m


def _swap_witness(
    G: Graph,
    z: int,
    class_images: Sequence[tuple[int, ...]],
    ordering: VertexOrdering,
    k: int,
    m: int,
) -> Optional[int]:
    """Smallest-label y in this copy making (z, y) a k-swapping pair."""
    sigma, omega = _bottle_thresholds(class_images, m)
    row = G.rows[z]
    if sum(row >> w & 1 for w in class_images[0]) < sigma:
        return None
    counts = [sum(row >> w & 1 for w in wc) for wc in class_images[1:]]
    shy = [j for j, c in enumerate(counts) if c < omega]
    if len(shy) > 1:
        return None
    # y may live in any width class whose removal fixes every shortfall
    host_classes = shy if shy else range(len(counts))
    cut = ordering.position(z) + k
    best = None
    for j in host_classes:
        for y in class_images[1 + j]:
            if ordering.position(y) >= cut and (best is None or y < best):
                best = y
    return best


def find_swapping_set(
    G: Graph,
    T: Tiling,
    ordering: VertexOrdering,
    k: int,
    size: int,
    *,
    m: int = 1,
) -> Optional[SwappingSet]:
    """k-swapping set of exactly `size` vertices for T in G, or None.

    Exact via bipartite matching between uncovered vertices and copies; a
    pair (z, copy) is admissible iff some y in the copy's width classes
    completes a k-swapping pair, and the matched copy's recorded witness is
    the smallest-label such y.  Copy distinctness is the matching itself.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    copies = T.embeddings
    images = [_class_images(emb) for emb in copies]
    outside = [v for v in range(G.n) if v not in T.covered]
    witness: dict[tuple[int, int], int] = {}
    adj = []
    for z in outside:
        row = []
        for ci, cimg in enumerate(images):
            y = _swap_witness(G, z, cimg, ordering, k, m)
            if y is not None:
                witness[z, ci] = y
                row.append(ci)
        adj.append(row)
    match_left = _max_bipartite_matching(adj, len(copies))
    matched = [(z, j) for z, j in zip(outside, match_left) if j is not None]
    if len(matched) < size:
        return None
    pairs = tuple((z, witness[z, j]) for z, j in matched[:size])
    return SwappingSet(ordering=ordering, offset=k, pairs=pairs, m=m)


def check_swapping_set(G: Graph, T: Tiling, ss: SwappingSet) -> ValidationReport:
    """Re-check every condition of a swapping set against its tiling."""
    zs = [z for z, _ in ss.pairs]
    if len(set(zs)) != len(zs):
        return ValidationReport(False, "repeated uncovered vertex")
    covered = T.covered
    omega_vertices = T.omega_class_vertices
    seen_copies = []
    for z, y in ss.pairs:
        if z in covered:
            return ValidationReport(False, f"vertex {z} lies inside the tiling")
        if y not in omega_vertices:
            return ValidationReport(False, f"witness {y} is not a width-class vertex")
        copy = next(emb for emb in T.embeddings if y in emb.image_set)
        if any(copy is c for c in seen_copies):
            return ValidationReport(False, "two pairs share a copy")
        seen_copies.append(copy)
        cimg = _class_images(copy)
        sigma, omega = _bottle_thresholds(cimg, ss.m)
        if sum(G.has_edge(z, w) for w in cimg[0]) < sigma:
            return ValidationReport(False, f"vertex {z} sees too little of the neck")
        for wc in cimg[1:]:
            if y in wc:
                continue
            if sum(G.has_edge(z, w) for w in wc) < omega:
                return ValidationReport(
                    False, f"vertex {z} sees too little of width class {wc}"
                )
        if ss.ordering.position(y) < ss.ordering.position(z) + ss.offset:
            return ValidationReport(False, f"pair ({z}, {y}) violates the index gap")
    return ValidationReport(True, None)


# ---------------------------------------------------------------------------
# the expand-or-swap step
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmallBigReport:
    """Uncovered vertices split at the degree threshold, ordering order."""

    small: tuple[int, ...]
    big: tuple[int, ...]
    threshold: Fraction


@dataclass(frozen=True)
class StepOutcome:
    kind: str  # expanding | swapping | new-copy | exhausted
    expanding: Optional[ExpandingSet] = None
    swapping: Optional[SwappingSet] = None
    new_copy: Optional[Embedding] = None
    report: Optional[SmallBigReport] = None


def _pattern_profile(pattern: PartitionedGraph, m: int) -> tuple[int, int, int]:
    """(r, sigma, omega) in base units for a bottle pattern blown up by m."""
    sizes = pattern.class_sizes()
    widths = set(sizes[1:])
    if len(widths) != 1:
        raise ValueError(f"width classes must share one size, got {sizes}")
    neck, width = sizes[0], sizes[1]
    if neck > width:
        raise ValueError(f"neck {neck} exceeds width {width}")
    if neck % m or width % m:
        raise ValueError(f"class sizes ({neck}, {width}) not divisible by m = {m}")
    return len(sizes), neck // m, width // m


def small_big_split(
    G: Graph,
    T: Tiling,
    pattern: PartitionedGraph,
    params: SlackParams,
    ordering: VertexOrdering,
) -> SmallBigReport:
    """Split uncovered vertices at ((b - omega)/b) n + (eta - 2 gamma) n.

    Exact rational comparison; both halves come back in ordering order.
    """
    r, sigma, omega = _pattern_profile(pattern, params.m)
    b = sigma + (r - 1) * omega
    n = G.n
    threshold = Fraction(b - omega, b) * n + (params.eta - 2 * params.gamma) * n
    uncovered = sorted(
        (v for v in range(n) if v not in T.covered), key=ordering.position
    )
    small = tuple(v for v in uncovered if G.degree(v) <= threshold)
    big = tuple(v for v in uncovered if G.degree(v) > threshold)
    return SmallBigReport(small=small, big=big, threshold=threshold)


def expand_or_swap_step(
    G: Graph,
    T: Tiling,
    pattern: PartitionedGraph,
    params: SlackParams,
    ordering: VertexOrdering,
) -> StepOutcome:
    """One step of the expand-or-swap dichotomy, with two desk-scale exits.

    Tries, in order: an expanding set of size ceil(gamma n); a swapping set
    of the same size with offset ceil(omega gamma n / sigma); a fresh
    pattern copy among the uncovered vertices; otherwise reports the
    small/big split of the uncovered vertices.  T need not be maximum; the
    new-copy exit is what lets a driver loop this step toward maximality.
    """
    n = G.n
    ell = math.ceil(params.gamma * n)
    es = find_expanding_set(G, T, ell)
    if es is not None:
        return StepOutcome(kind="expanding", expanding=es)
    _, sigma, omega = _pattern_profile(pattern, params.m)
    offset = math.ceil(Fraction(omega, sigma) * params.gamma * n)
    ss = find_swapping_set(G, T, ordering, offset, ell, m=params.m)
    if ss is not None:
        return StepOutcome(kind="swapping", swapping=ss)
    uncovered = [v for v in range(n) if v not in T.covered]
    if len(uncovered) >= pattern.graph.n:
        catalog = enumerate_copies(G, pattern, cap=1, within=uncovered)
        if catalog.copies:
            return StepOutcome(kind="new-copy", new_copy=catalog.copies[0])
    return StepOutcome(
        kind="exhausted", report=small_big_split(G, T, pattern, params, ordering)
    )


# ---------------------------------------------------------------------------
# greedy clique extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GreedyFailure:
    step: int
    neighborhood_size: int


def greedy_kr(R: Graph, params: GreedyKrParams) -> Union[Embedding, GreedyFailure]:
    """Greedy K_r in R: high-degree picks inside a shrinking neighborhood.

    Steps 1..r-1 pick a vertex of the running common neighborhood with
    degree at least k - (omega/b) k + eta k / 3 (k = |R|), preferring
    higher degree and breaking ties toward smaller labels; step r takes any
    remaining common neighbour.  Failure reports the first step whose
    qualifying set is empty, with the neighborhood size at that moment.
    """
    k = R.n
    floor_val = k - Fraction(params.omega, params.b) * k + params.eta * k / 3
    common = set(range(k))
    picks = []
    for step in range(1, params.r + 1):
        if step < params.r:
            cands = [v for v in common if R.degree(v) >= floor_val]
        else:
            cands = list(common)
        if not cands:
            return GreedyFailure(step=step, neighborhood_size=len(common))
        x = max(cands, key=lambda v: (R.degree(v), -v))
        picks.append(x)
        common &= set(iter_bits(R.rows[x]))
    kr = Graph(params.r, list(combinations(range(params.r), 2)))
    return Embedding(kr, tuple(picks))


# ---------------------------------------------------------------------------
# brute-force regularity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityWitness:
    X: tuple[int, ...]
    Y: tuple[int, ...]
    gap: Fraction


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    epsilon: Fraction
    density: Fraction
    witness: Optional[RegularityWitness] = None

    def __bool__(self) -> bool:
        return self.regular


def epsilon_regular_check(
    a_side: Sequence[int], b_side: Sequence[int], G: Graph, epsilon: Rational
) -> RegularityResult:
    """Exhaustive epsilon-regularity check of the pair (A, B) in G.

    Walks every subset pair (X, Y) with |X| > eps |A| and |Y| > eps |B| and
    compares densities exactly; the first violating pair in mask order
    (subsets of A outermost, both sides enumerated as ascending bitmasks
    over the sorted side) is returned as the witness.
    """
    A, B = sorted(a_side), sorted(b_side)
    if len(A) > REGULARITY_MAX_SIDE or len(B) > REGULARITY_MAX_SIDE:
        raise ValueError(f"sides must have at most {REGULARITY_MAX_SIDE} vertices")
    if set(A) & set(B):
        raise ValueError("sides must be disjoint")
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if not A or not B:
        return RegularityResult(regular=True, epsilon=eps, density=Fraction(0))

    nbr = [sum(1 << j for j, w in enumerate(B) if G.has_edge(v, w)) for v in A]
    e_ab = sum(mask.bit_count() for mask in nbr)
    density = Fraction(e_ab, len(A) * len(B))

    # integer form of |e/(sx sy) - P/Q| >= E/F with all denominators cleared
    P, Q = density.numerator, density.denominator
    E, F = eps.numerator, eps.denominator
    nb = len(B)
    for xmask in range(1, 1 << len(A)):
        sx = xmask.bit_count()
        if sx * F <= E * len(A):
            continue
        # e(X, Y) for all Y at once: DP over Y-masks by lowest bit
        per_y = [0] * nb
        for i in iter_bits(xmask):
            m = nbr[i]
            for j in iter_bits(m):
                per_y[j] += 1
        esum = [0] * (1 << nb)
        for ymask in range(1, 1 << nb):
            low = ymask & -ymask
            esum[ymask] = esum[ymask ^ low] + per_y[low.bit_length() - 1]
            sy = ymask.bit_count()
            if sy * F <= E * nb:
                continue
            if abs(esum[ymask] * Q * F - P * sx * sy * F) >= E * sx * sy * Q:
                X = tuple(A[i] for i in iter_bits(xmask))
                Y = tuple(B[j] for j in iter_bits(ymask))
                gap = abs(Fraction(esum[ymask], sx * sy) - density)
                return RegularityResult(
                    regular=False,
                    epsilon=eps,
                    density=density,
                    witness=RegularityWitness(X=X, Y=Y, gap=gap),
                )
    return RegularityResult(regular=True, epsilon=eps, density=density)


# ---------------------------------------------------------------------------
# blow-up degree inheritance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlowupReport:
    """Outcome of the symbolic blow-up degree-inheritance check.

    When input_check fails, the conclusion is skipped and ok is False.  On a
    conclusion failure, failed_index / blown_degree / required describe the
    first bad index of the blown sequence (1-based).
    """

    ok: bool
    input_check: DegreeCheck
    scale: int
    failed_index: Optional[int] = None
    blown_degree: Optional[int] = None
    required: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_blowup_inheritance(G: Graph, s: int, line: BoundLine) -> BlowupReport:
    """Check that blowing up G by s inherits the shifted degree bound.

    Uses the identity that the j-th smallest blown degree equals s times
    the ceil(j/s)-th smallest original degree, so no blown graph is ever
    materialized.  Asserts, for every i up to floor(cutoff n s):

        blown_degree(i) >= intercept*n*s + slope*i + (slack*n - slope)*s
    """
    if s < 1:
        raise ValueError("scale must be >= 1")
    base = check_degree_sequence(G, line)
    if not base:
        return BlowupReport(ok=False, input_check=base, scale=s)
    degs = sorted(G.degrees())
    n = G.n
    last = math.floor(line.cutoff * n * s)
    for i in range(1, last + 1):
        j = -(-i // s)
        blown = s * degs[j - 1]
        required = (
            line.intercept * n * s + line.slope * i + (line.slack * n - line.slope) * s
        )
        if blown < required:
            return BlowupReport(
                ok=False,
                input_check=base,
                scale=s,
                failed_index=i,
                blown_degree=blown,
                required=required,
            )
    return BlowupReport(ok=True, input_check=base, scale=s)
