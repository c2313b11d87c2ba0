"""Extremal host families and constructive tilings.

The three host families each defeat one aspect of the degree-sequence bounds
while satisfying the rest:

* :func:`extremal_one` flattens a small window of the sloped bound with a
  staircase between the neck class and one width class;
* :func:`extremal_two` lowers a few degrees to the exact start value by
  deleting the edges between a small slice of the neck and one width class;
* :func:`extremal_three` is the unbalanced complete multipartite host whose
  smallest class bottlenecks every proportional tiling.

The constructive half builds perfect (or exactly proportional) tilings by
explicit placement: blow-up slicing, rotated clique collections, the
relaxed-neck bottle graph that a pattern tiles perfectly, and the bottle
graph that a pattern tiles in exact proportion x.

Every constructor validates its divisibility preconditions eagerly and names
the violated constraint; rounding only happens where a ceiling or floor is
part of the defining formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .graphs import (
    Embedding,
    Graph,
    PartitionedGraph,
    Tiling,
    bottle_graph,
    complete_multipartite,
    iter_bits,
    multipartite_classes,
)
from .thresholds import TilingParams, chromatic_data, chromatic_number, sigma_coloring

__all__ = [
    "ExtremalOneInstance",
    "ExtremalOneSpec",
    "ExtremalTwoInstance",
    "H1Result",
    "HStarResult",
    "HStarSpec",
    "Lemma62Result",
    "LEMMA62_TARGETS",
    "apex_augment",
    "build_h1",
    "build_hstar",
    "extremal_one",
    "extremal_three",
    "extremal_two",
    "lemma62_perfect_tiling",
    "neighborhood_partite_witness",
]

Rational = Union[int, Fraction]


def _exact_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ValueError(f"{what} = {value} is not an integer")
    return int(value)


# ---------------------------------------------------------------------------
# extremal family 1: the flattened staircase window
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremalOneSpec:
    """Parameters for the staircase host.

    The host has one class of size sigma*n/b and r-1 classes of size
    omega*n/b, where b = sigma + (r-1)*omega must divide n.  The window of
    flattened degrees starts at index k; its width 2*eta*n must be integral.
    """

    r: int
    sigma: int
    omega: int
    n: int
    eta: Fraction
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", Fraction(self.eta))

    @property
    def b(self) -> int:
        return self.sigma + (self.r - 1) * self.omega


@dataclass(frozen=True)
class ExtremalOneInstance:
    host: PartitionedGraph
    A: tuple[int, ...]
    C: tuple[int, ...]
    spec: ExtremalOneSpec


def extremal_one(spec: ExtremalOneSpec) -> ExtremalOneInstance:
    """Host whose sorted degrees flatten on the window [k, k + 2*eta*n].

    Classes V_1 (size sigma*n/b), V_2 ... V_r (size omega*n/b each); V_1 is
    adjacent to everything outside V_2 (in particular V_1 is a clique); the
    classes V_2 ... V_r are completely joined to each other; between V_2 and
    V_1 runs the staircase c_i a_j for j <= ceil(sigma*i/omega), minus the
    deletion rectangle k+1 <= i <= k+2*eta*n,
    ceil(sigma*k/omega) < j <= ceil(sigma*(k+2*eta*n)/omega).

    Returns the host together with A (the V_1 vertices the staircase still
    joins to every window row) and C (the first k + 2*eta*n staircase rows).
    C is independent and has no edges to V_1 minus A, so every pattern copy
    meeting C must spend neck vertices inside A.
    """
    r, sigma, omega, n, k = spec.r, spec.sigma, spec.omega, spec.n, spec.k
    if r < 2:
        raise ValueError("need r >= 2")
    if not 1 <= sigma <= omega:
        raise ValueError("need 1 <= sigma <= omega")
    b = spec.b
    if n % b:
        raise ValueError(f"b = {b} must divide n = {n}")
    window = spec.eta * n * 2
    if window.denominator != 1:
        raise ValueError(f"2*eta*n = {window} is not an integer")
    window = int(window)
    neck_size = sigma * n // b
    width_size = omega * n // b
    if not (1 <= k and k + window < width_size):
        raise ValueError(
            f"k must satisfy 1 <= k and k + 2*eta*n < omega*n/b = {width_size}"
        )

    # vertex layout: V_1 = [0, neck_size), V_2 the next width_size, and so on
    classes = [tuple(range(neck_size))]
    start = neck_size
    for _ in range(r - 1):
        classes.append(tuple(range(start, start + width_size)))
        start += width_size

    edges = []
    v2_lo, v2_hi = neck_size, neck_size + width_size
    for u in range(neck_size):
        for v in range(u + 1, n):
            if v2_lo <= v < v2_hi:
                continue
            edges.append((u, v))
    for ci in range(1, r):
        for cj in range(ci + 1, r):
            edges.extend((u, v) for u in classes[ci] for v in classes[cj])

    a_keep = math.ceil(Fraction(sigma * k, omega))
    for i in range(1, width_size + 1):
        top = math.ceil(Fraction(sigma * i, omega))
        in_window = k + 1 <= i <= k + window
        for j in range(1, top + 1):
            if in_window and j > a_keep:
                continue
            edges.append((j - 1, neck_size + i - 1))

    host = PartitionedGraph(Graph(n, edges), tuple(classes))
    A = tuple(range(a_keep))
    C = tuple(range(neck_size, neck_size + k + window))
    return ExtremalOneInstance(host=host, A=A, C=C, spec=spec)


# ---------------------------------------------------------------------------
# extremal family 2: pinning the start value
# ---------------------------------------------------------------------------

def neighborhood_partite_witness(pattern: Graph, parts: Optional[int] = None) -> Optional[int]:
    """First vertex whose neighborhood needs more than `parts` colours.

    Returns None when every neighborhood is `parts`-colourable.  Defaults to
    parts = chi(pattern) - 1, the hypothesis under which deleting the edges
    between a neck slice and one width class is supposed to lock that slice
    out of all pattern copies.
    """
    if parts is None:
        parts = chromatic_number(pattern) - 1
    for x in range(pattern.n):
        sub, _ = pattern.induced(iter_bits(pattern.rows[x]))
        if chromatic_number(sub) > parts:
            return x
    return None


@dataclass(frozen=True)
class ExtremalTwoInstance:
    host: PartitionedGraph
    v_prime: tuple[int, ...]


def extremal_two(pattern: Graph, n: int, eta: Rational) -> ExtremalTwoInstance:
    """Complete r-partite host with a degree dip of exact depth.

    Classes sigma*n/h + floor(eta*n) + 1, omega*n/h - floor(eta*n) - 1, and
    r-2 classes of omega*n/h; the edges between V' (the first
    floor(eta*n) + 1 vertices of class one) and class two are deleted.  The
    floor(eta*n) + 1 vertices of V' then have degree exactly
    (1 - (omega+sigma)/h) n and every other vertex has degree at least
    (1 - omega/h) n.
    """
    params = chromatic_data(pattern)
    bad = neighborhood_partite_witness(pattern, params.r - 1)
    if bad is not None:
        raise ValueError(
            f"neighborhood of vertex {bad} needs more than {params.r - 1} colours"
        )
    if not params.sigma < params.omega:
        raise ValueError("need sigma < omega")
    h = params.h
    if n % h:
        raise ValueError(f"pattern order {h} must divide n = {n}")
    eta = Fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    dip = math.floor(eta * n) + 1
    neck_share = params.sigma * n // h
    width_share = _exact_int(params.omega * n / h, "omega*n/h")
    sizes = [neck_share + dip, width_share - dip] + [width_share] * (params.r - 2)
    if sizes[1] < 1:
        raise ValueError(f"omega*n/h - floor(eta*n) - 1 = {sizes[1]} must be >= 1")

    classes = []
    start = 0
    for s in sizes:
        classes.append(tuple(range(start, start + s)))
        start += s
    v_prime = classes[0][:dip]
    blocked = set(v_prime)
    edges = []
    for i, ci in enumerate(classes):
        for cj in classes[i + 1 :]:
            for u in ci:
                if i == 0 and cj is classes[1] and u in blocked:
                    continue
                edges.extend((u, v) for v in cj)
    host = PartitionedGraph(Graph(n, edges), tuple(classes))
    return ExtremalTwoInstance(host=host, v_prime=v_prime)


# ---------------------------------------------------------------------------
# extremal family 3: the proportional bottleneck
# ---------------------------------------------------------------------------

def extremal_three(pattern: Graph, n: int, x: Rational, eta: Rational) -> PartitionedGraph:
    """Complete r-partite host bottlenecking x-proportional tilings.

    Class sizes x*sigma*n/h - eta*n, (h - x*sigma)n/((r-1)h) + eta*n, and
    r-2 classes of (h - x*sigma)n/((r-1)h); they telescope to n.  Every
    pattern copy needs a vertex of the first class for each neck it embeds,
    so the first class caps the tiling.
    """
    params = chromatic_data(pattern)
    x = Fraction(x)
    eta = Fraction(eta)
    if not 0 < x < 1:
        raise ValueError("x must lie strictly inside (0, 1)")
    h, r, sigma = params.h, params.r, params.sigma
    first = x * sigma * n / h - eta * n
    rest = Fraction((h - x * sigma) * n, (r - 1) * h)
    sizes = [
        _exact_int(first, "x*sigma*n/h - eta*n"),
        _exact_int(rest + eta * n, "(h - x*sigma)n/((r-1)h) + eta*n"),
    ] + [_exact_int(rest, "(h - x*sigma)n/((r-1)h)")] * (r - 2)
    if any(s < 1 for s in sizes):
        raise ValueError(f"class sizes {sizes} must all be positive")
    assert sum(sizes) == n
    return complete_multipartite(sizes)


# ---------------------------------------------------------------------------
# apex augmentation
# ---------------------------------------------------------------------------

def apex_augment(g: Graph, tau_count: int) -> Graph:
    """Add tau_count universal vertices (adjacent to everything, mutually too)."""
    if tau_count < 0:
        raise ValueError("tau_count must be >= 0")
    n = g.n
    edges = list(g.edges())
    for w in range(n, n + tau_count):
        edges.extend((u, w) for u in range(w))
    return Graph(n + tau_count, edges)


# ---------------------------------------------------------------------------
# placement plumbing shared by the constructive tilings
# ---------------------------------------------------------------------------

class _ClassAllocator:
    """Hands out consecutive fresh vertices from each class of a host."""

    def __init__(self, host: PartitionedGraph):
        self.classes = host.classes
        self.cursor = [0] * len(host.classes)

    def take(self, cls: int, count: int) -> list[int]:
        start = self.cursor[cls]
        if start + count > len(self.classes[cls]):
            raise ValueError(
                f"class {cls} exhausted: wanted {count}, have "
                f"{len(self.classes[cls]) - start}"
            )
        self.cursor[cls] = start + count
        return list(self.classes[cls][start : start + count])

    def exhausted(self) -> bool:
        return all(c == len(cls) for c, cls in zip(self.cursor, self.classes))


def _place_partitioned_copy(
    pattern: PartitionedGraph, slots: Sequence[Sequence[int]]
) -> Embedding:
    """Embed a partitioned pattern with class j landing on slots[j]."""
    image = [0] * pattern.graph.n
    for cls, slot in zip(pattern.classes, slots):
        if len(cls) != len(slot):
            raise ValueError("slot size does not match pattern class size")
        for p, w in zip(cls, slot):
            image[p] = w
    return Embedding(pattern.graph, tuple(image), pattern.classes)


def _bottle_shape(B: PartitionedGraph) -> tuple[int, int, int]:
    sizes = B.class_sizes()
    if len(sizes) < 2:
        raise ValueError("bottle graphs need at least two classes")
    widths = set(sizes[1:])
    if len(widths) != 1:
        raise ValueError(f"width classes must share one size, got {sizes}")
    neck, width = sizes[0], sizes[1]
    if neck > width:
        raise ValueError(f"neck {neck} exceeds width {width}")
    return len(sizes), neck, width


# ---------------------------------------------------------------------------
# perfect tilings of the four blow-up targets
# ---------------------------------------------------------------------------

LEMMA62_TARGETS = ("B", "B*", "B'", "Kr")


@dataclass(frozen=True)
class Lemma62Result:
    host: PartitionedGraph
    tiling: Tiling
    copy_counts: dict


def lemma62_perfect_tiling(target: str, B: PartitionedGraph, m: int) -> Lemma62Result:
    """Perfect tiling of a blown-up target by copies of B(m).

    With B a bottle graph (neck sigma < width omega, b vertices) and
    t = (omega - sigma) b, each of the four targets blown up by mt admits a
    perfect tiling by B* = B(m):

    * B(mt) and B*(mt): slice every class into aligned B* copies.
    * K_r(mt): omega - sigma collections of r copies; inside a collection the
      neck rotates through the r host classes, so each class receives one
      neck slice and r-1 width slices, b*m vertices in total.
    * B'(mt) where B' has width omega - 1: first (omega-1-sigma) b copies
      aligned neck-into-neck, leaving exactly sigma*m*b vertices in every
      class; the leftovers form a balanced complete r-partite graph handled
      by sigma collections of the rotating pattern, sigma*r copies.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    r, sigma, omega = _bottle_shape(B)
    if sigma == omega:
        raise ValueError("neck equals width, so t = (omega - sigma) b = 0")
    b = sigma + (r - 1) * omega
    t = (omega - sigma) * b
    bstar = bottle_graph(r, sigma * m, omega * m)
    counts: dict = {}

    if target == "B":
        host = bottle_graph(r, sigma * m * t, omega * m * t)
    elif target == "B*":
        host = bottle_graph(r, sigma * m * m * t, omega * m * m * t)
    elif target == "B'":
        host = bottle_graph(r, sigma * m * t, (omega - 1) * m * t)
    elif target == "Kr":
        host = complete_multipartite([m * t] * r)
    else:
        raise ValueError(f"unknown target {target!r}; pick one of {LEMMA62_TARGETS}")

    alloc = _ClassAllocator(host)
    embeddings = []

    def aligned_copy() -> None:
        slots = [alloc.take(0, sigma * m)]
        slots.extend(alloc.take(j, omega * m) for j in range(1, r))
        embeddings.append(_place_partitioned_copy(bstar, slots))

    def rotated_collection() -> None:
        # one copy per host class carrying the neck there
        for p in range(r):
            slots = [alloc.take(p, sigma * m)]
            slots.extend(alloc.take(q, omega * m) for q in range(r) if q != p)
            embeddings.append(_place_partitioned_copy(bstar, slots))

    if target in ("B", "B*"):
        aligned = len(host.classes[0]) // (sigma * m)
        for _ in range(aligned):
            aligned_copy()
        counts["aligned"] = aligned
    elif target == "Kr":
        for _ in range(omega - sigma):
            rotated_collection()
        counts["rotated"] = (omega - sigma) * r
    else:  # B'
        aligned = (omega - 1 - sigma) * b
        for _ in range(aligned):
            aligned_copy()
        # every class now holds exactly sigma*m*b uncovered vertices
        leftovers = [len(cls) - cur for cls, cur in zip(host.classes, alloc.cursor)]
        if leftovers != [sigma * m * b] * r:
            raise AssertionError(f"unexpected leftovers {leftovers}")
        for _ in range(sigma):
            rotated_collection()
        counts["aligned"] = aligned
        counts["rotated"] = sigma * r

    if not alloc.exhausted():
        raise AssertionError("tiling does not exhaust the host")
    return Lemma62Result(host=host, tiling=Tiling(tuple(embeddings)), copy_counts=counts)


# ---------------------------------------------------------------------------
# colourings used by the transfer constructions
# ---------------------------------------------------------------------------

def _coloring_with_sizes(g: Graph, sizes: Sequence[int]) -> Optional[list[list[int]]]:
    """Proper colouring with exact class sizes, as a list of classes, or None."""
    n = g.n
    if sum(sizes) != n:
        return None
    remaining = list(sizes)
    color = [-1] * n

    def rec(v: int) -> bool:
        if v == n:
            return True
        forbidden = 0
        for u in iter_bits(g.rows[v]):
            if color[u] >= 0:
                forbidden |= 1 << color[u]
        for c in range(len(sizes)):
            if remaining[c] == 0 or forbidden >> c & 1:
                continue
            color[v] = c
            remaining[c] -= 1
            if rec(v + 1):
                return True
            remaining[c] += 1
            color[v] = -1
        return False

    if not rec(0):
        return None
    classes: list[list[int]] = [[] for _ in sizes]
    for v, c in enumerate(color):
        classes[c].append(v)
    return classes


def _sigma_first_classes(pattern: Graph, params: TilingParams) -> list[list[int]]:
    """Colour classes of a sigma-achieving optimal colouring, smallest first."""
    parts = multipartite_classes(pattern)
    if parts is not None:
        return [list(p) for p in parts]  # already sorted smallest-first
    sigma, colors = sigma_coloring(pattern, params.r)
    assert sigma == params.sigma
    classes: list[list[int]] = [[] for _ in range(params.r)]
    for v, c in enumerate(colors):
        classes[c].append(v)
    classes.sort(key=lambda cls: (len(cls), cls[0]))
    return classes


# ---------------------------------------------------------------------------
# the relaxed-neck bottle graph with its perfect pattern tiling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HStarSpec:
    """A pattern plus a relaxed class-size parameter sigma' = a/b.

    sigma(H) <= sigma' <= h/r; the scale factor is
    t = b (r-1) (omega(H) - sigma(H)), making the bottle with neck sigma'*t
    and width omega'*t integral whenever omega(H) is an integer.
    """

    pattern: Graph
    sigma_prime: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma_prime", Fraction(self.sigma_prime))

    def scale(self, params: TilingParams) -> int:
        b = self.sigma_prime.denominator
        return _exact_int(
            b * (params.r - 1) * (params.omega - params.sigma), "t"
        )


@dataclass(frozen=True)
class HStarResult:
    hstar: PartitionedGraph
    tiling: Tiling
    direct_count: int
    companion_count: int


def build_hstar(spec: HStarSpec) -> HStarResult:
    """Bottle graph with neck sigma'*t that the pattern tiles perfectly.

    Phase one places b(r-1)(omega - sigma') direct copies, each with its
    smallest colour class in the neck and one width-sized class per width
    class.  Phase two fills the remainder with b(sigma' - sigma) copies of
    the companion graph (one class of size (r-1)omega joined to r-1 classes
    of size (r-2)omega + sigma), each internally tiled by r-1 pattern copies
    and oriented with its large class in the neck.

    Requires a proper colouring of the pattern with classes
    (sigma, omega, ..., omega); patterns without one (in particular patterns
    with fractional omega) are rejected.
    """
    pattern = spec.pattern
    params = chromatic_data(pattern)
    h, r, sigma = params.h, params.r, params.sigma
    sp = spec.sigma_prime
    if not sigma <= sp <= Fraction(h, r):
        raise ValueError(f"sigma' must lie in [{sigma}, {h}/{r}]")
    if params.omega == sigma:
        raise ValueError("balanced pattern: omega = sigma leaves t = 0")
    if params.omega.denominator != 1:
        raise ValueError(
            f"omega = {params.omega} is fractional, so no colouring has "
            f"classes (sigma, omega, ..., omega)"
        )
    omega = int(params.omega)
    b = sp.denominator
    t = spec.scale(params)
    neck = _exact_int(sp * t, "sigma'*t")
    width = _exact_int((h - sp) * t / (r - 1), "omega'*t")
    hstar = bottle_graph(r, neck, width)

    bottle_classes = _coloring_with_sizes(pattern, [sigma] + [omega] * (r - 1))
    if bottle_classes is None:
        raise ValueError(
            f"pattern has no proper colouring with classes "
            f"({sigma}, {', '.join([str(omega)] * (r - 1))})"
        )

    direct_count = _exact_int(b * (r - 1) * (params.omega - sp), "direct copy count")
    companion_count = _exact_int(b * (sp - sigma), "companion copy count")

    alloc = _ClassAllocator(hstar)
    embeddings = []

    def place_pattern_copy(slots: Sequence[Sequence[int]]) -> None:
        image = [0] * h
        for cls, slot in zip(bottle_classes, slots):
            if len(cls) != len(slot):
                raise AssertionError("slot size mismatch")
            for p, w in zip(cls, slot):
                image[p] = w
        embeddings.append(Embedding(pattern, tuple(image)))

    for _ in range(direct_count):
        slots = [alloc.take(0, sigma)]
        slots.extend(alloc.take(j, omega) for j in range(1, r))
        place_pattern_copy(slots)

    big_size = (r - 1) * omega
    small_size = (r - 2) * omega + sigma
    for _ in range(companion_count):
        big = alloc.take(0, big_size)
        smalls = {j: alloc.take(j, small_size) for j in range(1, r)}
        big_cursor = 0
        small_cursor = {j: 0 for j in range(1, r)}

        def grab_big(count: int) -> list[int]:
            nonlocal big_cursor
            out = big[big_cursor : big_cursor + count]
            big_cursor += count
            return out

        def grab_small(j: int, count: int) -> list[int]:
            c = small_cursor[j]
            small_cursor[j] = c + count
            return smalls[j][c : c + count]

        # copy i sends its i-th width class up to the neck, its neck down to
        # slot i, and keeps every other width class in its own slot
        for i in range(1, r):
            slots = [grab_small(i, sigma)]
            for j in range(1, r):
                slots.append(grab_big(omega) if j == i else grab_small(j, omega))
            place_pattern_copy(slots)
        if big_cursor != big_size or any(
            small_cursor[j] != small_size for j in range(1, r)
        ):
            raise AssertionError("companion block not exactly consumed")

    if not alloc.exhausted():
        raise AssertionError("tiling does not exhaust the host")
    return HStarResult(
        hstar=hstar,
        tiling=Tiling(tuple(embeddings)),
        direct_count=direct_count,
        companion_count=companion_count,
    )


# ---------------------------------------------------------------------------
# the bottle graph carrying an exactly x-proportional tiling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class H1Result:
    h1: PartitionedGraph
    tiling: Tiling


def build_h1(pattern: Graph, x: Rational) -> H1Result:
    """Bottle graph with neck a(r-1)sigma, width bh - a*sigma, for x = a/b.

    Carries a(r-1) pattern copies covering exactly x |H_1| = a(r-1)h
    vertices: every copy parks its smallest colour class in the neck (filling
    it exactly), and the remaining colour classes rotate through the width
    classes so each width class receives a(h - sigma) <= width vertices.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError("x must lie strictly inside (0, 1)")
    params = chromatic_data(pattern)
    h, r, sigma = params.h, params.r, params.sigma
    a, b = x.numerator, x.denominator
    neck = a * (r - 1) * sigma
    width = b * h - a * sigma
    assert neck < width  # a*r*sigma <= a*h < b*h
    h1 = bottle_graph(r, neck, width)

    classes = _sigma_first_classes(pattern, params)
    alloc = _ClassAllocator(h1)
    embeddings = []
    for _ in range(a):
        for shift in range(r - 1):
            slots: list[list[int]] = [alloc.take(0, sigma)]
            # width class 1 + ((i - 1 + shift) mod (r - 1)) receives class i
            targets = [1 + (i + shift) % (r - 1) for i in range(r - 1)]
            image = [0] * h
            for p, w in zip(classes[0], slots[0]):
                image[p] = w
            for i, cls in enumerate(classes[1:]):
                slot = alloc.take(targets[i], len(cls))
                for p, w in zip(cls, slot):
                    image[p] = w
            embeddings.append(Embedding(pattern, tuple(image)))

    tiling = Tiling(tuple(embeddings))
    assert len(tiling.covered) == a * (r - 1) * h
    return H1Result(h1=h1, tiling=tiling)
