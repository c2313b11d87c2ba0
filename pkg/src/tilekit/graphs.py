"""Core graph types: bitmask graphs, partitions, embeddings, tilings, I/O.

Vertices are always 0..n-1. Adjacency is kept as one int bitmask per vertex,
which makes neighborhood intersection a single `&` and keeps every structure
hashable and immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional

MAX_VERTICES = 4096


class GraphParseError(ValueError):
    pass


class Graph:
    """Immutable simple undirected graph with dense bitmask rows."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if not 0 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count {n} outside [0, {MAX_VERTICES}]")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(rows))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # -- basic queries ------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def neighbors(self, u: int) -> Iterator[int]:
        return iter_bits(self.rows[u])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1)):
                yield (u, v)

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    # -- derived graphs -----------------------------------------------------

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges()) + list(extra))

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        comp = Graph.__new__(Graph)
        object.__setattr__(comp, "n", self.n)
        object.__setattr__(
            comp, "rows", tuple((full & ~r & ~(1 << u)) for u, r in enumerate(self.rows))
        )
        return comp

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph plus the map new-index -> old vertex."""
        vs = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(vs)}
        edges = [
            (pos[u], pos[v]) for u, v in combinations(vs, 2) if self.has_edge(u, v)
        ]
        return Graph(len(vs), edges), vs

    # -- equality is labeled; isomorphism lives in are_isomorphic -----------

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class PartitionedGraph:
    """A graph together with an ordered partition of its vertex set."""

    graph: Graph
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for cls in self.classes:
            for v in cls:
                if v in seen:
                    raise ValueError(f"vertex {v} appears in two classes")
                seen.add(v)
        if seen != set(range(self.graph.n)):
            raise ValueError("classes do not partition the vertex set")

    @property
    def r(self) -> int:
        return len(self.classes)

    def class_index(self, v: int) -> int:
        for i, cls in enumerate(self.classes):
            if v in cls:
                return i
        raise KeyError(v)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


@dataclass(frozen=True)
class Embedding:
    """Injective map witnessing one copy of `pattern` inside a host.

    image[i] is the host vertex carrying pattern vertex i. When the pattern
    came with a class partition (complete multipartite patterns), the classes
    are carried along so tilings can report which host vertices sit in
    width classes.
    """

    pattern: Graph
    image: tuple[int, ...]
    pattern_classes: Optional[tuple[tuple[int, ...], ...]] = None

    @property
    def image_set(self) -> frozenset[int]:
        return frozenset(self.image)

    def violation_in(self, host: Graph) -> Optional[str]:
        """None if this is a valid copy in host, else a description."""
        if len(self.image) != self.pattern.n:
            return f"image has {len(self.image)} vertices, pattern has {self.pattern.n}"
        if len(set(self.image)) != len(self.image):
            return f"image {self.image} is not injective"
        for w in self.image:
            if not 0 <= w < host.n:
                return f"image vertex {w} outside host range"
        for u, v in self.pattern.edges():
            if not host.has_edge(self.image[u], self.image[v]):
                return (
                    f"pattern edge ({u}, {v}) maps to non-edge "
                    f"({self.image[u]}, {self.image[v]})"
                )
        return None


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint embeddings; disjointness is checked by is_valid_tiling."""

    embeddings: tuple[Embedding, ...] = ()

    @property
    def covered(self) -> frozenset[int]:
        out: set[int] = set()
        for emb in self.embeddings:
            out.update(emb.image)
        return frozenset(out)

    @property
    def omega_class_vertices(self) -> frozenset[int]:
        """Host vertices lying in width classes (pattern classes 1..r-1).

        Only defined when every embedding carries a pattern partition with the
        neck at class index 0.
        """
        out: set[int] = set()
        for emb in self.embeddings:
            if emb.pattern_classes is None:
                raise ValueError("embedding has no pattern class structure")
            for cls in emb.pattern_classes[1:]:
                out.update(emb.image[p] for p in cls)
        return frozenset(out)

    def __len__(self) -> int:
        return len(self.embeddings)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def is_valid_tiling(host: Graph, tiling: Tiling) -> ValidationReport:
    """Check every embedding is a valid copy and images are pairwise disjoint."""
    used: dict[int, int] = {}
    for idx, emb in enumerate(tiling.embeddings):
        bad = emb.violation_in(host)
        if bad is not None:
            return ValidationReport(False, f"embedding {idx}: {bad}")
        for w in emb.image:
            if w in used:
                return ValidationReport(
                    False, f"embeddings {used[w]} and {idx} overlap at vertex {w}"
                )
            used[w] = idx
    return ValidationReport(True)


class VertexOrdering:
    """Permutation of [n] along which degrees are non-decreasing."""

    __slots__ = ("order", "_pos")

    def __init__(self, order: Iterable[int]):
        self.order = tuple(order)
        self._pos = {v: i + 1 for i, v in enumerate(self.order)}
        if len(self._pos) != len(self.order):
            raise ValueError("ordering repeats a vertex")

    @classmethod
    def by_degree(cls, g: Graph) -> "VertexOrdering":
        # ties broken by label so downstream index comparisons are deterministic
        return cls(sorted(range(g.n), key=lambda v: (g.degree(v), v)))

    def position(self, v: int) -> int:
        """1-based rank of v in the ordering."""
        return self._pos[v]

    def check_degrees(self, g: Graph) -> bool:
        degs = [g.degree(v) for v in self.order]
        return all(a <= b for a, b in zip(degs, degs[1:]))

    def __len__(self) -> int:
        return len(self.order)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def complete_multipartite(class_sizes: list[int]) -> PartitionedGraph:
    """Complete multipartite graph; edge iff endpoints in distinct classes."""
    if not class_sizes:
        raise ValueError("class_sizes must be nonempty")
    if any(s <= 0 for s in class_sizes):
        raise ValueError(f"class sizes must be positive, got {class_sizes}")
    n = sum(class_sizes)
    classes = []
    start = 0
    for s in class_sizes:
        classes.append(tuple(range(start, start + s)))
        start += s
    edges = []
    for i, ci in enumerate(classes):
        for cj in classes[i + 1 :]:
            edges.extend((u, v) for u in ci for v in cj)
    return PartitionedGraph(Graph(n, edges), tuple(classes))


def bottle_graph(r: int, neck: int, width: int) -> PartitionedGraph:
    """Complete r-partite graph with one neck class and r-1 width classes.

    The neck is class index 0. neck == width is allowed (balanced case).
    """
    if r < 2:
        raise ValueError(f"bottle graph needs r >= 2, got r={r}")
    if neck < 1 or width < 1:
        raise ValueError(f"neck and width must be positive, got ({neck}, {width})")
    if neck > width:
        raise ValueError(f"neck {neck} exceeds width {width}")
    return complete_multipartite([neck] + [width] * (r - 1))


def blow_up(g: Graph, t: int) -> PartitionedGraph:
    """Replace each vertex x by t clones; clone sets of adjacent vertices are
    completely joined, clone sets themselves stay independent.

    Class i of the result is the clone set of original vertex i.
    """
    if t < 1:
        raise ValueError(f"blow-up factor must be >= 1, got {t}")
    if g.n * t > MAX_VERTICES:
        raise ValueError(f"blow-up would have {g.n * t} > {MAX_VERTICES} vertices")
    edges = []
    for x, y in g.edges():
        for i in range(t):
            for j in range(t):
                edges.append((x * t + i, y * t + j))
    classes = tuple(tuple(range(x * t, (x + 1) * t)) for x in range(g.n))
    return PartitionedGraph(Graph(g.n * t, edges), classes)


def multipartite_classes(g: Graph) -> Optional[list[tuple[int, ...]]]:
    """If g is complete multipartite, return its classes (sorted by size then
    smallest label); otherwise None.

    g is complete multipartite iff its complement is a disjoint union of
    cliques; the cliques are then the classes and the partition is unique.
    """
    if g.n == 0:
        return None
    comp = g.complement()
    seen = 0
    classes = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        # component of v in the complement, by BFS
        frontier = 1 << v
        member = 0
        while frontier:
            member |= frontier
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= comp.rows[u]
            frontier = nxt & ~member
        for u in iter_bits(member):
            if comp.rows[u] & member != member & ~(1 << u):
                return None  # component is not a clique
        seen |= member
        classes.append(tuple(iter_bits(member)))
    classes.sort(key=lambda c: (len(c), c[0]))
    return classes


# ---------------------------------------------------------------------------
# isomorphism (tests only; labeled equality elsewhere)
# ---------------------------------------------------------------------------

ISO_MAX = 12


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Exhaustive isomorphism check with degree pruning; n <= 12 only."""
    if g1.n > ISO_MAX or g2.n > ISO_MAX:
        raise ValueError(f"isomorphism check limited to n <= {ISO_MAX}")
    if g1.n != g2.n or g1.edge_count() != g2.edge_count():
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    n = g1.n
    d1, d2 = g1.degrees(), g2.degrees()
    # order g1 vertices by rarity of degree to fail fast
    order = sorted(range(n), key=lambda v: (d1[v], v))
    mapping = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        u = order[i]
        for w in range(n):
            if used[w] or d2[w] != d1[u]:
                continue
            ok = True
            for j in range(i):
                p = order[j]
                if g1.has_edge(u, p) != g2.has_edge(w, mapping[p]):
                    ok = False
                    break
            if ok:
                mapping[u] = w
                used[w] = True
                if extend(i + 1):
                    return True
                mapping[u] = -1
                used[w] = False
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# I/O: edge-list and graph6
# ---------------------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse either the edge-list format (first line n, then "u v" lines) or a
    graph6 string. A leading all-digit line selects the edge-list reader."""
    stripped = text.strip()
    if not stripped:
        raise GraphParseError("empty input")
    if stripped.startswith(">>graph6<<"):
        return graph6_decode(stripped[len(">>graph6<<") :].strip())
    first = stripped.splitlines()[0].strip()
    if first.isdigit():
        return parse_edge_list(text)
    return graph6_decode(stripped)


def parse_edge_list(text: str) -> Graph:
    lines = text.splitlines()
    n = None
    edges = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if n is None:
            if not line.isdigit():
                raise GraphParseError(f"line {lineno}: expected vertex count, got {line!r}")
            n = int(line)
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphParseError(f"line {lineno}: expected 'u v', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise GraphParseError("missing vertex count line")
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise GraphParseError(str(exc)) from exc


def emit_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def emit_graph(g: Graph, fmt: str = "edgelist") -> str:
    if fmt == "edgelist":
        return emit_edge_list(g)
    if fmt == "graph6":
        return graph6_encode(g)
    raise ValueError(f"unknown format {fmt!r}")


def _g6_size_bytes(n: int) -> list[int]:
    if n <= 62:
        return [n + 63]
    if n <= 258047:
        return [126, (n >> 12) + 63, (n >> 6 & 63) + 63, (n & 63) + 63]
    raise ValueError(f"graph6 encoding here limited to n <= 258047, got {n}")


def graph6_encode(g: Graph) -> str:
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if g.has_edge(u, v) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = _g6_size_bytes(g.n)
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i : i + 6]:
            val = val << 1 | b
        out.append(val + 63)
    return "".join(chr(c) for c in out)


def graph6_decode(s: str) -> Graph:
    s = s.strip()
    if not s:
        raise GraphParseError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(d < 0 or d > 63 for d in data):
        raise GraphParseError("graph6 string has characters outside chr(63)..chr(126)")
    if data[0] == 63:  # '~' prefix: 18-bit vertex count
        if len(data) < 4:
            raise GraphParseError("truncated graph6 size field")
        n = data[1] << 12 | data[2] << 6 | data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    need = n * (n - 1) // 2
    if len(body) * 6 < need:
        raise GraphParseError(f"graph6 body too short for n={n}")
    bits = []
    for d in body:
        for k in range(5, -1, -1):
            bits.append(d >> k & 1)
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                edges.append((u, v))
            idx += 1
    return Graph(n, edges)
