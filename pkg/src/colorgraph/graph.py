"""Colored graphs: construction, validation, boundary graphs and canonical I/O.

A ``ColoredGraph`` with ``dimension`` D carries edge colors ``0..D``.  Positive
and negative vertices are numbered densely and independently; an edge is the
triple ``(positive, negative, color)``.  Edges are always stored in canonical
order, sorted by ``(color, positive, negative)``.

Several algorithms address vertices through a single integer namespace: the
positive vertex ``v`` is ``v`` and the negative vertex ``w`` is
``positive_count + w``.  :meth:`ColoredGraph.vid` and
:meth:`ColoredGraph.split_vid` convert between the two.

Open graphs keep their boundary vertices explicitly (they are the 1-valent
vertices).  Cutting an edge of color ``i`` replaces it by two external edges
ending in fresh boundary vertices and records the pair in ``cuts`` so that the
graph can be closed again.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

CLOSED = "closed"
OPEN = "open"

Edge = tuple[int, int, int]


class GraphFormatError(ValueError):
    """Raised by :func:`parse` for malformed documents or invalid graphs."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True)
class Violation:
    clause: str
    where: str
    detail: str = ""

    def __str__(self):
        text = f"{self.clause} at {self.where}"
        return f"{text}: {self.detail}" if self.detail else text

    def to_dict(self):
        return {"clause": self.clause, "where": self.where, "detail": self.detail}


@dataclass(frozen=True)
class ColoredGraph:
    dimension: int
    positive_count: int
    negative_count: int
    edges: tuple[Edge, ...]
    kind: str = CLOSED
    cuts: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        edges = tuple(sorted((int(p), int(n), int(c)) for p, n, c in self.edges))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "cuts", tuple(sorted((int(a), int(b)) for a, b in self.cuts)))

    # -- vertex bookkeeping ------------------------------------------------

    @property
    def colors(self):
        return range(self.dimension + 1)

    @property
    def vertex_count(self):
        return self.positive_count + self.negative_count

    @property
    def order(self):
        """Half the number of vertices (the ``p`` of a closed graph)."""
        return self.positive_count

    def vid(self, sign, index):
        return index if sign > 0 else self.positive_count + index

    def split_vid(self, v):
        if v < self.positive_count:
            return 1, v
        return -1, v - self.positive_count

    def vertex_name(self, v):
        sign, index = self.split_vid(v)
        return f"{'+' if sign > 0 else '-'}{index}"

    @cached_property
    def edge_array(self):
        """``(m, 3)`` integer array of ``(positive, negative, color)`` rows."""
        if not self.edges:
            return np.zeros((0, 3), dtype=np.int64)
        return np.array(self.edges, dtype=np.int64)

    @cached_property
    def degrees(self):
        deg = np.zeros(self.vertex_count, dtype=np.int64)
        for p, n, _ in self.edges:
            deg[p] += 1
            deg[self.positive_count + n] += 1
        return deg

    @cached_property
    def neighbors(self):
        """``(vertex_count, D+1)`` table of neighbor vids, ``-1`` when absent.

        Only meaningful when every vertex carries at most one edge per color.
        """
        table = np.full((self.vertex_count, self.dimension + 1), -1, dtype=np.int64)
        if self.edges:
            e = self.edge_array
            table[e[:, 0], e[:, 2]] = e[:, 1] + self.positive_count
            table[e[:, 1] + self.positive_count, e[:, 2]] = e[:, 0]
        return table

    @cached_property
    def label_cache(self) -> dict:
        """Per-instance memo for bubble labelings (the graph is immutable)."""
        return {}

    @cached_property
    def edge_index(self):
        """Map ``(vertex vid, color) -> edge position`` (first one wins)."""
        index = {}
        for k, (p, n, c) in enumerate(self.edges):
            index.setdefault((p, c), k)
            index.setdefault((self.positive_count + n, c), k)
        return index

    @cached_property
    def boundary_vertices(self):
        """Sorted vids of the 1-valent vertices of an open graph."""
        if self.kind != OPEN:
            return ()
        return tuple(int(v) for v in np.flatnonzero(self.degrees == 1))

    def external_color(self, v):
        """Color of the single edge at a boundary vertex."""
        colors = np.flatnonzero(self.neighbors[v] >= 0)
        return int(colors[0])

    def is_connected(self):
        n = self.vertex_count
        if n == 0:
            return True
        adj = [[] for _ in range(n)]
        for p, q, _ in self.edges:
            q += self.positive_count
            adj[p].append(q)
            adj[q].append(p)
        seen = [False] * n
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    queue.append(w)
        return count == n

    def __str__(self):
        return (f"ColoredGraph(D={self.dimension}, {self.kind}, "
                f"{self.positive_count}+{self.negative_count} vertices, {len(self.edges)} edges)")


# -- validation -----------------------------------------------------------------


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self):
        # truthy when there is something to report
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def ok(self):
        return not self.violations

    def clauses(self):
        return {v.clause for v in self.violations}

    def add(self, clause, where, detail=""):
        self.violations.append(Violation(clause, where, detail))

    def to_list(self):
        return [v.to_dict() for v in self.violations]


def validate(graph: ColoredGraph) -> ValidationReport:
    """Check every defining invariant of ``graph`` for its declared kind.

    Violations are returned as data; nothing is raised.
    """
    report = ValidationReport()
    D = graph.dimension
    P, N = graph.positive_count, graph.negative_count
    if graph.kind not in (CLOSED, OPEN):
        report.add("unknown kind", "graph", repr(graph.kind))
        return report
    if D < 1:
        report.add("dimension out of range", "graph", f"D={D}")
        return report
    if P != N:
        report.add("unbalanced bipartition", "graph", f"|V|={P}, |V-bar|={N}")

    in_range = True
    for k, (p, n, c) in enumerate(graph.edges):
        if not 0 <= c <= D:
            report.add("color out of range", f"edge {k}", f"color {c} not in 0..{D}")
            in_range = False
        if not 0 <= p < P:
            report.add("vertex out of range", f"edge {k}", f"positive vertex {p}")
            in_range = False
        if not 0 <= n < N:
            report.add("vertex out of range", f"edge {k}", f"negative vertex {n}")
            in_range = False
    if not in_range:
        return report

    incident = [[] for _ in range(P + N)]
    for p, n, c in graph.edges:
        incident[p].append(c)
        incident[P + n].append(c)

    boundary = set()
    for v, cols in enumerate(incident):
        name = graph.vertex_name(v)
        if len(set(cols)) != len(cols):
            dup = sorted({c for c in cols if cols.count(c) > 1})
            report.add("duplicate color at vertex", name, f"colors {dup}")
        if graph.kind == OPEN and len(cols) == 1:
            boundary.add(v)
        elif len(cols) != D + 1:
            report.add("wrong valence", name, f"{len(cols)} incident edges, expected {D + 1}")

    if graph.kind == OPEN:
        if not boundary:
            report.add("open graph without boundary", "graph")
        for k, (p, n, c) in enumerate(graph.edges):
            if p in boundary and P + n in boundary:
                report.add("external edge joins two boundary vertices", f"edge {k}")
        for a, b in graph.cuts:
            if not (0 <= a < P and 0 <= b < N) or a not in boundary or P + b not in boundary:
                report.add("cut pair is not a boundary pair", f"cut ({a},{b})")
            elif incident[a][0] != incident[P + b][0]:
                report.add("cut pair colors differ", f"cut ({a},{b})")
    elif graph.cuts:
        report.add("closed graph with cuts", "graph")

    if P + N and not graph.is_connected():
        report.add("disconnected", "graph")
    return report


def require_closed(graph, what: str):
    if graph.kind != CLOSED:
        raise ValueError(f"{what} is defined for closed graphs only")


def require_valid(graph, kind=None):
    report = validate(graph)
    if report.violations:
        raise GraphFormatError("invariant violations", report.violations)
    if kind is not None and graph.kind != kind:
        raise ValueError(f"expected a {kind} graph, got {graph.kind}")
    return graph


# -- constructors -----------------------------------------------------------------


def supermelon(D: int) -> ColoredGraph:
    """The two-vertex graph with all D+1 colors between its vertices."""
    return ColoredGraph(D, 1, 1, tuple((0, 0, c) for c in range(D + 1)))


def from_permutations(perms, D=None) -> ColoredGraph:
    """Closed graph whose color-``c`` edges join ``v`` to ``perms[c][v]``."""
    perms = [list(map(int, s)) for s in perms]
    if D is None:
        D = len(perms) - 1
    n = len(perms[0])
    edges = [(v, s[v], c) for c, s in enumerate(perms) for v in range(n)]
    return ColoredGraph(D, n, n, tuple(edges))


def permutations_of(graph: ColoredGraph):
    """Inverse of :func:`from_permutations` for a valid closed graph."""
    P = graph.positive_count
    nb = graph.neighbors
    return [(nb[:P, c] - P).tolist() for c in graph.colors]


def random_graph(D: int, n: int, rng, connected=True, max_tries=1000) -> ColoredGraph:
    """Closed graph on ``2n`` vertices from independent uniform permutations."""
    rng = np.random.default_rng(rng)
    for _ in range(max_tries):
        g = from_permutations([rng.permutation(n) for _ in range(D + 1)], D)
        if not connected or g.is_connected():
            return g
    raise RuntimeError("could not draw a connected graph")


def relabel(graph: ColoredGraph, pos_map, neg_map) -> ColoredGraph:
    """Apply vertex renumberings given as sequences old index -> new index."""
    edges = tuple((pos_map[p], neg_map[n], c) for p, n, c in graph.edges)
    cuts = tuple((pos_map[a], neg_map[b]) for a, b in graph.cuts)
    return ColoredGraph(graph.dimension, graph.positive_count, graph.negative_count,
                        edges, graph.kind, cuts)


def cut(graph: ColoredGraph, edge) -> ColoredGraph:
    """Cut one edge, given by position or as a ``(p, n, c)`` triple.

    The edge ``(p, n, c)`` becomes ``(p, b-, c)`` and ``(b+, n, c)`` with fresh
    boundary vertices ``b+ = positive_count`` and ``b- = negative_count``.
    """
    if isinstance(edge, (int, np.integer)):
        edge = graph.edges[edge]
    p, n, c = edge
    edges = list(graph.edges)
    edges.remove((p, n, c))
    bp, bn = graph.positive_count, graph.negative_count
    edges += [(p, bn, c), (bp, n, c)]
    return ColoredGraph(graph.dimension, bp + 1, bn + 1, tuple(edges), OPEN,
                        graph.cuts + ((bp, bn),))


def close(graph: ColoredGraph) -> ColoredGraph:
    """Glue every recorded cut pair back into a single edge."""
    if graph.kind != OPEN:
        return graph
    P = graph.positive_count
    nb = graph.neighbors
    drop_pos = {a for a, _ in graph.cuts}
    drop_neg = {b for _, b in graph.cuts}
    edges = [e for e in graph.edges if e[0] not in drop_pos and e[1] not in drop_neg]
    for a, b in graph.cuts:
        c = graph.external_color(a)
        n = int(nb[a, c]) - P
        p = int(nb[P + b, c])
        edges.append((p, n, c))
    pos_keep = [v for v in range(P) if v not in drop_pos]
    neg_keep = [w for w in range(graph.negative_count) if w not in drop_neg]
    pos_map = {v: i for i, v in enumerate(pos_keep)}
    neg_map = {w: i for i, w in enumerate(neg_keep)}
    edges = tuple((pos_map[p], neg_map[n], c) for p, n, c in edges)
    kind = OPEN if len(graph.boundary_vertices) > 2 * len(graph.cuts) else CLOSED
    return ColoredGraph(graph.dimension, len(pos_keep), len(neg_keep), edges, kind)


# -- boundary graphs ------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryGraph:
    """Boundary of an open graph.

    ``vertices`` lists the boundary vids of the parent graph and ``vertex_colors``
    their colors; each edge is ``(a, b, (i, j))`` with ``a <= b`` positions into
    ``vertices`` and ``i < j``.
    """

    dimension: int
    vertices: tuple[int, ...]
    vertex_colors: tuple[int, ...]
    edges: tuple[tuple[int, int, tuple[int, int]], ...]

    def valence(self, a):
        return sum((x == a) + (y == a) for x, y, _ in self.edges)

    def check(self) -> list[str]:
        """Return the violated boundary-graph invariants (empty when fine)."""
        problems = []
        D = self.dimension
        for a, color in enumerate(self.vertex_colors):
            pairs = sorted(pair for x, y, pair in self.edges for _ in range((x == a) + (y == a)))
            expected = sorted(tuple(sorted((color, j))) for j in range(D + 1) if j != color)
            if pairs != expected:
                problems.append(f"vertex {a} has edge colors {pairs}, expected {expected}")
        for x, y, (i, j) in self.edges:
            if i == j:
                problems.append(f"edge {x}-{y} has repeated color {i}")
            if not {self.vertex_colors[x], self.vertex_colors[y]} <= {i, j}:
                problems.append(f"edge {x}-{y} colors {i, j} do not match its endpoints")
        return problems


def boundary_graph(graph: ColoredGraph) -> BoundaryGraph:
    """Trace every maximal bicolored path between boundary vertices."""
    if graph.kind != OPEN:
        raise ValueError("closed graphs have no boundary")
    require_valid(graph)
    D = graph.dimension
    nb = graph.neighbors
    boundary = graph.boundary_vertices
    position = {v: a for a, v in enumerate(boundary)}
    colors = tuple(graph.external_color(v) for v in boundary)
    edges = []
    for a, v in enumerate(boundary):
        i = colors[a]
        for j in range(D + 1):
            if j == i:
                continue
            # the walk alternates i, j, i, ... until it meets another boundary vertex
            u, c, other = int(nb[v, i]), j, i
            while u not in position:
                u = int(nb[u, c])
                c, other = other, c
            b = position[u]
            if a < b:
                edges.append((a, b, (min(i, j), max(i, j))))
    edges.sort()
    return BoundaryGraph(D, boundary, colors, tuple(edges))


# -- serialization --------------------------------------------------------------

_FIELDS = ("dimension", "kind", "positive_count", "negative_count", "edges")


def to_document(graph: ColoredGraph) -> dict:
    doc = {
        "dimension": graph.dimension,
        "kind": graph.kind,
        "positive_count": graph.positive_count,
        "negative_count": graph.negative_count,
        "edges": [list(e) for e in graph.edges],
    }
    if graph.cuts:
        doc["cut_edges"] = [list(c) for c in graph.cuts]
    return doc


def serialize(graph: ColoredGraph) -> bytes:
    """Canonical JSON bytes: sorted edges, fixed key order, no extra whitespace."""
    require_valid(graph)
    return json.dumps(to_document(graph), separators=(",", ":")).encode()


def from_document(doc, validate_graph=True) -> ColoredGraph:
    if not isinstance(doc, dict):
        raise GraphFormatError("malformed syntax: document must be an object")
    missing = [k for k in _FIELDS if k not in doc]
    if missing:
        raise GraphFormatError(f"malformed syntax: missing fields {missing}")
    try:
        D = int(doc["dimension"])
        P = int(doc["positive_count"])
        N = int(doc["negative_count"])
        edges = []
        for e in doc["edges"]:
            if len(e) != 3:
                raise ValueError(e)
            edges.append(tuple(int(x) for x in e))
        cuts = [tuple(int(x) for x in c) for c in doc.get("cut_edges", [])]
        if any(len(c) != 2 for c in cuts):
            raise ValueError(cuts)
    except (TypeError, ValueError) as exc:
        raise GraphFormatError(f"malformed syntax: {exc}") from None
    kind = doc["kind"]
    if kind not in (CLOSED, OPEN):
        raise GraphFormatError(f"malformed syntax: unknown kind {kind!r}")
    bad = [e for e in edges if not 0 <= e[2] <= D]
    if bad:
        raise GraphFormatError(f"color out of range: {bad[0]} with D={D}")
    graph = ColoredGraph(D, P, N, tuple(edges), kind, tuple(cuts))
    if validate_graph:
        report = validate(graph)
        if report.violations:
            raise GraphFormatError("invariant violations", report.violations)
    return graph


def parse(data, validate_graph=True) -> ColoredGraph:
    """Inverse of :func:`serialize`; accepts bytes or str."""
    if isinstance(data, (bytes, bytearray)):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"malformed syntax: {exc}") from None
    return from_document(doc, validate_graph)


def load(path) -> ColoredGraph:
    with open(path, "rb") as fh:
        return parse(fh.read())


def dump(graph, path):
    with open(path, "wb") as fh:
        fh.write(serialize(graph))
