"""k-dipoles: detection, contraction, creation, routing to core graphs and
melonic reduction.

A k-dipole is a positive vertex ``v`` and a negative vertex ``w`` joined by
edges of exactly the colors ``K`` (``|K| = k``) such that ``v`` and ``w`` lie
in different bubbles of the complementary colors.  Contracting it deletes the
pair and, for every color ``j`` outside ``K``, joins the two loose ends.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bubbles import component_labels, hat
from .graph import ColoredGraph, require_closed


class StaleDipoleError(ValueError):
    """The dipole does not belong to (this revision of) the graph."""


class CreationError(ValueError):
    """A creation spec is malformed or produces a pair that is not a dipole."""


def fingerprint(graph: ColoredGraph) -> str:
    h = hashlib.blake2b(digest_size=12)
    h.update(repr((graph.dimension, graph.positive_count, graph.edges)).encode())
    return h.hexdigest()


@dataclass(frozen=True)
class Dipole:
    positive: int
    negative: int
    colors: tuple[int, ...]
    bubbles: tuple[int, int]
    graph_id: str = field(default="", compare=False)

    @property
    def k(self):
        return len(self.colors)


def shared_colors(graph: ColoredGraph, v: int, w: int):
    """Colors of the edges joining positive ``v`` and negative ``w``."""
    P = graph.positive_count
    return tuple(int(c) for c in np.flatnonzero(graph.neighbors[v] == P + w))


def _separation(graph, v, w, colors):
    labels = component_labels(graph, hat(graph.dimension, *colors))
    return int(labels[v]), int(labels[graph.positive_count + w])


def find_dipoles(graph: ColoredGraph, k: int) -> list[Dipole]:
    D = graph.dimension
    if not 1 <= k <= D:
        raise ValueError(f"k={k} outside 1..{D}")
    P = graph.positive_count
    nb = graph.neighbors
    gid = fingerprint(graph)
    cache = {}
    found = []
    for v in range(P):
        partners = sorted({int(x) - P for x in nb[v] if x >= 0})
        for w in partners:
            shared = shared_colors(graph, v, w)
            for K in combinations(shared, k):
                comp = hat(D, *K)
                if comp not in cache:
                    cache[comp] = component_labels(graph, comp)
                a, b = int(cache[comp][v]), int(cache[comp][P + w])
                if a != b:
                    found.append(Dipole(v, w, K, (a, b), gid))
    return found


def check_dipole(graph: ColoredGraph, dipole: Dipole):
    """Raise :class:`StaleDipoleError` unless ``dipole`` is live in ``graph``."""
    if dipole.graph_id and dipole.graph_id != fingerprint(graph):
        raise StaleDipoleError("dipole was found on a different graph")
    v, w = dipole.positive, dipole.negative
    if not (0 <= v < graph.positive_count and 0 <= w < graph.negative_count):
        raise StaleDipoleError("dipole vertices out of range")
    if shared_colors(graph, v, w) != tuple(dipole.colors):
        raise StaleDipoleError("dipole vertices no longer share exactly its colors")
    a, b = _separation(graph, v, w, dipole.colors)
    if a == b:
        raise StaleDipoleError("dipole vertices are not separated")


def contract(graph: ColoredGraph, dipole: Dipole) -> ColoredGraph:
    check_dipole(graph, dipole)
    return _contract_pair(graph, dipole.positive, dipole.negative, dipole.colors)


def _contract_pair(graph, v, w, colors):
    P = graph.positive_count
    nb = graph.neighbors
    edges = [e for e in graph.edges if e[0] != v and e[1] != w]
    for j in graph.colors:
        if j in colors:
            continue
        xbar = int(nb[v, j]) - P
        y = int(nb[P + w, j])
        edges.append((y, xbar, j))
    edges = tuple((p - (p > v), n - (n > w), c) for p, n, c in edges)
    return ColoredGraph(graph.dimension, P - 1, graph.negative_count - 1, edges)


@dataclass(frozen=True)
class CreationSpec:
    """Insert a new vertex pair joined by ``colors``; every other color ``j``
    cuts the listed edge ``(p, n, j)`` and threads it through the pair."""

    colors: tuple[int, ...]
    cuts: tuple[tuple[int, int, int], ...]


def inverse_spec(graph: ColoredGraph, dipole: Dipole) -> CreationSpec:
    """The creation spec that undoes ``contract(graph, dipole)``."""
    P = graph.positive_count
    nb = graph.neighbors
    v, w = dipole.positive, dipole.negative
    cuts = []
    for j in graph.colors:
        if j in dipole.colors:
            continue
        xbar = int(nb[v, j]) - P
        y = int(nb[P + w, j])
        cuts.append((y - (y > v), xbar - (xbar > w), j))
    return CreationSpec(tuple(dipole.colors), tuple(cuts))


def create(graph: ColoredGraph, spec: CreationSpec) -> ColoredGraph:
    """Inverse move of :func:`contract`; the new pair gets the highest indices."""
    D = graph.dimension
    K = tuple(sorted(spec.colors))
    if len(set(K)) != len(K) or not all(0 <= c <= D for c in K) or not K:
        raise CreationError(f"bad dipole colors {spec.colors}")
    by_color = {}
    for p, n, c in spec.cuts:
        if c in by_color or c in K:
            raise CreationError(f"color {c} named twice in creation spec")
        by_color[c] = (p, n, c)
    missing = [j for j in range(D + 1) if j not in K and j not in by_color]
    if missing:
        raise CreationError(f"no edge to cut for colors {missing}")
    edges = list(graph.edges)
    used = set()
    for j, e in by_color.items():
        if e not in edges or e in used:
            raise CreationError(f"edge {e} is not an edge of the graph")
        used.add(e)
    v, w = graph.positive_count, graph.negative_count
    for j, (p, n, c) in sorted(by_color.items()):
        edges.remove((p, n, c))
        edges += [(v, n, c), (p, w, c)]
    edges += [(v, w, c) for c in K]
    out = ColoredGraph(D, v + 1, w + 1, tuple(edges))
    a, b = _separation(out, v, w, K)
    if a == b:
        raise CreationError(
            f"new pair ({v},{w}) lies in a single bubble of colors {hat(D, *K)}; "
            "it would not be a dipole")
    return out


# -- routing ------------------------------------------------------------------------


@dataclass
class RoutingLog:
    """Contracted 1-dipoles as ``(color, positive, negative)`` in the labels of
    the graph current at that step, plus the root vertex used per color."""

    steps: list = field(default_factory=list)
    roots: dict = field(default_factory=dict)

    def to_dict(self):
        return {"steps": [list(s) for s in self.steps],
                "roots": {str(c): r for c, r in sorted(self.roots.items())}}


def replay(graph: ColoredGraph, log: RoutingLog) -> ColoredGraph:
    for c, v, w in log.steps:
        if shared_colors(graph, v, w) != (c,):
            raise StaleDipoleError(f"log step {(c, v, w)} does not apply")
        graph = _contract_pair(graph, v, w, (c,))
    return graph


def is_core(graph: ColoredGraph) -> bool:
    D = graph.dimension
    return all(int(component_labels(graph, hat(D, i)).max()) == 0 for i in range(D + 1))


def route_to_core(graph: ColoredGraph, policy="bfs", rng=None):
    """Contract 1-dipoles color by color, from color D down to 0.

    For color ``i`` the D-bubbles avoiding ``i`` are joined by color-``i``
    edges; a spanning tree of that connectivity graph, rooted at the bubble
    containing positive vertex 0, is contracted edge by edge.  ``policy`` is
    ``"bfs"`` (deterministic) or ``"random"`` (random root and tree order).
    """
    require_closed(graph, "routing")
    rng = np.random.default_rng(rng) if policy == "random" else None
    log = RoutingLog()
    D = graph.dimension
    for i in range(D, -1, -1):
        P = graph.positive_count
        labels = component_labels(graph, hat(D, i))
        k = int(labels.max()) + 1
        root_vertex = int(rng.integers(P)) if rng is not None else 0
        log.roots[i] = root_vertex
        if k == 1:
            continue
        adj = [[] for _ in range(k)]
        for p, n, c in graph.edges:
            if c == i:
                a, b = int(labels[p]), int(labels[P + n])
                if a != b:
                    adj[a].append((b, p, n))
                    adj[b].append((a, p, n))
        if rng is not None:
            for lst in adj:
                rng.shuffle(lst)
        root = int(labels[root_vertex])
        seen = {root}
        queue = deque([root])
        tree = []
        while queue:
            a = queue.popleft()
            for b, p, n in adj[a]:
                if b not in seen:
                    seen.add(b)
                    tree.append((p, n))
                    queue.append(b)
        pending = tree
        while pending:
            (v, w), rest = pending[0], pending[1:]
            log.steps.append((i, v, w))
            graph = _contract_pair(graph, v, w, (i,))
            pending = [(p - (p > v), n - (n > w)) for p, n in rest]
    return graph, log


# -- melonic reduction -----------------------------------------------------------


@dataclass
class MelonicCheck:
    """Outcome of iterated elementary-melon removal.

    ``removals`` lists ``(positive, negative, color)`` in the original labels,
    ``color`` being the one color the pair does not share.
    """

    melonic: bool
    removals: list
    remaining: tuple = ()

    def __bool__(self):
        return self.melonic


def melon_removal(graph: ColoredGraph) -> MelonicCheck:
    """Greedily strip elementary melons (pairs sharing exactly D colors).

    A closed graph is melonic when this ends at the supermelon; an open one
    when only boundary vertices remain.
    """
    D = graph.dimension
    P = graph.positive_count
    nb = graph.neighbors
    pos = [[int(x) - P for x in nb[v]] for v in range(P)]
    neg = [[int(x) for x in nb[P + w]] for w in range(graph.negative_count)]
    alive = [True] * P

    def melon_at(v):
        row = pos[v]
        for w in set(row):
            if w >= 0 and row.count(w) == D:
                return w
        return None

    removals = []
    work = deque(range(P))
    while work:
        v = work.popleft()
        if not alive[v]:
            continue
        w = melon_at(v)
        if w is None:
            continue
        i = next(c for c in range(D + 1) if pos[v][c] != w)
        xbar, y = pos[v][i], neg[w][i]
        pos[y][i] = xbar
        neg[xbar][i] = y
        alive[v] = False
        removals.append((v, w, i))
        work.append(y)
    rest = tuple(v for v in range(P) if alive[v])
    if graph.kind == "open":
        # only the positive boundary vertices may survive
        ok = all(graph.degrees[v] == 1 for v in rest)
    else:
        ok = len(rest) == 1 and len(set(pos[rest[0]])) == 1
    return MelonicCheck(ok, removals, rest)


def is_melonic(graph: ColoredGraph) -> MelonicCheck:
    return melon_removal(graph)
