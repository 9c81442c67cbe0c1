"""d-bubbles, the dual simplicial complex and pseudomanifold checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .graph import ColoredGraph

BubbleKey = tuple[tuple[int, ...], int]


@dataclass(frozen=True)
class Bubble:
    """A maximal connected subgraph using exactly the edges of ``colors``.

    ``vertices`` are vids and ``edges`` positions in the parent's edge tuple.
    Components of one species are numbered by their smallest vertex.
    """

    colors: tuple[int, ...]
    index: int
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def key(self) -> BubbleKey:
        return (self.colors, self.index)

    @property
    def d(self):
        return len(self.colors)


def component_labels(graph: ColoredGraph, colors) -> np.ndarray:
    """Label every vertex by the species-``colors`` bubble containing it.

    Labels run over ``0..k-1`` in order of each component's smallest vid.
    """
    colors = tuple(sorted(colors))
    cache = graph.label_cache
    if colors not in cache:
        labels = _labels(graph, colors)
        labels.flags.writeable = False
        cache[colors] = labels
    return cache[colors]


def _labels(graph, colors):
    n = graph.vertex_count
    e = graph.edge_array
    if len(colors) == 0 or len(e) == 0:
        return np.arange(n)
    mask = np.isin(e[:, 2], colors)
    rows = e[mask, 0]
    cols = e[mask, 1] + graph.positive_count
    adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, raw = connected_components(adj, directed=False)
    # renumber by first occurrence so component ids follow smallest vertex
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return rank[raw]


def enumerate_bubbles(graph: ColoredGraph, colors) -> list[Bubble]:
    colors = tuple(sorted(colors))
    labels = component_labels(graph, colors)
    k = int(labels.max()) + 1 if len(labels) else 0
    verts = [[] for _ in range(k)]
    for v, lab in enumerate(labels):
        verts[lab].append(v)
    edges = [[] for _ in range(k)]
    if colors:
        wanted = set(colors)
        for pos, (p, _, c) in enumerate(graph.edges):
            if c in wanted:
                edges[labels[p]].append(pos)
    return [Bubble(colors, i, tuple(verts[i]), tuple(edges[i])) for i in range(k)]


def species(D, d):
    """All color subsets of size ``d`` in lexicographic order."""
    return list(combinations(range(D + 1), d))


def bubble_counts(graph: ColoredGraph) -> dict[int, int]:
    """Number of d-bubbles for every d, summed over species."""
    D = graph.dimension
    counts = {}
    for d in range(D + 1):
        counts[d] = sum(int(component_labels(graph, s).max()) + 1 for s in species(D, d))
    return counts


def hat(D, *removed):
    """The complementary color tuple ``{0..D} minus removed``."""
    return tuple(c for c in range(D + 1) if c not in removed)


def bubble_subgraph(graph: ColoredGraph, bubble: Bubble) -> ColoredGraph:
    """The bubble as a graph in its own right, colors renumbered ``0..d-1``.

    The renumbering keeps the order of ``bubble.colors``; vertices keep their
    relative order within each sign class.
    """
    P = graph.positive_count
    pos = [v for v in bubble.vertices if v < P]
    neg = [v - P for v in bubble.vertices if v >= P]
    pmap = {v: i for i, v in enumerate(pos)}
    nmap = {w: i for i, w in enumerate(neg)}
    cmap = {c: i for i, c in enumerate(bubble.colors)}
    edges = tuple((pmap[p], nmap[n], cmap[c])
                  for p, n, c in (graph.edges[k] for k in bubble.edges))
    return ColoredGraph(len(bubble.colors) - 1, len(pos), len(neg), edges)


# -- dual complex ---------------------------------------------------------------


@dataclass
class DualComplex:
    """An abstract simplicial (pseudo)complex with explicit face incidence.

    ``simplices`` maps a simplex key to its vertex set, ``dims`` to its
    dimension and ``faces`` to the keys of its codimension-one faces.  The
    complex built from a graph indexes simplices by bubbles, so two simplices
    may share a vertex set (the supermelon's two facets do).
    """

    dimension: int
    vertices: tuple
    simplices: dict
    dims: dict
    faces: dict
    colors: dict = field(default_factory=dict)

    @classmethod
    def from_facets(cls, dimension, facets):
        """Ordinary simplicial complex generated by ``facets`` (vertex tuples)."""
        simplices, dims, faces = {}, {}, {}
        stack = [frozenset(f) for f in facets]
        while stack:
            s = stack.pop()
            if s in simplices:
                continue
            simplices[s] = s
            dims[s] = len(s) - 1
            sub = [s - {x} for x in s] if len(s) > 1 else []
            faces[s] = tuple(sub)
            stack.extend(sub)
        vertices = tuple(sorted({x for f in facets for x in f}))
        return cls(dimension, vertices, simplices, dims, faces)

    def of_dim(self, k):
        return [key for key, d in self.dims.items() if d == k]

    def f_vector(self):
        return [len(self.of_dim(k)) for k in range(self.dimension + 1)]

    def cofaces(self):
        up = {key: [] for key in self.simplices}
        for key, fs in self.faces.items():
            for f in fs:
                up.setdefault(f, []).append(key)
        return up

    def is_downward_closed(self):
        """Every codimension-one face exists and drops exactly one vertex."""
        for key, verts in self.simplices.items():
            fs = self.faces.get(key, ())
            if self.dims[key] > 0 and len(fs) != len(verts):
                return False
            dropped = set()
            for f in fs:
                if f not in self.simplices:
                    return False
                fv = self.simplices[f]
                if not fv < verts or len(verts - fv) != 1:
                    return False
                dropped |= verts - fv
            if self.dims[key] > 0 and dropped != set(verts):
                return False
        return True

    def to_dict(self):
        """Facet list plus ridge adjacency, with vertices numbered densely."""
        number = {v: i for i, v in enumerate(self.vertices)}
        facets = self.of_dim(self.dimension)
        fnum = {f: i for i, f in enumerate(facets)}
        up = self.cofaces()
        ridges = []
        for r in self.of_dim(self.dimension - 1):
            ridges.append({
                "vertices": sorted(number[v] for v in self.simplices[r]),
                "facets": sorted(fnum[f] for f in up.get(r, ()) if f in fnum),
            })
        return {
            "dimension": self.dimension,
            "vertices": [list(v) if isinstance(v, tuple) else v for v in self.vertices],
            "facets": [sorted(number[v] for v in self.simplices[f]) for f in facets],
            "ridges": ridges,
        }


def dual_complex(graph: ColoredGraph) -> DualComplex:
    """Complex whose vertices are the D-bubbles of a closed graph.

    Each ``(D+1-d)``-bubble of species ``S`` indexes a ``(d-1)``-simplex whose
    vertices are the D-bubbles of species ``hat(i)``, ``i`` not in ``S``, that
    contain it.
    """
    D = graph.dimension
    labels = {s: component_labels(graph, s) for d in range(D + 2) for s in species(D, d)}
    dbub = {i: labels[hat(D, i)] for i in range(D + 1)}
    simplices, dims, faces, colors = {}, {}, {}, {}
    for size in range(D + 1):
        for s in species(D, size):
            lab = labels[s]
            missing = hat(D, *s) if s else tuple(range(D + 1))
            first = {}
            for v, b in enumerate(lab):
                first.setdefault(int(b), v)
            for b, v in first.items():
                key = (s, b)
                simplices[key] = frozenset((hat(D, i), int(dbub[i][v])) for i in missing)
                dims[key] = len(missing) - 1
                colors[key] = missing
                if len(missing) > 1:
                    faces[key] = tuple((tuple(sorted(s + (i,))), int(labels[tuple(sorted(s + (i,)))][v]))
                                       for i in missing)
                else:
                    faces[key] = ()
    vertices = tuple((hat(D, i), b) for i in range(D + 1)
                     for b in range(int(dbub[i].max()) + 1))
    return DualComplex(D, vertices, simplices, dims, faces, colors)


@dataclass
class PseudomanifoldReport:
    pure: bool
    non_branching: bool
    strongly_connected: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.pure and self.non_branching and self.strongly_connected


def check_pseudomanifold(cx: DualComplex) -> PseudomanifoldReport:
    D = cx.dimension
    up = cx.cofaces()
    witnesses = {}

    # pure: everything lies below some D-simplex
    below = set()
    stack = list(cx.of_dim(D))
    while stack:
        s = stack.pop()
        if s in below:
            continue
        below.add(s)
        stack.extend(cx.faces.get(s, ()))
    stray = [s for s in cx.simplices if s not in below]
    if stray:
        witnesses["pure"] = stray[:5]

    facets = cx.of_dim(D)
    bad = [r for r in cx.of_dim(D - 1) if len(up.get(r, ())) > 2]
    if bad:
        witnesses["non_branching"] = [(r, len(up[r])) for r in bad[:5]]

    adj = {f: set() for f in facets}
    for r in cx.of_dim(D - 1):
        fs = up.get(r, ())
        for a in fs:
            for b in fs:
                if a != b:
                    adj[a].add(b)
    connected = True
    if facets:
        seen = {facets[0]}
        queue = deque([facets[0]])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        if len(seen) != len(facets):
            connected = False
            witnesses["strongly_connected"] = [f for f in facets if f not in seen][:5]
    return PseudomanifoldReport(not stray, not bad, connected, witnesses)
