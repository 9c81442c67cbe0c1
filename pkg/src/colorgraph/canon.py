"""Canonical labels for colored graphs, optionally with a marked vertex.

Every vertex has at most one edge of each color, so once a single vertex is
pinned the rest of an isomorphism is forced: a breadth-first search that
visits colors in order assigns the same labels to corresponding vertices.
The canonical form is the lexicographically least relabeled edge list over
all admissible starting vertices.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .graph import ColoredGraph


def _bfs_labels(graph: ColoredGraph, start: int):
    P = graph.positive_count
    nb = graph.neighbors
    pos = {}
    neg = {}
    order = deque([start])
    (pos if start < P else neg)[start] = 0
    while order:
        u = order.popleft()
        for w in nb[u]:
            w = int(w)
            if w < 0:
                continue
            table = pos if w < P else neg
            if w not in table:
                table[w] = len(table)
                order.append(w)
    return pos, neg


def _relabeled(graph, start):
    P = graph.positive_count
    pos, neg = _bfs_labels(graph, start)
    if len(pos) + len(neg) != graph.vertex_count:
        raise ValueError("canonical labels need a connected graph")
    edges = tuple(sorted((pos[p], neg[P + n], c) for p, n, c in graph.edges))
    cuts = tuple(sorted((pos[a], neg[P + b]) for a, b in graph.cuts))
    return edges, cuts, pos, neg


def _invariant(graph):
    """Which colors are present at each vertex; shortlists starting vertices."""
    nb = graph.neighbors
    present = nb >= 0
    return [tuple(present[v]) for v in range(graph.vertex_count)]


def canonical_form(graph: ColoredGraph, mark=None):
    """Return ``(key, positive_map, negative_map)``.

    ``key`` is hashable and equal for two graphs exactly when a color- and
    sign-preserving isomorphism exists (mapping marks onto marks).  The maps
    are lists, old positive (negative) index to new index, ready for
    :func:`relabel`.  ``mark`` is a vid.
    """
    if mark is not None:
        starts = [mark]
    elif graph.kind == "open" and graph.boundary_vertices:
        # rooted open graphs: start from a boundary vertex of least color class
        inv = _invariant(graph)
        bv = [v for v in graph.boundary_vertices if v < graph.positive_count] or list(graph.boundary_vertices)
        best = min(inv[v] for v in bv)
        starts = [v for v in bv if inv[v] == best]
    else:
        starts = range(graph.positive_count) if graph.positive_count else range(graph.vertex_count)
    best = None
    for s in starts:
        edges, cuts, pos, neg = _relabeled(graph, s)
        if best is None or edges < best[0] or (edges == best[0] and cuts < best[1]):
            best = (edges, cuts, pos, neg, s)
    if best is None:
        key = (graph.dimension, graph.kind, 0, 0, (), (), None)
        return key, [], []
    edges, cuts, pos, neg, s = best
    P = graph.positive_count
    marked = None
    if mark is not None:
        marked = pos[mark] if mark < P else -1 - neg[mark]
    key = (graph.dimension, graph.kind, P, graph.negative_count, edges, cuts, marked)
    pos_map = [pos[v] for v in range(P)]
    neg_map = [neg[P + n] for n in range(graph.negative_count)]
    return key, pos_map, neg_map


def canonical_key(graph: ColoredGraph, mark=None):
    return canonical_form(graph, mark)[0]


def canonical_graph(graph: ColoredGraph) -> ColoredGraph:
    key, _, _ = canonical_form(graph)
    D, kind, P, N, edges, cuts, _ = key
    return ColoredGraph(D, P, N, edges, kind, cuts)


def is_isomorphic(a: ColoredGraph, b: ColoredGraph, mark_a=None, mark_b=None) -> bool:
    if (a.dimension, a.positive_count, a.negative_count, len(a.edges)) != \
       (b.dimension, b.positive_count, b.negative_count, len(b.edges)):
        return False
    if not np.array_equal(np.sort(a.degrees), np.sort(b.degrees)):
        return False
    return canonical_key(a, mark_a) == canonical_key(b, mark_b)
