"""Colored homology over the integers and a presentation of the fundamental group.

The chain group in degree ``d`` is free on the d-bubbles.  For ``d >= 2`` the
boundary of a bubble of species ``i_1 < ... < i_d`` is the alternating sum,
over ``q``, of the ``(d-1)``-bubbles of species ``i_1..^i_q..i_d`` that it
contains, each distinct component counted once.  Edges map to ``v - vbar`` and
vertices to zero.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .bubbles import component_labels, species
from .graph import ColoredGraph, require_closed


def chain_basis(graph: ColoredGraph, d: int):
    """Ordered basis of degree ``d``: species lexicographically, then component."""
    basis = []
    for s in species(graph.dimension, d):
        k = int(component_labels(graph, s).max()) + 1 if graph.vertex_count else 0
        basis.extend((s, b) for b in range(k))
    return basis


def boundary_matrix(graph: ColoredGraph, d: int) -> np.ndarray:
    """Integer matrix of the boundary map, rows in degree ``d-1``."""
    require_closed(graph, "colored homology")
    D = graph.dimension
    if not 0 <= d <= D:
        raise ValueError(f"degree {d} outside 0..{D}")
    cols = chain_basis(graph, d)
    if d == 0:
        return np.zeros((0, len(cols)), dtype=np.int64)
    rows = chain_basis(graph, d - 1)
    row_of = {key: r for r, key in enumerate(rows)}
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    if d == 1:
        P = graph.positive_count
        for j, (s, b) in enumerate(cols):
            # an edge maps to its positive end minus its negative end
            for v in np.flatnonzero(component_labels(graph, s) == b):
                M[row_of[((), int(v))], j] += 1 if v < P else -1
        return M
    labels = {s: component_labels(graph, s) for s in species(D, d)}
    sub = {s: component_labels(graph, s) for s in species(D, d - 1)}
    for j, (s, b) in enumerate(cols):
        members = np.flatnonzero(labels[s] == b)
        for q in range(d):
            face = s[:q] + s[q + 1:]
            sign = 1 if q % 2 == 0 else -1
            for kappa in np.unique(sub[face][members]):
                M[row_of[(face, int(kappa))], j] += sign
    return M


def smith_normal_form(matrix):
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    Plain elimination over Python integers, always pivoting on the entry of
    smallest magnitude.
    """
    A = [[int(x) for x in row] for row in np.asarray(matrix, dtype=object).tolist()]
    m = len(A)
    n = len(A[0]) if m else 0
    factors = []
    for t in range(min(m, n)):
        best = min(((abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]),
                   default=None)
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            pivot = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // pivot
                if q:
                    At, Ai = A[t], A[i]
                    for j in range(t, n):
                        Ai[j] -= q * At[j]
            for j in range(t + 1, n):
                q = A[t][j] // pivot
                if q:
                    for row in A[t:]:
                        row[j] -= q * row[t]
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                # a remainder smaller than the pivot: move it into place
                _, i, j = min(rest)
                if j == t:
                    A[t], A[i] = A[i], A[t]
                else:
                    for row in A:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % pivot), None)
            if bad is None:
                break
            At, Ab = A[t], A[bad]
            for j in range(t, n):
                At[j] += Ab[j]
        factors.append(abs(A[t][t]))
    return factors


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = [f"Z^{self.betti}"] if self.betti else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def homology(graph: ColoredGraph) -> list[HomologyGroup]:
    D = graph.dimension
    sizes = [len(chain_basis(graph, d)) for d in range(D + 1)]
    snf = [smith_normal_form(boundary_matrix(graph, d)) if d >= 1 else [] for d in range(D + 1)]
    snf.append([])
    groups = []
    for d in range(D + 1):
        rank_d = len(snf[d])
        higher = snf[d + 1]
        betti = sizes[d] - rank_d - len(higher)
        groups.append(HomologyGroup(d, betti, tuple(f for f in higher if f > 1)))
    return groups


def euler_characteristic(graph: ColoredGraph) -> int:
    return sum((-1) ** d * len(chain_basis(graph, d)) for d in range(graph.dimension + 1))


# -- fundamental group ------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Generators are edges (as ``(p, n, c)``) off a spanning tree; each
    relator is a cyclic word of ``(generator, exponent)`` pairs."""

    generators: tuple
    relators: tuple
    tree: tuple

    def relation_matrix(self):
        M = np.zeros((len(self.relators), len(self.generators)), dtype=np.int64)
        for r, word in enumerate(self.relators):
            for g, e in word:
                M[r, g] += e
        return M

    def abelianization(self):
        """``(free rank, torsion factors)`` of the abelianized group."""
        if not self.relators:
            return len(self.generators), ()
        factors = smith_normal_form(self.relation_matrix())
        return len(self.generators) - len(factors), tuple(f for f in factors if f > 1)


def spanning_tree(graph: ColoredGraph):
    """Breadth-first tree from positive vertex 0, edges taken in canonical order."""
    P = graph.positive_count
    adj = [[] for _ in range(graph.vertex_count)]
    for k, (p, n, _) in enumerate(graph.edges):
        adj[p].append((k, P + n))
        adj[P + n].append((k, p))
    seen = {0}
    tree = []
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for k, w in adj[u]:
            if w not in seen:
                seen.add(w)
                tree.append(k)
                queue.append(w)
    return sorted(tree)


def fundamental_group_presentation(graph: ColoredGraph) -> Presentation:
    """Generators: edges off a spanning tree.  Relators: one per face.

    A face of colors ``i < j`` is read from its smallest vertex (always
    positive), leaving along color ``i``; an edge crossed from its positive to
    its negative end contributes exponent +1, the other way -1.
    """
    require_closed(graph, "the fundamental group presentation")
    D = graph.dimension
    P = graph.positive_count
    nb = graph.neighbors
    tree = set(spanning_tree(graph))
    gens = [k for k in range(len(graph.edges)) if k not in tree]
    gen_of = {k: g for g, k in enumerate(gens)}
    eidx = graph.edge_index
    relators = []
    if D >= 2:
        for i, j in species(D, 2):
            labels = component_labels(graph, (i, j))
            starts = {}
            for v, b in enumerate(labels):
                starts.setdefault(int(b), v)
            for b, start in sorted(starts.items()):
                word = []
                u, c = start, i
                while True:
                    k = eidx[(u, c)]
                    w = int(nb[u, c])
                    if k in gen_of:
                        word.append((gen_of[k], 1 if u < P else -1))
                    u = w
                    c = j if c == i else i
                    if u == start and c == i:
                        break
                relators.append(tuple(word))
    return Presentation(tuple(graph.edges[k] for k in gens), tuple(relators),
                        tuple(graph.edges[k] for k in sorted(tree)))
