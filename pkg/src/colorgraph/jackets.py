"""Jackets, their genera and the degree of a closed graph.

A jacket is fixed by a cyclic order of the colors, up to reversal; it keeps
the faces whose two colors are adjacent in that order and is a closed
orientable surface.  The degree is the sum of the jacket genera.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

import numpy as np

from .bubbles import bubble_subgraph, enumerate_bubbles, hat
from .graph import ColoredGraph


def jacket_cycles(D: int):
    """Color cycles starting at 0, one per reversal class (first < last)."""
    if D < 2:
        return []
    out = []
    for rest in permutations(range(1, D + 1)):
        if rest[0] < rest[-1]:
            out.append((0,) + rest)
    return out


def face_count(graph: ColoredGraph, i: int, j: int) -> int:
    """Number of bicolored cycles of colors ``i`` and ``j``.

    Cycles of the permutation taking a positive vertex along ``i`` then back
    along ``j``.
    """
    P = graph.positive_count
    nb = graph.neighbors
    step = nb[nb[:P, i], j]
    seen = np.zeros(P, dtype=bool)
    count = 0
    for v in range(P):
        if seen[v]:
            continue
        count += 1
        while not seen[v]:
            seen[v] = True
            v = step[v]
    return count


def cycle_pairs(cycle):
    n = len(cycle)
    return [(cycle[q], cycle[(q + 1) % n]) for q in range(n)]


@dataclass(frozen=True)
class Jacket:
    cycle: tuple[int, ...]
    vertices: int
    edges: int
    faces: int

    @property
    def genus(self) -> int:
        twice = 2 - self.faces + self.edges - self.vertices
        if twice % 2 or twice < 0:
            raise AssertionError(f"non-integral or negative genus for jacket {self.cycle}")
        return twice // 2

    @property
    def face_pairs(self):
        return [tuple(sorted(pair)) for pair in cycle_pairs(self.cycle)]


def jacket(graph: ColoredGraph, cycle) -> Jacket:
    cycle = tuple(cycle)
    faces = sum(face_count(graph, a, b) for a, b in cycle_pairs(cycle))
    return Jacket(cycle, graph.vertex_count, len(graph.edges), faces)


def enumerate_jackets(graph: ColoredGraph) -> list[Jacket]:
    return [jacket(graph, c) for c in jacket_cycles(graph.dimension)]


def genus(j: Jacket) -> int:
    return j.genus


def degree(graph: ColoredGraph) -> int:
    if graph.dimension < 2:
        return 0
    return sum(j.genus for j in enumerate_jackets(graph))


@dataclass(frozen=True)
class BubbleJacket:
    color: int
    bubble: int
    cycle: tuple[int, ...]
    genus: int


def bubble_jackets(graph: ColoredGraph, jk: Jacket, color: int) -> list[BubbleJacket]:
    """Delete ``color`` from the jacket's cycle and apply the shorter cycle
    to each bubble avoiding ``color``."""
    reduced = tuple(c for c in jk.cycle if c != color)
    out = []
    for b in enumerate_bubbles(graph, hat(graph.dimension, color)):
        sub = bubble_subgraph(graph, b)
        local = tuple(b.colors.index(c) for c in reduced)
        g = jacket(sub, local).genus if len(local) > 2 else 0
        out.append(BubbleJacket(color, b.index, reduced, g))
    return out


def canonical_cycle(cycle):
    """Least representative of a color cycle over rotation and reversal."""
    cycle = tuple(cycle)
    n = len(cycle)
    variants = []
    for seq in (cycle, cycle[::-1]):
        for r in range(n):
            variants.append(seq[r:] + seq[:r])
    return min(variants)


# -- identities -----------------------------------------------------------------


def bubble_degree_sum(graph: ColoredGraph, colors=None) -> int:
    """Sum of degrees of the D-bubbles, over all colors or the given ones."""
    D = graph.dimension
    colors = range(D + 1) if colors is None else colors
    return sum(degree(bubble_subgraph(graph, b))
               for i in colors for b in enumerate_bubbles(graph, hat(D, i)))


def d_bubble_count(graph: ColoredGraph) -> int:
    D = graph.dimension
    return len([b for i in range(D + 1) for b in enumerate_bubbles(graph, hat(D, i))])


def bubble_identity_residual(graph: ColoredGraph) -> Fraction:
    """``omega - [(D-1)!/2 (p + D - B) + sum of bubble degrees]``; zero always."""
    D = graph.dimension
    rhs = Fraction(factorial(D - 1), 2) * (graph.order + D - d_bubble_count(graph))
    return degree(graph) - rhs - bubble_degree_sum(graph)


def contraction_shift(D: int, k: int) -> Fraction:
    """Change of the degree under a k-dipole contraction."""
    return Fraction(factorial(D - 1), 2) * ((D + 1) * k - k * k - D)


def contraction_residual(before: ColoredGraph, after: ColoredGraph, k: int) -> Fraction:
    return degree(before) - contraction_shift(before.dimension, k) - degree(after)


def bubble_inequality_slack(graph: ColoredGraph) -> int:
    """``omega - D * sum of degrees of the bubbles avoiding color D``; never negative."""
    D = graph.dimension
    return degree(graph) - D * bubble_degree_sum(graph, [D])
