"""Lie algebra of marked colored graphs.

Here a "D-colored graph" is a closed :class:`ColoredGraph` whose dimension
is ``D - 1``, so its colors are ``0..D-1``.  A marked graph also carries one
distinguished negative vertex.  Star contraction glues two graphs by deleting
a positive vertex of one and a negative vertex of the other and reconnecting
the loose half-edges color by color.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .bubbles import Bubble, bubble_subgraph
from .canon import canonical_form
from .dipoles import is_melonic
from .graph import ColoredGraph, from_permutations, require_valid, serialize


@dataclass(frozen=True)
class MarkedGraph:
    graph: ColoredGraph
    mark: int  # index of a negative vertex

    def __post_init__(self):
        if not 0 <= self.mark < self.graph.negative_count:
            raise ValueError(f"mark {self.mark} is not a negative vertex")

    @property
    def colors(self):
        return self.graph.dimension + 1

    def key(self):
        return canonical_form(self.graph, self.graph.positive_count + self.mark)[0]

    def canonical(self) -> "MarkedGraph":
        key, _, _ = canonical_form(self.graph, self.graph.positive_count + self.mark)
        D, kind, P, N, edges, _, marked = key
        return MarkedGraph(ColoredGraph(D, P, N, edges, kind), -1 - marked)

    def to_document(self):
        return {"graph": serialize(self.graph), "mark": self.mark}


def marked_bubble(graph: ColoredGraph, bubble: Bubble, mark_vid: int) -> MarkedGraph:
    """View a bubble of a larger graph as a marked graph (colors renumbered)."""
    if mark_vid not in bubble.vertices or mark_vid < graph.positive_count:
        raise ValueError("mark must be a negative vertex of the bubble")
    sub = bubble_subgraph(graph, bubble)
    negatives = [v for v in bubble.vertices if v >= graph.positive_count]
    return MarkedGraph(sub, negatives.index(mark_vid))


def star_contract(b1: ColoredGraph, v1: int, b2: ColoredGraph, w2: int) -> ColoredGraph:
    """Delete positive ``v1`` of ``b1`` and negative ``w2`` of ``b2`` and join
    their neighbors color by color.

    Negatives of the result: those of ``b1``, then those of ``b2`` except
    ``w2``.  Positives: those of ``b1`` except ``v1``, then those of ``b2``.
    """
    if b1.dimension != b2.dimension:
        raise ValueError(f"dimension mismatch: {b1.dimension} vs {b2.dimension}")
    P1, N1 = b1.positive_count, b1.negative_count
    P2 = b2.positive_count
    nb1, nb2 = b1.neighbors, b2.neighbors

    def pos1(p):
        return p - (p > v1)

    def pos2(p):
        return P1 - 1 + p

    def neg2(n):
        return N1 + n - (n > w2)

    edges = [(pos1(p), n, c) for p, n, c in b1.edges if p != v1]
    edges += [(pos2(p), neg2(n), c) for p, n, c in b2.edges if n != w2]
    for c in b1.colors:
        xbar = int(nb1[v1, c]) - P1
        y = int(nb2[P2 + w2, c])
        edges.append((pos2(y), xbar, c))
    return ColoredGraph(b1.dimension, P1 + P2 - 1, N1 + b2.negative_count - 1, tuple(edges))


class GraphChain:
    """Finite rational combination of marked graphs up to isomorphism."""

    def __init__(self, terms=None):
        self.coeffs: dict = {}
        self.reps: dict = {}
        for mg, c in (terms or []):
            self.add_term(mg, c)

    @classmethod
    def of(cls, mg: MarkedGraph, coeff=1):
        return cls([(mg, coeff)])

    def add_term(self, mg: MarkedGraph, coeff):
        coeff = Fraction(coeff)
        if not coeff:
            return
        k = mg.key()
        total = self.coeffs.get(k, Fraction(0)) + coeff
        if total:
            self.coeffs[k] = total
            self.reps.setdefault(k, mg)
        else:
            self.coeffs.pop(k, None)
            self.reps.pop(k, None)

    def items(self):
        for k in sorted(self.coeffs, key=repr):
            yield self.reps[k], self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, GraphChain) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = GraphChain(self.items())
        for mg, c in other.items():
            out.add_term(mg, c)
        return out

    def __neg__(self):
        return GraphChain((mg, -c) for mg, c in self.items())

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        return GraphChain((mg, Fraction(scalar) * c) for mg, c in self.items())

    def to_list(self):
        return [{"graph": serialize(mg.canonical().graph), "mark": mg.canonical().mark,
                 "coefficient": str(c)} for mg, c in self.items()]


def _bracket_basis(l1: MarkedGraph, l2: MarkedGraph) -> GraphChain:
    out = GraphChain()
    b1, b2 = l1.graph, l2.graph
    for v in range(b1.positive_count):
        out.add_term(MarkedGraph(star_contract(b1, v, b2, l2.mark), l1.mark), 1)
    for v in range(b2.positive_count):
        out.add_term(MarkedGraph(star_contract(b2, v, b1, l1.mark), l2.mark), -1)
    return out


def bracket(x, y) -> GraphChain:
    """Bilinear bracket of marked graphs or chains."""
    xs = x.items() if isinstance(x, GraphChain) else [(x, Fraction(1))]
    ys = list(y.items()) if isinstance(y, GraphChain) else [(y, Fraction(1))]
    out = GraphChain()
    for a, ca in xs:
        for b, cb in ys:
            for mg, c in _bracket_basis(a, b).items():
                out.add_term(mg, ca * cb * c)
    return out


def jacobiator(a, b, c) -> GraphChain:
    return bracket(bracket(a, b), c) + bracket(bracket(b, c), a) + bracket(bracket(c, a), b)


def is_melonic_closed(chain: GraphChain) -> bool:
    return all(bool(is_melonic(mg.graph)) for mg, _ in chain.items())


def marked_graphs(colors: int, positives: int, melonic_only=False):
    """Every connected marked graph with ``colors`` colors and ``2*positives``
    vertices, one per isomorphism class."""
    seen = {}
    perms = list(permutations(range(positives)))
    for choice in product(perms, repeat=colors - 1):
        g = from_permutations([tuple(range(positives))] + list(choice), colors - 1)
        if not g.is_connected():
            continue
        if melonic_only and not is_melonic(g):
            continue
        for m in range(positives):
            mg = MarkedGraph(g, m)
            seen.setdefault(mg.key(), mg)
    return list(seen.values())


def check_marked(mg: MarkedGraph) -> MarkedGraph:
    require_valid(mg.graph)
    return mg
