"""Rooted melonic graphs through colored (D+1)-ary trees.

A tree node is an elementary melon.  Node ``v`` has a color ``c_v`` and D+1
child slots; the child sitting in slot ``s`` has color ``s``.  The root has
color 0.  Nodes are stored in preorder (slots visited 0..D).

In the graph, node ``v`` owns the positive vertex ``A_v = v`` and the negative
vertex ``B_v = v``.  The rooted graph has two boundary vertices: ``I`` is the
negative vertex ``p`` and ``O`` the positive vertex ``p``, joined through the
color-0 cut recorded as ``(p, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .dipoles import melon_removal
from .jackets import degree
from .graph import OPEN, ColoredGraph, GraphFormatError, close


@dataclass(frozen=True, eq=False)
class MelonTree:
    dimension: int
    colors: np.ndarray
    parent: np.ndarray
    children: np.ndarray

    @property
    def size(self):
        return len(self.colors)

    def key(self):
        """Hashable description, equal for equal trees."""
        return (self.dimension, self.children.tobytes())

    def __eq__(self, other):
        return (isinstance(other, MelonTree) and self.dimension == other.dimension
                and np.array_equal(self.children, other.children))

    def __hash__(self):
        return hash(self.key())

    def check(self):
        D, p = self.dimension, self.size
        assert self.children.shape == (p, D + 1)
        if p:
            assert self.colors[0] == 0 and self.parent[0] == -1
        for v in range(p):
            for s, u in enumerate(self.children[v]):
                if u >= 0:
                    assert self.parent[u] == v and self.colors[u] == s and u > v


def tree_from_children(D: int, slots) -> MelonTree:
    """Build from a nested description: ``None`` for a leaf, else a list of
    D+1 slots.  The outermost value describes the root."""
    colors, parent, children = [], [], []

    def visit(node, color, par):
        v = len(colors)
        colors.append(color)
        parent.append(par)
        children.append([-1] * (D + 1))
        for s, sub in enumerate(node):
            if sub is not None:
                children[v][s] = visit(sub, s, v)
        return v

    if slots is not None:
        visit(slots, 0, -1)
    return _pack(D, colors, parent, children)


def _pack(D, colors, parent, children):
    return MelonTree(D, np.asarray(colors, dtype=np.int64),
                     np.asarray(parent, dtype=np.int64),
                     np.asarray(children, dtype=np.int64).reshape(len(colors), D + 1))


def tree_from_lukasiewicz(D: int, internal) -> MelonTree:
    """Tree whose preorder node sequence (internal=True, leaf=False) is given."""
    colors, parent, children = [], [], []
    stack = []  # [node, next slot]
    it = iter(internal)
    first = next(it)
    if not first:
        return _pack(D, [], [], [])
    colors.append(0)
    parent.append(-1)
    children.append([-1] * (D + 1))
    stack.append([0, 0])
    for flag in it:
        top = stack[-1]
        v, s = top
        top[1] += 1
        if flag:
            u = len(colors)
            colors.append(s)
            parent.append(v)
            children.append([-1] * (D + 1))
            children[v][s] = u
            stack.append([u, 0])
        while stack and stack[-1][1] == D + 1:
            stack.pop()
    if stack:
        raise ValueError("sequence is not a Lukasiewicz word")
    return _pack(D, colors, parent, children)


def sample_uniform(D: int, p: int, seed=None) -> MelonTree:
    """Uniform tree with ``p`` nodes, by the cycle lemma.

    Place ``p`` node markers uniformly among ``(D+1)p+1`` positions, then
    rotate to start right after the first minimum of the walk (+D per node,
    -1 per leaf); exactly one rotation gives a valid preorder code.
    """
    rng = np.random.default_rng(seed)
    n = (D + 1) * p + 1
    flags = np.zeros(n, dtype=bool)
    flags[rng.choice(n, size=p, replace=False)] = True
    steps = np.where(flags, D, -1)
    walk = np.cumsum(steps)
    shift = (int(np.argmin(walk)) + 1) % n
    flags = np.roll(flags, -shift)
    return tree_from_lukasiewicz(D, flags.tolist())


def all_trees(D: int, p: int):
    """Every tree with ``p`` nodes, as nested slot lists."""

    @lru_cache(maxsize=None)
    def forests(k, m):
        # ordered k-tuples of subtrees with m nodes in total
        if k == 0:
            return [()] if m == 0 else []
        out = []
        for first in range(m + 1):
            for head in shapes(first):
                for tail in forests(k - 1, m - first):
                    out.append((head,) + tail)
        return out

    @lru_cache(maxsize=None)
    def shapes(m):
        if m == 0:
            return [None]
        return [list(slots) for slots in forests(D + 1, m - 1)]

    return [tree_from_children(D, s) for s in shapes(p)] if p else [tree_from_children(D, None)]


# -- counting ---------------------------------------------------------------------


def count_melonic(D: int, p: int) -> int:
    """Fuss-Catalan number ``binom((D+1)p+1, p) / ((D+1)p+1)``."""
    n = (D + 1) * p + 1
    return comb(n, p) // n


def count_table(D: int, p_max: int) -> list[int]:
    """Counts from the functional equation ``G = 1 + z G^(D+1)`` by series powers."""
    G = [1] + [0] * p_max
    for p in range(1, p_max + 1):
        # coefficient of z^(p-1) in G^(D+1) uses only G_0..G_(p-1)
        power = [1] + [0] * (p - 1)
        for _ in range(D + 1):
            power = [sum(power[a] * G[k - a] for a in range(k + 1)) for k in range(p)]
        G[p] = power[p - 1]
    return G


# -- trees to graphs ---------------------------------------------------------------


def tree_to_graph(tree: MelonTree) -> ColoredGraph:
    D, p = tree.dimension, tree.size
    I, O = p, p
    edges = []
    outer = np.empty(p, dtype=np.int64)  # positive vertex at the far end of the outer slot
    for v in range(p):  # preorder: parents come first
        c = int(tree.colors[v])
        par = int(tree.parent[v])
        edges.append((v, par if par >= 0 else I, c))
        if par < 0:
            outer[v] = O
        elif c == tree.colors[par]:
            outer[v] = outer[par]
        else:
            outer[v] = par
        for s in range(D + 1):
            if tree.children[v, s] < 0:
                far = int(outer[v]) if s == c else v
                edges.append((far, v, s))
    return ColoredGraph(D, p + 1, p + 1, tuple(edges), OPEN, ((O, I),))


def graph_to_tree(graph: ColoredGraph) -> MelonTree:
    """Inverse of :func:`tree_to_graph` up to relabeling of the graph."""
    if graph.kind != OPEN or len(graph.cuts) != 1:
        raise GraphFormatError("expected a rooted graph with exactly one cut")
    D = graph.dimension
    P = graph.positive_count
    O, I = graph.cuts[0]
    check = melon_removal(graph)
    if not check:
        raise GraphFormatError(f"graph is not melonic (degree {degree(close(graph))})")
    nb = graph.neighbors
    owner_of_b = {}
    nodes = {}
    for a, b, i in check.removals:
        nodes[a] = (b, i)
        owner_of_b[b] = a
    slot_children = {a: [None] * (D + 1) for a in nodes}
    root = None
    for a, (b, i) in nodes.items():
        up = int(nb[a, i]) - P
        if up == I:
            root = a
        else:
            slot_children[owner_of_b[up]][i] = a
    if root is None or nodes[root][1] != 0:
        raise GraphFormatError("rooted graph does not start with a color-0 melon")

    def nest(a):
        return [None if u is None else nest(u) for u in slot_children[a]]

    return tree_from_children(D, nest(root))


# -- words and depths ---------------------------------------------------------------


def word_of(tree: MelonTree, v: int) -> tuple[int, ...]:
    """Colors along the branch from the root to ``v``, led by the root's 0."""
    letters = []
    while v > 0:
        letters.append(int(tree.colors[v]))
        v = int(tree.parent[v])
    return (0,) + tuple(reversed(letters))


def tree_depth(word) -> int:
    """Number of letters of the word, the leading 0 included."""
    _check_word(word)
    return len(word)


def _check_word(word):
    if not word or word[0] != 0:
        raise ValueError(f"malformed word {word!r}: must start with 0")


def depth(word, D: int, base=None) -> int:
    """Metric depth: number of nonempty subwords after the leading letter.

    The first subword is the longest prefix avoiding the leading letter; each
    later subword ends just before the letter that would make it contain all
    D+1 colors.  ``base`` overrides the leading letter for suffixes that hang
    below a node of another color.
    """
    if base is None:
        _check_word(word)
        base = word[0]
    full = (1 << (D + 1)) - 1
    k = 0
    in_first = True
    seen = 0
    for u in word[1:]:
        bit = 1 << u
        if in_first:
            if u != base:
                if k == 0:
                    k = 1
                continue
            in_first = False
            k += 1
            seen = bit
            continue
        if seen | bit == full:
            k += 1
            seen = bit
        else:
            seen |= bit
    return k


def lambda_delta(D: int) -> Fraction:
    inverse = (D + 1) * sum(Fraction((-1) ** (D - r) * comb(D, r) * r, (D + 1 - r) ** 2)
                            for r in range(D + 1))
    return 1 / inverse


def common_ancestor(tree: MelonTree, a: int, b: int) -> int:
    seen = set()
    x = a
    while x >= 0:
        seen.add(x)
        x = int(tree.parent[x])
    while b not in seen:
        b = int(tree.parent[b])
    return b


def pair_distance_estimate(tree: MelonTree, v1: int, v2: int) -> int:
    """``Lambda(w1) + Lambda(w2)`` for the branches below the latest common
    ancestor; the graph distance lies within 6 of it."""
    D = tree.dimension
    anc = common_ancestor(tree, v1, v2)
    base = int(tree.colors[anc])
    total = 0
    for v in (v1, v2):
        suffix = word_of(tree, v)[len(word_of(tree, anc)):]
        total += depth((base,) + suffix, D, base=base)
    return total


# -- contour walk -----------------------------------------------------------------


def contour_walk(tree: MelonTree) -> np.ndarray:
    """Heights along the perimeter of the leafless tree hung from a base vertex.

    The walk has ``2p`` unit steps; an elementary node at tree depth ``k``
    (root node: ``k = 0``) sits at height ``k + 1``.
    """
    p = tree.size
    f = [0]
    stack = [(0, 0)] if p else []
    # iterative DFS emitting heights on entry and on every return
    while stack:
        v, s = stack.pop()
        if s == 0:
            f.append(len(stack) + 1)
        kids = tree.children[v]
        while s <= tree.dimension and kids[s] < 0:
            s += 1
        if s <= tree.dimension:
            stack.append((v, s + 1))
            stack.append((int(kids[s]), 0))
        else:
            f.append(len(stack))
    return np.asarray(f, dtype=np.int64)


def contour_nodes(tree: MelonTree) -> np.ndarray:
    """Node visited at each time of :func:`contour_walk` (``-1`` for the base)."""
    p = tree.size
    out = [-1]
    stack = [(0, 0)] if p else []
    while stack:
        v, s = stack.pop()
        if s == 0:
            out.append(v)
        kids = tree.children[v]
        while s <= tree.dimension and kids[s] < 0:
            s += 1
        if s <= tree.dimension:
            stack.append((v, s + 1))
            stack.append((int(kids[s]), 0))
        else:
            out.append(stack[-1][0] if stack else -1)
    return np.asarray(out, dtype=np.int64)


def walk_distance(f, s: int, t: int) -> int:
    lo, hi = min(s, t), max(s, t)
    return int(f[s] + f[t] - 2 * np.min(f[lo:hi + 1]))
