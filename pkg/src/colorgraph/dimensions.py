"""Critical exponents of random melonic graphs.

Three estimates live here: the susceptibility from the exact counting
sequence, the Hausdorff dimension from graph distances on sampled balls, and
the spectral dimension from random-walk return probabilities.  Walks are
handled both by simulation and exactly, through transfer matrices and through
the sub-melon recursion for first-return generating functions.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.optimize import curve_fit
from scipy.sparse.csgraph import shortest_path
from scipy.stats import linregress

from .bubbles import component_labels, hat
from .graph import ColoredGraph
from .melonic import (MelonTree, count_melonic, lambda_delta, pair_distance_estimate,
                      sample_uniform, tree_to_graph)

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction

EXACT_ORDER_LIMIT = 60


@dataclass
class ScalingFit:
    """A fitted scaling exponent with its data, window and diagnostics."""

    x: list
    y: list
    exponent: float
    stderr: float
    intercept: float
    window: tuple
    residuals: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {"x": list(map(float, self.x)), "y": list(map(float, self.y)),
                "exponent": self.exponent, "stderr": self.stderr,
                "intercept": self.intercept, "window": list(self.window),
                "residuals": list(map(float, self.residuals)), **self.extra}


def loglog_fit(x, y, window=None) -> ScalingFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lx, ly = np.log(x), np.log(y)
    res = linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    window = window or (float(x.min()), float(x.max()))
    return ScalingFit(x.tolist(), y.tolist(), float(res.slope), float(res.stderr),
                      float(res.intercept), tuple(window), resid.tolist())


def offset_power_fit(x, y, sigma=None) -> ScalingFit:
    """Fit ``y = A x^a + B``; the additive ``B`` absorbs finite-size offsets."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        raise ValueError("the offset model needs at least 3 points")
    base = loglog_fit(x, y)
    guess = (math.exp(base.intercept), base.exponent, 0.0)
    sig = None if sigma is None or not np.all(np.asarray(sigma) > 0) else np.asarray(sigma)
    popt, pcov = curve_fit(lambda t, a, e, b: a * t ** e + b, x, y, p0=guess,
                           sigma=sig, absolute_sigma=sig is not None, maxfev=20000)
    a, e, b = map(float, popt)
    err = float(np.sqrt(pcov[1, 1]))
    resid = y - (a * x ** e + b)
    fit = ScalingFit(x.tolist(), y.tolist(), e, err, math.log(a) if a > 0 else float("nan"),
                     (float(x.min()), float(x.max())), resid.tolist())
    fit.extra = {"amplitude": a, "offset": b}
    return fit


def _seeds(seed, n):
    return np.random.SeedSequence(seed).spawn(n)


def _map(fn, items, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


# -- susceptibility -----------------------------------------------------------------


def critical_coupling(D: int) -> Fraction:
    return Fraction(D ** D, (D + 1) ** (D + 1))


def stated_prefactor(D: int) -> float:
    """Prefactor of the large-p count asymptotics in its published form."""
    return math.e / math.sqrt(2 * math.pi) * math.sqrt((D + 1) / D ** 3)


def asymptotic_prefactor(D: int) -> float:
    """Prefactor from Stirling's formula applied to the exact count."""
    return math.sqrt((D + 1) / (2 * math.pi * D ** 3))


def log_scaled_count(D: int, p: int) -> float:
    """``log(C_p z_c^p)`` evaluated from the exact integer count."""
    zc = critical_coupling(D)
    return (math.log(count_melonic(D, p)) + p * (math.log(zc.numerator) - math.log(zc.denominator)))


def susceptibility_check(D: int, p_min: int = 500, p_max: int = 1000) -> ScalingFit:
    """Fit ``log(C_p z_c^p)`` against ``log p``; the slope approaches -3/2."""
    ps = np.arange(p_min, p_max + 1)
    logs = np.array([log_scaled_count(D, int(p)) for p in ps])
    fit = loglog_fit(ps, np.exp(logs), (p_min, p_max))
    prefactor = math.exp(logs[-1] + 1.5 * math.log(p_max))
    fit.extra = {
        "gamma": float(2 + fit.exponent),
        "prefactor_at_p_max": prefactor,
        "stated_prefactor": stated_prefactor(D),
        "asymptotic_prefactor": asymptotic_prefactor(D),
        "critical_coupling": float(critical_coupling(D)),
    }
    return fit


def spectral_exponent(d_s, delta, gamma):
    """Exponent of ``(1 - z/z_c)`` in the return generating function's z-derivative."""
    return delta * (d_s / 2 - 1) - gamma


# -- distances on melonic balls -----------------------------------------------------


def ball_graph(graph: ColoredGraph):
    """Vertex-bubble incidence of the internal vertices of a rooted graph.

    Returns ``(adjacency, bubble_offset, labels)``: nodes ``0..n-1`` are the
    graph vertices, the rest are D-bubbles; ``labels[i]`` maps vertices to
    their ``hat(i)`` bubble (offset included).
    """
    D = graph.dimension
    n = graph.vertex_count
    internal = np.flatnonzero(graph.degrees == D + 1)
    labels = []
    offset = n
    rows, cols = [], []
    for i in range(D + 1):
        lab = component_labels(graph, hat(D, i)) + offset
        labels.append(lab)
        rows.append(internal)
        cols.append(lab[internal])
        offset = int(lab.max()) + 1
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    data = np.ones(len(rows), dtype=np.int8)
    adj = sparse.coo_matrix((data, (rows, cols)), shape=(offset, offset)).tocsr()
    return adj + adj.T, n, labels


def node_bubbles(tree: MelonTree, labels) -> np.ndarray:
    """Ball vertex of each tree node: the bubble avoiding its color through ``A_v``."""
    return np.array([labels[int(c)][v] for v, c in enumerate(tree.colors)], dtype=np.int64)


def ball_distances(tree: MelonTree, sources) -> np.ndarray:
    """Graph distances on the ball between tree nodes, one row per source."""
    g = tree_to_graph(tree)
    adj, _, labels = ball_graph(g)
    nodes = node_bubbles(tree, labels)
    dist = shortest_path(adj, method="D", unweighted=True, directed=False,
                         indices=nodes[np.asarray(sources)])
    return (dist[:, nodes] / 2).astype(np.int64)


SOURCES_PER_TREE = 16  # tree shape dominates the variance; a few sources halve the rest


def _hausdorff_sample(args):
    D, p, seed, estimator = args
    rng = np.random.default_rng(seed)
    tree = sample_uniform(D, p, rng)
    src = int(rng.integers(p))
    if estimator == "word":
        others = rng.integers(p, size=min(p, 64))
        return float(np.mean([pair_distance_estimate(tree, src, int(t)) for t in others]))
    srcs = np.concatenate([[src], rng.integers(p, size=min(p, SOURCES_PER_TREE) - 1)])
    return float(ball_distances(tree, srcs).mean())


def hausdorff_estimate(D: int, ps, samples: int, seed: int, estimator="bfs",
                       model="offset", jobs=1) -> ScalingFit:
    """Mean node-to-node distance per sampled tree, fitted as ``p^(1/d_H)``.

    Each sample averages the distance profile of ``SOURCES_PER_TREE`` random
    source nodes.

    ``model="offset"`` fits ``A p^(1/d_H) + B``, ``"power"`` a pure power law;
    both are always reported.  ``estimator="word"`` replaces exact distances
    by the depth-word estimate on 64 random partners per sample.
    """
    ps = [int(p) for p in ps]
    seeds = _seeds(seed, len(ps) * samples)
    tasks = [(D, p, seeds[k * samples + s], estimator)
             for k, p in enumerate(ps) for s in range(samples)]
    values = np.array(_map(_hausdorff_sample, tasks, jobs)).reshape(len(ps), samples)
    means = values.mean(axis=1)
    errs = values.std(axis=1, ddof=1) / math.sqrt(samples) if samples > 1 else np.zeros(len(ps))
    if model == "offset" and len(ps) < 3:
        raise ValueError("the offset model needs at least 3 sizes")
    power = loglog_fit(ps, means)
    shifted = offset_power_fit(ps, means, errs) if len(ps) >= 3 else None
    fit = shifted if model == "offset" else power
    offset = shifted.extra["offset"] if shifted else float("nan")
    lam = float(lambda_delta(D))
    scale = np.array([lam * math.sqrt((D + 1) * p / D) for p in ps])
    fit.extra = {
        "model": model,
        "hausdorff_dimension": 1 / fit.exponent,
        "power_exponent": power.exponent,
        "power_stderr": power.stderr,
        "offset_exponent": shifted.exponent if shifted else float("nan"),
        "offset_stderr": shifted.stderr if shifted else float("nan"),
        "offset": offset,
        "mean_distance": means.tolist(),
        "mean_stderr": errs.tolist(),
        "rescaled_mean": (means / scale).tolist(),
        "rescaled_excess": ((means - offset) / scale).tolist(),
        "samples": samples,
        "estimator": estimator,
    }
    return fit


# -- random walks -------------------------------------------------------------------


def rooted_ends(graph: ColoredGraph):
    """``(I, O)`` as vids of a rooted graph."""
    o, i = graph.cuts[0]
    return graph.positive_count + i, o


def walk_table(graph: ColoredGraph) -> np.ndarray:
    """Neighbor table where a 1-valent vertex repeats its single neighbor."""
    nb = graph.neighbors.copy()
    for v in np.flatnonzero(graph.degrees == 1):
        nb[v, :] = nb[v][nb[v] >= 0][0]
    return nb


def _start(graph, start):
    if start in ("I", "O"):
        I, O = rooted_ends(graph)
        return I if start == "I" else O
    return int(start)


def walk_return_mc(graph: ColoredGraph, start, t_max: int, n_walks: int, seed):
    """Empirical ``P(t)`` of being back at ``start`` and binomial standard errors."""
    rng = np.random.default_rng(seed)
    table = walk_table(graph)
    s = _start(graph, start)
    pos = np.full(n_walks, s, dtype=np.int64)
    hits = np.zeros(t_max + 1, dtype=np.int64)
    hits[0] = n_walks
    k = table.shape[1]
    for t in range(1, t_max + 1):
        pos = table[pos, rng.integers(k, size=n_walks)]
        hits[t] = np.count_nonzero(pos == s)
    p = hits / n_walks
    return p, np.sqrt(p * (1 - p) / n_walks)


def transition_matrix(graph: ColoredGraph):
    """Column-stochastic sparse matrix of the walk."""
    table = walk_table(graph)
    n, k = table.shape
    rows = table.ravel()
    cols = np.repeat(np.arange(n), k)
    data = np.full(n * k, 1.0 / k)
    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def return_probabilities(graph: ColoredGraph, start, t_max: int) -> np.ndarray:
    """Exact (floating point) return probabilities by propagating the distribution."""
    M = transition_matrix(graph)
    s = _start(graph, start)
    x = np.zeros(graph.vertex_count)
    x[s] = 1.0
    out = np.empty(t_max + 1)
    out[0] = 1.0
    for t in range(1, t_max + 1):
        x = M @ x
        out[t] = x[s]
    return out


def transfer_first_passage(graph: ColoredGraph, T: int):
    """Exact first-return/first-transit coefficients by brute-force propagation.

    Returns a 2x2 nested list of coefficient lists (index 0 = I, 1 = O), each
    of length ``T + 1``, with exact rationals.
    """
    table = walk_table(graph)
    k = table.shape[1]
    ends = rooted_ends(graph)
    w = _rational(1, k)
    out = [[[_rational(0)] * (T + 1) for _ in range(2)] for _ in range(2)]
    for a, src in enumerate(ends):
        dist = {src: _rational(1)}
        for t in range(1, T + 1):
            nxt = {}
            for v, q in dist.items():
                if t > 1 and v in ends:
                    continue
                if graph.degrees[v] == 1:
                    u = int(table[v, 0])
                    nxt[u] = nxt.get(u, 0) + q
                else:
                    for u in table[v]:
                        u = int(u)
                        nxt[u] = nxt.get(u, 0) + q * w
            for b, end in enumerate(ends):
                out[a][b][t] = nxt.get(end, _rational(0))
            dist = {v: q for v, q in nxt.items() if v not in ends}
    return out


def transfer_returns(graph: ColoredGraph, T: int):
    """Exact return/transit coefficients between I and O (no absorption)."""
    table = walk_table(graph)
    k = table.shape[1]
    ends = rooted_ends(graph)
    w = _rational(1, k)
    out = [[[_rational(0)] * (T + 1) for _ in range(2)] for _ in range(2)]
    for a, src in enumerate(ends):
        dist = {src: _rational(1)}
        out[a][a][0] = _rational(1)
        for t in range(1, T + 1):
            nxt = {}
            for v, q in dist.items():
                if graph.degrees[v] == 1:
                    u = int(table[v, 0])
                    nxt[u] = nxt.get(u, 0) + q
                else:
                    for u in table[v]:
                        u = int(u)
                        nxt[u] = nxt.get(u, 0) + q * w
            for b, end in enumerate(ends):
                out[a][b][t] = nxt.get(end, _rational(0))
            dist = nxt
    return out


# -- series recursion ---------------------------------------------------------------


class SeriesMatrix2:
    """2x2 matrix of power series in ``y`` truncated after ``y^T``.

    Entries are numpy arrays of exact rationals (object dtype) when ``exact``
    and of floats otherwise.
    """

    def __init__(self, entries, T, exact=True):
        self.T = T
        self.exact = exact
        self.m = [[np.asarray(e, dtype=object if exact else float) for e in row] for row in entries]

    @classmethod
    def zero_series(cls, T, exact):
        return np.array([_rational(0)] * (T + 1), dtype=object) if exact else np.zeros(T + 1)

    @classmethod
    def monomial(cls, T, exact, power=1, coef=1):
        s = cls.zero_series(T, exact)
        if power <= T:
            s[power] = _rational(coef) if exact else float(coef)
        return s

    @classmethod
    def leaf(cls, T, exact=True):
        z = cls.zero_series(T, exact)
        y = cls.monomial(T, exact)
        return cls([[z, y], [y, z.copy()]], T, exact)

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def coefficients(self, i, j):
        return list(self.m[i][j])


def _mul(a, b, T):
    return np.convolve(a, b)[:T + 1]


def _inverse(a, T, exact):
    """Reciprocal of a series with nonzero constant term."""
    if a[0] == 0:
        raise ArithmeticError("series has no reciprocal (zero constant term)")
    b = SeriesMatrix2.zero_series(T, exact)
    inv0 = 1 / a[0]
    b[0] = inv0
    for n in range(1, T + 1):
        b[n] = -inv0 * np.dot(a[1:n + 1], b[n - 1::-1])
    return b


def _mat_mul(A, B, T):
    return [[_mul(A[i][0], B[0][j], T) + _mul(A[i][1], B[1][j], T) for j in range(2)]
            for i in range(2)]


def _mat_inv(A, T, exact):
    det = _mul(A[0][0], A[1][1], T) - _mul(A[0][1], A[1][0], T)
    r = _inverse(det, T, exact)
    return [[_mul(A[1][1], r, T), -_mul(A[0][1], r, T)],
            [-_mul(A[1][0], r, T), _mul(A[0][0], r, T)]]


def _combine(D, outer, inner_sum, T, exact):
    """One step of the sub-melon recursion (index 0 = I or B, 1 = O or A)."""
    z = SeriesMatrix2.zero_series(T, exact)
    y = SeriesMatrix2.monomial(T, exact)
    const = SeriesMatrix2.monomial(T, exact, 0, D + 1)
    K = [[const - inner_sum[0][0] - outer[0][0], -inner_sum[0][1]],
         [-inner_sum[1][0], const - inner_sum[1][1]]]
    left = [[z, y], [outer[1][0], z]]
    right = [[z, outer[0][1]], [y, z]]
    mid = _mat_mul(_mat_mul(left, _mat_inv(K, T, exact), T), right, T)
    mid[1][1] = mid[1][1] + outer[1][1]
    return mid


def first_return_series(tree: MelonTree, T: int, exact=None) -> SeriesMatrix2:
    """First-return/first-transit generating matrix of the rooted graph of ``tree``.

    Exact rationals up to order 60 by default, floats beyond.
    """
    if T < 2:
        raise ValueError("truncation order must be at least 2")
    if exact is None:
        exact = T <= EXACT_ORDER_LIMIT
    D = tree.dimension
    leaf = SeriesMatrix2.leaf(T, exact).m
    if tree.size == 0:
        return SeriesMatrix2(leaf, T, exact)
    done = [None] * tree.size
    for v in range(tree.size - 1, -1, -1):
        c = int(tree.colors[v])
        subs = [leaf if u < 0 else done[u] for u in tree.children[v]]
        inner = [[sum(subs[s][i][j] for s in range(D + 1) if s != c) for j in range(2)]
                 for i in range(2)]
        done[v] = _combine(D, subs[c], inner, T, exact)
        for u in tree.children[v]:
            if u >= 0:
                done[u] = None
    return SeriesMatrix2(done[0], T, exact)


def return_series(first: SeriesMatrix2) -> SeriesMatrix2:
    """``(1 - P1)^-1``: all returns and transits from the first-passage matrix."""
    T, exact = first.T, first.exact
    one = SeriesMatrix2.monomial(T, exact, 0, 1)
    A = [[one - first[0, 0], -first[0, 1]], [-first[1, 0], one - first[1, 1]]]
    return SeriesMatrix2(_mat_inv(A, T, exact), T, exact)


# -- spectral dimension -------------------------------------------------------------


def _spectral_sample(args):
    D, p, seed, t_max, method, n_walks = args
    rng = np.random.default_rng(seed)
    tree = sample_uniform(D, p, rng)
    g = tree_to_graph(tree)
    if method == "mc":
        return walk_return_mc(g, "I", t_max, n_walks, rng)[0]
    return return_probabilities(g, "I", t_max)


def pooled_even(P):
    """``P(t) + P(t+1)`` at even ``t``; removes the bipartite oscillation."""
    P = np.asarray(P, dtype=float)
    n = len(P) - 1
    ts = np.arange(0, n, 2)
    return ts, P[ts] + P[ts + 1]


def spectral_estimate(D: int, p: int, window, samples: int, seed: int,
                      method="exact", n_walks=1000, jobs=1, batches=10) -> ScalingFit:
    """Fit the averaged return probability to I over even times in ``window``.

    ``method="exact"`` propagates the full distribution on each sampled graph;
    ``"mc"`` simulates ``n_walks`` walkers instead.  The error bar is the
    spread of the exponent over ``batches`` disjoint groups of samples.
    """
    t1, t2 = window
    t_max = t2 + 1
    seeds = _seeds(seed, samples)
    curves = np.array(_map(_spectral_sample,
                           [(D, p, s, t_max, method, n_walks) for s in seeds], jobs))

    def fit_of(rows):
        ts, P = pooled_even(rows.mean(axis=0))
        sel = (ts >= t1) & (ts <= t2)
        return loglog_fit(ts[sel], P[sel], (t1, t2))

    fit = fit_of(curves)
    groups = np.array_split(np.arange(samples), min(batches, samples))
    exps = [fit_of(curves[g]).exponent for g in groups if len(g)]
    spread = float(np.std(exps, ddof=1) / math.sqrt(len(exps))) if len(exps) > 1 else float("nan")
    ts, P = pooled_even(curves.mean(axis=0))
    fit.stderr = spread
    fit.extra = {
        "spectral_dimension": -2 * fit.exponent,
        "spectral_stderr": 2 * spread,
        "odd_time_max": float(np.abs(curves[:, 1::2]).max()),
        "effective_exponent": effective_exponents(ts, P),
        "method": method,
        "samples": samples,
        "p": p,
    }
    if not (1 < t1 < t2 < p):
        fit.extra["warning"] = f"window {window} is outside 1 << t < p={p}"
    return fit


def effective_exponents(ts, P):
    """``-2 dlog P / dlog t`` between consecutive positive even times."""
    ts = np.asarray(ts, dtype=float)
    P = np.asarray(P, dtype=float)
    ok = (ts > 0) & (P > 0)
    ts, P = ts[ok], P[ok]
    if len(ts) < 2:
        return []
    slope = np.diff(np.log(P)) / np.diff(np.log(ts))
    mid = np.sqrt(ts[1:] * ts[:-1])
    return [[float(a), float(-2 * b)] for a, b in zip(mid, slope)]
