"""Contact-network construction and measurement.

Graphs are undirected, simple (no self-loops, no duplicate edges) and
immutable once built, so replicate simulations can share them freely.
Node ids are dense integers 0..n-1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional

import numpy as np
from scipy import special

from .errors import (
    EdgeListFormatError,
    ParameterError,
    PowerLawFitError,
    UndefinedMetricError,
)

logger = logging.getLogger(__name__)

MIN_TAIL_SIZE = 10  # smallest tail sample the power-law fit accepts


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph in adjacency-list form."""

    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph on nodes 0..n-1 from an iterable of (u, v) pairs.

        Reversed duplicates collapse; self-loops are rejected.
        """
        if n < 0:
            raise ParameterError("node count must be >= 0")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if u == v:
                raise ParameterError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
        return Graph(tuple(tuple(sorted(s)) for s in adj), m)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted (u, v) pairs with u < v."""
        return [(u, v) for u in range(self.node_count) for v in self.adjacency[u] if u < v]

    def degrees(self) -> np.ndarray:
        return np.array([len(nbrs) for nbrs in self.adjacency], dtype=np.int64)

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]


@dataclass(frozen=True)
class DegreeStats:
    """Degree-based summary of a graph."""

    average_degree: float
    histogram: dict[int, int]
    density: float
    power_law_exponent: Optional[float] = None
    scale_free: Optional[bool] = None


def generate_er(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi G(n, p): every unordered pair is an edge with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"edge probability must be in [0, 1], got {p}")
    if n < 0:
        raise ParameterError("node count must be >= 0")
    rng = np.random.default_rng(seed)
    if n < 2 or p == 0.0:
        return Graph.from_edges(n, [])
    if p == 1.0:
        return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))
    # Geometric skipping over the pair sequence: O(edges), not O(n^2).
    edges = []
    log_q = math.log(1.0 - p)
    v, w = 1, -1
    while v < n:
        w += 1 + int(math.log(1.0 - rng.random()) / log_q)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            edges.append((w, v))
    return Graph.from_edges(n, edges)


def generate_ws(n: int, k: int, p_rewire: float, seed: int) -> Graph:
    """Watts–Strogatz small-world graph.

    Ring lattice joining each node to its k nearest neighbours, then each
    lattice edge is rewired with probability p_rewire: the far endpoint is
    replaced by a uniformly random node that creates neither a self-loop
    nor a duplicate edge.
    """
    if k % 2 != 0:
        raise ParameterError(f"ring degree k must be even, got {k}")
    if not 0 < k < n:
        raise ParameterError(f"need 0 < k < n, got k={k}, n={n}")
    if not 0.0 <= p_rewire <= 1.0:
        raise ParameterError(f"rewiring probability must be in [0, 1], got {p_rewire}")
    rng = np.random.default_rng(seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            if rng.random() >= p_rewire:
                continue
            if len(adj[u]) >= n - 1:
                continue  # u already joined to everyone else
            w = int(rng.integers(n))
            while w == u or w in adj[u]:
                w = int(rng.integers(n))
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in adj[u] if u < v))


def generate_ba(n: int, m: int, seed: int) -> Graph:
    """Barabási–Albert preferential attachment.

    Starts from m isolated seed nodes; each arriving node attaches m edges
    to distinct existing nodes chosen with probability proportional to
    current degree. Final edge count is exactly m * (n - m).
    """
    if not 1 <= m < n:
        raise ParameterError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    # Endpoints repeated by degree; sampling uniformly from it is
    # degree-proportional sampling.
    repeated: list[int] = []
    targets = list(range(m))
    for new in range(m, n):
        for t in targets:
            edges.append((new, t))
        repeated.extend(targets)
        repeated.extend([new] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[int(rng.integers(len(repeated)))])
        targets = sorted(chosen)
    return Graph.from_edges(n, edges)


def load_edge_list(text: str | IO[str], compact_ids: bool = False) -> Graph:
    """Parse an edge list: one "u v" pair per line, '#' starts a comment.

    Duplicate lines and reversed duplicates collapse to a single edge;
    self-loops are skipped (counted in a warning). Node count is max id + 1
    unless compact_ids remaps ids to a dense 0..n-1 range.
    """
    if hasattr(text, "read"):
        text = text.read()
    pairs: list[tuple[int, int]] = []
    self_loops = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(lineno, raw, "expected two node ids")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(lineno, raw, "node ids must be integers") from None
        if u < 0 or v < 0:
            raise EdgeListFormatError(lineno, raw, "node ids must be non-negative")
        if u == v:
            self_loops += 1
            continue
        pairs.append((u, v))
    if self_loops:
        logger.warning("skipped %d self-loop line(s)", self_loops)
    if not pairs:
        return Graph.from_edges(0, [])
    if compact_ids:
        ids = sorted({x for e in pairs for x in e})
        remap = {old: new for new, old in enumerate(ids)}
        pairs = [(remap[u], remap[v]) for u, v in pairs]
        n = len(ids)
    else:
        n = max(max(e) for e in pairs) + 1
    return Graph.from_edges(n, pairs)


def save_edge_list(g: Graph, stream: IO[str]) -> None:
    """Write the "u v" per-line format load_edge_list reads."""
    stream.write(f"# nodes: {g.node_count}\n")
    for u, v in g.edges():
        stream.write(f"{u} {v}\n")


def density(g: Graph) -> float:
    """Fraction of all possible node pairs that are edges."""
    n = g.node_count
    if n < 2:
        raise UndefinedMetricError(f"density needs >= 2 nodes, got {n}")
    return 2.0 * g.edge_count / (n * (n - 1))


def degree_stats(g: Graph) -> DegreeStats:
    """Average degree, degree histogram and density (no power-law fields)."""
    n = g.node_count
    if n == 0:
        raise UndefinedMetricError("degree statistics undefined on the empty graph")
    degs = g.degrees()
    values, counts = np.unique(degs, return_counts=True)
    hist = {int(k): int(c) for k, c in zip(values, counts)}
    dens = density(g) if n >= 2 else 0.0
    return DegreeStats(
        average_degree=2.0 * g.edge_count / n,
        histogram=hist,
        density=dens,
    )


def _power_law_mle(tail: np.ndarray, k_min: int) -> float:
    # Continuous MLE with the half-integer shift for integer data.
    return 1.0 + tail.size / float(np.sum(np.log(tail / (k_min - 0.5))))


def _ks_distance(tail_sorted: np.ndarray, k_min: int, exponent: float) -> float:
    # Degrees are integers, so compare against the discrete power law
    # p(k) ~ k^-exponent on k >= k_min (Hurwitz-zeta normalized); the
    # continuous CDF degenerates on heavily tied samples.
    n = tail_sorted.size
    values, counts = np.unique(tail_sorted, return_counts=True)
    ecdf = np.cumsum(counts) / n
    support = np.arange(k_min, values[-1] + 1, dtype=np.float64)
    pmf = support ** (-exponent) / special.zeta(exponent, k_min)
    model = np.cumsum(pmf)[values - k_min]
    return float(np.max(np.abs(ecdf - model)))


def fit_power_law_degrees(degrees: np.ndarray, k_min: Optional[int] = None) -> float:
    """Maximum-likelihood power-law exponent of a degree sample.

    With k_min given, fits the tail degrees >= k_min directly. Otherwise
    scans candidate k_min values and keeps the one minimizing the
    Kolmogorov–Smirnov distance between the empirical tail and the fit.
    """
    degs = np.asarray(degrees, dtype=np.int64)
    degs = degs[degs >= 1]
    if k_min is not None:
        if k_min < 1:
            raise ParameterError(f"k_min must be >= 1, got {k_min}")
        tail = np.sort(degs[degs >= k_min])
        if tail.size < MIN_TAIL_SIZE:
            raise PowerLawFitError(tail.size)
        return _power_law_mle(tail, k_min)
    best: Optional[tuple[float, float]] = None
    for candidate in np.unique(degs):
        tail = np.sort(degs[degs >= candidate])
        if tail.size < MIN_TAIL_SIZE:
            break  # candidates are ascending, tails only shrink
        exponent = _power_law_mle(tail, int(candidate))
        if exponent <= 1.0:
            continue  # zeta normalization needs exponent > 1
        dist = _ks_distance(tail, int(candidate), exponent)
        if best is None or dist < best[0]:
            best = (dist, exponent)
    if best is None:
        raise PowerLawFitError(int(np.sum(degs >= 1)))
    return best[1]


def fit_power_law(g: Graph, k_min: Optional[int] = None) -> float:
    """Power-law exponent of the graph's degree distribution."""
    return fit_power_law_degrees(g.degrees(), k_min)


def classify_scale_free(exponent: float) -> bool:
    """Scale-free iff the exponent lies strictly between 2 and 3."""
    if not math.isfinite(exponent):
        raise ParameterError(f"exponent must be finite, got {exponent}")
    return 2.0 < exponent < 3.0


def metrics_report(g: Graph, k_min: Optional[int] = None) -> dict:
    """JSON-ready metrics report for a graph."""
    stats = degree_stats(g)
    try:
        exponent: Optional[float] = fit_power_law(g, k_min)
        scale_free: Optional[bool] = classify_scale_free(exponent)
    except PowerLawFitError:
        exponent = None
        scale_free = None
    return {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "avg_degree": stats.average_degree,
        "density": stats.density,
        "power_law_exponent": exponent,
        "scale_free": scale_free,
    }


def check_graph_invariants(g: Graph) -> None:
    """Raise if the structural invariants do not hold (test helper)."""
    total_degree = 0
    for u, nbrs in enumerate(g.adjacency):
        if u in nbrs:
            raise AssertionError(f"self-loop on node {u}")
        if len(set(nbrs)) != len(nbrs):
            raise AssertionError(f"duplicate neighbour on node {u}")
        for v in nbrs:
            if u not in g.adjacency[v]:
                raise AssertionError(f"asymmetric edge ({u}, {v})")
        total_degree += len(nbrs)
    if total_degree != 2 * g.edge_count:
        raise AssertionError("degree sum does not equal 2 * edge count")
