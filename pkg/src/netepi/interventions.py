"""Contact-reduction measures as graph-to-graph transformations.

The engines apply these mid-run; the functions here are purely structural
and never add edges or nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, ParameterError
from .graphs import Graph, density


def apply_degree_cap(g: Graph, cap: int, seed: int) -> Graph:
    """Remove edges until no node has more than `cap` neighbours.

    Nodes are processed in descending initial-degree order (ties by node
    id). A node over the cap keeps `cap` of its incident edges, chosen by
    shuffling them with the seeded RNG; the rest are deleted, which also
    lowers the neighbours' degrees. Nodes already at or under the cap are
    left untouched.
    """
    if cap < 0:
        raise ParameterError(f"degree cap must be >= 0, got {cap}")
    rng = np.random.default_rng(seed)
    adj = [set(nbrs) for nbrs in g.adjacency]
    order = sorted(range(g.node_count), key=lambda v: (-len(adj[v]), v))
    for v in order:
        if len(adj[v]) <= cap:
            continue
        incident = sorted(adj[v])
        rng.shuffle(incident)
        for u in incident[cap:]:
            adj[v].discard(u)
            adj[u].discard(v)
    return Graph.from_edges(
        g.node_count, ((u, v) for u in range(g.node_count) for v in adj[u] if u < v)
    )


def thin_to_density(g: Graph, target: float, seed: int) -> Graph:
    """Delete uniformly random edges until density <= target.

    The surviving edge count is floor(target * n(n-1)/2), so the result
    is guaranteed to be at or below the target density.
    """
    if not 0.0 <= target <= 1.0:
        raise ParameterError(f"target density must be in [0, 1], got {target}")
    if g.node_count >= 2 and target > density(g):
        raise ParameterError(
            f"target density {target} exceeds current density {density(g)}"
        )
    n = g.node_count
    keep = math.floor(target * n * (n - 1) / 2)
    if keep >= g.edge_count:
        return g
    rng = np.random.default_rng(seed)
    edges = g.edges()
    kept_idx = rng.choice(len(edges), size=keep, replace=False)
    return Graph.from_edges(n, (edges[i] for i in kept_idx))


@dataclass(frozen=True)
class InterventionSpec:
    """A scheduled contact-reduction measure.

    action is "degree_cap" (with `cap`) or "thin" (with `target`).
    """

    trigger_time: float
    action: str
    cap: Optional[int] = None
    target: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.trigger_time < 0:
            raise ParameterError(f"trigger time must be >= 0, got {self.trigger_time}")
        if self.action == "degree_cap":
            if self.cap is None or self.cap < 0:
                raise ParameterError("degree_cap needs a cap >= 0")
        elif self.action == "thin":
            if self.target is None or not 0.0 <= self.target <= 1.0:
                raise ParameterError("thin needs a target density in [0, 1]")
        else:
            raise ParameterError(f"unknown intervention action {self.action!r}")

    def apply(self, g: Graph) -> Graph:
        if self.action == "degree_cap":
            return apply_degree_cap(g, self.cap, self.seed)
        return thin_to_density(g, self.target, self.seed)

    def to_dict(self) -> dict:
        out: dict = {"t": self.trigger_time, "action": self.action}
        if self.action == "degree_cap":
            out["cap"] = self.cap
        else:
            out["target"] = self.target
        if self.seed:
            out["seed"] = self.seed
        return out

    @staticmethod
    def from_dict(d: dict) -> "InterventionSpec":
        allowed = {"t", "action", "cap", "target", "seed"}
        unknown = set(d) - allowed
        if unknown:
            raise ConfigError(f"unknown intervention key(s): {sorted(unknown)}")
        if "t" not in d or "action" not in d:
            raise ConfigError("intervention needs 't' and 'action'")
        try:
            return InterventionSpec(
                trigger_time=float(d["t"]),
                action=d["action"],
                cap=d.get("cap"),
                target=d.get("target"),
                seed=int(d.get("seed", 0)),
            )
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
