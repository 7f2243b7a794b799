"""Stochastic epidemic engines.

Three engines share the Trajectory record:

* exact Gillespie simulation of SIR/SIRS on a contact network,
* the same event loop on a well-mixed population (counts only),
* a discrete-time, synchronous agent-based SIR.

A waning-immunity rate of zero turns SIRS into plain SIR everywhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Optional, Sequence

import numpy as np

from .errors import AbsorbingState, ParameterError, ProbabilityOverflowError, StateError
from .graphs import Graph
from .interventions import InterventionSpec

S, I, R = 0, 1, 2  # compartment labels

INFECTION = "infection"
RECOVERY = "recovery"
WANING = "waning"


@dataclass(frozen=True)
class RateParams:
    """Transition rates: infection per S-I contact, recovery, waning immunity."""

    beta: float
    gamma: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.beta < 0 or self.gamma < 0 or self.alpha < 0:
            raise ParameterError(f"rates must be non-negative, got {self}")


@dataclass(frozen=True)
class EventRates:
    """Total propensity of each event class in the current state."""

    infection: float
    recovery: float
    waning: float

    @property
    def total(self) -> float:
        return self.infection + self.recovery + self.waning


class _IndexedSet:
    """Set with O(1) insert/remove and uniform random choice."""

    __slots__ = ("items", "pos")

    def __init__(self):
        self.items: list = []
        self.pos: dict = {}

    def __len__(self):
        return len(self.items)

    def __contains__(self, x):
        return x in self.pos

    def add(self, x):
        self.pos[x] = len(self.items)
        self.items.append(x)

    def remove(self, x):
        i = self.pos.pop(x)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def choose(self, rng: np.random.Generator):
        return self.items[int(rng.integers(len(self.items)))]


class CompartmentState:
    """Per-node compartment labels plus the caches the event loop needs.

    Caches: the live S-I edge set (infection propensity and target choice)
    and the infected / recovered node sets (recovery and waning targets).
    """

    def __init__(self, graph: Graph, labels: np.ndarray):
        if labels.shape != (graph.node_count,):
            raise StateError(
                f"labels shape {labels.shape} does not match {graph.node_count} nodes"
            )
        self.graph = graph
        self.labels = labels.astype(np.int8)
        counts = np.bincount(self.labels, minlength=3)
        self.n_s, self.n_i, self.n_r = (int(c) for c in counts[:3])
        self._rebuild_caches()

    def _rebuild_caches(self) -> None:
        self.si_edges = _IndexedSet()
        self.infected = _IndexedSet()
        self.recovered = _IndexedSet()
        labels = self.labels
        for v in range(self.graph.node_count):
            if labels[v] == I:
                self.infected.add(v)
                for u in self.graph.adjacency[v]:
                    if labels[u] == S:
                        self.si_edges.add((u, v))  # (susceptible, infected)
            elif labels[v] == R:
                self.recovered.add(v)

    @property
    def n(self) -> int:
        return self.graph.node_count

    @property
    def si_edge_count(self) -> int:
        return len(self.si_edges)

    def copy(self) -> "CompartmentState":
        return CompartmentState(self.graph, self.labels.copy())

    def rebind_graph(self, graph: Graph) -> None:
        """Swap the contact structure (intervention) and rebuild caches."""
        if graph.node_count != self.graph.node_count:
            raise StateError("intervention changed the node count")
        self.graph = graph
        self._rebuild_caches()

    def infect(self, v: int) -> None:
        if self.labels[v] != S:
            raise StateError(f"node {v} is not susceptible")
        self.labels[v] = I
        self.n_s -= 1
        self.n_i += 1
        self.infected.add(v)
        for u in self.graph.adjacency[v]:
            lab = self.labels[u]
            if lab == I:
                self.si_edges.remove((v, u))
            elif lab == S:
                self.si_edges.add((u, v))

    def recover(self, v: int) -> None:
        if self.labels[v] != I:
            raise StateError(f"node {v} is not infected")
        self.labels[v] = R
        self.n_i -= 1
        self.n_r += 1
        self.infected.remove(v)
        self.recovered.add(v)
        for u in self.graph.adjacency[v]:
            if self.labels[u] == S:
                self.si_edges.remove((u, v))

    def wane(self, v: int) -> None:
        if self.labels[v] != R:
            raise StateError(f"node {v} is not recovered")
        self.labels[v] = S
        self.n_r -= 1
        self.n_s += 1
        self.recovered.remove(v)
        for u in self.graph.adjacency[v]:
            if self.labels[u] == I:
                self.si_edges.add((v, u))

    def recount_si_edges(self) -> int:
        """From-scratch S-I edge recount (cache-coherence oracle)."""
        count = 0
        for u, v in ((u, v) for u in range(self.n) for v in self.graph.adjacency[u] if u < v):
            if {self.labels[u], self.labels[v]} == {S, I}:
                count += 1
        return count


def resolve_infected_count(n: int, initial_infected: int | float) -> int:
    """Turn a count or fraction into a node count (fraction rounds, min 1)."""
    if isinstance(initial_infected, float):
        if not 0.0 < initial_infected <= 1.0:
            raise ParameterError(
                f"initial infected fraction must be in (0, 1], got {initial_infected}"
            )
        return max(1, round(initial_infected * n))
    count = int(initial_infected)
    if not 0 < count <= n:
        raise ParameterError(f"initial infected count must be in 1..{n}, got {count}")
    return count


def init_state(g: Graph, initial_infected: int | float, seed: int) -> CompartmentState:
    """Infect a uniformly random subset; everyone else starts susceptible.

    initial_infected: an int is a node count, a float in (0, 1] a fraction
    of the population (rounded, at least one node).
    """
    n = g.node_count
    if n == 0:
        raise ParameterError("cannot seed an empty graph")
    count = resolve_infected_count(n, initial_infected)
    rng = np.random.default_rng(seed)
    labels = np.full(n, S, dtype=np.int8)
    labels[rng.choice(n, size=count, replace=False)] = I
    return CompartmentState(g, labels)


def compute_event_rates(g: Graph, state: CompartmentState, params: RateParams) -> EventRates:
    """Propensities on a network: infection scales with the S-I edge count."""
    if state.graph is not g:
        raise StateError("state was built for a different graph")
    return EventRates(
        infection=params.beta * state.si_edge_count,
        recovery=params.gamma * state.n_i,
        waning=params.alpha * state.n_r,
    )


def sample_waiting_time(a_total: float, rng: np.random.Generator) -> float:
    """Exponential waiting time with rate a_total: tau = -ln(u) / a_total."""
    if a_total <= 0:
        raise AbsorbingState("total propensity is zero")
    u = 1.0 - rng.random()  # uniform in (0, 1]
    return -math.log(u) / a_total


def select_event(rates: EventRates, rng: np.random.Generator) -> str:
    """Pick an event class with probability proportional to its propensity."""
    total = rates.total
    if total <= 0:
        raise AbsorbingState("total propensity is zero")
    u = rng.random() * total
    if u < rates.infection:
        return INFECTION
    if u < rates.infection + rates.recovery:
        return RECOVERY
    return WANING


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped compartment counts emitted by any engine."""

    times: np.ndarray
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    n: int
    engine: str
    seed: Optional[int] = None

    def __len__(self):
        return len(self.times)

    def counts_at(self, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Step-function sample of (S, I, R) at the given times."""
        idx = np.clip(np.searchsorted(self.times, grid, side="right") - 1, 0, None)
        return self.s[idx], self.i[idx], self.r[idx]

    def to_csv(self, stream: IO[str]) -> None:
        stream.write("t,S,I,R\n")
        for t, s, i, r in zip(self.times, self.s, self.i, self.r):
            stream.write(f"{float(t)!r},{s},{i},{r}\n")


@dataclass(frozen=True)
class TrajectorySummary:
    """Headline observables of one run."""

    peak_infected_fraction: float
    peak_time: float
    final_recovered_fraction: float
    total_events: int
    seed: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "peak_infected_fraction": self.peak_infected_fraction,
                "peak_time": self.peak_time,
                "final_recovered_fraction": self.final_recovered_fraction,
                "seed": self.seed,
            }
        )


def summarize_trajectory(traj: Trajectory) -> TrajectorySummary:
    """Peak infected fraction (first maximum), its time, and the final
    recovered fraction (the epidemic scope)."""
    if len(traj) == 0:
        raise StateError("cannot summarize an empty trajectory")
    peak_idx = int(np.argmax(traj.i))
    return TrajectorySummary(
        peak_infected_fraction=float(traj.i[peak_idx]) / traj.n,
        peak_time=float(traj.times[peak_idx]),
        final_recovered_fraction=float(traj.r[-1]) / traj.n,
        total_events=len(traj) - 1,
        seed=traj.seed,
    )


def _finish_trajectory(times, ns, ni, nr, n, engine, seed) -> Trajectory:
    return Trajectory(
        times=np.asarray(times, dtype=np.float64),
        s=np.asarray(ns, dtype=np.int64),
        i=np.asarray(ni, dtype=np.int64),
        r=np.asarray(nr, dtype=np.int64),
        n=n,
        engine=engine,
        seed=seed,
    )


def gillespie_run(
    g: Graph,
    params: RateParams,
    init: CompartmentState,
    t_max: float,
    seed: int,
    interventions: Optional[Sequence[InterventionSpec]] = None,
    record_stride: int = 1,
) -> Trajectory:
    """Exact event-driven SIR/SIRS simulation on a network.

    Interventions fire when the sampled event time crosses their trigger:
    the pending event is discarded (memorylessness keeps this exact), time
    jumps to the trigger, the graph is transformed and caches rebuilt.
    """
    if t_max <= 0:
        raise ParameterError(f"t_max must be positive, got {t_max}")
    if init.graph is not g:
        raise StateError("initial state was built for a different graph")
    if init.n_s + init.n_i + init.n_r != g.node_count:
        raise StateError("compartment counts do not sum to the population")
    state = init.copy()
    rng = np.random.default_rng(seed)
    pending = sorted(interventions or [], key=lambda iv: iv.trigger_time)
    graph = g

    t = 0.0
    times = [0.0]
    ns, ni, nr = [state.n_s], [state.n_i], [state.n_r]
    events = 0
    while t < t_max:
        rates = compute_event_rates(graph, state, params)
        if rates.total <= 0:
            # Interventions only remove edges, so an absorbed run stays absorbed.
            break
        tau = sample_waiting_time(rates.total, rng)
        if pending and t + tau >= pending[0].trigger_time:
            spec = pending.pop(0)
            t = min(spec.trigger_time, t_max)
            graph = spec.apply(graph)
            state.rebind_graph(graph)
            continue
        if t + tau > t_max:
            break
        t += tau
        kind = select_event(rates, rng)
        if kind == INFECTION:
            target, _source = state.si_edges.choose(rng)
            state.infect(target)
        elif kind == RECOVERY:
            state.recover(state.infected.choose(rng))
        else:
            state.wane(state.recovered.choose(rng))
        events += 1
        if events % record_stride == 0:
            times.append(t)
            ns.append(state.n_s)
            ni.append(state.n_i)
            nr.append(state.n_r)
    if times[-1] != t:
        times.append(t)
        ns.append(state.n_s)
        ni.append(state.n_i)
        nr.append(state.n_r)
    return _finish_trajectory(times, ns, ni, nr, g.node_count, "network-gillespie", seed)


def gillespie_well_mixed(
    n: int,
    k_avg: float,
    params: RateParams,
    initial_infected: int | float,
    t_max: float,
    seed: int,
    record_stride: int = 1,
) -> Trajectory:
    """Gillespie SIR/SIRS on a homogeneously mixing population.

    Infection propensity beta * k_avg * N_S * N_I / n, so the epidemic
    threshold matches the network criterion R0 = beta * <k> / gamma.
    """
    if n <= 0:
        raise ParameterError(f"population must be positive, got {n}")
    if t_max <= 0:
        raise ParameterError(f"t_max must be positive, got {t_max}")
    n_i = resolve_infected_count(n, initial_infected)
    n_s, n_r = n - n_i, 0
    rng = np.random.default_rng(seed)
    beta_k = params.beta * k_avg

    t = 0.0
    times = [0.0]
    ss, ii, rr = [n_s], [n_i], [n_r]
    events = 0
    while t < t_max:
        a_inf = beta_k * n_s * n_i / n
        a_rec = params.gamma * n_i
        a_wan = params.alpha * n_r
        a_total = a_inf + a_rec + a_wan
        if a_total <= 0:
            break
        u = 1.0 - rng.random()
        tau = -math.log(u) / a_total
        if t + tau > t_max:
            break
        t += tau
        u = rng.random() * a_total
        if u < a_inf:
            n_s -= 1
            n_i += 1
        elif u < a_inf + a_rec:
            n_i -= 1
            n_r += 1
        else:
            n_r -= 1
            n_s += 1
        events += 1
        if events % record_stride == 0:
            times.append(t)
            ss.append(n_s)
            ii.append(n_i)
            rr.append(n_r)
    if times[-1] != t:
        times.append(t)
        ss.append(n_s)
        ii.append(n_i)
        rr.append(n_r)
    return _finish_trajectory(times, ss, ii, rr, n, "well-mixed-gillespie", seed)


def abm_run(
    n: int,
    params: RateParams,
    initial_infected: int | float,
    steps: int,
    seed: int,
) -> Trajectory:
    """Discrete-time, synchronous agent-based SIR.

    Per step every susceptible agent becomes infected with Bernoulli
    probability beta * I(t) / n and every infected agent recovers with
    probability gamma; I(t) is read before any update is applied.
    """
    if steps < 0:
        raise ParameterError(f"steps must be >= 0, got {steps}")
    if params.gamma > 1.0:
        raise ProbabilityOverflowError(f"gamma = {params.gamma} is not a probability")
    n_init = resolve_infected_count(n, initial_infected)
    rng = np.random.default_rng(seed)
    labels = np.full(n, S, dtype=np.int8)
    labels[rng.choice(n, size=n_init, replace=False)] = I

    times = [0.0]
    ss, ii, rr = [int(np.sum(labels == S))], [int(np.sum(labels == I))], [0]
    for step in range(1, steps + 1):
        n_i = int(np.sum(labels == I))
        p_infect = params.beta * n_i / n
        if p_infect > 1.0:
            raise ProbabilityOverflowError(
                f"beta * I / N = {p_infect} exceeds 1 at step {step}"
            )
        susceptible = labels == S
        infected = labels == I
        draws = rng.random(n)
        labels[susceptible & (draws < p_infect)] = I
        labels[infected & (draws < params.gamma)] = R
        times.append(float(step))
        ss.append(int(np.sum(labels == S)))
        ii.append(int(np.sum(labels == I)))
        rr.append(int(np.sum(labels == R)))
    return _finish_trajectory(times, ss, ii, rr, n, "abm", seed)
