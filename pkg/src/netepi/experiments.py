"""Replicate sweeps reproducing the four study experiments as tidy tables.

Every sweep point runs `replicates` independent simulations with seeds
base_seed + replicate index; replicate work is embarrassingly parallel
and seeds are assigned before dispatch, so aggregates do not depend on
execution order. Set NETEPI_WORKERS > 1 to run replicates in a process
pool.
"""

from __future__ import annotations

import json
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from . import graphs
from .dynamics import (
    RateParams,
    gillespie_run,
    gillespie_well_mixed,
    init_state,
    summarize_trajectory,
)
from .errors import ParameterError
from .graphs import Graph
from .interventions import InterventionSpec

WORKERS_ENV = "NETEPI_WORKERS"


@dataclass(frozen=True)
class NetworkSource:
    """Where a sweep gets its contact structure from."""

    kind: str  # "er" | "ws" | "ba" | "edge_list" | "well_mixed"
    label: str
    n: int = 0
    p: float = 0.0
    k: int = 0
    p_rewire: float = 0.0
    m: int = 0
    k_avg: float = 0.0
    path: Optional[str] = None
    compact_ids: bool = False

    @staticmethod
    def er(n: int, p: float, label: Optional[str] = None) -> "NetworkSource":
        return NetworkSource("er", label or f"er(n={n},p={p})", n=n, p=p)

    @staticmethod
    def ws(n: int, k: int, p_rewire: float, label: Optional[str] = None) -> "NetworkSource":
        return NetworkSource(
            "ws", label or f"ws(n={n},k={k},p={p_rewire})", n=n, k=k, p_rewire=p_rewire
        )

    @staticmethod
    def ba(n: int, m: int, label: Optional[str] = None) -> "NetworkSource":
        return NetworkSource("ba", label or f"ba(n={n},m={m})", n=n, m=m)

    @staticmethod
    def edge_list(path: str, compact_ids: bool = False, label: Optional[str] = None) -> "NetworkSource":
        return NetworkSource(
            "edge_list", label or f"edge_list({path})", path=path, compact_ids=compact_ids
        )

    @staticmethod
    def well_mixed(n: int, k_avg: float, label: Optional[str] = None) -> "NetworkSource":
        return NetworkSource(
            "well_mixed", label or f"well_mixed(n={n},k={k_avg})", n=n, k_avg=k_avg
        )

    def build_graph(self, seed: int) -> Graph:
        if self.kind == "er":
            return graphs.generate_er(self.n, self.p, seed)
        if self.kind == "ws":
            return graphs.generate_ws(self.n, self.k, self.p_rewire, seed)
        if self.kind == "ba":
            return graphs.generate_ba(self.n, self.m, seed)
        if self.kind == "edge_list":
            with open(self.path, encoding="utf-8") as fh:
                return graphs.load_edge_list(fh, compact_ids=self.compact_ids)
        raise ParameterError(f"{self.kind!r} source has no graph form")

    def to_dict(self) -> dict:
        if self.kind == "er":
            return {"er": {"n": self.n, "p": self.p}}
        if self.kind == "ws":
            return {"ws": {"n": self.n, "k": self.k, "p_rewire": self.p_rewire}}
        if self.kind == "ba":
            return {"ba": {"n": self.n, "m": self.m}}
        if self.kind == "edge_list":
            return {"edge_list": {"path": self.path, "compact_ids": self.compact_ids}}
        return {"well_mixed": {"n": self.n, "k_avg": self.k_avg}}


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: networks x infection-rate grid, fixed everything else."""

    networks: Sequence[NetworkSource]
    betas: Sequence[float]
    gamma: float = 1.0
    alpha: float = 0.0
    initial_fraction: float = 0.01
    t_max: float = 30.0
    replicates: int = 50
    base_seed: int = 0
    intervention: Optional[InterventionSpec] = None
    measure_from: Optional[float] = None  # windowed-max measurement start

    def __post_init__(self):
        if self.replicates < 1:
            raise ParameterError("replicates must be >= 1")
        if not self.betas:
            raise ParameterError("beta grid must be non-empty")
        if any(b < 0 for b in self.betas):
            raise ParameterError("beta values must be >= 0")

    def to_dict(self) -> dict:
        return {
            "networks": [src.to_dict() for src in self.networks],
            "betas": list(self.betas),
            "gamma": self.gamma,
            "alpha": self.alpha,
            "initial_fraction": self.initial_fraction,
            "t_max": self.t_max,
            "replicates": self.replicates,
            "base_seed": self.base_seed,
            "intervention": self.intervention.to_dict() if self.intervention else None,
            "measure_from": self.measure_from,
        }


@dataclass
class ExperimentTable:
    """Tidy rows plus the resolved spec that produced them."""

    experiment: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    manifest: dict = field(default_factory=dict)

    def write_csv(self, stream: IO[str]) -> None:
        stream.write(",".join(self.columns) + "\n")
        for row in self.rows:
            stream.write(",".join(_csv_cell(row.get(c)) for c in self.columns) + "\n")

    def write_manifest(self, stream: IO[str]) -> None:
        json.dump({"experiment": self.experiment, **self.manifest}, stream, indent=2)
        stream.write("\n")

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _replicate_seeds(base_seed: int, index: int) -> tuple[int, int, int]:
    # One child stream per role so graph, seeding and event draws never alias.
    g, i, r = np.random.SeedSequence(base_seed + index).generate_state(3)
    return int(g), int(i), int(r)


def _one_replicate(args: dict) -> dict:
    """Single simulation; module-level so a process pool can pickle it."""
    source: NetworkSource = args["source"]
    params: RateParams = args["params"]
    graph_seed, init_seed, run_seed = _replicate_seeds(args["base_seed"], args["index"])
    if source.kind == "well_mixed":
        traj = gillespie_well_mixed(
            source.n, source.k_avg, params, args["initial_fraction"],
            args["t_max"], run_seed,
        )
    else:
        g = source.build_graph(graph_seed)
        state = init_state(g, args["initial_fraction"], init_seed)
        traj = gillespie_run(
            g, params, state, args["t_max"], run_seed,
            interventions=args.get("interventions"),
        )
    summary = summarize_trajectory(traj)
    out = {
        "scope": summary.final_recovered_fraction,
        "peak": summary.peak_infected_fraction,
        "peak_time": summary.peak_time,
    }
    measure_from = args.get("measure_from")
    if measure_from is not None:
        mask = traj.times >= measure_from
        out["windowed_peak"] = (
            float(np.max(traj.i[mask])) / traj.n if np.any(mask) else 0.0
        )
    grid = args.get("grid")
    if grid is not None:
        _, i_counts, _ = traj.counts_at(grid)
        out["i_curve"] = i_counts / traj.n
    return out


def _run_batch(tasks: list[dict]) -> list[dict]:
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_one_replicate, tasks))
    return [_one_replicate(t) for t in tasks]


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    std = statistics.pstdev(values) if len(values) > 1 else 0.0
    return mean, std


def run_replicates(spec: SweepSpec, source: NetworkSource, beta: float) -> dict:
    """Aggregate `spec.replicates` runs at one (network, beta) point."""
    params = RateParams(beta, spec.gamma, spec.alpha)
    tasks = [
        {
            "source": source,
            "params": params,
            "initial_fraction": spec.initial_fraction,
            "t_max": spec.t_max,
            "base_seed": spec.base_seed,
            "index": i,
            "interventions": [spec.intervention] if spec.intervention else None,
            "measure_from": spec.measure_from,
        }
        for i in range(spec.replicates)
    ]
    results = _run_batch(tasks)
    row: dict = {"network": source.label, "beta": beta, "replicates": spec.replicates}
    for key, name in (("scope", "scope"), ("peak", "peak"), ("peak_time", "peak_time")):
        mean, std = _mean_std([r[key] for r in results])
        row[f"mean_{name}"] = mean
        row[f"std_{name}"] = std
    if spec.measure_from is not None:
        mean, std = _mean_std([r["windowed_peak"] for r in results])
        row["mean_windowed_peak"] = mean
        row["std_windowed_peak"] = std
    return row


SCOPE_COLUMNS = [
    "experiment", "network", "beta", "gamma", "alpha",
    "mean_scope", "std_scope", "mean_peak", "std_peak",
    "mean_peak_time", "std_peak_time", "replicates",
]


def experiment_scope_sweep(spec: SweepSpec, experiment_id: str = "exp01") -> ExperimentTable:
    """Final-epidemic-scope sweep over the infection-rate grid (threshold scan)."""
    table = ExperimentTable(experiment_id, SCOPE_COLUMNS, manifest={"spec": spec.to_dict()})
    for source in spec.networks:
        for beta in spec.betas:
            row = run_replicates(spec, source, beta)
            row.update(experiment=experiment_id, gamma=spec.gamma, alpha=spec.alpha)
            table.rows.append(row)
    return table


def experiment_density_comparison(
    densities: Sequence[float],
    k_avg: float = 10.0,
    beta: float = 0.1,
    gamma: float = 1.0,
    initial_fraction: float = 0.01,
    t_max: float = 30.0,
    replicates: int = 50,
    base_seed: int = 0,
) -> ExperimentTable:
    """ER vs BA over a density grid at matched mean degree.

    Density is controlled through graph size: d = <k>/(n-1) fixes
    n = <k>/d + 1 per point, with ER p = <k>/(n-1) and BA m = <k>/2.
    """
    columns = [
        "experiment", "model", "density", "n", "avg_degree",
        "mean_peak", "std_peak", "mean_scope", "std_scope", "replicates",
    ]
    table = ExperimentTable("exp02", columns, manifest={
        "densities": list(densities), "k_avg": k_avg, "beta": beta, "gamma": gamma,
        "initial_fraction": initial_fraction, "t_max": t_max,
        "replicates": replicates, "base_seed": base_seed,
    })
    for d in densities:
        n = round(k_avg / d) + 1
        m = max(1, round(k_avg / 2.0))
        pairs = [
            ("ER", NetworkSource.er(n, k_avg / (n - 1), label="ER")),
            ("BA", NetworkSource.ba(n, m, label="BA")),
        ]
        spec = SweepSpec(
            networks=[src for _, src in pairs], betas=[beta], gamma=gamma,
            initial_fraction=initial_fraction, t_max=t_max,
            replicates=replicates, base_seed=base_seed,
        )
        for model, source in pairs:
            row = run_replicates(spec, source, beta)
            table.rows.append({
                "experiment": "exp02", "model": model, "density": d, "n": n,
                "avg_degree": k_avg,
                "mean_peak": row["mean_peak"], "std_peak": row["std_peak"],
                "mean_scope": row["mean_scope"], "std_scope": row["std_scope"],
                "replicates": replicates,
            })
    return table


def experiment_intervention_timing(
    trigger_times: Sequence[float],
    n: int = 3000,
    m: int = 20,
    cap: int = 5,
    beta: float = 0.1,
    gamma: float = 1.0,
    initial_fraction: float = 0.01,
    t_max: float = 10.0,
    replicates: int = 50,
    base_seed: int = 0,
) -> ExperimentTable:
    """Degree-cap lockdown introduced at different times on a BA graph.

    The max infected fraction is measured from a delay of 33% of the
    remaining time after the trigger, i.e. over
    [trigger + 0.33 (t_max - trigger), t_max]. Trigger times should sit
    in the epidemic growth phase; once the epidemic has peaked, the
    delayed window only sees the die-out tail.
    """
    columns = [
        "experiment", "trigger_time", "window_start",
        "mean_windowed_peak", "std_windowed_peak",
        "mean_peak", "std_peak", "mean_scope", "std_scope", "replicates",
    ]
    table = ExperimentTable("exp03", columns, manifest={
        "trigger_times": list(trigger_times), "n": n, "m": m, "cap": cap,
        "beta": beta, "gamma": gamma, "initial_fraction": initial_fraction,
        "t_max": t_max, "replicates": replicates, "base_seed": base_seed,
    })
    source = NetworkSource.ba(n, m, label=f"ba(n={n},m={m})")
    for trigger in trigger_times:
        if not 0 < trigger < t_max:
            raise ParameterError(f"trigger time {trigger} outside (0, {t_max})")
        window_start = trigger + 0.33 * (t_max - trigger)
        spec = SweepSpec(
            networks=[source], betas=[beta], gamma=gamma,
            initial_fraction=initial_fraction, t_max=t_max,
            replicates=replicates, base_seed=base_seed,
            intervention=InterventionSpec(trigger, "degree_cap", cap=cap, seed=base_seed),
            measure_from=window_start,
        )
        row = run_replicates(spec, source, beta)
        table.rows.append({
            "experiment": "exp03", "trigger_time": trigger,
            "window_start": window_start,
            "mean_windowed_peak": row["mean_windowed_peak"],
            "std_windowed_peak": row["std_windowed_peak"],
            "mean_peak": row["mean_peak"], "std_peak": row["std_peak"],
            "mean_scope": row["mean_scope"], "std_scope": row["std_scope"],
            "replicates": replicates,
        })
    return table


def count_waves(
    times: np.ndarray,
    mean_i_fraction: np.ndarray,
    smooth_window: float,
    min_height: float = 0.01,
    min_prominence: float = 0.005,
) -> int:
    """Local maxima of the smoothed infected-fraction curve.

    Stochastic I(t) is noisy, so the curve is moving-average smoothed
    first; a wave must rise above min_height and stand out by
    min_prominence.
    """
    if len(times) < 3:
        return 0
    dt = times[1] - times[0]
    w = max(1, int(round(smooth_window / dt)))
    kernel = np.ones(w) / w
    smoothed = np.convolve(mean_i_fraction, kernel, mode="same")
    peaks, _ = find_peaks(smoothed, height=min_height, prominence=min_prominence)
    return len(peaks)


def experiment_sirs(
    networks: Sequence[NetworkSource],
    beta: float = 0.3,
    gamma: float = 1.0,
    alpha: float = 0.2,
    t_max: float = 100.0,
    initial_fraction: float = 0.01,
    replicates: int = 50,
    base_seed: int = 0,
    grid_points: int = 1000,
    include_sir_control: bool = True,
    wave_min_height: float = 0.01,
    wave_min_prominence: float = 0.005,
) -> tuple[ExperimentTable, dict[str, tuple[np.ndarray, np.ndarray]]]:
    """Waning-immunity waves: SIRS runs per network plus an SIR control row.

    Returns the table and, per row label, the (grid, mean infected
    fraction) curve behind the wave count. Smoothing window is t_max/100.
    """
    if alpha <= 0:
        raise ParameterError("experiment needs a positive waning rate")
    columns = [
        "experiment", "network", "alpha", "waves",
        "long_run_mean_infected", "replicates",
    ]
    table = ExperimentTable("exp04", columns, manifest={
        "beta": beta, "gamma": gamma, "alpha": alpha, "t_max": t_max,
        "initial_fraction": initial_fraction, "replicates": replicates,
        "base_seed": base_seed, "grid_points": grid_points,
        "wave_min_height": wave_min_height,
        "wave_min_prominence": wave_min_prominence,
    })
    grid = np.linspace(0.0, t_max, grid_points)
    curves: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    alphas = [alpha] + ([0.0] if include_sir_control else [])
    for source in networks:
        for a in alphas:
            params = RateParams(beta, gamma, a)
            tasks = [
                {
                    "source": source, "params": params,
                    "initial_fraction": initial_fraction, "t_max": t_max,
                    "base_seed": base_seed, "index": i, "grid": grid,
                }
                for i in range(replicates)
            ]
            results = _run_batch(tasks)
            mean_curve = np.mean([r["i_curve"] for r in results], axis=0)
            waves = count_waves(
                grid, mean_curve, smooth_window=t_max / 100.0,
                min_height=wave_min_height, min_prominence=wave_min_prominence,
            )
            label = source.label if a > 0 else f"{source.label}[sir-control]"
            tail = mean_curve[grid >= t_max / 2.0]
            table.rows.append({
                "experiment": "exp04", "network": label, "alpha": a,
                "waves": waves,
                "long_run_mean_infected": float(np.mean(tail)),
                "replicates": replicates,
            })
            curves[label] = (grid, mean_curve)
    return table, curves
