"""JSON run-configuration parsing and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError
from .experiments import NetworkSource, SweepSpec
from .interventions import InterventionSpec

ENGINES = ("gillespie", "abm", "ode")

_NETWORK_KEYS = {
    "er": {"n", "p"},
    "ws": {"n", "k", "p_rewire"},
    "ba": {"n", "m"},
    "edge_list": {"path", "compact_ids"},
    "well_mixed": {"n", "k_avg"},
}
_NETWORK_REQUIRED = {
    "er": {"n", "p"},
    "ws": {"n", "k", "p_rewire"},
    "ba": {"n", "m"},
    "edge_list": {"path"},
    "well_mixed": {"n", "k_avg"},
}


def _require(block: dict, key: str, path: str):
    if key not in block:
        raise ConfigError(f"missing required field {path}.{key}")
    return block[key]


def _check_keys(block: dict, allowed: set, path: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) under {path}: {sorted(unknown)}")


def parse_network_block(block: dict, path: str = "network") -> NetworkSource:
    """One of er/ws/ba/edge_list/well_mixed; exactly one source allowed."""
    if not isinstance(block, dict):
        raise ConfigError(f"{path} must be an object")
    kinds = [k for k in block if k in _NETWORK_KEYS]
    _check_keys(block, set(_NETWORK_KEYS), path)
    if len(kinds) != 1:
        raise ConfigError(
            f"{path} must name exactly one source, got {sorted(kinds) or 'none'}"
        )
    kind = kinds[0]
    inner = block[kind]
    if not isinstance(inner, dict):
        raise ConfigError(f"{path}.{kind} must be an object")
    _check_keys(inner, _NETWORK_KEYS[kind], f"{path}.{kind}")
    for req in _NETWORK_REQUIRED[kind]:
        _require(inner, req, f"{path}.{kind}")
    if kind == "er":
        return NetworkSource.er(int(inner["n"]), float(inner["p"]))
    if kind == "ws":
        return NetworkSource.ws(int(inner["n"]), int(inner["k"]), float(inner["p_rewire"]))
    if kind == "ba":
        return NetworkSource.ba(int(inner["n"]), int(inner["m"]))
    if kind == "edge_list":
        return NetworkSource.edge_list(str(inner["path"]), bool(inner.get("compact_ids", False)))
    return NetworkSource.well_mixed(int(inner["n"]), float(inner["k_avg"]))


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved single-run configuration."""

    network: NetworkSource
    beta: float
    gamma: float
    alpha: float
    initial_infected: int | float
    seed: int
    t_max: float
    engine: str = "gillespie"
    dt: float = 0.01
    interventions: tuple[InterventionSpec, ...] = ()
    trajectory_path: Optional[str] = None
    summary_path: Optional[str] = None

    def to_dict(self) -> dict:
        init: dict = {"seed": self.seed}
        if isinstance(self.initial_infected, float):
            init["fraction"] = self.initial_infected
        else:
            init["count"] = self.initial_infected
        out: dict = {
            "network": self.network.to_dict(),
            "rates": {"beta": self.beta, "gamma": self.gamma, "alpha": self.alpha},
            "init": init,
            "t_max": self.t_max,
            "engine": self.engine,
            "dt": self.dt,
            "interventions": [iv.to_dict() for iv in self.interventions],
        }
        if self.trajectory_path or self.summary_path:
            out["output"] = {}
            if self.trajectory_path:
                out["output"]["trajectory"] = self.trajectory_path
            if self.summary_path:
                out["output"]["summary"] = self.summary_path
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a single-run JSON config; defaults are resolved."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys(
        doc,
        {"network", "rates", "init", "t_max", "engine", "dt", "interventions", "output"},
        "config",
    )
    network = parse_network_block(_require(doc, "network", "config"))

    rates = _require(doc, "rates", "config")
    _check_keys(rates, {"beta", "gamma", "alpha"}, "rates")
    beta = float(_require(rates, "beta", "rates"))
    gamma = float(_require(rates, "gamma", "rates"))
    alpha = float(rates.get("alpha", 0.0))

    init = _require(doc, "init", "config")
    _check_keys(init, {"fraction", "count", "seed"}, "init")
    if ("fraction" in init) == ("count" in init):
        raise ConfigError("init must give exactly one of 'fraction' or 'count'")
    initial: int | float = (
        float(init["fraction"]) if "fraction" in init else int(init["count"])
    )
    seed = int(_require(init, "seed", "init"))

    t_max = float(_require(doc, "t_max", "config"))
    engine = doc.get("engine", "gillespie")
    if engine not in ENGINES:
        raise ConfigError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine in ("abm", "ode") and network.kind != "well_mixed":
        raise ConfigError(f"engine {engine!r} requires a well_mixed network block")

    interventions = tuple(
        InterventionSpec.from_dict(d) for d in doc.get("interventions", [])
    )
    if interventions and engine != "gillespie":
        raise ConfigError("interventions are only supported by the gillespie engine")

    output = doc.get("output", {})
    _check_keys(output, {"trajectory", "summary"}, "output")

    return RunConfig(
        network=network,
        beta=beta,
        gamma=gamma,
        alpha=alpha,
        initial_infected=initial,
        seed=seed,
        t_max=t_max,
        engine=engine,
        dt=float(doc.get("dt", 0.01)),
        interventions=interventions,
        trajectory_path=output.get("trajectory"),
        summary_path=output.get("summary"),
    )


def parse_sweep_config(text: str) -> SweepSpec:
    """Parse a sweep-spec JSON document into a SweepSpec."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    _check_keys(
        doc,
        {
            "networks", "betas", "gamma", "alpha", "initial_fraction",
            "t_max", "replicates", "base_seed", "intervention", "measure_from",
        },
        "sweep",
    )
    networks = [
        parse_network_block(b, f"networks[{i}]")
        for i, b in enumerate(_require(doc, "networks", "sweep"))
    ]
    intervention = (
        InterventionSpec.from_dict(doc["intervention"])
        if doc.get("intervention")
        else None
    )
    return SweepSpec(
        networks=networks,
        betas=[float(b) for b in _require(doc, "betas", "sweep")],
        gamma=float(doc.get("gamma", 1.0)),
        alpha=float(doc.get("alpha", 0.0)),
        initial_fraction=float(doc.get("initial_fraction", 0.01)),
        t_max=float(doc.get("t_max", 30.0)),
        replicates=int(doc.get("replicates", 50)),
        base_seed=int(doc.get("base_seed", 0)),
        intervention=intervention,
        measure_from=(
            float(doc["measure_from"]) if doc.get("measure_from") is not None else None
        ),
    )
