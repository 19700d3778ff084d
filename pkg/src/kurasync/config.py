"""Run-configuration parsing, output provenance, and atomic file writes.

Configurations are plain JSON. Parsing is strict: unknown fields are
rejected by name so typos cannot silently change a run. Every emitted file
embeds the tool version, a hash of the resolved configuration, and the
seed, so results can be traced back to their inputs.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import MODELS, NetworkSpec, State
from .errors import ConfigError
from .profiles import (
    ConstantProfile,
    DampingInertiaSpec,
    FrequencyProfile,
    SinusoidalProfile,
    SwitchingProfile,
    bipolar_profile,
    uniform_sample_profile,
)


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def config_hash(resolved: dict) -> str:
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def output_metadata(resolved: dict, seed) -> dict:
    return {
        "kurasync_version": __version__,
        "config_hash": config_hash(resolved),
        "seed": seed,
    }


def _require_keys(data: dict, allowed: set[str], required: set[str], context: str):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown field '{key}' in {context} config")
    for key in required:
        if key not in data:
            raise ConfigError(f"missing field '{key}' in {context} config")


def _float_list(value, context: str) -> list[float]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"field '{context}' must be a list of numbers")
    try:
        return [float(x) for x in value]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field '{context}' must be a list of numbers") from exc


def parse_profile(data: dict) -> FrequencyProfile:
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("profile must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == "constant-vector":
        _require_keys(data, {"kind", "values", "support"}, {"values"}, "profile")
        support = tuple(_float_list(data["support"], "profile.support")) if "support" in data else None
        return ConstantProfile(_float_list(data["values"], "profile.values"), support)
    if kind == "bipolar":
        _require_keys(data, {"kind", "low", "high", "n_low", "n_high"},
                      {"low", "high", "n_low", "n_high"}, "profile")
        return bipolar_profile(float(data["low"]), float(data["high"]),
                               int(data["n_low"]), int(data["n_high"]))
    if kind == "uniform-sample":
        _require_keys(data, {"kind", "n", "interval", "seed"}, {"n", "interval", "seed"}, "profile")
        interval = _float_list(data["interval"], "profile.interval")
        if len(interval) != 2:
            raise ConfigError("field 'profile.interval' must be [low, high]")
        return uniform_sample_profile(int(data["n"]), (interval[0], interval[1]), int(data["seed"]))
    if kind == "piecewise-switching":
        _require_keys(data, {"kind", "times", "values", "support", "min_dwell"},
                      {"times", "values", "support"}, "profile")
        values = data["values"]
        if not isinstance(values, list) or not all(isinstance(row, (list, tuple)) for row in values):
            raise ConfigError("field 'profile.values' must be a list of frequency rows")
        return SwitchingProfile(
            np.asarray(_float_list(data["times"], "profile.times")),
            np.asarray([_float_list(row, "profile.values") for row in values]),
            tuple(_float_list(data["support"], "profile.support")),
            float(data.get("min_dwell", 1e-9)),
        )
    if kind == "smooth-sinusoidal":
        _require_keys(data, {"kind", "base", "amplitude", "rate", "support"},
                      {"base", "amplitude", "rate", "support"}, "profile")
        return SinusoidalProfile(
            np.asarray(_float_list(data["base"], "profile.base")),
            np.asarray(_float_list(data["amplitude"], "profile.amplitude")),
            np.asarray(_float_list(data["rate"], "profile.rate")),
            tuple(_float_list(data["support"], "profile.support")),
        )
    raise ConfigError(f"unknown profile kind '{kind}'")


def _parse_network(data: dict, context: str) -> tuple[NetworkSpec, dict]:
    allowed = {"model", "profile", "coupling", "coupling_ratio", "damping", "inertia", "frame"}
    extra_by_context = {
        "simulate": {"theta0", "theta_dot0", "t_final", "step", "seed"},
        "equilibria": {"lambda_grid", "inertia_scalings", "seed", "theta0"},
    }
    _require_keys(data, allowed | extra_by_context.get(context, set()), {"profile"}, context)

    profile = parse_profile(data["profile"])
    n = profile.n
    model = data.get("model", "first-order")
    if model not in MODELS:
        raise ConfigError(f"unknown model '{model}'")

    damping = _float_list(data["damping"], "damping") if "damping" in data else None
    inertia = _float_list(data["inertia"], "inertia") if "inertia" in data else []
    if damping is None:
        damping = [1.0] * n
    dd = DampingInertiaSpec(np.asarray(damping), np.asarray(inertia))

    if "coupling" in data and "coupling_ratio" in data:
        raise ConfigError("give either 'coupling' or 'coupling_ratio', not both")
    if "coupling" in data:
        coupling = float(data["coupling"])
    elif "coupling_ratio" in data:
        lo, hi = profile.support
        span = hi - lo
        if span <= 0.0:
            raise ConfigError("'coupling_ratio' needs a profile with positive support width")
        coupling = float(data["coupling_ratio"]) * span
    else:
        raise ConfigError(f"missing field 'coupling' in {context} config")

    spec = NetworkSpec(
        profile=profile,
        coupling=coupling,
        dd=dd,
        model=model,
        frame_rate=float(data.get("frame", 0.0)),
    )
    resolved = {
        "model": model,
        "coupling": coupling,
        "damping": damping,
        "inertia": list(inertia),
        "frame": spec.frame_rate,
        "profile": data["profile"],
    }
    return spec, resolved


def _parse_initial_phases(value, n: int, default_seed: int) -> np.ndarray:
    if value is None:
        return np.zeros(n)
    if isinstance(value, dict):
        _require_keys(value, {"arc", "seed", "center"}, {"arc"}, "theta0")
        arc = float(value["arc"])
        center = float(value.get("center", 0.0))
        rng = np.random.default_rng(int(value.get("seed", default_seed)))
        return center + arc * (rng.random(n) - 0.5)
    phases = np.asarray(_float_list(value, "theta0"))
    if phases.size != n:
        raise ConfigError(f"theta0 has {phases.size} entries for {n} oscillators")
    return phases


@dataclass(frozen=True)
class SimulateConfig:
    spec: NetworkSpec
    state0: State
    t_final: float
    step: float
    seed: int
    resolved: dict


def parse_simulate_config(data: dict) -> SimulateConfig:
    spec, resolved = _parse_network(data, "simulate")
    seed = int(data.get("seed", 0))
    step = float(data["step"]) if "step" in data else 1e-3 / spec.coupling
    t_final = float(data["t_final"]) if "t_final" in data else 50.0 / spec.coupling
    theta0 = _parse_initial_phases(data.get("theta0"), spec.n, seed)
    m_state = spec.velocity_count
    if "theta_dot0" in data:
        theta_dot0 = np.asarray(_float_list(data["theta_dot0"], "theta_dot0"))
        if theta_dot0.size != m_state:
            raise ConfigError(f"theta_dot0 has {theta_dot0.size} entries, expected {m_state}")
    else:
        theta_dot0 = np.zeros(m_state)
    resolved.update({
        "t_final": t_final,
        "step": step,
        "seed": seed,
        "theta0": [float(x) for x in theta0],
        "theta_dot0": [float(x) for x in theta_dot0],
    })
    return SimulateConfig(spec, State(theta0, theta_dot0), t_final, step, seed, resolved)


@dataclass(frozen=True)
class StudyConfig:
    n_grid: list[int]
    trials: int
    interval: tuple[float, float]
    seed: int
    resolved: dict


def parse_study_config(data: dict) -> StudyConfig:
    _require_keys(data, {"n_grid", "trials", "interval", "seed"}, {"n_grid"}, "study")
    n_grid = [int(n) for n in data["n_grid"]]
    trials = int(data.get("trials", 200))
    interval_list = _float_list(data.get("interval", [-1.0, 1.0]), "interval")
    if len(interval_list) != 2 or interval_list[0] >= interval_list[1]:
        raise ConfigError("field 'interval' must be [low, high] with low < high")
    seed = int(data.get("seed", 0))
    resolved = {"n_grid": n_grid, "trials": trials, "interval": interval_list, "seed": seed}
    return StudyConfig(n_grid, trials, (interval_list[0], interval_list[1]), seed, resolved)


@dataclass(frozen=True)
class EquilibriaConfig:
    spec: NetworkSpec
    lambdas: tuple[float, ...]
    m_scalings: tuple[float, ...]
    theta0: np.ndarray | None
    seed: int
    resolved: dict


def parse_equilibria_config(data: dict) -> EquilibriaConfig:
    spec, resolved = _parse_network(data, "equilibria")
    lambdas = tuple(_float_list(data.get("lambda_grid", [0.0, 0.5, 1.0]), "lambda_grid"))
    scalings = tuple(_float_list(data.get("inertia_scalings", [0.1, 1.0, 10.0]), "inertia_scalings"))
    seed = int(data.get("seed", 0))
    theta0 = None
    if "theta0" in data:
        theta0 = np.asarray(_float_list(data["theta0"], "theta0"))
        if theta0.size != spec.n:
            raise ConfigError(f"theta0 has {theta0.size} entries for {spec.n} oscillators")
    resolved.update({
        "lambda_grid": list(lambdas),
        "inertia_scalings": list(scalings),
        "seed": seed,
    })
    if theta0 is not None:
        resolved["theta0"] = [float(x) for x in theta0]
    return EquilibriaConfig(spec, lambdas, scalings, theta0, seed, resolved)


def atomic_write_text(path, text: str):
    """Write via a sibling temp file and rename, so partial output is never
    visible at the destination."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    except OSError as exc:
        raise ConfigError(f"output path {path} is not writable: {exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def atomic_write_json(path, payload: dict):
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def meta_lines(meta: dict) -> list[str]:
    return [f"# {key}={value}" for key, value in meta.items()]


def format_float(x: float) -> str:
    """Shortest decimal that round-trips (at most 17 significant digits)."""
    return repr(float(x))
