"""Seeded parameter studies and scenario runs with summary statistics.

``run_study`` reproduces the statistical comparison of the three finite-n
coupling thresholds under uniformly sampled frequencies: for each network
size the necessary, exact, and explicit estimates are averaged over
independent seeded trials. ``run_scenario`` integrates one configured
network and summarizes the cohesiveness and frequency-tracking behaviour
that the trajectory is expected to exhibit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import (
    exact_implicit_coupling,
    explicit_critical_coupling,
    necessary_bound,
    performance_envelope,
)
from .dynamics import (
    NetworkSpec,
    State,
    Trajectory,
    integrate,
    interaction_laplacian,
    laplacian_pseudoinverse,
)
from .errors import NumericalFailure
from .profiles import SwitchingProfile

_SEED_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


@dataclass(frozen=True)
class StudyRow:
    """Averaged coupling thresholds for one network size."""

    n: int
    k_necessary: float
    k_exact: float
    k_explicit: float
    trials: int
    seed: int


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial stream seed: the study seed xor the trial index."""
    return int((np.uint64(seed) & _SEED_MASK) ^ (np.uint64(trial) & _SEED_MASK))


def run_study(n_grid, trials: int, interval, seed: int) -> list[StudyRow]:
    """Average the three thresholds over seeded uniform frequency draws.

    Each (size, trial) pair re-creates its generator from the derived trial
    seed, so results do not depend on execution order and are reproducible
    bit for bit. Sums are accumulated in fixed trial order.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    lo, hi = map(float, interval)
    rows = []
    for n in n_grid:
        if n < 2:
            raise ValueError("study sizes must be at least 2")
        total = np.zeros(3)
        for trial in range(trials):
            rng = np.random.default_rng(trial_seed(seed, trial))
            omega = rng.uniform(lo, hi, size=int(n))
            total += (
                necessary_bound(omega),
                exact_implicit_coupling(omega).coupling,
                explicit_critical_coupling(omega),
            )
        means = total / trials
        if not (means[0] <= means[1] + 1e-9 and means[1] <= means[2] + 1e-9):
            raise NumericalFailure(f"threshold ordering violated for n={n}: {means}")
        rows.append(StudyRow(int(n), float(means[0]), float(means[1]),
                             float(means[2]), trials, int(seed)))
    return rows


def fit_decay_rate(times: np.ndarray, values: np.ndarray, *,
                   floor: float = 1e-11) -> float | None:
    """Least-squares exponential rate of ``values``: the negated slope of
    log(values) over time, ignoring samples at or below ``floor``.

    Returns None when fewer than two usable samples remain.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = values > floor
    if mask.sum() < 2:
        return None
    t = times[mask]
    logs = np.log(values[mask])
    slope = np.polyfit(t, logs, 1)[0]
    return float(-slope)


@dataclass(frozen=True)
class ScenarioResult:
    trajectory: Trajectory
    summary: dict


def run_scenario(spec: NetworkSpec, state0: State, t_final: float,
                 step: float | None = None, *, entry_margin: float = 1e-3,
                 accel_gate: float = 1e-4, decay_floor: float = 1e-11) -> ScenarioResult:
    """Integrate one network and summarize its synchronization behaviour.

    The summary reports the cohesiveness envelope derived from the
    profile's declared support, when the arc first enters the guaranteed
    terminal level (within ``entry_margin``), how large it gets afterwards,
    per-dwell frequency-decay fits for switching profiles, and, for smooth
    profiles, the worst late-time gap between the frequency disagreement
    and its slowly-varying target once the centered frequency acceleration
    stays below ``accel_gate``.
    """
    trajectory = integrate(spec, state0, t_final, step)
    times = trajectory.times
    arc = trajectory.arc_length

    lo, hi = spec.profile.support
    k_critical = hi - lo
    summary: dict = {
        "model": spec.model,
        "coupling": spec.coupling,
        "k_critical": k_critical,
        "t_final": float(times[-1]),
        "step": trajectory.step,
        "max_arc": float(arc.max()),
        "terminal_arc": float(arc[-1]),
        "terminal_order": float(trajectory.order_magnitude[-1]),
    }

    gamma_min = None
    if spec.coupling > k_critical:
        envelope = performance_envelope(spec.coupling, k_critical)
        gamma_min = envelope.gamma_min
        summary["gamma_min"] = envelope.gamma_min
        summary["gamma_max"] = envelope.gamma_max
        summary["r_floor"] = envelope.r_floor
        inside = np.flatnonzero(arc <= gamma_min + entry_margin)
        if inside.size:
            entry_index = int(inside[0])
            summary["entry_time"] = float(times[entry_index])
            summary["max_arc_after_entry"] = float(arc[entry_index:].max())
        else:
            summary["entry_time"] = None
            summary["max_arc_after_entry"] = None

    if isinstance(spec.profile, SwitchingProfile):
        switch_times = [float(t) for t in spec.profile.times[1:]]
        step_size = trajectory.step
        indices = [int(round(t / step_size)) for t in switch_times]
        summary["switch_times"] = switch_times
        summary["arc_at_switches"] = [float(arc[i]) for i in indices if i < arc.size]
        fits = []
        boundaries = [0] + [i for i in indices if i < arc.size] + [arc.size - 1]
        for start, end in zip(boundaries[:-1], boundaries[1:]):
            if end <= start + 1:
                continue
            rate = fit_decay_rate(times[start:end], trajectory.disagreement[start:end],
                                  floor=decay_floor)
            fits.append({"t_start": float(times[start]), "t_end": float(times[end]),
                         "rate": rate})
        summary["interval_decay_fits"] = fits

    accel = spec.profile.second_derivative_many(times)
    centered_accel = np.abs(accel - accel.mean(axis=1, keepdims=True)).max(axis=1)
    if centered_accel.max() > 0.0 or not spec.profile.is_constant:
        quiet = centered_accel < accel_gate
        gate_index = None
        if quiet[-1]:
            # First index after which the acceleration stays quiet.
            noisy = np.flatnonzero(~quiet)
            gate_index = int(noisy[-1]) + 1 if noisy.size else 0
        if gate_index is not None:
            tail_start = max(gate_index, arc.size // 2)
            gaps = _tracking_gaps(spec, trajectory, tail_start)
            summary["tail_start"] = float(times[tail_start])
            summary["tail_gap"] = float(gaps.max()) if gaps.size else None
        else:
            summary["tail_start"] = None
            summary["tail_gap"] = None

    return ScenarioResult(trajectory, summary)


def _tracking_gaps(spec: NetworkSpec, trajectory: Trajectory, start: int) -> np.ndarray:
    """||dtheta - w_ref - L^+ Omega_dot||_inf per step from ``start`` on."""
    from .dynamics import _sync_reference
    from .torus import wrap_angle

    times = trajectory.times[start:]
    theta = wrap_angle(trajectory.theta[start:])
    freqs = trajectory.frequencies[start:]
    reference = _sync_reference(spec, times)
    omega_dot = spec.profile.derivative_many(times)
    centered = omega_dot - omega_dot.mean(axis=1, keepdims=True)
    gaps = np.empty(len(times))
    for i in range(len(times)):
        laplacian = interaction_laplacian(spec.coupling, theta[i])
        target = laplacian_pseudoinverse(laplacian) @ centered[i]
        gaps[i] = np.abs(freqs[i] - reference[i] - target).max()
    return gaps
