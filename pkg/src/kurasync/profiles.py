"""Natural-frequency profiles omega(t) and damping/inertia parameters.

A profile maps time to the n-vector of natural frequencies and declares a
compact support interval that every evaluation stays inside. Constant
profiles cover fixed vectors, bipolar two-level vectors, and seeded uniform
samples; time-varying behaviour comes from piecewise-constant switching
(right-continuous at switch instants) and smooth per-oscillator sinusoids.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


class FrequencyProfile(abc.ABC):
    """Time-dependent natural frequencies with a declared support."""

    @property
    @abc.abstractmethod
    def n(self) -> int:
        """Number of oscillators."""

    @property
    @abc.abstractmethod
    def support(self) -> tuple[float, float]:
        """Declared interval containing every evaluation."""

    @property
    def is_constant(self) -> bool:
        return False

    @abc.abstractmethod
    def evaluate(self, t: float) -> np.ndarray:
        """Frequencies at time t >= 0."""

    def evaluate_many(self, times: np.ndarray) -> np.ndarray:
        """Frequencies at each time in ``times``, shape (len(times), n)."""
        return np.stack([self.evaluate(float(t)) for t in times])

    def derivative(self, t: float) -> np.ndarray:
        """d omega / dt; zero for constant and piecewise-constant profiles."""
        return np.zeros(self.n)

    def derivative_many(self, times: np.ndarray) -> np.ndarray:
        return np.stack([self.derivative(float(t)) for t in times])

    def second_derivative(self, t: float) -> np.ndarray:
        return np.zeros(self.n)

    def second_derivative_many(self, times: np.ndarray) -> np.ndarray:
        return np.stack([self.second_derivative(float(t)) for t in times])


@dataclass(frozen=True)
class ConstantProfile(FrequencyProfile):
    """A fixed frequency vector."""

    values: np.ndarray
    declared_support: tuple[float, float] | None = None

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if values.ndim != 1 or values.size < 1:
            raise ConfigError("constant profile needs a 1-D vector of frequencies")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.declared_support is not None:
            lo, hi = map(float, self.declared_support)
            if lo > hi:
                raise ConfigError("support interval is reversed")
            if values.min() < lo - 1e-12 or values.max() > hi + 1e-12:
                raise ConfigError("constant profile values exit the declared support")
            object.__setattr__(self, "declared_support", (lo, hi))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def support(self) -> tuple[float, float]:
        if self.declared_support is not None:
            return self.declared_support
        return (float(self.values.min()), float(self.values.max()))

    @property
    def is_constant(self) -> bool:
        return True

    def evaluate(self, t: float) -> np.ndarray:
        return self.values

    def evaluate_many(self, times: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.values, (len(times), self.n))


def bipolar_profile(low: float, high: float, n_low: int, n_high: int) -> ConstantProfile:
    """Two-level frequency vector: n_low entries at ``low``, n_high at ``high``."""
    if n_low < 1 or n_high < 1:
        raise ConfigError("bipolar profile needs at least one oscillator per level")
    if high < low:
        raise ConfigError("bipolar profile requires high >= low")
    values = np.concatenate([np.full(n_low, float(low)), np.full(n_high, float(high))])
    return ConstantProfile(values, declared_support=(float(low), float(high)))


def uniform_sample_profile(n: int, interval: tuple[float, float], seed: int) -> ConstantProfile:
    """Frequencies drawn once from a seeded uniform distribution on ``interval``.

    The draw is deterministic for a given seed, so runs are reproducible.
    """
    lo, hi = map(float, interval)
    if lo > hi:
        raise ConfigError("sampling interval is reversed")
    rng = np.random.default_rng(np.uint64(seed) & np.uint64(0xFFFFFFFFFFFFFFFF))
    values = rng.uniform(lo, hi, size=int(n))
    return ConstantProfile(values, declared_support=(lo, hi))


@dataclass(frozen=True)
class SwitchingProfile(FrequencyProfile):
    """Piecewise-constant frequencies, right-continuous at switch instants.

    ``times`` must start at 0 and be strictly increasing with dwell time at
    least ``min_dwell``; row k of ``values`` applies on [times[k], times[k+1])
    and the final row applies forever after.
    """

    times: np.ndarray
    values: np.ndarray
    declared_support: tuple[float, float]
    min_dwell: float = 1e-9

    def __post_init__(self):
        times = np.atleast_1d(np.asarray(self.times, dtype=float))
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if times[0] != 0.0:
            raise ConfigError("switching profile must start at t = 0")
        if values.shape[0] != times.size:
            raise ConfigError("switching profile needs one value row per switch time")
        if self.min_dwell <= 0:
            raise ConfigError("dwell time bound must be positive")
        dwells = np.diff(times)
        if times.size > 1 and dwells.min() < self.min_dwell:
            raise ConfigError("switch times must be strictly increasing with dwell >= min_dwell")
        lo, hi = map(float, self.declared_support)
        if values.min() < lo - 1e-12 or values.max() > hi + 1e-12:
            raise ConfigError("switching profile values exit the declared support")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "declared_support", (lo, hi))

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def support(self) -> tuple[float, float]:
        return self.declared_support

    def _segment(self, t) -> np.ndarray:
        # Tiny forward nudge so a switch instant landing one ulp short of its
        # grid time still evaluates to the post-switch value.
        nudged = np.asarray(t, dtype=float) + 1e-12 * np.maximum(1.0, np.abs(t))
        idx = np.searchsorted(self.times, nudged, side="right") - 1
        return np.maximum(idx, 0)

    def evaluate(self, t: float) -> np.ndarray:
        return self.values[int(self._segment(t))]

    def evaluate_many(self, times: np.ndarray) -> np.ndarray:
        return self.values[self._segment(np.asarray(times, dtype=float))]


@dataclass(frozen=True)
class SinusoidalProfile(FrequencyProfile):
    """Smooth per-oscillator sinusoids: omega_i(t) = base_i + amp_i sin(rate_i t).

    Construction rejects parameters whose range base_i +/- |amp_i| exits the
    declared support.
    """

    base: np.ndarray
    amplitude: np.ndarray
    rate: np.ndarray
    declared_support: tuple[float, float]

    def __post_init__(self):
        base = np.atleast_1d(np.asarray(self.base, dtype=float))
        amp = np.broadcast_to(np.asarray(self.amplitude, dtype=float), base.shape).copy()
        rate = np.broadcast_to(np.asarray(self.rate, dtype=float), base.shape).copy()
        lo, hi = map(float, self.declared_support)
        if np.any(base - np.abs(amp) < lo - 1e-12) or np.any(base + np.abs(amp) > hi + 1e-12):
            raise ConfigError("sinusoidal profile range exits the declared support")
        for name, arr in (("base", base), ("amplitude", amp), ("rate", rate)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "declared_support", (lo, hi))

    @property
    def n(self) -> int:
        return self.base.size

    @property
    def support(self) -> tuple[float, float]:
        return self.declared_support

    def evaluate(self, t: float) -> np.ndarray:
        return self.base + self.amplitude * np.sin(self.rate * t)

    def evaluate_many(self, times: np.ndarray) -> np.ndarray:
        phase = np.outer(np.asarray(times, dtype=float), self.rate)
        return self.base + self.amplitude * np.sin(phase)

    def derivative(self, t: float) -> np.ndarray:
        return self.amplitude * self.rate * np.cos(self.rate * t)

    def derivative_many(self, times: np.ndarray) -> np.ndarray:
        phase = np.outer(np.asarray(times, dtype=float), self.rate)
        return self.amplitude * self.rate * np.cos(phase)

    def second_derivative(self, t: float) -> np.ndarray:
        return -self.amplitude * self.rate**2 * np.sin(self.rate * t)

    def second_derivative_many(self, times: np.ndarray) -> np.ndarray:
        phase = np.outer(np.asarray(times, dtype=float), self.rate)
        return -self.amplitude * self.rate**2 * np.sin(phase)


@dataclass(frozen=True)
class DampingInertiaSpec:
    """Per-oscillator time constants D (length n) and inertiae M (length m).

    Oscillators 0..m-1 are the second-order units; all entries must be
    positive.
    """

    damping: np.ndarray
    inertia: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        damping = np.atleast_1d(np.asarray(self.damping, dtype=float))
        inertia = np.asarray(self.inertia, dtype=float).reshape(-1)
        if damping.size < 1 or np.any(damping <= 0):
            raise ConfigError("damping entries must all be positive")
        if np.any(inertia <= 0):
            raise ConfigError("inertia entries must all be positive")
        if inertia.size > damping.size:
            raise ConfigError("cannot have more inertiae than oscillators")
        damping.flags.writeable = False
        inertia.flags.writeable = False
        object.__setattr__(self, "damping", damping)
        object.__setattr__(self, "inertia", inertia)

    @property
    def n(self) -> int:
        return self.damping.size

    @property
    def m(self) -> int:
        return self.inertia.size

    @classmethod
    def unit(cls, n: int, m: int = 0) -> "DampingInertiaSpec":
        return cls(np.ones(n), np.ones(m))


@dataclass(frozen=True)
class OmegaStats:
    minimum: float
    maximum: float
    average: float
    variance: float


def omega_stats(omega) -> OmegaStats:
    """Exact sample statistics of a frequency vector (population variance)."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if w.size < 1:
        raise ValueError("need at least one frequency")
    return OmegaStats(float(w.min()), float(w.max()), float(w.mean()), float(w.var()))


def omega_sync(omega, damping) -> float:
    """Common locked frequency sum(omega_i) / sum(D_i) of the damped network."""
    w = np.asarray(omega, dtype=float)
    d = np.asarray(damping, dtype=float)
    if w.shape != d.shape:
        raise ValueError("frequency and damping vectors must have matching length")
    return float(w.sum() / d.sum())


def scaled_frequencies(omega, damping) -> np.ndarray:
    """Frequencies relative to the locked rotation: omega_i - D_i * omega_sync.

    The result always sums to zero, which is what makes the rotating-frame
    equilibrium equations solvable.
    """
    w = np.asarray(omega, dtype=float)
    d = np.asarray(damping, dtype=float)
    return w - d * omega_sync(w, d)
