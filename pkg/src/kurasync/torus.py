"""Angle arithmetic on the circle and arc-based synchrony measures.

Phases are represented in the interval (-pi, pi]. Two global measures of a
phase configuration are used throughout the toolkit:

* the magnitude r of the centroid (1/n) sum_j exp(i theta_j), an average
  synchrony index in [0, 1], and
* the enclosing-arc length, the length of the tightest arc containing all
  phases, a worst-case synchrony index in [0, 2 pi).

For configurations inside a closed half-circle the enclosing-arc length
equals the maximum pairwise geodesic distance. The two indices are linked:
an arc of length gamma <= pi forces r >= cos(gamma / 2), and conversely a
half-circle configuration with centroid magnitude r fits in an arc of
length 2 arccos(r).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(x):
    """Normalize angles to the interval (-pi, pi].

    Accepts scalars or arrays; note the closed right endpoint: -pi wraps
    to +pi.
    """
    wrapped = np.pi - (np.pi - np.asarray(x, dtype=float)) % TWO_PI
    if np.ndim(x) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class PhaseVector:
    """An ordered, normalized array of n >= 1 phases."""

    angles: np.ndarray

    def __post_init__(self):
        values = wrap_angle(np.atleast_1d(np.asarray(self.angles, dtype=float)))
        if values.ndim != 1 or values.size < 1:
            raise ValueError("a phase vector needs at least one angle")
        values = np.array(values, dtype=float)
        values.flags.writeable = False
        object.__setattr__(self, "angles", values)

    @property
    def n(self) -> int:
        return self.angles.size

    def arc_length(self) -> float:
        return enclosing_arc_length(self.angles)

    def order(self) -> "OrderParameter":
        return order_parameter(self.angles)


@dataclass(frozen=True)
class OrderParameter:
    """Centroid magnitude and phase of a phase configuration.

    ``phase`` is reported as 0.0 with ``phase_defined=False`` when the
    centroid magnitude is numerically zero (e.g. the splay state), where
    the argument of the centroid is genuinely undefined.
    """

    magnitude: float
    phase: float
    phase_defined: bool = True


def _as_phases(theta) -> np.ndarray:
    if isinstance(theta, PhaseVector):
        return theta.angles
    arr = np.atleast_1d(np.asarray(theta, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("expected a 1-D array of at least one angle")
    return wrap_angle(arr)


def geodesic_distance(a: float, b: float) -> float:
    """Shortest angular distance between two angles, in [0, pi]."""
    return abs(wrap_angle(float(a) - float(b)))


def enclosing_arc_length(theta) -> float:
    """Length of the tightest arc containing every phase, in [0, 2 pi).

    Computed as 2 pi minus the largest circular gap between sorted phases.
    A configuration lies inside an arc of length gamma exactly when this
    value is <= gamma. For results <= pi it coincides with the maximum
    pairwise geodesic distance.
    """
    phases = np.sort(_as_phases(theta))
    if phases.size == 1:
        return 0.0
    gaps = np.diff(phases)
    wrap_gap = phases[0] + TWO_PI - phases[-1]
    return float(TWO_PI - max(gaps.max(initial=0.0), wrap_gap))


def enclosing_arc_lengths(thetas: np.ndarray) -> np.ndarray:
    """Row-wise enclosing-arc length for a (steps, n) matrix of phases."""
    phases = np.sort(wrap_angle(np.asarray(thetas, dtype=float)), axis=1)
    if phases.shape[1] == 1:
        return np.zeros(phases.shape[0])
    gaps = np.diff(phases, axis=1)
    wrap_gap = phases[:, 0] + TWO_PI - phases[:, -1]
    largest = np.maximum(gaps.max(axis=1), wrap_gap)
    return TWO_PI - largest


@dataclass(frozen=True)
class ArcExtremes:
    """Enclosing arc with its two boundary positions and boundary indices.

    ``min_indices`` (``max_indices``) lists every oscillator sitting at the
    counterclockwise start (end) of the arc; more than one entry means the
    boundary is tied.
    """

    length: float
    min_position: float
    max_position: float
    min_indices: np.ndarray
    max_indices: np.ndarray

    @property
    def tied(self) -> bool:
        return self.min_indices.size > 1 or self.max_indices.size > 1


def arc_extremes(theta, tie_tol: float = 1e-9) -> ArcExtremes:
    """Locate the enclosing arc and the oscillators on its boundary."""
    phases = _as_phases(theta)
    n = phases.size
    order = np.argsort(phases)
    sorted_phases = phases[order]
    if n == 1:
        idx = np.array([0])
        return ArcExtremes(0.0, float(phases[0]), float(phases[0]), idx, idx)
    gaps = np.diff(sorted_phases)
    wrap_gap = sorted_phases[0] + TWO_PI - sorted_phases[-1]
    all_gaps = np.concatenate([gaps, [wrap_gap]])
    g = int(np.argmax(all_gaps))
    length = float(TWO_PI - all_gaps[g])
    # Arc runs counterclockwise from the phase after the widest gap to the
    # phase before it.
    min_position = float(sorted_phases[(g + 1) % n])
    max_position = float(sorted_phases[g])
    dist_min = np.abs(wrap_angle(phases - min_position))
    dist_max = np.abs(wrap_angle(phases - max_position))
    min_indices = np.flatnonzero(dist_min <= tie_tol)
    max_indices = np.flatnonzero(dist_max <= tie_tol)
    return ArcExtremes(length, min_position, max_position, min_indices, max_indices)


def order_parameter(theta, zero_tol: float = 1e-12) -> OrderParameter:
    """Centroid r e^{i psi} = (1/n) sum_j e^{i theta_j} of the phasors."""
    phases = _as_phases(theta)
    centroid = np.exp(1j * phases).mean()
    r = float(min(abs(centroid), 1.0))
    if r < zero_tol:
        return OrderParameter(r, 0.0, phase_defined=False)
    return OrderParameter(r, float(np.angle(centroid)), phase_defined=True)


def cohesiveness_bounds(gamma: float) -> tuple[float, float]:
    """Centroid-magnitude interval [cos(gamma/2), 1] guaranteed by an arc.

    Valid for arc lengths gamma in [0, pi].
    """
    if not 0.0 <= gamma <= np.pi:
        raise ValueError(f"arc length must lie in [0, pi], got {gamma}")
    return (float(np.cos(gamma / 2.0)), 1.0)


def arc_from_order(r: float) -> tuple[float, float]:
    """Arc-length interval [2 arccos(r), pi] implied by centroid magnitude r.

    Applies to configurations already known to fit in a half-circle.
    """
    if not -1e-12 <= r <= 1.0 + 1e-12:
        raise ValueError(f"order-parameter magnitude must lie in [0, 1], got {r}")
    r = min(max(r, 0.0), 1.0)
    return (float(2.0 * np.arccos(r)), float(np.pi))
