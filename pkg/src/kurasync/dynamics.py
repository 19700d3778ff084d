"""Fixed-step integration of all-to-all coupled phase-oscillator networks.

Five model variants share one engine. With coupling term
c_i(theta) = (K/n) sum_j sin(theta_i - theta_j):

* ``first-order``:            dtheta_i = omega_i - c_i
* ``first-order-multi-rate``: D_i dtheta_i = omega_i - c_i
* ``multi-rate``:             M_i ddtheta_i + D_i dtheta_i = omega_i - c_i
                              for i < m, first-order-multi-rate for the rest
* ``scaled``:                 dtheta_i = wbar_i - c_i with
                              wbar_i = omega_i - D_i * omega_sync
* ``scaled-with-frequency-dynamics``: the scaled phases plus m decoupled
  velocity states obeying dv_i = -(D_i / M_i) v_i

Integration is classical 4th-order Runge-Kutta with a fixed step on the
unwrapped real lift of the phases (the vector field is 2 pi periodic, so
dynamics are unaffected and no artificial jumps appear); wrapping happens
only inside diagnostics. Runs are bit-reproducible for identical inputs.

Per-step diagnostics recorded alongside the trajectory: enclosing-arc
length V, order-parameter magnitude r, all-n instantaneous frequencies,
the disagreement norm ||dtheta - w_ref 1|| against the network's locked
frequency, and the energy 0.5 ||v||^2 - (K/n) sum_{i<j} cos(theta_i-theta_j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalFailure
from .profiles import DampingInertiaSpec, FrequencyProfile, SwitchingProfile, omega_sync
from .torus import arc_extremes, enclosing_arc_lengths, wrap_angle

MODEL_FIRST_ORDER = "first-order"
MODEL_MULTI_RATE = "multi-rate"
MODEL_FIRST_ORDER_MULTI_RATE = "first-order-multi-rate"
MODEL_SCALED = "scaled"
MODEL_SCALED_FREQUENCY = "scaled-with-frequency-dynamics"

MODELS = (
    MODEL_FIRST_ORDER,
    MODEL_MULTI_RATE,
    MODEL_FIRST_ORDER_MULTI_RATE,
    MODEL_SCALED,
    MODEL_SCALED_FREQUENCY,
)

# Models whose state carries m velocity components after the n phases.
_VELOCITY_MODELS = (MODEL_MULTI_RATE, MODEL_SCALED_FREQUENCY)


@dataclass(frozen=True)
class NetworkSpec:
    """Immutable description of one oscillator network.

    ``frame_rate`` selects a rotating reference frame: phase rates of
    first-order units are shifted by -frame_rate and velocity states of
    second-order units are interpreted in the rotating frame.
    """

    profile: FrequencyProfile
    coupling: float
    dd: DampingInertiaSpec | None = None
    model: str = MODEL_FIRST_ORDER
    frame_rate: float = 0.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model '{self.model}'")
        if not self.coupling > 0.0:
            raise ConfigError("coupling strength must be positive")
        n = self.profile.n
        dd = self.dd
        if dd is None:
            dd = DampingInertiaSpec.unit(n, 0)
            object.__setattr__(self, "dd", dd)
        if dd.n != n:
            raise ConfigError("damping spec length does not match the profile")
        if self.model == MODEL_FIRST_ORDER:
            if dd.m != 0 or not np.all(dd.damping == 1.0):
                raise ConfigError("the first-order model uses unit time constants and no inertia")
        elif self.model in (MODEL_FIRST_ORDER_MULTI_RATE, MODEL_SCALED):
            if dd.m != 0:
                raise ConfigError(f"model '{self.model}' carries no velocity states")
        elif self.model == MODEL_SCALED_FREQUENCY and dd.m == 0:
            raise ConfigError("scaled-with-frequency-dynamics needs at least one inertia entry")

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def m(self) -> int:
        return self.dd.m

    @property
    def velocity_count(self) -> int:
        return self.m if self.model in _VELOCITY_MODELS else 0

    @property
    def state_dim(self) -> int:
        return self.n + self.velocity_count

    def scaled_profile_frequencies(self, omega: np.ndarray) -> np.ndarray:
        """wbar = omega - D * omega_sync for the scaled model variants."""
        w_sync = omega_sync(omega, self.dd.damping)
        return omega - self.dd.damping * w_sync

    def sync_frequency(self, t: float = 0.0) -> float:
        """Locked rotation rate of the network at time t, in the chosen frame."""
        omega = self.profile.evaluate(t)
        if self.model == MODEL_FIRST_ORDER:
            base = float(np.mean(omega))
        elif self.model in (MODEL_SCALED, MODEL_SCALED_FREQUENCY):
            base = 0.0
        else:
            base = omega_sync(omega, self.dd.damping)
        return base - self.frame_rate


@dataclass(frozen=True)
class State:
    """Phases on the unwrapped real lift plus the second-order velocities."""

    theta: np.ndarray
    theta_dot: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        theta_dot = np.asarray(self.theta_dot, dtype=float).reshape(-1)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "theta_dot", theta_dot)

    @classmethod
    def at_rest(cls, spec: NetworkSpec, theta) -> "State":
        return cls(np.asarray(theta, dtype=float), np.zeros(spec.velocity_count))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.theta, self.theta_dot])


def _check_state(spec: NetworkSpec, state: State):
    if state.theta.size != spec.n or state.theta_dot.size != spec.velocity_count:
        raise ConfigError(
            f"state dimensions ({state.theta.size}, {state.theta_dot.size}) do not match "
            f"model '{spec.model}' with n={spec.n}, velocities={spec.velocity_count}"
        )


def coupling_term(coupling: float, theta: np.ndarray) -> np.ndarray:
    """(K/n) sum_j sin(theta_i - theta_j), via the mean-field identity
    K Im(e^{i theta_i} conj(z)) with z the phasor centroid."""
    e = np.exp(1j * theta)
    return coupling * (e * e.mean().conjugate()).imag


def _make_flat_field(spec: NetworkSpec):
    """Build f(t, y) -> dy on the flat state used by the integrator."""
    profile = spec.profile
    K = spec.coupling
    n = spec.n
    nu = spec.frame_rate
    damping = spec.dd.damping
    const_omega = profile.evaluate(0.0) if profile.is_constant else None
    model = spec.model

    if model in (MODEL_SCALED, MODEL_SCALED_FREQUENCY):
        m = spec.velocity_count
        decay = spec.dd.damping[:m] / spec.dd.inertia if m else None
        const_wbar = (spec.scaled_profile_frequencies(const_omega)
                      if const_omega is not None else None)

        def f(t, y):
            theta = y[:n] if m else y
            wbar = (const_wbar if const_wbar is not None
                    else spec.scaled_profile_frequencies(profile.evaluate(t)))
            dtheta = wbar - coupling_term(K, theta) - nu
            if not m:
                return dtheta
            return np.concatenate([dtheta, -decay * y[n:]])

        return f

    if model == MODEL_MULTI_RATE and spec.m > 0:
        m = spec.m
        inertia = spec.dd.inertia
        d_second = damping[:m]
        d_first = damping[m:]
        frame_shift = d_second * nu

        def f(t, y):
            theta = y[:n]
            v = y[n:]
            omega = const_omega if const_omega is not None else profile.evaluate(t)
            coup = coupling_term(K, theta)
            out = np.empty(n + m)
            out[:m] = v
            out[m:n] = (omega[m:] - coup[m:]) / d_first - nu
            out[n:] = (omega[:m] - frame_shift - d_second * v - coup[:m]) / inertia
            return out

        return f

    # First-order family: plain, per-oscillator time constants, or a
    # multi-rate network without second-order units.
    unit_damping = bool(np.all(damping == 1.0))

    def f(t, y):
        omega = const_omega if const_omega is not None else profile.evaluate(t)
        dtheta = omega - coupling_term(K, y)
        if not unit_damping:
            dtheta = dtheta / damping
        if nu != 0.0:
            dtheta = dtheta - nu
        return dtheta

    return f


def vector_field(spec: NetworkSpec, state: State, t: float = 0.0) -> State:
    """Time derivative of ``state`` under the network's model."""
    _check_state(spec, state)
    f = _make_flat_field(spec)
    dy = f(float(t), state.flat())
    return State(dy[:spec.n], dy[spec.n:])


def _validate_switching_grid(profile: SwitchingProfile, step: float):
    # Switch instants must land on integration grid points so that the
    # right-continuity convention is exact.
    ratios = profile.times[1:] / step
    if np.any(np.abs(ratios - np.round(ratios)) > 1e-9 * np.maximum(ratios, 1.0)):
        raise ConfigError("integration step must divide every dwell interval of a switching profile")


@dataclass(frozen=True)
class Trajectory:
    """Recorded states plus per-step diagnostics of one integration run."""

    spec: NetworkSpec
    step: float
    times: np.ndarray
    theta: np.ndarray           # unwrapped phases, shape (steps + 1, n)
    theta_dot: np.ndarray       # velocity states, shape (steps + 1, m) or (steps + 1, 0)
    arc_length: np.ndarray      # enclosing-arc length V per step
    order_magnitude: np.ndarray
    frequencies: np.ndarray     # all-n instantaneous phase rates per step
    disagreement: np.ndarray    # ||frequencies - sync_frequency(t)||_2 per step
    energy: np.ndarray

    @property
    def final_state(self) -> State:
        return State(self.theta[-1], self.theta_dot[-1])

    def to_csv(self, path_or_buf, meta: dict | None = None):
        """Delimited export; see ``csv_header`` for the column contract.

        ``meta`` entries are embedded as leading ``# key=value`` lines.
        Floats use their shortest round-trip decimal form (at most 17
        significant digits).
        """
        n = self.theta.shape[1]
        m = self.theta_dot.shape[1]
        header = self.csv_header(n, m)
        lines = []
        if meta:
            lines.extend(f"# {key}={value}" for key, value in meta.items())
        lines.append(header)
        blocks = [self.times[:, None], self.theta]
        if m:
            blocks.append(self.theta_dot)
        blocks.extend([
            self.arc_length[:, None],
            self.order_magnitude[:, None],
            self.disagreement[:, None],
            self.energy[:, None],
        ])
        table = np.hstack(blocks)
        for row in table:
            lines.append(",".join(repr(float(x)) for x in row))
        text = "\n".join(lines) + "\n"
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            from .config import atomic_write_text
            atomic_write_text(path_or_buf, text)

    @staticmethod
    def csv_header(n: int, m: int) -> str:
        columns = ["t"]
        columns += [f"theta_{i}" for i in range(1, n + 1)]
        columns += [f"thetadot_{i}" for i in range(1, m + 1)]
        columns += ["V", "r", "disagreement_norm", "H"]
        return ",".join(columns)


def _phase_rate_matrix(spec: NetworkSpec, times: np.ndarray,
                       theta: np.ndarray, theta_dot: np.ndarray) -> np.ndarray:
    """Instantaneous d theta / dt for every oscillator at every recorded step."""
    K = spec.coupling
    omega = spec.profile.evaluate_many(times)
    e = np.exp(1j * theta)
    centroid = e.mean(axis=1, keepdims=True)
    coup = K * (e * centroid.conj()).imag
    model = spec.model
    if model in (MODEL_SCALED, MODEL_SCALED_FREQUENCY):
        w_sync = omega.sum(axis=1) / spec.dd.damping.sum()
        wbar = omega - np.outer(w_sync, spec.dd.damping)
        rates = wbar - coup
    elif model == MODEL_MULTI_RATE and spec.m > 0:
        m = spec.m
        rates = np.empty_like(coup)
        rates[:, :m] = theta_dot
        rates[:, m:] = (omega[:, m:] - coup[:, m:]) / spec.dd.damping[m:] - spec.frame_rate
        return rates
    else:
        rates = (omega - coup) / spec.dd.damping
    if spec.frame_rate != 0.0:
        rates = rates - spec.frame_rate
    return rates


def _sync_reference(spec: NetworkSpec, times: np.ndarray) -> np.ndarray:
    omega = spec.profile.evaluate_many(times)
    if spec.model == MODEL_FIRST_ORDER:
        base = omega.mean(axis=1)
    elif spec.model in (MODEL_SCALED, MODEL_SCALED_FREQUENCY):
        base = np.zeros(len(times))
    else:
        base = omega.sum(axis=1) / spec.dd.damping.sum()
    return base - spec.frame_rate


def _diagnostics(spec: NetworkSpec, times, theta, theta_dot):
    wrapped = wrap_angle(theta)
    arc = enclosing_arc_lengths(wrapped)
    centroid = np.exp(1j * wrapped).mean(axis=1)
    order_mag = np.minimum(np.abs(centroid), 1.0)
    freqs = _phase_rate_matrix(spec, times, wrapped, theta_dot)
    reference = _sync_reference(spec, times)
    disagreement = np.linalg.norm(freqs - reference[:, None], axis=1)
    n = spec.n
    # sum_{i<j} cos(theta_i - theta_j) = (n^2 r^2 - n) / 2
    potential = -(spec.coupling / 2.0) * (n * order_mag**2 - 1.0)
    kinetic = 0.5 * (theta_dot**2).sum(axis=1) if theta_dot.size else 0.0
    energy = kinetic + potential
    return arc, order_mag, freqs, disagreement, energy


def integrate(spec: NetworkSpec, state0: State, t_final: float,
              step: float | None = None) -> Trajectory:
    """Integrate from ``state0`` over [0, t_final] with fixed step ``step``.

    The default step is 1e-3 / K. ``t_final`` is rounded to the nearest
    whole number of steps. Integration aborts with the failing step index
    if the state stops being finite.
    """
    _check_state(spec, state0)
    h = float(step) if step is not None else 1e-3 / spec.coupling
    if h <= 0.0:
        raise ConfigError("integration step must be positive")
    if t_final < h:
        raise ConfigError("horizon must be at least one step")
    if isinstance(spec.profile, SwitchingProfile):
        _validate_switching_grid(spec.profile, h)
    steps = int(round(t_final / h))

    f = _make_flat_field(spec)
    dim = spec.state_dim
    ys = np.empty((steps + 1, dim))
    y = state0.flat().astype(float)
    ys[0] = y
    half_h = 0.5 * h
    sixth_h = h / 6.0
    t = 0.0
    for k in range(steps):
        k1 = f(t, y)
        k2 = f(t + half_h, y + half_h * k1)
        k3 = f(t + half_h, y + half_h * k2)
        t_next = (k + 1) * h
        k4 = f(t_next, y + h * k3)
        y = y + sixth_h * (k1 + 2.0 * (k2 + k3) + k4)
        if not np.isfinite(y).all():
            raise NumericalFailure(
                f"state became non-finite at step {k + 1} (t = {t_next})",
                step=k + 1, time=t_next,
            )
        ys[k + 1] = y
        t = t_next

    times = np.arange(steps + 1) * h
    theta = ys[:, :spec.n]
    theta_dot = ys[:, spec.n:]
    arc, order_mag, freqs, disagreement, energy = _diagnostics(spec, times, theta, theta_dot)
    return Trajectory(
        spec=spec, step=h, times=times, theta=theta, theta_dot=theta_dot,
        arc_length=arc, order_magnitude=order_mag, frequencies=freqs,
        disagreement=disagreement, energy=energy,
    )


def interaction_weights(coupling: float, theta: np.ndarray) -> np.ndarray:
    """Pairwise weights a_ij = (K/n) cos(theta_i - theta_j), zero diagonal."""
    theta = np.asarray(theta, dtype=float)
    diff = theta[:, None] - theta[None, :]
    weights = (coupling / theta.size) * np.cos(diff)
    np.fill_diagonal(weights, 0.0)
    return weights


def interaction_laplacian(coupling: float, theta: np.ndarray) -> np.ndarray:
    """Symmetric Laplacian of the interaction weights; row sums are zero."""
    weights = interaction_weights(coupling, theta)
    return np.diag(weights.sum(axis=1)) - weights


def laplacian_pseudoinverse(laplacian: np.ndarray, zero_tol: float = 1e-9) -> np.ndarray:
    """Moore-Penrose inverse by eigendecomposition, deflating eigenvalues
    below ``zero_tol`` to zero."""
    eigvals, eigvecs = np.linalg.eigh(laplacian)
    inv = np.where(np.abs(eigvals) > zero_tol, 1.0 / np.where(eigvals == 0.0, 1.0, eigvals), 0.0)
    return (eigvecs * inv) @ eigvecs.T


@dataclass(frozen=True)
class ArcDerivativeCheck:
    """Observed arc-length growth rate against its analytic ceiling.

    ``observed`` is the phase rate at the arc's counterclockwise end minus
    the rate at its start; ``bound`` is omega_end - omega_start - K sin(V).
    Ties on the arc boundary resolve to the fastest end and slowest start
    and set ``tied``.
    """

    observed: float
    bound: float
    arc_length: float
    max_index: int
    min_index: int
    tied: bool


def arc_derivative_bound(spec: NetworkSpec, state: State, t: float = 0.0,
                         tie_tol: float = 1e-9) -> ArcDerivativeCheck:
    """Check the one-sided derivative of the enclosing-arc length.

    Within a half-circle the arc length can grow no faster than
    omega_m - omega_l - K sin(V), with m and l the boundary oscillators;
    the check enforces observed <= bound + 1e-9 there.
    """
    _check_state(spec, state)
    wrapped = wrap_angle(state.theta)
    extremes = arc_extremes(wrapped, tie_tol=tie_tol)
    times = np.array([float(t)])
    rates = _phase_rate_matrix(spec, times, wrapped[None, :],
                               state.theta_dot[None, :] if state.theta_dot.size else
                               np.empty((1, 0)))[0]
    max_idx = int(extremes.max_indices[np.argmax(rates[extremes.max_indices])])
    min_idx = int(extremes.min_indices[np.argmin(rates[extremes.min_indices])])
    observed = float(rates[max_idx] - rates[min_idx])
    omega = spec.profile.evaluate(float(t))
    bound = float(omega[max_idx] - omega[min_idx]
                  - spec.coupling * np.sin(extremes.length))
    if extremes.length <= np.pi and observed > bound + 1e-9:
        raise NumericalFailure(
            f"arc growth rate {observed} exceeds its ceiling {bound} at arc {extremes.length}"
        )
    return ArcDerivativeCheck(
        observed=observed, bound=bound, arc_length=extremes.length,
        max_index=max_idx, min_index=min_idx, tied=extremes.tied,
    )


@dataclass(frozen=True)
class ConsensusDiagnostics:
    """Interaction graph quantities at one state.

    ``pinv_forcing`` is the pseudo-inverse image L^+ Omega_dot of the
    centered frequency drift, the instantaneous frequency-disagreement
    target under slowly varying frequencies (zero for constant profiles).
    """

    weights: np.ndarray
    laplacian: np.ndarray
    lambda2: float
    pinv_forcing: np.ndarray


def consensus_diagnostics(spec: NetworkSpec, state: State, t: float = 0.0) -> ConsensusDiagnostics:
    """Interaction weights, Laplacian, algebraic connectivity, and the
    slowly-varying frequency target at one state."""
    _check_state(spec, state)
    wrapped = wrap_angle(state.theta)
    weights = interaction_weights(spec.coupling, wrapped)
    laplacian = np.diag(weights.sum(axis=1)) - weights
    eigvals = np.linalg.eigvalsh(laplacian)
    lambda2 = float(eigvals[1])
    arc = enclosing_arc_lengths(wrapped[None, :])[0]
    if arc < np.pi / 2.0:
        floor = spec.coupling * np.cos(arc)
        if lambda2 < floor - 1e-9:
            raise NumericalFailure(
                f"algebraic connectivity {lambda2} fell below its floor {floor}"
            )
    omega_dot = spec.profile.derivative(float(t))
    centered_drift = omega_dot - omega_dot.mean()
    pinv_forcing = laplacian_pseudoinverse(laplacian) @ centered_drift
    return ConsensusDiagnostics(weights, laplacian, lambda2, pinv_forcing)
