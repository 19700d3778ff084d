"""Equilibrium location, Jacobian inertia, and model-equivalence checks.

The multi-rate network, its inertialess variant, and the scaled model are
all members of one interpolation family of vector fields built from the
same potential

    H(x1, x2, x3) = 0.5 ||x3||^2 - (K/n) sum_{i<j} cos(theta_i - theta_j),

with blocks x1 (first-order phases), x2 (second-order phases), and x3
(second-order velocities), driven by constant forcing F and damped by
positive-definite diagonal metrics. Every family member shares the same
equilibria {x : grad H(x) = F}, and the Jacobian's inertia equals the
inertia of -hess H(x*) regardless of the interpolation parameter and the
inertia matrix. Those two facts are what the checks in this module verify
numerically, and they justify analyzing the heavy second-order network
through the much simpler scaled first-order model.

Convention: the block potential above differs from the all-pairs double
sum by a factor of one half; the pairwise form is the one whose gradient
reproduces the coupling term (K/n) sum_j sin(theta_i - theta_j) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, EquilibriumNotFound
from .dynamics import (
    MODEL_SCALED,
    NetworkSpec,
    State,
    coupling_term,
    integrate,
    interaction_laplacian,
)
from .profiles import ConstantProfile, omega_sync, scaled_frequencies
from .torus import enclosing_arc_length, wrap_angle


class Inertia(NamedTuple):
    """Eigenvalue counts by real part: stable (< 0), center (= 0), unstable (> 0)."""

    stable: int
    center: int
    unstable: int


def inertia(matrix: np.ndarray, tol: float | None = None) -> Inertia:
    """Classify the eigenvalues of a square matrix by the sign of their
    real part. The default threshold is 1e-8 times the spectral norm."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("inertia needs a square matrix")
    if tol is None:
        scale = float(np.linalg.norm(a, 2)) if a.size else 0.0
        tol = 1e-8 * max(scale, 1e-300)
    real_parts = np.linalg.eigvals(a).real
    stable = int(np.sum(real_parts < -tol))
    unstable = int(np.sum(real_parts > tol))
    return Inertia(stable, a.shape[0] - stable - unstable, unstable)


def potential_value(coupling: float, theta: np.ndarray) -> float:
    """-(K/n) sum_{i<j} cos(theta_i - theta_j)."""
    theta = np.asarray(theta, dtype=float)
    n = theta.size
    r2 = abs(np.exp(1j * theta).mean()) ** 2
    return float(-(coupling / 2.0) * (n * r2 - 1.0))


def potential_gradient(coupling: float, theta: np.ndarray) -> np.ndarray:
    """Gradient of the pairwise cosine potential: the coupling term."""
    return coupling_term(coupling, np.asarray(theta, dtype=float))


def potential_hessian(coupling: float, theta: np.ndarray) -> np.ndarray:
    """Hessian of the pairwise cosine potential: the interaction Laplacian."""
    return interaction_laplacian(coupling, np.asarray(theta, dtype=float))


@dataclass(frozen=True)
class HLambdaSpec:
    """One member of the interpolation family between gradient-like and
    damped second-order dynamics.

    ``lam`` = 1 gives the pure gradient-like flow, ``lam`` = 0 the damped
    Newtonian flow for the second-order block. Oscillator phases are split
    into a first-order block (sizes and metrics ``d_first``/``forcing_first``)
    and a second-order block (``d_second``, ``inertia_diag``,
    ``forcing_second``); the coupling defines the shared potential.
    """

    lam: float
    coupling: float
    d_first: np.ndarray
    d_second: np.ndarray
    inertia_diag: np.ndarray
    forcing_first: np.ndarray
    forcing_second: np.ndarray

    def __post_init__(self):
        for name in ("d_first", "d_second", "inertia_diag", "forcing_first", "forcing_second"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(-1)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError("interpolation parameter must lie in [0, 1]")
        if np.any(self.d_first <= 0) or np.any(self.d_second <= 0) or np.any(self.inertia_diag <= 0):
            raise ConfigError("metric and inertia entries must be positive")
        if self.d_second.size != self.inertia_diag.size or self.d_second.size != self.forcing_second.size:
            raise ConfigError("second-order block sizes disagree")
        if self.d_first.size != self.forcing_first.size:
            raise ConfigError("first-order block sizes disagree")

    @property
    def n1(self) -> int:
        return self.d_first.size

    @property
    def n2(self) -> int:
        return self.d_second.size

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def dim(self) -> int:
        return self.n + self.n2

    @property
    def forcing(self) -> np.ndarray:
        return np.concatenate([self.forcing_first, self.forcing_second, np.zeros(self.n2)])

    @classmethod
    def from_network(cls, spec: NetworkSpec, lam: float,
                     inertia_scale: float = 1.0) -> "HLambdaSpec":
        """Build the family member matching a network, forced by the scaled
        frequencies so that equilibria live in the rotating frame.

        Oscillators 0..m-1 of the network are its second-order block.
        """
        omega = spec.profile.evaluate(0.0)
        wbar = scaled_frequencies(omega, spec.dd.damping)
        m = spec.dd.m
        return cls(
            lam=lam,
            coupling=spec.coupling,
            d_first=spec.dd.damping[m:],
            d_second=spec.dd.damping[:m],
            inertia_diag=spec.dd.inertia * inertia_scale,
            forcing_first=wbar[m:],
            forcing_second=wbar[:m],
        )

    def phases_to_blocks(self, theta: np.ndarray) -> np.ndarray:
        """Reorder network phases (second-order units first) into the
        family's (x1, x2) block layout."""
        theta = np.asarray(theta, dtype=float)
        m = self.n2
        return np.concatenate([theta[m:], theta[:m]])

    def state_from_phases(self, theta: np.ndarray, velocities: np.ndarray | None = None) -> np.ndarray:
        x3 = np.zeros(self.n2) if velocities is None else np.asarray(velocities, dtype=float)
        return np.concatenate([self.phases_to_blocks(theta), x3])

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """grad H at a family state (x1, x2, x3)."""
        theta = x[:self.n]
        return np.concatenate([potential_gradient(self.coupling, theta), x[self.n:]])

    def hessian(self, x: np.ndarray) -> np.ndarray:
        theta = x[:self.n]
        hess = np.zeros((self.dim, self.dim))
        hess[:self.n, :self.n] = potential_hessian(self.coupling, theta)
        hess[self.n:, self.n:] = np.eye(self.n2)
        return hess


def hlambda_vector_field(hspec: HLambdaSpec, x: np.ndarray) -> np.ndarray:
    """Right-hand side of the interpolation family at state x.

    With residual g = F - grad H split into blocks (g1, g2, g3):
        dx1 = g1 / D1
        dx2 = lam g2 / D2 - (1 - lam) g3
        dx3 = ((1 - lam) g2 + D2 g3) / M
    """
    x = np.asarray(x, dtype=float)
    n1, n2 = hspec.n1, hspec.n2
    g = hspec.forcing - hspec.gradient(x)
    g1, g2, g3 = g[:n1], g[n1:n1 + n2], g[n1 + n2:]
    lam = hspec.lam
    dx1 = g1 / hspec.d_first
    dx2 = lam * g2 / hspec.d_second - (1.0 - lam) * g3
    dx3 = ((1.0 - lam) * g2 + hspec.d_second * g3) / hspec.inertia_diag
    return np.concatenate([dx1, dx2, dx3])


def jacobian_hlambda(hspec: HLambdaSpec, x_star: np.ndarray,
                     grad_tol: float = 1e-8) -> np.ndarray:
    """Jacobian of the family member at an equilibrium x*.

    Assembled as S_lam @ blkdiag(-I, -M) @ hess H(x*), where S_lam carries
    the interpolation and metric structure. Inputs that do not satisfy
    grad H(x*) = F within ``grad_tol`` are rejected.
    """
    x_star = np.asarray(x_star, dtype=float)
    if x_star.size != hspec.dim:
        raise ConfigError(f"state has dimension {x_star.size}, expected {hspec.dim}")
    residual = float(np.abs(hspec.gradient(x_star) - hspec.forcing).max())
    if residual > grad_tol:
        raise ConfigError(f"not an equilibrium: gradient residual {residual:.3e}")
    n1, n2 = hspec.n1, hspec.n2
    lam = hspec.lam
    dim = hspec.dim
    s_lam = np.zeros((dim, dim))
    s_lam[:n1, :n1] = np.diag(1.0 / hspec.d_first)
    if n2:
        i2 = slice(n1, n1 + n2)
        i3 = slice(n1 + n2, dim)
        s_lam[i2, i2] = np.diag(lam / hspec.d_second)
        s_lam[i2, i3] = np.diag((lam - 1.0) / hspec.inertia_diag)
        s_lam[i3, i2] = np.diag((1.0 - lam) / hspec.inertia_diag)
        s_lam[i3, i3] = np.diag(hspec.d_second / hspec.inertia_diag**2)
    metric = np.concatenate([-np.ones(n1 + n2), -hspec.inertia_diag])
    return s_lam @ (metric[:, None] * hspec.hessian(x_star))


@dataclass(frozen=True)
class Equilibrium:
    """A phase-locked state in the rotating frame, grounded at the last
    oscillator (theta_n = 0)."""

    phases: np.ndarray
    residual: float
    iterations: int
    method: str
    arc_length: float


def _newton_polish(coupling: float, wbar: np.ndarray, theta0: np.ndarray,
                   tol: float, max_iter: int) -> tuple[np.ndarray, float, int] | None:
    """Damped Newton iteration on grounded coordinates; None on failure."""
    n = wbar.size
    theta = theta0.astype(float).copy()
    theta -= theta[-1]
    residual = wbar - potential_gradient(coupling, theta)
    res_norm = float(np.abs(residual).max())
    for iteration in range(1, max_iter + 1):
        if res_norm < tol:
            return theta, res_norm, iteration - 1
        laplacian = potential_hessian(coupling, theta)
        try:
            step = np.linalg.solve(laplacian[:-1, :-1], residual[:-1])
        except np.linalg.LinAlgError:
            return None
        if not np.isfinite(step).all():
            return None
        scale = 1.0
        for _ in range(30):
            trial = theta.copy()
            trial[:-1] += scale * step
            trial_res = wbar - potential_gradient(coupling, trial)
            trial_norm = float(np.abs(trial_res).max())
            if trial_norm < res_norm:
                theta, residual, res_norm = trial, trial_res, trial_norm
                break
            scale *= 0.5
        else:
            return None
    if res_norm < tol:
        return theta, res_norm, max_iter
    return None


def find_equilibrium(spec: NetworkSpec, *, tol: float = 1e-12,
                     max_iter: int = 60) -> Equilibrium:
    """Locate the stable phase-locked state of a network.

    Works in the rotating frame on the scaled frequencies (which sum to
    zero by construction). Newton iteration from the synchronized state is
    tried first; if it fails or lands on an unstable critical point, the
    scaled model is integrated and its endpoint polished. Raises
    ``EquilibriumNotFound`` when both routes fail, which is the expected
    outcome for coupling at or below the exact critical value.
    """
    omega = spec.profile.evaluate(0.0)
    wbar = scaled_frequencies(omega, spec.dd.damping)
    coupling = spec.coupling
    n = wbar.size

    def _stable(theta: np.ndarray) -> bool:
        eigvals = np.linalg.eigvalsh(potential_hessian(coupling, theta))
        return bool(eigvals[0] > -1e-9 and eigvals[1] > 1e-12 * max(coupling, 1.0))

    best_residual = np.inf
    attempt = _newton_polish(coupling, wbar, np.zeros(n), tol, max_iter)
    if attempt is not None:
        theta, res_norm, iterations = attempt
        if _stable(theta):
            phases = wrap_angle(theta - theta[-1])
            return Equilibrium(phases, res_norm, iterations, "newton",
                               enclosing_arc_length(phases))
        best_residual = res_norm

    # Fall back to relaxing the scaled model toward its attractor, then
    # polishing the endpoint.
    scaled = NetworkSpec(
        profile=ConstantProfile(wbar),
        coupling=coupling,
        dd=None,
        model=MODEL_SCALED,
    )
    horizon = 200.0 / coupling
    trajectory = integrate(scaled, State(np.zeros(n)), horizon, step=0.02 / coupling)
    endpoint = wrap_angle(trajectory.theta[-1])
    attempt = _newton_polish(coupling, wbar, endpoint, tol, max_iter)
    if attempt is not None:
        theta, res_norm, iterations = attempt
        if _stable(theta):
            phases = wrap_angle(theta - theta[-1])
            return Equilibrium(phases, res_norm, iterations, "simulate+newton",
                               enclosing_arc_length(phases))
        best_residual = min(best_residual, res_norm)
    else:
        best_residual = min(
            best_residual,
            float(np.abs(wbar - potential_gradient(coupling, endpoint)).max()),
        )
    raise EquilibriumNotFound(
        f"no stable phase-locked state found (best residual {best_residual:.3e}); "
        "expected when the coupling does not exceed the exact critical value",
        residual=best_residual,
    )


def multirate_equilibrium_residual(spec: NetworkSpec, phases: np.ndarray) -> float:
    """Stationarity defect of a candidate equilibrium under the full
    network: phase rates must equal the locked frequency and velocity
    rates must vanish."""
    omega = spec.profile.evaluate(0.0)
    w_sync = omega_sync(omega, spec.dd.damping)
    coup = coupling_term(spec.coupling, np.asarray(phases, dtype=float))
    rate_defect = (omega - coup) / spec.dd.damping - w_sync
    return float(np.abs(rate_defect).max())


@dataclass(frozen=True)
class StabilityReport:
    """Linearization summary at a located equilibrium."""

    phases: np.ndarray
    jacobian: np.ndarray
    inertia: Inertia
    zero_dim: int
    hyperbolic: bool            # one center eigenvalue, the rotation mode
    eigenvalues: np.ndarray     # sorted by real part
    residual: float

    def as_dict(self) -> dict:
        return {
            "equilibrium_phases": [float(x) for x in self.phases],
            "inertia": {"stable": self.inertia.stable, "center": self.inertia.center,
                        "unstable": self.inertia.unstable},
            "zero_eigenspace_dim": self.zero_dim,
            "hyperbolic": self.hyperbolic,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "residual": self.residual,
        }


def analyze_equilibrium(spec: NetworkSpec) -> StabilityReport:
    """Locate the stable locked state and report its linearization.

    The Jacobian is that of the network's own dynamics in the rotating
    frame (the damped second-order member for networks with inertia, the
    gradient-like member otherwise). The rotation mode contributes one
    center eigenvalue; equilibria with a larger center space are flagged
    non-hyperbolic and left unclassified.
    """
    equilibrium = find_equilibrium(spec)
    lam = 0.0 if spec.dd.m > 0 else 1.0
    hspec = HLambdaSpec.from_network(spec, lam)
    x_star = hspec.state_from_phases(equilibrium.phases)
    jac = jacobian_hlambda(hspec, x_star)
    triple = inertia(jac)
    hess = hspec.hessian(x_star)
    zero_dim = int(np.sum(np.abs(np.linalg.eigvalsh(hess)) <= 1e-8 * np.linalg.norm(hess, 2)))
    eigvals = np.linalg.eigvals(jac)
    order = np.argsort(eigvals.real)
    return StabilityReport(
        phases=equilibrium.phases,
        jacobian=jac,
        inertia=triple,
        zero_dim=zero_dim,
        hyperbolic=(triple.center == 1),
        eigenvalues=eigvals[order],
        residual=equilibrium.residual,
    )


@dataclass(frozen=True)
class ConjugacyReport:
    """Equilibrium and inertia transfer across the interpolation family."""

    phases: np.ndarray
    reference_inertia: Inertia
    inertias: dict
    transfer_residuals: dict
    inertia_invariant: bool
    max_transfer_residual: float
    min_center_alignment: float
    stable: bool
    hyperbolic: bool


def conjugacy_check(spec: NetworkSpec,
                    m_scalings: Sequence[float] = (0.1, 1.0, 10.0),
                    lambdas: Sequence[float] = (0.0, 0.5, 1.0)) -> ConjugacyReport:
    """Verify that the located equilibrium and its inertia are shared by
    every family member over a grid of interpolation values and inertia
    scalings, and that each center eigenspace is the rotation direction."""
    equilibrium = find_equilibrium(spec)
    n, m = spec.n, spec.dd.m
    scalings = tuple(m_scalings) if m > 0 else (1.0,)

    reference_hspec = HLambdaSpec.from_network(spec, 1.0)
    x_ref = reference_hspec.state_from_phases(equilibrium.phases)
    reference_inertia = inertia(-reference_hspec.hessian(x_ref))

    rotation = np.concatenate([np.ones(n), np.zeros(m)])
    rotation /= np.linalg.norm(rotation)

    inertias: dict = {}
    residuals: dict = {}
    min_alignment = 1.0
    for lam in lambdas:
        for scale in scalings:
            hspec = HLambdaSpec.from_network(spec, lam, inertia_scale=scale)
            x_star = hspec.state_from_phases(equilibrium.phases)
            residuals[(lam, scale)] = float(np.abs(hlambda_vector_field(hspec, x_star)).max())
            jac = jacobian_hlambda(hspec, x_star)
            inertias[(lam, scale)] = inertia(jac)
            eigvals, eigvecs = np.linalg.eig(jac)
            center = int(np.argmin(np.abs(eigvals)))
            vec = eigvecs[:, center]
            alignment = float(np.abs(np.vdot(vec, rotation)) / np.linalg.norm(vec))
            min_alignment = min(min_alignment, alignment)

    invariant = all(triple == reference_inertia for triple in inertias.values())
    stable = reference_inertia == Inertia(n + m - 1, 1, 0)
    return ConjugacyReport(
        phases=equilibrium.phases,
        reference_inertia=reference_inertia,
        inertias=inertias,
        transfer_residuals=residuals,
        inertia_invariant=invariant,
        max_transfer_residual=max(residuals.values()),
        min_center_alignment=min_alignment,
        stable=stable,
        hyperbolic=(reference_inertia.center == 1),
    )


@dataclass(frozen=True)
class MultiRateSyncReport:
    """Locking threshold and phase-alignment admissibility of a damped,
    possibly inertial network."""

    k_critical: float           # span of the scaled frequencies
    omega_sync: float
    phase_sync_admissible: bool
    common_rate: float | None   # s with omega_i = D_i s, when admissible
    weighted_phase: float | None

    def as_dict(self) -> dict:
        return {
            "k_critical": self.k_critical,
            "omega_sync": self.omega_sync,
            "phase_sync_admissible": self.phase_sync_admissible,
            "common_rate": self.common_rate,
            "weighted_phase": self.weighted_phase,
        }


def multirate_sync_report(spec: NetworkSpec, theta0=None) -> MultiRateSyncReport:
    """Threshold and phase-sync analysis of a damped network.

    Phase alignment is possible exactly when every ratio omega_i / D_i
    equals the locked frequency; in that case the network settles on the
    damping-weighted average of the initial phases (plus the locked
    rotation), reported when ``theta0`` is supplied.
    """
    omega = spec.profile.evaluate(0.0)
    damping = spec.dd.damping
    wbar = scaled_frequencies(omega, damping)
    w_sync = omega_sync(omega, damping)
    admissible = bool(np.abs(omega / damping - w_sync).max() < 1e-12)
    weighted_phase = None
    if theta0 is not None:
        theta0 = np.asarray(theta0, dtype=float)
        weighted_phase = float((damping * theta0).sum() / damping.sum())
    return MultiRateSyncReport(
        k_critical=float(wbar.max() - wbar.min()),
        omega_sync=w_sync,
        phase_sync_admissible=admissible,
        common_rate=w_sync if admissible else None,
        weighted_phase=weighted_phase,
    )
