"""Critical-coupling estimates and the synchronization performance envelope.

For n oscillators with natural frequencies omega_i, all-to-all sinusoidal
coupling of strength K locks the network into a common rotation once K
exceeds a critical value. Four estimates of that value are computed here:

* ``explicit_critical_coupling``: omega_max - omega_min. Sufficient for any
  frequency arrangement inside the interval, and tight in the worst case
  (a two-level arrangement at the interval endpoints).
* ``necessary_bound``: n (omega_max - omega_min) / (2 (n - 1)). No locked
  solution exists below it.
* ``exact_implicit_coupling``: the exact threshold for the given vector,
  obtained from the self-consistency condition

      2 sum_i sqrt(1 - (Omega_i/u)^2) = sum_i 1 / sqrt(1 - (Omega_i/u)^2),

  where Omega is the mean-centered frequency vector. The unique root u* in
  [||Omega||_inf, 2 ||Omega||_inf] gives
  K = n u* / sum_i sqrt(1 - (Omega_i/u*)^2).
* density-based onset thresholds for the infinite-population limit:
  ``continuum_kuramoto_bound`` (2 / (pi g(0))) and ``ermentrout_bound``
  (variational condition over a tabulated symmetric density).

Above threshold, ``performance_envelope`` turns the margin K_critical / K
into guaranteed cohesiveness levels, an asymptotic order-parameter floor,
and exponential convergence rates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BracketError, NoSynchronizationGuarantee

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def sinc(x: float) -> float:
    """sin(x) / x with the removable singularity sinc(0) = 1."""
    if x == 0.0:
        return 1.0
    return float(np.sin(x) / x)


def _check_frequencies(omega) -> np.ndarray:
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if w.size < 2:
        raise ValueError("need at least two oscillators")
    return w


def explicit_critical_coupling(omega) -> float:
    """Width of the frequency range, the distribution-robust threshold."""
    w = _check_frequencies(omega)
    return float(w.max() - w.min())


def necessary_bound(omega) -> float:
    """Coupling below n (omega_max - omega_min) / (2 (n-1)) cannot lock."""
    w = _check_frequencies(omega)
    n = w.size
    return float(n * (w.max() - w.min()) / (2.0 * (n - 1)))


@dataclass(frozen=True)
class ExactCouplingResult:
    coupling: float
    u_star: float
    iterations: int
    residual: float
    degenerate: bool = False


def _consistency_residual(u, centered: np.ndarray):
    """2 sum sqrt(1 - (Omega/u)^2) - sum 1/sqrt(1 - (Omega/u)^2)."""
    ratio_sq = np.square(centered) / np.square(u)
    root = np.sqrt(np.maximum(1.0 - ratio_sq, 1e-300))
    return 2.0 * root.sum(axis=-1) - (1.0 / root).sum(axis=-1)


def exact_implicit_coupling(omega, *, max_iter: int = 200) -> ExactCouplingResult:
    """Exact locking threshold for a specific frequency vector.

    The root of the self-consistency condition is bracketed on
    [||Omega||_inf (1 + 1e-12), 2 ||Omega||_inf] and refined by bisection;
    the lower end is nudged off the square-root singularity, where the
    residual diverges to -inf and guarantees a sign change. An all-equal
    frequency vector short-circuits to coupling 0 with the degenerate flag.
    """
    w = _check_frequencies(omega)
    centered = w - w.mean()
    u_inf = float(np.abs(centered).max())
    if u_inf == 0.0:
        return ExactCouplingResult(0.0, 0.0, 0, 0.0, degenerate=True)

    lo = u_inf * (1.0 + 1e-12)
    hi = 2.0 * u_inf
    res_lo = float(_consistency_residual(lo, centered))
    res_hi = float(_consistency_residual(hi, centered))
    if res_lo > 0.0 or res_hi < 0.0:
        raise BracketError(
            "no sign change for the locking consistency condition",
            lo=lo, hi=hi, residual_lo=res_lo, residual_hi=res_hi,
        )

    iterations = 0
    u = 0.5 * (lo + hi)
    for iterations in range(1, max_iter + 1):
        u = 0.5 * (lo + hi)
        res = float(_consistency_residual(u, centered))
        if res == 0.0:
            break
        if res < 0.0:
            lo = u
        else:
            hi = u
        if hi - lo <= 4.0 * np.finfo(float).eps * u:
            break
    root_terms = np.sqrt(1.0 - np.square(centered / u))
    coupling = float(w.size * u / root_terms.sum())
    return ExactCouplingResult(coupling, float(u), iterations,
                               float(_consistency_residual(u, centered)))


def continuum_kuramoto_bound(g_at_zero: float) -> float:
    """Onset coupling 2 / (pi g(0)) for an infinite unimodal population."""
    if g_at_zero <= 0.0:
        raise ValueError("density value at the center must be positive")
    return float(2.0 / (np.pi * g_at_zero))


def _simpson_uniform(values: np.ndarray, h: float):
    """Composite Simpson quadrature on a uniform grid with an odd point count."""
    v = np.asarray(values, dtype=float)
    weights = np.ones(v.shape[-1])
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return (h / 3.0) * (v * weights).sum(axis=-1)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> tuple[float, float]:
    """Golden-section maximizer of a unimodal function on [lo, hi]."""
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass(frozen=True)
class ErmentroutResult:
    coupling: float
    p_star: float
    functional_max: float


def ermentrout_bound(density, omega_max: float = 1.0, *,
                     normalization_tol: float = 1e-6) -> ErmentroutResult:
    """Locking threshold from a tabulated symmetric density on [-1, 1].

    ``density`` holds g sampled on a uniform grid over [-1, 1] (odd point
    count, so composite Simpson applies); it must be nonnegative and
    integrate to one within ``normalization_tol`` under the same quadrature.
    The threshold satisfies, in normalized units where the support half-width
    is 1,

        1 / K = max_{p >= 1} (1/p^2) integral sqrt(p^2 - w^2) g(w) dw,

    and the result is rescaled by ``omega_max``, the caller's half-width.
    The maximizer is interior to the search window [1, 10] because the
    functional decays like 1/p; this is asserted.
    """
    g = np.atleast_1d(np.asarray(density, dtype=float))
    if g.size < 3 or g.size % 2 == 0:
        raise ValueError("density must be tabulated on an odd number (>= 3) of uniform nodes")
    if np.any(g < 0.0):
        raise ValueError("density values must be nonnegative")
    num = g.size
    h = 2.0 / (num - 1)
    mass = float(_simpson_uniform(g, h))
    if abs(mass - 1.0) > normalization_tol:
        raise ValueError(f"density integrates to {mass:.8f}, not 1")
    grid = np.linspace(-1.0, 1.0, num)

    def functional(p: float) -> float:
        integrand = np.sqrt(np.maximum(p * p - grid * grid, 0.0)) * g
        return float(_simpson_uniform(integrand, h)) / (p * p)

    p_star, f_max = _golden_max(functional, 1.0, 10.0)
    if p_star >= 9.9:
        raise ValueError("maximizer hit the search boundary; density is not admissible")
    return ErmentroutResult(float(omega_max) / f_max, p_star, f_max)


@dataclass(frozen=True)
class PerformanceEnvelope:
    """Guarantees implied by coupling margin K_critical / K < 1.

    gamma_min and gamma_max = pi - gamma_min are the two arc lengths where
    K sin(gamma) = K_critical: every arc level between them is positively
    invariant, trajectories starting inside the gamma_max arc contract into
    the gamma_min arc, and the asymptotic order parameter is at least
    r_floor = cos(gamma_min / 2).
    """

    coupling: float
    k_critical: float
    gamma_min: float
    gamma_max: float
    r_floor: float

    def frequency_sync_rate(self, gamma: float) -> float:
        """Guaranteed exponential rate K cos(gamma) once inside an arc
        gamma < pi/2."""
        if not 0.0 <= gamma < np.pi / 2.0:
            raise ValueError("frequency-sync rate requires an arc below pi/2")
        return float(self.coupling * np.cos(gamma))

    def phase_sync_rate(self, gamma: float) -> float:
        """Guaranteed exponential rate K sinc(gamma) toward a common phase,
        for identical frequencies and initial arcs gamma < pi."""
        if not 0.0 <= gamma < np.pi:
            raise ValueError("phase-sync rate requires an arc below pi")
        return float(self.coupling * sinc(gamma))


def performance_envelope(coupling: float, k_critical: float) -> PerformanceEnvelope:
    """Cohesiveness and rate guarantees for coupling above the critical value."""
    if k_critical < 0.0:
        raise ValueError("critical coupling cannot be negative")
    if coupling <= k_critical:
        raise NoSynchronizationGuarantee(
            f"coupling {coupling} does not exceed the critical value {k_critical}"
        )
    ratio = k_critical / coupling
    gamma_min = float(np.arcsin(ratio))
    return PerformanceEnvelope(
        coupling=float(coupling),
        k_critical=float(k_critical),
        gamma_min=gamma_min,
        gamma_max=float(np.pi - gamma_min),
        r_floor=float(np.cos(gamma_min / 2.0)),
    )


@dataclass(frozen=True)
class BoundReport:
    """Collected critical-coupling estimates for one frequency vector."""

    k_explicit: float
    k_necessary: float
    k_exact: float | None = None
    u_star: float | None = None
    exact_iterations: int | None = None
    exact_residual: float | None = None
    k_continuum: float | None = None
    k_ermentrout: float | None = None

    ORDERING_TOL = 1e-9

    def __post_init__(self):
        if self.k_exact is not None:
            ordered = (self.k_necessary <= self.k_exact + self.ORDERING_TOL
                       and self.k_exact <= self.k_explicit + self.ORDERING_TOL)
            if not ordered:
                raise ValueError(
                    "bound ordering violated: necessary "
                    f"{self.k_necessary} <= exact {self.k_exact} <= explicit {self.k_explicit}"
                )

    def as_dict(self) -> dict:
        return {
            "k_necessary": self.k_necessary,
            "k_exact": self.k_exact,
            "k_explicit": self.k_explicit,
            "u_star": self.u_star,
            "exact_iterations": self.exact_iterations,
            "exact_residual": self.exact_residual,
            "k_continuum": self.k_continuum,
            "k_ermentrout": self.k_ermentrout,
        }


def bound_report(omega, *, exact: bool = True, g_at_zero: float | None = None,
                 density=None, density_omega_max: float | None = None) -> BoundReport:
    """Assemble a ``BoundReport`` for a frequency vector.

    ``density`` triggers the tabulated-density threshold; its half-width
    defaults to half the frequency span of ``omega``.
    """
    w = _check_frequencies(omega)
    k_explicit = explicit_critical_coupling(w)
    k_necessary = necessary_bound(w)
    k_exact = u_star = iterations = residual = None
    if exact:
        result = exact_implicit_coupling(w)
        k_exact, u_star = result.coupling, result.u_star
        iterations, residual = result.iterations, result.residual
    k_continuum = continuum_kuramoto_bound(g_at_zero) if g_at_zero is not None else None
    k_ermentrout = None
    if density is not None:
        half_width = density_omega_max if density_omega_max is not None else k_explicit / 2.0
        k_ermentrout = ermentrout_bound(density, omega_max=half_width).coupling
    return BoundReport(
        k_explicit=k_explicit,
        k_necessary=k_necessary,
        k_exact=k_exact,
        u_star=u_star,
        exact_iterations=iterations,
        exact_residual=residual,
        k_continuum=k_continuum,
        k_ermentrout=k_ermentrout,
    )
