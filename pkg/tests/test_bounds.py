import numpy as np
import pytest

from kurasync import (
    BoundReport,
    NoSynchronizationGuarantee,
    bound_report,
    continuum_kuramoto_bound,
    ermentrout_bound,
    exact_implicit_coupling,
    explicit_critical_coupling,
    necessary_bound,
    performance_envelope,
    sinc,
)


def consistency_residual_scan(omega, step):
    """Brute-force root of the locking consistency condition on a u-grid."""
    w = np.asarray(omega, dtype=float)
    centered = w - w.mean()
    u_inf = np.abs(centered).max()
    grid = np.arange(u_inf * (1 + 1e-12), 2 * u_inf, step)
    root = np.sqrt(np.maximum(1.0 - (centered[None, :] / grid[:, None]) ** 2, 1e-300))
    residual = 2 * root.sum(axis=1) - (1.0 / root).sum(axis=1)
    flips = np.flatnonzero(np.diff(np.sign(residual)) > 0)
    i = flips[0]
    u = 0.5 * (grid[i] + grid[i + 1])
    k = w.size * u / np.sqrt(1.0 - (centered / u) ** 2).sum()
    return u, k


def test_explicit_coupling_examples():
    assert explicit_critical_coupling([0.0, 1.0]) == 1.0
    assert explicit_critical_coupling([2.0, 2.0, 2.0]) == 0.0
    assert explicit_critical_coupling([-1.0, 0.0, 1.0]) == 2.0
    with pytest.raises(ValueError):
        explicit_critical_coupling([1.0])


def test_necessary_bound_examples():
    assert necessary_bound([0.0, 1.0]) == 1.0
    assert necessary_bound([-1.0, 0.0, 1.0]) == pytest.approx(1.5)
    # Large n approaches half the frequency span.
    w = np.linspace(-1.0, 1.0, 2000)
    assert necessary_bound(w) == pytest.approx(1.0, rel=1e-3)


def test_exact_coupling_two_oscillators():
    result = exact_implicit_coupling([0.0, 1.0])
    assert result.u_star == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert result.coupling == pytest.approx(1.0, abs=1e-12)
    assert not result.degenerate


def test_exact_coupling_three_oscillators_vs_oracle():
    result = exact_implicit_coupling([-1.0, 0.0, 1.0])
    # Closed form: with s = sqrt(1 - 1/u^2), 4 s^2 + s - 2 = 0.
    s = (-1 + np.sqrt(33)) / 8
    u_closed = 1 / np.sqrt(1 - s * s)
    assert result.u_star == pytest.approx(u_closed, abs=1e-12)
    assert result.coupling == pytest.approx(3 * u_closed / (1 + 2 * s), abs=1e-12)
    u_scan, k_scan = consistency_residual_scan([-1.0, 0.0, 1.0], step=1e-5)
    assert result.u_star == pytest.approx(u_scan, abs=1e-4)
    assert result.coupling == pytest.approx(k_scan, abs=1e-4)


def test_exact_coupling_degenerate_and_diagnostics():
    result = exact_implicit_coupling([2.0, 2.0, 2.0])
    assert result.degenerate and result.coupling == 0.0
    result = exact_implicit_coupling(np.random.default_rng(0).uniform(-1, 1, 20))
    assert abs(result.residual) < 1e-10
    assert result.iterations > 0


def test_bound_ordering_and_bracket_location():
    rng = np.random.default_rng(10)
    for _ in range(200):
        n = int(rng.integers(3, 51))
        w = rng.uniform(-1, 1, n)
        k_nec = necessary_bound(w)
        result = exact_implicit_coupling(w)
        k_exp = explicit_critical_coupling(w)
        assert k_nec <= result.coupling + 1e-9
        assert result.coupling <= k_exp + 1e-9
        u_inf = np.abs(w - w.mean()).max()
        assert u_inf <= result.u_star <= 2 * u_inf
        assert abs(result.residual) < 1e-10


def test_bounds_translation_invariance():
    rng = np.random.default_rng(11)
    w = rng.uniform(-1, 1, 12)
    shifted = w + 17.25
    assert explicit_critical_coupling(shifted) == pytest.approx(
        explicit_critical_coupling(w), abs=1e-12)
    assert necessary_bound(shifted) == pytest.approx(necessary_bound(w), abs=1e-12)
    assert exact_implicit_coupling(shifted).coupling == pytest.approx(
        exact_implicit_coupling(w).coupling, abs=1e-12)


def test_continuum_bound_examples():
    assert continuum_kuramoto_bound(0.5) == pytest.approx(4 / np.pi)
    assert continuum_kuramoto_bound(2 / np.pi) == pytest.approx(1.0)
    assert continuum_kuramoto_bound(1 / np.pi) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        continuum_kuramoto_bound(0.0)


def test_ermentrout_uniform_density():
    g = np.full(801, 0.5)
    result = ermentrout_bound(g)
    assert result.coupling == pytest.approx(4 / np.pi, rel=1e-3)
    assert result.p_star == pytest.approx(1.0, abs=1e-2)


def test_ermentrout_two_level_density_approaches_twice_the_halfwidth():
    # Mass concentrated in narrow triangles against the endpoints behaves
    # like equal point masses at +-1, whose threshold is 2 omega_max.
    num = 1601
    grid = np.linspace(-1, 1, num)
    width = 0.05
    g = np.maximum(0.0, 1.0 - np.abs(np.abs(grid) - 1.0) / width)
    h = 2.0 / (num - 1)
    weights = np.ones(num)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    g /= (h / 3.0) * (g * weights).sum()
    result = ermentrout_bound(g)
    assert result.coupling == pytest.approx(2.0, rel=0.03)
    assert result.p_star == pytest.approx(np.sqrt(2.0), rel=0.05)


def test_ermentrout_threshold_never_below_halfwidth():
    # The variational functional is at most 1, so K >= omega_max always.
    rng = np.random.default_rng(12)
    num = 201
    h = 2.0 / (num - 1)
    weights = np.ones(num)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    for _ in range(100):
        half = rng.uniform(0.0, 1.0, (num + 1) // 2)
        g = np.concatenate([half[:0:-1], half])
        mass = (h / 3.0) * (g * weights).sum()
        if mass <= 0:
            continue
        g = g / mass
        assert ermentrout_bound(g).coupling >= 1.0 - 1e-9


def test_ermentrout_rejects_bad_densities():
    with pytest.raises(ValueError):
        ermentrout_bound(np.full(800, 0.5))           # even point count
    with pytest.raises(ValueError):
        ermentrout_bound(np.full(801, 0.4))           # not normalized
    with pytest.raises(ValueError):
        ermentrout_bound(-np.full(801, 0.5))          # negative


def test_performance_envelope_examples():
    env = performance_envelope(2.0, 1.0)
    assert env.gamma_min == pytest.approx(np.pi / 6)
    assert env.gamma_max == pytest.approx(np.pi - np.pi / 6)
    assert env.r_floor == pytest.approx(np.cos(np.pi / 12), abs=1e-12)
    assert env.r_floor == pytest.approx(np.sqrt((1 + np.sqrt(0.75)) / 2), abs=1e-12)
    assert env.frequency_sync_rate(np.pi / 6) == pytest.approx(np.sqrt(3.0))

    degenerate = performance_envelope(1.0, 0.0)
    assert degenerate.gamma_min == 0.0
    assert degenerate.gamma_max == pytest.approx(np.pi)
    assert degenerate.r_floor == 1.0


def test_performance_envelope_identities():
    rng = np.random.default_rng(13)
    for _ in range(200):
        k_c = rng.uniform(0.0, 2.0)
        k = k_c + rng.uniform(1e-3, 3.0)
        env = performance_envelope(k, k_c)
        assert np.sin(env.gamma_min) == pytest.approx(k_c / k, abs=1e-12)
        assert np.sin(env.gamma_max) == pytest.approx(k_c / k, abs=1e-9)
        assert env.gamma_min + env.gamma_max == pytest.approx(np.pi, abs=1e-12)
        assert env.r_floor == pytest.approx(np.cos(env.gamma_min / 2), abs=1e-12)


def test_performance_envelope_rejects_subcritical():
    with pytest.raises(NoSynchronizationGuarantee):
        performance_envelope(1.0, 1.0)
    with pytest.raises(NoSynchronizationGuarantee):
        performance_envelope(0.5, 1.0)


def test_sinc_removable_singularity():
    assert sinc(0.0) == 1.0
    assert sinc(np.pi) == pytest.approx(0.0, abs=1e-15)
    assert sinc(3.0) == pytest.approx(np.sin(3.0) / 3.0)


def test_bound_report_assembly_and_ordering_check():
    report = bound_report([-1.0, 0.0, 1.0], g_at_zero=0.5)
    assert report.k_explicit == 2.0
    assert report.k_necessary == 1.5
    assert report.k_exact == pytest.approx(1.7043783, abs=1e-6)
    assert report.k_continuum == pytest.approx(4 / np.pi)
    assert report.k_ermentrout is None
    with pytest.raises(ValueError):
        BoundReport(k_explicit=1.0, k_necessary=0.5, k_exact=1.5)
