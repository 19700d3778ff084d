import numpy as np
import pytest

from kurasync import (
    ConfigError,
    ConstantProfile,
    DampingInertiaSpec,
    EquilibriumNotFound,
    HLambdaSpec,
    Inertia,
    NetworkSpec,
    State,
    analyze_equilibrium,
    conjugacy_check,
    find_equilibrium,
    hlambda_vector_field,
    inertia,
    integrate,
    jacobian_hlambda,
    multirate_sync_report,
    potential_gradient,
    potential_hessian,
    scaled_frequencies,
    vector_field,
    wrap_angle,
)


def network(omega, coupling, damping=None, inertia_diag=(), model=None):
    omega = np.asarray(omega, dtype=float)
    damping = np.ones(omega.size) if damping is None else np.asarray(damping, dtype=float)
    dd = DampingInertiaSpec(damping, np.asarray(inertia_diag, dtype=float))
    if model is None:
        model = "multi-rate" if dd.m else "first-order-multi-rate"
    return NetworkSpec(profile=ConstantProfile(omega), coupling=coupling, dd=dd, model=model)


def random_locked_network(rng, n, m, margin=1.3):
    while True:
        w = rng.uniform(-1.0, 1.0, n)
        d = rng.uniform(0.5, 2.0, n)
        inertia_diag = rng.uniform(0.5, 2.0, m)
        wbar = scaled_frequencies(w, d)
        span = wbar.max() - wbar.min()
        if span > 1e-2:
            return network(w, margin * span, d, inertia_diag)


def test_find_equilibrium_two_oscillators():
    eq = find_equilibrium(network([-0.5, 0.5], 2.0))
    assert abs(eq.phases[1] - eq.phases[0]) == pytest.approx(np.arcsin(0.5), abs=1e-10)
    assert eq.residual < 1e-10
    assert eq.phases[-1] == 0.0


def test_find_equilibrium_identical_frequencies():
    eq = find_equilibrium(network([0.7, 0.7, 0.7], 1.0))
    assert eq.phases == pytest.approx(np.zeros(3), abs=1e-12)
    assert eq.arc_length == pytest.approx(0.0, abs=1e-12)


def test_find_equilibrium_below_threshold_raises():
    with pytest.raises(EquilibriumNotFound) as err:
        find_equilibrium(network([-0.5, 0.5], 0.9))
    assert err.value.residual > 0


def test_equilibrium_lands_inside_guaranteed_arc():
    rng = np.random.default_rng(20)
    for _ in range(20):
        spec = random_locked_network(rng, int(rng.integers(3, 9)), 0)
        wbar = scaled_frequencies(spec.profile.evaluate(0.0), spec.dd.damping)
        gamma_min = np.arcsin((wbar.max() - wbar.min()) / spec.coupling)
        eq = find_equilibrium(spec)
        assert eq.arc_length <= gamma_min + 1e-9


def test_equilibrium_transfers_to_full_network():
    # Mapped through the full dynamics with locked velocities, the
    # equilibrium is stationary: phase rates equal the locked frequency.
    rng = np.random.default_rng(21)
    for _ in range(10):
        n = int(rng.integers(3, 7))
        m = int(rng.integers(1, n + 1))
        spec = random_locked_network(rng, n, m)
        eq = find_equilibrium(spec)
        w_sync = spec.profile.evaluate(0.0).sum() / spec.dd.damping.sum()
        rate = vector_field(spec, State(eq.phases, np.full(m, w_sync)))
        assert np.abs(rate.theta - w_sync).max() < 1e-9
        assert np.abs(rate.theta_dot).max() < 1e-9


def test_gradient_flow_jacobian_is_negative_hessian():
    spec = network([0.2, -0.1, -0.1], 1.5)
    eq = find_equilibrium(spec)
    hspec = HLambdaSpec.from_network(spec, 1.0)
    x = hspec.state_from_phases(eq.phases)
    jac = jacobian_hlambda(hspec, x)
    assert np.allclose(jac, -potential_hessian(1.5, eq.phases), atol=1e-12)


def test_phase_sync_jacobian_eigenvalues_first_order():
    spec = network([0.0, 0.0, 0.0], 1.0)
    hspec = HLambdaSpec.from_network(spec, 1.0)
    jac = jacobian_hlambda(hspec, np.zeros(3))
    eigs = np.sort(np.linalg.eigvals(jac).real)
    assert eigs == pytest.approx([-1.0, -1.0, 0.0], abs=1e-12)


def test_inertia_examples():
    assert inertia(-np.eye(4)) == Inertia(4, 0, 0)
    assert inertia(np.zeros((3, 3))) == Inertia(0, 3, 0)
    spec = network([0.0, 0.0, 0.0], 1.0, inertia_diag=[1.0, 1.0, 1.0])
    hspec = HLambdaSpec.from_network(spec, 0.0)
    jac = jacobian_hlambda(hspec, np.zeros(6))
    assert inertia(jac) == Inertia(5, 1, 0)


def test_jacobian_rejects_non_equilibrium():
    spec = network([0.3, -0.3], 1.5)
    hspec = HLambdaSpec.from_network(spec, 0.5)
    with pytest.raises(ConfigError):
        jacobian_hlambda(hspec, np.array([0.9, 0.0]))


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(22)
    spec = random_locked_network(rng, 6, 3)
    eq = find_equilibrium(spec)
    for lam in (0.0, 0.37, 1.0):
        hspec = HLambdaSpec.from_network(spec, lam)
        x_star = hspec.state_from_phases(eq.phases)
        jac = jacobian_hlambda(hspec, x_star)
        eps = 1e-5
        fd = np.empty_like(jac)
        for j in range(x_star.size):
            plus, minus = x_star.copy(), x_star.copy()
            plus[j] += eps
            minus[j] -= eps
            fd[:, j] = (hlambda_vector_field(hspec, plus)
                        - hlambda_vector_field(hspec, minus)) / (2 * eps)
        assert np.abs(jac - fd).max() < 1e-6


def test_inertia_invariant_over_interpolation_and_inertia_scale():
    rng = np.random.default_rng(23)
    for _ in range(100):
        n = int(rng.integers(3, 8))
        m = int(rng.integers(0, n + 1))
        spec = random_locked_network(rng, n, m)
        eq = find_equilibrium(spec)
        reference_hspec = HLambdaSpec.from_network(spec, 1.0)
        x_ref = reference_hspec.state_from_phases(eq.phases)
        reference = inertia(-reference_hspec.hessian(x_ref))
        assert reference == Inertia(n + m - 1, 1, 0)
        for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
            for scale in np.logspace(-1, 1, 3) if m else (1.0,):
                hspec = HLambdaSpec.from_network(spec, lam, inertia_scale=scale)
                jac = jacobian_hlambda(hspec, hspec.state_from_phases(eq.phases))
                assert inertia(jac) == reference


def test_jacobian_nullspace_matches_hessian_kernel():
    rng = np.random.default_rng(24)
    spec = random_locked_network(rng, 5, 2)
    eq = find_equilibrium(spec)
    hspec = HLambdaSpec.from_network(spec, 0.5)
    x_star = hspec.state_from_phases(eq.phases)
    jac = jacobian_hlambda(hspec, x_star)
    hess = hspec.hessian(x_star)
    hess_zero = int(np.sum(np.abs(np.linalg.eigvalsh(hess)) <= 1e-8 * np.linalg.norm(hess, 2)))
    assert inertia(jac).center == hess_zero == 1


def test_conjugacy_check_report():
    rng = np.random.default_rng(25)
    spec = random_locked_network(rng, 4, 4)
    report = conjugacy_check(spec, m_scalings=(0.1, 1.0, 10.0), lambdas=(0.0, 0.5, 1.0))
    assert report.inertia_invariant
    assert report.stable
    assert report.hyperbolic
    assert report.reference_inertia == Inertia(7, 1, 0)
    assert report.max_transfer_residual < 1e-10
    assert report.min_center_alignment > 1 - 1e-6


def test_analyze_equilibrium_report_fields():
    spec = network([0.3, -0.1, -0.2], 1.2, inertia_diag=[0.5])
    report = analyze_equilibrium(spec)
    assert report.inertia == Inertia(3, 1, 0)
    assert report.hyperbolic
    assert report.zero_dim == 1
    assert len(report.eigenvalues) == 4
    assert np.all(np.diff([z.real for z in report.eigenvalues]) >= 0)
    payload = report.as_dict()
    assert payload["inertia"]["stable"] == 3
    assert len(payload["equilibrium_phases"]) == 3


def test_multirate_sync_report_examples():
    rep = multirate_sync_report(network([2.0, 6.0], 1.0, damping=[1.0, 3.0]))
    assert rep.phase_sync_admissible
    assert rep.common_rate == pytest.approx(2.0)
    assert rep.k_critical == pytest.approx(0.0)

    w = np.array([0.4, -0.2, 0.1])
    rep = multirate_sync_report(network(w, 1.0))
    assert rep.k_critical == pytest.approx(w.max() - w.min())

    rep = multirate_sync_report(network([0.0, 0.0, 0.0], 1.0, damping=[1.0, 2.0, 3.0]),
                                theta0=[0.1, 0.2, 0.3])
    assert rep.weighted_phase == pytest.approx(1.4 / 6.0)
    assert rep.phase_sync_admissible


def test_weighted_phase_confirmed_by_simulation():
    damping = np.array([1.0, 2.0, 3.0])
    spec = network([0.0, 0.0, 0.0], 1.0, damping=damping)
    theta0 = np.array([0.1, 0.2, 0.3])
    traj = integrate(spec, State(theta0), 60.0, step=0.01)
    expected = (damping * theta0).sum() / damping.sum()
    assert np.abs(traj.theta[-1] - expected).max() < 1e-8


def test_phase_sync_almost_global_by_sampling():
    # With frequencies proportional to the damping, 200 random starts over
    # the whole torus all reach phase synchronization; any straggler would
    # have to sit near an (unstable) equilibrium, where the field vanishes.
    rng = np.random.default_rng(55)
    n, m = 4, 2
    damping = rng.uniform(0.5, 2.0, n)
    inertia_diag = rng.uniform(0.5, 2.0, m)
    s_bar = 0.3
    spec = NetworkSpec(profile=ConstantProfile(damping * s_bar), coupling=1.0,
                       dd=DampingInertiaSpec(damping, inertia_diag),
                       model="multi-rate", frame_rate=s_bar)
    converged = 0
    for _ in range(200):
        theta0 = rng.uniform(-np.pi, np.pi, n)
        v0 = rng.uniform(-0.3, 0.3, m)
        traj = integrate(spec, State(theta0, v0), 50.0, step=0.1)
        if traj.arc_length[-1] < 1e-2:
            converged += 1
        else:
            residual = vector_field(spec, traj.final_state)
            assert max(np.abs(residual.theta).max(), np.abs(residual.theta_dot).max()) < 1e-2
    assert converged >= 190


def test_scaled_with_frequency_dynamics_model():
    # The auxiliary velocities decay at D/M while the phases follow the
    # plain scaled model unchanged.
    rng = np.random.default_rng(56)
    n, m = 4, 2
    damping = rng.uniform(0.5, 2.0, n)
    inertia_diag = rng.uniform(0.5, 2.0, m)
    omega = rng.uniform(-0.5, 0.5, n)
    theta0 = rng.uniform(-1.0, 1.0, n)
    v0 = np.array([0.4, -0.2])
    spec_aux = NetworkSpec(profile=ConstantProfile(omega), coupling=1.0,
                           dd=DampingInertiaSpec(damping, inertia_diag),
                           model="scaled-with-frequency-dynamics")
    traj = integrate(spec_aux, State(theta0, v0), 3.0, step=0.01)
    expected = v0 * np.exp(-(damping[:m] / inertia_diag) * traj.times[-1])
    assert np.abs(traj.theta_dot[-1] - expected).max() < 1e-9

    spec_plain = NetworkSpec(profile=ConstantProfile(omega), coupling=1.0,
                             dd=DampingInertiaSpec(damping), model="scaled")
    plain = integrate(spec_plain, State(theta0), 3.0, step=0.01)
    assert np.abs(traj.theta - plain.theta).max() < 1e-12


def test_perturbed_equilibria_return_across_inertia_scales():
    rng = np.random.default_rng(26)
    base = random_locked_network(rng, 4, 4, margin=1.5)
    eq = find_equilibrium(base)
    w_sync = base.profile.evaluate(0.0).sum() / base.dd.damping.sum()
    delta = 1e-2 * rng.standard_normal(4)
    for scale in (0.1, 10.0):
        dd = DampingInertiaSpec(base.dd.damping, base.dd.inertia * scale)
        spec = NetworkSpec(profile=base.profile, coupling=base.coupling, dd=dd,
                           model="multi-rate", frame_rate=w_sync)
        horizon = 60.0 if scale < 1 else 400.0
        traj = integrate(spec, State(eq.phases + delta, np.zeros(4)), horizon, step=0.02)
        final = wrap_angle(traj.theta[-1] - traj.theta[-1, -1])
        target = wrap_angle(eq.phases - eq.phases[-1])
        assert np.abs(wrap_angle(final - target)).max() < 1e-5
