import numpy as np
import pytest

from kurasync import (
    PhaseVector,
    arc_extremes,
    arc_from_order,
    cohesiveness_bounds,
    enclosing_arc_length,
    geodesic_distance,
    order_parameter,
    wrap_angle,
)


def test_wrap_angle_interval_convention():
    assert wrap_angle(np.pi) == pytest.approx(np.pi)
    assert wrap_angle(-np.pi) == pytest.approx(np.pi)
    assert wrap_angle(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    values = wrap_angle(np.linspace(-20, 20, 401))
    assert np.all(values > -np.pi) and np.all(values <= np.pi)


def test_geodesic_distance_examples():
    assert geodesic_distance(0.0, 0.0) == 0.0
    assert geodesic_distance(3.0, -3.0) == pytest.approx(2 * np.pi - 6.0, abs=1e-12)
    assert geodesic_distance(0.0, np.pi) == pytest.approx(np.pi)


def test_geodesic_symmetry_and_triangle_inequality():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        a, b, c = rng.uniform(-np.pi, np.pi, 3)
        assert geodesic_distance(a, b) == pytest.approx(geodesic_distance(b, a), abs=1e-15)
        assert geodesic_distance(a, c) <= geodesic_distance(a, b) + geodesic_distance(b, c) + 1e-12


def test_enclosing_arc_examples():
    assert enclosing_arc_length([0.7, 0.7, 0.7]) == 0.0
    assert enclosing_arc_length([0.0, np.pi / 2, np.pi]) == pytest.approx(np.pi)
    assert enclosing_arc_length([-0.5, 0.5]) == pytest.approx(1.0)


def test_enclosing_arc_handles_wrap_and_single_angle():
    # Cluster straddling the branch cut still forms a short arc.
    assert enclosing_arc_length([np.pi - 0.1, -np.pi + 0.1]) == pytest.approx(0.2)
    assert enclosing_arc_length([2.0]) == 0.0


def test_enclosing_arc_rotation_invariance():
    rng = np.random.default_rng(1)
    for _ in range(300):
        n = rng.integers(2, 12)
        theta = rng.uniform(-np.pi, np.pi, n)
        shift = rng.uniform(-10, 10)
        assert enclosing_arc_length(theta + shift) == pytest.approx(
            enclosing_arc_length(theta), abs=1e-12)


def test_order_parameter_examples():
    assert order_parameter([0.3, 0.3, 0.3]).magnitude == pytest.approx(1.0)
    splay = order_parameter([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert splay.magnitude == pytest.approx(0.0, abs=1e-12)
    assert not splay.phase_defined
    assert splay.phase == 0.0
    two = order_parameter([-np.pi / 4, np.pi / 4])
    assert two.magnitude == pytest.approx(np.cos(np.pi / 4), abs=1e-12)
    assert two.phase == pytest.approx(0.0, abs=1e-12)


def test_cohesiveness_bounds_examples():
    assert cohesiveness_bounds(0.0) == (1.0, 1.0)
    lo, hi = cohesiveness_bounds(np.pi)
    assert lo == pytest.approx(0.0, abs=1e-12) and hi == 1.0
    gamma_lo, gamma_hi = arc_from_order(0.7071067811865476)
    assert gamma_lo == pytest.approx(np.pi / 2, abs=1e-9)
    assert gamma_hi == pytest.approx(np.pi)


def test_bounds_domain_rejection():
    with pytest.raises(ValueError):
        cohesiveness_bounds(-0.1)
    with pytest.raises(ValueError):
        cohesiveness_bounds(np.pi + 0.1)
    with pytest.raises(ValueError):
        arc_from_order(1.5)
    with pytest.raises(ValueError):
        arc_from_order(-0.2)


def test_arc_order_round_trip():
    # Configurations inside an arc gamma <= pi keep r >= cos(V/2).
    rng = np.random.default_rng(2)
    for _ in range(1000):
        n = rng.integers(2, 12)
        gamma = rng.uniform(0.0, np.pi)
        center = rng.uniform(-np.pi, np.pi)
        theta = center + rng.uniform(-gamma / 2, gamma / 2, n)
        arc = enclosing_arc_length(theta)
        assert arc <= gamma + 1e-12
        r = order_parameter(theta).magnitude
        assert r >= np.cos(arc / 2) - 1e-12


def test_phase_vector_normalizes_and_validates():
    pv = PhaseVector(np.array([3 * np.pi, 0.0]))
    assert pv.angles[0] == pytest.approx(np.pi)
    assert pv.n == 2
    assert pv.arc_length() == pytest.approx(np.pi)
    with pytest.raises(ValueError):
        PhaseVector(np.empty(0))
    with pytest.raises(ValueError):
        pv.angles[0] = 0.0


def test_arc_extremes_positions_and_ties():
    ext = arc_extremes([0.1, 0.5, 1.2])
    assert ext.length == pytest.approx(1.1)
    assert ext.min_position == pytest.approx(0.1)
    assert ext.max_position == pytest.approx(1.2)
    assert not ext.tied

    tied = arc_extremes([0.0, 0.0, 1.0])
    assert tied.tied
    assert set(tied.min_indices) == {0, 1}

    sync = arc_extremes([0.2, 0.2, 0.2])
    assert sync.length == 0.0
    assert sync.tied
