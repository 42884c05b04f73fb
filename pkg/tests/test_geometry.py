import math

import numpy as np
import pytest
from scipy.integrate import quad

from bhamp import geometry
from bhamp.errors import DomainError, IntegrationError


def test_proper_time_examples():
    assert geometry.proper_time_of_radius(1.0) == 0.0
    assert geometry.proper_time_of_radius(0.0) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert geometry.proper_time_of_radius(4.0) == pytest.approx(-14.0 / 3.0, abs=1e-12)
    with pytest.raises(DomainError):
        geometry.proper_time_of_radius(-0.5)


def test_radius_of_proper_time_inverts():
    for r in (1.0, 1.3, 2.0, 5.0, 9.7):
        tau = geometry.proper_time_of_radius(r)
        assert geometry.radius_of_proper_time(tau) == pytest.approx(r, rel=1e-14)
    with pytest.raises(DomainError):
        geometry.radius_of_proper_time(1.0)


def test_schwarzschild_time_anchor_and_divergence():
    assert geometry.schwarzschild_time_of_radius(4.0, 4.0) == 0.0
    # log divergence toward the horizon
    t_close = geometry.schwarzschild_time_of_radius(1.0 + 1e-8, 4.0)
    t_far = geometry.schwarzschild_time_of_radius(1.0 + 1e-4, 4.0)
    assert t_close > t_far > 0.0
    for bad in (1.0, 0.5, 1.0 + 1e-13):
        with pytest.raises(DomainError):
            geometry.schwarzschild_time_of_radius(bad, 4.0)
        with pytest.raises(DomainError):
            geometry.schwarzschild_time_of_radius(4.0, bad)


def test_schwarzschild_time_quadrature_oracle():
    # independent quadrature of dt/dr = -r^(3/2)/(r-1) from r_ref to r
    expected, err = quad(lambda r: -r ** 1.5 / (r - 1.0), 4.0, 2.0)
    assert err < 1e-10
    got = geometry.schwarzschild_time_of_radius(2.0, 4.0)
    assert abs(got - expected) < 1e-8


@pytest.mark.parametrize("r", [1.5, 2.0, 4.0])
def test_proper_time_chain_rule(r):
    h = 1e-6
    derivative = (
        geometry.proper_time_of_radius(r + h)
        - geometry.proper_time_of_radius(r - h)
    ) / (2.0 * h)
    assert derivative == pytest.approx(-math.sqrt(r), rel=1e-6)


def test_regge_wheeler_examples():
    assert geometry.regge_wheeler(2.0) == 2.0
    assert geometry.regge_wheeler(1.5) == pytest.approx(0.8068528194400547, abs=1e-12)
    assert geometry.regge_wheeler(1.0 + math.exp(-5.0)) == pytest.approx(
        -3.9932620530009293, abs=1e-9)
    with pytest.raises(DomainError):
        geometry.regge_wheeler(1.0)


def test_to_kruskal_examples():
    point = geometry.to_kruskal(0.0, 2.0)
    assert point.T == 0.0
    assert point.X == pytest.approx(math.e, abs=1e-14)
    assert point.is_exterior

    inner = geometry.to_kruskal(0.0, 0.5)
    assert inner.X == 0.0
    assert inner.T == pytest.approx(math.sqrt(0.5) * math.exp(0.25), abs=1e-14)
    assert inner.region == "interior"

    for t in (-1.0, 0.3, 2.0):
        p = geometry.to_kruskal(t, 3.0)
        assert abs(p.X ** 2 - p.T ** 2 - 2.0 * math.e ** 3) < 1e-10


@pytest.mark.parametrize("r", [0.25, 0.5, 2.0, 3.0, 5.0])
def test_kruskal_hyperbolic_identity(r):
    target = (r - 1.0) * math.exp(r)
    for t in np.linspace(-5.0, 5.0, 11):
        point = geometry.to_kruskal(float(t), r)
        if r > 1.0:
            value = point.X ** 2 - point.T ** 2
            assert point.X > abs(point.T)
        else:
            value = -(point.X ** 2 - point.T ** 2)
            target_local = (1.0 - r) * math.exp(r)
            assert point.T > abs(point.X)
            assert abs(value - target_local) < 1e-10
            assert abs(value - target_local) / target_local < 1e-10
            continue
        assert abs(value - target) < 1e-10
        assert abs(value - target) / target < 1e-10


def test_to_kruskal_rejects_horizon_and_nonpositive():
    with pytest.raises(DomainError):
        geometry.to_kruskal(0.0, 1.0)
    with pytest.raises(DomainError):
        geometry.to_kruskal(0.0, 1.0 + 1e-13)
    with pytest.raises(DomainError):
        geometry.to_kruskal(0.0, 0.0)
    with pytest.raises(DomainError):
        geometry.to_kruskal(0.0, -2.0)


def test_integrate_geodesic_matches_closed_forms():
    tol = 1e-10
    traj = geometry.integrate_geodesic(10.0, 1.01, tol, n_samples=500)
    tau_closed = np.array([geometry.proper_time_of_radius(r) for r in traj.r])
    t_closed = np.array(
        [geometry.schwarzschild_time_of_radius(r, 10.0) for r in traj.r])
    assert np.max(np.abs(traj.tau - tau_closed)) < 1e-8
    assert np.max(np.abs(traj.t - t_closed)) < 1e-8
    # and the tighter 10*tol target for tau
    assert np.max(np.abs(traj.tau - tau_closed)) < 10.0 * tol


def test_integrate_geodesic_instantaneous_rates():
    traj = geometry.integrate_geodesic(6.0, 1.5, 1e-10, n_samples=4000)
    # dr/dtau = -1/sqrt(r) at r = 4 and dt/dtau = r/(r-1) at r = 2
    idx4 = int(np.argmin(np.abs(traj.r - 4.0)))
    drdtau = (traj.r[idx4 + 1] - traj.r[idx4 - 1]) / (
        traj.tau[idx4 + 1] - traj.tau[idx4 - 1])
    assert drdtau == pytest.approx(-0.5, rel=1e-5)
    idx2 = int(np.argmin(np.abs(traj.r - 2.0)))
    dtdtau = (traj.t[idx2 + 1] - traj.t[idx2 - 1]) / (
        traj.tau[idx2 + 1] - traj.tau[idx2 - 1])
    assert dtdtau == pytest.approx(2.0, rel=1e-5)


def test_trajectory_monotonicity():
    traj = geometry.integrate_geodesic(8.0, 1.05, 1e-9, n_samples=300)
    assert np.all(np.diff(traj.r) < 0.0)
    assert np.all(np.diff(traj.tau) > 0.0)  # tau decreases with r
    assert np.all(np.diff(traj.t) > 0.0)    # t grows as r shrinks
    assert np.all(traj.tau < 0.0)
    assert traj.t[0] == 0.0


def test_integrate_geodesic_validation():
    with pytest.raises(DomainError):
        geometry.integrate_geodesic(10.0, 1.0, 1e-9)
    with pytest.raises(DomainError):
        geometry.integrate_geodesic(2.0, 3.0, 1e-9)
    with pytest.raises(DomainError):
        geometry.integrate_geodesic(10.0, 2.0, 1e-2)
    with pytest.raises(DomainError):
        geometry.integrate_geodesic(10.0, 2.0, 1e-15)
    with pytest.raises(DomainError):
        geometry.integrate_geodesic(10.0, 2.0, 1e-9, n_samples=1)


def test_integrate_geodesic_failure_carries_last_sample(monkeypatch):
    class FailedSolution:
        success = False
        message = "step size underflow"
        t = np.array([10.0, 5.0])
        y = np.array([[-20.0, -7.0], [0.0, 3.0]])

    monkeypatch.setattr(geometry, "solve_ivp",
                        lambda *args, **kwargs: FailedSolution())
    with pytest.raises(IntegrationError) as excinfo:
        geometry.integrate_geodesic(10.0, 1.5, 1e-9)
    assert excinfo.value.last_sample == (5.0, -7.0, 3.0)


def test_horizon_synced_time_normalizes_outgoing_null_coordinate():
    # t - r_* -> -2 ln(-tau) with zero additive constant under the synced
    # origin (the residual shrinks linearly with tau)
    for tau in (-1e-3, -1e-4, -1e-5):
        u, v = geometry.exact_null_coords(tau)
        assert abs(u + 2.0 * math.log(-tau)) < 3.0 * abs(tau)
        assert v - 0.5 * tau == pytest.approx(2.0, abs=1e-6)


def test_near_horizon_exact_at_calibration_point():
    r_cal = 1.05
    tau_cal = geometry.proper_time_of_radius(r_cal)
    approx = geometry.near_horizon_null_coords(tau_cal, r_cal=r_cal)
    exact = geometry.exact_null_coords(tau_cal)
    assert approx[0] == pytest.approx(exact[0], abs=1e-12)
    assert approx[1] == pytest.approx(exact[1], abs=1e-12)


def test_near_horizon_trend_small_tau():
    tau = -1e-3
    approx_u, _ = geometry.near_horizon_null_coords(tau)
    exact_u, _ = geometry.exact_null_coords(tau)
    assert abs(approx_u - exact_u) / abs(exact_u) < 0.01


def test_near_horizon_quadratic_residual_in_ingoing_coordinate():
    # Richardson check: the t + r_* residual scales like tau^2
    def residual(tau):
        approx = geometry.near_horizon_null_coords(tau, r_cal=1.0001)
        exact = geometry.exact_null_coords(tau)
        return approx[1] - exact[1]

    ratio = residual(-2e-2) / residual(-1e-2)
    assert 3.0 < ratio < 5.0


def test_near_horizon_window_enforcement():
    with pytest.raises(DomainError):
        geometry.near_horizon_null_coords(0.0)
    with pytest.raises(DomainError):
        geometry.near_horizon_null_coords(0.01)
    with pytest.raises(DomainError):
        geometry.near_horizon_null_coords(-0.6)
    with pytest.warns(UserWarning):
        geometry.near_horizon_null_coords(-0.2)


def test_near_horizon_supports_explicit_reference_radius():
    tau = -0.01
    approx_u, approx_v = geometry.near_horizon_null_coords(tau, r_ref=4.0)
    exact_u, exact_v = geometry.exact_null_coords(tau, r_ref=4.0)
    assert abs(approx_u - exact_u) < 0.15
    assert abs(approx_v - exact_v) < 1e-3
