"""Radial free fall into a Schwarzschild black hole, in dimensionless units.

Conventions
-----------
Distances are measured in gravitational radii r_g, times in r_g/c and
frequencies in c/r_g, so the horizon sits at r = 1. The infalling atom
starts from rest at infinity; its worldline obeys

    dr/dtau = -1/sqrt(r),        dt/dtau = r/(r - 1),

with proper time tau chosen so that tau = 0 at the horizon crossing
(tau < 0 outside). The Schwarzschild-time integration constant is not
fixed by the dynamics; every routine that needs t takes an explicit
reference radius ``r_ref`` where t = 0, or uses the horizon-synchronized
origin (see :func:`horizon_synced_time_of_radius`).

All functions are pure and operate on immutable values; they are safe to
call concurrently.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, IntegrationError

# Reject radii this close to the horizon instead of returning huge values
# from the log divergences.
HORIZON_PAD = 1e-12

# Additive constant of the horizon-synchronized Schwarzschild-time origin:
# with t(r) = time_integral(r) + HORIZON_SYNC_OFFSET the outgoing null
# coordinate obeys t - r_* -> -2 ln(-tau) with no additive constant as
# tau -> 0-, which is the convention under which the near-horizon mode
# functions oscillate at exactly their labelled frequency.
HORIZON_SYNC_OFFSET = 11.0 / 3.0 - 2.0 * math.log(2.0)


def _check_exterior(r: float, name: str = "r") -> None:
    if not (r > 1.0 + HORIZON_PAD):
        raise DomainError(
            f"{name} = {r} must lie outside the horizon (> 1 + {HORIZON_PAD:g})"
        )


def proper_time_of_radius(r: float) -> float:
    """Proper time tau(r) = (2/3)(1 - r^(3/2)) along the radial infall.

    The constant is fixed by tau = 0 at the horizon crossing r = 1, so
    tau < 0 outside the horizon and tau = 2/3 at the singularity.
    """
    if r < 0.0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    return (2.0 / 3.0) * (1.0 - r ** 1.5)


def radius_of_proper_time(tau: float) -> float:
    """Inverse of :func:`proper_time_of_radius`: r = (1 - 3 tau/2)^(2/3)."""
    if tau > 2.0 / 3.0:
        raise DomainError(f"proper time must not exceed 2/3, got {tau}")
    return (1.0 - 1.5 * tau) ** (2.0 / 3.0)


def _time_integral(r: float) -> float:
    # Antiderivative of dt/dr = -r^(3/2)/(r-1); valid for r > 1.
    s = math.sqrt(r)
    return -(2.0 / 3.0) * r * s - 2.0 * s - math.log((s - 1.0) / (s + 1.0))


def schwarzschild_time_of_radius(r: float, r_ref: float) -> float:
    """Schwarzschild time t(r) along the infall, anchored so t(r_ref) = 0.

    Finite for every r > 1 and diverging to +infinity as r -> 1+, where the
    coordinate time freezes. Radii at or inside the horizon are rejected.
    """
    _check_exterior(r)
    _check_exterior(r_ref, "r_ref")
    return _time_integral(r) - _time_integral(r_ref)


def horizon_synced_time_of_radius(r: float) -> float:
    """Schwarzschild time with the horizon-synchronized origin.

    Same worldline as :func:`schwarzschild_time_of_radius`, but the
    additive constant is chosen so the near-horizon expansion of the
    outgoing null coordinate carries no constant: t - r_* -> -2 ln(-tau)
    as tau -> 0-. Mode-frequency measurements along the infall use this
    anchoring.
    """
    _check_exterior(r)
    return _time_integral(r) + HORIZON_SYNC_OFFSET


def regge_wheeler(r: float) -> float:
    """Tortoise coordinate r_* = r + ln(r - 1); maps the horizon to -infinity."""
    _check_exterior(r)
    return r + math.log(r - 1.0)


@dataclass(frozen=True)
class KruskalPoint:
    """A point in Kruskal-Szekeres coordinates with its region flag.

    Exterior points satisfy X > |T| and X^2 - T^2 = (r - 1) e^r; interior
    points satisfy T > |X| and T^2 - X^2 = (1 - r) e^r.
    """

    T: float
    X: float
    region: str  # "exterior" or "interior"

    @property
    def is_exterior(self) -> bool:
        return self.region == "exterior"


def to_kruskal(t: float, r: float) -> KruskalPoint:
    """Map Schwarzschild (t, r) to Kruskal-Szekeres (T, X).

    Uses the exterior branch for r > 1 and the interior branch for
    0 < r < 1; the horizon r = 1 is a chart boundary and is rejected.
    """
    if r <= 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    if abs(r - 1.0) <= HORIZON_PAD:
        raise DomainError("r = 1 is the horizon chart boundary")
    half_t = 0.5 * t
    if r > 1.0:
        prefac = math.sqrt(r - 1.0) * math.exp(0.5 * r)
        return KruskalPoint(
            T=prefac * math.sinh(half_t), X=prefac * math.cosh(half_t),
            region="exterior",
        )
    prefac = math.sqrt(1.0 - r) * math.exp(0.5 * r)
    return KruskalPoint(
        T=prefac * math.cosh(half_t), X=prefac * math.sinh(half_t),
        region="interior",
    )


@dataclass(frozen=True)
class InfallTrajectory:
    """Sampled radial infall worldline (r decreasing from r_start).

    Invariants: tau is strictly decreasing in r with tau < 0 everywhere
    outside the horizon; t is anchored to t = 0 at r_start and increases
    as r decreases, diverging at the horizon.
    """

    r_start: float
    r: np.ndarray
    tau: np.ndarray
    t: np.ndarray

    @property
    def tau_domain(self) -> tuple[float, float]:
        return float(self.tau.min()), float(self.tau.max())

    def __len__(self) -> int:
        return len(self.r)


def integrate_geodesic(
    r_start: float,
    r_end: float,
    tol: float,
    n_samples: int | None = None,
) -> InfallTrajectory:
    """Numerically integrate the infall worldline from r_start down to r_end.

    Integrates d tau/dr = -sqrt(r) and dt/dr = -r^(3/2)/(r - 1) with an
    adaptive embedded Runge-Kutta scheme (radius as the independent
    variable, which stays non-stiff near the horizon where dt/dtau
    diverges). Serves as the independent oracle for the closed forms
    :func:`proper_time_of_radius` and :func:`schwarzschild_time_of_radius`;
    each sample should agree with them to within ~10*tol.

    ``n_samples`` requests an evenly spaced radial grid; by default the
    integrator's own accepted steps are returned.
    """
    _check_exterior(r_end, "r_end")
    if not r_end < r_start:
        raise DomainError(f"need 1 < r_end < r_start, got ({r_start}, {r_end})")
    if not (1e-14 < tol < 1e-3):
        raise DomainError(f"tol must lie in (1e-14, 1e-3), got {tol}")

    def rhs(r, y):
        s = math.sqrt(r)
        return (-s, -r * s / (r - 1.0))

    r_eval = None
    if n_samples is not None:
        if n_samples < 2:
            raise DomainError("n_samples must be at least 2")
        r_eval = np.linspace(r_start, r_end, n_samples)

    sol = solve_ivp(
        rhs,
        (r_start, r_end),
        y0=(proper_time_of_radius(r_start), 0.0),
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-3,
        t_eval=r_eval,
    )
    if not sol.success or not np.all(np.isfinite(sol.y)):
        last = None
        if sol.t.size:
            last = (float(sol.t[-1]), float(sol.y[0, -1]), float(sol.y[1, -1]))
        raise IntegrationError(
            f"geodesic integration failed near r = "
            f"{last[0] if last else r_start}: {sol.message}",
            last_sample=last,
        )
    return InfallTrajectory(
        r_start=r_start, r=sol.t, tau=sol.y[0], t=sol.y[1]
    )


def _check_near_horizon_tau(tau: float) -> None:
    if tau >= 0.0:
        raise DomainError(f"proper time must be negative (pre-crossing), got {tau}")
    if -tau >= 0.5:
        raise DomainError(
            f"|tau| = {-tau} is outside the near-horizon validity window (< 0.5)"
        )
    if -tau > 0.1:
        warnings.warn(
            f"|tau| = {-tau} > 0.1: near-horizon expansion is getting crude",
            stacklevel=3,
        )


def exact_null_coords(tau: float, r_ref: float | None = None) -> tuple[float, float]:
    """Exact null coordinates (t - r_*, t + r_*) at proper time tau < 0.

    ``r_ref`` anchors t = 0 there; None selects the horizon-synchronized
    origin. Used as the reference for :func:`near_horizon_null_coords`.
    """
    if tau >= 0.0:
        raise DomainError(f"proper time must be negative, got {tau}")
    r = radius_of_proper_time(tau)
    if r_ref is None:
        t = horizon_synced_time_of_radius(r)
    else:
        t = schwarzschild_time_of_radius(r, r_ref)
    rs = regge_wheeler(r)
    return t - rs, t + rs


def near_horizon_null_coords(
    tau: float,
    r_cal: float = 1.05,
    r_ref: float | None = None,
) -> tuple[float, float]:
    """Near-horizon approximations of the null coordinates at proper time tau.

    Returns (-2 ln(-tau) + C1, tau/2 + C2) where the constants C1, C2 are
    fitted so the approximations equal the exact coordinates at the
    calibration radius ``r_cal``. Valid for small |tau|; inputs with
    |tau| >= 0.5 are rejected and 0.1 < |tau| < 0.5 triggers a warning.
    """
    _check_near_horizon_tau(tau)
    _check_exterior(r_cal, "r_cal")
    tau_cal = proper_time_of_radius(r_cal)
    u_cal, v_cal = exact_null_coords(tau_cal, r_ref)
    c1 = u_cal + 2.0 * math.log(-tau_cal)
    c2 = v_cal - 0.5 * tau_cal
    return -2.0 * math.log(-tau) + c1, 0.5 * tau + c2
