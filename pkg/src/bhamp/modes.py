"""Scalar-field mode functions seen by the infalling atom.

Implements the Kruskal-coordinate modes (outgoing plane wave, ingoing and
outgoing Rindler waves), the mirror-composite mode that vanishes on an
orbiting mirror at r0 > 3, and the Schwarzschild-coordinate modes psi1/psi2
that oscillate at their labelled frequency in the atom's proper time near
the horizon. Also provides the overlap integrals fed to the weak-coupling
amplifier.

Imaginary powers are evaluated as exp(i * Omega * ln(base)) with the base
restricted to positive reals by the step-function supports, so no branch
cuts are ever crossed. Out-of-support evaluations return amplitude 0 with
``in_support = False`` rather than raising.

Frequency conventions: the Kruskal modes carry Omega, the Schwarzschild
modes carry nu. The pairs are related by Omega = nu for the outgoing
plane pair (psi1) and Omega = 4*nu for the ingoing Rindler pair (psi2);
see :func:`omega_from_nu` / :func:`nu_from_omega`.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.integrate import simpson

from . import geometry
from .errors import DomainError, StabilityError, SupportError


class ModeKind(Enum):
    OUTGOING_PLANE = "outgoing_plane"
    INGOING_RINDLER = "ingoing_rindler"
    OUTGOING_RINDLER = "outgoing_rindler"
    MIRROR_COMPOSITE = "mirror_composite"
    SCHWARZSCHILD_OUTGOING = "schwarzschild_outgoing"  # psi1
    SCHWARZSCHILD_INGOING = "schwarzschild_ingoing"    # psi2


_KRUSKAL_KINDS = frozenset({
    ModeKind.OUTGOING_PLANE,
    ModeKind.INGOING_RINDLER,
    ModeKind.OUTGOING_RINDLER,
    ModeKind.MIRROR_COMPOSITE,
})
_SCHWARZSCHILD_KINDS = frozenset({
    ModeKind.SCHWARZSCHILD_OUTGOING,
    ModeKind.SCHWARZSCHILD_INGOING,
})


def _check_mirror_radius(r0: float) -> None:
    if r0 <= 1.0:
        raise DomainError(f"mirror radius {r0} lies inside the horizon")
    if r0 <= 3.0:
        raise StabilityError(
            f"mirror radius {r0} <= 3: no stable circular orbit there"
        )


@dataclass(frozen=True)
class ModeSpec:
    """A tagged mode with its frequency (and mirror radius when composite)."""

    kind: ModeKind
    omega: float | None = None
    nu: float | None = None
    mirror_radius: float | None = None

    def __post_init__(self):
        if self.kind in _KRUSKAL_KINDS:
            if self.omega is None or self.omega <= 0.0:
                raise DomainError(f"{self.kind.value} requires omega > 0")
            if self.nu is not None:
                raise DomainError("Kruskal modes take omega, not nu")
        else:
            if self.nu is None or self.nu <= 0.0:
                raise DomainError(f"{self.kind.value} requires nu > 0")
            if self.omega is not None:
                raise DomainError("Schwarzschild modes take nu, not omega")
        if self.kind is ModeKind.MIRROR_COMPOSITE:
            if self.mirror_radius is None:
                raise DomainError("mirror-composite mode requires mirror_radius")
            _check_mirror_radius(self.mirror_radius)
        elif self.mirror_radius is not None:
            raise DomainError("mirror_radius only applies to the composite mode")

    @classmethod
    def outgoing_plane(cls, omega: float) -> "ModeSpec":
        return cls(ModeKind.OUTGOING_PLANE, omega=omega)

    @classmethod
    def ingoing_rindler(cls, omega: float) -> "ModeSpec":
        return cls(ModeKind.INGOING_RINDLER, omega=omega)

    @classmethod
    def outgoing_rindler(cls, omega: float) -> "ModeSpec":
        return cls(ModeKind.OUTGOING_RINDLER, omega=omega)

    @classmethod
    def mirror(cls, omega: float, mirror_radius: float) -> "ModeSpec":
        return cls(ModeKind.MIRROR_COMPOSITE, omega=omega,
                   mirror_radius=mirror_radius)

    @classmethod
    def psi1(cls, nu: float) -> "ModeSpec":
        return cls(ModeKind.SCHWARZSCHILD_OUTGOING, nu=nu)

    @classmethod
    def psi2(cls, nu: float) -> "ModeSpec":
        return cls(ModeKind.SCHWARZSCHILD_INGOING, nu=nu)


@dataclass(frozen=True)
class ModeValue:
    """Complex mode amplitude plus a support flag.

    In-support Rindler values have unit modulus (positive real base raised
    to a purely imaginary power); out-of-support values are exactly 0.
    """

    amplitude: complex
    in_support: bool


_OUT_OF_SUPPORT = ModeValue(0j, False)

# (Kruskal Omega) / (Schwarzschild nu) for the convertible pairs.
_FREQUENCY_RATIO = {
    ModeKind.OUTGOING_PLANE: 1.0,
    ModeKind.SCHWARZSCHILD_OUTGOING: 1.0,
    ModeKind.INGOING_RINDLER: 4.0,
    ModeKind.SCHWARZSCHILD_INGOING: 4.0,
}


def omega_from_nu(kind: ModeKind, nu: float) -> float:
    """Kruskal-convention frequency for a Schwarzschild-convention one.

    Omega = nu for the outgoing plane pair, Omega = 4 nu for the ingoing
    pair; the outgoing Rindler and mirror modes have no stated bridge.
    """
    if kind not in _FREQUENCY_RATIO:
        raise DomainError(f"no frequency bridge defined for {kind.value}")
    if nu <= 0.0:
        raise DomainError(f"nu must be positive, got {nu}")
    return _FREQUENCY_RATIO[kind] * nu


def nu_from_omega(kind: ModeKind, omega: float) -> float:
    """Inverse of :func:`omega_from_nu`."""
    if kind not in _FREQUENCY_RATIO:
        raise DomainError(f"no frequency bridge defined for {kind.value}")
    if omega <= 0.0:
        raise DomainError(f"omega must be positive, got {omega}")
    return omega / _FREQUENCY_RATIO[kind]


def _imaginary_power(base: float, exponent: float) -> complex:
    # base^(i*exponent) for base > 0, principal real log.
    return cmath.exp(1j * exponent * math.log(base))


def eval_mode(spec: ModeSpec, point: geometry.KruskalPoint) -> ModeValue:
    """Evaluate a Kruskal-coordinate mode at a Kruskal point.

    outgoing plane:   exp(-i Omega (T - X))
    ingoing Rindler:  (T + X)^(-i Omega) theta(T + X)
    outgoing Rindler: (X - T)^(+i Omega) theta(X - T)
    """
    if not (math.isfinite(point.T) and math.isfinite(point.X)):
        raise DomainError("Kruskal point must be finite")
    omega = spec.omega
    if spec.kind is ModeKind.OUTGOING_PLANE:
        return ModeValue(cmath.exp(-1j * omega * (point.T - point.X)), True)
    if spec.kind is ModeKind.INGOING_RINDLER:
        base = point.T + point.X
        if base <= 0.0:
            return _OUT_OF_SUPPORT
        return ModeValue(_imaginary_power(base, -omega), True)
    if spec.kind is ModeKind.OUTGOING_RINDLER:
        base = point.X - point.T
        if base <= 0.0:
            return _OUT_OF_SUPPORT
        return ModeValue(_imaginary_power(base, omega), True)
    if spec.kind is ModeKind.MIRROR_COMPOSITE:
        return mirror_mode(omega, spec.mirror_radius, point)
    raise DomainError(
        f"{spec.kind.value} is a Schwarzschild-coordinate mode; "
        "use eval_schwarzschild_mode"
    )


def mirror_mode(omega: float, mirror_radius: float,
                point: geometry.KruskalPoint) -> ModeValue:
    """Mode redirected by a mirror orbiting at r = mirror_radius (> 3).

    (X - T)^(i Omega) - exp(i Omega (r0 + ln(r0 - 1))) (T + X)^(-i Omega),
    which vanishes identically along the mirror worldline r = r0. Support
    requires both Rindler factors, i.e. an exterior point.
    """
    if omega <= 0.0:
        raise DomainError(f"omega must be positive, got {omega}")
    _check_mirror_radius(mirror_radius)
    out_base = point.X - point.T
    in_base = point.T + point.X
    if out_base <= 0.0 or in_base <= 0.0:
        return _OUT_OF_SUPPORT
    reflection_phase = cmath.exp(
        1j * omega * (mirror_radius + math.log(mirror_radius - 1.0))
    )
    amplitude = (
        _imaginary_power(out_base, omega)
        - reflection_phase * _imaginary_power(in_base, -omega)
    )
    return ModeValue(amplitude, True)


def eval_schwarzschild_mode(spec: ModeSpec, t: float, r: float) -> ModeValue:
    """Evaluate psi1/psi2 at Schwarzschild coordinates (t, r), r > 1.

    psi1: exp(i nu exp(-(t - r_*)/2))   (outgoing; equals the Kruskal
          plane wave exp(-i nu (T - X)) under the coordinate map)
    psi2: exp(-2 i nu (t + r_*))        (ingoing)
    """
    if spec.kind not in _SCHWARZSCHILD_KINDS:
        raise DomainError(
            f"{spec.kind.value} is a Kruskal-coordinate mode; use eval_mode"
        )
    rs = geometry.regge_wheeler(r)
    nu = spec.nu
    if spec.kind is ModeKind.SCHWARZSCHILD_OUTGOING:
        return ModeValue(cmath.exp(1j * nu * math.exp(-0.5 * (t - rs))), True)
    return ModeValue(cmath.exp(-2j * nu * (t + rs)), True)


def evaluate_mode(spec: ModeSpec, t: float, r: float) -> ModeValue:
    """Evaluate any mode at Schwarzschild coordinates (mapping to Kruskal
    as needed)."""
    if spec.kind in _SCHWARZSCHILD_KINDS:
        return eval_schwarzschild_mode(spec, t, r)
    return eval_mode(spec, geometry.to_kruskal(t, r))


class ModeSample(NamedTuple):
    """One mode evaluation along the infall worldline."""

    tau: float
    t: float
    r: float
    T: float
    X: float
    value: complex
    in_support: bool


def evaluate_along_infall(
    spec: ModeSpec,
    taus: Sequence[float],
    r_ref: float | None = None,
) -> list[ModeSample]:
    """Sample a mode along the radial infall at the given proper times.

    ``r_ref`` anchors Schwarzschild time at t(r_ref) = 0; None uses the
    horizon-synchronized origin (the convention under which the psi modes
    oscillate at nu near the horizon).
    """
    samples = []
    for tau in taus:
        if tau >= 0.0:
            raise DomainError(f"proper time {tau} is not pre-crossing (< 0)")
        r = geometry.radius_of_proper_time(tau)
        if r_ref is None:
            t = geometry.horizon_synced_time_of_radius(r)
        else:
            t = geometry.schwarzschild_time_of_radius(r, r_ref)
        point = geometry.to_kruskal(t, r)
        value = evaluate_mode(spec, t, r)
        samples.append(ModeSample(
            tau=float(tau), t=t, r=r, T=point.T, X=point.X,
            value=value.amplitude, in_support=value.in_support,
        ))
    return samples


def _unwrap_toward(phase: float, previous: float) -> float:
    # Nearest-branch continuation: shift by 2*pi*k to land within pi of
    # the previous phase.
    two_pi = 2.0 * math.pi
    return phase - two_pi * round((phase - previous) / two_pi)


def instantaneous_frequency(
    spec: ModeSpec,
    traj: geometry.InfallTrajectory,
    tau: float,
    h: float,
) -> float:
    """Proper-time frequency -d(arg psi)/dtau by central phase differencing.

    Evaluates the mode at tau - h, tau, tau + h along the infall worldline
    (horizon-synchronized time origin) and differences the unwrapped
    phases. For psi1/psi2 this approaches nu as the stencil nears the
    horizon. The stencil must stay inside the trajectory's proper-time
    domain and the mode must be in support at all three points.
    """
    if h <= 0.0:
        raise DomainError(f"step h must be positive, got {h}")
    lo, hi = traj.tau_domain
    if not (lo <= tau - h and tau + h <= hi):
        raise DomainError(
            f"stencil [{tau - h}, {tau + h}] leaves trajectory domain "
            f"[{lo}, {hi}]"
        )
    phases = []
    for tau_i in (tau - h, tau, tau + h):
        r = geometry.radius_of_proper_time(tau_i)
        t = geometry.horizon_synced_time_of_radius(r)
        value = evaluate_mode(spec, t, r)
        if not value.in_support:
            raise SupportError(
                f"mode {spec.kind.value} out of support at tau = {tau_i}"
            )
        phases.append(cmath.phase(value.amplitude))
    mid = _unwrap_toward(phases[1], phases[0])
    last = _unwrap_toward(phases[2], mid)
    return -(last - phases[0]) / (2.0 * h)


def overlap_integral(
    times: Sequence[float],
    values: Sequence[complex],
    delta: float,
) -> float:
    """|integral of exp(i delta t) phi(t) dt|^2 over a sampled window.

    Composite Simpson quadrature on the given (possibly non-uniform)
    samples. A degenerate window integrates to 0 (with a warning); NaN
    samples are rejected. By construction the conjugate-ordered overlap
    |I_ei|^2 equals this |I_gi|^2, so a single routine serves both.
    """
    t = np.asarray(times, dtype=float)
    phi = np.asarray(values, dtype=complex)
    if t.shape != phi.shape or t.ndim != 1:
        raise DomainError("times and values must be 1-d arrays of equal length")
    if t.size == 0 or (t.size > 0 and t[-1] == t[0]):
        warnings.warn("zero-length overlap window; integral is 0", stacklevel=2)
        return 0.0
    if np.any(np.isnan(t)) or np.any(np.isnan(phi)):
        raise DomainError("overlap samples contain NaN")
    if t.size < 3:
        raise DomainError("need at least 3 samples for Simpson quadrature")
    integrand = np.exp(1j * delta * t) * phi
    integral = simpson(integrand, x=t)
    return float(abs(integral) ** 2)


def overlap_integral_adaptive(
    phi: Callable[[np.ndarray], np.ndarray],
    t_start: float,
    t_end: float,
    delta: float,
    rel_tol: float = 1e-8,
    max_doublings: int = 16,
) -> float:
    """Adaptive version of :func:`overlap_integral` for a callable mode.

    Refines composite Simpson by doubling the panel count until the
    integral's relative change drops below ``rel_tol``.
    """
    if t_end == t_start:
        warnings.warn("zero-length overlap window; integral is 0", stacklevel=2)
        return 0.0
    n = 16
    previous = None
    for _ in range(max_doublings):
        t = np.linspace(t_start, t_end, n + 1)
        values = np.asarray(phi(t), dtype=complex)
        integral = simpson(np.exp(1j * delta * t) * values, x=t)
        if previous is not None:
            scale = max(abs(integral), abs(previous), 1e-300)
            if abs(integral - previous) / scale < rel_tol:
                return float(abs(integral) ** 2)
        previous = integral
        n *= 2
    warnings.warn(
        f"overlap quadrature did not settle to {rel_tol:g} after "
        f"{max_doublings} refinements", stacklevel=2,
    )
    return float(abs(previous) ** 2)
