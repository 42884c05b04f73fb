"""Steady-state heat-engine amplifier (weak atom-field coupling).

The atom equilibrates under the cold bath while weakly coupled to one
redirected Hawking-radiation mode; tracing it out leaves the signal mode
with a Fokker-Planck equation in the Glauber-Sudarshan P representation,

    dP/dt = -(G/2)(d/dalpha + d/dalpha*) P + D d^2 P/(dalpha dalpha*),

whose gain and diffusion coefficients are

    G = 2 g^2 |I|^2 (n_h - n_c) / (2 n_c + 1),
    D = 2 g^2 |I|^2 n_h (n_c + 1) / (2 n_c + 1).

An initial coherent state stays Gaussian: alpha(t) = alpha0 e^{G t/2} and
sigma^2(t) = (D/G)(e^{G t} - 1), the D/G ordering being fixed by the
first-moment oracle <n>(t) = |alpha|^2 + sigma^2 obeying
d<n>/dt = G <n> + D. G <= 0 (attenuation) is handled by the same closed
forms.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from scipy.integrate import solve_ivp

from .errors import DomainError, IntegrationError, NumericError

_REDERIVE_TOL = 1e-12


@dataclass(frozen=True)
class WeakCouplingParams:
    """Inputs of the weak-coupling amplifier.

    ``I_sq`` is the hot-mode overlap integral |I|^2 (from
    ``modes.overlap_integral`` or supplied directly). Amplification
    requires n_h > n_c; n_h <= n_c is permitted but means attenuation or
    zero gain (see ``amplifying``). The resonance Omega_h ~ omega0 + nu is
    recorded via the derived ``omega0``.
    """

    g_h: float
    I_sq: float
    n_h: float
    n_c: float
    nu: float
    Omega_h: float
    alpha0: complex = 0j
    n_atoms: int = 1

    def __post_init__(self):
        if self.g_h <= 0.0:
            raise DomainError(f"coupling g_h must be positive, got {self.g_h}")
        if self.I_sq < 0.0:
            raise DomainError(f"|I|^2 must be nonnegative, got {self.I_sq}")
        if self.n_c < 0.0 or self.n_h < 0.0:
            raise DomainError(
                f"occupancies must be nonnegative, got ({self.n_h}, {self.n_c})"
            )
        for name in ("nu", "Omega_h"):
            value = getattr(self, name)
            if value <= 0.0:
                raise DomainError(f"{name} must be positive, got {value}")
        if self.n_atoms < 1 or self.n_atoms != int(self.n_atoms):
            raise DomainError(f"n_atoms must be a positive integer, got {self.n_atoms}")

    @property
    def amplifying(self) -> bool:
        return self.n_h > self.n_c

    @property
    def omega0(self) -> float:
        """Atom frequency implied by the resonance Omega_h = omega0 + nu."""
        return self.Omega_h - self.nu

    @property
    def rate(self) -> float:
        """2 g_h^2 |I|^2, the common prefactor of gain and diffusion."""
        return 2.0 * self.g_h ** 2 * self.I_sq


def steady_state_populations(n_c: float) -> tuple[float, float]:
    """Steady atom populations (rho_gg, rho_ee) set by the cold bath:
    rho_ee/rho_gg = n_c/(n_c + 1)."""
    if n_c < 0.0:
        raise DomainError(f"cold occupancy must be nonnegative, got {n_c}")
    if math.isinf(n_c):
        return 0.5, 0.5
    return (n_c + 1.0) / (2.0 * n_c + 1.0), n_c / (2.0 * n_c + 1.0)


class GainDiffusion(NamedTuple):
    gain: float
    diffusion: float


def gain_diffusion(params: WeakCouplingParams) -> GainDiffusion:
    """Fokker-Planck coefficients (G, D) of the traced-out signal mode.

    Cross-checked internally against the steady-population route
    G = rate (n_h rho_gg - (n_h + 1) rho_ee), D = rate n_h rho_gg; a
    disagreement beyond rounding raises.
    """
    rate = params.rate
    n_h, n_c = params.n_h, params.n_c
    gain = rate * (n_h - n_c) / (2.0 * n_c + 1.0)
    diffusion = rate * n_h * (n_c + 1.0) / (2.0 * n_c + 1.0)

    rho_gg, rho_ee = steady_state_populations(n_c)
    gain_pop = rate * (n_h * rho_gg - (n_h + 1.0) * rho_ee)
    diffusion_pop = rate * n_h * rho_gg
    scale = max(abs(gain), abs(diffusion), rate, 1.0)
    if (abs(gain - gain_pop) > _REDERIVE_TOL * scale
            or abs(diffusion - diffusion_pop) > _REDERIVE_TOL * scale):
        raise NumericError(
            "gain/diffusion re-derivation mismatch: "
            f"({gain}, {diffusion}) vs ({gain_pop}, {diffusion_pop})"
        )
    return GainDiffusion(gain=gain, diffusion=diffusion)


@dataclass(frozen=True)
class GaussianPState:
    """Gaussian P-function: mean amplitude alpha(t) and variance sigma^2(t)."""

    alpha: complex
    sigma_sq: float


def _growth_integral(gain: float, t: float) -> float:
    # (e^{G t} - 1)/G with the G -> 0 limit t taken analytically.
    if gain == 0.0:
        return t
    return math.expm1(gain * t) / gain


def evolve_p_function(alpha0: complex, gain: float, diffusion: float,
                      t: float) -> GaussianPState:
    """Evolve an initial coherent state |alpha0> for time t >= 0.

    alpha(t) = alpha0 e^{G t/2}, sigma^2(t) = D (e^{G t} - 1)/G (diffusion
    D t when G = 0). Negative gain attenuates with the same forms.
    """
    if t < 0.0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if diffusion < 0.0:
        raise DomainError(f"diffusion must be nonnegative, got {diffusion}")
    return GaussianPState(
        alpha=alpha0 * cmath.exp(0.5 * gain * t),
        sigma_sq=diffusion * _growth_integral(gain, t),
    )


def photon_number_ode(n0: float, gain: float, diffusion: float, t: float,
                      tol: float = 1e-10) -> float:
    """<n>(t) by numerically integrating d<n>/dt = G <n> + D.

    This is the independent moment oracle for :func:`evolve_p_function`:
    with n0 = |alpha0|^2 the result must equal |alpha(t)|^2 + sigma^2(t).
    """
    if n0 < 0.0:
        raise DomainError(f"initial occupation must be nonnegative, got {n0}")
    if t < 0.0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if t == 0.0:
        return n0
    sol = solve_ivp(
        lambda _t, y: (gain * y[0] + diffusion,),
        (0.0, t),
        y0=(n0,),
        method="DOP853",
        rtol=tol,
        atol=tol * max(1.0, n0),
    )
    if not sol.success or not math.isfinite(sol.y[0, -1]):
        raise IntegrationError(
            f"photon-number integration failed at t = {sol.t[-1]}: {sol.message}",
            last_sample=(float(sol.t[-1]), float(sol.y[0, -1])),
        )
    return float(sol.y[0, -1])


def work_and_power(alpha0: complex, gain: float, nu: float, t: float,
                   n_atoms: int = 1) -> tuple[float, float]:
    """Extractable work W = N nu |alpha0|^2 e^{G t} and its rate G W.

    W is the signal ergotropy (the displaced part of the Gaussian state),
    consistent with ``ergotropy.displaced_thermal_summary`` applied to the
    evolved P function. N atoms boost both collectively.
    """
    if t < 0.0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if nu <= 0.0:
        raise DomainError(f"nu must be positive, got {nu}")
    if n_atoms < 1:
        raise DomainError(f"n_atoms must be a positive integer, got {n_atoms}")
    work = n_atoms * nu * abs(alpha0) ** 2 * math.exp(gain * t)
    return work, gain * work


def saturation_occupancy(n_h: float, n_c: float) -> float:
    """c = n_h (n_c + 1)/(n_h - n_c): the efficiency's saturation constant
    (also equals D/G)."""
    if not n_h > n_c:
        raise DomainError(f"amplification requires n_h > n_c, got ({n_h}, {n_c})")
    if n_c < 0.0:
        raise DomainError(f"cold occupancy must be nonnegative, got {n_c}")
    return n_h * (n_c + 1.0) / (n_h - n_c)


def efficiency_weak(nu: float, Omega_h: float, alpha0: complex, t: float,
                    gain: float, n_h: float, n_c: float) -> float:
    """Work-to-heat efficiency of the steady-state amplifier.

    eta = (nu/Omega_h) |alpha0|^2 / (|alpha(t)|^2 + c) with
    |alpha(t)|^2 = |alpha0|^2 e^{G t} and c = n_h(n_c+1)/(n_h-n_c).
    Approaches the SSD bound nu/(omega0+nu) as |alpha0|^2 -> inf at t = 0
    under the resonance Omega_h = omega0 + nu.
    """
    if nu <= 0.0 or Omega_h <= 0.0:
        raise DomainError(f"frequencies must be positive, got ({nu}, {Omega_h})")
    if t < 0.0:
        raise DomainError(f"time must be nonnegative, got {t}")
    c = saturation_occupancy(n_h, n_c)
    amp_sq = abs(alpha0) ** 2
    evolved_sq = amp_sq * math.exp(gain * t)
    return (nu / Omega_h) * amp_sq / (evolved_sq + c)


class EnergySplit(NamedTuple):
    """One row of the gained-energy division at a given gain."""

    gain: float
    ergotropy: float
    thermal: float
    mean: float


def energy_split_vs_gain(alpha0: complex, nu: float, c: float,
                         gains: Sequence[float], t: float) -> list[EnergySplit]:
    """Split of the signal energy into ergotropy and heat across a gain grid.

    Per gain G: ergotropy = nu |alpha0|^2 e^{G t}, thermal =
    nu c (e^{G t} - 1) with c = D/G held fixed, mean = their sum (exact
    bookkeeping).
    """
    if c <= 0.0:
        raise DomainError(f"diffusion/gain ratio c must be positive, got {c}")
    if nu <= 0.0:
        raise DomainError(f"nu must be positive, got {nu}")
    if t < 0.0:
        raise DomainError(f"time must be nonnegative, got {t}")
    amp_sq = abs(alpha0) ** 2
    rows = []
    for gain in gains:
        if gain < 0.0:
            raise DomainError(f"gain grid must be nonnegative, got {gain}")
        state = evolve_p_function(alpha0, gain, c * gain, t)
        erg = nu * amp_sq * math.exp(gain * t)
        thermal = nu * state.sigma_sq
        rows.append(EnergySplit(gain=gain, ergotropy=erg, thermal=thermal,
                                mean=erg + thermal))
    return rows
