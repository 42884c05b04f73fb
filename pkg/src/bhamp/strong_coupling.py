"""Single-hot-mode Rabi amplifier (strong atom-field coupling).

One atom crossing a high-Q cavity couples to a single redirected
Hawking-radiation mode phi_h. Within the two-state branch
{|g, n_s, n_h>, |e, n_s+1, n_h-1>} the evolution is an exact Rabi
rotation with amplitudes

    u = e^{-i delta t/2} (cos(W t/2) + i delta sin(W t/2)/W)
    v = -2 i g_h phi_h e^{-i delta t/2} sin(W t/2)/W
    W = sqrt(delta^2 + 4 g_h^2 |phi_h|^2),   delta = omega0 + nu - Omega_h.

For a complex mode value phi_h only |phi_h| enters W (the generator must
stay Hermitian); the phase of phi_h rides along on v. The coupling is
held constant per branch, with no photon-number enhancement factors. The
hot bath's inverse temperature beta_h only weights the branches (see
:func:`hot_branch_weights`); the printed final states are branch-
independent, so it never touches the returned populations.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass

from . import ergotropy
from .errors import DomainError

_RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class StrongCouplingParams:
    """Inputs of the strong-coupling amplifier; all frequencies positive."""

    g_h: float
    phi_h: complex
    omega0: float
    nu: float
    Omega_h: float
    n_s: int = 1
    beta_h: float = math.inf
    n_atoms: int = 1

    def __post_init__(self):
        if self.g_h <= 0.0:
            raise DomainError(f"coupling g_h must be positive, got {self.g_h}")
        for name in ("omega0", "nu", "Omega_h"):
            value = getattr(self, name)
            if value <= 0.0:
                raise DomainError(f"{name} must be positive, got {value}")
        if self.n_s < 0 or self.n_s != int(self.n_s):
            raise DomainError(f"n_s must be a nonnegative integer, got {self.n_s}")
        if self.n_atoms < 1 or self.n_atoms != int(self.n_atoms):
            raise DomainError(f"n_atoms must be a positive integer, got {self.n_atoms}")
        if not self.beta_h > 0.0:
            raise DomainError(f"beta_h must be positive, got {self.beta_h}")

    @property
    def detuning(self) -> float:
        return self.omega0 + self.nu - self.Omega_h

    @property
    def rabi_rate(self) -> float:
        """g_h |phi_h|, the on-resonance half Rabi frequency."""
        return self.g_h * abs(self.phi_h)

    @property
    def on_resonance(self) -> bool:
        return abs(self.detuning) <= _RESONANCE_TOL * max(
            1.0, self.omega0, self.nu, self.Omega_h
        )


@dataclass(frozen=True)
class AmplitudePair:
    """Branch amplitudes (u, v); unitary, so |u|^2 + |v|^2 = 1."""

    u: complex
    v: complex

    @property
    def norm_sq(self) -> float:
        return abs(self.u) ** 2 + abs(self.v) ** 2


def rabi_amplitudes(params: StrongCouplingParams, t: float) -> AmplitudePair:
    """Exact branch amplitudes after evolving for time t >= 0."""
    if t < 0.0:
        raise DomainError(f"evolution time must be nonnegative, got {t}")
    delta = params.detuning
    kappa = params.rabi_rate
    w = math.sqrt(delta * delta + 4.0 * kappa * kappa)
    if w == 0.0:
        return AmplitudePair(1.0 + 0j, 0j)
    half = 0.5 * w * t
    phase = cmath.exp(-0.5j * delta * t)
    sinc = math.sin(half) / w
    u = phase * (math.cos(half) + 1j * delta * sinc)
    v = -2j * params.g_h * params.phi_h * phase * sinc
    return AmplitudePair(u, v)


def final_states(
    params: StrongCouplingParams, t: float
) -> tuple[ergotropy.DiagonalState, ergotropy.DiagonalState]:
    """(atom, signal) populations after time t.

    Atom: {|u|^2 on g, |v|^2 on e} with splitting omega0. Signal: the pair
    {n_s, n_s+1} of the nu-ladder with the same weights. Independent of
    beta_h because u, v are branch-independent.
    """
    amp = rabi_amplitudes(params, t)
    p_lo = abs(amp.u) ** 2
    p_hi = abs(amp.v) ** 2
    atom = ergotropy.DiagonalState((0.0, params.omega0), (p_lo, p_hi))
    signal = ergotropy.DiagonalState(
        (params.n_s * params.nu, (params.n_s + 1) * params.nu),
        (p_lo, p_hi),
    )
    return atom, signal


def ergotropy_gain(params: StrongCouplingParams, t: float) -> float:
    """Signal ergotropy gained over the pulse, via the brute-force oracle.

    Equals nu (|v|^2 - |u|^2) when |v| >= |u|; otherwise the passive
    rearrangement already absorbs the u-branch and the gain is 0.
    """
    amp = rabi_amplitudes(params, t)
    initial = ergotropy.fock_mixture_ergotropy(params.n_s, 1.0, 0.0, params.nu)
    final = ergotropy.fock_mixture_ergotropy(
        params.n_s, abs(amp.u) ** 2, abs(amp.v) ** 2, params.nu
    )
    return final - initial


def quanta_audit(params: StrongCouplingParams, t: float) -> dict[str, float]:
    """Energy flows per atom after time t: one quantum shifts per branch.

    signal_gain = nu |v|^2, atom_gain = omega0 |v|^2 and the hot mode
    loses Omega_h |v|^2, so extraction efficiency signal/hot equals
    nu/Omega_h, which is nu/(omega0 + nu) on resonance.
    """
    p_hi = abs(rabi_amplitudes(params, t).v) ** 2
    return {
        "signal_gain": params.nu * p_hi,
        "atom_gain": params.omega0 * p_hi,
        "hot_mode_loss": params.Omega_h * p_hi,
    }


def _require_resonance(params: StrongCouplingParams, op: str) -> None:
    if not params.on_resonance:
        raise DomainError(
            f"{op} requires exact resonance delta = omega0 + nu - Omega_h = 0, "
            f"got delta = {params.detuning}"
        )


def optimal_pulse_times(params: StrongCouplingParams, m_max: int) -> list[float]:
    """Pi-pulse times t_m = (2m+1) pi / (2 g_h |phi_h|), m = 0..m_max.

    Only defined on resonance, where |v(t_m)| = 1 exactly.
    """
    _require_resonance(params, "optimal_pulse_times")
    if m_max < 0:
        raise DomainError(f"m_max must be nonnegative, got {m_max}")
    kappa = params.rabi_rate
    if kappa == 0.0:
        raise DomainError("g_h |phi_h| = 0: no Rabi rotation, no pulse times")
    return [(2 * m + 1) * math.pi / (2.0 * kappa) for m in range(m_max + 1)]


def efficiency_strong(omega0: float, nu: float) -> float:
    """Work-extraction efficiency nu / (omega0 + nu) of the pulsed amplifier."""
    if omega0 <= 0.0 or nu <= 0.0:
        raise DomainError(f"frequencies must be positive, got ({omega0}, {nu})")
    return nu / (omega0 + nu)


def max_power(params: StrongCouplingParams, m: int = 0) -> float:
    """Average extraction power at the m-th pi pulse, with the N-atom boost.

    N * 2 g_h |phi_h| nu / ((2m+1) pi); equals ergotropy_gain(t_m)/t_m for
    a single atom on resonance.
    """
    _require_resonance(params, "max_power")
    if m < 0:
        raise DomainError(f"pulse index m must be nonnegative, got {m}")
    return params.n_atoms * 2.0 * params.rabi_rate * params.nu / ((2 * m + 1) * math.pi)


@dataclass(frozen=True)
class SsdCarnotResult:
    """Efficiency bounds: SSD, Carnot, and the approach condition.

    ``condition_holds`` is None when T_c = 0, where the temperature-ratio
    criterion is undefined.
    """

    eta_ssd: float
    eta_carnot: float
    condition_holds: bool | None


def ssd_carnot_check(
    T_h: float, T_c: float, Omega_h: float, omega_c: float,
    nu: float, omega0: float,
) -> SsdCarnotResult:
    """Compare the SSD bound nu/(omega0+nu) with Carnot 1 - T_c/T_h.

    The SSD efficiency approaches Carnot when T_h/T_c >= Omega_h/omega_c;
    at T_c = 0 Carnot is 1 and the ratio condition is flagged undefined.
    """
    for name, value in (("Omega_h", Omega_h), ("omega_c", omega_c)):
        if value <= 0.0:
            raise DomainError(f"{name} must be positive, got {value}")
    if T_c < 0.0:
        raise DomainError(f"T_c must be nonnegative, got {T_c}")
    if not T_h > T_c:
        raise DomainError(f"need T_h > T_c, got ({T_h}, {T_c})")
    eta_ssd = efficiency_strong(omega0, nu)
    if T_c == 0.0:
        return SsdCarnotResult(eta_ssd=eta_ssd, eta_carnot=1.0,
                               condition_holds=None)
    return SsdCarnotResult(
        eta_ssd=eta_ssd,
        eta_carnot=1.0 - T_c / T_h,
        condition_holds=(T_h / T_c) >= (Omega_h / omega_c),
    )


def hot_branch_weights(params: StrongCouplingParams, n_max: int) -> list[float]:
    """Thermal weights p_n = e^{-beta_h Omega_h n} (1 - e^{-beta_h Omega_h}).

    Diagnostic only: u, v are branch-independent, so these weights never
    change the final states. beta_h = inf gives the vacuum weight [1, 0, ...].
    """
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    if math.isinf(params.beta_h):
        return [1.0] + [0.0] * n_max
    q = math.exp(-params.beta_h * params.Omega_h)
    return [(1.0 - q) * q ** n for n in range(n_max + 1)]
