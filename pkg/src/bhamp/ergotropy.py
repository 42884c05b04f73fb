"""Work capacity (ergotropy) of finite diagonal states and Gaussian signals.

The brute-force route sorts populations descending against energies
ascending to build the passive state; every closed form in the amplifier
modules is checked against it. Energies are in frequency units (hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

_PROB_TOL = 1e-9


@dataclass(frozen=True)
class DiagonalState:
    """Probabilities on a finite energy ladder, canonicalized by energy.

    Levels are sorted ascending in energy on construction; probabilities
    must be nonnegative and sum to 1 within tolerance.
    """

    energies: tuple[float, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if len(self.energies) != len(self.probabilities) or not self.energies:
            raise DomainError("energies and probabilities must match and be nonempty")
        if any(not math.isfinite(e) for e in self.energies):
            raise DomainError("energies must be finite")
        if any(p < -_PROB_TOL or not math.isfinite(p) for p in self.probabilities):
            raise DomainError("probabilities must be nonnegative")
        total = math.fsum(self.probabilities)
        if abs(total - 1.0) > _PROB_TOL:
            raise DomainError(f"probabilities sum to {total}, not 1")
        order = sorted(range(len(self.energies)), key=lambda i: self.energies[i])
        object.__setattr__(self, "energies",
                           tuple(self.energies[i] for i in order))
        object.__setattr__(self, "probabilities",
                           tuple(self.probabilities[i] for i in order))

    @property
    def mean_energy(self) -> float:
        return math.fsum(p * e for p, e in
                         zip(self.probabilities, self.energies))


def passive_energy(state: DiagonalState) -> float:
    """Mean energy after the passive rearrangement (populations sorted
    descending onto energies sorted ascending)."""
    descending = sorted(state.probabilities, reverse=True)
    return math.fsum(p * e for p, e in zip(descending, state.energies))


def ergotropy_bruteforce(state: DiagonalState) -> float:
    """Maximum unitarily extractable work: mean energy minus passive energy.

    Zero exactly when the state is already passive (e.g. any Gibbs state).
    """
    return max(0.0, state.mean_energy - passive_energy(state))


@dataclass(frozen=True)
class BathSpec:
    """A bosonic bath: inverse temperature beta and mode frequency omega.

    beta = inf encodes a zero-temperature bath.
    """

    beta: float
    omega: float

    def __post_init__(self):
        if self.omega <= 0.0:
            raise DomainError(f"bath frequency must be positive, got {self.omega}")
        if not self.beta > 0.0:  # also rejects NaN
            raise DomainError(f"inverse temperature must be positive, got {self.beta}")

    @property
    def n_bar(self) -> float:
        return thermal_occupancy(self)


def thermal_occupancy(bath: BathSpec) -> float:
    """Bose occupancy n = 1/(exp(beta*omega) - 1); 0 at beta = inf."""
    if math.isinf(bath.beta):
        return 0.0
    x = bath.beta * bath.omega
    if x <= 0.0:
        raise DomainError(f"beta*omega must be positive, got {x}")
    return 1.0 / math.expm1(x)


def fock_mixture_ergotropy(n_s: int, w_lo: float, w_hi: float,
                           nu: float) -> float:
    """Ergotropy of w_lo|n_s> + w_hi|n_s+1> on the oscillator ladder.

    Computed by brute force on the truncated ladder {0, ..., n_s+1} with
    level spacing nu. Equals nu*(n_s + w_hi - w_lo) when w_hi >= w_lo (the
    amplifier's gain formula) and nu*n_s otherwise, where that formula
    would go negative.
    """
    if n_s < 0 or n_s != int(n_s):
        raise DomainError(f"n_s must be a nonnegative integer, got {n_s}")
    if nu <= 0.0:
        raise DomainError(f"nu must be positive, got {nu}")
    if w_lo < -_PROB_TOL or w_hi < -_PROB_TOL or abs(w_lo + w_hi - 1.0) > _PROB_TOL:
        raise DomainError(f"weights ({w_lo}, {w_hi}) must be nonnegative and sum to 1")
    n_s = int(n_s)
    probs = [0.0] * (n_s + 2)
    probs[n_s] = w_lo
    probs[n_s + 1] = w_hi
    energies = [k * nu for k in range(n_s + 2)]
    return ergotropy_bruteforce(DiagonalState(tuple(energies), tuple(probs)))


@dataclass(frozen=True)
class SignalStateSummary:
    """Energy bookkeeping of a displaced thermal signal state.

    The displacement is the unitarily extractable part (the passive
    reference is the thermal core), so ergotropy = nu |alpha|^2 and the
    thermal share is nu sigma^2; the mean is their sum by construction.
    """

    alpha_abs: float
    sigma_sq: float
    nu: float

    @property
    def ergotropy(self) -> float:
        return self.nu * self.alpha_abs ** 2

    @property
    def thermal_energy(self) -> float:
        return self.nu * self.sigma_sq

    @property
    def mean_energy(self) -> float:
        return self.ergotropy + self.thermal_energy


def displaced_thermal_summary(alpha_abs: float, sigma_sq: float,
                              nu: float) -> SignalStateSummary:
    """Energy split of a displaced thermal state (|displacement|, P-variance)."""
    if sigma_sq < 0.0:
        raise DomainError(f"variance must be nonnegative, got {sigma_sq}")
    if alpha_abs < 0.0:
        raise DomainError(f"|alpha| must be nonnegative, got {alpha_abs}")
    if nu <= 0.0:
        raise DomainError(f"nu must be positive, got {nu}")
    return SignalStateSummary(alpha_abs=alpha_abs, sigma_sq=sigma_sq, nu=nu)


def fock_truncation_size(alpha_abs: float, sigma_sq: float) -> int:
    """Ladder size keeping the neglected displaced-thermal tail below ~1e-10."""
    sigma = math.sqrt(sigma_sq)
    return int(math.ceil(alpha_abs ** 2 + 10.0 * (alpha_abs + sigma) + 20.0))
