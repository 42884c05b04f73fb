import math

import numpy as np
import pytest

from bhamp import ergotropy
from bhamp.errors import DomainError
from helpers import displaced_thermal_ergotropy


def test_diagonal_state_canonicalizes_and_validates():
    state = ergotropy.DiagonalState((2.0, 0.0, 1.0), (0.5, 0.25, 0.25))
    assert state.energies == (0.0, 1.0, 2.0)
    assert state.probabilities == (0.25, 0.25, 0.5)
    assert state.mean_energy == pytest.approx(1.25)
    with pytest.raises(DomainError):
        ergotropy.DiagonalState((0.0, 1.0), (0.7, 0.7))
    with pytest.raises(DomainError):
        ergotropy.DiagonalState((0.0, 1.0), (-0.1, 1.1))
    with pytest.raises(DomainError):
        ergotropy.DiagonalState((), ())


def test_ergotropy_examples():
    inverted = ergotropy.DiagonalState((0.0, 2.5), (0.0, 1.0))
    assert ergotropy.ergotropy_bruteforce(inverted) == pytest.approx(2.5)

    sorted_oracle = ergotropy.DiagonalState((0.0, 1.0, 2.0), (0.0, 0.2, 0.8))
    assert ergotropy.ergotropy_bruteforce(sorted_oracle) == pytest.approx(1.6)


def test_gibbs_states_are_passive():
    for beta in (0.2, 1.0, 5.0):
        energies = tuple(float(k) for k in range(6))
        weights = [math.exp(-beta * e) for e in energies]
        z = sum(weights)
        state = ergotropy.DiagonalState(
            energies, tuple(w / z for w in weights))
        assert ergotropy.ergotropy_bruteforce(state) == 0.0


def test_ergotropy_invariances():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = rng.integers(2, 8)
        energies = np.sort(rng.uniform(0.0, 5.0, n))
        probs = rng.dirichlet(np.ones(n))
        state = ergotropy.DiagonalState(tuple(energies), tuple(probs))
        value = ergotropy.ergotropy_bruteforce(state)
        assert value >= 0.0

        # permuting the level order changes nothing (canonicalization)
        perm = rng.permutation(n)
        shuffled = ergotropy.DiagonalState(
            tuple(energies[perm]), tuple(probs[perm]))
        assert ergotropy.ergotropy_bruteforce(shuffled) == pytest.approx(
            value, abs=1e-14)

        # energy scaling scales the ergotropy
        scaled = ergotropy.DiagonalState(
            tuple(3.0 * energies), tuple(probs))
        assert ergotropy.ergotropy_bruteforce(scaled) == pytest.approx(
            3.0 * value, rel=1e-12, abs=1e-13)

        # the passive rearrangement is a fixed point
        descending = tuple(sorted(probs, reverse=True))
        passive = ergotropy.DiagonalState(tuple(energies), descending)
        assert ergotropy.ergotropy_bruteforce(passive) == 0.0


def test_thermal_occupancy():
    assert ergotropy.thermal_occupancy(ergotropy.BathSpec(math.inf, 2.0)) == 0.0
    assert ergotropy.thermal_occupancy(
        ergotropy.BathSpec(math.log(2.0), 1.0)) == pytest.approx(1.0, rel=1e-14)
    assert ergotropy.thermal_occupancy(
        ergotropy.BathSpec(math.log(1.5), 1.0)) == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(DomainError):
        ergotropy.BathSpec(-1.0, 1.0)
    with pytest.raises(DomainError):
        ergotropy.BathSpec(1.0, 0.0)
    assert ergotropy.BathSpec(math.log(2.0), 1.0).n_bar == pytest.approx(1.0)


def test_fock_mixture_ergotropy_regimes():
    nu = 1.3
    # gain formula regime w_hi >= w_lo
    assert ergotropy.fock_mixture_ergotropy(2, 0.0, 1.0, nu) == pytest.approx(
        3.0 * nu, rel=1e-14)
    assert ergotropy.fock_mixture_ergotropy(2, 0.3, 0.7, nu) == pytest.approx(
        nu * (2.0 + 0.4), rel=1e-12)
    # outside it the brute force says nu * n_s, not the (negative) formula
    assert ergotropy.fock_mixture_ergotropy(2, 0.5, 0.5, nu) == pytest.approx(
        2.0 * nu, rel=1e-14)
    assert ergotropy.fock_mixture_ergotropy(2, 1.0, 0.0, nu) == pytest.approx(
        2.0 * nu, rel=1e-14)
    assert ergotropy.fock_mixture_ergotropy(0, 1.0, 0.0, nu) == 0.0
    with pytest.raises(DomainError):
        ergotropy.fock_mixture_ergotropy(-1, 0.5, 0.5, nu)
    with pytest.raises(DomainError):
        ergotropy.fock_mixture_ergotropy(1, 0.6, 0.6, nu)


def test_fock_mixture_matches_gain_formula_in_validity_domain():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n_s = int(rng.integers(0, 5))
        w_hi = rng.uniform(0.5, 1.0)
        nu = rng.uniform(0.1, 3.0)
        erg = ergotropy.fock_mixture_ergotropy(n_s, 1.0 - w_hi, w_hi, nu)
        assert erg == pytest.approx(nu * (n_s + 2.0 * w_hi - 1.0), rel=1e-10,
                                    abs=1e-12)


def test_displaced_thermal_summary():
    summary = ergotropy.displaced_thermal_summary(1.0, 0.25, 1.0)
    assert summary.ergotropy == pytest.approx(1.0)
    assert summary.thermal_energy == pytest.approx(0.25)
    assert summary.mean_energy == summary.ergotropy + summary.thermal_energy

    coherent = ergotropy.displaced_thermal_summary(2.0, 0.0, 0.7)
    assert coherent.thermal_energy == 0.0
    assert coherent.ergotropy == pytest.approx(0.7 * 4.0)

    thermal = ergotropy.displaced_thermal_summary(0.0, 1.5, 1.0)
    assert thermal.ergotropy == 0.0

    with pytest.raises(DomainError):
        ergotropy.displaced_thermal_summary(1.0, -0.1, 1.0)


def test_displaced_thermal_closed_form_vs_diagonalization_oracle():
    # Gaussian P-variance sigma^2 equals the thermal core occupancy n_bar
    oracle = displaced_thermal_ergotropy(1.0, 0.25, 1.0, 40)
    assert abs(oracle - 1.0) < 1e-8
    oracle = displaced_thermal_ergotropy(0.8 + 0.3j, 0.6, 1.7,
                                         ergotropy.fock_truncation_size(0.9, 0.6))
    summary = ergotropy.displaced_thermal_summary(abs(0.8 + 0.3j), 0.6, 1.7)
    assert abs(oracle - summary.ergotropy) < 1e-8


def test_bookkeeping_identity_random():
    rng = np.random.default_rng(5)
    for _ in range(50):
        summary = ergotropy.displaced_thermal_summary(
            rng.uniform(0.0, 3.0), rng.uniform(0.0, 2.0), rng.uniform(0.1, 2.0))
        assert summary.mean_energy == summary.ergotropy + summary.thermal_energy
