"""Independent oracles shared by the test modules.

These deliberately avoid the code paths they check: the Rabi oracle is a
dense matrix exponential, the displaced-thermal oracle diagonalizes a
truncated Fock-space density matrix, and the CSV reader is plain stdlib.
"""

import csv

import numpy as np
from scipy.linalg import expm


def rabi_expm_oracle(g_h, phi_h, delta, t):
    """(u, v) from the 2x2 propagator exp(-i H t), H = [[0, k*], [k, delta]]."""
    kappa = g_h * phi_h
    hamiltonian = np.array([[0.0, np.conj(kappa)], [kappa, delta]],
                           dtype=complex)
    propagator = expm(-1j * hamiltonian * t)
    return propagator[0, 0], propagator[1, 0]


def displaced_thermal_ergotropy(alpha, n_bar, nu, n_max):
    """Ergotropy of D(alpha) rho_thermal(n_bar) D+(alpha), truncated Fock space.

    Mean energy from the Fock-basis diagonal; passive energy from the
    eigenvalues sorted descending onto the ladder energies ascending.
    """
    dim = n_max + 1
    lower = np.diag(np.sqrt(np.arange(1, dim)), 1)
    displace = expm(alpha * lower.conj().T - np.conj(alpha) * lower)
    thermal = np.array([(n_bar / (1.0 + n_bar)) ** n / (1.0 + n_bar)
                        for n in range(dim)])
    rho = displace @ np.diag(thermal) @ displace.conj().T
    energies = nu * np.arange(dim)
    mean = float(np.real(np.sum(np.diag(rho).real * energies)))
    populations = np.sort(np.linalg.eigvalsh(rho))[::-1]
    passive = float(np.sum(populations * energies))
    return mean - passive


def read_csv(path):
    """(header, rows-as-floats) from one of the CLI's CSV files."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = [[float(cell) for cell in row] for row in reader]
    return header, rows
