"""A unitary change of operator basis need not map states to states for N > 2.

rho = I/4 + (k sqrt3/4) X(x)X keeps its polarization coordinates when read in
the Gell-Mann basis with X(x)X/2 relabelled as Z_3/sqrt2, giving
rho~ = I/4 + (k sqrt6/4) Z_3, which is not positive for k > 1/3.
"""
import numpy as np

from qcg import PolarizationVector, change_of_basis_matrix, density_from_polarization, gellmann_basis, pauli_basis
from qcg.linalg import eigenvalues


def main():
    p2, g4 = pauli_basis(2), gellmann_basis(4)
    u = change_of_basis_matrix(p2, g4)
    print(f"|U^dag U - I| = {np.abs(u.conj().T @ u - np.eye(16)).max():.2e}")
    perm = np.arange(16)
    perm[[3, 5]] = perm[[5, 3]]
    print(f"{'k':>6} {'min eig rho':>12} {'min eig rho~':>13}")
    for k in np.linspace(0, 1 / np.sqrt(3), 7):
        a = np.zeros(16)
        a[0], a[5] = 1, k
        lo = eigenvalues(density_from_polarization(PolarizationVector(p2, a)))[-1]
        lo_t = eigenvalues(density_from_polarization(PolarizationVector(g4, a[perm])))[-1]
        print(f"{k:6.3f} {lo:12.5f} {lo_t:13.5f}{'   <- not a state' if lo_t < -1e-12 else ''}")


if __name__ == "__main__":
    main()
