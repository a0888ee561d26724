"""Numerical tolerances shared across the package."""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    eq: float = 1e-10  # structural equality of matrices
    eig: float = 1e-9  # spectral assertions
    jacobi: float = 1e-12  # off-diagonal stopping threshold
    sign: float = 1e-9  # eigenvalue-sum sign test
    max_sweeps: int = 100


TOL = Tolerances()
