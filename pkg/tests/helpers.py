"""Independent oracles and random generators shared by the test modules.

Nothing here calls the code paths it is used to check: spectra come from
LAPACK, Choi matrices from the definition, symmetric functions from
polynomial expansion.
"""
import numpy as np

from qcg.basis import OperatorBasis
from qcg.sampling import vectors_from_coordinates


def lapack_spectrum(h):
    return np.sort(np.linalg.eigvalsh(np.asarray(h)))[::-1]


def poly_sums(values):
    """S_j from the coefficients of prod_i (t - x_i), expanded with numpy.poly."""
    c = np.real(np.poly(np.asarray(values, dtype=float)))
    return np.array([(-1) ** j * c[j] for j in range(len(c))])


def definitional_choi(channel, n):
    out = np.zeros((n * n, n * n), dtype=complex)
    for j in range(n):
        for k in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[j, k] = 1
            out += np.kron(channel(e), e)
    return out


def depolarizing_map(b: OperatorBasis, v):
    """rho -> sum_a v_a tr(M_a^dag rho) / tr(M_a^dag M_a) M_a, written out with loops."""
    def apply(rho):
        out = np.zeros((b.n, b.n), dtype=complex)
        for a in range(len(b)):
            m = b[a]
            out += v[a] * np.trace(m.conj().T @ rho) / np.trace(m.conj().T @ m) * m
        return out
    return apply


def random_v(b: OperatorBasis, rng, scale=1.0):
    coords = rng.uniform(-1, 1, size=len(b) - 1) * scale
    return vectors_from_coordinates(b, coords)[0]


def random_t(b: OperatorBasis, rng, scale=1.0):
    """Coefficients of a random traceless hermitian matrix, so t_a gamma = conj(t_b) holds."""
    z = rng.normal(size=(b.n, b.n)) + 1j * rng.normal(size=(b.n, b.n))
    h = z + z.conj().T
    h -= np.trace(h) / b.n * np.eye(b.n)
    t = np.array([np.trace(m.conj().T @ h) / np.trace(m.conj().T @ m) for m in b.elements])
    t[0] = 0
    return t * scale / np.abs(t).max()


def random_hermitian(rng, n, spectrum=None):
    """Haar-ish unitary conjugation of a chosen (or random normal) spectrum."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    if spectrum is None:
        spectrum = rng.normal(size=n)
    h = (q * np.asarray(spectrum)) @ q.conj().T
    return (h + h.conj().T) / 2


def haar_ket(rng, n):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


def multiset_close(a, b, tol):
    a, b = np.sort(np.real(a)), np.sort(np.real(b))
    return a.shape == b.shape and float(np.abs(a - b).max()) <= tol
