"""Dense complex linear algebra on square numpy arrays.

Matrices are plain ``complex128`` ndarrays. The eigensolver is a cyclic
complex Jacobi iteration so that the complete-positivity oracle does not
share code with LAPACK-backed routines used elsewhere for cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import TOL


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf")
    return m


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def conj_transpose(a) -> np.ndarray:
    return as_matrix(a).conj().T


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def _same_dim(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def commutator(a, b) -> np.ndarray:
    a, b = _same_dim(a, b)
    return a @ b - b @ a


def commutator_norm(a, b) -> float:
    """Largest entry magnitude of ``ab - ba``."""
    return max_abs(commutator(a, b))


def phase_commute(a, b, tol: float = 1e-10) -> Optional[float]:
    """Return theta in (-pi, pi] with ``ab = exp(i theta) ba``, or None.

    The phase is read off the largest-magnitude entry of ``ab`` and then
    verified on every entry relative to ``max|ab|``.
    """
    a, b = _same_dim(a, b)
    if max_abs(a) == 0.0 or max_abs(b) == 0.0:
        raise ValueError("phase_commute needs non-zero matrices")
    ab, ba = a @ b, b @ a
    scale = max(max_abs(ab), max_abs(ba))
    if scale == 0.0:
        return 0.0
    idx = np.unravel_index(np.argmax(np.abs(ab)), ab.shape)
    if abs(ba[idx]) <= tol * scale or abs(ab[idx]) <= tol * scale:
        return None
    theta = float(np.angle(ab[idx] / ba[idx]))
    if theta <= -math.pi:
        theta += 2 * math.pi
    if max_abs(ab - np.exp(1j * theta) * ba) > tol * scale:
        return None
    return theta


def hermiticity_violation(h) -> tuple[float, tuple[int, int]]:
    h = as_matrix(h)
    diff = np.abs(h - h.conj().T)
    idx = np.unravel_index(np.argmax(diff), diff.shape)
    return float(diff[idx]), (int(idx[0]), int(idx[1]))


def is_hermitian(h, tol: float = TOL.eq) -> bool:
    return hermiticity_violation(h)[0] <= tol


def require_hermitian(h, tol: float = TOL.eq) -> np.ndarray:
    h = as_matrix(h)
    worst, (i, j) = hermiticity_violation(h)
    if worst > tol:
        raise NotHermitianError(
            f"matrix is not hermitian: |h[{i},{j}] - conj(h[{j},{i}])| = {worst:.3e} > {tol:g}"
        )
    return h


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray  # real, descending
    vectors: Optional[np.ndarray] = None  # eigencolumns

    def __len__(self):
        return len(self.values)

    def reconstruct(self) -> np.ndarray:
        if self.vectors is None:
            raise ValueError("spectrum was computed without eigenvectors")
        v = self.vectors
        return (v * self.values) @ v.conj().T


def _jacobi(h: np.ndarray, tol: float, max_sweeps: int, want_vectors: bool):
    a = h.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128) if want_vectors else None
    # absolute threshold, floored at roundoff level so large inputs still terminate
    thresh = max(tol, 4 * np.finfo(float).eps * max(1.0, max_abs(h)) * n)
    off_mask = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps + 1):
        if n == 1 or np.abs(a[off_mask]).max() <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 0.1 * thresh:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                phi = (aqq - app) / (2.0 * r)
                t = (1.0 if phi >= 0 else -1.0) / (abs(phi) + math.sqrt(phi * phi + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                pc = phase.conjugate()
                rot = np.array([[c, s], [-s * pc, c * pc]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ rot
                a[cols, :] = rot.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if v is not None:
                    v[:, cols] = v[:, cols] @ rot
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    return np.real(np.diag(a)).copy(), v


def _order(values: np.ndarray, vectors: Optional[np.ndarray], tol: float) -> np.ndarray:
    order = list(np.argsort(-values, kind="stable"))
    if vectors is None:
        return np.array(order, dtype=int)

    def first_nonzero(k):
        col = np.abs(vectors[:, k])
        nz = np.flatnonzero(col > 1e-8)
        return int(nz[0]) if nz.size else 0

    out, i = [], 0
    while i < len(order):
        j = i + 1
        while j < len(order) and values[order[i]] - values[order[j]] <= tol:
            j += 1
        out.extend(sorted(order[i:j], key=first_nonzero))
        i = j
    return np.array(out, dtype=int)


def hermitian_eigensystem(h, vectors: bool = True, tol: float = TOL.jacobi,
                          max_sweeps: int = TOL.max_sweeps) -> Spectrum:
    """Eigen-decompose a hermitian matrix by cyclic complex Jacobi rotations.

    Eigenvalues come back descending; among values equal within 1e-9 the
    eigenvector whose first non-zero component appears earliest goes first.
    Eigenvectors are phase-fixed so that component is real and positive.
    """
    h = require_hermitian(h)
    vals, vecs = _jacobi(h, tol, max_sweeps, vectors)
    if vecs is not None:
        for k in range(vecs.shape[1]):
            col = vecs[:, k]
            nz = np.flatnonzero(np.abs(col) > 1e-8)
            if nz.size:
                col *= abs(col[nz[0]]) / col[nz[0]]
    order = _order(vals, vecs, TOL.eig)
    vals = vals[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return Spectrum(vals, vecs)


def eigenvalues(h) -> np.ndarray:
    return hermitian_eigensystem(h, vectors=False).values


def elementary_symmetric(values: Sequence[float]) -> np.ndarray:
    """Coefficients e_0..e_n of prod (1 + x_i z), by polynomial multiplication."""
    e = np.zeros(len(values) + 1)
    e[0] = 1.0
    for k, x in enumerate(values, start=1):
        e[1:k + 1] = e[1:k + 1] + x * e[0:k]
    return e


def charpoly_coeffs(k, fl_max_dim: int = 8) -> np.ndarray:
    """Eigenvalue sums S_0..S_n of a hermitian matrix.

    ``det(tI - K) = sum_j (-1)^j S_j t^(n-j)``. Up to ``fl_max_dim`` the
    Faddeev-LeVerrier trace recursion is used; beyond it the recursion loses
    too many digits and the sums are formed from Jacobi eigenvalues instead.
    """
    k = require_hermitian(k)
    n = k.shape[0]
    if n > fl_max_dim:
        return elementary_symmetric(eigenvalues(k))
    s = np.zeros(n + 1)
    s[0] = 1.0
    b = np.eye(n, dtype=np.complex128)
    ident = np.eye(n, dtype=np.complex128)
    for j in range(1, n + 1):
        kb = k @ b
        c = -np.trace(kb).real / j
        s[j] = (-1) ** j * c
        b = kb + c * ident
    return s


def _check_indices(idx, n):
    idx = np.asarray(idx, dtype=int)
    if idx.ndim != 1 or np.any(idx < 0) or np.any(idx >= n):
        raise IndexError(f"indices out of range for dimension {n}: {list(idx)}")
    return idx


def permute_conjugate(m, perm) -> np.ndarray:
    """``P^T m P`` for the permutation matrix of ``perm``: result[i, j] = m[perm[i], perm[j]]."""
    m = as_matrix(m)
    n = m.shape[0]
    perm = _check_indices(perm, n)
    if len(perm) != n or len(set(perm.tolist())) != n:
        raise ValueError(f"not a permutation of 0..{n - 1}")
    return m[np.ix_(perm, perm)]


def extract_block(m, rows) -> np.ndarray:
    m = as_matrix(m)
    rows = _check_indices(rows, m.shape[0])
    if len(set(rows.tolist())) != len(rows):
        raise ValueError("block indices must be distinct")
    return m[np.ix_(rows, rows)]
