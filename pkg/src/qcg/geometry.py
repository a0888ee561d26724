"""Complete-positivity region of depolarizing channels.

Closed-form Choi spectra for the Pauli, Heisenberg-Weyl and general
phase-commuting unitary bases, the Gell-Mann 2x2-block / K-block split,
the commutator test for a simplex region, and the extremal channels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .basis import OperatorBasis, gellmann_index, pauli_digits
from .channel import (
    ChoiMatrix,
    CompressionVector,
    TranslationVector,
    choi_of_conjugation,
    choi_of_depolarizing,
    choi_of_translation_channel,
)
from .config import TOL
from .linalg import charpoly_coeffs, commutator_norm, eigenvalues, extract_block, max_abs, phase_commute


class NotSimplexError(ValueError):
    pass


# --- Pauli basis -------------------------------------------------------------

def f_exponent(alpha: int, n: int, m: int) -> int:
    """Sign exponent of sigma^alpha (x) conj(sigma^alpha) on the Bell state Psi_nm."""
    return ((alpha // 2) * n + ((alpha + 1) // 2) * m) % 2


def g_exponent(alpha: int, beta: int) -> int:
    """sigma^beta sigma^alpha sigma^beta = (-1)^g sigma^alpha."""
    return (alpha * beta * (alpha - beta) // 2) % 2


def bell_label(index: int, d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Label index -> (n bits, m bits); index = n_int * 2^d + m_int, bit j-1 holds n_j."""
    n_int, m_int = divmod(index, 2 ** d)
    return tuple((n_int >> j) & 1 for j in range(d)), tuple((m_int >> j) & 1 for j in range(d))


@lru_cache(maxsize=None)
def pauli_sign_matrix(d: int) -> np.ndarray:
    """S[r, a] = (-1)^{sum_j f(a_j, n_j, m_j)} with r the Bell label index."""
    size = 4 ** d
    out = np.empty((size, size))
    for r in range(size):
        ns, ms = bell_label(r, d)
        for a in range(size):
            e = sum(f_exponent(aj, nj, mj) for aj, nj, mj in zip(pauli_digits(a, d), ns, ms))
            out[r, a] = -1.0 if e % 2 else 1.0
    out.setflags(write=False)
    return out


def _real_v(v: CompressionVector) -> np.ndarray:
    if not v.is_real:
        raise ValueError("compression vector must be real in a hermitian basis")
    return v.v.real


def _require_kind(v: CompressionVector, kind: str):
    if v.basis.kind != kind:
        raise ValueError(f"expected a {kind} basis, got {v.basis.label}")


def pauli_lambda_vector(v: CompressionVector) -> np.ndarray:
    _require_kind(v, "pauli")
    return pauli_sign_matrix(v.basis.d) @ _real_v(v) / v.basis.n


def pauli_lambdas(v: CompressionVector) -> dict:
    """{(n_bits, m_bits): eigenvalue} of J(Phi_v) in the Pauli basis."""
    lam = pauli_lambda_vector(v)
    return {bell_label(r, v.basis.d): float(x) for r, x in enumerate(lam)}


# --- Heisenberg-Weyl basis -----------------------------------------------------

@lru_cache(maxsize=None)
def hw_phase_matrix(n: int) -> np.ndarray:
    """F[(l,m), (j,k)] = omega^(m j - k l)."""
    idx = np.arange(n)
    l, m, j, k = np.meshgrid(idx, idx, idx, idx, indexing="ij")
    f = np.exp(2j * np.pi * ((m * j - k * l) % n) / n).reshape(n * n, n * n)
    f.setflags(write=False)
    return f


def hw_lambda_vector(v: CompressionVector) -> np.ndarray:
    _require_kind(v, "heisenberg-weyl")
    n = v.basis.n
    lam = hw_phase_matrix(n) @ v.v / n
    if max_abs(lam.imag) > TOL.eig:
        raise ValueError("complex eigenvalues: v breaks v_jk = conj(v_-j,-k)")
    return lam.real


def hw_lambdas(v: CompressionVector) -> dict:
    n = v.basis.n
    return {divmod(r, n): float(x) for r, x in enumerate(hw_lambda_vector(v))}


# --- simplex criterion -----------------------------------------------------------

@dataclass
class SimplexReport:
    is_simplex: bool
    failing_pair: Optional[tuple[int, int]] = None
    failing_pairs: list = field(default_factory=list)
    max_commutator: float = 0.0
    phase_table: Optional[np.ndarray] = None

    def to_json(self, b: Optional[OperatorBasis] = None) -> dict:
        out = {
            "isSimplex": self.is_simplex,
            "failingPair": list(self.failing_pair) if self.failing_pair else None,
            "maxCommutator": self.max_commutator,
            "failingPairCount": len(self.failing_pairs),
        }
        if b is not None and self.failing_pair:
            out["failingPairNames"] = [b.element_name(a) for a in self.failing_pair]
        if self.phase_table is not None:
            out["phaseTable"] = self.phase_table.tolist()
        return out


def _is_diagonal(m: np.ndarray) -> bool:
    return max_abs(m - np.diag(np.diag(m))) <= TOL.eq


def simplex_condition(b: OperatorBasis, tol: float = TOL.eq) -> SimplexReport:
    """The CP region is a simplex iff all M_a (x) conj(M_a) commute pairwise.

    All failing pairs are collected in lexicographic order; the reported
    pair is the first one between two non-diagonal elements (diagonal
    elements commute among themselves, so such a pair isolates the
    off-diagonal obstruction), falling back to the first pair overall.
    """
    sq = b.tensor_squares
    size = len(sq)
    failing, worst = [], 0.0
    for a in range(size - 1):
        rest = sq[a + 1:]
        comm = np.abs(sq[a] @ rest - rest @ sq[a]).reshape(len(rest), -1).max(axis=1)
        worst = max(worst, float(comm.max()))
        failing.extend((a, a + 1 + int(i)) for i in np.flatnonzero(comm > tol))
    if failing:
        offdiag = [p for p in failing if not _is_diagonal(b[p[0]]) and not _is_diagonal(b[p[1]])]
        pick = offdiag[0] if offdiag else failing[0]
        return SimplexReport(False, pick, failing, worst)
    table = phase_table(b) if b.is_unitary else None
    return SimplexReport(True, None, [], worst, table)


def phase_table(b: OperatorBasis, tol: float = TOL.eq) -> np.ndarray:
    """theta[a, b] with M_a M_b = exp(i theta) M_b M_a."""
    size = len(b)
    theta = np.zeros((size, size))
    for a in range(size):
        for c in range(a + 1, size):
            t = phase_commute(b[a], b[c], tol)
            if t is None:
                raise NotSimplexError(f"elements {a} and {c} do not commute up to a phase")
            theta[a, c] = t
            theta[c, a] = -t if abs(t - math.pi) > 1e-12 else math.pi
    return theta


def unitary_lambda_matrix(b: OperatorBasis, phases: np.ndarray) -> np.ndarray:
    """W[a, c] = exp(-i theta_ac) / |M_c|^2, so that lambda = W v."""
    return np.exp(-1j * phases) / b.norms[None, :]


def unitary_basis_lambdas(v: CompressionVector, phases: Optional[np.ndarray] = None) -> np.ndarray:
    """Eigenvalue lambda_a for eigenvector (M_a (x) I)|Psi>, indexed by a."""
    b = v.basis
    if not b.is_unitary:
        raise NotSimplexError(f"{b.label} is not a unitary basis")
    if phases is None:
        report = simplex_condition(b)
        if not report.is_simplex:
            raise NotSimplexError(f"{b.label} elements do not commute up to phases")
        phases = report.phase_table
    lam = unitary_lambda_matrix(b, phases) @ v.v
    if max_abs(lam.imag) > TOL.eig:
        raise ValueError("analytic eigenvalues have imaginary parts; v breaks its pair constraints")
    return lam.real


def linear_spectrum_matrix(b: OperatorBasis) -> Optional[np.ndarray]:
    """Matrix A with Choi spectrum = A v, when the basis gives a simplex; else None."""
    if b.kind == "pauli":
        return pauli_sign_matrix(b.d) / b.n
    if b.kind == "heisenberg-weyl":
        return hw_phase_matrix(b.n) / b.n
    if b.is_unitary:
        report = simplex_condition(b)
        if report.is_simplex:
            return unitary_lambda_matrix(b, report.phase_table)
    return None


# --- extremal channels -------------------------------------------------------------

@dataclass
class ExtremalSet:
    basis: OperatorBasis
    vertices: list  # CompressionVector per vertex
    channels: list  # (basis index, form) with form "M^dag rho M" or "M rho M^dag"

    def conjugator(self, i: int) -> np.ndarray:
        """Matrix m with vertex channel rho -> m^dag rho m."""
        alpha, form = self.channels[i]
        m = self.basis[alpha]
        return m if form == "M^dag rho M" else m.conj().T

    def suppressed(self) -> np.ndarray:
        """Vertex coordinates without the constant v_0 column."""
        return np.array([x.v[1:] for x in self.vertices])

    def to_json(self) -> dict:
        b = self.basis
        return {
            "basis": b.label,
            "vertices": [
                {
                    "index": alpha,
                    "channel": form.replace("M", b.element_name(alpha), 2),
                    "v": [[float(z.real), float(z.imag)] for z in x.v],
                }
                for (alpha, form), x in zip(self.channels, self.vertices)
            ],
        }


def extremal_vertices(b: OperatorBasis, verify: bool = True) -> ExtremalSet:
    """Vertices of the CP simplex: conjugations by the basis matrices."""
    size = len(b)
    if b.kind == "pauli":
        d = b.d
        digits = [pauli_digits(a, d) for a in range(size)]
        verts = [
            [(-1.0) ** sum(g_exponent(aj, bj) for aj, bj in zip(digits[a], digits[beta])) for a in range(size)]
            for beta in range(size)
        ]
        form = "M^dag rho M"
    elif b.kind == "heisenberg-weyl":
        n = b.n
        omega = np.exp(2j * np.pi / n)
        verts = []
        for beta in range(size):
            j, k = divmod(beta, n)
            verts.append([omega ** ((l * k - m * j) % n) for l in range(n) for m in range(n)])
        form = "M^dag rho M"
    else:
        report = simplex_condition(b)
        if not report.is_simplex:
            raise NotSimplexError(
                f"{b.label} does not give a simplex (pair {report.failing_pair} fails)"
            )
        if not b.is_unitary:
            raise NotSimplexError(f"{b.label} is not unitary; extremal channels are not conjugations")
        verts = list(np.exp(1j * report.phase_table))
        form = "M rho M^dag"
    vertices = [CompressionVector(b, v) for v in verts]
    out = ExtremalSet(b, vertices, [(a, form) for a in range(size)])
    if verify:
        lam_matrix = linear_spectrum_matrix(b)
        for i, x in enumerate(vertices):
            lam = np.sort((lam_matrix @ x.v).real)
            expect = np.zeros(size)
            expect[-1] = b.n
            if max_abs(lam - expect) > TOL.eig:
                raise AssertionError(f"vertex {i} does not have spectrum (N, 0, ..., 0)")
    return out


# --- Gell-Mann basis --------------------------------------------------------

def gellmann_z_weight(l: int, k: int) -> float:
    """Eigenvalue of Z_l (x) conj(Z_l) on |J+-_jk>, any j < k."""
    if l < k:
        return 0.0
    if l == k:
        return -2.0 / (l + 1)
    return 2.0 / (l * (l + 1))


def gellmann_pm_lambdas(v: CompressionVector) -> dict:
    """{(j, k, '+'|'-'): eigenvalue on (|j,k> +- |k,j>)/sqrt 2}, linear in v."""
    _require_kind(v, "gellmann")
    b = v.basis
    n = b.n
    x = _real_v(v)
    out = {}
    for j in range(n - 1):
        for k in range(j + 1, n):
            base = x[0] / n + sum(gellmann_z_weight(l, k) * x[l] for l in range(1, n)) / 2
            a = gellmann_index(j, k, n)
            out[(j, k, "+")] = base + (x[a] - x[a + 1]) / 2
            out[(j, k, "-")] = base - (x[a] - x[a + 1]) / 2
    return out


def gellmann_pm_vector(n: int, j: int, k: int, sign: int) -> np.ndarray:
    vec = np.zeros(n * n)
    vec[j * n + k] = 1 / math.sqrt(2)
    vec[k * n + j] = sign / math.sqrt(2)
    return vec


def gellmann_block_permutation(n: int) -> list[int]:
    """Ordering that puts J(Phi_v) into (|j,k>, |k,j>) 2x2 blocks followed by the K block."""
    perm = []
    for j in range(n - 1):
        for k in range(j + 1, n):
            perm += [j * n + k, k * n + j]
    return perm + [j * n + j for j in range(n)]


@dataclass
class KBlock:
    k: np.ndarray
    sums: np.ndarray  # S_0..S_N
    indices: list


def gellmann_k_block(v: CompressionVector, choi: Optional[ChoiMatrix] = None) -> KBlock:
    """N x N block of J(Phi_v) on {|j,j>} together with its eigenvalue sums."""
    _require_kind(v, "gellmann")
    _real_v(v)
    n = v.basis.n
    j = (choi or choi_of_depolarizing(v)).j
    rows = [r * n + r for r in range(n)]
    rest = [r for r in range(n * n) if r not in set(rows)]
    leak = max(max_abs(j[np.ix_(rows, rest)]), max_abs(j[np.ix_(rest, rows)])) if rest else 0.0
    if leak > TOL.eq:
        raise ValueError(f"Choi matrix couples the |j,j> block to the rest ({leak:.3e}); not a Gell-Mann channel")
    k = extract_block(j, rows)
    return KBlock(k, charpoly_coeffs(k), rows)


def sign_criterion(s, tol: float = TOL.sign) -> bool:
    """All eigenvalues of a real-spectrum matrix are >= 0 iff all its eigenvalue sums are."""
    return bool(np.all(np.asarray(s, dtype=float) >= -tol))


# --- certification ------------------------------------------------------------

@dataclass
class CpReport:
    verdict: str
    method: str
    min_eigenvalue: float
    eigenvalues: list
    tolerance: float
    cross_check: Optional[float] = None  # max |analytic - numeric| when requested
    eigenvalue_sums: Optional[list] = None

    @property
    def is_cp(self) -> bool:
        return self.verdict == "cp"

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "method": self.method,
            "minEigenvalue": self.min_eigenvalue,
            "eigenvalues": list(self.eigenvalues),
            "tolerance": self.tolerance,
        }
        if self.cross_check is not None:
            out["crossCheck"] = self.cross_check
        if self.eigenvalue_sums is not None:
            out["eigenvalueSums"] = list(self.eigenvalue_sums)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CpReport":
        return cls(
            obj["verdict"], obj["method"], float(obj["minEigenvalue"]),
            [float(x) for x in obj["eigenvalues"]], float(obj["tolerance"]),
            obj.get("crossCheck"), obj.get("eigenvalueSums"),
        )


def _report(values, method, tol, verdict=None, **extra) -> CpReport:
    vals = np.sort(np.asarray(values, dtype=float))[::-1]
    lo = float(vals[-1])
    if verdict is None:
        verdict = lo >= -tol
    return CpReport("cp" if verdict else "not-cp", method, lo, [float(x) for x in vals], tol, **extra)


def numeric_spectrum(choi: ChoiMatrix) -> np.ndarray:
    return eigenvalues(choi.j)


def certify_cp(v: CompressionVector, tol: float = TOL.eig, cross_validate: bool = False) -> CpReport:
    """Decide complete positivity of Phi_v, by closed form where the basis allows it."""
    b = v.basis
    sums = None
    if b.kind == "pauli":
        method, values = "analytic-pauli", pauli_lambda_vector(v)
    elif b.kind == "heisenberg-weyl":
        method, values = "analytic-hw", hw_lambda_vector(v)
    elif b.kind == "gellmann":
        method = "gellmann-hybrid"
        pm = np.array(list(gellmann_pm_lambdas(v).values()))
        kb = gellmann_k_block(v)
        values = np.concatenate([pm, eigenvalues(kb.k)])
        sums = [float(s) for s in kb.sums]
        verdict = bool((pm.size == 0 or pm.min() >= -tol) and sign_criterion(kb.sums, tol))
    else:
        lam_matrix = linear_spectrum_matrix(b)
        if lam_matrix is not None:
            method, values = "analytic-unitary", unitary_basis_lambdas(v, simplex_condition(b).phase_table)
        else:
            method, values = "numeric", numeric_spectrum(choi_of_depolarizing(v))
    check = None
    if cross_validate and method != "numeric":
        num = numeric_spectrum(choi_of_depolarizing(v))
        check = float(np.abs(np.sort(values) - np.sort(num)).max())
    if method == "gellmann-hybrid":
        return _report(values, method, tol, verdict=verdict, cross_check=check, eigenvalue_sums=sums)
    return _report(values, method, tol, cross_check=check)


def certify_cp_translation(v: CompressionVector, t: TranslationVector, tol: float = TOL.eig) -> CpReport:
    choi = choi_of_translation_channel(v, t)
    return _report(numeric_spectrum(choi), "numeric", tol)


def qubit_translation_spectrum(vx: float, vy: float, vz: float, tz: float) -> np.ndarray:
    """Closed-form eigenvalues of the single-qubit Pauli channel with translation t = (0, 0, 0, tz).

    J splits into two 2x2 blocks on {Psi_00, Psi_01} and {Psi_10, Psi_11};
    each block has off-diagonal tz/2.
    """
    r0 = 0.5 * math.hypot(vx + vy, tz)
    r1 = 0.5 * math.hypot(vx - vy, tz)
    return np.array([(1 + vz) / 2 + r0, (1 + vz) / 2 - r0, (1 - vz) / 2 + r1, (1 - vz) / 2 - r1])


def conjugation_spectrum(m) -> np.ndarray:
    return numeric_spectrum(choi_of_conjugation(m))
