"""Polarization vectors, depolarizing / translating channels and their Choi matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import OperatorBasis
from .config import TOL
from .linalg import as_matrix, is_hermitian, max_abs


class PairConstraintError(ValueError):
    pass


def polarization_scale(b: OperatorBasis) -> np.ndarray:
    """sqrt(N(N-1) / tr(M^dag M)) per index; the identity slot is unused and set to 1."""
    s = np.sqrt(b.n * (b.n - 1) / b.norms)
    s[0] = 1.0
    return s


def pair_violation(b: OperatorBasis, x: np.ndarray, with_gamma: bool) -> float:
    """Worst breach of x_a gamma = conj(x_b) (polarization) or x_a = conj(x_b) (compression)."""
    worst = 0.0
    for p in b.pairs.pairs:
        g = p.gamma if with_gamma else 1.0
        worst = max(worst, abs(x[p.alpha] * g - np.conj(x[p.beta])))
    return worst


def _as_vector(b: OperatorBasis, values, name: str) -> np.ndarray:
    x = np.array(values, dtype=np.complex128).ravel()
    if x.shape != (b.n ** 2,):
        raise ValueError(f"{name} must have {b.n ** 2} components (including index 0), got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains NaN or Inf")
    return x


@dataclass(frozen=True, eq=False)
class PolarizationVector:
    basis: OperatorBasis
    a: np.ndarray

    def __post_init__(self):
        a = _as_vector(self.basis, self.a, "polarization vector")
        if abs(a[0] - 1) > TOL.eq:
            raise ValueError(f"a_0 must be 1, got {a[0]}")
        a[0] = 1.0
        bad = pair_violation(self.basis, a, with_gamma=True)
        if bad > TOL.eq:
            raise PairConstraintError(f"polarization vector breaks a_a gamma = conj(a_b) by {bad:.3e}")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def norm(self) -> float:
        """sum_{a>=1} |a_a|^2 (equals 1 exactly for pure states)."""
        return float(np.sum(np.abs(self.a[1:]) ** 2))


@dataclass(frozen=True, eq=False)
class CompressionVector:
    basis: OperatorBasis
    v: np.ndarray
    validate: bool = True

    def __post_init__(self):
        v = _as_vector(self.basis, self.v, "compression vector")
        if self.validate:
            if abs(v[0] - 1) > TOL.eq:
                raise ValueError(f"v_0 must be 1 (trace preservation), got {v[0]}")
            v[0] = 1.0
            bad = pair_violation(self.basis, v, with_gamma=False)
            if bad > TOL.eq:
                raise PairConstraintError(f"compression vector breaks v_a = conj(v_b) by {bad:.3e}")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def is_real(self) -> bool:
        return max_abs(self.v.imag) <= TOL.eq


@dataclass(frozen=True, eq=False)
class TranslationVector:
    basis: OperatorBasis
    t: np.ndarray

    def __post_init__(self):
        t = _as_vector(self.basis, self.t, "translation vector")
        if t[0] != 0:
            raise ValueError(f"t_0 must be 0 (trace preservation), got {t[0]}")
        # t shifts polarization coefficients, so it obeys their constraint
        bad = pair_violation(self.basis, t, with_gamma=True)
        if bad > TOL.eq:
            raise PairConstraintError(f"translation vector breaks t_a gamma = conj(t_b) by {bad:.3e}")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    @classmethod
    def zero(cls, b: OperatorBasis) -> "TranslationVector":
        return cls(b, np.zeros(b.n ** 2))


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    j: np.ndarray
    source: str = ""

    @property
    def dim(self) -> int:
        return self.j.shape[0]

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.j))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "source": self.source,
            "entries": [[float(z.real), float(z.imag)] for z in self.j.ravel()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChoiMatrix":
        dim = int(obj["dim"])
        raw = np.array(obj["entries"], dtype=float).reshape(dim, dim, 2)
        return cls(raw[..., 0] + 1j * raw[..., 1], obj.get("source", ""))


def _same_basis(x: OperatorBasis, y: OperatorBasis):
    if x is not y and (x.n != y.n or max_abs(x.elements - y.elements) > TOL.eq):
        raise ValueError(f"basis mismatch: {x.label} vs {y.label}")


# --- states ----------------------------------------------------------------

def density_from_polarization(a: PolarizationVector) -> np.ndarray:
    """rho = (I + sum_a s_a a_a M_a) / N. Positivity is not checked."""
    b = a.basis
    coeff = polarization_scale(b) * a.a
    coeff[0] = 1.0
    return np.einsum("a,aij->ij", coeff, b.elements) / b.n


def polarization_from_density(rho, b: OperatorBasis) -> PolarizationVector:
    rho = as_matrix(rho)
    if rho.shape != (b.n, b.n):
        raise ValueError(f"state has shape {rho.shape}, basis acts on dimension {b.n}")
    tr = np.trace(rho)
    if abs(tr - 1) > TOL.eq:
        raise ValueError(f"state must have unit trace, got {tr}")
    overlaps = np.einsum("aij,ij->a", b.elements.conj(), rho) / b.norms
    a = overlaps * b.n / polarization_scale(b)
    a[0] = 1.0
    return PolarizationVector(b, a)


def is_positive_state(rho, tol: float = TOL.eig) -> bool:
    from .linalg import eigenvalues

    return bool(eigenvalues(rho)[-1] >= -tol)


# --- channels --------------------------------------------------------------

def apply_depolarizing(v: CompressionVector, rho) -> np.ndarray:
    """Scale every polarization coefficient of rho by v_a."""
    return apply_translation_channel(v, None, rho)


def apply_translation_channel(v: CompressionVector, t: Optional[TranslationVector], rho) -> np.ndarray:
    """Map polarization a -> v * a + t."""
    b = v.basis
    rho = as_matrix(rho)
    if rho.shape != (b.n, b.n):
        raise ValueError(f"state has shape {rho.shape}, basis acts on dimension {b.n}")
    coeff = np.einsum("aij,ij->a", b.elements.conj(), rho) / b.norms * v.v
    if t is not None:
        _same_basis(t.basis, b)
        # t_a shifts a_a, which enters rho with weight s_a / N
        coeff = coeff + t.t * polarization_scale(b) / b.n * np.trace(rho)
    return np.einsum("a,aij->ij", coeff, b.elements)


def choi_definitional(channel, n: int) -> np.ndarray:
    """sum_{j,k} Phi(|j><k|) (x) |j><k| for any linear map given as a callable."""
    out = np.zeros((n * n, n * n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, k] = 1.0
            out += np.kron(channel(e), e)
    return out


def choi_of_depolarizing(v: CompressionVector) -> ChoiMatrix:
    b = v.basis
    j = np.einsum("a,aij->ij", v.v / b.norms, b.tensor_squares)
    return ChoiMatrix(j, f"depolarizing[{b.label}]")


def choi_of_conjugation(m) -> ChoiMatrix:
    """Choi matrix of rho -> m^dag rho m."""
    m = as_matrix(m)
    md = m.conj().T
    return ChoiMatrix(choi_definitional(lambda e: md @ e @ m, m.shape[0]), "conjugation")


def choi_of_translation_channel(v: CompressionVector, t: TranslationVector) -> ChoiMatrix:
    """sum_a M_a (x) (v_a conj(M_a) / |M_a|^2 + t_a s_a I / N)."""
    b = v.basis
    _same_basis(t.basis, b)
    if t.t[0] != 0:
        raise ValueError("t_0 must be 0")
    n = b.n
    j = choi_of_depolarizing(v).j
    shift = t.t * polarization_scale(b) / n
    shift[0] = 0.0
    j = j + np.kron(np.einsum("a,aij->ij", shift, b.elements), np.eye(n))
    return ChoiMatrix(j, f"translation[{b.label}]")


def extract_compression_vector(choi: ChoiMatrix, b: OperatorBasis) -> tuple[CompressionVector, float]:
    """Project a Choi matrix onto span{M_a (x) conj(M_a)}; residual is zero iff depolarizing in b."""
    j = as_matrix(choi.j)
    if j.shape != (b.n ** 2, b.n ** 2):
        raise ValueError(f"Choi matrix has shape {j.shape}, expected {(b.n ** 2,) * 2}")
    sq = b.tensor_squares
    # tr((M (x) M*)^dag J) / tr(M^dag M); the tensor square has norm |M|^4
    v = np.einsum("aij,ij->a", sq.conj(), j) / b.norms
    recon = np.einsum("a,aij->ij", v / b.norms, sq)
    residual = max_abs(j - recon)
    ok = abs(v[0] - 1) <= TOL.eq and residual <= TOL.eq
    return CompressionVector(b, v, validate=ok), residual


def choi_is_hermitian(choi: ChoiMatrix, tol: float = TOL.eq) -> bool:
    return is_hermitian(choi.j, tol)
