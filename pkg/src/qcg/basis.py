"""Trace-free, trace-orthogonal operator bases.

A basis is N^2 matrices with M_0 = I, tr M_a = 0 for a >= 1 and
tr(M_a^dag M_b) = 0 for a != b. Elements are stored unnormalized; the
Hilbert-Schmidt norms tr(M_a^dag M_a) travel alongside them.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .config import TOL
from .linalg import as_matrix, max_abs

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

KINDS = ("pauli", "gellmann", "heisenberg-weyl", "custom")


class BasisError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    n: int
    elements: np.ndarray  # shape (n*n, n, n)
    kind: str = "custom"
    d: Optional[int] = None  # qubit count for pauli bases
    norms: np.ndarray = field(init=False)

    def __post_init__(self):
        els = np.array(self.elements, dtype=np.complex128)
        if els.shape != (self.n ** 2, self.n, self.n):
            raise BasisError(
                f"expected {self.n ** 2} matrices of size {self.n}x{self.n}, got array of shape {els.shape}"
            )
        if not np.all(np.isfinite(els)):
            raise BasisError("basis contains NaN or Inf")
        if self.kind not in KINDS:
            raise BasisError(f"unknown basis kind {self.kind!r}")
        els.setflags(write=False)
        norms = np.einsum("aij,aij->a", els.conj(), els).real
        norms.setflags(write=False)
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "norms", norms)

    def __len__(self):
        return self.n ** 2

    def __getitem__(self, alpha):
        return self.elements[alpha]

    @property
    def label(self) -> str:
        if self.kind == "pauli":
            return f"pauli(d={self.d})"
        return f"{self.kind}(n={self.n})"

    @cached_property
    def is_hermitian(self) -> bool:
        return max_abs(self.elements - self.elements.conj().transpose(0, 2, 1)) <= TOL.eq

    @cached_property
    def is_unitary(self) -> bool:
        eye = np.eye(self.n)
        prods = np.einsum("aij,akj->aik", self.elements, self.elements.conj())
        return max_abs(prods - eye) <= TOL.eq

    @cached_property
    def tensor_squares(self) -> np.ndarray:
        """M_a (x) conj(M_a) for every a, shape (N^2, N^2, N^2)."""
        e = self.elements
        n = self.n
        return np.einsum("aij,akl->aikjl", e, e.conj()).reshape(n * n, n * n, n * n)

    @cached_property
    def pairs(self) -> "PairStructure":
        return conjugate_pair_structure(self)

    def element_name(self, alpha: int) -> str:
        if self.kind == "pauli":
            digits = pauli_digits(alpha, self.d)
            return "".join("IXYZ"[a] for a in digits)
        if self.kind == "gellmann":
            return gellmann_labels(self.n)[alpha]
        if self.kind == "heisenberg-weyl":
            j, k = divmod(alpha, self.n)
            return f"X^{j}Z^{k}"
        return f"M{alpha}"

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "kind": self.kind,
            "elements": [[[float(z.real), float(z.imag)] for z in m.ravel()] for m in self.elements],
        }
        if self.d is not None:
            out["d"] = self.d
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorBasis":
        try:
            n = int(obj["n"])
            raw = np.array(obj["elements"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise BasisError(f"malformed basis JSON: {exc}") from exc
        if raw.shape != (n * n, n * n, 2):
            raise BasisError(f"basis JSON elements have shape {raw.shape}, expected {(n * n, n * n, 2)}")
        els = (raw[..., 0] + 1j * raw[..., 1]).reshape(n * n, n, n)
        return cls(n, els, kind=obj.get("kind", "custom"), d=obj.get("d"))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# --- named bases -----------------------------------------------------------

def pauli_digits(alpha: int, d: int) -> list[int]:
    """Base-4 digits (alpha_1, ..., alpha_d), least significant first."""
    return [(alpha // 4 ** j) % 4 for j in range(d)]


def pauli_basis(d: int, max_qubits: int = 3) -> OperatorBasis:
    """d-qubit Pauli products; alpha_1 (least significant digit) is the leftmost factor."""
    if d < 1:
        raise BasisError("pauli basis needs at least one qubit")
    if d > max_qubits:
        raise BasisError(f"pauli basis capped at {max_qubits} qubits (N = {2 ** max_qubits})")
    n = 2 ** d
    els = []
    for alpha in range(4 ** d):
        m = np.ones((1, 1), dtype=np.complex128)
        for a in pauli_digits(alpha, d):
            m = np.kron(m, PAULI[a])
        els.append(m)
    return OperatorBasis(n, np.array(els), kind="pauli", d=d)


def gellmann_index(j: int, k: int, n: int) -> int:
    """Index of X_jk; Y_jk sits at the next index."""
    return n * (1 + 2 * j) + 2 * k - (j + 1) * (j + 2)


def gellmann_labels(n: int) -> list[str]:
    labels = ["I"] + [f"Z{l}" for l in range(1, n)] + [""] * (n * n - n)
    for j in range(n - 1):
        for k in range(j + 1, n):
            a = gellmann_index(j, k, n)
            labels[a], labels[a + 1] = f"X{j}{k}", f"Y{j}{k}"
    return labels


def gellmann_basis(n: int) -> OperatorBasis:
    if n < 2:
        raise BasisError("gell-mann basis needs n >= 2")
    els = np.zeros((n * n, n, n), dtype=np.complex128)
    els[0] = np.eye(n)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1.0
        diag[l] = -l
        els[l] = math.sqrt(2.0 / (l * (l + 1))) * np.diag(diag)
    seen = set(range(n))
    for j in range(n - 1):
        for k in range(j + 1, n):
            a = gellmann_index(j, k, n)
            els[a, j, k] = els[a, k, j] = 1.0
            els[a + 1, j, k] = -1j
            els[a + 1, k, j] = 1j
            seen.update((a, a + 1))
    assert seen == set(range(n * n))
    return OperatorBasis(n, els, kind="gellmann")


def shift_clock(n: int) -> tuple[np.ndarray, np.ndarray]:
    """X = sum_j |j><j+1| and Z = diag(omega^j), omega = exp(2 pi i / n)."""
    x = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        x[j, (j + 1) % n] = 1.0
    z = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    return x, z


def hw_basis(n: int) -> OperatorBasis:
    if n < 2:
        raise BasisError("heisenberg-weyl basis needs n >= 2")
    x, z = shift_clock(n)
    xp = [np.linalg.matrix_power(x, j) for j in range(n)]
    zp = [np.diag(np.exp(2j * np.pi * k * np.arange(n) / n)) for k in range(n)]
    els = [xp[j] @ zp[k] for j in range(n) for k in range(n)]
    return OperatorBasis(n, np.array(els), kind="heisenberg-weyl")


def named_basis(kind: str, n: Optional[int] = None, d: Optional[int] = None) -> OperatorBasis:
    kind = kind.lower()
    if kind == "pauli":
        if d is None:
            if n is None or n & (n - 1):
                raise BasisError("pauli basis needs d, or n a power of two")
            d = n.bit_length() - 1
        return pauli_basis(d)
    if n is None:
        raise BasisError(f"{kind} basis needs n")
    if kind in ("gellmann", "gell-mann"):
        return gellmann_basis(n)
    if kind in ("hw", "heisenberg-weyl", "weyl"):
        return hw_basis(n)
    raise BasisError(f"unknown basis kind {kind!r}")


# --- validation ------------------------------------------------------------

@dataclass
class BasisValidation:
    identity_error: float
    trace_error: float
    orthogonality_error: float
    min_norm: float
    count_ok: bool
    tol: float

    @property
    def identity_ok(self):
        return self.identity_error <= self.tol

    @property
    def trace_free(self):
        return self.trace_error <= self.tol

    @property
    def orthogonal(self):
        return self.orthogonality_error <= self.tol

    @property
    def independent(self):
        # a diagonal Gram matrix with positive diagonal is nonsingular
        return self.orthogonal and self.min_norm > self.tol

    @property
    def ok(self):
        return self.count_ok and self.identity_ok and self.trace_free and self.independent

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "identity": {"ok": self.identity_ok, "worst": self.identity_error},
            "traceFree": {"ok": self.trace_free, "worst": self.trace_error},
            "orthogonal": {"ok": self.orthogonal, "worst": self.orthogonality_error},
            "independent": {"ok": self.independent, "minNorm": self.min_norm},
            "count": {"ok": self.count_ok},
            "tolerance": self.tol,
        }


def validate_basis(b: OperatorBasis, tol: float = TOL.eq) -> BasisValidation:
    els = b.elements
    ident = max_abs(els[0] - np.eye(b.n))
    traces = np.einsum("aii->a", els[1:])
    trace_err = max_abs(traces) if len(traces) else 0.0
    gram = np.einsum("aij,bij->ab", els.conj(), els)
    off = gram - np.diag(np.diag(gram))
    return BasisValidation(
        identity_error=ident,
        trace_error=trace_err,
        orthogonality_error=max_abs(off),
        min_norm=float(np.diag(gram).real.min()),
        count_ok=len(els) == b.n ** 2,
        tol=tol,
    )


# --- conjugate pairs -------------------------------------------------------

@dataclass(frozen=True)
class Pair:
    alpha: int
    beta: int
    gamma: complex  # M_alpha = gamma * M_beta^dag


@dataclass(frozen=True)
class PairStructure:
    pairs: tuple[Pair, ...]
    unpaired: tuple[int, ...] = ()

    @property
    def partial(self) -> bool:
        return bool(self.unpaired)

    @cached_property
    def partner(self) -> dict[int, int]:
        out = {}
        for p in self.pairs:
            out[p.alpha] = p.beta
            out[p.beta] = p.alpha
        return out

    @property
    def self_paired(self) -> list[int]:
        return [p.alpha for p in self.pairs if p.alpha == p.beta]

    @property
    def real_axes(self) -> list[int]:
        """Self-paired indices other than 0, plus unpaired ones (treated as real)."""
        return sorted([a for a in self.self_paired if a != 0] + list(self.unpaired))

    @property
    def complex_planes(self) -> list[tuple[int, int]]:
        return [(p.alpha, p.beta) for p in self.pairs if p.alpha != p.beta]

    @property
    def n_real_axes(self) -> int:
        return len([a for a in self.self_paired if a != 0])

    @property
    def n_complex_planes(self) -> int:
        return len(self.complex_planes)


def conjugate_pair_structure(b: OperatorBasis, tol: float = TOL.eq) -> PairStructure:
    """Match each M_a with the unique M_b and unimodular-or-not gamma with M_a = gamma M_b^dag."""
    els = b.elements
    daggers = els.conj().transpose(0, 2, 1)
    # tr((M_b^dag)^dag M_a) = tr(M_b M_a)
    overlaps = np.einsum("bij,aji->ab", els, els)
    pairs, unpaired, used = [], [], set()
    for a in range(len(els)):
        if a in used:
            continue
        found = None
        for bb in np.argsort(-np.abs(overlaps[a]))[:2]:
            bb = int(bb)
            if abs(overlaps[a, bb]) <= tol:
                continue
            gamma = overlaps[a, bb] / b.norms[bb]
            if max_abs(els[a] - gamma * daggers[bb]) <= tol * max(1.0, max_abs(els[a])):
                found = (bb, complex(gamma))
                break
        if found is None or (found[0] in used):
            unpaired.append(a)
            used.add(a)
            continue
        bb, gamma = found
        lo, hi = (a, bb) if a <= bb else (bb, a)
        if lo != a:
            gamma = complex(np.conj(1 / gamma)) if gamma != 0 else gamma
        pairs.append(Pair(lo, hi, gamma))
        used.update((a, bb))
    return PairStructure(tuple(pairs), tuple(unpaired))


# --- change of basis -------------------------------------------------------

def change_of_basis_matrix(m: OperatorBasis, l: OperatorBasis) -> np.ndarray:
    """u[a, b] = tr(L_b^dag M_a) / sqrt(|L_b|^2 |M_a|^2), so that M_hat = U L_hat."""
    if m.n != l.n:
        raise BasisError(f"bases act on different dimensions ({m.n} vs {l.n})")
    inner = np.einsum("bij,aij->ab", l.elements.conj(), m.elements)
    return inner / np.sqrt(np.outer(m.norms, l.norms))
