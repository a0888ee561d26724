"""Monte Carlo estimate of the CP fraction of the compression box.

Each sample owns a fixed window of the Philox counter stream keyed by the
seed, so results depend only on (seed, sample index) and never on how the
index range is chunked or spread across workers.
"""
from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import OperatorBasis
from .channel import TranslationVector, polarization_scale
from .config import TOL
from .geometry import linear_spectrum_matrix

CHUNK = 1 << 16


def coordinate_layout(b: OperatorBasis) -> list[tuple[int, str]]:
    """Real coordinates of compression space: (index, 're'|'im'|'real') per axis.

    Index 0 is suppressed. Self-paired (and unpaired) indices give one real
    axis; each conjugate pair (a, c), a < c, gives Re v_a and Im v_a.
    """
    ps = b.pairs
    upper = {c for _, c in ps.complex_planes}
    lower = {a for a, _ in ps.complex_planes}
    out = []
    for a in range(1, len(b)):
        if a in upper:
            continue
        if a in lower:
            out += [(a, "re"), (a, "im")]
        else:
            out.append((a, "real"))
    return out


def coordinate_names(b: OperatorBasis) -> list[str]:
    return [f"v{a}" if part == "real" else f"v{a}_{part}" for a, part in coordinate_layout(b)]


def vectors_from_coordinates(b: OperatorBasis, coords: np.ndarray) -> np.ndarray:
    """Batch map (S, N^2-1) real coordinates -> (S, N^2) compression vectors."""
    coords = np.atleast_2d(coords)
    v = np.zeros((coords.shape[0], len(b)), dtype=np.complex128)
    v[:, 0] = 1.0
    for col, (a, part) in enumerate(coordinate_layout(b)):
        if part == "real":
            v[:, a] = coords[:, col]
        elif part == "re":
            v[:, a] += coords[:, col]
        else:
            v[:, a] += 1j * coords[:, col]
    for a, c in b.pairs.complex_planes:
        v[:, c] = np.conj(v[:, a])
    return v


def coordinates_from_vector(b: OperatorBasis, v) -> np.ndarray:
    v = np.asarray(v)
    out = []
    for a, part in coordinate_layout(b):
        out.append(v[a].real if part in ("real", "re") else v[a].imag)
    return np.array(out, dtype=float)


def draw_uniform(seed: int, start: int, count: int, width: int) -> np.ndarray:
    """Uniform [0, 1) draws for samples start..start+count-1, `width` per sample."""
    blocks = -(-width // 4)  # Philox yields 4 words per counter step
    bitgen = np.random.Philox(key=seed, counter=start * blocks)
    return np.random.Generator(bitgen).random((count, 4 * blocks))[:, :width]


def batch_choi(b: OperatorBasis, v: np.ndarray, t: Optional[TranslationVector]) -> np.ndarray:
    size = len(b)
    flat = (b.tensor_squares / b.norms[:, None, None]).reshape(size, -1)
    j = (v @ flat).reshape(-1, size, size)
    if t is not None:
        shift = t.t * polarization_scale(b) / b.n
        shift[0] = 0.0
        j = j + np.kron(np.einsum("a,aij->ij", shift, b.elements), np.eye(b.n))
    return j


def batch_min_eigenvalue(b: OperatorBasis, v: np.ndarray, t: Optional[TranslationVector] = None) -> np.ndarray:
    lam_matrix = linear_spectrum_matrix(b) if t is None or not np.any(t.t) else None
    if lam_matrix is not None:
        return (v @ lam_matrix.T).real.min(axis=1)
    return np.linalg.eigvalsh(batch_choi(b, v, t)).min(axis=1)


@dataclass
class SampleResult:
    fraction: float
    stderr: float
    samples: int
    seed: int
    cp_count: int
    names: list
    points: Optional[np.ndarray] = None  # (samples, N^2-1) coordinates
    cp: Optional[np.ndarray] = None

    def summary(self) -> dict:
        return {"fraction": self.fraction, "stderr": self.stderr, "samples": self.samples, "seed": self.seed}

    def to_csv(self) -> str:
        if self.points is None:
            raise ValueError("sample was run without keep_points")
        buf = io.StringIO()
        buf.write(",".join(["index", *self.names, "cp"]) + "\n")
        for i, (row, ok) in enumerate(zip(self.points, self.cp)):
            buf.write(",".join([str(i), *(repr(float(x)) for x in row), "1" if ok else "0"]) + "\n")
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(self.summary())


def sample_region(b: OperatorBasis, t: Optional[TranslationVector] = None, samples: int = 10000,
                  seed: int = 0, low: float = -1.0, high: float = 1.0, tol: float = TOL.eig,
                  keep_points: bool = False, workers: int = 1) -> SampleResult:
    """Fraction of the box [low, high]^(N^2-1) (real coordinates) whose channels are CP."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    width = len(b) - 1
    starts = list(range(0, samples, CHUNK))

    def run(start):
        count = min(CHUNK, samples - start)
        coords = low + (high - low) * draw_uniform(seed, start, count, width)
        ok = batch_min_eigenvalue(b, vectors_from_coordinates(b, coords), t) >= -tol
        return coords, ok

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    cp = np.concatenate([ok for _, ok in parts])
    hits = int(cp.sum())
    p = hits / samples
    return SampleResult(
        fraction=p,
        stderr=math.sqrt(p * (1 - p) / samples),
        samples=samples,
        seed=seed,
        cp_count=hits,
        names=coordinate_names(b),
        points=np.concatenate([c for c, _ in parts]) if keep_points else None,
        cp=cp if keep_points else None,
    )
