"""Command-line front end.

Exit status: 0 on success (a not-cp verdict is a result, not a failure),
1 on a domain error such as asking for the extremals of a non-simplex
basis, 2 on malformed input, unreadable files or bad flags.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .basis import BasisError, OperatorBasis, change_of_basis_matrix, named_basis, validate_basis
from .channel import (
    CompressionVector,
    TranslationVector,
    choi_of_depolarizing,
    choi_of_translation_channel,
)
from .config import TOL
from .geometry import (
    NotSimplexError,
    certify_cp,
    certify_cp_translation,
    extremal_vertices,
    linear_spectrum_matrix,
    numeric_spectrum,
    simplex_condition,
)
from .sampling import coordinate_names, coordinates_from_vector, sample_region, vectors_from_coordinates


class UsageError(Exception):
    pass


# --- input parsing --------------------------------------------------------------

def parse_complex_list(text: str) -> list[complex]:
    """'1,0.5,-0.2+0.1j' -> complex list; 'i' is accepted for the imaginary unit."""
    out = []
    for tok in text.split(","):
        tok = tok.strip().replace(" ", "").replace("i", "j")
        if not tok:
            raise UsageError(f"empty component in {text!r}")
        try:
            out.append(complex(tok))
        except ValueError:
            raise UsageError(f"cannot parse component {tok!r}") from None
    return out


def pairs_to_complex(raw) -> list[complex]:
    out = []
    for x in raw:
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise UsageError(f"expected [re, im], got {x!r}")
            out.append(complex(float(x[0]), float(x[1])))
        else:
            out.append(complex(float(x)))
    return out


def complex_to_pairs(x) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(x, dtype=complex)]


def load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def basis_from_json(obj: dict) -> OperatorBasis:
    if "elements" in obj:
        return OperatorBasis.from_json(obj)
    return named_basis(obj["kind"], n=obj.get("n"), d=obj.get("d"))


def parse_channel(obj: dict) -> tuple[OperatorBasis, list[complex], Optional[list[complex]]]:
    """Channel file: {"basis": ..., "v": [[re, im], ...], "t": [...] (optional)}."""
    try:
        b = basis_from_json(obj["basis"])
        v = pairs_to_complex(obj["v"])
        t = pairs_to_complex(obj["t"]) if obj.get("t") is not None else None
    except (KeyError, TypeError, ValueError, BasisError) as exc:
        raise UsageError(f"malformed channel JSON: {exc}") from None
    return b, v, t


def channel_json(b: OperatorBasis, v, t=None) -> dict:
    basis = {"kind": b.kind, "n": b.n} if b.kind != "custom" else b.to_json()
    if b.kind == "pauli":
        basis["d"] = b.d
    out = {"basis": basis, "v": complex_to_pairs(v)}
    if t is not None:
        out["t"] = complex_to_pairs(t)
    return out


def vector_arg(text: str) -> list[complex]:
    if os.path.exists(text):
        obj = load_json(text)
        if isinstance(obj, dict):
            obj = obj.get("v", obj.get("t"))
        return pairs_to_complex(obj)
    return parse_complex_list(text)


def select_basis(args) -> OperatorBasis:
    if getattr(args, "basis_file", None):
        obj = load_json(args.basis_file)
        try:
            return basis_from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed basis file: {exc}") from None
    if not args.basis:
        raise UsageError("give --basis KIND (with --n or --d) or --basis-file")
    try:
        return named_basis(args.basis, n=args.n, d=args.d)
    except BasisError as exc:
        raise UsageError(str(exc)) from None


def channel_inputs(args, need_t=False):
    if getattr(args, "channel", None):
        b, v, t = parse_channel(load_json(args.channel))
    else:
        b = select_basis(args)
        if not args.v:
            raise UsageError("give --v or --channel")
        v = vector_arg(args.v)
        t = vector_arg(args.t) if getattr(args, "t", None) else None
    if need_t and t is None:
        raise UsageError("this command needs a translation vector (--t)")
    size = b.n ** 2
    for name, x in (("v", v), ("t", t)):
        if x is not None and len(x) != size:
            raise UsageError(f"{name} needs {size} components including index 0, got {len(x)}")
    try:
        cv = CompressionVector(b, v)
        tv = TranslationVector(b, t) if t is not None else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return b, cv, tv


def tolerance(args) -> float:
    tol = args.tol
    if tol is None:
        env = os.environ.get("QCG_TOL")
        if env:
            try:
                tol = float(env)
            except ValueError:
                raise UsageError(f"QCG_TOL={env!r} is not a number") from None
    if tol is None:
        tol = TOL.eig
    if not tol > 0:
        raise UsageError("tolerance must be positive")
    return tol


# --- figure data ---------------------------------------------------------------

def figure_data(b: OperatorBasis) -> dict:
    """Plot-ready vertices and edges of the CP simplex (v_0 dropped)."""
    lam_matrix = linear_spectrum_matrix(b)
    if lam_matrix is None:
        raise NotSimplexError(f"{b.label} does not give a simplex; use `sample` to map the region instead")
    ext = extremal_vertices(b)
    verts = [coordinates_from_vector(b, x.v).tolist() for x in ext.vertices]
    k = len(verts)
    out = {
        "basis": b.label,
        "coordinates": coordinate_names(b),
        "vertices": verts,
        "channels": [f"{form} with M = {b.element_name(a)}" for a, form in ext.channels],
        "edges": [[i, j] for i in range(k) for j in range(i + 1, k)],
    }
    if b.n == 2:
        dim = len(verts[0])
        origin = (lam_matrix @ vectors_from_coordinates(b, np.zeros(dim))[0]).real
        unit = vectors_from_coordinates(b, np.eye(dim))
        grads = (unit @ lam_matrix.T).real - origin
        facets = []
        for r in range(len(lam_matrix)):
            g = grads[:, r]
            scale = float(np.linalg.norm(g))
            at_vertex = [(lam_matrix[r] @ x.v).real for x in ext.vertices]
            facets.append({
                "normal": (g / scale).tolist(),  # points into the CP region
                "offset": float(origin[r] / scale),
                "opposite": int(np.argmax(at_vertex)),
            })
        out["facets"] = facets
    return out


# --- commands -------------------------------------------------------------------

def emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    else:
        sys.stdout.write(text)


def cmd_basis(args):
    b = select_basis(args)
    if args.action == "gen":
        emit(args, b.to_json())
        return 0
    report = validate_basis(b).to_json()
    report["pairs"] = {
        "realAxes": b.pairs.n_real_axes,
        "complexPlanes": b.pairs.n_complex_planes,
        "partial": b.pairs.partial,
    }
    emit(args, report)
    return 0


def cmd_choi(args):
    b, v, t = channel_inputs(args)
    choi = choi_of_translation_channel(v, t) if t is not None else choi_of_depolarizing(v)
    out = choi.to_json()
    out["trace"] = choi.trace.real
    if args.emit_spectrum:
        out["eigenvalues"] = numeric_spectrum(choi).tolist()
    emit(args, out)
    return 0


def cmd_certify(args):
    _, v, t = channel_inputs(args)
    tol = tolerance(args)
    if t is not None and np.any(t.t):
        report = certify_cp_translation(v, t, tol)
    else:
        report = certify_cp(v, tol, cross_validate=args.cross_validate)
    emit(args, report.to_json())
    return 0


def cmd_certify_t(args):
    _, v, t = channel_inputs(args, need_t=True)
    emit(args, certify_cp_translation(v, t, tolerance(args)).to_json())
    return 0


def cmd_extremals(args):
    b = select_basis(args)
    ext = extremal_vertices(b)
    out = ext.to_json()
    out["suppressed"] = [coordinates_from_vector(b, x.v).tolist() for x in ext.vertices]
    out["coordinates"] = coordinate_names(b)
    emit(args, out)
    return 0


def cmd_simplex(args):
    b = select_basis(args)
    emit(args, simplex_condition(b).to_json(b))
    return 0


def cmd_sample(args):
    b = select_basis(args)
    t = None
    if args.t:
        try:
            t = TranslationVector(b, vector_arg(args.t))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    res = sample_region(b, t, samples=args.samples, seed=args.seed, low=args.low, high=args.high,
                        tol=tolerance(args), keep_points=bool(args.csv), workers=args.workers)
    if args.csv:
        try:
            Path(args.csv).write_text(res.to_csv(), encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {args.csv}: {exc}") from None
    emit(args, res.summary())
    return 0


def cmd_figure(args):
    emit(args, figure_data(select_basis(args)))
    return 0


def cmd_change_basis(args):
    m = named_basis(args.basis, n=args.n, d=args.d)
    l = named_basis(args.to, n=args.to_n or m.n)
    u = change_of_basis_matrix(m, l)
    emit(args, {
        "from": m.label, "to": l.label,
        "unitarityError": float(np.abs(u.conj().T @ u - np.eye(len(u))).max()),
        "u": [complex_to_pairs(row) for row in u],
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcg", description="Geometry of generalized depolarizing channels")
    sub = parser.add_subparsers(dest="command", required=True)

    def basis_opts(p):
        p.add_argument("--basis", help="pauli | gellmann | hw")
        p.add_argument("--n", type=int, help="system dimension")
        p.add_argument("--d", type=int, help="number of qubits (pauli)")
        p.add_argument("--basis-file", help="basis JSON file")
        p.add_argument("--out", help="output file (default stdout)")

    def channel_opts(p):
        basis_opts(p)
        p.add_argument("--v", help="compression vector incl. v_0, e.g. '1,0.5,0.5,0.5', or a JSON file")
        p.add_argument("--t", help="translation vector incl. t_0 = 0, or a JSON file")
        p.add_argument("--channel", help="channel JSON file")
        p.add_argument("--tol", type=float, help="CP tolerance (env QCG_TOL)")

    p = sub.add_parser("basis", help="generate or validate a basis")
    p.add_argument("action", choices=["gen", "validate"])
    basis_opts(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("choi", help="Choi matrix of a channel")
    channel_opts(p)
    p.add_argument("--emit-spectrum", action="store_true")
    p.set_defaults(func=cmd_choi)

    p = sub.add_parser("certify", help="complete-positivity verdict for v")
    channel_opts(p)
    p.add_argument("--cross-validate", action="store_true", help="also run the Jacobi eigensolver")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("certify-t", help="verdict for a compress-and-translate channel")
    channel_opts(p)
    p.set_defaults(func=cmd_certify_t)

    p = sub.add_parser("extremals", help="vertices of the CP simplex")
    basis_opts(p)
    p.set_defaults(func=cmd_extremals)

    p = sub.add_parser("simplex-check", help="commutator test for a simplex region")
    basis_opts(p)
    p.set_defaults(func=cmd_simplex)

    p = sub.add_parser("sample", help="Monte Carlo CP fraction of the compression box")
    basis_opts(p)
    p.add_argument("--t", help="translation vector")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--low", type=float, default=-1.0)
    p.add_argument("--high", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", help="write labelled points to this CSV file")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("figure-data", help="plot-ready simplex geometry")
    basis_opts(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("change-basis", help="change-of-basis matrix between two named bases")
    basis_opts(p)
    p.add_argument("--to", required=True)
    p.add_argument("--to-n", type=int)
    p.set_defaults(func=cmd_change_basis)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qcg: error: {exc}", file=sys.stderr)
        return 2
    except (NotSimplexError, BasisError, ValueError) as exc:
        print(f"qcg: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
