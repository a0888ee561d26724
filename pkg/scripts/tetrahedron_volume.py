"""Monte Carlo CP fraction of the compression box for simplex bases.

For the single-qubit Pauli basis the CP region is a tetrahedron of volume
8/3 inside the cube [-1, 1]^3, so the fraction should approach 1/3.
"""
import argparse
import time

from qcg import hw_basis, pauli_basis
from qcg.sampling import sample_region


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for b in (pauli_basis(1), pauli_basis(2), hw_basis(3)):
        t0 = time.perf_counter()
        res = sample_region(b, samples=args.samples, seed=args.seed, workers=args.workers)
        dt = time.perf_counter() - t0
        print(f"{b.label:28s} fraction={res.fraction:.5f} +- {res.stderr:.5f}  ({dt:.1f}s)")
    print("qubit exact value: 1/3 = 0.33333")


if __name__ == "__main__":
    main()
