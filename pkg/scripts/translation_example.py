"""Single-qubit Pauli channel with translation t = (0, 0, 0, t_z).

Compares the Choi spectrum with the 2x2-block closed form
  (1 +- v_z)/2 +- sqrt((v_x +- v_y)^2 + t_z^2)/2
and reports how the CP volume shrinks as t_z grows.
"""
import argparse

import numpy as np

from qcg import CompressionVector, TranslationVector, choi_of_translation_channel, pauli_basis
from qcg.geometry import qubit_translation_spectrum
from qcg.linalg import eigenvalues
from qcg.sampling import sample_region


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    b = pauli_basis(1)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(100):
        vx, vy, vz, tz = rng.uniform(-1, 1, 4)
        j = choi_of_translation_channel(CompressionVector(b, [1, vx, vy, vz]), TranslationVector(b, [0, 0, 0, tz]))
        worst = max(worst, np.abs(np.sort(eigenvalues(j.j)) - np.sort(qubit_translation_spectrum(vx, vy, vz, tz))).max())
    print(f"closed form vs eigensolver, 100 draws: max dev {worst:.2e}")

    for tz in (0.0, 0.25, 0.5, 0.75, 0.99):
        t = TranslationVector(b, [0, 0, 0, tz])
        res = sample_region(b, t, samples=args.samples, seed=args.seed)
        print(f"t_z={tz:4.2f}  CP fraction {res.fraction:.4f} +- {res.stderr:.4f}")


if __name__ == "__main__":
    main()
