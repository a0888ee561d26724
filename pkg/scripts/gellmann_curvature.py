"""Curved boundary of the Gell-Mann CP region (N = 3), against the flat HW(3) faces.

Along random lines v(s) = v + s d the minimum Choi eigenvalue of a simplex
basis is piecewise linear, so its second difference vanishes except at
isolated kinks. In the Gell-Mann basis the K-block eigenvalues are not
linear in v and the second difference is generically non-zero.
"""
import numpy as np

from qcg import CompressionVector, certify_cp, gellmann_basis, gellmann_k_block, hw_basis, simplex_condition
from qcg.sampling import vectors_from_coordinates

H = 1e-3


def min_eig(b, v):
    return certify_cp(CompressionVector(b, v)).min_eigenvalue


def curved_fraction(b, rng, lines=500):
    width = len(b) - 1
    curved = 0
    for _ in range(lines):
        v = vectors_from_coordinates(b, rng.uniform(-0.5, 0.5, width))[0]
        d = vectors_from_coordinates(b, rng.normal(size=width))[0]
        d[0] = 0
        second = (min_eig(b, v + H * d) + min_eig(b, v - H * d) - 2 * min_eig(b, v)) / H ** 2
        curved += abs(second) > 1e-3
    return curved / lines


def main():
    rng = np.random.default_rng(0)
    for b in (gellmann_basis(3), hw_basis(3)):
        rep = simplex_condition(b)
        names = [b.element_name(a) for a in rep.failing_pair] if rep.failing_pair else None
        print(f"{b.label:24s} simplex={rep.is_simplex!s:5s} failing pair={names} "
              f"curved lines={curved_fraction(b, rng):.3f}")

    b = gellmann_basis(3)
    print("K-block eigenvalue sums along v = (1, s, ..., s):")
    for s in np.linspace(-0.5, 1, 7):
        v = CompressionVector(b, np.r_[1.0, np.full(8, s)])
        sums = np.round(gellmann_k_block(v).sums, 4) + 0.0
        print(f"  s={s:5.2f}  S={sums.tolist()}  cp={certify_cp(v).is_cp}")


if __name__ == "__main__":
    main()
