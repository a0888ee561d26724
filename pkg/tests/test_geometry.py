import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import lapack_spectrum, multiset_close, poly_sums, random_hermitian, random_t, random_v
from qcg.basis import OperatorBasis, gellmann_basis, gellmann_index, hw_basis, pauli_basis
from qcg.channel import CompressionVector, TranslationVector, choi_of_conjugation, choi_of_depolarizing
from qcg.geometry import (
    NotSimplexError,
    certify_cp,
    certify_cp_translation,
    extremal_vertices,
    f_exponent,
    g_exponent,
    gellmann_k_block,
    gellmann_pm_lambdas,
    gellmann_pm_vector,
    hw_lambdas,
    linear_spectrum_matrix,
    pauli_lambdas,
    phase_table,
    qubit_translation_spectrum,
    sign_criterion,
    simplex_condition,
    unitary_basis_lambdas,
    CpReport,
)
from qcg.linalg import charpoly_coeffs


def cv(b, v):
    return CompressionVector(b, v)


def e0(b):
    x = np.zeros(len(b))
    x[0] = 1
    return cv(b, x)


# --- f and g ------------------------------------------------------------------

def test_f_examples():
    assert all(f_exponent(0, n, m) == 0 for n in (0, 1) for m in (0, 1))
    assert f_exponent(1, 0, 1) == 1
    assert f_exponent(2, 1, 1) == 0


def test_g_table_and_closed_form():
    ones = {(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)}
    for a, b in itertools.product(range(4), repeat=2):
        assert g_exponent(a, b) == (1 if (a, b) in ones else 0)


def test_g_is_conjugation_sign():
    p = pauli_basis(1).elements
    for a, b in itertools.product(range(4), repeat=2):
        assert np.allclose(p[b] @ p[a] @ p[b], (-1) ** g_exponent(a, b) * p[a])


# --- closed-form spectra ----------------------------------------------------

def bell(n, m):
    psi = np.zeros(4)
    psi[n] = 1  # |0, n>
    psi[2 + (1 - n)] = (-1) ** m  # |1, 1-n>
    return psi / np.sqrt(2)


def test_pauli_qubit_bell_eigenvectors(rng):
    b = pauli_basis(1)
    for _ in range(10):
        vx, vy, vz = rng.uniform(-1, 1, 3)
        v = cv(b, [1, vx, vy, vz])
        lam = pauli_lambdas(v)
        j = choi_of_depolarizing(v).j
        for n, m in itertools.product((0, 1), repeat=2):
            want = (1 + (-1) ** m * vx + (-1) ** (n + m) * vy + (-1) ** n * vz) / 2
            assert np.isclose(lam[((n,), (m,))], want)
            assert np.allclose(j @ bell(n, m), want * bell(n, m))


def test_pauli_lambda_examples():
    lam = pauli_lambdas(cv(pauli_basis(1), np.ones(4)))
    assert lam[((0,), (0,))] == 2 and sorted(lam.values()) == [0, 0, 0, 2]
    for d in (1, 2, 3):
        assert np.allclose(list(pauli_lambdas(e0(pauli_basis(d))).values()), 1 / 2 ** d)


def test_pauli_lambdas_reject_complex():
    b = pauli_basis(1)
    with pytest.raises(ValueError):
        pauli_lambdas(CompressionVector(b, [1, 0.5j, 0, 0], validate=False))


def test_hw_lambda_examples():
    b = hw_basis(3)
    lam = hw_lambdas(cv(b, np.ones(9)))
    assert np.isclose(lam[(0, 0)], 3)
    assert np.allclose([x for k, x in lam.items() if k != (0, 0)], 0)
    assert np.allclose(list(hw_lambdas(e0(b)).values()), 1 / 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_hw_extremal_peak_location(n):
    omega = np.exp(2j * np.pi / n)
    b = hw_basis(n)
    for j, k in itertools.product(range(n), repeat=2):
        v = [omega ** (l * k - m * j) for l in range(n) for m in range(n)]
        lam = hw_lambdas(cv(b, v))
        assert np.isclose(lam[((-j) % n, (-k) % n)], n)
        assert np.isclose(sum(abs(x) for x in lam.values()), n)


def test_hw_lambdas_reject_unpaired():
    b = hw_basis(3)
    v = np.ones(9, dtype=complex)
    v[1] = 0.5j
    with pytest.raises(ValueError):
        hw_lambdas(CompressionVector(b, v, validate=False))


@pytest.mark.parametrize("make", [lambda: pauli_basis(1), lambda: pauli_basis(2), lambda: hw_basis(3),
                                  lambda: hw_basis(4), lambda: hw_basis(5)])
def test_analytic_matches_numeric(make, rng):
    b = make()
    lam_matrix = linear_spectrum_matrix(b)
    for _ in range(20):
        v = cv(b, random_v(b, rng))
        analytic = (lam_matrix @ v.v).real
        assert multiset_close(analytic, lapack_spectrum(choi_of_depolarizing(v).j), 1e-9)


@pytest.mark.parametrize("make,fn", [(lambda: hw_basis(3), hw_lambdas), (lambda: hw_basis(4), hw_lambdas),
                                     (lambda: pauli_basis(1), pauli_lambdas), (lambda: pauli_basis(2), pauli_lambdas)])
def test_unitary_formula_matches_specialized(make, fn, rng):
    b = make()
    generic = OperatorBasis(b.n, b.elements)  # strip the kind so no shortcut applies
    for _ in range(10):
        x = random_v(b, rng)
        assert multiset_close(unitary_basis_lambdas(cv(generic, x)), list(fn(cv(b, x)).values()), 1e-10)
        assert certify_cp(cv(generic, x)).method == "analytic-unitary"


def test_unitary_lambdas_vertex_peak():
    b = hw_basis(3)
    th = phase_table(b)
    for a in range(9):
        lam = unitary_basis_lambdas(cv(b, np.exp(1j * th[a])), th)
        assert np.isclose(lam[a], 3)


def test_unitary_lambdas_reject_non_simplex():
    with pytest.raises(NotSimplexError):
        unitary_basis_lambdas(e0(gellmann_basis(3)))


# --- simplex criterion --------------------------------------------------------

@pytest.mark.parametrize("make", [lambda: pauli_basis(1), lambda: pauli_basis(2), lambda: hw_basis(2),
                                  lambda: hw_basis(3), lambda: hw_basis(4), lambda: hw_basis(5),
                                  lambda: gellmann_basis(2)])
def test_simplex_true(make):
    rep = simplex_condition(make())
    assert rep.is_simplex and rep.failing_pair is None
    assert rep.max_commutator <= 1e-10


@pytest.mark.parametrize("n", [3, 4])
def test_simplex_false_gellmann(n):
    b = gellmann_basis(n)
    rep = simplex_condition(b)
    assert not rep.is_simplex
    if n == 3:
        assert rep.failing_pair == (gellmann_index(0, 1, 3), gellmann_index(0, 2, 3))
        assert rep.to_json(b)["failingPairNames"] == ["X01", "X02"]
    a, c = rep.failing_pair
    sq = b.tensor_squares
    assert np.abs(sq[a] @ sq[c] - sq[c] @ sq[a]).max() > 1e-10


def test_phase_table_hw_matches_omega_exponent():
    n = 3
    b = hw_basis(n)
    th = phase_table(b)
    for a, c in itertools.product(range(9), repeat=2):
        j, k = divmod(a, n)
        l, m = divmod(c, n)
        # Z^k X^l = w^{-kl} X^l Z^k, so M_a M_c = w^{jm - kl} M_c M_a
        assert np.isclose(np.exp(1j * th[a, c]), np.exp(2j * np.pi * (j * m - k * l) / n))


# --- extremals ----------------------------------------------------------------

def test_qubit_tetrahedron():
    ex = extremal_vertices(pauli_basis(1))
    assert ex.suppressed().real.tolist() == [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]


@pytest.mark.parametrize("make", [lambda: pauli_basis(1), lambda: pauli_basis(2), lambda: hw_basis(2),
                                  lambda: hw_basis(3), lambda: hw_basis(4)])
def test_extremals_are_conjugations_with_rank_one_choi(make):
    b = make()
    ex = extremal_vertices(b)
    size = len(b)
    assert len(ex.vertices) == size
    pts = np.array([x.v for x in ex.vertices])
    dists = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2) + np.eye(size)
    assert dists.min() > 0.5
    for i, x in enumerate(ex.vertices):
        jc = choi_of_conjugation(ex.conjugator(i)).j
        assert np.abs(choi_of_depolarizing(x).j - jc).max() <= 1e-10
        spec = lapack_spectrum(jc)
        assert abs(spec[0] - b.n) <= 1e-9 and np.abs(spec[1:]).max() <= 1e-9


def test_extremals_generic_unitary_basis():
    b = hw_basis(3)
    ex = extremal_vertices(OperatorBasis(3, b.elements))
    assert ex.channels[0][1] == "M rho M^dag"
    for i, x in enumerate(ex.vertices):
        spec = lapack_spectrum(choi_of_depolarizing(x).j)
        assert abs(spec[0] - 3) <= 1e-9 and np.abs(spec[1:]).max() <= 1e-9
        assert np.allclose(choi_of_depolarizing(x).j, choi_of_conjugation(ex.conjugator(i)).j)


def test_extremals_reject_gellmann():
    with pytest.raises(NotSimplexError):
        extremal_vertices(gellmann_basis(3))


def test_pauli_vertex_formula():
    b = pauli_basis(2)
    ex = extremal_vertices(b)
    for beta, x in enumerate(ex.vertices):
        m = b[beta]
        for a in range(16):
            # M_b M_a M_b = v_a M_a for Pauli strings
            assert np.allclose(m @ b[a] @ m, x.v[a] * b[a])


# --- Gell-Mann -------------------------------------------------------------------

def test_gellmann_pm_examples():
    b = gellmann_basis(3)
    assert np.allclose(list(gellmann_pm_lambdas(e0(b)).values()), 1 / 3)
    ident = gellmann_pm_lambdas(cv(b, np.ones(9)))
    assert len(ident) == 6
    assert np.allclose(list(ident.values()), 0, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gellmann_pm_are_eigenvectors(n, rng):
    b = gellmann_basis(n)
    for _ in range(10):
        v = cv(b, random_v(b, rng))
        j = choi_of_depolarizing(v).j
        for (jj, kk, s), lam in gellmann_pm_lambdas(v).items():
            vec = gellmann_pm_vector(n, jj, kk, 1 if s == "+" else -1)
            assert abs(vec @ j @ vec - lam) <= 1e-9  # Rayleigh quotient
            assert np.abs(j @ vec - lam * vec).max() <= 1e-9


def test_k_block_examples():
    b = gellmann_basis(3)
    kb = gellmann_k_block(e0(b))
    assert np.allclose(kb.k, np.eye(3) / 3)
    assert np.allclose(kb.sums, [1, 1, 1 / 3, 1 / 27])
    kb = gellmann_k_block(cv(b, np.ones(9)))
    assert np.allclose(lapack_spectrum(kb.k), [3, 0, 0])


@pytest.mark.parametrize("n", [3, 4])
def test_block_completeness(n, rng):
    b = gellmann_basis(n)
    for _ in range(20):
        v = cv(b, random_v(b, rng))
        kb = gellmann_k_block(v)
        assert abs(kb.sums[1] - np.trace(kb.k).real) <= 1e-10
        union = list(gellmann_pm_lambdas(v).values()) + list(lapack_spectrum(kb.k))
        assert multiset_close(union, lapack_spectrum(choi_of_depolarizing(v).j), 1e-9)


def test_k_block_rejects_foreign_choi(rng):
    b = gellmann_basis(3)
    u = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))[0]
    foreign = choi_of_conjugation(u)
    with pytest.raises(ValueError):
        gellmann_k_block(e0(b), foreign)


def test_sign_criterion_examples():
    assert sign_criterion([1, 1, 1 / 3, 1 / 27])
    assert not sign_criterion([1, 4, 1, -6])
    assert np.allclose(charpoly_coeffs(np.diag([2.0, -1, 3])), [1, 4, 1, -6])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_sign_criterion_matches_min_eigenvalue(dim, seed):
    rng = np.random.default_rng(seed)
    # keep eigenvalues away from the +-tau band so the two tests cannot straddle it
    spectrum = rng.uniform(0.05, 2, dim) * rng.choice([-1, 1, 1], dim)
    h = random_hermitian(rng, dim, spectrum)
    s = charpoly_coeffs(h)
    assert np.allclose(s, poly_sums(spectrum), atol=1e-8)
    assert sign_criterion(s) == (spectrum.min() >= -1e-9)


@pytest.mark.parametrize("n", [3, 4])
def test_gellmann_has_curved_side(n, rng):
    b = gellmann_basis(n)
    found = False
    for _ in range(200):
        v1, v2 = random_v(b, rng), random_v(b, rng)
        lo = [lapack_spectrum(choi_of_depolarizing(cv(b, x)).j)[-1] for x in (v1, v2, (v1 + v2) / 2)]
        if abs(lo[2] - (lo[0] + lo[1]) / 2) > 1e-9:
            found = True
            break
    assert found


@pytest.mark.parametrize("make", [lambda: pauli_basis(2), lambda: hw_basis(3)])
def test_simplex_min_eigenvalue_is_concave_piecewise_linear(make, rng):
    # each eigenvalue is linear in v: superposition holds exactly
    b = make()
    lam_matrix = linear_spectrum_matrix(b)
    for _ in range(20):
        v1, v2 = random_v(b, rng), random_v(b, rng)
        mid = (v1 + v2) / 2
        num = lambda x: np.sort(lapack_spectrum(choi_of_depolarizing(cv(b, x)).j))
        lin = (lam_matrix @ v1 + lam_matrix @ v2).real / 2
        assert multiset_close(lin, num(mid), 1e-9)


# --- certification -------------------------------------------------------------

def test_certify_examples():
    b = pauli_basis(1)
    rep = certify_cp(cv(b, [1, 0.5, 0.5, 0.5]))
    assert rep.is_cp and np.isclose(rep.min_eigenvalue, 0.25)
    rep = certify_cp(cv(b, [1, -1, -1, -1]))
    assert not rep.is_cp and np.isclose(rep.min_eigenvalue, -1)
    assert rep.method == "analytic-pauli"


def test_certify_dispatch(rng):
    assert certify_cp(e0(hw_basis(3))).method == "analytic-hw"
    assert certify_cp(e0(gellmann_basis(3))).method == "gellmann-hybrid"
    # a rotated hermitian basis that is neither named nor phase-commuting
    g = gellmann_basis(3)
    q = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    rotated = OperatorBasis(3, np.array([q @ m @ q.T for m in g.elements]))
    rep = certify_cp(e0(rotated), cross_validate=True)
    assert rep.method == "numeric" and rep.cross_check is None


@pytest.mark.parametrize("make", [lambda: pauli_basis(1), lambda: hw_basis(3), lambda: gellmann_basis(3),
                                  lambda: gellmann_basis(4)])
def test_certify_cross_validation(make, rng):
    b = make()
    for _ in range(10):
        rep = certify_cp(cv(b, random_v(b, rng)), cross_validate=True)
        assert rep.cross_check <= 1e-9
        assert rep.eigenvalues == sorted(rep.eigenvalues, reverse=True)


def test_certify_vertices_cp():
    for b in (pauli_basis(2), hw_basis(4)):
        for x in extremal_vertices(b).vertices:
            rep = certify_cp(x)
            assert rep.is_cp and abs(rep.eigenvalues[0] - b.n) <= 1e-9


def test_report_json_round_trip():
    rep = certify_cp(cv(gellmann_basis(3), np.ones(9)), cross_validate=True)
    obj = rep.to_json()
    assert set(obj) >= {"verdict", "method", "minEigenvalue", "eigenvalues", "tolerance"}
    back = CpReport.from_json(obj)
    assert back == rep


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["pauli1", "gm3", "hw3"]), st.integers(0, 2 ** 32 - 1), st.floats(0.5, 1.5))
def test_cp_implies_box(name, seed, scale):
    b = {"pauli1": lambda: pauli_basis(1), "gm3": lambda: gellmann_basis(3), "hw3": lambda: hw_basis(3)}[name]()
    rng = np.random.default_rng(seed)
    v = cv(b, random_v(b, rng, scale))
    if certify_cp(v).is_cp:
        assert np.abs(v.v).max() <= 1 + 1e-9


# --- translation -----------------------------------------------------------------

def test_translation_zero_agrees_with_certify(any_basis, rng):
    b = any_basis
    v = cv(b, random_v(b, rng))
    a = certify_cp_translation(v, TranslationVector.zero(b))
    c = certify_cp(v)
    assert a.verdict == c.verdict and a.method == "numeric"
    assert np.allclose(a.eigenvalues, c.eigenvalues, atol=1e-9)


def test_translation_full_shift():
    b = pauli_basis(1)
    rep = certify_cp_translation(e0(b), TranslationVector(b, [0, 0, 0, 1]))
    assert rep.is_cp and np.allclose(rep.eigenvalues, [1, 1, 0, 0], atol=1e-12)


def _blocks_oracle(vx, vy, vz, tz):
    # J restricted to {|00>, |11>} and {|01>, |10>}
    a = 0.5 * np.array([[1 + vz + tz, vx + vy], [vx + vy, 1 + vz - tz]])
    c = 0.5 * np.array([[1 - vz + tz, vx - vy], [vx - vy, 1 - vz - tz]])
    return np.concatenate([np.linalg.eigvalsh(a), np.linalg.eigvalsh(c)])


def test_translation_closed_form(rng):
    b = pauli_basis(1)
    for _ in range(50):
        vx, vy, vz, tz = rng.uniform(-1, 1, 4)
        rep = certify_cp_translation(cv(b, [1, vx, vy, vz]), TranslationVector(b, [0, 0, 0, tz]))
        closed = qubit_translation_spectrum(vx, vy, vz, tz)
        assert multiset_close(closed, rep.eigenvalues, 1e-9)
        assert multiset_close(closed, _blocks_oracle(vx, vy, vz, tz), 1e-12)


def test_translation_spec_example():
    b = pauli_basis(1)
    rep = certify_cp_translation(cv(b, [1, 0.9, 0.9, 0.9]), TranslationVector(b, [0, 0, 0, 0.3]))
    closed = qubit_translation_spectrum(0.9, 0.9, 0.9, 0.3)
    assert rep.is_cp == bool(closed.min() >= -1e-9)
    assert not rep.is_cp  # (1 - 0.9)/2 - 0.3/2 < 0


def test_translation_printed_radical_is_off():
    # the variant without 1/2 on the radical disagrees with the eigensolver
    vx, vy, vz, tz = 0.3, 0.2, 0.1, 0.4
    printed = (1 + vz) / 2 + np.hypot(vx + vy, tz)
    top = max(_blocks_oracle(vx, vy, vz, tz))
    assert abs(top - printed) > 0.1
    assert abs(top - qubit_translation_spectrum(vx, vy, vz, tz).max()) <= 1e-12


def test_translation_shrinks_region(rng):
    b = pauli_basis(1)
    hits0 = hits1 = 0
    for _ in range(2000):
        x = random_v(b, rng)
        hits0 += certify_cp(cv(b, x)).is_cp
        hits1 += certify_cp_translation(cv(b, x), TranslationVector(b, [0, 0, 0, 0.5])).is_cp
    assert hits1 < hits0


def test_translation_hermitian_hw(rng):
    b = hw_basis(3)
    rep = certify_cp_translation(cv(b, random_v(b, rng)), TranslationVector(b, random_t(b, rng, 0.2)))
    assert len(rep.eigenvalues) == 9
