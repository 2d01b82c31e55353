import math

import numpy as np
import pytest

import schwarzspec as ss


def test_poly_roots_quadratic():
    roots = sorted(ss.poly_roots([-4, 0, 1]), key=lambda z: z.real)
    assert abs(roots[0] + 2) < 1e-12 and abs(roots[1] - 2) < 1e-12


def test_charpoly_matches_determinant():
    a, b = 0.3 + 0.4j, -0.2 + 0.1j
    T = ss.toeplitz_matrix(a, b, 4)
    z = 0.7 - 0.2j
    value, _ = ss.charpoly_eval(a, b, 4, z)
    assert abs(value - np.linalg.det(z * np.eye(8) - T)) <= 1e-12 * abs(value)
    assert abs(ss.lu_det(z * np.eye(8) - T) - value) <= 1e-12 * abs(value)


def test_spectrum_against_numpy():
    p = ss.SchwarzParams(k=30, sigma=5, delta=0.1, L=1)
    a, b = ss.coefficients_1d(p)
    rep = ss.spectrum(a, b, 19)
    ref = np.linalg.eigvals(ss.iteration_matrix(a, b, 20))
    assert rep.eigenvalues.shape == (38,)
    assert abs(rep.spectral_radius - np.abs(ref).max()) < 1e-8
    assert rep.spectral_radius <= ss.r1d_bound(a, b) + 1e-6
    assert rep.max_distance < 0.05


def test_criteria_and_modes():
    p = ss.SchwarzParams(k=30, sigma=0.1, delta=0.1, L=1)
    cv = ss.criteria(p)
    assert cv.g_plus > 0 and cv.g_minus > 0 and cv.g > 0
    assert cv.r1d_bound < 1
    weak = ss.sup_convergence_factor(p, 1.0)
    strong = ss.sup_convergence_factor(ss.SchwarzParams(k=30, sigma=1, delta=0.1, L=1), 1.0)
    assert weak.sup_factor >= 1 > strong.sup_factor
    assert all(r.factor < 1 for r in weak.per_mode if r.mode.evanescent)


def test_nilpotency_and_iteration():
    assert ss.nilpotency_check(30, 0.1, 1, 8) <= 1e-8
    a, b = ss.coefficients_1d(ss.SchwarzParams(k=30, sigma=5, delta=0.1, L=1))
    norms, rate = ss.iterate(a, b, 20, 150, seed=2)
    assert len(norms) == 151
    assert rate <= 1.05 * ss.spectrum(a, b, 19).spectral_radius


def test_maxwell_identity():
    assert ss.maxwell_reduction_residual(4.0, 0.5, math.pi, 0.3 + 0.1j, -0.2j, 0.1) <= 1e-10


def test_discrete_solve():
    rep = ss.solve_oras(10.0, 1.0, 3, ss.BoundaryCase.free_space)
    assert rep["converged"]
    assert rep["residuals"][-1] <= 1e-6


def test_errors():
    with pytest.raises(ValueError):
        ss.SchwarzParams(k=-1, sigma=1, delta=0.1, L=1)
    with pytest.raises(ss.RootFindError):
        ss.poly_roots([1, 0, 0, 0, 0, 0, 1], max_iter=1)


def test_config_round_trip(tmp_path):
    text = "experiment = nilpotency\nk = 30\ndelta = 0.1\nL = 1\nN_list = 3, 8\n"
    assert ss.validate_config(text) == []
    assert "sigma must be >= 0" in ss.validate_config(text + "sigma = -1\n")
    out = ss.run_config(text, tmp_path)
    assert out["exit_code"] == 0
    assert (tmp_path / "nilpotency.csv").read_text().startswith("N,relative_norm\n")
    assert "discrete-scan" in ss.list_experiments()


def test_zeta():
    z = ss.zeta_1d(30, 0.1)
    assert abs(z * z - (3j - 900)) < 1e-10
    assert ss.zeta_1d(1, 0) == 1j
