import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pearcey.numerics import (Arc, ContourError, Line, Ray, SingularMatrixError,
                              circle, extrapolate_to_zero, gauss_legendre,
                              integrate_contour, laurent_coefficients, logdet,
                              solve_linear, trapezoid_circle)


def test_gauss_legendre_small_cases():
    x, w = gauss_legendre(1)
    assert x[0] == pytest.approx(0.0, abs=1e-15) and w[0] == pytest.approx(2.0)
    x, w = gauss_legendre(2)
    assert np.allclose(x, [-0.5773502691896258, 0.5773502691896258], atol=1e-15)
    assert np.allclose(w, [1.0, 1.0], atol=1e-15)


def test_gauss_legendre_monomial():
    x, w = gauss_legendre(16)
    assert abs(np.sum(w * x ** 14) - 2.0 / 15) < 1e-14


@pytest.mark.parametrize("n", [3, 17, 64, 200])
def test_gauss_legendre_exact_to_degree(n):
    x, w = gauss_legendre(n)
    assert abs(w.sum() - 2) < 1e-13
    assert np.all(np.diff(x) > 0)
    assert np.allclose(x, -x[::-1], atol=1e-14)
    for k in range(0, 2 * n, max(1, (2 * n) // 12)):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert abs(np.sum(w * x ** k) - exact) <= 1e-13 * max(1.0, exact)


def test_gauss_legendre_range():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_legendre(5000)


def test_residue_integrals():
    c = [circle(0.0, 1.0)]
    assert abs(integrate_contour(lambda t: 1 / t, c) - 2j * np.pi) < 1e-12
    assert abs(integrate_contour(lambda t: t, c)) < 1e-12


def test_gaussian_line():
    val = integrate_contour(lambda t: np.exp(-t * t), [Line(-8.0, 8.0)])
    assert abs(val - np.sqrt(np.pi)) < 1e-12


def test_ray_integral():
    # int_0^inf e^{-t} dt along a ray, and the inward orientation flips sign
    val = integrate_contour(lambda t: np.exp(-t), [Ray(0.0, 1.0)])
    assert abs(val - 1) < 1e-12
    val = integrate_contour(lambda t: np.exp(-t), [Ray(0.0, 1.0, inward=True)])
    assert abs(val + 1) < 1e-12


def test_vector_integrand():
    f = lambda t: np.vstack([1 / t, 1 / t ** 2, np.ones_like(t)])
    val = integrate_contour(f, [circle(0.0, 2.0)])
    assert np.allclose(val, [2j * np.pi, 0, 0], atol=1e-12)


def test_essential_singularity_loop():
    # exp(1/(2 t^2)) vanishes approaching 0 vertically; the loop integral of
    # t^-3 exp(x t + 1/(2t^2)) is finite and independent of the loop size
    f = lambda t: t ** -3.0 * np.exp(1.5 * t + 0.5 / t ** 2)
    a = integrate_contour(f, [Arc(-1.0, 1.0, 2 * np.pi, 0.0)], abs_scale=1e-300)
    b = integrate_contour(f, [Arc(-0.6, 0.6, 2 * np.pi, 0.0)], abs_scale=1e-300)
    assert abs(a - b) < 1e-11 * abs(a)


def test_budget_error_carries_estimate():
    f = lambda t: np.exp(40j * t)
    with pytest.raises(ContourError) as exc:
        integrate_contour(f, [Line(0.0, 50.0)], tol=1e-14, init_panels=1, max_panels=4)
    assert exc.value.estimate is not None and exc.value.error > 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=5),
       st.floats(0.2, 3.0))
def test_polynomial_closed_contour_vanishes(coeffs, radius):
    f = lambda t: np.polyval(coeffs, t)
    val = integrate_contour(f, [circle(0.3, radius)], tol=1e-12)
    scale = sum(abs(c) for c in coeffs) * (1 + radius) ** len(coeffs) * radius
    assert abs(val) <= 1e-11 * scale


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 0.95))
def test_additivity_under_splitting(u):
    f = lambda t: np.exp(np.sin(3 * t)) / (t + 2.5)
    whole = integrate_contour(f, [Line(-1.0, 1.0)], tol=1e-12)
    m = -1 + 2 * u
    parts = integrate_contour(f, [Line(-1.0, m), Line(m, 1.0)], tol=1e-12)
    assert abs(whole - parts) <= 2e-12 * max(1, abs(whole))


def _cofactor_det(A):
    n = A.shape[0]
    if n == 1:
        return A[0, 0]
    return sum((-1) ** j * A[0, j] * _cofactor_det(np.delete(A[1:], j, axis=1)) for j in range(n))


def test_logdet_basic():
    assert logdet(np.eye(5)) == 0
    assert abs(logdet(np.diag([2.0, 3.0])) - np.log(6)) < 1e-15


def test_logdet_cofactor_oracle():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    ref = _cofactor_det(A)
    got = np.exp(logdet(A))
    assert abs(got - ref) < 1e-10 * abs(ref)


def test_logdet_real_symmetric_has_no_phase():
    rng = np.random.default_rng(3)
    B = rng.normal(size=(8, 8))
    A = B @ B.T + 8 * np.eye(8)
    assert abs(logdet(A).imag) <= 1e-10


def test_logdet_singular():
    with pytest.raises(SingularMatrixError):
        logdet(np.array([[1.0, 2.0], [2.0, 4.0]]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_logdet_multiplicative(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    B = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    d = logdet(A @ B) - logdet(A) - logdet(B)
    k = np.round(d.imag / (2 * np.pi))
    assert abs(d - 2j * np.pi * k) < 1e-9


def test_solve_linear_cases():
    B = np.arange(6.0).reshape(3, 2)
    assert np.allclose(solve_linear(np.eye(3), B), B)
    assert np.allclose(solve_linear(np.diag([2.0, 4.0]), np.eye(2)), np.diag([0.5, 0.25]))


def test_solve_linear_adjugate_oracle():
    rng = np.random.default_rng(11)
    M = rng.normal(size=(3, 3))
    b = rng.normal(size=3)
    adj = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    det = M[0] @ adj[:, 0]
    ref = adj @ b / det
    x = solve_linear(M, b)
    assert np.allclose(x, ref, rtol=1e-11, atol=1e-11)
    assert np.linalg.norm(M @ x - b) <= 1e-11 * np.linalg.norm(b)


def test_solve_linear_singular():
    with pytest.raises(SingularMatrixError):
        solve_linear(np.zeros((2, 2)), np.ones(2))


def test_extrapolation_models():
    h = [0.1, 0.05, 0.025]
    assert abs(extrapolate_to_zero(h, [1 + d for d in h], order=1) - 1) < 1e-12
    # a square-root model is linear in sqrt(h)
    q = np.sqrt(h)
    assert abs(extrapolate_to_zero(q, [2 + 3 * v for v in q], order=1) - 2) < 1e-10


def test_trapezoid_and_laurent():
    t, w = trapezoid_circle(0.0, 1.0, 64)
    assert abs(np.sum(w / t) - 2j * np.pi) < 1e-13
    co = laurent_coefficients(lambda z: 3 / z + 2 + 5 * z ** 2, 0.0, 0.5, -2, 3)
    assert abs(co[-1] - 3) < 1e-13 and abs(co[0] - 2) < 1e-13
    assert abs(co[2] - 5) < 1e-12 and abs(co[1]) < 1e-13 and abs(co[-2]) < 1e-13
