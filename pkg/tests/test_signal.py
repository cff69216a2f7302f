"""Fourier-model signals: evaluation, calculus, projection, kernels."""

import cmath
import json
import math

import numpy as np
import pytest

from bandlim import (
    GridFunction,
    PeriodicBandSignal,
    bernstein_residual,
    default_grid_size,
    default_period,
    differentiate,
    evaluate,
    inner_product,
    kernel_derivative,
    l2_norm,
    project,
    random_signal,
    signal_from_json_dict,
    signal_to_json_dict,
    to_grid,
)
from bandlim.signal import mode_limit


def direct_eval(f, x, j=0):
    # mode-by-mode reference sum, scalar arithmetic only
    total = 0.0 + 0.0j
    for idx, c in enumerate(f.coeffs):
        omega = 2 * math.pi * (idx - f.M) / f.period_T
        total += c * (1j * omega) ** j * cmath.exp(1j * omega * x)
    return total


def test_mode_limit_closed_inclusion():
    # |omega_M| <= sigma with the boundary mode included
    assert mode_limit(40.0, math.pi) == 20
    assert mode_limit(2.0, 2 * math.pi) == 2
    assert mode_limit(1.0, 2 * math.pi) == 1
    assert mode_limit(10.0, 1.0) == 1


def test_default_geometry():
    assert default_period(math.pi) == pytest.approx(40.0, rel=1e-15)
    assert default_period(2 * math.pi) == pytest.approx(20.0, rel=1e-15)
    # 16 samples per mode, rounded up to a power of two
    assert default_grid_size(40.0, math.pi) == 1024
    n = default_grid_size(20.0, math.pi)
    assert n >= 16 * (2 * mode_limit(20.0, math.pi) + 1)
    assert n & (n - 1) == 0


def test_signal_validation():
    with pytest.raises(ValueError):
        PeriodicBandSignal(-1.0, math.pi, np.zeros(3, dtype=complex), False)
    with pytest.raises(ValueError):
        PeriodicBandSignal(40.0, math.pi, np.zeros(40, dtype=complex), False)
    f = random_signal(0, 40.0, math.pi)
    with pytest.raises(Exception):
        f.coeffs[0] = 1.0  # frozen buffer


def test_random_signal_deterministic_unit_norm():
    f = random_signal(123, 40.0, math.pi)
    g = random_signal(123, 40.0, math.pi)
    assert np.array_equal(f.coeffs, g.coeffs)
    assert l2_norm(f) == pytest.approx(1.0, rel=1e-12)
    h = random_signal(124, 40.0, math.pi)
    assert not np.array_equal(f.coeffs, h.coeffs)


def test_real_flag_hermitian_symmetry():
    f = random_signal(7, 40.0, math.pi, real_flag=True)
    assert np.allclose(f.coeffs, np.conj(f.coeffs[::-1]), atol=1e-15)
    values = to_grid(f).values
    assert np.isrealobj(values)
    for x in (0.0, 3.7, 19.2):
        assert abs(evaluate(f, x).imag) < 1e-12


def test_evaluate_against_direct_sum():
    rng = np.random.default_rng(5)
    f = random_signal(5, 40.0, math.pi)
    for x in rng.uniform(0, 40.0, size=12):
        for j in (0, 1, 2):
            ref = direct_eval(f, x, j)
            got = evaluate(f, x, j)
            assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref))
    # periodicity
    assert evaluate(f, 1.25) == pytest.approx(evaluate(f, 41.25), rel=1e-10)


def test_evaluate_vectorized_matches_scalar():
    f = random_signal(9, 40.0, math.pi)
    xs = np.linspace(0, 40, 17)
    vec = evaluate(f, xs, 1)
    assert vec.shape == xs.shape
    for x, v in zip(xs, vec):
        assert v == pytest.approx(complex(evaluate(f, float(x), 1)), rel=1e-12)


def test_differentiate_matches_finite_difference():
    f = random_signal(11, 40.0, math.pi)
    df = differentiate(f, 1)
    h = 1e-5
    for x in (0.3, 7.7, 33.0):
        fd = (evaluate(f, x + h) - evaluate(f, x - h)) / (2 * h)
        assert abs(evaluate(df, x) - fd) < 1e-6
    d3 = differentiate(f, 3)
    assert np.allclose(
        d3.coeffs, differentiate(differentiate(df, 1), 1).coeffs, rtol=1e-13
    )


def test_norm_and_inner_product_against_grid_quadrature():
    f = random_signal(2, 40.0, math.pi)
    g = random_signal(3, 40.0, math.pi)
    n = 4096
    xs = np.arange(n) * (40.0 / n)
    fv = evaluate(f, xs)
    gv = evaluate(g, xs)
    # uniform Riemann sum is exact for trigonometric polynomials
    quad_norm = math.sqrt(float(np.sum(np.abs(fv) ** 2)) * 40.0 / n)
    assert l2_norm(f) == pytest.approx(quad_norm, rel=1e-9)
    quad_ip = complex(np.sum(fv * np.conj(gv)) * 40.0 / n)
    ip = inner_product(f, g)
    assert ip == pytest.approx(quad_ip, rel=1e-9)
    assert inner_product(g, f) == pytest.approx(ip.conjugate(), rel=1e-12)
    assert inner_product(f, f).real == pytest.approx(l2_norm(f) ** 2, rel=1e-12)


def test_grid_round_trip_and_projection():
    f = random_signal(21, 40.0, math.pi)
    back = project(to_grid(f), math.pi)
    assert np.allclose(back.coeffs, f.coeffs, atol=1e-12)
    # projection is an orthogonal projection: contractive and idempotent
    rng = np.random.default_rng(0)
    noisy = GridFunction(40.0, to_grid(f).values + 0.1 * rng.standard_normal(1024))
    p = project(noisy, math.pi)
    grid_norm = math.sqrt(float(np.sum(np.abs(noisy.values) ** 2)) * 40.0 / 1024)
    assert l2_norm(p) <= grid_norm * (1 + 1e-12)
    again = project(to_grid(p), math.pi)
    assert np.allclose(again.coeffs, p.coeffs, atol=1e-12)


def test_projection_grid_too_small():
    g = GridFunction(40.0, np.zeros(64))
    with pytest.raises(ValueError, match="82"):
        project(g, math.pi)


def test_kernel_reproducing_property():
    T, sigma = 40.0, math.pi
    rng = np.random.default_rng(17)
    for trial in range(25):
        f = random_signal(trial, T, sigma)
        x0 = float(rng.uniform(0, T))
        for l in range(4):
            kd = kernel_derivative(x0, l, T, sigma)
            lhs = inner_product(f, kd)
            rhs = (-1) ** l * evaluate(f, x0, l)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_kernel_peak_value():
    T, sigma = 40.0, math.pi
    k0 = kernel_derivative(13.4, 0, T, sigma)
    m = mode_limit(T, sigma)
    assert evaluate(k0, 13.4).real == pytest.approx((2 * m + 1) / T, rel=1e-12)


def test_bernstein_residual():
    f = random_signal(31, 40.0, math.pi)
    for j in (1, 2, 5):
        assert bernstein_residual(f, j) >= -1e-12
    # the top mode saturates the inequality: omega_M = sigma exactly here
    coeffs = np.zeros(41, dtype=complex)
    coeffs[-1] = 1.0
    top = PeriodicBandSignal(40.0, math.pi, coeffs, False)
    assert bernstein_residual(top, 3) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        bernstein_residual(f, 0)
    zero = PeriodicBandSignal(40.0, math.pi, np.zeros(41, dtype=complex), False)
    with pytest.raises(ValueError):
        bernstein_residual(zero, 1)


def test_signal_arithmetic():
    f = random_signal(41, 40.0, math.pi)
    g = random_signal(42, 40.0, math.pi)
    s = f + g
    assert np.allclose(s.coeffs, f.coeffs + g.coeffs)
    d = f - g
    assert np.allclose(d.coeffs, f.coeffs - g.coeffs)
    assert np.allclose((2.5 * f).coeffs, 2.5 * f.coeffs)
    assert np.allclose((f * 2.5).coeffs, 2.5 * f.coeffs)
    other = random_signal(1, 20.0, math.pi)
    with pytest.raises(ValueError):
        f + other


def test_json_round_trip_exact():
    f = random_signal(55, 40.0, math.pi, real_flag=True)
    d = signal_to_json_dict(f)
    text = json.dumps(d)
    g = signal_from_json_dict(json.loads(text))
    assert g.period_T == f.period_T and g.sigma == f.sigma
    assert g.real_flag == f.real_flag
    assert np.array_equal(g.coeffs, f.coeffs)
