"""Truncated Fourier model of band-limited signals on a long-period torus.

A signal with bandlimit ``sigma`` is represented by Fourier coefficients
``c_m`` for modes ``m`` with ``|2 pi m / T| <= sigma`` (closed inclusion),
so ``f(x) = sum_m c_m exp(i 2 pi m x / T)``.  The period defaults to 20
nominal wavelengths, ``T = 20 * (2 pi / sigma)``, which makes the cyclic
sample index a faithful finite stand-in for a bi-infinite one.

Conventions fixed here and relied on everywhere else:

* norm: ``||f||^2 = T * sum |c_m|^2`` (equals the integral of |f|^2 over
  one period);
* inner product: ``<f, g> = T * sum c_m conj(d_m)``;
* differentiation is exact: mode m picks up ``(i 2 pi m / T)^j``;
* the reproducing-kernel derivative ``K_x0^(l)`` satisfies
  ``<f, K_x0^(l)> = (-1)^l f^(l)(x0)``.

Bernstein's inequality ``||f^(j)|| <= sigma^j ||f||`` holds exactly in this
model because every represented frequency obeys ``|omega_m| <= sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridFunction",
    "PeriodicBandSignal",
    "bernstein_residual",
    "default_grid_size",
    "default_period",
    "differentiate",
    "evaluate",
    "inner_product",
    "kernel_derivative",
    "l2_norm",
    "mode_limit",
    "project",
    "random_signal",
    "signal_from_json_dict",
    "signal_to_json_dict",
    "to_grid",
]


def mode_limit(T, sigma):
    """Largest mode index M with 2 pi M / T <= sigma (closed inclusion)."""
    if T <= 0.0 or sigma <= 0.0:
        raise ValueError(f"period and sigma must be positive, got T={T}, sigma={sigma}")
    # the 1e-9 nudge keeps exact boundary modes in despite float rounding
    return int(math.floor(sigma * T / (2.0 * math.pi) + 1e-9))


def default_period(sigma):
    """Default torus period: 20 nominal wavelengths, T = 40 pi / sigma."""
    return 20.0 * (2.0 * math.pi / sigma)


def default_grid_size(T, sigma):
    """Default dense grid: 16x oversampling rounded up to a power of two."""
    m = mode_limit(T, sigma)
    n = 16 * (2 * m + 1)
    return 1 << (n - 1).bit_length()


@dataclass(frozen=True)
class PeriodicBandSignal:
    """Band-limited signal as Fourier coefficients c_m, m in [-M, M].

    ``coeffs[j]`` holds c_m for m = j - M.  With real_flag set the
    coefficients are Hermitian-symmetric and pointwise values are real up
    to rounding.
    """

    period_T: float
    sigma: float
    coeffs: np.ndarray
    real_flag: bool = False

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        m = mode_limit(self.period_T, self.sigma)
        if coeffs.shape != (2 * m + 1,):
            raise ValueError(
                f"expected {2 * m + 1} coefficients for T={self.period_T}, "
                f"sigma={self.sigma}, got shape {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def M(self):
        return (len(self.coeffs) - 1) // 2

    @property
    def omegas(self):
        """Angular frequencies 2 pi m / T for m = -M .. M."""
        m = self.M
        return 2.0 * math.pi * np.arange(-m, m + 1) / self.period_T

    def _compatible(self, other):
        if (
            self.period_T != other.period_T
            or self.sigma != other.sigma
            or len(self.coeffs) != len(other.coeffs)
        ):
            raise ValueError("signals live in different model spaces")

    def __add__(self, other):
        self._compatible(other)
        return PeriodicBandSignal(
            self.period_T,
            self.sigma,
            self.coeffs + other.coeffs,
            self.real_flag and other.real_flag,
        )

    def __sub__(self, other):
        self._compatible(other)
        return PeriodicBandSignal(
            self.period_T,
            self.sigma,
            self.coeffs - other.coeffs,
            self.real_flag and other.real_flag,
        )

    def __mul__(self, scalar):
        return PeriodicBandSignal(
            self.period_T,
            self.sigma,
            self.coeffs * scalar,
            self.real_flag and float(np.imag(scalar)) == 0.0,
        )

    __rmul__ = __mul__


@dataclass(frozen=True)
class GridFunction:
    """Values on the uniform grid x_n = n T / N (dense evaluation buffer)."""

    period_T: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1 or len(values) < 2:
            raise ValueError("grid needs at least 2 points")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def N(self):
        return len(self.values)

    @property
    def xs(self):
        return self.period_T * np.arange(self.N) / self.N


def evaluate(f, x, j=0):
    """j-th derivative of f at x: sum_m (i omega_m)^j c_m e^(i omega_m x).

    ``x`` may be a scalar or an array; cost is O(M) per point.
    """
    if j < 0:
        raise ValueError(f"derivative order must be nonnegative, got {j}")
    omega = f.omegas
    weights = (1j * omega) ** j * f.coeffs
    x_arr = np.asarray(x, dtype=np.float64)
    phases = np.exp(1j * np.multiply.outer(x_arr, omega))
    result = phases @ weights
    if np.isscalar(x) or x_arr.ndim == 0:
        return complex(result)
    return result


def differentiate(f, j=1):
    """Exact spectral derivative as a new signal."""
    if j < 0:
        raise ValueError(f"derivative order must be nonnegative, got {j}")
    return PeriodicBandSignal(
        f.period_T, f.sigma, (1j * f.omegas) ** j * f.coeffs, False
    )


def l2_norm(f):
    """Parseval norm sqrt(T sum |c_m|^2) = (integral of |f|^2)^(1/2)."""
    return math.sqrt(f.period_T * float(np.sum(np.abs(f.coeffs) ** 2)))


def inner_product(f, g):
    """Model inner product T sum c_m conj(d_m)."""
    f._compatible(g)
    return f.period_T * complex(np.vdot(g.coeffs, f.coeffs))


def to_grid(f, N=None):
    """Dense evaluation of f on N uniform points via the inverse FFT."""
    if N is None:
        N = default_grid_size(f.period_T, f.sigma)
    m = f.M
    if N < 2 * m + 1:
        raise ValueError(f"grid of {N} points cannot carry {2 * m + 1} modes")
    buf = np.zeros(N, dtype=np.complex128)
    for idx in range(2 * m + 1):
        buf[(idx - m) % N] = f.coeffs[idx]
    values = np.fft.ifft(buf) * N
    if f.real_flag:
        values = values.real
    return GridFunction(f.period_T, values)


def project(g, sigma):
    """Low-pass projection of grid values onto the model space.

    Computes the DFT and keeps modes with |2 pi m / T| <= sigma.  Exact
    (to rounding) for inputs that alias no energy into the kept band,
    which requires N >= 2(2M+1).
    """
    m = mode_limit(g.period_T, sigma)
    n_min = 2 * (2 * m + 1)
    if g.N < n_min:
        raise ValueError(
            f"projection needs a grid of at least {n_min} points for "
            f"sigma={sigma}, got {g.N}"
        )
    spectrum = np.fft.fft(np.asarray(g.values, dtype=np.complex128)) / g.N
    coeffs = np.empty(2 * m + 1, dtype=np.complex128)
    for idx in range(2 * m + 1):
        coeffs[idx] = spectrum[(idx - m) % g.N]
    real_input = np.isrealobj(g.values) or float(np.max(np.abs(g.values.imag))) == 0.0
    return PeriodicBandSignal(g.period_T, sigma, coeffs, real_input)


def random_signal(seed, T, sigma, real_flag=False):
    """Unit-norm signal with i.i.d. standard complex normal coefficients.

    Uses numpy's seeded PCG64 generator; the same seed always returns the
    same signal.  With real_flag the spectrum is Hermitian-symmetrized
    (giving a real-valued signal) before normalization.
    """
    m = mode_limit(T, sigma)
    rng = np.random.default_rng(seed)
    coeffs = (
        rng.standard_normal(2 * m + 1) + 1j * rng.standard_normal(2 * m + 1)
    ) / math.sqrt(2.0)
    if real_flag:
        coeffs = 0.5 * (coeffs + np.conj(coeffs[::-1]))
        coeffs[m] = coeffs[m].real
    f = PeriodicBandSignal(T, sigma, coeffs, real_flag)
    norm = l2_norm(f)
    return PeriodicBandSignal(T, sigma, coeffs / norm, real_flag)


def kernel_derivative(x0, l, T, sigma):
    """l-th derivative of the reproducing kernel at x0.

    Coefficients (1/T) (i omega_m)^l e^(-i omega_m x0), chosen so that
    <f, K_x0^(l)> = (-1)^l f^(l)(x0) under the model inner product.  For
    l = 0 this is the periodic Dirichlet kernel with K_x0(x0) = (2M+1)/T.
    """
    if l < 0:
        raise ValueError(f"derivative order must be nonnegative, got {l}")
    m = mode_limit(T, sigma)
    omega = 2.0 * math.pi * np.arange(-m, m + 1) / T
    coeffs = (1j * omega) ** l * np.exp(-1j * omega * x0) / T
    return PeriodicBandSignal(T, sigma, coeffs, False)


def bernstein_residual(f, j):
    """Slack sigma^j ||f|| - ||f^(j)|| of Bernstein's inequality (>= 0)."""
    if j < 1:
        raise ValueError(f"derivative order must be positive, got {j}")
    norm = l2_norm(f)
    if norm == 0.0:
        raise ValueError("Bernstein residual is undefined for the zero signal")
    return f.sigma**j * norm - l2_norm(differentiate(f, j))


def signal_to_json_dict(f):
    """JSON-ready dict {period, sigma, coeffs_re, coeffs_im, real_flag}."""
    return {
        "period": f.period_T,
        "sigma": f.sigma,
        "coeffs_re": [float(c.real) for c in f.coeffs],
        "coeffs_im": [float(c.imag) for c in f.coeffs],
        "real_flag": bool(f.real_flag),
    }


def signal_from_json_dict(d):
    """Inverse of signal_to_json_dict."""
    coeffs = np.asarray(d["coeffs_re"], dtype=np.float64) + 1j * np.asarray(
        d["coeffs_im"], dtype=np.float64
    )
    return PeriodicBandSignal(
        float(d["period"]), float(d["sigma"]), coeffs, bool(d.get("real_flag", False))
    )
