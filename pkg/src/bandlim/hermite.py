"""Two-point Hermite interpolation from endpoint derivative data.

On an interval [xi, eta] the unique polynomial of degree <= 2k-1 matching
f, f', ..., f^(k-1) at both endpoints is assembled from the closed-form
cardinal basis (with h = eta - xi, s = x - xi, t = s/h):

    A_0l(x) = (1-t)^k (s^l / l!) sum_{j<=k-1-l} binom(k-1+j, j) t^j
    A_1l(x) = t^k ((s-h)^l / l!) sum_{j<=k-1-l} binom(k-1+j, j) (1-t)^j

so H = sum_l A_0l f^(l)(xi) + A_1l f^(l)(eta).  k=1 reduces to linear
interpolation, k=2 to the classical cubic Hermite basis.  Patches store
plain coefficient arrays in the shifted variable u = x - xi, which keeps
the basis well conditioned for the interval lengths this package meets
(flagged past ~10 length units).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .signal import GridFunction

__all__ = ["HermitePatch", "build_patch", "evaluate_patch", "piecewise_hermite"]

# Interval lengths far above the sampling scale degrade the power-basis
# conditioning; warn rather than fail.
_CONDITION_WARN_LENGTH = 10.0


@dataclass(frozen=True)
class HermitePatch:
    """Degree <= 2k-1 interpolant on [xi, eta] in the variable u = x - xi."""

    xi: float
    eta: float
    k: int
    poly: np.ndarray

    def __post_init__(self):
        poly = np.asarray(self.poly, dtype=np.complex128)
        poly.setflags(write=False)
        object.__setattr__(self, "poly", poly)

    @property
    def h(self):
        return self.eta - self.xi


def _shifted_power(c0, c1, n):
    """Coefficients of (c0 + c1 u)^n, low to high order."""
    out = np.zeros(n + 1)
    for i in range(n + 1):
        out[i] = math.comb(n, i) * (c0 ** (n - i)) * (c1**i)
    return out


def _basis_polys(k, h):
    """Cardinal coefficient arrays (A_0l, A_1l) for l = 0..k-1 in u = x - xi."""
    one_minus_t = np.array([1.0, -1.0 / h])
    t = np.array([0.0, 1.0 / h])
    left = []
    right = []
    for l in range(k):
        tail = np.zeros(1)
        tail_mirror = np.zeros(1)
        # truncated expansions sum_j binom(k-1+j, j) t^j and its mirror in 1-t
        for j in range(k - l):
            a = math.comb(k - 1 + j, j)
            tail = P.polyadd(tail, a * _power(t, j))
            tail_mirror = P.polyadd(tail_mirror, a * _power(one_minus_t, j))
        a0 = P.polymul(_power(one_minus_t, k), tail)
        a0 = P.polymul(a0, _shifted_power(0.0, 1.0, l) / math.factorial(l))
        a1 = P.polymul(_power(t, k), tail_mirror)
        a1 = P.polymul(a1, _shifted_power(-h, 1.0, l) / math.factorial(l))
        left.append(a0)
        right.append(a1)
    return left, right


def _power(base, n):
    """Coefficients of base(u)^n for a degree-1 base, low to high order."""
    return _shifted_power(base[0], base[1], n) if n > 0 else np.ones(1)


def build_patch(xi, eta, left, right):
    """Hermite interpolant matching derivative data at both endpoints.

    Parameters
    ----------
    xi, eta : float
        Interval endpoints, xi < eta.
    left, right : sequences of length k
        left[j] = f^(j)(xi) and right[j] = f^(j)(eta) for j = 0..k-1.

    Returns
    -------
    HermitePatch
        Coefficients of the unique degree <= 2k-1 interpolant, stored in
        the shifted variable u = x - xi.
    """
    if eta <= xi:
        raise ValueError(f"need xi < eta, got [{xi}, {eta}]")
    left = np.asarray(left, dtype=np.complex128)
    right = np.asarray(right, dtype=np.complex128)
    if left.shape != right.shape or left.ndim != 1 or len(left) == 0:
        raise ValueError("left and right must be equal-length nonempty vectors")
    k = len(left)
    h = eta - xi
    if h > _CONDITION_WARN_LENGTH:
        warnings.warn(
            f"interval length {h:.3g} exceeds {_CONDITION_WARN_LENGTH}; "
            "power-basis conditioning degrades",
            stacklevel=2,
        )
    basis_left, basis_right = _basis_polys(k, h)
    poly = np.zeros(2 * k, dtype=np.complex128)
    for l in range(k):
        poly[: len(basis_left[l])] += left[l] * basis_left[l]
        poly[: len(basis_right[l])] += right[l] * basis_right[l]
    return HermitePatch(float(xi), float(eta), k, poly)


def evaluate_patch(patch, x, j=0):
    """j-th derivative of the patch polynomial at x (scalar or array)."""
    if j < 0:
        raise ValueError(f"derivative order must be nonnegative, got {j}")
    if j >= len(patch.poly):
        coeffs = np.zeros(1, dtype=np.complex128)
    else:
        coeffs = P.polyder(patch.poly, j) if j else patch.poly
    x_arr = np.asarray(x, dtype=np.float64)
    result = P.polyval(x_arr - patch.xi, coeffs)
    if np.isscalar(x) or x_arr.ndim == 0:
        return complex(result)
    return result


def piecewise_hermite(samples, grid_N=None, which_interval=None):
    """Piecewise Hermite interpolant of a SampleSet on the dense grid.

    Each grid point x_n = n T / N is evaluated with the patch of the
    sampling interval that owns it; ownership is left-closed ([x_i,
    x_{i+1}) belongs to patch i) with the cyclic wrap interval
    [x_{last}, x_0 + T] closing the period.  Patches agree at shared
    endpoints by the interpolation conditions, so ownership only fixes
    which of two equal values is taken.

    Parameters
    ----------
    samples : SampleSet
        Points and derivative data (see sampling.take_samples).
    grid_N : int or None
        Dense grid size; when None, 16x the point count rounded up to a
        power of two (minimum 256).  Reconstruction callers pass the
        signal-module default instead.
    which_interval : callable or None
        Optional override mapping a position x to the owning interval
        index; evaluated pointwise (O(N) calls).

    Returns
    -------
    GridFunction
    """
    points = samples.points
    n_pts = len(points)
    if n_pts == 0:
        raise ValueError("sample set has no points")
    T = samples.period_T
    if grid_N is None:
        grid_N = max(256, 1 << (16 * max(n_pts, 1) - 1).bit_length())
    xs = T * np.arange(grid_N) / grid_N

    patches = []
    for i in range(n_pts):
        xi = points[i]
        if i + 1 < n_pts:
            eta = points[i + 1]
            right = samples.data[i + 1]
        else:
            eta = points[0] + T
            right = samples.data[0]
        patches.append(build_patch(xi, eta, samples.data[i], right))

    values = np.empty(grid_N, dtype=np.complex128)
    if which_interval is not None:
        for n, x in enumerate(xs):
            i = int(which_interval(x))
            x_eval = x + T if x < points[i] else x
            values[n] = evaluate_patch(patches[i], x_eval)
        return GridFunction(T, values)

    # left-closed ownership: owner(x) = last i with x_i <= x, wrap below x_0
    owners = np.searchsorted(points, xs, side="right") - 1
    for i in range(n_pts):
        mask = owners == i
        if np.any(mask):
            values[mask] = evaluate_patch(patches[i], xs[mask])
    below = owners < 0
    if np.any(below):
        values[below] = evaluate_patch(patches[n_pts - 1], xs[below] + T)
    return GridFunction(T, values)
