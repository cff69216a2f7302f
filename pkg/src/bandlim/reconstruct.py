"""Approximation operator, iterative reconstruction, and the frame algorithm.

The approximation operator is A f = P(piecewise Hermite interpolant of f's
derivative samples), P the low-pass projection.  When the maximum sampling
gap delta satisfies delta < L = c_k^(1/(2k))/sigma, A is a contraction on
the model space with per-step ratio (delta sigma)^(2k)/c_k, and

    f_0 = A f,   f_{n+1} = f_n + A(f - f_n)

converges to f with ||f - f_n|| <= ((delta sigma)^(2k)/c_k)^(n+1) ||f||.
A(f - f_n) is computed by linearity as A f - A f_n: A f is fixed by the
input samples, and f_n is a known model signal that can be resampled.

The frame route uses S_k f = sum_{i,l} (-1)^l f^(l)(x_i)(c_{i,l} +
c_{i-1,l}) K_{x_i}^(l) and the relaxed iteration f_{n+1} = f_n + rho
S_k(f - f_n) with rho = 2/(A+B); its error after n steps is bounded by
((B-A)/(B+A))^n.  Analytic bounds A, B come from the theory; empirical
bounds are the extreme eigenvalues of the quadratic form f ->
sum |f^(l)(x_i)|^2 (c_{i,l}+c_{i-1,l}) represented in the Fourier basis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import _ln_ck, default_cr_source, gap_thresholds
from .constants import frame_bounds as analytic_frame_bounds
from .errors import DivergenceError, GapConditionError, NotAFrameError
from .hermite import piecewise_hermite
from .sampling import take_samples, weights
from .signal import (
    PeriodicBandSignal,
    default_grid_size,
    l2_norm,
    mode_limit,
    project,
)

__all__ = [
    "EmpiricalFrameBounds",
    "ReconstructionReport",
    "approx_operator",
    "empirical_frame_bounds",
    "error_bound",
    "frame_operator",
    "iterate_frame",
    "iterate_hermite",
    "report_to_json_dict",
]

# consecutive non-decreasing update norms before declaring divergence
_DIVERGENCE_PATIENCE = 5


@dataclass(frozen=True)
class ReconstructionReport:
    """Per-iteration errors, predicted bounds, and the convergence verdict.

    ``errors[n]`` is ||f - f_n||/||f|| when the true signal was available
    (experiment mode), otherwise the relative update norms.
    ``bound_curve[n]`` is contraction_predicted^(n+1) for the Hermite
    method and contraction_predicted^n for the frame method, matching the
    respective error estimates.
    """

    method: str
    k: int
    sigma: float
    delta: float
    T: float
    contraction_predicted: float
    rho: float
    errors: tuple
    bound_curve: tuple
    iterations: int
    converged: bool
    residual_final: float


@dataclass(frozen=True)
class EmpiricalFrameBounds:
    """Sharp frame bounds of the sampling quadratic form at these points."""

    A_emp: float
    B_emp: float


def report_to_json_dict(report):
    """JSON-ready dict; rho is omitted for the Hermite method."""
    out = {
        "method": report.method,
        "k": report.k,
        "sigma": report.sigma,
        "delta": report.delta,
        "T": report.T,
        "contraction_predicted": report.contraction_predicted,
        "errors": list(report.errors),
        "bound_curve": list(report.bound_curve),
        "iterations": report.iterations,
        "converged": report.converged,
        "residual_final": report.residual_final,
    }
    if report.rho is not None:
        out["rho"] = report.rho
    return out


def error_bound(k, delta, sigma, n=0, cr_source=None):
    """Predicted relative error ((delta sigma)^(2k)/c_k)^(n+1).

    Raises GapConditionError when delta sigma >= c_k^(1/(2k)), where the
    bound stops being a contraction.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if delta <= 0.0 or sigma <= 0.0:
        raise ValueError(f"delta and sigma must be positive, got {delta}, {sigma}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    source = default_cr_source(k) if cr_source is None else cr_source
    ln_ck = _ln_ck(k, source)
    ln_ratio = 2.0 * k * math.log(delta * sigma) - ln_ck
    if ln_ratio >= 0.0:
        raise GapConditionError(delta, math.exp(ln_ck / (2.0 * k)) / sigma, k, sigma)
    return math.exp((n + 1) * ln_ratio)


def approx_operator(samples, sigma, grid_N=None):
    """A f: piecewise Hermite interpolation of the samples, then projection.

    Defined for any partition; warns (without failing) when the maximum
    gap violates the contraction threshold, since the operator is still
    well defined there.
    """
    if grid_N is None:
        grid_N = default_grid_size(samples.period_T, sigma)
    thresholds = gap_thresholds(samples.k, sigma)
    if samples.delta >= thresholds.L_hermite:
        warnings.warn(
            f"maximum gap {samples.delta:.6g} >= threshold "
            f"{thresholds.L_hermite:.6g}; the operator need not contract",
            stacklevel=2,
        )
    dense = piecewise_hermite(samples, grid_N)
    return project(dense, sigma)


def _zero_like(T, sigma):
    m = mode_limit(T, sigma)
    return PeriodicBandSignal(T, sigma, np.zeros(2 * m + 1, dtype=np.complex128))


def iterate_hermite(samples, sigma, n_max=30, tol=1e-10, reference=None, grid_N=None):
    """Hermite-operator iteration f_0 = A f, f_{n+1} = f_n + (A f - A f_n).

    Parameters
    ----------
    samples : SampleSet
        Derivative samples of the unknown signal; samples.delta must
        satisfy the strict gap condition delta < L_hermite.
    sigma : float
        Bandlimit.
    n_max : int
        Iteration cap.
    tol : float
        Relative update-norm stopping threshold (keep > 0; at 0 the
        update norms bottom out at rounding level and trip the
        divergence detector).
    reference : PeriodicBandSignal or None
        When given (experiment mode), per-iteration errors are
        ||reference - f_n||/||reference||; otherwise the report carries
        relative update norms.
    grid_N : int or None
        Dense grid size for the operator; defaults per the signal module.

    Returns
    -------
    (PeriodicBandSignal, ReconstructionReport)

    Raises
    ------
    GapConditionError
        If samples.delta >= L_hermite.
    DivergenceError
        After 5 consecutive non-decreasing update norms.
    """
    k = samples.k
    thresholds = gap_thresholds(k, sigma)
    if samples.delta >= thresholds.L_hermite:
        raise GapConditionError(samples.delta, thresholds.L_hermite, k, sigma)
    contraction = error_bound(k, samples.delta, sigma, 0)

    af = approx_operator(samples, sigma, grid_N)
    f_n = af
    scale = l2_norm(reference) if reference is not None else l2_norm(af)
    if scale == 0.0:
        scale = 1.0
    errors = []
    if reference is not None:
        errors.append(l2_norm(reference - f_n) / scale)

    updates = []
    rising = 0
    converged = False
    iterations = 0
    for _ in range(n_max):
        af_n = approx_operator(take_samples(f_n, samples.points, k), sigma, grid_N)
        update = af - af_n
        update_norm = l2_norm(update) / scale
        f_n = f_n + update
        iterations += 1
        if reference is not None:
            errors.append(l2_norm(reference - f_n) / scale)
        else:
            errors.append(update_norm)
        updates.append(update_norm)
        if update_norm <= tol:
            converged = True
            break
        if len(updates) >= 2 and updates[-1] >= updates[-2]:
            rising += 1
            if rising >= _DIVERGENCE_PATIENCE:
                raise DivergenceError(
                    f"update norms non-decreasing for {rising} consecutive "
                    f"steps (last {update_norm:.3e})",
                    history=updates,
                )
        else:
            rising = 0

    report = ReconstructionReport(
        method="hermite_iteration",
        k=k,
        sigma=sigma,
        delta=samples.delta,
        T=samples.period_T,
        contraction_predicted=contraction,
        rho=None,
        errors=tuple(errors),
        bound_curve=tuple(contraction ** (i + 1) for i in range(len(errors))),
        iterations=iterations,
        converged=converged,
        residual_final=updates[-1] if updates else 0.0,
    )
    return f_n, report


def frame_operator(samples, sigma):
    """S_k f assembled from the sample data in the Fourier domain.

    S_k f = sum_i sum_l (-1)^l f^(l)(x_i) (c_{i,l}+c_{i-1,l}) K_{x_i}^(l);
    linear, self-adjoint and positive semidefinite on the model space.
    """
    T = samples.period_T
    m = mode_limit(T, sigma)
    omega = 2.0 * math.pi * np.arange(-m, m + 1) / T
    phases = np.exp(-1j * np.outer(samples.points, omega))
    coeffs = np.zeros(2 * m + 1, dtype=np.complex128)
    for l in range(samples.k):
        w = weights(samples.points, T, l)
        w_sum = w + np.roll(w, 1)
        amplitudes = ((-1.0) ** l) * samples.data[:, l] * w_sum
        coeffs += (amplitudes @ phases) * (1j * omega) ** l / T
    return PeriodicBandSignal(T, sigma, coeffs, False)


def _form_matrix(points, T, sigma, k):
    """Fourier-basis matrix H of the sampling quadratic form (times T).

    H = sum_l G_l^H W_l G_l with G_l[i, m] = (i omega_m)^l e^(i omega_m
    x_i) and W_l = diag(c_{i,l} + c_{i-1,l}); then Q(f) = c^H H c and
    S_k f has coefficients (H c)/T.
    """
    m = mode_limit(T, sigma)
    omega = 2.0 * math.pi * np.arange(-m, m + 1) / T
    sampler = np.exp(1j * np.outer(points, omega))
    H = np.zeros((2 * m + 1, 2 * m + 1), dtype=np.complex128)
    for l in range(k):
        w = weights(points, T, l)
        w_sum = w + np.roll(w, 1)
        G = sampler * (1j * omega) ** l
        H += (G.conj().T * w_sum) @ G
    return 0.5 * (H + H.conj().T)


def empirical_frame_bounds(samples, sigma):
    """Sharp constants of the frame inequality at these sample points.

    Returns the extreme eigenvalues of the quadratic form f ->
    sum_{i,l} |f^(l)(x_i)|^2 (c_{i,l}+c_{i-1,l}) normalized so ||f||^2
    maps to 1.  Only the points matter; the data slots are ignored.
    """
    H = _form_matrix(samples.points, samples.period_T, sigma, samples.k)
    eigs = np.linalg.eigvalsh(H) / samples.period_T
    a_emp = float(eigs[0])
    b_emp = float(eigs[-1])
    if a_emp < 0.0 and abs(a_emp) <= 1e-12 * max(b_emp, 1.0):
        a_emp = 0.0
    return EmpiricalFrameBounds(a_emp, b_emp)


def iterate_frame(samples, sigma, bounds="empirical", n_max=30, tol=1e-10, reference=None):
    """Relaxed frame iteration f_0 = 0, f_{n+1} = f_n + rho S_k(f - f_n).

    Parameters
    ----------
    samples : SampleSet
        Derivative samples of the unknown signal.
    sigma : float
        Bandlimit.
    bounds : str
        "empirical" uses the sharp eigenvalue bounds (requires A_emp > 0);
        "analytic" uses the theoretical A, B and requires the strict gap
        condition.
    n_max, tol, reference
        As in iterate_hermite; blind-mode norms are relative to the first
        iterate (f_0 = 0 has no scale).

    Returns
    -------
    (PeriodicBandSignal, ReconstructionReport)
    """
    k = samples.k
    T = samples.period_T
    H = _form_matrix(samples.points, T, sigma, k)
    eigs = np.linalg.eigvalsh(H) / T
    a_emp, b_emp = float(eigs[0]), float(eigs[-1])
    if bounds == "analytic":
        thresholds = gap_thresholds(k, sigma)
        if samples.delta >= thresholds.L_hermite:
            raise GapConditionError(samples.delta, thresholds.L_hermite, k, sigma)
        fb = analytic_frame_bounds(k, samples.delta, sigma)
        a_used, b_used = fb.A, fb.B
        if not math.isfinite(b_used):
            raise ValueError(
                "analytic B overflows for this sigma/delta; use bounds='empirical'"
            )
    elif bounds == "empirical":
        if a_emp <= 1e-12 * max(b_emp, 1.0):
            raise NotAFrameError(
                f"not a frame at this resolution: A_emp={a_emp:.3e} with "
                f"B_emp={b_emp:.3e}"
            )
        a_used, b_used = a_emp, b_emp
    else:
        raise ValueError(f"bounds must be 'analytic' or 'empirical', got {bounds!r}")

    rho = 2.0 / (a_used + b_used)
    ratio = (b_used - a_used) / (b_used + a_used)
    sf = frame_operator(samples, sigma)
    f_n = _zero_like(T, sigma)

    scale = l2_norm(reference) if reference is not None else None
    errors = []
    if reference is not None and scale > 0.0:
        errors.append(l2_norm(reference - f_n) / scale)

    updates = []
    rising = 0
    converged = False
    iterations = 0
    for _ in range(n_max):
        s_fn = PeriodicBandSignal(T, sigma, H @ f_n.coeffs / T)
        update = rho * (sf - s_fn)
        update_norm = l2_norm(update)
        f_n = f_n + update
        iterations += 1
        if scale is None:
            # blind mode: normalize by the first iterate's norm
            scale_blind = updates[0] if updates else (update_norm or 1.0)
            updates.append(update_norm)
            errors.append(update_norm / scale_blind)
            rel_update = update_norm / scale_blind
        else:
            updates.append(update_norm / scale)
            errors.append(l2_norm(reference - f_n) / scale)
            rel_update = update_norm / scale
        if rel_update <= tol:
            converged = True
            break
        if len(updates) >= 2 and updates[-1] >= updates[-2]:
            rising += 1
            if rising >= _DIVERGENCE_PATIENCE:
                raise DivergenceError(
                    f"update norms non-decreasing for {rising} consecutive "
                    f"steps (last {rel_update:.3e})",
                    history=updates,
                )
        else:
            rising = 0

    report = ReconstructionReport(
        method="frame_iteration",
        k=k,
        sigma=sigma,
        delta=samples.delta,
        T=T,
        contraction_predicted=ratio,
        rho=rho,
        errors=tuple(errors),
        bound_curve=tuple(ratio**i for i in range(len(errors))),
        iterations=iterations,
        converged=converged,
        residual_final=updates[-1] if updates else 0.0,
    )
    return f_n, report
