"""Constants, bounds and maximum-gap thresholds for derivative sampling.

Everything numeric that the reconstruction theory depends on lives here:

* the Wirtinger-Sobolev constants ``c_r``, the minimal eigenvalues of the
  clamped problem ``(-1)^r u^(2r) = lambda u`` on [0, 1] with
  ``u^(j)(0) = u^(j)(1) = 0`` for ``j < r``.  Three sources are supported:
  values printed in the literature (r <= 3), characteristic-equation roots
  (r <= 2, where closed-form transcendental equations exist) and the banded
  finite-difference eigensolver (any r);
* factorial lower/upper bounds on ``c_r`` and the large-r asymptotic;
* the constant ``tau = c_2 / pi**4`` with its tanh/tan root equation;
* the combinatorial constant ``C(k)``;
* the maximum-gap thresholds ``L`` of the Taylor-based and Hermite-based
  reconstruction methods, and the analytic frame bounds ``A``, ``B``.

Printed literature values are stored verbatim under ``source="printed"`` and
are never substituted into derived quantities; internal consistency checks
always use derived sources.  The printed ``c_2 = 500.5467`` and
``tau = 5.0625`` are roundings (``mu = 4.730040...`` rounded to 4.73 gives
``4.73**4 = 500.5467``; ``tau**(1/4)`` rounded to 1.5 gives ``1.5**4 =
5.0625``); the characteristic roots give ``c_2 = 500.56390...`` and
``tau = 5.13878...``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .eigensolver import clamped_min_eigenvalue
from .errors import GapConditionError

#: Literature values, stored verbatim.
PRINTED_CR = {1: math.pi**2, 2: 500.5467, 3: 61529.0}
PRINTED_TAU = 5.0625

#: Valid ``cr_source`` / ``method`` names for c_k lookups.
CR_SOURCES = (
    "printed",
    "characteristic_equation",
    "eigensolver",
    "lower_bound",
    "upper_bound",
)

# Exact integer factorials stay cheap up to here; beyond, log-gamma avoids
# overflow ((4r)! exceeds float range near r = 43).
_EXACT_BOUND_MAX_R = 8

# exp() overflows just above this; used to clamp B to +inf honestly.
_EXP_OVERFLOW = 709.0


@dataclass(frozen=True)
class CrValue:
    """A Wirtinger-Sobolev constant with provenance."""

    value: float
    source: str
    uncertainty: float


@dataclass(frozen=True)
class CrBounds:
    """Factorial bounds and asymptotic for ``c_r``."""

    lower: float
    upper: float
    asymptotic: float


@dataclass(frozen=True)
class GapThresholds:
    """Maximum-gap thresholds for both reconstruction methods.

    ``L_hermite = c_k**(1/(2k)) / sigma`` with the recorded ``c_k`` source;
    ``L_taylor = (2/sigma) * ((k-1)! * sqrt((2k-1)*2k))**(1/k)``.
    """

    k: int
    sigma: float
    L_hermite: float
    L_taylor: float
    cr_source: str


@dataclass(frozen=True)
class FrameBounds:
    """Analytic frame bounds for the derivative-sampling quadratic form."""

    A: float
    B: float


@dataclass(frozen=True)
class ConstantsCatalog:
    """Bundle of every constant the package computes, with provenance."""

    r_max: int
    cr_values: dict
    cr_bound_table: dict
    tau: float
    tau_source: str


def _bisect(fn, lo, hi, max_iter=200):
    """Root of ``fn`` on [lo, hi] by bisection; bracket must change sign."""
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError("bisection bracket does not straddle a sign change")
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0.0 or hi - lo <= abs(mid) * 4.0 * sys.float_info.epsilon:
            break
        if (fmid > 0.0) == (fhi > 0.0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return mid


def _exp_or_inf(x):
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _ln_base(r):
    """log of (4r)! (r!)^2 / ((2r)!)^2, the common factor of both bounds."""
    return (
        math.lgamma(4 * r + 1)
        + 2.0 * math.lgamma(r + 1)
        - 2.0 * math.lgamma(2 * r + 1)
    )


def characteristic_mu():
    """Smallest positive root of cos(mu) cosh(mu) = 1 above the trivial 0.

    This is the frequency parameter of the clamped r=2 eigenfunction;
    ``c_2 = mu**4``.
    """
    return _bisect(lambda m: math.cos(m) * math.cosh(m) - 1.0, 4.0, 5.0)


def wirtinger_constant(r, method="eigensolver"):
    """Wirtinger-Sobolev constant ``c_r`` from the requested source.

    Parameters
    ----------
    r : int
        Clamping order, r >= 1.
    method : str
        ``"printed"`` (r <= 3, verbatim literature values),
        ``"characteristic_equation"`` (r <= 2: pi**2, or mu**4 with
        cos(mu)cosh(mu) = 1), or ``"eigensolver"`` (finite differences with
        Richardson extrapolation, any r).

    Returns
    -------
    CrValue
        value, source, and an uncertainty estimate (0 for verbatim values,
        a few ulps for root finding, the last extrapolation increment for
        the eigensolver).
    """
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    if method == "printed":
        if r not in PRINTED_CR:
            raise ValueError(
                f"printed c_r is available only for r in {{1, 2, 3}}, got r={r}; "
                f"use one of {CR_SOURCES[1:3]}"
            )
        return CrValue(PRINTED_CR[r], "printed", 0.0)
    if method == "characteristic_equation":
        if r == 1:
            return CrValue(math.pi**2, "characteristic_equation", 0.0)
        if r == 2:
            mu = characteristic_mu()
            value = mu**4
            return CrValue(
                value,
                "characteristic_equation",
                8.0 * sys.float_info.epsilon * value,
            )
        raise ValueError(
            f"characteristic_equation is available only for r in {{1, 2}}, got r={r}"
        )
    if method == "eigensolver":
        value, uncertainty = clamped_min_eigenvalue(r)
        return CrValue(value, "eigensolver", uncertainty)
    raise ValueError(f"unknown method {method!r}; expected one of {CR_SOURCES[:3]}")


def tau(method="root_find"):
    """The fourth-order interval constant ``tau = c_2 / pi**4``.

    ``root_find`` solves tanh(pi t / 2) + tan(pi t / 2) = 0 for the smallest
    t in (1, 2) by bisection and returns t**4; ``printed`` returns the
    verbatim literature value 5.0625 (= 1.5**4, a rounding of the root
    t = 1.50561...).
    """
    if method == "printed":
        return PRINTED_TAU
    if method != "root_find":
        raise ValueError(f"unknown method {method!r}; expected printed or root_find")

    def g(t):
        return math.tanh(0.5 * math.pi * t) + math.tan(0.5 * math.pi * t)

    # g runs monotonically from -inf (pole at t=1) to tanh(pi) at t=2.
    t = _bisect(g, 1.0 + 1e-9, 2.0 - 1e-9)
    return t**4


def c_of_k(k):
    """Combinatorial frame constant C(k) = (sum_{s<k} binom(k+s-1, s))**2.

    Exact integer arithmetic throughout; Python integers are unbounded, so
    no overflow range limit applies.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return sum(math.comb(k + s - 1, s) for s in range(k)) ** 2


def cr_bounds(r):
    """Factorial bounds and asymptotic value for ``c_r``.

    lower = (4r-2)/(4r^2-r) * (4r)!(r!)^2/((2r)!)^2, upper replaces the
    first factor by (4r+1)/(2r+1); asymptotic = sqrt(8 pi r) (4r/e)^(2r).
    Exact integer arithmetic up to r = 8, log-gamma beyond; values past
    float range come back as inf.
    """
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    if r <= _EXACT_BOUND_MAX_R:
        base = Fraction(
            math.factorial(4 * r) * math.factorial(r) ** 2,
            math.factorial(2 * r) ** 2,
        )
        lower = float(Fraction(4 * r - 2, 4 * r * r - r) * base)
        upper = float(Fraction(4 * r + 1, 2 * r + 1) * base)
    else:
        ln_lower, ln_upper = _ln_cr_bounds(r)
        lower = _exp_or_inf(ln_lower)
        upper = _exp_or_inf(ln_upper)
    asymptotic = _exp_or_inf(
        0.5 * math.log(8.0 * math.pi * r) + 2.0 * r * (math.log(4.0 * r) - 1.0)
    )
    return CrBounds(lower, upper, asymptotic)


def _ln_cr_bounds(r):
    """(log lower, log upper) bound pair, safe for any r."""
    lnb = _ln_base(r)
    ln_lower = lnb + math.log((4.0 * r - 2.0) / (4.0 * r * r - r))
    ln_upper = lnb + math.log((4.0 * r + 1.0) / (2.0 * r + 1.0))
    return ln_lower, ln_upper


def default_cr_source(k):
    """Table policy: printed values for k <= 3, factorial lower bound after."""
    return "printed" if k <= 3 else "lower_bound"


def _ln_ck(k, source):
    """log c_k from the requested source; raises naming the alternatives."""
    if source == "printed":
        if k not in PRINTED_CR:
            raise ValueError(
                f"printed c_k is available only for k in {{1, 2, 3}} (got k={k}); "
                "available sources for this k: characteristic_equation (k <= 2), "
                "eigensolver, lower_bound, upper_bound"
            )
        return math.log(PRINTED_CR[k])
    if source in ("characteristic_equation", "eigensolver"):
        return math.log(wirtinger_constant(k, source).value)
    if source == "lower_bound":
        return _ln_cr_bounds(k)[0]
    if source == "upper_bound":
        return _ln_cr_bounds(k)[1]
    raise ValueError(f"unknown cr_source {source!r}; expected one of {CR_SOURCES}")


def gap_thresholds(k, sigma, cr_source=None):
    """Maximum-gap thresholds L for both reconstruction methods.

    Parameters
    ----------
    k : int
        Number of derivative orders sampled (0 .. k-1).
    sigma : float
        Bandlimit in radians per unit length.
    cr_source : str or None
        Source for c_k in ``L_hermite``; None applies the table policy
        (printed for k <= 3, lower bound for k >= 4).

    Returns
    -------
    GapThresholds
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    source = default_cr_source(k) if cr_source is None else cr_source
    ln_ck = _ln_ck(k, source)
    l_hermite = math.exp(ln_ck / (2.0 * k)) / sigma
    ln_taylor = math.lgamma(k) + 0.5 * math.log((2.0 * k - 1.0) * 2.0 * k)
    l_taylor = (2.0 / sigma) * math.exp(ln_taylor / k)
    return GapThresholds(k, sigma, l_hermite, l_taylor, source)


def gap_table(k_values, sigma, cr_source=None):
    """GapThresholds rows for each k in ``k_values`` (shared source policy)."""
    return [gap_thresholds(k, sigma, cr_source) for k in k_values]


def frame_bounds(k, delta, sigma, cr_source=None):
    """Analytic frame bounds for maximum gap ``delta`` and bandlimit sigma.

    A = (1 - (delta sigma)^(2k)/c_k)^2 / (2k C(k)),
    B = 2 (sum_{l<k} (delta sigma)^(2l)/(l!)^2) e^(delta^2 + sigma^2).

    Raises GapConditionError unless delta < L_hermite, the regime where A
    is a positive lower bound.  B overflows to inf when delta^2 + sigma^2
    exceeds the float exponent range; A < B always holds since A <= 1/(2k).
    """
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    source = default_cr_source(k) if cr_source is None else cr_source
    thresholds = gap_thresholds(k, sigma, source)
    if delta >= thresholds.L_hermite:
        raise GapConditionError(delta, thresholds.L_hermite, k, sigma)
    ln_ck = _ln_ck(k, source)
    # (delta sigma)^(2k)/c_k in log space; underflow to 0 is the delta->0 limit.
    ratio = _exp_or_inf(2.0 * k * math.log(delta * sigma) - ln_ck)
    a = (1.0 - ratio) ** 2 / (2.0 * k * c_of_k(k))
    series = sum(
        (delta * sigma) ** (2 * l) / math.factorial(l) ** 2 for l in range(k)
    )
    exponent = delta * delta + sigma * sigma
    if exponent > _EXP_OVERFLOW:
        b = math.inf
    else:
        b = 2.0 * series * math.exp(exponent)
    return FrameBounds(a, b)


def constants_catalog(r_max=12):
    """Compute c_r for r = 1..r_max from every applicable source.

    Returns a ConstantsCatalog whose ``cr_values`` maps r to a list of
    CrValue entries (printed, characteristic_equation, eigensolver, in that
    order where available) and whose ``cr_bound_table`` maps r to CrBounds.
    """
    if r_max < 1:
        raise ValueError(f"r_max must be a positive integer, got {r_max}")
    cr_values = {}
    cr_bound_table = {}
    for r in range(1, r_max + 1):
        entries = []
        if r in PRINTED_CR:
            entries.append(wirtinger_constant(r, "printed"))
        if r <= 2:
            entries.append(wirtinger_constant(r, "characteristic_equation"))
        entries.append(wirtinger_constant(r, "eigensolver"))
        cr_values[r] = entries
        cr_bound_table[r] = cr_bounds(r)
    return ConstantsCatalog(
        r_max=r_max,
        cr_values=cr_values,
        cr_bound_table=cr_bound_table,
        tau=tau("root_find"),
        tau_source="root_find",
    )
