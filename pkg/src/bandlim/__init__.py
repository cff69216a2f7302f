"""Reconstruction of band-limited signals from nonuniform derivative samples.

The package models band-limited functions as truncated Fourier series on a
long-period torus, reconstructs them from samples of the function and its
first k-1 derivatives taken on nonuniform partitions (two-point Hermite
interpolation followed by low-pass projection, or a relaxed frame
iteration), and computes every constant the underlying theory needs:
Wirtinger-Sobolev constants, their factorial bounds, the fourth-order
interval constant tau, frame bounds, and the maximum-gap thresholds of both
reconstruction methods.
"""

from .constants import (
    PRINTED_CR,
    PRINTED_TAU,
    ConstantsCatalog,
    CrBounds,
    CrValue,
    FrameBounds,
    GapThresholds,
    c_of_k,
    characteristic_mu,
    constants_catalog,
    cr_bounds,
    default_cr_source,
    frame_bounds,
    gap_table,
    gap_thresholds,
    tau,
    wirtinger_constant,
)
from .eigensolver import clamped_min_eigenvalue
from .errors import (
    DivergenceError,
    GapConditionError,
    GenerationError,
    NotAFrameError,
    SolverError,
)
from .signal import (
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
from .hermite import HermitePatch, build_patch, evaluate_patch, piecewise_hermite
from .sampling import (
    SampleSet,
    cyclic_gaps,
    make_partition,
    sampleset_from_json_dict,
    sampleset_to_json_dict,
    take_samples,
    weights,
)
from .reconstruct import (
    EmpiricalFrameBounds,
    ReconstructionReport,
    approx_operator,
    empirical_frame_bounds,
    error_bound,
    frame_operator,
    iterate_frame,
    iterate_hermite,
    report_to_json_dict,
)
from .analysis import (
    IntervalFunction,
    aah_extremal,
    double_zero_gap,
    random_clamped_function,
    square_signal,
    uniqueness_check,
    verify_ws,
    verify_ws_2r,
)

__version__ = "0.1.0"

__all__ = [
    "PRINTED_CR",
    "PRINTED_TAU",
    "ConstantsCatalog",
    "CrBounds",
    "CrValue",
    "FrameBounds",
    "GapThresholds",
    "c_of_k",
    "characteristic_mu",
    "constants_catalog",
    "cr_bounds",
    "default_cr_source",
    "frame_bounds",
    "gap_table",
    "gap_thresholds",
    "tau",
    "wirtinger_constant",
    "clamped_min_eigenvalue",
    "DivergenceError",
    "GapConditionError",
    "GenerationError",
    "NotAFrameError",
    "SolverError",
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
    "project",
    "random_signal",
    "signal_from_json_dict",
    "signal_to_json_dict",
    "to_grid",
    "HermitePatch",
    "build_patch",
    "evaluate_patch",
    "piecewise_hermite",
    "SampleSet",
    "cyclic_gaps",
    "make_partition",
    "sampleset_from_json_dict",
    "sampleset_to_json_dict",
    "take_samples",
    "weights",
    "EmpiricalFrameBounds",
    "ReconstructionReport",
    "approx_operator",
    "empirical_frame_bounds",
    "error_bound",
    "frame_operator",
    "iterate_frame",
    "iterate_hermite",
    "report_to_json_dict",
    "IntervalFunction",
    "aah_extremal",
    "double_zero_gap",
    "random_clamped_function",
    "square_signal",
    "uniqueness_check",
    "verify_ws",
    "verify_ws_2r",
    "__version__",
]
