"""Convolution-like recurrences a_n = (a_{n-m} - sum_{j<n} b_{n-j} a_j) / b_0.

The m basis solutions (alpha-sequences) are produced by direct recurrence or by
power-series division; limits, radii, steering systems and constant pipelines
build on them.
"""

from .analysis import (
    LimitReport,
    NumericLimit,
    PolyRoots,
    RadiusEstimate,
    Undefined,
    estimate_radius,
    limit_alpha_closed,
    limit_alpha_numeric,
    limit_report,
    poly_roots,
    sums_to_one,
    weighted_index_mean,
)
from .constants import ConstantRun, run_constant, weighted_b_identity, zeta_reference
from .errors import *  # noqa: F401,F403
from .numeric import format_coeff, from_json, near_equal, to_coeff, to_json
from .recurrence import AlphaTable, RecurrenceProblem, compute_a, compute_alpha, initial_block, reconstruct_a
from .sequences import (
    ClosedFormSpec,
    FiniteSpec,
    SelfRecurrentSpec,
    SequenceSpec,
    TableSpec,
    catalog_b,
    catalog_names,
    eval_b,
    mobius,
    spec_from_json,
)
from .series import (
    TruncatedSeries,
    b_series,
    galpha_series,
    m_series,
    series_div,
    series_mul,
    series_sub,
    shift_pow,
)
from .solver import (
    SolveReport,
    build_system,
    closed_form_initials,
    determinant_closed_form,
    solve_system,
    steer,
)

__version__ = "0.1.0"
