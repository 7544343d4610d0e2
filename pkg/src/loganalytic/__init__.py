"""Calculus for one-variable germs of log-analytic functions at 0+.

Expressions in ``y`` built from rationals, parameters, field operations,
rational powers, ``log`` and registered convergent power series are
normalized into finite sums of log-monomials ``c * prod |y_j|^{q_j}`` over
the elementary logarithmic scale ``y_0 = y, y_1 = log y, y_j = log|y_{j-1}|``.
On that form derivatives, limits, flatness orders, Taylor parts and
smoothness classes at 0 are computed exactly; :mod:`loganalytic.numeric`
provides independent high-precision checks.
"""

from .calculus import (
    SmoothnessReport,
    TaylorSplit,
    classify,
    flatness_bound,
    germ_equal_zero,
    limit_at_zero,
    series_derivative,
    series_limit,
    taylor_split,
)
from .errors import LogAnalyticError
from .monomial import Dominance, Limit, LimitKind, LogMonomial, dominance_cmp, mono_derivative, mono_eval, mono_limit
from .normalize import PrepEnv, eval_ast, log_lift, loglog_substitute, parse, prepare, prepare_text
from .numeric import PrecisionCtx, eval_prepared, eval_series, fd_derivative, limit_probe
from .scale import ExponentTuple, SimpleCell, exp_tower, first_nonzero, q_diff, scale_values
from .series import (
    GenSeries,
    PreparedForm,
    SpecialUnit,
    expand_unit,
    factor_prepared,
    lift_order,
    series_add,
    series_mul,
)

__version__ = "0.1.0"

__all__ = [
    "Dominance",
    "ExponentTuple",
    "GenSeries",
    "Limit",
    "LimitKind",
    "LogAnalyticError",
    "LogMonomial",
    "PrecisionCtx",
    "PrepEnv",
    "PreparedForm",
    "SimpleCell",
    "SmoothnessReport",
    "SpecialUnit",
    "TaylorSplit",
    "classify",
    "dominance_cmp",
    "eval_ast",
    "eval_prepared",
    "eval_series",
    "exp_tower",
    "expand_unit",
    "factor_prepared",
    "fd_derivative",
    "first_nonzero",
    "flatness_bound",
    "germ_equal_zero",
    "lift_order",
    "limit_at_zero",
    "limit_probe",
    "log_lift",
    "loglog_substitute",
    "mono_derivative",
    "mono_eval",
    "mono_limit",
    "parse",
    "prepare",
    "prepare_text",
    "q_diff",
    "scale_values",
    "series_add",
    "series_derivative",
    "series_limit",
    "series_mul",
    "taylor_split",
]
