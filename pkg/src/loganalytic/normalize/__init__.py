"""Parsing expressions and rewriting them into generalized series."""

from .ast import Add, Apply, Const, Div, Expr, Log, Mul, Param, Pow, Sub, Y, log_depth, to_text
from .evaluate import eval_ast
from .parser import parse
from .prepare import (
    PrepEnv,
    compose_registered,
    log_lift,
    loglog_substitute,
    loglog_unsubstitute,
    prepare,
    prepare_text,
    rational_power,
    reciprocal,
)
from .registry import DEFAULT_REGISTRY, RegisteredSeries, lookup

__all__ = [
    "Add",
    "Apply",
    "Const",
    "DEFAULT_REGISTRY",
    "Div",
    "Expr",
    "Log",
    "Mul",
    "Param",
    "Pow",
    "PrepEnv",
    "RegisteredSeries",
    "Sub",
    "Y",
    "compose_registered",
    "eval_ast",
    "log_depth",
    "log_lift",
    "loglog_substitute",
    "loglog_unsubstitute",
    "lookup",
    "parse",
    "prepare",
    "prepare_text",
    "rational_power",
    "reciprocal",
    "to_text",
]
