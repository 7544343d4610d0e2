"""Expression trees for the germ DSL.

Every node records the half-open character span it was parsed from; spans
take no part in equality so that trees built by hand compare equal to parsed
ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

Span = tuple[int, int]


def _span() -> Span:
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Const:
    value: Fraction
    span: Span = _span()


@dataclass(frozen=True)
class Param:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Y:
    span: Span = _span()


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction
    span: Span = _span()


@dataclass(frozen=True)
class Log:
    arg: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Apply:
    name: str
    args: tuple["Expr", ...]
    span: Span = _span()


Expr = Union[Const, Param, Y, Add, Sub, Mul, Div, Pow, Log, Apply]

BINARY = (Add, Sub, Mul, Div)


def children(e: Expr) -> Iterator[Expr]:
    if isinstance(e, BINARY):
        yield e.left
        yield e.right
    elif isinstance(e, Pow):
        yield e.base
    elif isinstance(e, Log):
        yield e.arg
    elif isinstance(e, Apply):
        yield from e.args


def log_depth(e: Expr) -> int:
    """Maximum number of nested ``log`` applications along any path."""
    inner = max((log_depth(c) for c in children(e)), default=0)
    return inner + 1 if isinstance(e, Log) else inner


def params_of(e: Expr) -> frozenset[str]:
    if isinstance(e, Param):
        return frozenset([e.name])
    out = frozenset()
    for c in children(e):
        out |= params_of(c)
    return out


_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2}
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def to_text(e: Expr) -> str:
    """Render back to DSL syntax (fully parenthesized where needed)."""
    if isinstance(e, Const):
        v = e.value
        return str(v) if v >= 0 else f"({v})"
    if isinstance(e, Param):
        return e.name
    if isinstance(e, Y):
        return "y"
    if isinstance(e, BINARY):
        prec = _PREC[type(e)]
        left = to_text(e.left)
        right = to_text(e.right)
        if isinstance(e.left, BINARY) and _PREC[type(e.left)] < prec:
            left = f"({left})"
        if isinstance(e.right, BINARY) and _PREC[type(e.right)] <= prec:
            right = f"({right})"
        return f"{left} {_SYMBOL[type(e)]} {right}"
    if isinstance(e, Pow):
        base = to_text(e.base)
        if isinstance(e.base, (BINARY, Pow)) or (isinstance(e.base, Const) and e.base.value < 0):
            base = f"({base})"
        return f"{base}^^({e.exponent})"
    if isinstance(e, Log):
        return f"log({to_text(e.arg)})"
    if isinstance(e, Apply):
        return f"{e.name}({', '.join(to_text(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")
