"""Expression trees over Chern symbols, shared by the DSL and the root oracle."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from .exact import format_rational

Pos = tuple[int, int]


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Schubert:
    parts: tuple[int, ...]
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ChernOf:
    """``c_k(bundle (x) line^power)``; ``line`` is None for an untwisted class."""

    k: int
    bundle: str
    line: str | None = None
    power: int = 1
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - *
    left: "Expr"
    right: "Expr"
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    pos: Pos | None = field(default=None, compare=False)


Expr = Union[Num, Name, Schubert, ChernOf, BinOp, Neg, Pow]

_PREC = {"+": 1, "-": 1, "*": 2}


def chern(k: int, bundle: str, line: str | None = None, power: int = 1) -> ChernOf:
    return ChernOf(k, bundle, line, power if line is not None else 1)


def total(terms: list[Expr]) -> Expr:
    if not terms:
        return Num(Fraction(0))
    out = terms[0]
    for t in terms[1:]:
        out = BinOp("+", out, t)
    return out


def linear_combination(pairs: list[tuple[Fraction, Expr]]) -> Expr:
    terms: list[Expr] = []
    for q, e in pairs:
        terms.append(e if q == 1 else BinOp("*", Num(Fraction(q)), e))
    return total(terms)


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, BinOp):
        yield from walk(e.left)
        yield from walk(e.right)
    elif isinstance(e, Neg):
        yield from walk(e.operand)
    elif isinstance(e, Pow):
        yield from walk(e.base)


def _fmt_chern(e: ChernOf) -> str:
    inner = e.bundle
    if e.line is not None:
        inner += f"*{e.line}" + (f"^{e.power}" if e.power != 1 else "")
    return f"c{e.k}({inner})"


def to_source(e: Expr, prec: int = 0) -> str:
    """Render in DSL syntax; re-parsing gives back an equal tree."""
    if isinstance(e, Num):
        q = e.value
        text = format_rational(abs(q))
        if q < 0:
            return f"(-{text})" if prec > 0 else f"-{text}"
        if q.denominator != 1 and prec >= 2:
            return f"({text})"
        return text
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Schubert):
        return f"s({','.join(map(str, e.parts))})"
    if isinstance(e, ChernOf):
        return _fmt_chern(e)
    if isinstance(e, Neg):
        body = f"-{to_source(e.operand, 3)}"
        return f"({body})" if prec > 0 else body
    if isinstance(e, Pow):
        body = f"{to_source(e.base, 4)}^{e.exponent}"
        return f"({body})" if prec > 3 else body
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        body = f"{to_source(e.left, p)} {e.op} {to_source(e.right, p + 1)}"
        return f"({body})" if prec > p else body
    raise TypeError(f"not an expression: {e!r}")
