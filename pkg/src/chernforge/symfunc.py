"""Splitting-principle oracle.

Every Chern class is expanded in formal roots: ``c_k(E)`` becomes the k-th
elementary symmetric polynomial in ``a1_E..ar_E`` and twisting by ``L^m``
shifts each root by ``m * l_L``.  Identities are then plain polynomial
identities in the free ring, independent of the closed-form twist formula in
:mod:`chernforge.chern`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import NotSymmetric, UnknownSymbol
from .exact import RationalLike, as_rational, format_rational
from .expr import BinOp, ChernOf, Expr, Name, Neg, Num, Pow, Schubert
from .ring import CycleClass, RingModel, normal_form


class SymPoly:
    """Sparse polynomial with rational coefficients over named variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.variables = tuple(variables)
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}
        for k in self.terms:
            if len(k) != len(self.variables):
                raise ValueError(f"exponent vector {k} does not match {self.variables}")

    @classmethod
    def constant(cls, q: RationalLike, variables: Sequence[str] = ()) -> "SymPoly":
        return cls(variables, {(0,) * len(variables): as_rational(q)})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "SymPoly":
        variables = tuple(variables) if variables is not None else (name,)
        i = variables.index(name)
        return cls(variables, {tuple(int(j == i) for j in range(len(variables))): Fraction(1)})

    def extend(self, variables: Sequence[str]) -> "SymPoly":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for k, q in self.terms.items():
            e = [0] * len(variables)
            for i, x in zip(idx, k):
                e[i] = x
            out[tuple(e)] = q
        return SymPoly(variables, out)

    def _unify(self, other: "SymPoly") -> tuple["SymPoly", "SymPoly"]:
        if self.variables == other.variables:
            return self, other
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.extend(merged), other.extend(merged)

    def __add__(self, other: "SymPoly") -> "SymPoly":
        a, b = self._unify(other)
        out = dict(a.terms)
        for k, q in b.terms.items():
            out[k] = out.get(k, 0) + q
        return SymPoly(a.variables, out)

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.variables, {k: -q for k, q in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, q: RationalLike) -> "SymPoly":
        q = as_rational(q)
        return SymPoly(self.variables, {k: q * v for k, v in self.terms.items()})

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        a, b = self._unify(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ka, qa in a.terms.items():
            for kb, qb in b.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + qa * qb
        return SymPoly(a.variables, out)

    def __pow__(self, e: int) -> "SymPoly":
        out = SymPoly.constant(1, self.variables)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SymPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(str(self.canonical()))

    def canonical(self) -> "SymPoly":
        """Drop variables that do not occur and sort the rest by name."""
        used = sorted({v for k in self.terms for v, e in zip(self.variables, k) if e})
        return self.extend_to_subset(used)

    def extend_to_subset(self, variables: Sequence[str]) -> "SymPoly":
        idx = [self.variables.index(v) for v in variables]
        return SymPoly(variables, {tuple(k[i] for i in idx): q for k, q in self.terms.items()})

    def substitute(self, name: str, value: "SymPoly") -> "SymPoly":
        if name not in self.variables:
            return self
        i = self.variables.index(name)
        rest = [v for v in self.variables if v != name]
        out = SymPoly(rest)
        for k, q in self.terms.items():
            mono = SymPoly(rest, {tuple(x for j, x in enumerate(k) if j != i): q})
            out = out + mono * value ** k[i]
        return out

    def __str__(self):
        c = self.canonical()
        if not c.terms:
            return "0"
        items = sorted(c.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))
        out = []
        for k, q in items:
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(c.variables, k) if e)
            mag = abs(q)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if not out:
                out.append(body if q > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if q > 0 else f"- {body}")
        return " ".join(out)

    __repr__ = __str__


def root_names(bundle: str, rank: int) -> tuple[str, ...]:
    return tuple(f"a{i}_{bundle}" for i in range(1, rank + 1))


def line_variable(line: str) -> str:
    return f"l_{line}"


def elementary(k: int, variables: Sequence[str]) -> SymPoly:
    """``e_k`` of the given variables (``e_0 = 1``)."""
    n = len(variables)
    if k < 0 or k > n:
        return SymPoly(variables)
    out = {}
    for combo in combinations(range(n), k):
        out[tuple(int(j in combo) for j in range(n))] = Fraction(1)
    return SymPoly(variables, out)


def _elementary_of_shifted(k: int, roots: Sequence[SymPoly]) -> SymPoly:
    acc = SymPoly(())
    for combo in combinations(range(len(roots)), k):
        term = SymPoly.constant(1)
        for j in combo:
            term = term * roots[j]
        acc = acc + term
    if k == 0:
        return SymPoly.constant(1)
    return acc


def expand_in_roots(expr: Expr, ranks: Mapping[str, int], lines: Iterable[str] = (),
                    scalars: Iterable[str] = ()) -> SymPoly:
    """Expand an expression into formal Chern roots.

    ``ranks`` declares the vector bundles, ``lines`` the line bundles (each with
    a single root ``l_<name>``) and ``scalars`` free symbols kept as variables.
    """
    lines = set(lines)
    scalars = set(scalars)

    def roots_of(name: str, pos) -> list[SymPoly]:
        if name in ranks:
            return [SymPoly.var(v) for v in root_names(name, ranks[name])]
        if name in lines:
            return [SymPoly.var(line_variable(name))]
        raise UnknownSymbol(f"unknown bundle {name!r}" + (f" at {pos[0]}:{pos[1]}" if pos else ""))

    def ev(e: Expr) -> SymPoly:
        if isinstance(e, Num):
            return SymPoly.constant(e.value)
        if isinstance(e, Name):
            if e.name in scalars:
                return SymPoly.var(e.name)
            raise UnknownSymbol(f"unknown symbol {e.name!r}")
        if isinstance(e, Schubert):
            raise UnknownSymbol("Schubert classes have no root expansion")
        if isinstance(e, ChernOf):
            roots = roots_of(e.bundle, e.pos)
            if e.line is not None:
                if e.line not in lines:
                    raise UnknownSymbol(f"unknown line bundle {e.line!r}")
                shift = SymPoly.var(line_variable(e.line)).scale(e.power)
                roots = [a + shift for a in roots]
            return _elementary_of_shifted(e.k, roots)
        if isinstance(e, Neg):
            return -ev(e.operand)
        if isinstance(e, Pow):
            return ev(e.base) ** e.exponent
        if isinstance(e, BinOp):
            a, b = ev(e.left), ev(e.right)
            return a + b if e.op == "+" else a - b if e.op == "-" else a * b
        raise TypeError(f"not an expression: {e!r}")

    return ev(expr).canonical()


def is_symmetric(p: SymPoly, roots: Sequence[str]) -> bool:
    """Invariance under the adjacent transpositions, which generate the symmetric group."""
    p = p.extend(tuple(p.variables) + tuple(r for r in roots if r not in p.variables))
    idx = [p.variables.index(r) for r in roots]
    for i, j in zip(idx, idx[1:]):
        swapped = {}
        for k, q in p.terms.items():
            e = list(k)
            e[i], e[j] = e[j], e[i]
            swapped[tuple(e)] = q
        if swapped != p.terms:
            return False
    return True


def to_elementary(p: SymPoly, roots: Sequence[str], names: Sequence[str] | None = None) -> SymPoly:
    """Rewrite a polynomial symmetric in ``roots`` in elementary symmetric polynomials.

    Other variables act as coefficients.  The result uses variables ``names``
    (default ``e1..er``) followed by the non-root variables.
    """
    roots = tuple(roots)
    r = len(roots)
    names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(1, r + 1))
    if not is_symmetric(p, roots):
        raise NotSymmetric(f"{p} is not symmetric in {', '.join(roots)}")
    others = tuple(v for v in p.variables if v not in roots)
    work = p.extend(roots + others)
    out_vars = names + others
    result = SymPoly(out_vars)
    elem = [elementary(k, roots).extend(roots + others) for k in range(r + 1)]
    while work.terms:
        # lex-leading root exponent is a partition for a symmetric polynomial
        lead = max(work.terms, key=lambda k: (k[:r], k[r:]))
        q = work.terms[lead]
        alpha = lead[:r]
        gaps = [alpha[i] - (alpha[i + 1] if i + 1 < r else 0) for i in range(r)]
        other_exps = lead[r:]
        sub = SymPoly(roots + others, {(0,) * r + other_exps: q})
        for i, g in enumerate(gaps):
            sub = sub * elem[i + 1] ** g
        work = work - sub
        result = result + SymPoly(out_vars, {tuple(gaps) + other_exps: q})
    return result


def from_elementary(q: SymPoly, roots: Sequence[str], names: Sequence[str] | None = None) -> SymPoly:
    """Inverse of :func:`to_elementary`: substitute ``e_k`` by its root expansion."""
    roots = tuple(roots)
    names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(1, len(roots) + 1))
    out = q
    for k, name in enumerate(names, start=1):
        out = out.substitute(name, elementary(k, roots))
    return out.canonical()


@dataclass(frozen=True)
class OracleReport:
    equal: bool
    lhs: SymPoly
    rhs: SymPoly

    @property
    def difference(self) -> SymPoly:
        return (self.lhs - self.rhs).canonical()

    @property
    def text(self) -> str:
        if self.equal:
            return "identity holds in the free root ring"
        return f"lhs = {self.lhs}\nrhs = {self.rhs}\nlhs - rhs = {self.difference}"

    def __bool__(self):
        return self.equal


def oracle_check(lhs: Expr, rhs: Expr, ranks: Mapping[str, int], lines: Iterable[str] = (),
                 scalars: Iterable[str] = ()) -> OracleReport:
    lines = tuple(lines)
    scalars = tuple(scalars)
    a = expand_in_roots(lhs, ranks, lines, scalars)
    b = expand_in_roots(rhs, ranks, lines, scalars)
    return OracleReport((a - b).is_zero(), a, b)


def sympoly_to_class(p: SymPoly, model: RingModel, mapping: Mapping[str, str] | None = None) -> CycleClass:
    """Map a polynomial to a ring element, renaming variables to generators."""
    mapping = mapping or {}
    raw: dict[tuple[int, ...], Fraction] = {}
    for k, q in p.terms.items():
        key = [0] * len(model.generators)
        for v, e in zip(p.variables, k):
            if e:
                key[model.generator_index(mapping.get(v, v))] += e
        raw[tuple(key)] = raw.get(tuple(key), 0) + q
    return normal_form(model, raw)
