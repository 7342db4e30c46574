"""Checkable forms of the reductions to Chern classes.

* :func:`verify_syzygy_identity` checks ``sign * (p-1)! * z = c_p(E) - n H^p``
  for caller-supplied ``E``, ``n`` and sign; nothing here builds ``E``.
* :func:`kleiman_smooth_bound` is the range ``i < (d+2)/2`` in which every
  dimension-i cycle class with rational coefficients is smoothable.
* :func:`express_in_subalgebra` searches a bounded-degree representation of a
  class as a polynomial in given generators.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .chern import FormalBundle
from .errors import DegreeMismatch, ModelMismatch
from .exact import Matrix, solve_system
from .ring import CycleClass, RingModel


@dataclass(frozen=True)
class SyzygyInstance:
    model: RingModel
    z: CycleClass
    E: FormalBundle
    n: int
    sign: int
    p: int
    hyperplane: CycleClass | None = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.p < 1:
            raise ValueError("codimension p must be positive")

    @property
    def H(self) -> CycleClass:
        return self.hyperplane if self.hyperplane is not None else self.model.hyperplane()


@dataclass(frozen=True)
class SyzygyResult:
    """``residual = (c_p(E) - n H^p) - sign (p-1)! z``."""

    ok: bool
    residual: CycleClass

    def __bool__(self):
        return self.ok


def verify_syzygy_identity(inst: SyzygyInstance) -> SyzygyResult:
    if not inst.z.is_homogeneous(inst.p):
        raise DegreeMismatch(f"[Z] must be homogeneous of degree {inst.p}, got {inst.z}")
    if {inst.z.model, inst.E.model, inst.H.model} != {inst.model}:
        raise ModelMismatch(f"all classes must live in {inst.model.id}")
    lhs = inst.z.scale(inst.sign * factorial(inst.p - 1))
    rhs = inst.E.c(inst.p) - inst.H ** inst.p * inst.n
    residual = rhs - lhs
    return SyzygyResult(residual.is_zero(), residual)


def kleiman_smooth_bound(d: int, i: int) -> bool:
    """True iff ``i < (d + 2) / 2``."""
    if not 0 <= i <= d:
        raise ValueError(f"need 0 <= i <= d, got d={d}, i={i}")
    return 2 * i < d + 2


@dataclass(frozen=True)
class SubalgebraResult:
    """Coefficients over generator monomials (exponent tuples), or None."""

    target: CycleClass
    generators: tuple[CycleClass, ...]
    coefficients: dict[tuple[int, ...], Fraction] | None
    max_degree: int

    @property
    def representable(self) -> bool:
        return self.coefficients is not None

    def evaluate(self) -> CycleClass:
        if self.coefficients is None:
            raise ValueError("no representation")
        return sum((monomial_value(self.generators, mono).scale(q)
                    for mono, q in self.coefficients.items()), self.target.model.zero())


def monomial_value(generators: Sequence[CycleClass], mono: Sequence[int]) -> CycleClass:
    out = generators[0].model.one()
    for g, e in zip(generators, mono):
        if e:
            out = out * g ** e
    return out


def _monomials_of_degree(degrees: Sequence[int], d: int) -> list[tuple[int, ...]]:
    """Exponent vectors with ``sum e_j * degrees[j] == d``, graded-lex descending."""
    out = []
    bounds = [d // g if g > 0 else 0 for g in degrees]
    for exps in itertools.product(*(range(b + 1) for b in bounds)):
        if sum(e * g for e, g in zip(exps, degrees)) == d:
            out.append(exps)
    out.sort(reverse=True)
    return out


def express_in_subalgebra(target: CycleClass, generators: Sequence[CycleClass],
                          max_degree: int) -> SubalgebraResult:
    model = target.model
    gens = tuple(generators)
    for g in gens:
        if g.model != model:
            raise ModelMismatch(f"generator {g} is not in {model.id}")
        if not g.is_homogeneous() or g.is_zero():
            raise DegreeMismatch(f"generators must be nonzero and homogeneous, got {g}")
    if max_degree > model.top_degree:
        raise ValueError(f"degree bound {max_degree} exceeds top degree {model.top_degree}")
    gdeg = [next(iter(g.degrees())) for g in gens]

    def fail():
        return SubalgebraResult(target, gens, None, max_degree)

    if any(d > max_degree for d in target.degrees()):
        return fail()

    coefficients: dict[tuple[int, ...], Fraction] = {}
    for d in sorted(target.degrees()):
        part = target.degree_component(d)
        monos: list[tuple[int, ...]] = []
        values: list[CycleClass] = []
        for mono in _monomials_of_degree(gdeg, d):
            if any(e and g == 0 for e, g in zip(mono, gdeg)):
                continue
            v = monomial_value(gens, mono)
            if v.is_zero() or v in values:
                continue
            monos.append(mono)
            values.append(v)
        if not monos:
            return fail()
        keys = sorted({k for v in values + [part] for k in v.terms}, key=model.sort_key)
        a = Matrix.from_rows([[v.coefficient(k) for v in values] for k in keys])
        x = solve_system(a, [part.coefficient(k) for k in keys])
        if x is None:
            return fail()
        for mono, q in zip(monos, x):
            if q != 0:
                coefficients[mono] = q
    result = SubalgebraResult(target, gens, coefficients, max_degree)
    if result.evaluate() != target:
        raise AssertionError("subalgebra solution does not re-evaluate to the target")
    return result
