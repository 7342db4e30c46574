"""Formal vector bundles: rank plus Chern classes in a ring model.

Global generation is never checked; it is a flag asserted by the caller and
carried along so certificates can state which hypotheses they consume.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import ModelMismatch
from .ring import CycleClass, RingModel, universal

LCI_PROVENANCE = "top Chern class of globally generated bundle, hence lci"


@dataclass(frozen=True)
class LineBundleSymbol:
    name: str
    c1: CycleClass
    globally_generated: bool = False

    def __post_init__(self):
        if not self.c1.is_homogeneous(1):
            raise ValueError(f"c1({self.name}) must be homogeneous of degree 1, got {self.c1}")

    @property
    def model(self) -> RingModel:
        return self.c1.model

    def to_json(self) -> dict:
        return {"name": self.name, "c1": self.c1.to_json(),
                "globally_generated": self.globally_generated}


@dataclass(frozen=True)
class FormalBundle:
    name: str
    rank: int
    chern: tuple[CycleClass, ...]
    # For a bundle E in a certificate context: is E (x) L globally generated?
    globally_generated: bool = False

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if len(self.chern) != self.rank:
            raise ValueError(f"{self.name}: rank {self.rank} needs {self.rank} Chern classes, "
                             f"got {len(self.chern)}")
        model = self.chern[0].model
        for i, c in enumerate(self.chern, start=1):
            if c.model != model:
                raise ModelMismatch(f"{self.name}: Chern classes live in different models")
            if not c.is_homogeneous(i):
                raise ValueError(f"c{i}({self.name}) must be homogeneous of degree {i}, got {c}")

    @property
    def model(self) -> RingModel:
        return self.chern[0].model

    def c(self, k: int) -> CycleClass:
        """``c_k``, with ``c_0 = 1`` and ``c_k = 0`` above the rank."""
        if k < 0:
            raise ValueError("negative Chern index")
        if k == 0:
            return self.model.one()
        if k > self.rank:
            return self.model.zero()
        return self.chern[k - 1]

    def total_chern(self) -> CycleClass:
        return sum(self.chern, self.model.one())

    def to_json(self) -> dict:
        return {"name": self.name, "rank": self.rank,
                "chern": [c.to_json() for c in self.chern],
                "globally_generated": self.globally_generated}


def generic_bundle(model: RingModel, name: str, rank: int, *, globally_generated: bool = False) -> FormalBundle:
    """Bundle whose Chern classes are the model generators ``c{i}_{name}``."""
    return FormalBundle(name, rank, tuple(model.gen(f"c{i}_{name}") for i in range(1, rank + 1)),
                        globally_generated)


def generic_line(model: RingModel, name: str, *, globally_generated: bool = False) -> LineBundleSymbol:
    return LineBundleSymbol(name, model.gen(f"l_{name}"), globally_generated)


def universal_generators(bundles: dict[str, int], lines: Sequence[str]) -> list[tuple[str, int]]:
    gens: list[tuple[str, int]] = []
    for name, rank in bundles.items():
        gens.extend((f"c{i}_{name}", i) for i in range(1, rank + 1))
    gens.extend((f"l_{name}", 1) for name in lines)
    return gens


def generic_setup(rank: int, degree: int | None = None, *, bundle: str = "E", line: str = "L",
                  globally_generated: bool = True) -> tuple[RingModel, FormalBundle, LineBundleSymbol]:
    """Universal truncated ring with one generic bundle and one generic line bundle."""
    model = universal(rank if degree is None else degree, universal_generators({bundle: rank}, [line]))
    return (model,
            generic_bundle(model, bundle, rank, globally_generated=globally_generated),
            generic_line(model, line, globally_generated=globally_generated))


def trivial_bundle(model: RingModel, rank: int, name: str = "O") -> FormalBundle:
    return FormalBundle(f"{name}^{rank}" if rank > 1 else name, rank,
                        tuple(model.zero() for _ in range(rank)), True)


def as_bundle(L: LineBundleSymbol) -> FormalBundle:
    return FormalBundle(L.name, 1, (L.c1,), L.globally_generated)


def line_power(L: LineBundleSymbol, m: int) -> LineBundleSymbol:
    """``L^{(x) m}``: first Chern class ``m * c1(L)``."""
    if m == 1:
        return L
    name = f"{L.name}^{m}" if m != 0 else "O"
    return LineBundleSymbol(name, L.c1.scale(m), L.globally_generated and m >= 1)


def tensor_line(E: FormalBundle, L: LineBundleSymbol) -> FormalBundle:
    """``E (x) L``: ``c_k = sum_i C(r-i, k-i) c1(L)^{k-i} c_i(E)``."""
    if E.model != L.model:
        raise ModelMismatch(f"{E.name} lives in {E.model.id}, {L.name} in {L.model.id}")
    r = E.rank
    ell = L.c1
    powers = [E.model.one()]
    for _ in range(r):
        powers.append(powers[-1] * ell)
    chern = tuple(
        sum((E.c(i) * powers[k - i] * comb(r - i, k - i) for i in range(k + 1)), E.model.zero())
        for k in range(1, r + 1)
    )
    name = f"{E.name}*{L.name}" if L.name != "O" else E.name
    return FormalBundle(name, r, chern, E.globally_generated and L.globally_generated)


def direct_sum(E: FormalBundle, F: FormalBundle) -> FormalBundle:
    if E.model != F.model:
        raise ModelMismatch(f"{E.name} lives in {E.model.id}, {F.name} in {F.model.id}")
    rank = E.rank + F.rank
    chern = tuple(
        sum((E.c(i) * F.c(k - i) for i in range(k + 1)), E.model.zero())
        for k in range(1, rank + 1)
    )
    return FormalBundle(f"{E.name}+{F.name}", rank, chern,
                        E.globally_generated and F.globally_generated)


def dual(E: FormalBundle) -> FormalBundle:
    name = E.name[:-1] if E.name.endswith("~") else f"{E.name}~"
    return FormalBundle(name, E.rank, tuple(c.scale((-1) ** k) for k, c in enumerate(E.chern, start=1)),
                        False)


def dual_line(L: LineBundleSymbol) -> LineBundleSymbol:
    return line_power(L, -1)


def top_chern(E: FormalBundle) -> CycleClass:
    """``c_r(E)``; tagged lci when E is flagged globally generated (zero scheme of a section)."""
    return E.c(E.rank).with_provenance(LCI_PROVENANCE if E.globally_generated else None)


def power_sums(E: FormalBundle, upto: int) -> list[CycleClass]:
    """Newton's identities: ``p_k = sum_{i<k} (-1)^{i-1} c_i p_{k-i} + (-1)^{k-1} k c_k``."""
    zero = E.model.zero()
    p = [E.model.scalar(E.rank)]
    for k in range(1, upto + 1):
        acc = zero
        for i in range(1, k):
            acc = acc + E.c(i) * p[k - i] * (-1) ** (i - 1)
        acc = acc + E.c(k) * ((-1) ** (k - 1) * k)
        p.append(acc)
    return p


def chern_character(E: FormalBundle | LineBundleSymbol, degree: int) -> CycleClass:
    """``ch(E) = rank + sum_{k=1}^{degree} p_k / k!`` in mixed degrees."""
    if isinstance(E, LineBundleSymbol):
        E = as_bundle(E)
    if degree < 0 or degree > E.model.top_degree:
        raise ValueError(f"ch degree {degree} outside 0..{E.model.top_degree} for {E.model.id}")
    p = power_sums(E, degree)
    out = p[0]
    for k in range(1, degree + 1):
        out = out + p[k].scale(Fraction(1, factorial(k)))
    return out
