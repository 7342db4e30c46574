"""Chow-ring models: presented graded commutative Q-algebras with normal forms.

Four kinds of model are supported:

* ``universal``: free polynomial ring on weighted generators, truncated above
  a degree ``D``.  Identities checked here with generic generators hold in
  every other model.
* ``P``: projective space, ``Q[H]/(H^{n+1})``.
* ``PxP``: products of projective spaces, ``Q[H_1..H_s]/(H_t^{n_t+1})``.
* ``G``: the Grassmannian ``G(k, n)`` of k-planes in n-space, stored in the
  Schubert basis ``sigma_lambda`` with lambda inside the ``k x (n-k)`` box.
  Convention: ``sigma_p = c_p(Q)`` of the universal quotient bundle, so the
  special classes ``s1..s{n-k}`` multiply by the Pieri rule (horizontal
  strips).

Elements are :class:`CycleClass` values, immutable and always in normal form.
Polynomial monomials are exponent tuples over the declared generator order;
Grassmannian keys are partitions (tuples of positive weakly decreasing ints).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence, Union

from .errors import ModelMismatch, PartitionOutOfBox, UnknownGenerator
from .exact import RationalLike, as_rational, format_rational

UNIVERSAL = "universal"
PROJECTIVE = "P"
PRODUCT = "PxP"
GRASSMANNIAN = "G"

Key = tuple[int, ...]
Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class RingModel:
    kind: str
    generators: tuple[tuple[str, int], ...]
    params: tuple[int, ...]
    top_degree: int
    convention: str = ""

    def __post_init__(self):
        if any(d < 1 for _, d in self.generators):
            raise ValueError("generator degrees must be positive")
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")

    @property
    def id(self) -> str:
        return f"{self.kind}({','.join(map(str, self.params))})"

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(g for g, _ in self.generators)

    @property
    def is_grassmannian(self) -> bool:
        return self.kind == GRASSMANNIAN

    def generator_index(self, name: str) -> int:
        for i, (g, _) in enumerate(self.generators):
            if g == name:
                return i
        raise UnknownGenerator(f"{name!r} is not a generator of {self.id}")

    def key_degree(self, key: Key) -> int:
        if self.is_grassmannian:
            return sum(key)
        return sum(e * d for e, (_, d) in zip(key, self.generators))

    def unit_key(self) -> Key:
        return () if self.is_grassmannian else (0,) * len(self.generators)

    def is_reduced(self, key: Key) -> bool:
        if self.key_degree(key) > self.top_degree:
            return False
        if self.kind == PROJECTIVE:
            return key[0] <= self.params[0]
        if self.kind == PRODUCT:
            return all(e <= n for e, n in zip(key, self.params))
        if self.kind == GRASSMANNIAN:
            k, n = self.params
            return len(key) <= k and all(p <= n - k for p in key)
        return True

    def sort_key(self, key: Key):
        # graded lex: by degree, then lexicographically larger first
        return (self.key_degree(key), tuple(-e for e in key))

    # element constructors

    def zero(self) -> "CycleClass":
        return CycleClass(self, {})

    def one(self) -> "CycleClass":
        return CycleClass(self, {self.unit_key(): Fraction(1)})

    def scalar(self, q: RationalLike) -> "CycleClass":
        return self.one().scale(as_rational(q))

    def gen(self, name: str) -> "CycleClass":
        i = self.generator_index(name)
        if self.is_grassmannian:
            return self.schubert((i + 1,))
        key = tuple(int(j == i) for j in range(len(self.generators)))
        return normal_form(self, {key: 1})

    def schubert(self, partition: Sequence[int]) -> "CycleClass":
        if not self.is_grassmannian:
            raise ModelMismatch(f"Schubert classes need a Grassmannian, not {self.id}")
        lam = _check_partition(self, partition)
        return CycleClass(self, {lam: Fraction(1)})

    def hyperplane(self) -> "CycleClass":
        """Class of a hyperplane section in the model's standard projective embedding."""
        if self.kind == PROJECTIVE:
            return self.gen("H")
        if self.kind == PRODUCT:
            return sum((self.gen(g) for g in self.generator_names), self.zero())
        if self.kind == GRASSMANNIAN:
            return self.schubert((1,))
        if "H" in self.generator_names:
            return self.gen("H")
        raise UnknownGenerator(f"{self.id} has no distinguished hyperplane class H")


def universal(degree: int, generators: Sequence[tuple[str, int]]) -> RingModel:
    if degree < 0:
        raise ValueError("truncation degree must be nonnegative")
    return RingModel(UNIVERSAL, tuple((str(g), int(d)) for g, d in generators),
                     (degree,), degree)


def projective_space(n: int) -> RingModel:
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    return RingModel(PROJECTIVE, (("H", 1),), (n,), n)


def product_of_projective_spaces(*dims: int) -> RingModel:
    if not dims or any(n < 0 for n in dims):
        raise ValueError("need at least one nonnegative dimension")
    gens = tuple((f"H{t + 1}", 1) for t in range(len(dims)))
    return RingModel(PRODUCT, gens, tuple(dims), sum(dims))


def grassmannian(k: int, n: int) -> RingModel:
    if not 0 < k < n:
        raise ValueError(f"G(k, n) needs 0 < k < n, got k={k}, n={n}")
    gens = tuple((f"s{p}", p) for p in range(1, n - k + 1))
    return RingModel(GRASSMANNIAN, gens, (k, n), k * (n - k),
                     convention="sigma_p = c_p(Q), Q the universal quotient bundle")


def _check_partition(model: RingModel, partition: Sequence[int]) -> Key:
    lam = tuple(int(p) for p in partition if p != 0)
    if any(p < 0 for p in lam) or any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"not a partition: {list(partition)}")
    k, n = model.params
    if len(lam) > k or any(p > n - k for p in lam):
        raise PartitionOutOfBox(f"{list(lam)} does not fit in the {k}x{n - k} box of {model.id}")
    return lam


class CycleClass:
    """An element of a :class:`RingModel`, stored in normal form.

    ``provenance`` is optional metadata (e.g. why a class is lci); it takes no
    part in equality and is dropped by arithmetic.
    """

    __slots__ = ("model", "_terms", "provenance")

    def __init__(self, model: RingModel, terms: Mapping[Key, Fraction], provenance: str | None = None):
        # Callers guarantee normal form; use normal_form() for raw input.
        self.model = model
        self._terms = {k: v for k, v in terms.items() if v != 0}
        self.provenance = provenance

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Key, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: self.model.sort_key(kv[0]))

    def coefficient(self, key: Key) -> Fraction:
        return self._terms.get(tuple(key), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {self.model.key_degree(k) for k in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if degree is None:
            return len(ds) <= 1
        return ds <= {degree}

    def with_provenance(self, note: str | None) -> "CycleClass":
        return CycleClass(self.model, self._terms, note)

    def _same_model(self, other: "CycleClass") -> None:
        if self.model != other.model:
            raise ModelMismatch(f"cannot combine classes of {self.model.id} and {other.model.id}")

    def _coerce(self, other) -> "CycleClass":
        if isinstance(other, CycleClass):
            self._same_model(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.model.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return CycleClass(self.model, out)

    __radd__ = __add__

    def __neg__(self):
        return CycleClass(self.model, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q: RationalLike) -> "CycleClass":
        q = as_rational(q)
        return CycleClass(self.model, {k: q * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, CycleClass):
            return NotImplemented
        self._same_model(other)
        return _multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined")
        out = self.model.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self.model.scalar(other)
        if not isinstance(other, CycleClass):
            return NotImplemented
        return self.model == other.model and self._terms == other._terms

    def __hash__(self):
        return hash((self.model, frozenset(self._terms.items())))

    def degree_component(self, d: int) -> "CycleClass":
        return CycleClass(self.model, {k: v for k, v in self._terms.items()
                                       if self.model.key_degree(k) == d})

    def format_key(self, key: Key) -> str:
        if self.model.is_grassmannian:
            return f"s({','.join(map(str, key))})" if key else "1"
        parts = []
        for e, (g, _) in zip(key, self.model.generators):
            if e == 1:
                parts.append(g)
            elif e > 1:
                parts.append(f"{g}^{e}")
        return "*".join(parts) or "1"

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for key, q in self.items():
            mono = self.format_key(key)
            mag = abs(q)
            if mono == "1":
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

    def __repr__(self):
        return f"CycleClass({self.model.id}: {self})"

    def to_json(self) -> dict:
        terms = []
        for key, q in self.items():
            mono = {"partition": list(key)} if self.model.is_grassmannian else list(key)
            terms.append({"monomial": mono, "coeff": format_rational(q)})
        return {"model": self.model.id, "terms": terms}


RawPolynomial = Mapping[tuple, RationalLike]


def _raw_key(model: RingModel, mono) -> Key:
    if isinstance(mono, str):
        mono = ((mono, 1),)
    if all(isinstance(m, tuple) for m in mono):
        exps = [0] * len(model.generators)
        for name, e in mono:
            exps[model.generator_index(name)] += int(e)
        return tuple(exps)
    mono = tuple(int(e) for e in mono)
    if len(mono) != len(model.generators):
        raise UnknownGenerator(
            f"monomial {mono} has {len(mono)} exponents, {model.id} has "
            f"{len(model.generators)} generators")
    return mono


def normal_form(model: RingModel, raw: RawPolynomial) -> CycleClass:
    """Reduce a raw polynomial in the model's generators to its canonical class.

    Monomials are exponent tuples in generator order, tuples of
    ``(name, exponent)`` pairs, or a bare generator name.
    """
    out: dict[Key, Fraction] = {}
    for mono, coeff in raw.items():
        key = _raw_key(model, mono)
        q = as_rational(coeff)
        if any(e < 0 for e in key):
            raise ValueError(f"negative exponent in {key}")
        if q == 0:
            continue
        if model.is_grassmannian:
            for lam, c in _schubert_of_monomial(model.params, key).items():
                out[lam] = out.get(lam, 0) + q * c
        elif model.is_reduced(key):
            out[key] = out.get(key, 0) + q
    return CycleClass(model, out)


def _multiply(a: CycleClass, b: CycleClass) -> CycleClass:
    model = a.model
    out: dict[Key, Fraction] = {}
    if model.is_grassmannian:
        for mu, qb in b._terms.items():
            for mono, g in giambelli_expand(model, mu).items():
                for lam, qa in a._terms.items():
                    for nu, c in _pieri_word(model.params, lam, mono).items():
                        out[nu] = out.get(nu, 0) + qa * qb * g * c
        return CycleClass(model, out)
    top = model.top_degree
    for ka, qa in a._terms.items():
        da = model.key_degree(ka)
        for kb, qb in b._terms.items():
            if da + model.key_degree(kb) > top:
                continue
            key = tuple(x + y for x, y in zip(ka, kb))
            if model.is_reduced(key):
                out[key] = out.get(key, 0) + qa * qb
    return CycleClass(model, out)


def add(a: CycleClass, b: CycleClass) -> CycleClass:
    return a + b


def scale(q: RationalLike, a: CycleClass) -> CycleClass:
    return a.scale(q)


def mul(a: CycleClass, b: CycleClass) -> CycleClass:
    return a * b


def degree_component(a: CycleClass, d: int) -> CycleClass:
    return a.degree_component(d)


# Schubert calculus


def _horizontal_strips(lam: Key, p: int, k: int, width: int) -> Iterator[Key]:
    """Partitions mu in the k x width box with mu/lam a horizontal strip of size p."""
    lam = tuple(lam) + (0,) * (k - len(lam))

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == k:
            if remaining == 0:
                yield tuple(x for x in prefix if x)
            return
        upper = width if i == 0 else lam[i - 1]
        for mu_i in range(lam[i], min(upper, lam[i] + remaining) + 1):
            yield from rec(i + 1, remaining - (mu_i - lam[i]), prefix + (mu_i,))

    yield from rec(0, p, ())


@lru_cache(maxsize=None)
def _pieri(params: tuple[int, int], lam: Key, p: int) -> tuple[Key, ...]:
    k, n = params
    return tuple(_horizontal_strips(lam, p, k, n - k))


def pieri_multiply(model: RingModel, lam: Sequence[int], p: int) -> CycleClass:
    """``sigma_lam * sigma_p`` as a sum of Schubert classes."""
    if not model.is_grassmannian:
        raise ModelMismatch(f"Pieri rule needs a Grassmannian, not {model.id}")
    lam = _check_partition(model, lam)
    k, n = model.params
    if not 1 <= p <= n - k:
        raise PartitionOutOfBox(f"special class s{p} does not exist in {model.id}")
    return CycleClass(model, {mu: Fraction(1) for mu in _pieri(model.params, lam, p)})


def _pieri_word(params: tuple[int, int], lam: Key, mono: Key) -> dict[Key, int]:
    # sigma_lam * prod_p sigma_p^{mono[p-1]}
    current = {lam: 1}
    for idx, e in enumerate(mono):
        for _ in range(e):
            nxt: dict[Key, int] = {}
            for nu, c in current.items():
                for mu in _pieri(params, nu, idx + 1):
                    nxt[mu] = nxt.get(mu, 0) + c
            current = nxt
    return current


@lru_cache(maxsize=None)
def _schubert_of_monomial(params: tuple[int, int], mono: Key) -> dict[Key, int]:
    return {k: v for k, v in _pieri_word(params, (), mono).items() if v}


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def giambelli_expand(model: RingModel, lam: Sequence[int]) -> dict[Key, int]:
    """Expand ``sigma_lam = det(sigma_{lam_i + j - i})`` as a polynomial in s1..s{n-k}.

    Returns exponent tuples over the special generators; ``sigma_0 = 1`` and
    ``sigma_p = 0`` outside ``0..n-k``.  Evaluate with :func:`normal_form`.
    """
    if not model.is_grassmannian:
        raise ModelMismatch(f"Giambelli formula needs a Grassmannian, not {model.id}")
    lam = _check_partition(model, lam)
    return dict(_giambelli(model.params, lam))


@lru_cache(maxsize=None)
def _giambelli(params: tuple[int, int], lam: Key) -> tuple[tuple[Key, int], ...]:
    k, n = params
    width = n - k
    size = len(lam)
    poly: dict[Key, int] = {}
    for perm in itertools.permutations(range(size)):
        mono = [0] * width
        for i, j in enumerate(perm):
            idx = lam[i] + j - i
            if idx < 0 or idx > width:
                break
            if idx:
                mono[idx - 1] += 1
        else:
            key = tuple(mono)
            poly[key] = poly.get(key, 0) + _permutation_sign(perm)
    return tuple((m, c) for m, c in sorted(poly.items()) if c)


def partitions_in_box(k: int, width: int, size: int | None = None) -> list[Key]:
    """All partitions in the k x width box, optionally of a fixed size."""
    out = []
    for parts in itertools.product(range(width + 1), repeat=k):
        if all(a >= b for a, b in zip(parts, parts[1:])):
            lam = tuple(p for p in parts if p)
            if size is None or sum(lam) == size:
                out.append(lam)
    return sorted(out, key=lambda lam: (sum(lam), tuple(-x for x in lam)))
