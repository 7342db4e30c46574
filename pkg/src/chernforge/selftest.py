"""Built-in invariant suites, run by ``chernforge selftest``.

Each suite returns a list of failure messages; an empty list is a pass.
Randomized suites take a :class:`random.Random` so runs are reproducible.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Callable

from .certificates import (
    certify_top,
    certify_xi,
    combination_class,
    oracle_verify,
    top_coefficients_closed_form,
    top_coefficients_via_lagrange,
    top_coefficients_via_solve,
    verify_generic,
)
from .chern import (
    FormalBundle,
    LineBundleSymbol,
    chern_character,
    direct_sum,
    generic_setup,
    line_power,
    tensor_line,
)
from .exact import determinant, vandermonde_matrix
from .expr import BinOp, Num, Pow, chern, linear_combination
from .reduction import (
    SyzygyInstance,
    express_in_subalgebra,
    kleiman_smooth_bound,
    verify_syzygy_identity,
)
from .ring import (
    CycleClass,
    RingModel,
    grassmannian,
    normal_form,
    partitions_in_box,
    product_of_projective_spaces,
    projective_space,
    universal,
)
from .symfunc import expand_in_roots, oracle_check, root_names, sympoly_to_class, to_elementary


@dataclass(frozen=True)
class SuiteResult:
    number: int
    name: str
    failures: tuple[str, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return not self.failures


def suite_vandermonde(rng: random.Random) -> list[str]:
    fails = []
    if vandermonde_matrix(2).to_rows() != [[1, 0, 0], [1, 1, 1], [1, 2, 4]]:
        fails.append(f"vandermonde_matrix(2) = {vandermonde_matrix(2).to_rows()}")
    for r in range(9):
        det = determinant(vandermonde_matrix(r))
        expected = prod(j - i for i in range(r + 1) for j in range(i + 1, r + 1))
        if det == 0 or det != expected:
            fails.append(f"det V({r}) = {det}, expected {expected}")
    return fails


def suite_xi_certificates(rng: random.Random) -> list[str]:
    fails = []
    for r in range(1, 5):
        _, E, L = generic_setup(r)
        for i in range(r + 1):
            cert = certify_xi(r, i)
            v = verify_generic(cert)
            if not v.ok or v.model_id != f"universal({r})":
                fails.append(f"certify_xi({r},{i}) fails in universal({r}): residual {v.residual}")
            if not oracle_verify(cert):
                fails.append(f"certify_xi({r},{i}) fails the root oracle")
        first = certify_xi(r, 0)
        if [(q, a.k) for q, a in first.atoms] != [(1, 1)]:
            fails.append(f"certify_xi({r},0) = {first.atoms}")
        last = certify_xi(r, r)
        if combination_class(last, E, L) != L.c1 ** r:
            fails.append(f"certify_xi({r},{r}) does not expand to c1(L)^{r}")
        combo = linear_combination([(q, chern(r, "E", "L", a.k)) for q, a in last.atoms])
        if not oracle_check(combo, Pow(chern(1, "L"), r), {"E": r}, ["L"]):
            fails.append(f"oracle: certify_xi({r},{r}) is not c1(L)^{r}")
    return fails


def suite_top_certificates(rng: random.Random) -> list[str]:
    fails = []
    for r in range(1, 7):
        a, b, c = (top_coefficients_via_solve(r), top_coefficients_via_lagrange(r),
                   top_coefficients_closed_form(r))
        if not a == b == c:
            fails.append(f"rank {r}: solve {a}, lagrange {b}, closed form {c}")
        cert = certify_top(r)
        if tuple(cert.coefficients[m + 1] for m in range(r + 1)) != c:
            fails.append(f"certify_top({r}) coefficients {cert.coefficients}")
        if r <= 4:
            if not oracle_verify(cert):
                fails.append(f"root oracle rejects certify_top({r})")
            if not verify_generic(cert):
                fails.append(f"certify_top({r}) fails in universal({r})")
    anchor = BinOp("-", BinOp("*", Num(Fraction(2)), chern(1, "E", "L", 1)), chern(1, "E", "L", 2))
    if not oracle_check(anchor, chern(1, "E"), {"E": 1}, ["L"]):
        fails.append("2 c1(E(x)L) - c1(E(x)L^2) != c1(E) for rank 1")
    if certify_top(1).coefficients != {1: 2, 2: -1}:
        fails.append(f"certify_top(1) = {certify_top(1).coefficients}")
    return fails


def suite_twist_oracle(rng: random.Random) -> list[str]:
    fails = []
    for r in range(1, 5):
        model, E, L = generic_setup(r)
        roots = root_names("E", r)
        names = tuple(f"c{j}_E" for j in range(1, r + 1))
        for m in range(-1, r + 1):
            F = tensor_line(E, line_power(L, m))
            for k in range(1, r + 1):
                sym = to_elementary(expand_in_roots(chern(k, "E", "L", m), {"E": r}, ["L"]), roots, names)
                if F.c(k) != sympoly_to_class(sym, model):
                    fails.append(f"c{k}(E(x)L^{m}) rank {r}: formula {F.c(k)} vs oracle {sym}")
        EL = tensor_line(E, L)
        for m in range(r + 1):
            if tensor_line(EL, line_power(L, m)).chern != tensor_line(E, line_power(L, m + 1)).chern:
                fails.append(f"regrouping (E(x)L)(x)L^{m} fails for rank {r}")
            rhs = linear_combination([
                (Fraction(m ** i), BinOp("*", Pow(chern(1, "L"), i), chern(r - i, "E", "L", 1)))
                for i in range(r + 1)])
            if not oracle_check(chern(r, "E", "L", m + 1), rhs, {"E": r}, ["L"]):
                fails.append(f"c_r(E(x)L^{m + 1}) != sum m^i x_i for r={r}, m={m}")
    return fails


def random_class(rng: random.Random, model: RingModel, degree: int, bound: int = 3) -> CycleClass:
    """Random homogeneous class of the given degree with small integer coefficients."""
    raw = {}
    for key in _monomials(model, degree):
        raw[key] = rng.randint(-bound, bound)
    return normal_form(model, raw)


def _monomials(model: RingModel, degree: int) -> list[tuple[int, ...]]:
    degs = [d for _, d in model.generators]
    out = []

    def rec(i, left, acc):
        if i == len(degs):
            if left == 0:
                out.append(tuple(acc))
            return
        for e in range(left // degs[i] + 1):
            rec(i + 1, left - e * degs[i], acc + [e])

    rec(0, degree, [])
    return out


def random_bundle(rng: random.Random, model: RingModel, rank: int, name: str) -> FormalBundle:
    return FormalBundle(name, rank, tuple(random_class(rng, model, i) for i in range(1, rank + 1)))


def suite_chern_character(rng: random.Random, trials: int = 12) -> list[str]:
    fails = []
    D = 6
    model = universal(D, [("x", 1), ("y", 1), ("z", 2), ("w", 3)])
    for t in range(trials):
        E = random_bundle(rng, model, rng.randint(1, 3), "E")
        F = random_bundle(rng, model, rng.randint(1, 3), "F")
        L = LineBundleSymbol("L", random_class(rng, model, 1))
        chE, chF = chern_character(E, D), chern_character(F, D)
        if chern_character(direct_sum(E, F), D) != chE + chF:
            fails.append(f"trial {t}: ch(E+F) != ch(E)+ch(F) for ranks {E.rank},{F.rank}")
        if chern_character(tensor_line(E, L), D) != chE * chern_character(L, D):
            fails.append(f"trial {t}: ch(E(x)L) != ch(E)ch(L) for rank {E.rank}")
        if chE.degree_component(0) != model.scalar(E.rank):
            fails.append(f"trial {t}: ch_0(E) != rank")
    return fails


def suite_ring_models(rng: random.Random) -> list[str]:
    fails = []
    for n in range(11):
        P = projective_space(n)
        H = P.gen("H")
        if not (H ** (n + 1)).is_zero() or (H ** n).is_zero():
            fails.append(f"P^{n}: H^{n + 1} != 0 or H^{n} == 0")
    for total in range(11):
        for m in range(total + 1):
            n = total - m
            X = product_of_projective_spaces(m, n)
            s = (X.gen("H1") + X.gen("H2")) ** total
            if s.coefficient((m, n)) != comb(total, m):
                fails.append(f"P^{m}xP^{n}: coefficient {s.coefficient((m, n))} != C({total},{m})")
    G = grassmannian(2, 4)
    s1 = G.gen("s1")
    if s1 ** 4 != G.schubert((2, 2)).scale(2):
        fails.append(f"G(2,4): s1^4 = {s1 ** 4}")
    if s1 * s1 != G.schubert((2,)) + G.schubert((1, 1)):
        fails.append(f"G(2,4): s1^2 = {s1 * s1}")
    for k, n in ((2, 4), (2, 5)):
        G = grassmannian(k, n)
        basis = partitions_in_box(k, n - k)
        for lam in basis:
            for mu in basis:
                prod_ = G.schubert(lam) * G.schubert(mu)
                for nu, c in prod_.terms.items():
                    if c.denominator != 1 or c < 0:
                        fails.append(f"G({k},{n}): coefficient of s{nu} in s{lam}*s{mu} is {c}")
                if prod_ != G.schubert(mu) * G.schubert(lam):
                    fails.append(f"G({k},{n}): s{lam}*s{mu} not commutative")
    return fails


def suite_reduction_checks(rng: random.Random, trials: int = 20) -> list[str]:
    fails = []
    for d in range(13):
        for i in range(d + 1):
            if kleiman_smooth_bound(d, i) != (Fraction(i) < Fraction(d + 2, 2)):
                fails.append(f"kleiman({d},{i}) wrong")
            if kleiman_smooth_bound(d, i) and i and not kleiman_smooth_bound(d, i - 1):
                fails.append(f"kleiman({d},·) not monotone at {i}")
    models = [projective_space(n) for n in range(1, 6)] + [grassmannian(2, 4), product_of_projective_spaces(1, 2)]
    for t in range(trials):
        model = rng.choice(models)
        p = rng.randint(1, model.top_degree)
        rank = rng.randint(p, p + 1)
        z = random_class(rng, model, p)
        if z.is_zero():
            z = model.hyperplane() ** p
        sign, n = rng.choice((1, -1)), rng.randint(-4, 4)
        H = model.hyperplane()
        chern_list = [random_class(rng, model, i) for i in range(1, rank + 1)]
        chern_list[p - 1] = z.scale(sign * factorial(p - 1)) + H ** p * n
        E = FormalBundle("E", rank, tuple(chern_list))
        inst = SyzygyInstance(model, z, E, n, sign, p)
        if not verify_syzygy_identity(inst):
            fails.append(f"true syzygy instance rejected in {model.id}, p={p}")
        if (H ** p).is_zero():
            continue
        for dn in (1, -1):
            bad = verify_syzygy_identity(SyzygyInstance(model, z, E, n + dn, sign, p))
            if bad.ok or bad.residual.is_zero():
                fails.append(f"perturbed syzygy instance accepted in {model.id}, p={p}")
    for t in range(trials):
        model = rng.choice(models)
        gens = [model.gen(g) for g in model.generator_names]
        if rng.random() < 0.5:
            gens = gens[:1] + [random_class(rng, model, rng.randint(1, model.top_degree))]
            gens = [g for g in gens if not g.is_zero()]
        degree = rng.randint(0, model.top_degree)
        target = random_class(rng, model, degree)
        res = express_in_subalgebra(target, gens, model.top_degree)
        if res.representable and res.evaluate() != target:
            fails.append(f"express_in_subalgebra solution does not re-evaluate in {model.id}")
    for n in range(1, 7):
        P = projective_space(n)
        for degree in range(n + 1):
            target = random_class(rng, P, degree) + P.gen("H") ** degree
            if not express_in_subalgebra(target, [P.gen("H")], n).representable:
                fails.append(f"P^{n}: degree-{degree} class not representable by H")
    return fails


SUITES: list[tuple[str, Callable[[random.Random], list[str]]]] = [
    ("Vandermonde fidelity", suite_vandermonde),
    ("x_i certificates", suite_xi_certificates),
    ("top Chern certificates", suite_top_certificates),
    ("twist formula vs root oracle", suite_twist_oracle),
    ("Chern character homomorphism", suite_chern_character),
    ("ring models", suite_ring_models),
    ("reduction checks", suite_reduction_checks),
]


def run_suite(number: int, seed: int = 20240601) -> SuiteResult:
    name, fn = SUITES[number - 1]
    start = time.perf_counter()
    try:
        fails = fn(random.Random(seed + number))
    except Exception as exc:  # a crash is a failed suite, not a crashed selftest
        fails = [f"{type(exc).__name__}: {exc}"]
    return SuiteResult(number, name, tuple(fails), time.perf_counter() - start)


def run_all(seed: int = 20240601) -> list[SuiteResult]:
    return [run_suite(i, seed) for i in range(1, len(SUITES) + 1)]
