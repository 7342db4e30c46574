import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernforge.chern import (
    LCI_PROVENANCE,
    FormalBundle,
    LineBundleSymbol,
    chern_character,
    direct_sum,
    dual,
    dual_line,
    generic_bundle,
    generic_line,
    generic_setup,
    line_power,
    tensor_line,
    top_chern,
    trivial_bundle,
    universal_generators,
)
from chernforge.errors import ModelMismatch
from chernforge.expr import chern
from chernforge.ring import projective_space, universal
from chernforge.symfunc import expand_in_roots, root_names, sympoly_to_class, to_elementary


def split_twist(model, rank, k, m):
    """c_k(E (x) L^m) through the root expansion, mapped back into the universal ring."""
    roots = root_names("E", rank)
    p = expand_in_roots(chern(k, "E", "L", m), {"E": rank}, ["L"])
    names = [f"c{i}_E" for i in range(1, rank + 1)]
    return sympoly_to_class(to_elementary(p, roots, names), model)


def test_line_power_examples():
    P = projective_space(3)
    L = LineBundleSymbol("L", P.gen("H"), True)
    assert line_power(L, 1) == L
    assert line_power(L, 0).c1.is_zero()
    assert line_power(L, 3).c1 == P.gen("H").scale(3)
    assert line_power(L, 3).globally_generated
    assert not line_power(L, -1).globally_generated


def test_line_requires_degree_one():
    P = projective_space(3)
    with pytest.raises(ValueError):
        LineBundleSymbol("L", P.gen("H") ** 2)


def test_bundle_validation():
    P = projective_space(3)
    H = P.gen("H")
    with pytest.raises(ValueError):
        FormalBundle("E", 0, ())
    with pytest.raises(ValueError):
        FormalBundle("E", 2, (H,))
    with pytest.raises(ValueError):
        FormalBundle("E", 2, (H, H))
    with pytest.raises(ModelMismatch):
        FormalBundle("E", 2, (H, projective_space(4).gen("H") ** 2))


def test_tensor_line_rank_two_examples():
    model, E, L = generic_setup(2)
    c1, c2, ell = model.gen("c1_E"), model.gen("c2_E"), model.gen("l_L")
    EL = tensor_line(E, L)
    assert EL.c(2) == c2 + c1 * ell + ell ** 2
    assert EL.c(1) == c1 + ell.scale(2)
    assert top_chern(EL) == c2 + c1 * ell + ell ** 2


def test_trivial_twist_leaves_chern_classes():
    model, E, L = generic_setup(3)
    assert tensor_line(E, line_power(L, 0)).chern == E.chern


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_tensor_line_matches_splitting_oracle(rank):
    model, E, L = generic_setup(rank)
    for m in range(-1, rank + 1):
        twisted = tensor_line(E, line_power(L, m))
        for k in range(1, rank + 1):
            assert twisted.c(k) == split_twist(model, rank, k, m), (rank, k, m)


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_twist_regrouping(rank):
    model, E, L = generic_setup(rank)
    EL = tensor_line(E, L)
    for m in range(rank + 1):
        lhs = tensor_line(EL, line_power(L, m))
        rhs = tensor_line(E, line_power(L, m + 1))
        assert lhs.chern == rhs.chern


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_twist_then_untwist(rank):
    model, E, L = generic_setup(rank)
    back = tensor_line(tensor_line(E, L), dual_line(L))
    assert back.chern == E.chern


def test_tensor_line_model_mismatch():
    _, E, _ = generic_setup(2)
    L = LineBundleSymbol("L", projective_space(2).gen("H"))
    with pytest.raises(ModelMismatch):
        tensor_line(E, L)


def test_direct_sum_examples():
    model = universal(3, universal_generators({"E": 2}, ["A", "B", "L"]))
    E = generic_bundle(model, "E", 2)
    a, b, ell = model.gen("l_A"), model.gen("l_B"), model.gen("l_L")
    O = trivial_bundle(model, 1)
    s = direct_sum(E, O)
    assert s.rank == 3 and s.c(1) == E.c(1) and s.c(2) == E.c(2) and s.c(3).is_zero()
    two = direct_sum(FormalBundle("A", 1, (a,)), FormalBundle("B", 1, (b,)))
    assert two.rank == 2 and two.c(1) == a + b and two.c(2) == a * b
    with_line = direct_sum(E, FormalBundle("L", 1, (ell,)))
    assert with_line.c(3) == E.c(2) * ell


def test_direct_sum_total_chern_is_product():
    model = universal(5, universal_generators({"E": 2, "F": 3}, []))
    E, F = generic_bundle(model, "E", 2), generic_bundle(model, "F", 3)
    assert direct_sum(E, F).total_chern() == E.total_chern() * F.total_chern()


def test_dual_examples():
    model, E, L = generic_setup(2)
    Lb = FormalBundle("L", 1, (L.c1,))
    assert dual(Lb).c(1) == -L.c1
    assert dual(dual(E)) == FormalBundle(E.name, 2, E.chern, False)
    assert dual(dual(E)).chern == E.chern
    D = dual(E)
    assert D.c(1) == -E.c(1) and D.c(2) == E.c(2)
    # roots -a_i
    from chernforge.symfunc import SymPoly, elementary

    roots = root_names("E", 2)
    neg = [SymPoly.var(v).scale(-1) for v in roots]
    e2 = (neg[0] * neg[1]).canonical()
    assert e2 == elementary(2, roots).canonical()


def test_top_chern_provenance():
    P = projective_space(3)
    H = P.gen("H")
    line = FormalBundle("L", 1, (H,), True)
    assert top_chern(line) == H
    assert top_chern(line).provenance == LCI_PROVENANCE
    E = FormalBundle("E", 2, (H.scale(2), H ** 2), False)
    assert top_chern(E) == H ** 2
    assert top_chern(E).provenance is None


def test_chern_character_line_bundle():
    P2 = projective_space(2)
    H = P2.gen("H")
    L = LineBundleSymbol("L", H)
    assert chern_character(L, 2) == P2.one() + H + (H ** 2).scale(Fraction(1, 2))
    P5 = projective_space(5)
    L5 = LineBundleSymbol("L", P5.gen("H"))
    ch = chern_character(L5, 5)
    from math import factorial

    for d in range(6):
        assert ch.degree_component(d) == (P5.gen("H") ** d).scale(Fraction(1, factorial(d)))


def test_chern_character_degree_two_newton():
    model, E, _ = generic_setup(3)
    c1, c2 = E.c(1), E.c(2)
    ch = chern_character(E, 3)
    assert ch.degree_component(2) == (c1 * c1 - c2.scale(2)).scale(Fraction(1, 2))
    c3 = E.c(3)
    assert ch.degree_component(3) == (c1 ** 3 - (c1 * c2).scale(3) + c3.scale(3)).scale(Fraction(1, 6))
    assert ch.degree_component(0) == model.scalar(3)


def test_chern_character_trivial_and_bounds():
    P = projective_space(4)
    assert chern_character(trivial_bundle(P, 3), 4) == P.scalar(3)
    with pytest.raises(ValueError):
        chern_character(trivial_bundle(P, 1), 5)


def _random_bundle(model, name, rank, rng):
    gens = [g for g, d in model.generators if d == 1]
    chern_classes = []
    for k in range(1, rank + 1):
        c = model.zero()
        for _ in range(3):
            mono = model.one()
            for _ in range(k):
                mono = mono * model.gen(rng.choice(gens))
            c = c + mono.scale(rng.randint(-3, 3))
        chern_classes.append(c)
    return FormalBundle(name, rank, tuple(chern_classes))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3), st.integers(1, 3))
def test_chern_character_is_additive_and_multiplicative(seed, r, s):
    rng = random.Random(seed)
    model = universal(6, [("x", 1), ("y", 1), ("z", 1)])
    E = _random_bundle(model, "E", r, rng)
    F = _random_bundle(model, "F", s, rng)
    ell = model.gen("x").scale(rng.randint(-2, 2)) + model.gen("y").scale(rng.randint(-2, 2))
    L = LineBundleSymbol("L", ell if not ell.is_zero() else model.gen("x"))
    assert chern_character(direct_sum(E, F), 6) == chern_character(E, 6) + chern_character(F, 6)
    assert chern_character(tensor_line(E, L), 6) == chern_character(E, 6) * chern_character(L, 6)
    assert chern_character(E, 6).degree_component(0) == model.scalar(r)


def test_generic_line_and_bundle_names():
    model = universal(2, universal_generators({"E": 2}, ["L"]))
    assert generic_bundle(model, "E", 2).c(2) == model.gen("c2_E")
    assert generic_line(model, "L").c1 == model.gen("l_L")
    assert tensor_line(generic_bundle(model, "E", 2), generic_line(model, "L")).name == "E*L"
