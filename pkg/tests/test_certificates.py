import json
import random
from fractions import Fraction
from math import comb

import pytest

from chernforge.certificates import (
    BOTH,
    LINE_GG,
    TWIST_GG,
    Certificate,
    TopChern,
    TwistAtom,
    XiClass,
    certify_top,
    certify_xi,
    lci_flags_report,
    oracle_verify,
    top_coefficients_closed_form,
    top_coefficients_via_lagrange,
    top_coefficients_via_solve,
    verify_certificate,
    verify_generic,
)
from chernforge.chern import FormalBundle, LineBundleSymbol, generic_setup
from chernforge.errors import IndexOutOfRange, ModelMismatch, RankMismatch
from chernforge.ring import grassmannian, product_of_projective_spaces, projective_space

from .oracles import cramer_solve


def coeffs(cert):
    return {k: q for k, q in cert.coefficients.items()}


def test_xi_zero_is_first_atom():
    for r in range(1, 6):
        assert coeffs(certify_xi(r, 0)) == {1: 1}


def test_xi_small_examples():
    assert coeffs(certify_xi(1, 1)) == {1: -1, 2: 1}
    assert coeffs(certify_xi(2, 2)) == {1: Fraction(1, 2), 2: -1, 3: Fraction(1, 2)}


def test_xi_rows_match_cramer_inverse():
    # row i of V^{-1} is the solution of V^T y = e_i
    for r in range(1, 4):
        vt = [[Fraction(m ** i if (m, i) != (0, 0) else 1) for m in range(r + 1)] for i in range(r + 1)]
        for i in range(r + 1):
            expected = cramer_solve(vt, [Fraction(int(j == i)) for j in range(r + 1)])
            got = certify_xi(r, i).coefficients
            assert [got.get(m + 1, 0) for m in range(r + 1)] == expected


def test_xi_index_range():
    with pytest.raises(IndexOutOfRange):
        certify_xi(2, 3)
    with pytest.raises(IndexOutOfRange):
        certify_xi(2, -1)
    with pytest.raises(ValueError):
        certify_xi(0, 0)


def test_top_examples():
    assert coeffs(certify_top(1)) == {1: 2, 2: -1}
    assert coeffs(certify_top(2)) == {1: 3, 2: -3, 3: 1}


@pytest.mark.parametrize("r", range(1, 7))
def test_top_paths_agree_with_closed_form(r):
    closed = top_coefficients_closed_form(r)
    assert top_coefficients_via_solve(r) == closed
    assert top_coefficients_via_lagrange(r) == closed
    assert closed == tuple(Fraction((-1) ** m * comb(r + 1, m + 1)) for m in range(r + 1))
    cert = certify_top(r)
    assert len(cert.atoms) == r + 1
    assert sum(cert.coefficients.values()) == 1
    for q, a in cert.atoms:
        assert q.denominator == 1 and q != 0
        assert (q > 0) == (a.k % 2 == 1)


@pytest.mark.parametrize("r", range(1, 5))
def test_generic_verification(r):
    assert verify_generic(certify_top(r))
    assert oracle_verify(certify_top(r))
    for i in range(r + 1):
        cert = certify_xi(r, i)
        assert verify_generic(cert), (r, i)
        assert oracle_verify(cert), (r, i)


@pytest.mark.parametrize("r", range(1, 5))
def test_xi_r_is_power_of_line_class(r):
    model, E, L = generic_setup(r)
    from chernforge.certificates import combination_class

    assert combination_class(certify_xi(r, r), E, L) == L.c1 ** r


def test_perturbed_certificate_fails():
    cert = certify_top(3)
    q, atom = cert.atoms[1]
    bad = Certificate(cert.target, 3, (cert.atoms[0], (q + 1, atom)) + cert.atoms[2:])
    result = verify_generic(bad)
    assert not result
    assert not result.residual.is_zero()
    assert not oracle_verify(bad)


def test_concrete_p4_instance():
    P4 = projective_space(4)
    H = P4.gen("H")
    E = FormalBundle("E", 2, (H, H ** 2))
    L = LineBundleSymbol("L", H)
    result = verify_certificate(certify_xi(2, 1), E, L, P4)
    assert result
    assert result.lhs == (H ** 2).scale(3)


def test_verification_errors():
    P4 = projective_space(4)
    H = P4.gen("H")
    E = FormalBundle("E", 2, (H, H ** 2))
    with pytest.raises(RankMismatch):
        verify_certificate(certify_top(3), E, LineBundleSymbol("L", H))
    with pytest.raises(ModelMismatch):
        verify_certificate(certify_top(2), E, LineBundleSymbol("L", projective_space(3).gen("H")))


def _random_concrete(model, rank, rng):
    H = model.hyperplane()
    basis = {d: [k for k in _keys_of_degree(model, d)] for d in range(1, rank + 1)}
    chern = []
    for d in range(1, rank + 1):
        c = model.zero()
        for key in basis[d]:
            c = c + _key_class(model, key).scale(rng.randint(-3, 3))
        chern.append(c)
    ell = H.scale(rng.randint(1, 3))
    return FormalBundle("E", rank, tuple(chern)), LineBundleSymbol("L", ell)


def _keys_of_degree(model, d):
    if model.is_grassmannian:
        from chernforge.ring import partitions_in_box

        k, n = model.params
        return list(partitions_in_box(k, n - k, d))
    from itertools import product

    ranges = [range(n + 1) for n in (model.params if model.kind == "PxP" else model.params[:1])]
    return [e for e in product(*ranges) if sum(e) == d]


def _key_class(model, key):
    if model.is_grassmannian:
        return model.schubert(key)
    from chernforge.ring import normal_form

    return normal_form(model, {key: 1})


@pytest.mark.parametrize("model", [projective_space(4), product_of_projective_spaces(2, 2),
                                   grassmannian(2, 4)], ids=lambda m: m.id)
def test_specialization_to_concrete_models(model):
    rng = random.Random(7)
    for r in (1, 2, 3):
        for _ in range(5):
            E, L = _random_concrete(model, r, rng)
            assert verify_certificate(certify_top(r), E, L)
            for i in range(r + 1):
                assert verify_certificate(certify_xi(r, i), E, L)


def test_lci_report():
    rep = lci_flags_report(certify_top(2))
    assert len(rep.atoms) == 3
    assert all(set(a.consumes) == set(BOTH) for a in rep.atoms)
    assert not rep.conditional
    first = rep.atoms[0]
    assert first.k == 1 and "E⊗L is globally generated by assumption" in first.reason
    cond = lci_flags_report(certify_top(2, twist_gg=False))
    assert cond.conditional and cond.missing == (TWIST_GG,)
    assert certify_top(2, line_gg=False).assumptions == (TWIST_GG,)
    assert certify_top(2, line_gg=False).conditional


def test_certificate_json_schema():
    cert = certify_xi(2, 2).with_verified(["universal(2)", "P(4)"])
    data = json.loads(json.dumps(cert.to_json()))
    assert data == {
        "target": {"xi": 2},
        "rank": 2,
        "atoms": [{"k": 1, "coeff": "1/2"}, {"k": 2, "coeff": "-1"}, {"k": 3, "coeff": "1/2"}],
        "assumptions": [LINE_GG, TWIST_GG],
        "verified_in": ["universal(2)", "P(4)"],
    }
    assert certify_top(1).to_json()["target"] == "c_top"


def test_certificate_invariants():
    atom = TwistAtom(1, 1)
    with pytest.raises(ValueError):
        Certificate(TopChern(), 1, ((Fraction(1), atom), (Fraction(1), atom)))
    with pytest.raises(ValueError):
        Certificate(XiClass(0), 1, tuple((Fraction(1), TwistAtom(k, 1)) for k in (1, 2, 3)))


def test_describe():
    assert certify_top(1).describe() == "c1(E) = 2*c1(E*L) - c1(E*L^2)"
    assert certify_xi(2, 2).describe() == "c1(L)^2 = 1/2*c2(E*L) - c2(E*L^2) + 1/2*c2(E*L^3)"
