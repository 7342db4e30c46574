"""lci certificates: Chern classes as rational combinations of twisted top Chern classes.

Write ``P(m) = c_r(E (x) L^{m+1})``.  Expanding the twist of ``E (x) L`` by
``L^m`` gives ``P(m) = sum_i m^i x_i`` with ``x_i = c1(L)^i c_{r-i}(E (x) L)``,
a polynomial of degree r in m.  Evaluating at ``m = 0..r`` is a Vandermonde
system whose inverse yields each ``x_i``; evaluating at ``m = -1`` yields
``c_r(E)``.  Every atom ``c_r(E (x) L^k)``, ``k = 1..r+1``, is the top Chern
class of a globally generated bundle, hence the class of the zero scheme of a
section, hence lci.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Union

from .chern import (
    LCI_PROVENANCE,
    FormalBundle,
    LineBundleSymbol,
    generic_setup,
    line_power,
    tensor_line,
)
from .errors import ChernForgeError, IndexOutOfRange, ModelMismatch, RankMismatch
from .exact import format_rational, lagrange_extrapolate_coeffs, solve_linear, vandermonde_matrix
from .expr import BinOp, Expr, Pow, chern, linear_combination
from .ring import CycleClass, RingModel
from .symfunc import OracleReport, oracle_check

LINE_GG = "L globally generated"
TWIST_GG = "E⊗L globally generated"
BOTH = (LINE_GG, TWIST_GG)


@dataclass(frozen=True)
class TwistAtom:
    """``c_r(E (x) L^k)``."""

    k: int
    rank: int
    provenance: str = LCI_PROVENANCE


@dataclass(frozen=True)
class XiClass:
    """``c1(L)^i c_{r-i}(E (x) L)``."""

    i: int


@dataclass(frozen=True)
class TopChern:
    pass


Target = Union[XiClass, TopChern]


@dataclass(frozen=True)
class Certificate:
    target: Target
    rank: int
    atoms: tuple[tuple[Fraction, TwistAtom], ...]
    assumptions: tuple[str, ...] = BOTH
    verified_in: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if len(self.atoms) > self.rank + 1:
            raise ValueError("a certificate has at most rank+1 atoms")
        ks = [a.k for _, a in self.atoms]
        if len(set(ks)) != len(ks):
            raise ValueError(f"atom twists must be distinct, got {ks}")

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return {a.k: q for q, a in self.atoms}

    @property
    def conditional(self) -> bool:
        return not set(BOTH) <= set(self.assumptions)

    def with_verified(self, model_ids) -> "Certificate":
        ids = tuple(dict.fromkeys(self.verified_in + tuple(model_ids)))
        return Certificate(self.target, self.rank, self.atoms, self.assumptions, ids)

    def with_assumptions(self, *, line_gg: bool, twist_gg: bool) -> "Certificate":
        return Certificate(self.target, self.rank, self.atoms,
                           _assumptions(line_gg, twist_gg), self.verified_in)

    def target_json(self):
        return "c_top" if isinstance(self.target, TopChern) else {"xi": self.target.i}

    def to_json(self) -> dict:
        return {
            "target": self.target_json(),
            "rank": self.rank,
            "atoms": [{"k": a.k, "coeff": format_rational(q)} for q, a in self.atoms],
            "assumptions": list(self.assumptions),
            "verified_in": list(self.verified_in),
        }

    def describe(self, bundle: str = "E", line: str = "L") -> str:
        r = self.rank
        if isinstance(self.target, TopChern):
            lhs = f"c{r}({bundle})"
        else:
            i = self.target.i
            ell = f"c1({line})" + (f"^{i}" if i > 1 else "")
            lhs = (f"{ell}*" if i else "") + f"c{r - i}({bundle}*{line})" if i < r else ell
        rhs = []
        for q, a in self.atoms:
            atom = f"c{r}({bundle}*{line}" + (f"^{a.k}" if a.k != 1 else "") + ")"
            mag = abs(q)
            body = atom if mag == 1 else f"{format_rational(mag)}*{atom}"
            if not rhs:
                rhs.append(body if q > 0 else f"-{body}")
            else:
                rhs.append(f"+ {body}" if q > 0 else f"- {body}")
        return f"{lhs} = {' '.join(rhs) or '0'}"


def _assumptions(line_gg: bool, twist_gg: bool) -> tuple[str, ...]:
    return tuple(a for a, flag in zip(BOTH, (line_gg, twist_gg)) if flag)


def _atoms(rank: int, coeffs) -> tuple[tuple[Fraction, TwistAtom], ...]:
    return tuple((Fraction(q), TwistAtom(m + 1, rank)) for m, q in enumerate(coeffs) if q != 0)


def inverse_vandermonde_row(r: int, i: int) -> tuple[Fraction, ...]:
    """Row i of ``V^{-1}`` by solving ``V^T y = e_i``."""
    vt = vandermonde_matrix(r).transpose()
    return solve_linear(vt, [int(j == i) for j in range(r + 1)])


def certify_xi(r: int, i: int, *, line_gg: bool = True, twist_gg: bool = True) -> Certificate:
    if r < 1:
        raise ValueError("rank must be positive")
    if not 0 <= i <= r:
        raise IndexOutOfRange(f"x_i needs 0 <= i <= {r}, got i={i}")
    return Certificate(XiClass(i), r, _atoms(r, inverse_vandermonde_row(r, i)),
                       _assumptions(line_gg, twist_gg))


def top_coefficients_via_solve(r: int) -> tuple[Fraction, ...]:
    """``c_r(E) = sum_i (-1)^i x_i`` composed with the Vandermonde inverse."""
    out = [Fraction(0)] * (r + 1)
    for i in range(r + 1):
        for m, q in enumerate(inverse_vandermonde_row(r, i)):
            out[m] += (-1) ** i * q
    return tuple(out)


def top_coefficients_via_lagrange(r: int) -> tuple[Fraction, ...]:
    """Extrapolate ``P(m)`` from the nodes ``m = 0..r`` to ``m = -1``."""
    return lagrange_extrapolate_coeffs(list(range(r + 1)), -1)


def top_coefficients_closed_form(r: int) -> tuple[Fraction, ...]:
    return tuple(Fraction((-1) ** m * comb(r + 1, m + 1)) for m in range(r + 1))


class CertificateInconsistency(ChernForgeError):
    """The two independent coefficient computations disagreed."""


def certify_top(r: int, *, line_gg: bool = True, twist_gg: bool = True) -> Certificate:
    if r < 1:
        raise ValueError("rank must be positive")
    solved = top_coefficients_via_solve(r)
    extrapolated = top_coefficients_via_lagrange(r)
    if solved != extrapolated:
        raise CertificateInconsistency(
            f"rank {r}: Vandermonde path {solved} != Lagrange path {extrapolated}")
    return Certificate(TopChern(), r, _atoms(r, solved), _assumptions(line_gg, twist_gg))


# verification


@dataclass(frozen=True)
class Verification:
    ok: bool
    model_id: str
    lhs: CycleClass
    rhs: CycleClass

    @property
    def residual(self) -> CycleClass:
        return self.lhs - self.rhs

    def __bool__(self):
        return self.ok


def target_class(cert: Certificate, E: FormalBundle, L: LineBundleSymbol) -> CycleClass:
    if isinstance(cert.target, TopChern):
        return E.c(cert.rank)
    i = cert.target.i
    return L.c1 ** i * tensor_line(E, L).c(cert.rank - i)


def atom_class(atom: TwistAtom, E: FormalBundle, L: LineBundleSymbol) -> CycleClass:
    return tensor_line(E, line_power(L, atom.k)).c(atom.rank)


def combination_class(cert: Certificate, E: FormalBundle, L: LineBundleSymbol) -> CycleClass:
    return sum((atom_class(a, E, L).scale(q) for q, a in cert.atoms), E.model.zero())


def verify_certificate(cert: Certificate, E: FormalBundle, L: LineBundleSymbol,
                       model: RingModel | None = None) -> Verification:
    """Expand target and atoms with the twist formula in E's model and compare exactly."""
    if E.rank != cert.rank:
        raise RankMismatch(f"certificate is for rank {cert.rank}, {E.name} has rank {E.rank}")
    if E.model != L.model or (model is not None and model != E.model):
        raise ModelMismatch("bundle, line bundle and model must share one ring model")
    lhs = target_class(cert, E, L)
    rhs = combination_class(cert, E, L)
    return Verification(lhs == rhs, E.model.id, lhs, rhs)


def verify_generic(cert: Certificate, degree: int | None = None) -> Verification:
    """Verify in the universal ring truncated at ``degree`` (default: the rank)."""
    _, E, L = generic_setup(cert.rank, degree)
    return verify_certificate(cert, E, L)


def certificate_expressions(cert: Certificate, bundle: str = "E", line: str = "L") -> tuple[Expr, Expr]:
    """Target and atom combination as expression trees for the root oracle."""
    r = cert.rank
    if isinstance(cert.target, TopChern):
        target: Expr = chern(r, bundle)
    else:
        i = cert.target.i
        target = BinOp("*", Pow(chern(1, line), i), chern(r - i, bundle, line, 1))
    combo = linear_combination([(q, chern(r, bundle, line, a.k)) for q, a in cert.atoms])
    return target, combo


def oracle_verify(cert: Certificate, bundle: str = "E", line: str = "L") -> OracleReport:
    target, combo = certificate_expressions(cert, bundle, line)
    return oracle_check(target, combo, {bundle: cert.rank}, [line])


# provenance report


@dataclass(frozen=True)
class AtomReason:
    k: int
    reason: str
    consumes: tuple[str, ...]


@dataclass(frozen=True)
class LciReport:
    atoms: tuple[AtomReason, ...]
    conditional: bool
    missing: tuple[str, ...]
    notes: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "atoms": [{"k": a.k, "reason": a.reason, "consumes": list(a.consumes)} for a in self.atoms],
            "conditional": self.conditional,
            "missing_assumptions": list(self.missing),
            "notes": list(self.notes),
        }


_ZERO_SCHEME = ("its top Chern class is the class of the zero scheme Z(s) of a section, "
                "a regular closed immersion of codimension r since X is Cohen-Macaulay")


def lci_flags_report(cert: Certificate) -> LciReport:
    reasons = []
    for _, atom in cert.atoms:
        if atom.k == 1:
            why = f"E⊗L is globally generated by assumption; {_ZERO_SCHEME}"
        else:
            why = (f"E⊗L^{atom.k} = (E⊗L)⊗L^{atom.k - 1} is a tensor product of globally "
                   f"generated bundles, hence globally generated; {_ZERO_SCHEME}")
        reasons.append(AtomReason(atom.k, why, (TWIST_GG, LINE_GG)))
    missing = tuple(a for a in BOTH if a not in cert.assumptions)
    notes = ["the reduced system with r-1 unknowns (x_0 and x_r known) is not used; "
             "the full (r+1)x(r+1) Vandermonde system is solved",
             "lci-ness of atoms is provenance, not a geometric certification",
             "choosing a sufficiently ample L is the caller's responsibility"]
    return LciReport(tuple(reasons), bool(missing), missing, tuple(notes))
