"""Evaluation of parsed programs into deterministic reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from ..certificates import (
    Certificate,
    certify_top,
    certify_xi,
    lci_flags_report,
    oracle_verify,
    verify_certificate,
    verify_generic,
)
from ..chern import (
    FormalBundle,
    LineBundleSymbol,
    as_bundle,
    chern_character,
    generic_bundle,
    generic_line,
    line_power,
    tensor_line,
    universal_generators,
)
from ..errors import ChernForgeError, ModelMismatch
from ..exact import format_rational
from ..expr import BinOp, ChernOf, Expr, Name, Neg, Num, Pow, Schubert
from ..reduction import (
    SyzygyInstance,
    express_in_subalgebra,
    kleiman_smooth_bound,
    verify_syzygy_identity,
)
from ..ring import (
    CycleClass,
    RingModel,
    grassmannian,
    product_of_projective_spaces,
    projective_space,
    universal,
)
from ..symfunc import oracle_check
from .syntax import (
    BundleDecl,
    CertifyTop,
    CertifyXi,
    ChQuery,
    Diagnostic,
    Expand,
    Express,
    Kleiman,
    LetBinding,
    LineDecl,
    ModelDecl,
    Oracle,
    Program,
    Statement,
    Syzygy,
    statement_source,
)

Value = Union[Fraction, CycleClass]


@dataclass(frozen=True)
class Options:
    json: bool = False
    verify: bool = False
    max_degree: int | None = None


@dataclass
class Report:
    results: list[dict] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    failures: int = 0

    @property
    def exit_code(self) -> int:
        errors = sum(d.severity == "error" for d in self.diagnostics)
        return 0 if errors == 0 and self.failures == 0 else 1

    def to_json(self) -> dict:
        out: dict = {"results": self.results}
        if self.checks:
            out["checks"] = self.checks
        if self.diagnostics:
            out["diagnostics"] = [d.to_json() for d in self.diagnostics]
        return out


class RuntimeDiagnostic(Exception):
    pass


def build_model(decl: ModelDecl, generators: list[tuple[str, int]]) -> RingModel:
    if decl.kind == "P":
        return projective_space(decl.params[0])
    if decl.kind == "PxP":
        return product_of_projective_spaces(*decl.params)
    if decl.kind == "G":
        return grassmannian(*decl.params)
    return universal(decl.params[0], generators)


def _section(statements: tuple[Statement, ...], start: int) -> list[Statement]:
    out = []
    for s in statements[start + 1:]:
        if isinstance(s, ModelDecl):
            break
        out.append(s)
    return out


class Interpreter:
    def __init__(self, options: Options):
        self.options = options
        self.report = Report()
        self.model: RingModel | None = None
        self.companion: RingModel | None = None
        self.bundles: dict[str, FormalBundle] = {}
        self.lines: dict[str, LineBundleSymbol] = {}
        self.lets: dict[str, CycleClass | Fraction] = {}
        self.let_exprs: dict[str, Expr] = {}

    # environment

    def enter_model(self, decl: ModelDecl, rest: list[Statement]):
        unbound_bundles = {s.name: s.rank for s in rest if isinstance(s, BundleDecl) and s.chern is None}
        unbound_lines = [s.name for s in rest if isinstance(s, LineDecl) and s.c1 is None]
        gens = universal_generators(unbound_bundles, unbound_lines)
        self.model = build_model(decl, gens)
        if decl.kind == "universal":
            self.companion = self.model
        elif gens:
            self.companion = universal(self.model.top_degree, gens)
        else:
            self.companion = None
        self.bundles, self.lines, self.lets, self.let_exprs = {}, {}, {}, {}

    def as_class(self, v: Value, model: RingModel | None = None) -> CycleClass:
        if isinstance(v, CycleClass):
            return v
        return (model or self.model).scalar(v)

    def resolve_bundle(self, name: str) -> FormalBundle:
        if name in self.bundles:
            return self.bundles[name]
        return as_bundle(self.lines[name])

    def evaluate(self, e: Expr) -> Value:
        if isinstance(e, Num):
            return e.value
        if isinstance(e, Name):
            if e.name in self.lets:
                return self.lets[e.name]
            return self.model.gen(e.name)
        if isinstance(e, Schubert):
            return self.model.schubert(e.parts)
        if isinstance(e, ChernOf):
            E = self.resolve_bundle(e.bundle)
            if e.line is not None:
                E = tensor_line(E, line_power(self.lines[e.line], e.power))
            return E.c(e.k)
        if isinstance(e, Neg):
            return -self.evaluate(e.operand)
        if isinstance(e, Pow):
            return self.evaluate(e.base) ** e.exponent
        if isinstance(e, BinOp):
            a, b = self.evaluate(e.left), self.evaluate(e.right)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            return a * b
        raise TypeError(f"not an expression: {e!r}")

    def evaluate_class(self, e: Expr) -> CycleClass:
        return self.as_class(self.evaluate(e))

    def inline(self, e: Expr) -> Expr:
        """Replace let-bound names by their defining expressions."""
        if isinstance(e, Name) and e.name in self.let_exprs:
            return self.let_exprs[e.name]
        if isinstance(e, Neg):
            return Neg(self.inline(e.operand), e.pos)
        if isinstance(e, Pow):
            return Pow(self.inline(e.base), e.exponent, e.pos)
        if isinstance(e, BinOp):
            return BinOp(e.op, self.inline(e.left), self.inline(e.right), e.pos)
        return e

    # statements

    def run(self, program: Program) -> Report:
        for index, s in enumerate(program.statements):
            try:
                if isinstance(s, ModelDecl):
                    self.enter_model(s, _section(program.statements, index))
                else:
                    getattr(self, f"do_{type(s).__name__}")(s, index)
            except (ChernForgeError, ValueError, ZeroDivisionError) as exc:
                line, col = s.pos or (0, 0)
                self.report.diagnostics.append(Diagnostic("error", str(exc), line, col))
        return self.report

    def entry(self, s: Statement, index: int, query: str, **fields) -> dict:
        line, _ = s.pos or (0, 0)
        return {"statement": index, "line": line, "query": query,
                "source": statement_source(s), **fields}

    def do_LineDecl(self, s: LineDecl, index: int):
        if s.c1 is None:
            self.lines[s.name] = generic_line(self.companion, s.name, globally_generated=s.gg)
        else:
            self.lines[s.name] = LineBundleSymbol(s.name, self.evaluate_class(s.c1), s.gg)

    def do_BundleDecl(self, s: BundleDecl, index: int):
        if s.chern is None:
            self.bundles[s.name] = generic_bundle(self.companion, s.name, s.rank,
                                                  globally_generated=s.gg_twist)
            return
        values = [self.evaluate(e) for e in s.chern]
        model = next((v.model for v in values if isinstance(v, CycleClass)), self.model)
        classes = tuple(self.as_class(v, model) for v in values)
        self.bundles[s.name] = FormalBundle(s.name, s.rank, classes, s.gg_twist)

    def do_LetBinding(self, s: LetBinding, index: int):
        self.lets[s.name] = self.evaluate(s.expr)
        self.let_exprs[s.name] = self.inline(s.expr)

    def _certificate_entry(self, s, index, query: str, cert: Certificate, E: FormalBundle,
                           L: LineBundleSymbol) -> dict:
        fields: dict = {"bundle": E.name, "line_bundle": L.name}
        if self.options.verify:
            checks = [verify_generic(cert)]
            if E.model == L.model:
                checks.append(verify_certificate(cert, E, L))
            oracle = oracle_verify(cert, E.name, L.name)
            passed = [v.model_id for v in checks if v.ok]
            cert = cert.with_verified(passed)
            ok = all(v.ok for v in checks) and oracle.equal
            failed = next((v for v in checks if not v.ok), None)
            fields.update(verified=ok,
                          residual=None if failed is None else f"{failed.model_id}: {failed.residual}",
                          oracle_report=oracle.text)
            if not ok:
                self.report.failures += 1
        fields.update(certificate=cert.to_json(), identity=cert.describe(E.name, L.name),
                      lci_report=lci_flags_report(cert).to_json())
        return self.entry(s, index, query, **fields)

    def do_CertifyTop(self, s: CertifyTop, index: int):
        E, L = self.bundles[s.bundle], self.lines[s.line]
        cert = certify_top(E.rank, line_gg=L.globally_generated, twist_gg=E.globally_generated)
        self.report.results.append(self._certificate_entry(s, index, "certify_top", cert, E, L))

    def do_CertifyXi(self, s: CertifyXi, index: int):
        E, L = self.bundles[s.bundle], self.lines[s.line]
        cert = certify_xi(E.rank, s.i, line_gg=L.globally_generated, twist_gg=E.globally_generated)
        self.report.results.append(self._certificate_entry(s, index, "certify_xi", cert, E, L))

    def do_ChQuery(self, s: ChQuery, index: int):
        E = self.resolve_bundle(s.name)
        value = chern_character(E, s.upto)
        self.report.results.append(self.entry(s, index, "ch", value=str(value), **{"class": value.to_json()}))

    def do_Expand(self, s: Expand, index: int):
        value = self.evaluate_class(s.expr)
        self.report.results.append(self.entry(s, index, "expand", value=str(value),
                                              **{"class": value.to_json()}))

    def do_Oracle(self, s: Oracle, index: int):
        ranks = {name: E.rank for name, E in self.bundles.items()}
        scalars = self.model.generator_names
        rep = oracle_check(self.inline(s.lhs), self.inline(s.rhs), ranks, self.lines, scalars)
        if not rep.equal:
            self.report.failures += 1
        self.report.results.append(self.entry(s, index, "oracle", verdict=rep.equal,
                                              oracle_report=rep.text))

    def do_Kleiman(self, s: Kleiman, index: int):
        verdict = kleiman_smooth_bound(s.d, s.i)
        self.report.checks.append(self.entry(s, index, "kleiman", name="kleiman_smooth_bound",
                                             inputs={"d": s.d, "i": s.i}, verdict=verdict))

    def do_Syzygy(self, s: Syzygy, index: int):
        E = self.bundles[s.bundle]
        z = self.evaluate_class(s.z)
        if E.model != self.model:
            raise ModelMismatch(f"bundle {E.name} needs Chern classes bound in {self.model.id}")
        result = verify_syzygy_identity(SyzygyInstance(self.model, z, E, s.n, s.sign, s.p))
        if not result.ok:
            self.report.failures += 1
        inputs = {"z": str(z), "p": s.p, "bundle": s.bundle, "n": s.n, "sign": s.sign}
        self.report.checks.append(self.entry(s, index, "syzygy", name="verify_syzygy_identity",
                                             inputs=inputs, verdict=result.ok,
                                             residual=str(result.residual)))

    def do_Express(self, s: Express, index: int):
        target = self.evaluate_class(s.expr)
        gens = [self.as_class(self.lets[g]) if g in self.lets else self.model.gen(g)
                for g in s.generators]
        bound = self.options.max_degree
        top = target.model.top_degree
        result = express_in_subalgebra(target, gens, top if bound is None else min(bound, top))
        fields: dict = {"name": "express_in_subalgebra",
                        "inputs": {"target": str(target), "generators": list(s.generators),
                                   "max_degree": result.max_degree},
                        "verdict": result.representable}
        if result.representable:
            terms = sorted(result.coefficients.items(), key=lambda kv: (kv[0]))
            fields["coefficients"] = [
                {"monomial": {g: e for g, e in zip(s.generators, mono) if e},
                 "coeff": format_rational(q)} for mono, q in terms]
            fields["expression"] = _format_combination(s.generators, result.coefficients)
        else:
            fields["coefficients"] = None
        self.report.checks.append(self.entry(s, index, "express", **fields))


def _format_combination(names, coefficients) -> str:
    parts = []
    for mono, q in sorted(coefficients.items(), reverse=True):
        m = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e) or "1"
        mag = abs(q)
        body = m if mag == 1 and m != "1" else (format_rational(mag) if m == "1" else f"{format_rational(mag)}*{m}")
        if not parts:
            parts.append(body if q > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if q > 0 else f"- {body}")
    return " ".join(parts) or "0"


def execute(program: Program, options: Options | None = None) -> Report:
    return Interpreter(options or Options()).run(program)


def emit_json(report: Report | dict) -> str:
    data = report.to_json() if isinstance(report, Report) else report
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _color(text: str, code: str, enabled: bool) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if enabled else text


def emit_text(report: Report, color: bool = False, source_name: str | None = None) -> str:
    """Human-readable report; diagnostics are prefixed with ``source_name:`` when given."""
    lines = []
    entries = sorted(report.results + report.checks, key=lambda e: e["statement"])
    for e in entries:
        head = f"[{e['line']}] {e['source']}"
        q = e["query"]
        if q in ("certify_top", "certify_xi"):
            body = e["identity"]
            if "verified" in e:
                mark = _color("verified", "32", color) if e["verified"] else _color("FAILED", "31", color)
                body += f"  [{mark} in {', '.join(e['certificate']['verified_in']) or 'no model'}]"
            if e["lci_report"]["conditional"]:
                body += "  (conditional: missing " + ", ".join(e["lci_report"]["missing_assumptions"]) + ")"
        elif q in ("ch", "expand"):
            body = e["value"]
        elif q == "oracle":
            body = "true" if e["verdict"] else _color("false", "31", color) + "\n  " + \
                e["oracle_report"].replace("\n", "\n  ")
        elif q == "kleiman":
            body = str(e["verdict"]).lower()
        elif q == "syzygy":
            body = "true" if e["verdict"] else _color("false", "31", color) + f" (residual {e['residual']})"
        else:
            body = e.get("expression") or "not representable within the degree bound"
        lines.append(f"{head}\n  {body}")
    for d in report.diagnostics:
        text = f"{source_name}:{d}" if source_name else str(d)
        lines.append(_color(text, "31", color))
    return "\n".join(lines) + ("\n" if lines else "")
