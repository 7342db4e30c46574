"""Lexer, AST, recursive-descent parser and pretty-printer for chernforge programs.

A program is a sequence of ``;``-terminated statements::

    model P(3);
    line L gg;
    bundle E rank 2 gg_twist;
    certify_top E L;

Parsing also resolves names: everything must be declared (in the current
model section) before use.  Errors never raise out of :func:`parse_program`;
they come back as positioned :class:`Diagnostic` values.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from ..expr import BinOp, ChernOf, Expr, Name, Neg, Num, Pos, Pow, Schubert, to_source, walk

KINDS = ("P", "PxP", "G", "universal")
_CHERN_NAME = re.compile(r"c(\d+)$")


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"

    def to_json(self) -> dict:
        return {"severity": self.severity, "message": self.message,
                "line": self.line, "column": self.column}


class DslError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("\n".join(map(str, diagnostics)))
        self.diagnostics = diagnostics


# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, OP, EOF
    text: str
    line: int
    column: int

    @property
    def pos(self) -> Pos:
        return (self.line, self.column)


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<INT>\d+)
  | (?P<OP>==|[;()\[\],=+\-*^/])
""", re.VERBOSE)


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    line, line_start, i = 1, 0, 0
    while i < len(source):
        m = _TOKEN.match(source, i)
        col = i - line_start + 1
        if m is None:
            diags.append(Diagnostic("error", f"unexpected character {source[i]!r}", line, col))
            i += 1
            continue
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("IDENT", "INT", "OP"):
            tokens.append(Token(kind, m.group(), line, col))
        i = m.end()
    tokens.append(Token("EOF", "", line, i - line_start + 1))
    return tokens, diags


# AST


def _pos() -> Pos | None:
    return field(default=None, compare=False)


@dataclass(frozen=True)
class ModelDecl:
    kind: str
    params: tuple[int, ...]
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class LineDecl:
    name: str
    gg: bool = False
    c1: Expr | None = None
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class BundleDecl:
    name: str
    rank: int
    on: str | None = None
    gg_twist: bool = False
    chern: tuple[Expr, ...] | None = None
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class LetBinding:
    name: str
    expr: Expr
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class CertifyTop:
    bundle: str
    line: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class CertifyXi:
    bundle: str
    line: str
    i: int
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class ChQuery:
    name: str
    upto: int
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Expand:
    expr: Expr
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Oracle:
    lhs: Expr
    rhs: Expr
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Kleiman:
    d: int
    i: int
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Syzygy:
    z: Expr
    p: int
    bundle: str
    n: int
    sign: int
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Express:
    expr: Expr
    generators: tuple[str, ...]
    pos: Pos | None = _pos()


Query = Union[CertifyTop, CertifyXi, ChQuery, Expand, Oracle, Kleiman, Syzygy, Express]
Statement = Union[ModelDecl, LineDecl, BundleDecl, LetBinding, Query]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]

    def __len__(self):
        return len(self.statements)


# pretty-printer


def statement_source(s: Statement) -> str:
    if isinstance(s, ModelDecl):
        return f"model {s.kind}({', '.join(map(str, s.params))});"
    if isinstance(s, LineDecl):
        out = f"line {s.name}" + (" gg" if s.gg else "")
        if s.c1 is not None:
            out += f" c1 = {to_source(s.c1)}"
        return out + ";"
    if isinstance(s, BundleDecl):
        out = f"bundle {s.name} rank {s.rank}"
        if s.on is not None:
            out += f" on {s.on}"
        if s.gg_twist:
            out += " gg_twist"
        if s.chern is not None:
            out += f" chern = [{', '.join(to_source(e) for e in s.chern)}]"
        return out + ";"
    if isinstance(s, LetBinding):
        return f"let {s.name} = {to_source(s.expr)};"
    if isinstance(s, CertifyTop):
        return f"certify_top {s.bundle} {s.line};"
    if isinstance(s, CertifyXi):
        return f"certify_xi {s.bundle} {s.line} {s.i};"
    if isinstance(s, ChQuery):
        return f"ch {s.name} upto {s.upto};"
    if isinstance(s, Expand):
        return f"expand {to_source(s.expr)};"
    if isinstance(s, Oracle):
        return f"oracle {to_source(s.lhs)} == {to_source(s.rhs)};"
    if isinstance(s, Kleiman):
        return f"kleiman d={s.d} i={s.i};"
    if isinstance(s, Syzygy):
        return (f"syzygy z={to_source(s.z)} p={s.p} bundle={s.bundle} "
                f"n={s.n} sign={s.sign};")
    if isinstance(s, Express):
        return f"express {to_source(s.expr)} in [{', '.join(s.generators)}];"
    raise TypeError(f"not a statement: {s!r}")


def program_source(p: Program) -> str:
    return "".join(statement_source(s) + "\n" for s in p.statements)


# parser


class _Abort(Exception):
    pass


@dataclass
class _Scope:
    kind: str | None = None
    params: tuple[int, ...] = ()
    generators: tuple[str, ...] = ()
    bundles: dict[str, int] = field(default_factory=dict)
    lines: set[str] = field(default_factory=set)
    lets: set[str] = field(default_factory=set)

    def names(self) -> set[str]:
        return set(self.bundles) | self.lines | self.lets


def model_generator_names(kind: str, params: tuple[int, ...]) -> tuple[str, ...]:
    if kind == "P":
        return ("H",)
    if kind == "PxP":
        return tuple(f"H{t + 1}" for t in range(len(params)))
    if kind == "G":
        k, n = params
        return tuple(f"s{p}" for p in range(1, n - k + 1))
    return ()


class Parser:
    def __init__(self, source: str):
        self.tokens, self.diagnostics = tokenize(source)
        self.i = 0
        self.scope = _Scope()

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def at(self, text: str, kind: str | None = None) -> bool:
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "EOF"

    def error(self, message: str, tok: Token | None = None, abort: bool = True):
        tok = tok or self.tok
        self.diagnostics.append(Diagnostic("error", message, tok.line, tok.column))
        if abort:
            raise _Abort

    def describe(self, t: Token) -> str:
        return "end of input" if t.kind == "EOF" else repr(t.text)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "IDENT":
            self.error(f"expected {what}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_int(self, what: str = "integer") -> int:
        if self.tok.kind != "INT":
            self.error(f"expected {what}, found {self.describe(self.tok)}")
        return int(self.advance().text)

    def signed_int(self, what: str = "integer") -> int:
        negative = False
        if self.at("-", "OP"):
            self.advance()
            negative = True
        elif self.at("+", "OP"):
            self.advance()
        value = self.expect_int(what)
        return -value if negative else value

    def sync(self):
        while self.tok.kind != "EOF" and not self.at(";", "OP"):
            self.advance()
        if self.at(";", "OP"):
            self.advance()

    # program

    def parse(self) -> Program:
        statements = []
        while self.tok.kind != "EOF":
            start = self.i
            try:
                s = self.statement()
            except _Abort:
                self.sync()
                continue
            statements.append(s)
            if self.i == start:
                self.advance()
        return Program(tuple(statements))

    def statement(self) -> Statement:
        t = self.tok
        if t.kind != "IDENT":
            self.error(f"expected a statement, found {self.describe(t)}")
        handler = getattr(self, f"stmt_{t.text}", None)
        if handler is None:
            self.error(f"unknown statement {t.text!r}")
        if t.text != "model" and self.scope.kind is None:
            self.error("no model declared; start the program with a model statement")
        self.advance()
        s = handler(t.pos)
        self.expect(";")
        return s

    def stmt_model(self, pos) -> ModelDecl:
        kt = self.expect_ident("model kind")
        if kt.text not in KINDS:
            self.error(f"unknown model kind {kt.text!r} (expected one of {', '.join(KINDS)})", kt)
        self.expect("(")
        params = [self.expect_int()]
        while self.at(",", "OP"):
            self.advance()
            params.append(self.expect_int())
        self.expect(")")
        arity = {"P": (1, 1), "PxP": (2, 99), "G": (2, 2), "universal": (1, 1)}[kt.text]
        if not arity[0] <= len(params) <= arity[1]:
            self.error(f"model {kt.text} takes {arity[0]} parameter(s), got {len(params)}", kt)
        if kt.text == "G" and not 0 < params[0] < params[1]:
            self.error(f"G(k, n) needs 0 < k < n, got G({params[0]}, {params[1]})", kt)
        gens = model_generator_names(kt.text, tuple(params))
        self.scope = _Scope(kt.text, tuple(params), gens)
        return ModelDecl(kt.text, tuple(params), pos)

    def declare(self, t: Token):
        if t.text in self.scope.names() or t.text in self.scope.generators:
            self.error(f"{t.text!r} is already declared", t)

    def stmt_line(self, pos) -> LineDecl:
        nt = self.expect_ident("line bundle name")
        self.declare(nt)
        gg = False
        c1 = None
        if self.at("gg", "IDENT"):
            self.advance()
            gg = True
        if self.at("c1", "IDENT"):
            self.advance()
            self.expect("=")
            c1 = self.expr()
        self.scope.lines.add(nt.text)
        return LineDecl(nt.text, gg, c1, pos)

    def stmt_bundle(self, pos) -> BundleDecl:
        nt = self.expect_ident("bundle name")
        self.declare(nt)
        self.expect("rank")
        rt = self.tok
        rank = self.expect_int("rank")
        if rank < 1:
            self.error("rank must be positive", rt)
        on = None
        if self.at("on", "IDENT"):
            self.advance()
            ot = self.expect_ident("model kind")
            if ot.text != self.scope.kind:
                self.error(f"bundle declared on {ot.text!r} but the active model is "
                           f"{self.scope.kind!r}", ot)
            on = ot.text
        gg = False
        if self.at("gg_twist", "IDENT"):
            self.advance()
            gg = True
        chern = None
        if self.at("chern", "IDENT"):
            ct = self.advance()
            self.expect("=")
            self.expect("[")
            items = [self.expr()]
            while self.at(",", "OP"):
                self.advance()
                items.append(self.expr())
            self.expect("]")
            if len(items) != rank:
                self.error(f"rank {rank} bundle needs {rank} Chern classes, got {len(items)}", ct)
            chern = tuple(items)
        self.scope.bundles[nt.text] = rank
        return BundleDecl(nt.text, rank, on, gg, chern, pos)

    def stmt_let(self, pos) -> LetBinding:
        nt = self.expect_ident("name")
        self.declare(nt)
        if _CHERN_NAME.match(nt.text) or nt.text == "s":
            self.error(f"{nt.text!r} is reserved", nt)
        self.expect("=")
        e = self.expr()
        self.scope.lets.add(nt.text)
        return LetBinding(nt.text, e, pos)

    def use_bundle(self, t: Token, allow_line: bool = False):
        if t.text in self.scope.bundles or (allow_line and t.text in self.scope.lines):
            return
        if t.text in self.scope.lines:
            self.error(f"{t.text!r} is a line bundle, expected a vector bundle", t)
        self.error(f"unknown bundle {t.text}", t)

    def use_line(self, t: Token):
        if t.text not in self.scope.lines:
            self.error(f"unknown line bundle {t.text}", t)

    def stmt_certify_top(self, pos) -> CertifyTop:
        b = self.expect_ident("bundle name")
        self.use_bundle(b)
        ln = self.expect_ident("line bundle name")
        self.use_line(ln)
        return CertifyTop(b.text, ln.text, pos)

    def stmt_certify_xi(self, pos) -> CertifyXi:
        b = self.expect_ident("bundle name")
        self.use_bundle(b)
        ln = self.expect_ident("line bundle name")
        self.use_line(ln)
        it = self.tok
        i = self.expect_int("index i")
        if i > self.scope.bundles[b.text]:
            self.error(f"index {i} exceeds rank {self.scope.bundles[b.text]} of {b.text}", it)
        return CertifyXi(b.text, ln.text, i, pos)

    def stmt_ch(self, pos) -> ChQuery:
        b = self.expect_ident("bundle name")
        self.use_bundle(b, allow_line=True)
        self.expect("upto")
        return ChQuery(b.text, self.expect_int("degree"), pos)

    def stmt_expand(self, pos) -> Expand:
        return Expand(self.expr(), pos)

    def stmt_oracle(self, pos) -> Oracle:
        lhs = self.expr()
        self.expect("==")
        return Oracle(lhs, self.expr(), pos)

    def keyword_int(self, key: str, signed: bool = False) -> int:
        self.expect(key)
        self.expect("=")
        return self.signed_int(key) if signed else self.expect_int(key)

    def stmt_kleiman(self, pos) -> Kleiman:
        d = self.keyword_int("d")
        it = self.tok
        i = self.keyword_int("i")
        if i > d:
            self.error(f"cycle dimension i={i} exceeds d={d}", it)
        return Kleiman(d, i, pos)

    def stmt_syzygy(self, pos) -> Syzygy:
        self.expect("z")
        self.expect("=")
        z = self.expr()
        pt = self.peek(2)
        p = self.keyword_int("p")
        if p < 1:
            self.error("codimension p must be positive", pt)
        self.expect("bundle")
        self.expect("=")
        b = self.expect_ident("bundle name")
        self.use_bundle(b)
        n = self.keyword_int("n", signed=True)
        st = self.peek(2)
        sign = self.keyword_int("sign", signed=True)
        if sign not in (1, -1):
            self.error("sign must be 1 or -1", st)
        return Syzygy(z, p, b.text, n, sign, pos)

    def stmt_express(self, pos) -> Express:
        e = self.expr()
        self.expect("in")
        self.expect("[")
        gens = [self.generator_name()]
        while self.at(",", "OP"):
            self.advance()
            gens.append(self.generator_name())
        self.expect("]")
        return Express(e, tuple(gens), pos)

    def generator_name(self) -> str:
        t = self.expect_ident("generator name")
        if t.text not in self.scope.lets and t.text not in self.scope.generators:
            self.error(f"unknown name {t.text}", t)
        return t.text

    # expressions

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "OP" and self.tok.text in ("+", "-"):
            op = self.advance()
            left = BinOp(op.text, left, self.term(), op.pos)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*", "OP"):
            op = self.advance()
            left = BinOp("*", left, self.unary(), op.pos)
        return left

    def unary(self) -> Expr:
        if self.at("-", "OP"):
            op = self.advance()
            return Neg(self.unary(), op.pos)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^", "OP"):
            op = self.advance()
            return Pow(base, self.expect_int("exponent"), op.pos)
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            value = Fraction(int(t.text))
            if self.at("/", "OP"):
                self.advance()
                dt = self.tok
                den = self.expect_int("denominator")
                if den == 0:
                    self.error("division by zero", dt)
                value = Fraction(int(t.text), den)
            return Num(value, t.pos)
        if self.at("(", "OP"):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "IDENT":
            m = _CHERN_NAME.match(t.text)
            if m and self.peek().text == "(":
                return self.chern_call(int(m.group(1)))
            if t.text == "s" and self.peek().text == "(":
                return self.schubert()
            self.advance()
            if t.text not in self.scope.lets and t.text not in self.scope.generators:
                self.error(f"unknown name {t.text}", t)
            return Name(t.text, t.pos)
        self.error(f"expected an expression, found {self.describe(t)}")

    def chern_call(self, k: int) -> ChernOf:
        t = self.advance()
        self.expect("(")
        b = self.expect_ident("bundle name")
        self.use_bundle(b, allow_line=True)
        line, power = None, 1
        if self.at("*", "OP"):
            self.advance()
            lt = self.expect_ident("line bundle name")
            self.use_line(lt)
            line = lt.text
            if self.at("^", "OP"):
                self.advance()
                power = self.signed_int("twist power")
        self.expect(")")
        return ChernOf(k, b.text, line, power, t.pos)

    def schubert(self) -> Schubert:
        t = self.advance()
        self.expect("(")
        parts = [self.expect_int()]
        while self.at(",", "OP"):
            self.advance()
            parts.append(self.expect_int())
        self.expect(")")
        if self.scope.kind != "G":
            self.error("Schubert classes s(...) need a Grassmannian model", t)
        k, n = self.scope.params
        if any(a < b for a, b in zip(parts, parts[1:])):
            self.error(f"{parts} is not a partition", t)
        lam = tuple(p for p in parts if p)
        if len(lam) > k or any(p > n - k for p in lam):
            self.error(f"partition {list(lam)} does not fit in the {k}x{n - k} box", t)
        return Schubert(lam, t.pos)


def parse_program(source: str) -> tuple[Program | None, list[Diagnostic]]:
    parser = Parser(source)
    program = parser.parse()
    diags = sorted(parser.diagnostics, key=lambda d: (d.line, d.column))
    return (None, diags) if diags else (program, [])


def parse(source: str) -> Program:
    """Parse or raise :class:`DslError` with every diagnostic found."""
    program, diags = parse_program(source)
    if diags:
        raise DslError(diags)
    return program


def iter_names(e: Expr) -> Iterator[str]:
    for node in walk(e):
        if isinstance(node, Name):
            yield node.name
