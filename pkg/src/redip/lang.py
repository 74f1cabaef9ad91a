"""The loop-free source language: AST, parser, and desugaring.

Core statements (everything the translator and the reference interpreter
understand) are: set a variable to zero, add a constant / another variable /
a distribution sample / an iid sum of samples, decrement, observe a guard,
probabilistic choice, conditional, and sequencing.

Surface conveniences all desugar at parse time:

* `skip`               -> `x0 += 0` for the first program variable x0
* `x := e` (linear e)  -> set-to-zero plus increments; a self-reference with
                          coefficient one skips the set-to-zero
* `<=, ==, !=, >, >=`  -> threshold atoms, conjunction, negation
* `g or h`             -> `not (not g and not h)`
* `true` / `false`     -> tautology / contradiction over x0

Programs are plain text, one statement chain separated by `;`, with `{}`
blocks, `//` line comments, and UTF-8 encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .dists import (
    Bernoulli,
    Binomial,
    Custom,
    Dirac,
    DistSpec,
    Geometric,
    NegBinomial,
    Uniform,
)
from .errors import InvalidParameter, ProbabilityRangeError, RedipSyntaxError, UnknownVariable
from .guards import And, Guard, LessThan, ModEq, Not

# ---------------------------------------------------------------- core AST


@dataclass(frozen=True)
class SetZero:
    var: str


@dataclass(frozen=True)
class IncrConst:
    var: str
    amount: int


@dataclass(frozen=True)
class IncrDist:
    var: str
    dist: DistSpec


@dataclass(frozen=True)
class IncrVar:
    var: str
    source: str


@dataclass(frozen=True)
class IncrIid:
    """Add the sum of `count_var` independent draws from `dist` to `var`."""

    var: str
    dist: DistSpec
    count_var: str


@dataclass(frozen=True)
class Decrement:
    var: str


@dataclass(frozen=True)
class Observe:
    guard: Guard


@dataclass(frozen=True)
class Choice:
    left: "Program"
    prob: Fraction
    right: "Program"


@dataclass(frozen=True)
class IfElse:
    guard: Guard
    then_branch: "Program"
    else_branch: "Program"


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


Program = Union[
    SetZero, IncrConst, IncrDist, IncrVar, IncrIid, Decrement, Observe, Choice, IfElse, Seq
]

_BASE_STATEMENTS = (SetZero, IncrConst, IncrDist, IncrVar, IncrIid, Decrement, Observe)


def program_size(p: Program) -> int:
    """Statement count: sequencing adds, branching adds one for the split."""
    if isinstance(p, Seq):
        return program_size(p.first) + program_size(p.second)
    if isinstance(p, Choice):
        return 1 + program_size(p.left) + program_size(p.right)
    if isinstance(p, IfElse):
        return 1 + program_size(p.then_branch) + program_size(p.else_branch)
    if isinstance(p, _BASE_STATEMENTS):
        return 1
    raise TypeError(f"not a program: {p!r}")


def _guard_vars_ordered(g: Guard, out: list[str]) -> None:
    if isinstance(g, (LessThan, ModEq)):
        if g.var not in out:
            out.append(g.var)
    elif isinstance(g, And):
        _guard_vars_ordered(g.left, out)
        _guard_vars_ordered(g.right, out)
    elif isinstance(g, Not):
        _guard_vars_ordered(g.inner, out)


def program_vars(p: Program) -> tuple[str, ...]:
    """Variables in order of first appearance; this is the program alphabet."""
    out: list[str] = []

    def add(v: str) -> None:
        if v not in out:
            out.append(v)

    def walk(node: Program) -> None:
        if isinstance(node, (SetZero, IncrConst, Decrement)):
            add(node.var)
        elif isinstance(node, IncrDist):
            add(node.var)
        elif isinstance(node, IncrVar):
            add(node.var)
            add(node.source)
        elif isinstance(node, IncrIid):
            add(node.var)
            add(node.count_var)
        elif isinstance(node, Observe):
            _guard_vars_ordered(node.guard, out)
        elif isinstance(node, Choice):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, IfElse):
            _guard_vars_ordered(node.guard, out)
            walk(node.then_branch)
            walk(node.else_branch)
        elif isinstance(node, Seq):
            walk(node.first)
            walk(node.second)
        else:
            raise TypeError(f"not a program: {node!r}")

    walk(p)
    return tuple(out)


def seq_all(stmts: list[Program]) -> Program:
    if not stmts:
        raise ValueError("empty statement list")
    out = stmts[0]
    for s in stmts[1:]:
        out = Seq(out, s)
    return out


# ---------------------------------------------------------------- tokens

_KEYWORDS = {
    "if", "else", "observe", "skip", "iid", "true", "false", "and", "or", "not",
}
# distribution names are reserved so a stray `geometric` used as a variable
# fails loudly instead of silently shadowing the distribution
_DIST_NAMES = {
    "geometric", "bernoulli", "dirac", "uniform", "binomial", "negbinomial", "custom",
}
_TWO_CHAR = {":=", "+=", "--", "<=", ">=", "==", "!="}
_ONE_CHAR = set(";{}[](),%+*/<>")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NUMBER, STRING, OP, KEYWORD, EOF
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        two = source[i : i + 2]
        if two in _TWO_CHAR:
            toks.append(Token("OP", two, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            toks.append(Token("NUMBER", source[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = "KEYWORD" if word in _KEYWORDS else "IDENT"
            toks.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and source[j] not in '"\n':
                j += 1
            if j >= n or source[j] != '"':
                raise RedipSyntaxError("unterminated string", start_line, start_col)
            toks.append(Token("STRING", source[i + 1 : j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch in _ONE_CHAR:
            toks.append(Token("OP", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        raise RedipSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------- parser

# placeholders resolved once the first program variable is known
@dataclass(frozen=True)
class _SkipStmt:
    pass


@dataclass(frozen=True)
class _TrueGuard:
    var: str = ""


@dataclass(frozen=True)
class _FalseGuard:
    var: str = ""


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.vars_seen: list[str] = []

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def error(self, message: str, tok: Optional[Token] = None) -> RedipSyntaxError:
        tok = tok or self.cur
        return RedipSyntaxError(message, tok.line, tok.col)

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        tok = self.cur
        if tok.kind == kind and (text is None or tok.text == text):
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.accept(kind, text)
        if tok is None:
            want = text if text is not None else kind
            got = self.cur.text or self.cur.kind
            raise self.error(f"expected {want!r}, got {got!r}")
        return tok

    def variable(self) -> str:
        tok = self.cur
        if tok.kind != "IDENT":
            raise self.error(f"expected a variable name, got {tok.text or tok.kind!r}")
        if tok.text in _DIST_NAMES:
            raise self.error(f"{tok.text!r} is a reserved distribution name")
        self.pos += 1
        if tok.text not in self.vars_seen:
            self.vars_seen.append(tok.text)
        return tok.text

    def natural(self) -> int:
        tok = self.expect("NUMBER")
        if "." in tok.text:
            raise self.error("expected a natural number, got a decimal", tok)
        return int(tok.text)

    def probability(self) -> Fraction:
        tok = self.expect("NUMBER")
        if self.accept("OP", "/"):
            if "." in tok.text:
                raise self.error("ratio parts must be naturals", tok)
            den_tok = self.expect("NUMBER")
            if "." in den_tok.text:
                raise self.error("ratio parts must be naturals", den_tok)
            den = int(den_tok.text)
            if den == 0:
                raise self.error("zero denominator", den_tok)
            value = Fraction(int(tok.text), den)
        else:
            value = Fraction(tok.text)  # exact: "0.5" -> 1/2
        if not 0 <= value <= 1:
            raise ProbabilityRangeError(f"probability {value} outside [0, 1]", tok.line, tok.col)
        return value

    # ----- programs and statements

    def program(self) -> Program:
        stmts = [self.statement()]
        while self.accept("OP", ";"):
            if self.cur.kind == "EOF" or self.cur.text == "}":
                break  # tolerate a trailing separator
            stmts.append(self.statement())
        return seq_all(stmts)

    def block(self) -> Program:
        self.expect("OP", "{")
        body = self.program()
        self.expect("OP", "}")
        return body

    def statement(self) -> Program:
        tok = self.cur
        if tok.kind == "KEYWORD" and tok.text == "skip":
            self.pos += 1
            return _SkipStmt()
        if tok.kind == "KEYWORD" and tok.text == "observe":
            self.pos += 1
            self.expect("OP", "(")
            g = self.guard()
            self.expect("OP", ")")
            return Observe(g)
        if tok.kind == "KEYWORD" and tok.text == "if":
            self.pos += 1
            self.expect("OP", "(")
            g = self.guard()
            self.expect("OP", ")")
            then_branch = self.block()
            self.expect("KEYWORD", "else")
            else_branch = self.block()
            return IfElse(g, then_branch, else_branch)
        if tok.text == "{":
            left = self.block()
            self.expect("OP", "[")
            prob = self.probability()
            self.expect("OP", "]")
            right = self.block()
            return Choice(left, prob, right)
        if tok.kind == "IDENT":
            var = self.variable()
            if self.accept("OP", ":="):
                return self.assignment(var)
            if self.accept("OP", "+="):
                return self.increment(var)
            if self.accept("OP", "--"):
                return Decrement(var)
            raise self.error("expected ':=', '+=' or '--' after variable")
        raise self.error(f"expected a statement, got {tok.text or tok.kind!r}")

    def assignment(self, var: str) -> Program:
        at = self.cur
        const, coeffs = self.linear_expr()
        self_coeff = coeffs.pop(var, 0)
        if self_coeff > 1:
            raise self.error(
                f"cannot expand assignment: {var!r} occurs with coefficient {self_coeff}", at
            )
        stmts: list[Program] = []
        if self_coeff == 0:
            stmts.append(SetZero(var))
        if const > 0:
            stmts.append(IncrConst(var, const))
        for source, k in coeffs.items():
            stmts.extend(IncrVar(var, source) for _ in range(k))
        if not stmts:
            stmts.append(IncrConst(var, 0))  # x := x
        return seq_all(stmts)

    def linear_expr(self) -> tuple[int, dict[str, int]]:
        const = 0
        coeffs: dict[str, int] = {}

        def term() -> None:
            nonlocal const
            if self.cur.kind == "NUMBER":
                k = self.natural()
                if self.accept("OP", "*"):
                    v = self.variable()
                    coeffs[v] = coeffs.get(v, 0) + k
                else:
                    const += k
            else:
                v = self.variable()
                coeffs[v] = coeffs.get(v, 0) + 1

        term()
        while self.accept("OP", "+"):
            term()
        return const, coeffs

    def increment(self, var: str) -> Program:
        tok = self.cur
        if tok.kind == "NUMBER":
            return IncrConst(var, self.natural())
        if tok.kind == "KEYWORD" and tok.text == "iid":
            self.pos += 1
            self.expect("OP", "(")
            dist = self.distribution()
            self.expect("OP", ",")
            count_var = self.variable()
            self.expect("OP", ")")
            return IncrIid(var, dist, count_var)
        if tok.kind == "IDENT" and tok.text in _DIST_NAMES:
            return IncrDist(var, self.distribution())
        if tok.kind == "IDENT":
            return IncrVar(var, self.variable())
        raise self.error("expected an amount, variable, or distribution after '+='")

    def distribution(self) -> DistSpec:
        tok = self.cur
        if tok.kind != "IDENT" or tok.text not in _DIST_NAMES:
            raise self.error(f"expected a distribution name, got {tok.text or tok.kind!r}")
        self.pos += 1
        name = tok.text
        self.expect("OP", "(")
        try:
            if name == "geometric":
                spec: DistSpec = Geometric(self.probability())
            elif name == "bernoulli":
                spec = Bernoulli(self.probability())
            elif name == "dirac":
                spec = Dirac(self.natural())
            elif name == "uniform":
                spec = Uniform(self.natural())
            elif name == "binomial":
                trials = self.natural()
                self.expect("OP", ",")
                spec = Binomial(trials, self.probability())
            elif name == "negbinomial":
                successes = self.natural()
                self.expect("OP", ",")
                spec = NegBinomial(successes, self.probability())
            else:
                path = self.expect("STRING")
                spec = Custom(path.text)
        except InvalidParameter as exc:
            raise self.error(str(exc), tok) from exc
        self.expect("OP", ")")
        return spec

    # ----- guards (precedence: not > and > or)

    def guard(self) -> Guard:
        left = self.guard_conj()
        while self.accept("KEYWORD", "or"):
            right = self.guard_conj()
            left = Not(And(Not(left), Not(right)))
        return left

    def guard_conj(self) -> Guard:
        left = self.guard_neg()
        while self.accept("KEYWORD", "and"):
            left = And(left, self.guard_neg())
        return left

    def guard_neg(self) -> Guard:
        if self.accept("KEYWORD", "not"):
            inner = self.guard_neg()
            return inner.inner if isinstance(inner, Not) else Not(inner)
        return self.guard_primary()

    def guard_primary(self) -> Guard:
        tok = self.cur
        if self.accept("KEYWORD", "true"):
            return _TrueGuard()
        if self.accept("KEYWORD", "false"):
            return _FalseGuard()
        if self.accept("OP", "("):
            g = self.guard()
            self.expect("OP", ")")
            return g
        if tok.kind == "IDENT":
            return self.guard_atom()
        raise self.error(f"expected a guard, got {tok.text or tok.kind!r}")

    def guard_atom(self) -> Guard:
        var = self.variable()
        op_tok = self.cur
        if self.accept("OP", "%"):
            modulus = self.natural()
            self.expect("OP", "==")
            residue = self.natural()
            if modulus <= residue:
                raise self.error(
                    f"congruence needs modulus > residue, got {modulus} <= {residue}", op_tok
                )
            return ModEq(var, modulus, residue)
        for op in ("<=", ">=", "==", "!=", "<", ">"):
            if self.accept("OP", op):
                n = self.natural()
                return _compare(var, op, n)
        raise self.error("expected a comparison operator", op_tok)


def _compare(var: str, op: str, n: int) -> Guard:
    if op == "<":
        return LessThan(var, n)
    if op == "<=":
        return LessThan(var, n + 1)
    if op == ">":
        return Not(LessThan(var, n + 1))
    if op == ">=":
        return Not(LessThan(var, n))
    eq: Guard = And(LessThan(var, n + 1), Not(LessThan(var, n)))
    if op == "==":
        return eq
    return Not(eq)


def _resolve_guard(g: Guard, x0: str) -> Guard:
    if isinstance(g, _TrueGuard):
        return Not(LessThan(x0, 0))
    if isinstance(g, _FalseGuard):
        return LessThan(x0, 0)
    if isinstance(g, And):
        return And(_resolve_guard(g.left, x0), _resolve_guard(g.right, x0))
    if isinstance(g, Not):
        return Not(_resolve_guard(g.inner, x0))
    return g


def _resolve(p: Program, x0: str) -> Program:
    if isinstance(p, _SkipStmt):
        return IncrConst(x0, 0)
    if isinstance(p, Observe):
        return Observe(_resolve_guard(p.guard, x0))
    if isinstance(p, IfElse):
        return IfElse(
            _resolve_guard(p.guard, x0),
            _resolve(p.then_branch, x0),
            _resolve(p.else_branch, x0),
        )
    if isinstance(p, Choice):
        return Choice(_resolve(p.left, x0), p.prob, _resolve(p.right, x0))
    if isinstance(p, Seq):
        return Seq(_resolve(p.first, x0), _resolve(p.second, x0))
    return p


def parse_program(source: str) -> Program:
    """Parse and desugar a source program; raises RedipSyntaxError with a
    1-based line:column position on bad input."""
    parser = _Parser(tokenize(source))
    surface = parser.program()
    parser.expect("EOF")
    x0 = parser.vars_seen[0] if parser.vars_seen else "x"
    return _resolve(surface, x0)


def parse_guard(source: str, alphabet: tuple[str, ...]) -> Guard:
    """Parse a standalone guard (for queries). Variables must come from the
    given alphabet."""
    parser = _Parser(tokenize(source))
    surface = parser.guard()
    parser.expect("EOF")
    x0 = alphabet[0] if alphabet else "x"
    g = _resolve_guard(surface, x0)
    unknown = [v for v in parser.vars_seen if v not in alphabet]
    if unknown:
        raise UnknownVariable(f"guard mentions {unknown} outside {alphabet}")
    return g


def parse_valuation(text: str) -> dict[str, int]:
    """Parse "x=2,r=0" into a valuation mapping."""
    out: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, value = part.partition("=")
        name = name.strip()
        value = value.strip()
        if not sep or not name or not value.isdigit():
            raise ValueError(f"malformed valuation entry {part!r} (want var=nat)")
        out[name] = int(value)
    if not out:
        raise ValueError("empty valuation")
    return out


# ---------------------------------------------------------------- rendering


def guard_to_text(g: Guard) -> str:
    if isinstance(g, LessThan):
        return f"{g.var} < {g.bound}"
    if isinstance(g, ModEq):
        return f"{g.var} % {g.modulus} == {g.residue}"
    if isinstance(g, And):
        return f"({guard_to_text(g.left)} and {guard_to_text(g.right)})"
    if isinstance(g, Not):
        return f"not ({guard_to_text(g.inner)})"
    raise TypeError(f"not a core guard: {g!r}")


def dist_to_text(d: DistSpec) -> str:
    if isinstance(d, Geometric):
        return f"geometric({d.p})"
    if isinstance(d, Bernoulli):
        return f"bernoulli({d.p})"
    if isinstance(d, Dirac):
        return f"dirac({d.value})"
    if isinstance(d, Uniform):
        return f"uniform({d.size})"
    if isinstance(d, Binomial):
        return f"binomial({d.trials}, {d.p})"
    if isinstance(d, NegBinomial):
        return f"negbinomial({d.successes}, {d.p})"
    if isinstance(d, Custom):
        return f'custom("{d.path}")'
    raise TypeError(f"not a distribution: {d!r}")


def _stmt_list(p: Program) -> Iterator[Program]:
    if isinstance(p, Seq):
        yield from _stmt_list(p.first)
        yield from _stmt_list(p.second)
    else:
        yield p


def program_to_text(p: Program, indent: str = "") -> str:
    lines = []
    for stmt in _stmt_list(p):
        lines.append(_stmt_text(stmt, indent))
    return ";\n".join(lines)


def _stmt_text(p: Program, indent: str) -> str:
    pad = indent
    inner = indent + "  "
    if isinstance(p, SetZero):
        return f"{pad}{p.var} := 0"
    if isinstance(p, IncrConst):
        return f"{pad}{p.var} += {p.amount}"
    if isinstance(p, IncrDist):
        return f"{pad}{p.var} += {dist_to_text(p.dist)}"
    if isinstance(p, IncrVar):
        return f"{pad}{p.var} += {p.source}"
    if isinstance(p, IncrIid):
        return f"{pad}{p.var} += iid({dist_to_text(p.dist)}, {p.count_var})"
    if isinstance(p, Decrement):
        return f"{pad}{p.var}--"
    if isinstance(p, Observe):
        return f"{pad}observe({guard_to_text(p.guard)})"
    if isinstance(p, Choice):
        return (
            f"{pad}{{\n{program_to_text(p.left, inner)}\n{pad}}} [{p.prob}] {{\n"
            f"{program_to_text(p.right, inner)}\n{pad}}}"
        )
    if isinstance(p, IfElse):
        return (
            f"{pad}if ({guard_to_text(p.guard)}) {{\n{program_to_text(p.then_branch, inner)}\n"
            f"{pad}}} else {{\n{program_to_text(p.else_branch, inner)}\n{pad}}}"
        )
    raise TypeError(f"not a statement: {p!r}")
