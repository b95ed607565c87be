"""Parser and pretty-printer for the ``.lasso`` problem format.

A problem file is line oriented.  Each statement starts in column 0 and may
continue on following lines that are indented.  ``#`` starts a comment.

    problem productS
    vars    x0 y0 y s
    params  c0 c1 c2 c3 c4
    stem:   s = 0, y = y0
    transition t: y' = y - 1, s' = c0*x0 + c1*y0 + c2*y + c3*s + c4
    exit:   y = 0
    post:   s = x0*y0
    testcase: init {x0: 3, y0: 1, y: 1, s: 0} final {y: 0, s: 3} path t

Right-hand sides of updates read the pre-state; ``old(v)`` is accepted as an
explicit spelling of the same thing.  Variables a transition never mentions
keep their value (a frame update ``v' = v`` is added).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ..errors import DSLSyntaxError, ProgramError
from ..polyring import Poly, is_primed, prime, unprime
from .model import (
    DETERMINISTIC, LassoProgram, SynthesisProblem, TestCase, Transition,
    classify_transition,
)

KEYWORDS = ("problem", "vars", "params", "stem", "transition", "exit", "post", "testcase")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*'?)
  | (?P<op>[-+*/^()=,{}:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, column + pos)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), line, column + pos))
        pos = m.end()
    out.append(Token("end", "", line, column + pos))
    return out


# ---------------------------------------------------------------------------
# expressions: rational functions kept as (numerator, denominator)

Frac = tuple[Poly, Poly]


def _normalize(num: Poly, den: Poly) -> Frac:
    if den.is_zero():
        raise ZeroDivisionError
    if den.is_constant():
        return num.scale(1 / den.constant_value()), Poly.const(1)
    return num, den


class _ExprParser:
    def __init__(self, tokens: list[Token], known: frozenset[str], allow_primed: bool):
        self.tokens = tokens
        self.i = 0
        self.known = known
        self.allow_primed = allow_primed

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None) -> DSLSyntaxError:
        tok = tok or self.tok
        return DSLSyntaxError(msg, tok.line, tok.column)

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text in texts

    def expression(self) -> Frac:
        sign = 1
        if self.at("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
        num, den = self.term()
        num = num.scale(sign)
        while self.at("+", "-"):
            op = self.advance().text
            n2, d2 = self.term()
            if op == "-":
                n2 = -n2
            num, den = (num * d2 + n2 * den, den * d2) if den != d2 else (num + n2, den)
            num, den = _normalize(num, den)
        return num, den

    def term(self) -> Frac:
        num, den = self.unary()
        while self.at("*", "/"):
            op = self.advance()
            n2, d2 = self.unary()
            if op.text == "*":
                num, den = num * n2, den * d2
            else:
                if n2.is_zero():
                    raise self.error("division by zero", op)
                num, den = num * d2, den * n2
            num, den = _normalize(num, den)
        return num, den

    def unary(self) -> Frac:
        if self.at("-"):
            self.advance()
            num, den = self.unary()
            return -num, den
        return self.power()

    def power(self) -> Frac:
        num, den = self.atom()
        if self.at("^"):
            self.advance()
            tok = self.tok
            if tok.kind != "num" or "." in tok.text:
                raise self.error("exponent must be a nonnegative integer literal")
            self.advance()
            k = int(tok.text)
            num, den = num ** k, den ** k
        return num, den

    def atom(self) -> Frac:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Poly.const(Fraction(tok.text)), Poly.const(1)
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name == "old" and self.at("("):
                self.advance()
                inner = self.tok
                if inner.kind != "ident" or is_primed(inner.text):
                    raise self.error("old() takes an unprimed variable name")
                self.advance()
                self.expect(")")
                name = inner.text
                tok = inner
            if name not in self.known:
                if is_primed(name) and unprime(name) in self.known:
                    raise self.error(f"next-state variable {name} not allowed here", tok)
                raise self.error(f"undeclared variable {name!r}", tok)
            if is_primed(name) and not self.allow_primed:
                raise self.error(f"next-state variable {name} not allowed here", tok)
            return Poly.var(name), Poly.const(1)
        if tok.text == "(":
            self.advance()
            value = self.expression()
            self.expect(")")
            return value
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    def equation(self) -> tuple[Frac, Frac, Token]:
        first = self.tok
        lhs = self.expression()
        self.expect("=")
        rhs = self.expression()
        return lhs, rhs, first


def _equation_generator(lhs: Frac, rhs: Frac) -> Poly:
    (ln, ld), (rn, rd) = lhs, rhs
    return ln * rd - rn * ld


# ---------------------------------------------------------------------------
# statements

@dataclass
class _Statement:
    keyword: str
    head: str       # text between keyword and ':' (e.g. transition name)
    body: str
    line: int
    body_column: int


def _statements(text: str) -> Iterator[_Statement]:
    current: list | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace():
            if current is None:
                raise DSLSyntaxError("indented continuation without a statement", lineno, 1)
            current[2].append((lineno, line))
            continue
        if current is not None:
            yield _make_statement(*current)
        current = [lineno, line, []]
    if current is not None:
        yield _make_statement(*current)


def _make_statement(lineno: int, line: str, continuation: list) -> _Statement:
    m = re.match(r"([A-Za-z_]+)", line)
    keyword = m.group(1) if m else ""
    if keyword not in KEYWORDS:
        raise DSLSyntaxError(f"unknown statement {keyword or line.split()[0]!r}", lineno, 1)
    rest = line[len(keyword):]
    if keyword in ("problem", "vars", "params"):
        head, body, col = "", rest.strip(), len(keyword) + 1 + (len(rest) - len(rest.lstrip()))
    else:
        if ":" not in rest:
            raise DSLSyntaxError(f"expected ':' after {keyword}", lineno, len(line) + 1)
        head, body = rest.split(":", 1)
        col = len(keyword) + len(head) + 2
        head = head.strip()
    # continuation lines are joined with spaces; column info is kept for the first line only
    for _, extra in continuation:
        body += " " + extra.strip()
    return _Statement(keyword, head, body, lineno, col)


def _split_top(tokens: list[Token], sep: str = ",") -> list[list[Token]]:
    """Split a token list on ``sep`` outside of parentheses and braces."""
    parts: list[list[Token]] = [[]]
    depth = 0
    for t in tokens[:-1]:
        if t.text in "({":
            depth += 1
        elif t.text in ")}":
            depth -= 1
        if t.text == sep and depth == 0 and t.kind == "op":
            parts.append([])
        else:
            parts[-1].append(t)
    end = tokens[-1]
    return [p + [Token("end", "", end.line, end.column)] for p in parts if p]


def _split_keywords(part: list[Token], words=("guard", "rel")) -> list[list[Token]]:
    """Also break an item before ``guard``/``rel`` when no comma precedes it."""
    out: list[list[Token]] = [[]]
    for i, t in enumerate(part):
        if i and t.kind == "ident" and t.text in words and out[-1]:
            out[-1].append(Token("end", "", t.line, t.column))
            out.append([])
        out[-1].append(t)
    return out


class _Builder:
    def __init__(self):
        self.name: str | None = None
        self.vars: tuple[str, ...] | None = None
        self.params: tuple[str, ...] = ()
        self.stem: list[Poly] = []
        self.exit: list[Poly] = []
        self.post: list[Poly] = []
        self.transitions: list[Transition] = []
        self.testcases: list[tuple[dict, dict, tuple[str, ...], int]] = []
        self.seen: set[str] = set()

    def known(self, primed: bool) -> frozenset[str]:
        names = set(self.vars or ()) | set(self.params)
        if primed:
            names |= {prime(v) for v in self.vars or ()}
        return frozenset(names)

    def tokens(self, st: _Statement) -> list[Token]:
        return tokenize(st.body, st.line, st.body_column + 1)

    def add(self, st: _Statement) -> None:
        kw = st.keyword
        if kw in ("problem", "vars", "params", "stem", "exit", "post") and kw in self.seen:
            raise DSLSyntaxError(f"duplicate {kw} statement", st.line, 1)
        self.seen.add(kw)
        if kw != "problem" and kw != "vars" and self.vars is None and kw != "params":
            raise DSLSyntaxError(f"{kw} before vars declaration", st.line, 1)
        getattr(self, "_" + kw)(st)

    def _names(self, st: _Statement) -> tuple[str, ...]:
        names = tuple(st.body.replace(",", " ").split())
        for n in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n) or n in KEYWORDS or n == "old":
                raise DSLSyntaxError(f"invalid name {n!r}", st.line, st.body_column + 1)
        if len(set(names)) != len(names):
            raise DSLSyntaxError("duplicate name in declaration", st.line, st.body_column + 1)
        return names

    def _problem(self, st: _Statement) -> None:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9.-]*", st.body):
            raise DSLSyntaxError("problem name expected", st.line, st.body_column + 1)
        self.name = st.body

    def _vars(self, st: _Statement) -> None:
        self.vars = self._names(st)
        if not self.vars:
            raise DSLSyntaxError("vars needs at least one variable", st.line, st.body_column + 1)
        self._check_clash(st)

    def _params(self, st: _Statement) -> None:
        self.params = self._names(st)
        self._check_clash(st)

    def _check_clash(self, st: _Statement) -> None:
        if self.vars and set(self.vars) & set(self.params):
            raise DSLSyntaxError("a name is declared both as variable and parameter", st.line, 1)

    def _assertion(self, st: _Statement) -> list[Poly]:
        gens = []
        for part in _split_top(self.tokens(st)):
            p = _ExprParser(part, self.known(False), allow_primed=False)
            lhs, rhs, _ = p.equation()
            if p.tok.kind != "end":
                raise p.error(f"unexpected {p.tok.text!r}")
            g = _equation_generator(lhs, rhs)
            if not g.is_zero():
                gens.append(g)
        return gens

    def _stem(self, st: _Statement) -> None:
        self.stem = self._assertion(st)

    def _exit(self, st: _Statement) -> None:
        self.exit = self._assertion(st)

    def _post(self, st: _Statement) -> None:
        self.post = self._assertion(st)
        for g in self.post:
            if g.variables() & set(self.params):
                raise DSLSyntaxError("post condition may not mention parameters", st.line, 1)

    def _transition(self, st: _Statement) -> None:
        name = st.head
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name or ""):
            raise DSLSyntaxError("transition name expected", st.line, len("transition") + 2)
        if any(t.name == name for t in self.transitions):
            raise DSLSyntaxError(f"duplicate transition {name!r}", st.line, 1)
        gens: list[Poly] = []
        targets: set[str] = set()
        guard_mode = False
        parts = [q for part in _split_top(self.tokens(st)) for q in _split_keywords(part)]
        for part in parts:
            first = part[0]
            if first.kind == "ident" and first.text in ("guard", "rel"):
                part = part[1:]
                guard_mode = first.text == "guard"
                kind = first.text
            elif (first.kind == "ident" and is_primed(first.text)
                  and len(part) > 1 and part[1].text == "="):
                kind = "update"
            else:
                kind = "guard" if guard_mode else "rel"
            p = _ExprParser(part, self.known(kind != "guard"), allow_primed=kind != "guard")
            if kind == "update":
                target = unprime(first.text)
                if target not in (self.vars or ()):
                    raise DSLSyntaxError(f"undeclared variable {target!r}", first.line, first.column)
                if target in targets:
                    raise DSLSyntaxError(f"duplicate update of {first.text}", first.line, first.column)
                targets.add(target)
                p.advance()
                p.expect("=")
                # updates read the pre-state only
                p.known = self.known(False)
                p.allow_primed = False
                num, den = p.expression()
                g = Poly.var(first.text) * den - num
            else:
                lhs, rhs, _ = p.equation()
                g = _equation_generator(lhs, rhs)
            if p.tok.kind != "end":
                raise p.error(f"unexpected {p.tok.text!r}")
            if not g.is_zero():
                gens.append(g)
        mentioned = {unprime(v) for g in gens for v in g.variables() if is_primed(v)}
        for v in self.vars or ():
            if v not in mentioned:
                gens.append(Poly.var(prime(v)) - Poly.var(v))
        self.transitions.append(Transition(name, tuple(gens)))

    def _testcase(self, st: _Statement) -> None:
        toks = self.tokens(st)
        p = _ExprParser(toks, frozenset(), allow_primed=False)
        sections: dict[str, object] = {}
        while p.tok.kind != "end":
            word = p.tok
            if word.kind != "ident" or word.text not in ("init", "final", "path"):
                raise p.error("expected init, final or path")
            if word.text in sections:
                raise p.error(f"duplicate {word.text}")
            p.advance()
            if word.text == "path":
                steps = []
                while p.tok.kind == "ident" and p.tok.text not in ("init", "final"):
                    steps.append(p.advance().text)
                    if p.at(","):
                        p.advance()
                sections["path"] = tuple(steps)
            else:
                sections[word.text] = self._valuation(p)
        if "init" not in sections or "path" not in sections:
            raise DSLSyntaxError("testcase needs init and path", st.line, 1)
        init = sections["init"]
        missing = [v for v in self.vars if v not in init]
        if missing:
            raise DSLSyntaxError(f"testcase init lacks {', '.join(missing)}", st.line, 1)
        self.testcases.append((init, sections.get("final", {}), sections["path"], st.line))

    def _valuation(self, p: _ExprParser) -> dict[str, Fraction]:
        p.expect("{")
        out: dict[str, Fraction] = {}
        while not p.at("}"):
            name = p.tok
            if name.kind != "ident" or name.text not in (self.vars or ()):
                raise p.error(f"unknown program variable {name.text!r}")
            p.advance()
            p.expect(":")
            num, den = _ExprParser.expression(p)
            if not (num.is_constant() and den.is_constant()):
                raise p.error("test case values must be rational constants")
            if name.text in out:
                raise p.error(f"duplicate value for {name.text}", name)
            out[name.text] = num.constant_value() / den.constant_value()
            if p.at(","):
                p.advance()
            elif not p.at("}"):
                raise p.error("expected ',' or '}'")
        p.advance()
        return out

    def build(self) -> SynthesisProblem:
        if self.vars is None:
            raise DSLSyntaxError("missing vars declaration")
        if not self.transitions:
            raise DSLSyntaxError("a lasso needs at least one transition")
        warnings: list[str] = []
        transitions = []
        for t in self.transitions:
            kind, view, notes = classify_transition(t, self.vars, self.exit)
            warnings += notes
            transitions.append(Transition(t.name, t.generators, view if kind == DETERMINISTIC else None))
        try:
            lasso = LassoProgram(self.vars, tuple(self.stem), tuple(transitions), tuple(self.exit))
        except ProgramError as e:
            raise DSLSyntaxError(str(e)) from None
        names = {t.name for t in transitions}
        cases = []
        for init, final, path, line in self.testcases:
            for step in path:
                if step not in names:
                    raise DSLSyntaxError(f"testcase uses unknown transition {step!r}", line, 1)
            for g in self.exit:
                if g.variables() <= set(final) and g.evaluate(final) != 0:
                    raise DSLSyntaxError("testcase final state violates the exit condition", line, 1)
            cases.append(TestCase(init, final, path))
        return SynthesisProblem(
            name=self.name or "unnamed",
            lasso=lasso,
            synth_vars=self.params,
            post=tuple(self.post),
            testcases=tuple(cases),
            warnings=tuple(warnings))


def parse_program(text: str) -> SynthesisProblem:
    builder = _Builder()
    for st in _statements(text):
        builder.add(st)
    return builder.build()


def parse_file(path) -> SynthesisProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


def parse_polynomial(text: str, known) -> Poly:
    """Parse a single polynomial over the names in ``known``."""
    p = _ExprParser(tokenize(text), frozenset(known), allow_primed=True)
    num, den = p.expression()
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r}")
    if not den.is_constant():
        raise DSLSyntaxError("expected a polynomial, got a rational function")
    return num


def parse_valuation(text: str, names) -> dict[str, Fraction]:
    """Parse ``{v: value, ...}``; used by the command line."""
    b = _Builder()
    b.vars = tuple(names)
    p = _ExprParser(tokenize(text), frozenset(), allow_primed=False)
    out = b._valuation(p)
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r}")
    return out


# ---------------------------------------------------------------------------
# printing

def _fmt(p: Poly) -> str:
    return p.format() or "0"


def _fmt_value(v: Fraction) -> str:
    return str(v) if v >= 0 else f"-{-v}"


def format_problem(problem: SynthesisProblem) -> str:
    """Render ``problem`` in the input format; parsing the result gives it back."""
    L = problem.lasso
    lines = [f"problem {problem.name}", "vars    " + " ".join(L.vars)]
    if problem.synth_vars:
        lines.append("params  " + " ".join(problem.synth_vars))
    if L.stem:
        lines.append("stem:   " + ", ".join(f"{_fmt(g)} = 0" for g in L.stem))
    for t in L.transitions:
        view = t.deterministic_view
        updates = {u.generator: u for u in view.updates} if view else {}
        items = []
        for g in t.generators:
            u = updates.get(g)
            if u is not None:
                rhs = f"({_fmt(u.numerator)})"
                if u.denominator != 1:
                    rhs += f" / ({_fmt(u.denominator)})"
                items.append(f"{prime(u.target)} = {rhs}")
            elif not any(is_primed(v) for v in g.variables()):
                items.append(f"guard {_fmt(g)} = 0")
            else:
                items.append(f"rel {_fmt(g)} = 0")
        lines.append(f"transition {t.name}: " + ",\n    ".join(items))
    if L.exit:
        lines.append("exit:   " + ", ".join(f"{_fmt(g)} = 0" for g in L.exit))
    if problem.post:
        lines.append("post:   " + ", ".join(f"{_fmt(g)} = 0" for g in problem.post))
    for tc in problem.testcases:
        init = ", ".join(f"{k}: {_fmt_value(v)}" for k, v in tc.init.items())
        final = ", ".join(f"{k}: {_fmt_value(v)}" for k, v in tc.final.items())
        lines.append(f"testcase: init {{{init}}} final {{{final}}} path {' '.join(tc.path)}")
    return "\n".join(lines) + "\n"
