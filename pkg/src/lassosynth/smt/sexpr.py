"""Minimal S-expression reader for solver output."""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import SolverError

_TOKEN = re.compile(r'\s*(?:(;[^\n]*)|(\()|(\))|("(?:[^"]|"")*")|(\|[^|]*\|)|([^\s()";|]+))')

SExpr = "str | list[SExpr]"


def parse_all(text: str) -> list:
    """Parse every top-level S-expression in ``text``; atoms stay strings."""
    stack: list[list] = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise SolverError(f"cannot parse solver output near {text[pos:pos + 40]!r}")
        pos = m.end()
        comment, lp, rp, string, quoted, atom = m.groups()
        if comment:
            continue
        if lp:
            stack.append([])
        elif rp:
            if len(stack) == 1:
                raise SolverError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        elif string or quoted or atom:
            stack[-1].append(string or quoted or atom)
    if len(stack) != 1:
        raise SolverError("unbalanced '(' in solver output")
    return stack[0]


def to_text(e) -> str:
    if isinstance(e, str):
        return e
    return "(" + " ".join(to_text(x) for x in e) + ")"


class NotRational(Exception):
    pass


def rational_value(e) -> Fraction:
    """Exact value of a numeric S-expression built from +, -, *, / and literals."""
    if isinstance(e, str):
        try:
            return Fraction(e)
        except ValueError:
            raise NotRational(e) from None
    if not e:
        raise NotRational("()")
    head = e[0]
    if head not in ("+", "-", "*", "/"):
        raise NotRational(to_text(e))
    args = [rational_value(a) for a in e[1:]]
    if head == "-":
        return -args[0] if len(args) == 1 else args[0] - sum(args[1:])
    if head == "+":
        return sum(args, Fraction(0))
    if head == "*":
        out = Fraction(1)
        for a in args:
            out *= a
        return out
    out = args[0]
    for a in args[1:]:
        if a == 0:
            raise NotRational("division by zero")
        out /= a
    return out
