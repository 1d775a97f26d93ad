"""Text frontend: polynomial expressions and map files.

Grammar (``^`` binds tightest and is right-associative)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary | <number> juxtaposed with unary)*
    unary   := ('+' | '-') unary | power
    power   := atom ('^' exponent)?
    atom    := NUMBER | NAME | '(' expr ')'

Multiplication must be written out, except directly after a number
(``2X``, ``3(X + Y)``).  Division is only by nonzero constants, which is how
rational coefficients like ``1/2*X`` are spelled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .poly import Polynomial, PolyMap, default_names, format_polynomial


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.message = message
        self.column = column


_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.)")
_SPACE = re.compile(r"\s*")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    column: int  # 1-based


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        pos = _SPACE.match(text, pos).end()
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        num, name, op = m.groups()
        col = pos + 1
        if num is not None:
            tokens.append(Token("num", num, col))
        elif name is not None:
            tokens.append(Token("name", name, col))
        elif op in "+-*/^()":
            tokens.append(Token("op", op, col))
        else:
            raise ParseError(f"unexpected character {op!r}", col)
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


def variable_table(arity: int) -> dict[str, int]:
    """Accepted names for ``arity`` variables: ``X1..Xm``, plus ``X, Y``
    when there are two."""
    table = {f"X{i + 1}": i for i in range(arity)}
    if arity == 2:
        table.update({"X": 0, "Y": 1})
    return table


class _Parser:
    def __init__(self, text: str, names: Mapping[str, int], arity: int):
        self.tokens = tokenize(text)
        self.pos = 0
        self.names = names
        self.arity = arity

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def at(self, op: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == op

    def parse(self) -> Polynomial:
        if self.tok.kind == "end":
            raise ParseError("empty expression", self.tok.column)
        p = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.column)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p, bare_number = self.unary()
        while True:
            if self.at("*"):
                self.advance()
                q, bare_number = self.unary()
                p = p * q
            elif self.at("/"):
                col = self.advance().column
                q, bare_number = self.unary()
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division only by a nonzero constant", col)
                p = p / q.constant_term()
            elif self.tok.kind == "name" or self.at("("):
                if not bare_number:
                    raise ParseError("missing '*' (implicit multiplication only after a number)", self.tok.column)
                q, bare_number = self.unary()
                p = p * q
            else:
                return p

    def unary(self) -> tuple[Polynomial, bool]:
        if self.at("-"):
            self.advance()
            p, _ = self.unary()
            return -p, False
        if self.at("+"):
            self.advance()
            p, _ = self.unary()
            return p, False
        return self.power()

    def power(self) -> tuple[Polynomial, bool]:
        base, bare_number = self.atom()
        if not self.at("^"):
            return base, bare_number
        self.advance()
        col = self.tok.column
        e = self.exponent()
        if not e.is_constant():
            raise ParseError("exponent must be a constant", col)
        value = e.constant_term()
        if value < 0:
            raise ParseError("negative exponent", col)
        if value.denominator != 1:
            raise ParseError("fractional exponent", col)
        return base ** int(value), False

    def exponent(self) -> Polynomial:
        if self.at("-"):
            self.advance()
            return -self.exponent()
        if self.at("+"):
            self.advance()
            return self.exponent()
        p, _ = self.power()
        return p

    def atom(self) -> tuple[Polynomial, bool]:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Polynomial.constant(int(t.text), self.arity), True
        if t.kind == "name":
            self.advance()
            idx = self.names.get(t.text)
            if idx is None:
                raise ParseError(f"unknown identifier {t.text}", t.column)
            return Polynomial.variable(idx, self.arity), False
        if self.at("("):
            self.advance()
            p = self.expr()
            if not self.at(")"):
                raise ParseError("expected ')'", self.tok.column)
            self.advance()
            return p, False
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.column)
        raise ParseError(f"unexpected {t.text!r}", t.column)


def _name_table(variables: Sequence[str] | Mapping[str, int]) -> tuple[dict[str, int], int]:
    if isinstance(variables, Mapping):
        table = dict(variables)
        arity = max(table.values(), default=-1) + 1
    else:
        table = {name: i for i, name in enumerate(variables)}
        arity = len(variables)
    return table, arity


def parse_polynomial(text: str, variables: Sequence[str] | Mapping[str, int] = ("X", "Y")) -> Polynomial:
    """Parse ``text`` over the given variable names (a list, or a mapping of
    name to index when aliases are wanted)."""
    table, arity = _name_table(variables)
    return _Parser(text, table, arity).parse()


def print_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    return format_polynomial(p, names)


@dataclass(frozen=True)
class ParsedMap:
    variables: tuple[str, ...]
    components: PolyMap


def parse_map(text: str) -> ParsedMap:
    """A map file: optional ``vars: X, Y`` header, then one component per
    line or ``;``-separated.  ``#`` starts a comment."""
    declared = None
    exprs: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vars:"):
            if declared is not None:
                raise ValueError(f"line {lineno}: duplicate vars header")
            declared = [v.strip() for v in line[5:].split(",") if v.strip()]
            continue
        for part in line.split(";"):
            if part.strip():
                exprs.append((lineno, part.strip()))
    if not exprs:
        raise ValueError("map file has no components")
    m = len(exprs)
    if declared is not None:
        if len(declared) != m:
            raise ValueError(f"{len(declared)} variables declared but {m} components given")
        names = tuple(declared)
        table = {n: i for i, n in enumerate(names)}
        if len(table) != m:
            raise ValueError("duplicate variable names")
    else:
        names = tuple(default_names(m))
        table = variable_table(m)
    comps = []
    for lineno, e in exprs:
        try:
            comps.append(_Parser(e, table, m).parse())
        except ParseError as err:
            raise ParseError(f"line {lineno}: {err.message}", err.column) from None
    return ParsedMap(names, PolyMap(comps))


def format_map(F: PolyMap, names: Sequence[str] | None = None, sep: str = "; ") -> str:
    return sep.join(format_polynomial(p, names) for p in F.components)
