"""Tokenizer and recursive-descent parsers for plant terms, 2-cell terms and sums.

Plant terms::

    plant  := seq
    seq    := tens (';' tens)*          # top-to-bottom composition
    tens   := atom ('*' atom)*          # side by side; binds tighter than ';'
    atom   := NAME | 'id' | HOLE | '(' plant ')'
    HOLE   := '?' INT '->' INT

2-cell terms use the same operators plus ``id2(<plant>)`` and contextual
application ``(<plant with one hole>)[<cell>]``.  Sums are ``+``/``-``
separated 2-cell terms with optional integer coefficients (``2 m``), or ``0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import plant as pl
from .errors import TermSyntaxError, UnknownFootpath, UnknownGenerator

_TOKEN = re.compile(
    r"\s*(?:(?P<hole>\?(?P<hi>\d+)->(?P<ho>\d+))|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[;*()\[\]+\-]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError("unexpected character", text, pos)
        start = m.start(m.lastgroup if m.lastgroup != "hi" else "hole")
        if m.group("hole"):
            tokens.append(Token("hole", (int(m.group("hi")), int(m.group("ho"))), start))
        elif m.group("int"):
            tokens.append(Token("int", int(m.group("int")), start))
        elif m.group("name"):
            tokens.append(Token("name", m.group("name"), start))
        else:
            tokens.append(Token("op", m.group("op"), start))
        pos = m.end()
    tokens.append(Token("end", None, len(text)))
    return tokens


# -- 2-cell term AST ---------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Id2:
    plant: pl.Plant


@dataclass(frozen=True)
class Vert:
    first: "Term"
    second: "Term"


@dataclass(frozen=True)
class Horiz:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Ctx:
    context: pl.Plant
    body: "Term"


Term = Union[Gen, Id2, Vert, Horiz, Ctx]


class _Parser:
    def __init__(self, text: str, alphabet):
        self.text = text
        self.alphabet = alphabet
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str):
        raise TermSyntaxError(message, self.text, self.tok.pos)

    def accept(self, value) -> bool:
        if self.tok.kind == "op" and self.tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            self.error(f"expected {value!r}")

    def finish(self):
        if self.tok.kind != "end":
            self.error("unexpected trailing input")

    # plants
    def plant_seq(self) -> pl.Plant:
        result = self.plant_tens()
        while self.accept(";"):
            result = pl.compose(result, self.plant_tens())
        return result

    def plant_tens(self) -> pl.Plant:
        result = self.plant_atom()
        while self.accept("*"):
            result = pl.tensor(result, self.plant_atom())
        return result

    def plant_atom(self) -> pl.Plant:
        tok = self.tok
        if tok.kind == "hole":
            self.i += 1
            return pl.hole(*tok.value)
        if tok.kind == "name":
            self.i += 1
            if tok.value == "id":
                return pl.identity(1)
            return self.alphabet.generator_plant(tok.value)
        if self.accept("("):
            inner = self.plant_seq()
            self.expect(")")
            return inner
        self.error("expected a plant")

    # 2-cells
    def cell_seq(self) -> Term:
        result = self.cell_tens()
        while self.accept(";"):
            result = Vert(result, self.cell_tens())
        return result

    def cell_tens(self) -> Term:
        result = self.cell_atom()
        while self.accept("*"):
            result = Horiz(result, self.cell_atom())
        return result

    def _closing_paren(self) -> int:
        depth = 0
        for k in range(self.i, len(self.tokens)):
            t = self.tokens[k]
            if t.kind == "op" and t.value == "(":
                depth += 1
            elif t.kind == "op" and t.value == ")":
                depth -= 1
                if depth == 0:
                    return k
        self.error("unbalanced parenthesis")

    def _application(self, context: pl.Plant) -> Term:
        self.expect("[")
        body = self.cell_seq()
        self.expect("]")
        return Ctx(context, body)

    def cell_atom(self) -> Term:
        tok = self.tok
        if tok.kind == "hole":
            self.i += 1
            return self._application(pl.hole(*tok.value))
        if tok.kind == "name":
            self.i += 1
            if tok.value == "id2":
                self.expect("(")
                plant = self.plant_seq()
                self.expect(")")
                return Id2(plant)
            if tok.value == "id":
                return Id2(pl.identity(1))
            if not self.alphabet.has_cell(tok.value):
                raise UnknownFootpath(f"unknown footpath or composite {tok.value!r}")
            return Gen(tok.value)
        if self.tok.kind == "op" and self.tok.value == "(":
            close = self._closing_paren()
            after = self.tokens[close + 1]
            if after.kind == "op" and after.value == "[":
                self.i += 1
                context = self.plant_seq()
                self.expect(")")
                return self._application(context)
            self.i += 1
            inner = self.cell_seq()
            self.expect(")")
            return inner
        self.error("expected a 2-cell term")

    # sums
    def _group_ahead(self) -> bool:
        """A parenthesised sum: ``(`` whose partner is followed by ``+``, ``-``, ``)`` or the end."""
        if not (self.tok.kind == "op" and self.tok.value == "("):
            return False
        after = self.tokens[self._closing_paren() + 1]
        return after.kind == "end" or (after.kind == "op" and after.value in "+-)")

    def sum_terms(self) -> list[tuple[int, Term]]:
        nxt = self.tokens[self.i + 1]
        if self.tok.kind == "int" and self.tok.value == 0 and (
                nxt.kind == "end" or (nxt.kind == "op" and nxt.value == ")")):
            self.i += 1
            return []
        terms = []
        sign = -1 if self.accept("-") else 1
        while True:
            coef = 1
            if self.tok.kind == "int":
                coef = self.tok.value
                self.i += 1
            if self._group_ahead():
                self.expect("(")
                for c, t in self.sum_terms():
                    terms.append((sign * coef * c, t))
                self.expect(")")
            else:
                terms.append((sign * coef, self.cell_seq()))
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        return terms


def parse_plant_term(text: str, alphabet) -> pl.Plant:
    """Parse a plant term against ``alphabet``.

    >>> from grafter.alphabet import Alphabet
    >>> parse_plant_term("dup ; and", Alphabet.shipped("leibniz")).arity
    Arity(inputs=1, outputs=1)
    """
    parser = _Parser(text, alphabet)
    result = parser.plant_seq()
    parser.finish()
    return result


def parse_cell_term(text: str, alphabet) -> Term:
    parser = _Parser(text, alphabet)
    result = parser.cell_seq()
    parser.finish()
    return result


def parse_sum(text: str, alphabet) -> list[tuple[int, Term]]:
    parser = _Parser(text, alphabet)
    result = parser.sum_terms()
    parser.finish()
    return result


def check_generator(alphabet, name: str):
    if not alphabet.has_generator(name):
        raise UnknownGenerator(f"unknown generator {name!r}")
