"""Tense formulas in negation normal form.

Formulas are immutable values built from literals, binary connectives and
the four tense modalities: ``[]`` (box), ``<>`` (diamond), ``[#]`` (black
box, past necessity) and ``<#>`` (black diamond, past possibility).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Union


class Diamond(enum.Enum):
    """The two diamond modalities, also used as nesting polarities.

    ``WHITE`` is the future diamond and the ``o{...}`` nesting, ``BLACK``
    is the past diamond and the ``b{...}`` nesting.
    """

    WHITE = "<>"
    BLACK = "<#>"

    @property
    def dual(self) -> "Diamond":
        return Diamond.BLACK if self is Diamond.WHITE else Diamond.WHITE

    @property
    def nesting(self) -> str:
        return "o" if self is Diamond.WHITE else "b"

    @property
    def glyph(self) -> str:
        return "◇" if self is Diamond.WHITE else "◆"

    @classmethod
    def from_nesting(cls, tag: str) -> "Diamond":
        return cls.WHITE if tag == "o" else cls.BLACK

    def __lt__(self, other: "Diamond") -> bool:
        return self.value < other.value


class FormulaError(ValueError):
    """Raised for formula operations outside their domain."""


class FormulaSyntaxError(ValueError):
    """A lexical or syntax error, carrying the offset where it was found."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at offset {position}")
        self.position = position


@dataclass(frozen=True)
class PosLiteral:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class NegLiteral:
    name: str

    def __str__(self) -> str:
        return "~" + self.name


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Box:
    body: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Dia:
    body: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class BlackBox:
    body: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class BlackDia:
    body: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "F"


Formula = Union[PosLiteral, NegLiteral, And, Or, Box, Dia, BlackBox, BlackDia, Top, Bottom]

_PREFIX = {Box: "[]", Dia: "<>", BlackBox: "[#]", BlackDia: "<#>"}
_MODAL = (Box, Dia, BlackBox, BlackDia)


def diamond_of(kind: Diamond, body: Formula) -> Formula:
    """Build ``<>body`` or ``<#>body``."""
    return Dia(body) if kind is Diamond.WHITE else BlackDia(body)


def box_of(kind: Diamond, body: Formula) -> Formula:
    """Build ``[]body`` or ``[#]body``; the box dual to ``kind``'s diamond."""
    return Box(body) if kind is Diamond.WHITE else BlackBox(body)


def as_diamond(f: Formula) -> tuple[Diamond, Formula] | None:
    """Split a diamond formula into its modality and body."""
    if isinstance(f, Dia):
        return Diamond.WHITE, f.body
    if isinstance(f, BlackDia):
        return Diamond.BLACK, f.body
    return None


def negate(a: Formula) -> Formula:
    """Return the NNF negation of ``a`` by pushing negation to the literals."""
    if isinstance(a, PosLiteral):
        return NegLiteral(a.name)
    if isinstance(a, NegLiteral):
        return PosLiteral(a.name)
    if isinstance(a, And):
        return Or(negate(a.left), negate(a.right))
    if isinstance(a, Or):
        return And(negate(a.left), negate(a.right))
    if isinstance(a, Box):
        return Dia(negate(a.body))
    if isinstance(a, Dia):
        return Box(negate(a.body))
    if isinstance(a, BlackBox):
        return BlackDia(negate(a.body))
    if isinstance(a, BlackDia):
        return BlackBox(negate(a.body))
    raise FormulaError(f"negation is not defined on the constant {a}")


def implies(a: Formula, b: Formula) -> Formula:
    return Or(negate(a), b)


def contains_constant(a: Formula) -> bool:
    if isinstance(a, (Top, Bottom)):
        return True
    if isinstance(a, (And, Or)):
        return contains_constant(a.left) or contains_constant(a.right)
    if isinstance(a, _MODAL):
        return contains_constant(a.body)
    return False


def subformulas(a: Formula) -> Iterator[Formula]:
    yield a
    if isinstance(a, (And, Or)):
        yield from subformulas(a.left)
        yield from subformulas(a.right)
    elif isinstance(a, _MODAL):
        yield from subformulas(a.body)


def uses_past(a: Formula) -> bool:
    """True when ``a`` mentions a past modality."""
    return any(isinstance(s, (BlackBox, BlackDia)) for s in subformulas(a))


# -- printing ---------------------------------------------------------------

def _show(a: Formula) -> str:
    if isinstance(a, _MODAL):
        body = a.body
        inner = _show(body) if not isinstance(body, (And, Or)) else f"({_show(body)})"
        return _PREFIX[type(a)] + inner
    if isinstance(a, And):
        left = _show(a.left) if not isinstance(a.left, Or) else f"({_show(a.left)})"
        right = _show(a.right) if not isinstance(a.right, (And, Or)) else f"({_show(a.right)})"
        return f"{left} & {right}"
    if isinstance(a, Or):
        left = _show(a.left)
        right = _show(a.right) if not isinstance(a.right, Or) else f"({_show(a.right)})"
        return f"{left} | {right}"
    return str(a)


_UNICODE = {Box: "□", Dia: "◇", BlackBox: "■", BlackDia: "◆"}


def pretty(a: Formula) -> str:
    """Render with the usual mathematical symbols (for reports and demos)."""
    if isinstance(a, _MODAL):
        body = a.body
        inner = pretty(body) if not isinstance(body, (And, Or)) else f"({pretty(body)})"
        return _UNICODE[type(a)] + inner
    if isinstance(a, NegLiteral):
        return a.name + "̄"
    if isinstance(a, (And, Or)):
        op = " ∧ " if isinstance(a, And) else " ∨ "
        parts = []
        for side in (a.left, a.right):
            s = pretty(side)
            parts.append(f"({s})" if isinstance(side, (And, Or)) else s)
        return op.join(parts)
    if isinstance(a, Top):
        return "⊤"
    if isinstance(a, Bottom):
        return "⊥"
    return str(a)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|<#>|\[#\]|<>|\[\]|[~&|()])|(?P<name>[A-Za-z][A-Za-z0-9_]*))"
)
_RESERVED = {"T", "F"}


class _Tokens:
    def __init__(self, text: str, start: int = 0, stop_chars: str = "") -> None:
        self.text = text
        self.pos = start
        self.stop_chars = stop_chars

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> tuple[str, str, int] | None:
        self._skip()
        if self.pos >= len(self.text) or self.text[self.pos] in self.stop_chars:
            return None
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {self.text[self.pos]!r}", self.pos)
        kind = "op" if m.group("op") else "name"
        return kind, m.group(kind), m.start(kind)

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            self._skip()
            raise FormulaSyntaxError("unexpected end of input", self.pos)
        m = _TOKEN.match(self.text, self.pos)
        assert m is not None
        self.pos = m.end()
        return tok


def _parse_iff(ts: _Tokens) -> Formula:
    left = _parse_imp(ts)
    while (tok := ts.peek()) is not None and tok[1] == "<->":
        ts.take()
        right = _parse_imp(ts)
        left = And(implies(left, right), implies(right, left))
    return left


def _parse_imp(ts: _Tokens) -> Formula:
    left = _parse_or(ts)
    while (tok := ts.peek()) is not None and tok[1] == "->":
        ts.take()
        left = implies(left, _parse_or(ts))
    return left


def _parse_or(ts: _Tokens) -> Formula:
    left = _parse_and(ts)
    while (tok := ts.peek()) is not None and tok[1] == "|":
        ts.take()
        left = Or(left, _parse_and(ts))
    return left


def _parse_and(ts: _Tokens) -> Formula:
    left = _parse_unary(ts)
    while (tok := ts.peek()) is not None and tok[1] == "&":
        ts.take()
        left = And(left, _parse_unary(ts))
    return left


def _parse_unary(ts: _Tokens) -> Formula:
    kind, value, pos = ts.take()
    if kind == "name":
        if value in _RESERVED:
            raise FormulaSyntaxError(f"constant {value} is not allowed in input", pos)
        return PosLiteral(value)
    if value == "~":
        return negate(_parse_unary(ts))
    if value in ("[]", "<>", "[#]", "<#>"):
        body = _parse_unary(ts)
        return {"[]": Box, "<>": Dia, "[#]": BlackBox, "<#>": BlackDia}[value](body)
    if value == "(":
        inner = _parse_iff(ts)
        tok = ts.peek()
        if tok is None or tok[1] != ")":
            ts._skip()
            where = tok[2] if tok is not None else ts.pos
            raise FormulaSyntaxError("expected ')'", where)
        ts.take()
        return inner
    raise FormulaSyntaxError(f"unexpected token {value!r}", pos)


def parse_formula_at(text: str, start: int, stop_chars: str = "") -> tuple[Formula, int]:
    """Parse a formula beginning at ``start``; stop before any of ``stop_chars``.

    Returns the formula and the offset just past it.
    """
    ts = _Tokens(text, start, stop_chars)
    result = _parse_iff(ts)
    ts._skip()
    return result, ts.pos


def parse_formula(text: str) -> Formula:
    """Parse the ASCII concrete syntax into an NNF formula."""
    result, end = parse_formula_at(text, 0)
    if end != len(text):
        raise FormulaSyntaxError(f"unexpected {text[end]!r}", end)
    return result
