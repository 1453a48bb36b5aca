"""Path axioms, general path axioms and completion membership.

A path axiom ``<d1>...<dn>A -> <d>A`` is stored as its antecedent word and
its single consequent diamond.  The completion of a set ``P`` (closure of
``P`` and its inverses under composition, plus the identity axioms) is
usually infinite, so it is never built: an antecedent word ``w`` belongs to
the completion for target ``d`` exactly when ``w`` is derivable from ``d``
in the grammar with one production ``d -> antecedent`` per axiom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cfl import BinaryGrammar, DerivationNode, Production, Reachability
from .formula import Diamond

Word = tuple[Diamond, ...]


class AxiomError(ValueError):
    pass


class AxiomSyntaxError(AxiomError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.column = column


class NotComposableError(AxiomError):
    pass


class AxiomScopeError(AxiomError):
    """Raised for axiom shapes whose rules need equality atoms."""


def show_word(w: Sequence[Diamond]) -> str:
    return "".join(d.value for d in w) if w else "e"


def pretty_word(w: Sequence[Diamond]) -> str:
    return "".join(d.glyph for d in w) if w else "ε"


def dual_word(w: Sequence[Diamond]) -> Word:
    """Reverse a word and swap each diamond for its dual."""
    return tuple(d.dual for d in reversed(w))


@dataclass(frozen=True)
class PathAxiom:
    antecedent: Word
    consequent: Diamond

    def __str__(self) -> str:
        return f"{show_word(self.antecedent)} -> {self.consequent.value}"

    def general(self) -> "GeneralPathAxiom":
        return GeneralPathAxiom(self.antecedent, (self.consequent,))


@dataclass(frozen=True)
class GeneralPathAxiom:
    antecedent: Word
    consequent: Word

    def __str__(self) -> str:
        return f"{show_word(self.antecedent)} -> {show_word(self.consequent)}"

    @property
    def is_path(self) -> bool:
        return len(self.consequent) == 1

    def as_path(self) -> PathAxiom:
        if not self.is_path:
            raise AxiomError(f"{self} is not a path axiom")
        return PathAxiom(self.antecedent, self.consequent[0])


AnyAxiom = PathAxiom | GeneralPathAxiom


def as_general(ax: AnyAxiom) -> GeneralPathAxiom:
    return ax.general() if isinstance(ax, PathAxiom) else ax


def inverse(f: PathAxiom) -> PathAxiom:
    return PathAxiom(dual_word(f.antecedent), f.consequent.dual)


def compose(f: PathAxiom, g: PathAxiom, i: int) -> PathAxiom:
    """Substitute ``f``'s antecedent for position ``i`` (1-based) of ``g``'s."""
    if not 1 <= i <= len(g.antecedent) or g.antecedent[i - 1] is not f.consequent:
        raise NotComposableError(f"{f} is not composable with {g} at {i}")
    w = g.antecedent[: i - 1] + f.antecedent + g.antecedent[i:]
    return PathAxiom(w, g.consequent)


# -- text -------------------------------------------------------------------

_WORD_TOKEN = re.compile(r"\s*(<#>|<>|e\b)")


def parse_word(text: str) -> Word:
    text = text.strip()
    out: list[Diamond] = []
    pos = 0
    if text == "e":
        return ()
    while pos < len(text):
        m = _WORD_TOKEN.match(text, pos)
        if m is None or m.group(1) == "e":
            raise AxiomSyntaxError(f"bad diamond word {text!r}", column=pos + 1)
        out.append(Diamond.BLACK if m.group(1) == "<#>" else Diamond.WHITE)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if not out:
        raise AxiomSyntaxError("empty diamond word (write e)")
    return tuple(out)


def parse_axiom(text: str) -> GeneralPathAxiom:
    """Parse ``WORD -> WORD``; ``e`` is the empty word."""
    if text.count("->") != 1:
        raise AxiomSyntaxError(f"expected 'WORD -> WORD', got {text.strip()!r}")
    lhs, rhs = text.split("->")
    return GeneralPathAxiom(parse_word(lhs), parse_word(rhs))


# a '#' not inside '<#>' starts a comment
_COMMENT = re.compile(r"(?<!<)#.*")


def parse_axiom_file(text: str) -> list[GeneralPathAxiom]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        try:
            out.append(parse_axiom(line))
        except AxiomSyntaxError as e:
            raise AxiomSyntaxError(str(e).split(" (")[0], line=n, column=e.column) from None
    return out


def path_axioms(axs: Iterable[AnyAxiom]) -> list[PathAxiom]:
    return [a if isinstance(a, PathAxiom) else a.as_path() for a in axs]


# -- scope ------------------------------------------------------------------

def check_scope(ax: AnyAxiom) -> None:
    """Reject axioms ``Pi -> e`` with ``Pi`` nonempty (they need equality)."""
    g = as_general(ax)
    if g.antecedent and not g.consequent:
        raise AxiomScopeError(
            f"axiom {g} has an empty consequent; its rule needs equality atoms and is not supported"
        )


@dataclass(frozen=True)
class RuleSchema:
    """Nested and labeled structural rules for one general path axiom."""

    axiom: GeneralPathAxiom
    nested_premise: str
    nested_conclusion: str
    labeled_premise: str
    labeled_conclusion: str
    eigenvariables: int

    def __str__(self) -> str:
        return (
            f"nested:  {self.nested_premise}  /  {self.nested_conclusion}\n"
            f"labeled: {self.labeled_premise}  /  {self.labeled_conclusion}"
            f"  ({self.eigenvariables} eigenvariable(s))"
        )


def _nest_text(w: Word, inner: str) -> str:
    out = inner
    for d in reversed(w):
        out = f"{d.nesting}{{{out}}}"
    return out


def relational_chain(w: Word, start: str, end: str, inner: Sequence[str]) -> list[tuple[str, str]]:
    """Atoms of ``R_w start end`` through the given intermediate labels."""
    if len(inner) != max(len(w) - 1, 0):
        raise ValueError("wrong number of intermediate labels")
    if not w:
        return []
    stops = [start, *inner, end]
    return [
        (a, b) if d is Diamond.WHITE else (b, a)
        for d, a, b in zip(w, stops, stops[1:])
    ]


def rule_schemas(ax: AnyAxiom) -> RuleSchema:
    check_scope(ax)
    g = as_general(ax)
    pi, sigma = g.antecedent, g.consequent
    if not pi and not sigma:
        return RuleSchema(g, "X", "X", "R, G", "R, G", 0)
    inner_s = [f"z{k}" for k in range(1, len(sigma))]
    inner_p = [f"y{k}" for k in range(1, len(pi))]
    end = "y" if pi else "x"
    r_pi = relational_chain(pi, "x", end, inner_p)
    r_sig = relational_chain(sigma, "x", end, inner_s)
    atoms = lambda rs: ", ".join(f"R{a}{b}" for a, b in rs)  # noqa: E731
    concl = ", ".join(filter(None, ["R", atoms(r_pi), "G"]))
    prem = ", ".join(filter(None, ["R", atoms(r_pi), atoms(r_sig), "G"]))
    return RuleSchema(
        g,
        f"X, {_nest_text(sigma, 'Y')}",
        f"X, {_nest_text(pi, 'Y')}" if pi else "X, Y",
        prem,
        concl,
        max(len(sigma) - 1, 0),
    )


# -- grammar ----------------------------------------------------------------

def terminal(d: Diamond) -> tuple[str, Diamond]:
    """Edge-label symbol for ``d`` (nonterminals are the diamonds themselves)."""
    return ("edge", d)


@dataclass(frozen=True)
class ProductionInfo:
    axiom: PathAxiom | None  # ``None`` for the identity productions
    inverted: bool


class PathGrammar:
    """Grammar for the antecedents in the completion of a path-axiom set."""

    def __init__(self, axioms: Iterable[AnyAxiom] = ()) -> None:
        self.axioms: tuple[PathAxiom, ...] = tuple(dict.fromkeys(path_axioms(axioms)))
        for a in self.axioms:
            check_scope(a)
        prods: list[Production] = []
        seen: set[tuple[Word, Diamond]] = set()
        for a in self.axioms:
            seen.add((a.antecedent, a.consequent))
            prods.append(Production(a.consequent, a.antecedent, tag=ProductionInfo(a, False)))
        for a in self.axioms:
            inv = inverse(a)
            if (inv.antecedent, inv.consequent) in seen:
                continue
            seen.add((inv.antecedent, inv.consequent))
            prods.append(Production(inv.consequent, inv.antecedent, tag=ProductionInfo(a, True)))
        for d in Diamond:
            prods.append(Production(d, (terminal(d),), terminal=True, tag=ProductionInfo(None, False)))
        self.productions = prods
        self.binary = BinaryGrammar.from_productions(prods)

    @property
    def nullable(self) -> set[Diamond]:
        """Diamonds deriving the empty word."""
        r = Reachability(self.binary, [0], [])
        return {d for d in Diamond if r.holds(d, 0, 0)}

    def chart(self, word: Sequence[Diamond]) -> Reachability:
        edges = [(k, k + 1, terminal(d)) for k, d in enumerate(word)]
        return Reachability(self.binary, range(len(word) + 1), edges)


def build_grammar(p: Iterable[AnyAxiom]) -> PathGrammar:
    return PathGrammar(p)


def completion_member(g: PathGrammar, pi: Sequence[Diamond], target: Diamond) -> bool:
    return g.chart(pi).holds(target, 0, len(pi))


@dataclass(frozen=True)
class ParseNode:
    """A derivation step: ``symbol`` rewritten by ``axiom`` (or an identity leaf).

    ``start``/``end`` are positions in the parsed word; identity leaves span
    one letter and axiom nodes have one child per antecedent letter.
    """

    symbol: Diamond
    axiom: PathAxiom | None
    inverted: bool
    children: tuple["ParseNode", ...]
    start: int
    end: int

    @property
    def is_identity(self) -> bool:
        return self.axiom is None

    def production(self) -> PathAxiom | None:
        if self.axiom is None:
            return None
        return inverse(self.axiom) if self.inverted else self.axiom

    def frontier(self) -> Word:
        if self.axiom is None:
            return (self.symbol,)
        out: Word = ()
        for c in self.children:
            out += c.frontier()
        return out

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def _convert(n: DerivationNode) -> ParseNode:
    info: ProductionInfo = n.production.tag  # type: ignore[assignment]
    return ParseNode(
        n.symbol,  # type: ignore[arg-type]
        info.axiom,
        info.inverted,
        tuple(_convert(c) for c in n.children),
        n.start,  # type: ignore[arg-type]
        n.end,  # type: ignore[arg-type]
    )


def parse_tree(g: PathGrammar, pi: Sequence[Diamond], target: Diamond) -> ParseNode | None:
    r = g.chart(pi)
    fact = (target, 0, len(pi))
    if fact not in r.back:
        return None
    return _convert(r.tree(fact))


def tree_from_reachability(r: Reachability, target: Diamond, u, v) -> ParseNode:
    return _convert(r.tree((target, u, v)))
