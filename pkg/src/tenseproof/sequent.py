"""Nested sequents, contexts with holes, and labeled sequents.

A nested sequent is a tree: each node holds a multiset of formulas and a
multiset of children, each child tagged ``o`` (future nesting) or ``b``
(past nesting).  Children and formulas keep the order in which they were
built so that node addresses are stable, while equality is taken modulo
reordering.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .formula import (
    Diamond,
    Formula,
    FormulaSyntaxError,
    Or,
    Top,
    box_of,
    parse_formula_at,
)

Address = tuple[int, ...]
Child = tuple[Diamond, "NestedSequent"]


class NestedSequent:
    """Immutable nested sequent; ``==`` is equality modulo multiset reordering."""

    __slots__ = ("formulas", "children", "_key", "_hash")

    def __init__(
        self,
        formulas: Iterable[Formula] = (),
        children: Iterable[Child] = (),
    ) -> None:
        self.formulas: tuple[Formula, ...] = tuple(formulas)
        self.children: tuple[Child, ...] = tuple(children)
        self._key: str | None = None
        self._hash: int | None = None

    def key(self) -> str:
        """Canonical text, identical for sequents equal up to reordering."""
        if self._key is None:
            parts = sorted(str(f) for f in self.formulas)
            parts += sorted(f"{d.nesting}{{{c.key()}}}" for d, c in self.children)
            self._key = ",".join(parts)
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NestedSequent):
            return NotImplemented
        return self is other or self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        return f"NestedSequent({str(self)!r})"

    def __str__(self) -> str:
        return show_nested(self)

    @property
    def is_empty(self) -> bool:
        return not self.formulas and not self.children

    def node(self, address: Address) -> "NestedSequent":
        here = self
        for i in address:
            here = here.children[i][1]
        return here

    def addresses(self) -> Iterator[Address]:
        """All node addresses in preorder."""
        yield ()
        for i, (_, child) in enumerate(self.children):
            for sub in child.addresses():
                yield (i,) + sub

    def size(self) -> int:
        return 1 + sum(c.size() for _, c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for _, c in self.children), default=0)

    def formula_count(self) -> int:
        return len(self.formulas) + sum(c.formula_count() for _, c in self.children)

    def replace(self, address: Address, new: "NestedSequent") -> "NestedSequent":
        if not address:
            return new
        i, rest = address[0], address[1:]
        pol, child = self.children[i]
        kids = list(self.children)
        kids[i] = (pol, child.replace(rest, new))
        return NestedSequent(self.formulas, kids)

    def add_formulas(self, address: Address, extra: Sequence[Formula]) -> "NestedSequent":
        node = self.node(address)
        return self.replace(address, NestedSequent(node.formulas + tuple(extra), node.children))

    def add_child(self, address: Address, polarity: Diamond, child: "NestedSequent") -> "NestedSequent":
        node = self.node(address)
        return self.replace(address, NestedSequent(node.formulas, node.children + ((polarity, child),)))

    def union(self, other: "NestedSequent") -> "NestedSequent":
        """The comma: merge two sequents at their roots."""
        return NestedSequent(self.formulas + other.formulas, self.children + other.children)


EMPTY = NestedSequent()


def nested_equal(x: NestedSequent, y: NestedSequent) -> bool:
    return x.key() == y.key()


def residuate(x: NestedSequent, i: int) -> tuple[NestedSequent, dict[Address, Address]]:
    """One display step moving the root into child ``i``.

    ``X, o{Y}`` becomes ``Y, b{X}`` and ``X, b{Y}`` becomes ``Y, o{X}``.
    Also returns where each old address ends up.
    """
    d, child = x.children[i]
    rest = NestedSequent(x.formulas, x.children[:i] + x.children[i + 1:])
    k = len(child.children)
    new = NestedSequent(child.formulas, child.children + ((d.dual, rest),))
    moved: dict[Address, Address] = {}
    for a in x.addresses():
        if not a:
            moved[a] = (k,)
        elif a[0] == i:
            moved[a] = a[1:]
        else:
            moved[a] = (k, a[0] - (a[0] > i)) + a[1:]
    return new, moved


def interpret(x: NestedSequent) -> Formula:
    """Formula reading of a nested sequent: comma as disjunction, nestings as boxes."""
    parts: list[Formula] = list(x.formulas)
    for wanted in (Diamond.WHITE, Diamond.BLACK):
        parts += [box_of(wanted, interpret(c)) for d, c in x.children if d is wanted]
    if not parts:
        return Top()
    result = parts[0]
    for p in parts[1:]:
        result = Or(result, p)
    return result


def _items(x: NestedSequent) -> list[tuple[str, object]]:
    return [("f", f) for f in x.formulas] + [("c", c) for c in x.children]


def substructures(x: NestedSequent) -> set[NestedSequent]:
    """All substructures: nonempty sub-multisets of a node's items, and
    recursively those of every nesting's content."""
    if x.is_empty:
        return set()
    result: set[NestedSequent] = set()
    items = _items(x)
    for r in range(1, len(items) + 1):
        for combo in itertools.combinations(items, r):
            fs = [v for k, v in combo if k == "f"]
            cs = [v for k, v in combo if k == "c"]
            result.add(NestedSequent(fs, cs))  # type: ignore[arg-type]
    for _, child in x.children:
        result |= substructures(child)
    return result


# -- contexts ---------------------------------------------------------------

class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    """A nested sequent whose nodes may carry hole identifiers."""

    formulas: tuple[Formula, ...] = ()
    children: tuple[tuple[Diamond, "Context"], ...] = ()
    holes: tuple[int, ...] = ()

    def hole_ids(self) -> list[int]:
        ids = list(self.holes)
        for _, c in self.children:
            ids += c.hole_ids()
        return ids

    def __post_init__(self) -> None:
        if len(self.holes) > 1:
            raise ContextError("a node may carry at most one hole")


def context_of(x: NestedSequent, holes: Mapping[Address, int]) -> Context:
    """Turn a sequent into a context by placing holes at the given addresses."""

    def build(node: NestedSequent, addr: Address) -> Context:
        kids = tuple((d, build(c, addr + (i,))) for i, (d, c) in enumerate(node.children))
        here = (holes[addr],) if addr in holes else ()
        return Context(node.formulas, kids, here)

    ctx = build(x, ())
    if len(set(ctx.hole_ids())) != len(ctx.hole_ids()):
        raise ContextError("hole identifiers must be distinct")
    return ctx


def plug(c: Context, fillers: Mapping[int, NestedSequent]) -> NestedSequent:
    """Fuse each filler's root into the node carrying its hole."""
    ids = c.hole_ids()
    if sorted(ids) != sorted(fillers):
        raise ContextError(f"holes {sorted(ids)} do not match fillers {sorted(fillers)}")

    def build(node: Context) -> NestedSequent:
        fs = list(node.formulas)
        kids = [(d, build(k)) for d, k in node.children]
        for h in node.holes:
            fs += fillers[h].formulas
            kids += fillers[h].children
        return NestedSequent(fs, kids)

    return build(c)


def _multiset_minus(big: Sequence, small: Sequence, key=lambda v: v) -> list | None:
    pool = list(big)
    for item in small:
        k = key(item)
        for i, cand in enumerate(pool):
            if key(cand) == k:
                del pool[i]
                break
        else:
            return None
    return pool


def match_context(pattern: Context, target: NestedSequent) -> list[dict[int, NestedSequent]]:
    """All filler maps ``f`` with ``plug(pattern, f)`` equal to ``target``."""

    def match(p: Context, t: NestedSequent) -> Iterator[dict[int, NestedSequent]]:
        rest_formulas = _multiset_minus(t.formulas, p.formulas, key=str)
        if rest_formulas is None:
            return
        if not p.holes and rest_formulas:
            return
        n, m = len(p.children), len(t.children)
        if not p.holes and n != m:
            return
        for chosen in itertools.permutations(range(m), n):
            if any(p.children[i][0] is not t.children[j][0] for i, j in enumerate(chosen)):
                continue
            leftover = [t.children[j] for j in range(m) if j not in chosen]
            partials: list[dict[int, NestedSequent]] = [{}]
            for i, j in enumerate(chosen):
                nxt = []
                for sub in match(p.children[i][1], t.children[j][1]):
                    for acc in partials:
                        nxt.append({**acc, **sub})
                partials = nxt
                if not partials:
                    break
            for acc in partials:
                if p.holes:
                    acc = {**acc, p.holes[0]: NestedSequent(rest_formulas, leftover)}
                yield acc

    seen: set[tuple] = set()
    out = []
    for f in match(pattern, target):
        sig = tuple(sorted((k, v.key()) for k, v in f.items()))
        if sig not in seen:
            seen.add(sig)
            out.append(f)
    return out


# -- labeled sequents -------------------------------------------------------

Label = str
RelAtom = tuple[Label, Label]
LabeledFormula = tuple[Label, Formula]


class LabeledSequent:
    """A set of relational atoms and a multiset of labeled formulas.

    Insertion order is kept for printing; equality ignores it.
    """

    __slots__ = ("rel", "lformulas", "_key")

    def __init__(self, rel: Iterable[RelAtom] = (), lformulas: Iterable[LabeledFormula] = ()) -> None:
        self.rel: tuple[RelAtom, ...] = tuple(dict.fromkeys(tuple(a) for a in rel))
        self.lformulas: tuple[LabeledFormula, ...] = tuple(lformulas)
        self._key: tuple | None = None

    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                tuple(sorted(self.rel)),
                tuple(sorted((x, str(f)) for x, f in self.lformulas)),
            )
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledSequent):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"LabeledSequent({str(self)!r})"

    def __str__(self) -> str:
        return show_labeled(self)

    @property
    def relset(self) -> frozenset[RelAtom]:
        return frozenset(self.rel)

    def labels(self) -> set[Label]:
        out = {x for a in self.rel for x in a}
        out |= {x for x, _ in self.lformulas}
        return out

    def formulas_at(self, x: Label) -> list[Formula]:
        return [f for y, f in self.lformulas if y == x]

    def formula_counter(self) -> Counter:
        return Counter((x, str(f)) for x, f in self.lformulas)

    def with_atoms(self, atoms: Iterable[RelAtom]) -> "LabeledSequent":
        return LabeledSequent(self.rel + tuple(atoms), self.lformulas)

    def without_atoms(self, atoms: Iterable[RelAtom]) -> "LabeledSequent":
        drop = set(atoms)
        return LabeledSequent([a for a in self.rel if a not in drop], self.lformulas)

    def with_formulas(self, extra: Iterable[LabeledFormula]) -> "LabeledSequent":
        return LabeledSequent(self.rel, self.lformulas + tuple(extra))

    def without_formula(self, item: LabeledFormula) -> "LabeledSequent":
        out = list(self.lformulas)
        target = (item[0], str(item[1]))
        for i, (x, f) in enumerate(out):
            if (x, str(f)) == target:
                del out[i]
                return LabeledSequent(self.rel, out)
        raise KeyError(item)

    def rename(self, mapping: Mapping[Label, Label]) -> "LabeledSequent":
        g = lambda v: mapping.get(v, v)  # noqa: E731
        return LabeledSequent(
            [(g(x), g(y)) for x, y in self.rel],
            [(g(x), f) for x, f in self.lformulas],
        )


@dataclass
class LabelGen:
    """Deterministic fresh-label generator.

    Labels are drawn from ``pool`` first (skipping any in ``avoid``), then
    from the counter ``prefix0, prefix1, ...``.
    """

    prefix: str = "_v"
    pool: list[str] = field(default_factory=list)
    avoid: set[str] = field(default_factory=set)
    counter: int = 0

    def fresh(self) -> Label:
        while self.pool:
            name = self.pool.pop(0)
            if name not in self.avoid:
                self.avoid.add(name)
                return name
        while True:
            name = f"{self.prefix}{self.counter}"
            self.counter += 1
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def reserve(self, names: Iterable[str]) -> None:
        self.avoid.update(names)

    @classmethod
    def letters(cls, avoid: Iterable[str] = ()) -> "LabelGen":
        """Single letters counting down from ``z``, then the numbered fallback."""
        return cls(pool=[chr(c) for c in range(ord("z"), ord("a") - 1, -1)], avoid=set(avoid))


# -- text formats -----------------------------------------------------------

class SequentSyntaxError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at offset {position}")
        self.position = position


def show_nested(x: NestedSequent) -> str:
    if x.is_empty:
        return "emp"
    parts = [str(f) for f in x.formulas]
    for d, c in x.children:
        parts.append(f"{d.nesting}{{{'' if c.is_empty else show_nested(c)}}}")
    return ", ".join(parts)


def show_labeled(s: LabeledSequent) -> str:
    parts = [f"R({x},{y})" for x, y in s.rel] + [f"{x}:{f}" for x, f in s.lformulas]
    return ", ".join(parts) if parts else "emp"


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


_NEST_OPEN = re.compile(r"([ob])\s*\{")
_EMP = re.compile(r"emp(?![A-Za-z0-9_])")


def _parse_nested_items(text: str, pos: int, closing: str) -> tuple[NestedSequent, int]:
    formulas: list[Formula] = []
    children: list[Child] = []
    pos = _skip_ws(text, pos)
    if pos < len(text) and text[pos] == closing:
        return NestedSequent(), pos
    while True:
        pos = _skip_ws(text, pos)
        m = _NEST_OPEN.match(text, pos)
        e = _EMP.match(text, pos)
        if m:
            inner, pos = _parse_nested_items(text, m.end(), "}")
            if pos >= len(text) or text[pos] != "}":
                raise SequentSyntaxError("expected '}'", pos)
            children.append((Diamond.from_nesting(m.group(1)), inner))
            pos += 1
        elif e:
            pos = e.end()
        else:
            try:
                f, pos = parse_formula_at(text, pos, stop_chars=",}")
            except FormulaSyntaxError as err:
                raise SequentSyntaxError(str(err).rsplit(" at offset", 1)[0], err.position) from None
            formulas.append(f)
        pos = _skip_ws(text, pos)
        if pos < len(text) and text[pos] == ",":
            pos += 1
            continue
        if closing == "" and pos == len(text):
            return NestedSequent(formulas, children), pos
        if closing and pos < len(text) and text[pos] == closing:
            return NestedSequent(formulas, children), pos
        if closing and pos == len(text):
            raise SequentSyntaxError(f"expected '{closing}'", pos)
        raise SequentSyntaxError("expected ',' or end of sequent", pos)


def parse_nested(text: str) -> NestedSequent:
    """Parse ``A, o{B, b{C}}, emp`` style text."""
    if not text.strip():
        return NestedSequent()
    result, pos = _parse_nested_items(text, 0, "")
    return result


_ATOM = re.compile(r"R\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*,\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)")
_LABEL = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*:")


def parse_labeled(text: str) -> LabeledSequent:
    """Parse ``R(x,y), x: A, y: B`` style text."""
    rel: list[RelAtom] = []
    lfs: list[LabeledFormula] = []
    pos = _skip_ws(text, 0)
    if pos == len(text):
        return LabeledSequent()
    while True:
        pos = _skip_ws(text, pos)
        if (m := _ATOM.match(text, pos)) is not None:
            rel.append((m.group(1), m.group(2)))
            pos = m.end()
        elif (e := _EMP.match(text, pos)) is not None:
            pos = e.end()
        elif (m := _LABEL.match(text, pos)) is not None:
            try:
                f, pos = parse_formula_at(text, m.end(), stop_chars=",")
            except FormulaSyntaxError as err:
                raise SequentSyntaxError(str(err).rsplit(" at offset", 1)[0], err.position) from None
            lfs.append((m.group(1), f))
        else:
            raise SequentSyntaxError("expected R(x,y) or a labeled formula", pos)
        pos = _skip_ws(text, pos)
        if pos == len(text):
            return LabeledSequent(rel, lfs)
        if text[pos] != ",":
            raise SequentSyntaxError("expected ','", pos)
        pos += 1
