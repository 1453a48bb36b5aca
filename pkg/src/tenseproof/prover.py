"""Bounded backward proof search.

``prove_deep`` searches DKT with propagation rules; ``prove_labeled``
searches the labeled calculus with structural rules of general path
axioms.  Both saturate without backtracking: at each step the first
applicable rule in a fixed order is used, so a run is deterministic, and
the budget bounds the number of steps on any branch.  Absence of a proof
means the budget ran out, not that the goal is refuted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .axioms import AnyAxiom, PathGrammar, as_general, check_scope, dual_word, relational_chain
from .formula import And, BlackBox, Box, Diamond, Formula, Or, as_diamond
from .proof import Proof, apply_rule, has_dual_literals, path_param, walks
from .propagation import PropagationIndex, pg_of_nested
from .recursion import call_with_deep_stack
from .sequent import LabeledSequent, NestedSequent
from .translate import translation_labels


@dataclass(frozen=True)
class Budget:
    """``depth`` bounds rule applications per branch; ``steps`` bounds them in total."""

    depth: int = 12
    steps: int = 10_000
    structural: int = 3

    def __post_init__(self) -> None:
        if self.depth <= 0 or self.steps <= 0:
            raise ValueError("budget must be positive")


class _OutOfSteps(Exception):
    pass


# -- deep search ----------------------------------------------------------------

class _DeepSearch:
    def __init__(self, grammar: PathGrammar, budget: Budget) -> None:
        self.grammar = grammar
        self.budget = budget
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.budget.steps:
            raise _OutOfSteps

    def step(self, x: NestedSequent, done: frozenset) -> tuple[str, dict, frozenset] | None:
        addrs = list(x.addresses())
        for a in addrs:
            if has_dual_literals(x.node(a).formulas):
                return "id", {"node": list(a)}, done
        for cls, rule in ((Or, "or"), (And, "and")):
            for a in addrs:
                for f in x.node(a).formulas:
                    if isinstance(f, cls):
                        return rule, {"node": list(a), "formula": str(f)}, done
        for a in addrs:
            node = x.node(a)
            for f in node.formulas:
                split = as_diamond(f)
                if split is None:
                    continue
                kind, body = split
                for i, (d, child) in enumerate(node.children):
                    if d is kind and body not in child.formulas:
                        name = "dia1" if kind is Diamond.WHITE else "bdia1"
                        return name, {"node": list(a), "formula": str(f), "child": i}, done
                for i, (d, child) in enumerate(node.children):
                    if d is kind.dual:
                        for g in child.formulas:
                            sg = as_diamond(g)
                            if sg and sg[0] is kind and sg[1] not in node.formulas:
                                name = "dia2" if kind is Diamond.WHITE else "bdia2"
                                return name, {"node": list(a), "formula": str(g), "child": i}, done
        index = None
        for a in addrs:
            for f in x.node(a).formulas:
                split = as_diamond(f)
                if split is None:
                    continue
                if index is None:
                    index = PropagationIndex(pg_of_nested(x), self.grammar)
                kind, body = split
                for b in index.destinations(a, kind):
                    if body not in x.node(b).formulas:
                        path = index.path(a, kind, b)
                        assert path is not None
                        witness = path_param(path, list)
                        return "dp", {"node": list(a), "formula": str(f), "witness": witness}, done
        for a in addrs:
            for f in x.node(a).formulas:
                if isinstance(f, (Box, BlackBox)) and (a, str(f)) not in done:
                    rule = "wbox" if isinstance(f, Box) else "bbox"
                    return rule, {"node": list(a), "formula": str(f)}, done | {(a, str(f))}
        return None

    def search(self, x: NestedSequent, depth: int, done: frozenset, seen: frozenset = frozenset()) -> Proof | None:
        self.tick()
        key = x.key()
        if key in seen:
            return None
        seen = seen | {key}
        found = self.step(x, done)
        if found is None:
            return None
        rule, params, done = found
        if rule == "id":
            return Proof(x, "id", params)
        if depth == 0:
            return None
        kids = []
        for q in apply_rule(x, rule, params):
            sub = self.search(q, depth - 1, done, seen)  # type: ignore[arg-type]
            if sub is None:
                return None
            kids.append(sub)
        return Proof(x, rule, params, tuple(kids))


def prove_deep(goal: Formula, axioms: Iterable[AnyAxiom] = (), budget: Budget | None = None) -> Proof | None:
    """A DKT proof of the sequent holding just ``goal``, or ``None``."""
    budget = budget or Budget()
    grammar = PathGrammar(axioms)
    s = _DeepSearch(grammar, budget)
    try:
        return call_with_deep_stack(s.search, NestedSequent([goal]), budget.depth, frozenset())
    except _OutOfSteps:
        return None


# -- labeled search ------------------------------------------------------------

class _LabeledSearch:
    def __init__(self, axioms: list, budget: Budget) -> None:
        self.axioms = axioms
        self.budget = budget
        self.used = 0
        self.gen = translation_labels(["x"])

    def tick(self) -> None:
        self.used += 1
        if self.used > self.budget.steps:
            raise _OutOfSteps

    def step(self, s: LabeledSequent, quota: int) -> tuple[str, dict] | None:
        labels = sorted({x for x, _ in s.lformulas})
        for x in labels:
            if has_dual_literals(s.formulas_at(x)):
                return "id", {}
        for cls, rule in ((Or, "l_or"), (And, "l_and"), (Box, "l_box"), (BlackBox, "l_bbox")):
            for x, f in s.lformulas:
                if isinstance(f, cls):
                    params = {"label": x, "formula": str(f)}
                    if rule in ("l_box", "l_bbox"):
                        params["eigen"] = self.gen.fresh()
                    return rule, params
        for x, f in s.lformulas:
            split = as_diamond(f)
            if split is None:
                continue
            kind, body = split
            for a, b in reversed(s.rel):
                t = b if kind is Diamond.WHITE and a == x else a if kind is Diamond.BLACK and b == x else None
                if t is not None and body not in s.formulas_at(t):
                    return ("l_dia" if kind is Diamond.WHITE else "l_bdia"), {"label": x, "formula": str(f), "target": t}
        if quota <= 0:
            return None
        for x, f in s.lformulas:
            split = as_diamond(f)
            if split is None:
                continue
            for ax in self.axioms:
                if not ax.consequent:
                    continue
                if ax.consequent[0] is split[0]:
                    # a new chain starting at x
                    ends = [w[-1] for w in walks(s.rel, x, ax.antecedent)] if ax.antecedent else [x]
                    # a walk back to x itself rarely helps, so it is tried last
                    for y in sorted(dict.fromkeys(ends), key=lambda e: e == x):
                        if not any(w[-1] == y for w in walks(s.rel, x, ax.consequent)):
                            return "structural", {"axiom": ax, "x": x, "y": y}
                if ax.consequent[-1].dual is split[0]:
                    # a new chain ending at x, found by walking the antecedent backwards
                    back = dual_word(ax.antecedent)
                    starts = [w[-1] for w in walks(s.rel, x, back)] if ax.antecedent else [x]
                    for y in sorted(dict.fromkeys(starts), key=lambda e: e == x):
                        if not any(w[-1] == x for w in walks(s.rel, y, ax.consequent)):
                            return "structural", {"axiom": ax, "x": y, "y": x}
        return None

    def search(self, s: LabeledSequent, depth: int, quota: int) -> Proof | None:
        self.tick()
        found = self.step(s, quota)
        if found is None:
            return None
        rule, params = found
        if rule == "id":
            return Proof(s, "id")
        if depth == 0:
            return None
        if rule == "structural":
            ax, x, y = params["axiom"], params["x"], params["y"]
            inner = [self.gen.fresh() for _ in ax.consequent[1:]]
            prem = s.with_atoms(relational_chain(ax.consequent, x, y, inner))
            sub = self.search(prem, depth - 1, quota - 1)
            if sub is None:
                return None
            name = "l_path" if ax.is_path else "l_gp"
            return Proof(s, name, {"axiom": str(ax)}, (sub,))
        kids = []
        for q in apply_rule(s, rule, params):
            sub = self.search(q, depth - 1, quota)  # type: ignore[arg-type]
            if sub is None:
                return None
            kids.append(sub)
        return Proof(s, rule, params, tuple(kids))


def prove_labeled(
    goal: Formula, axioms: Iterable[AnyAxiom] = (), budget: Budget | None = None, label: str = "x"
) -> Proof | None:
    """A labeled proof of ``label: goal`` with structural rules, or ``None``."""
    budget = budget or Budget()
    axs = [as_general(a) for a in axioms]
    for a in axs:
        check_scope(a)
    s = _LabeledSearch(axs, budget)
    s.gen.reserve([label])
    try:
        return call_with_deep_stack(s.search, LabeledSequent((), [(label, goal)]), budget.depth, budget.structural)
    except _OutOfSteps:
        return None


__all__ = ["Budget", "prove_deep", "prove_labeled"]
