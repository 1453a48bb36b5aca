"""Seeded random inputs: formulas, sequents, axiom sets and provable goals.

Every generator takes a ``random.Random`` so that corpora are reproducible
from a single seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .axioms import PathAxiom, PathGrammar, Word, completion_member, parse_axiom
from .formula import (
    And,
    BlackBox,
    BlackDia,
    Box,
    Dia,
    Diamond,
    Formula,
    NegLiteral,
    Or,
    PosLiteral,
    diamond_of,
    implies,
)
from .propagation import PropagationGraph
from .proof import Proof
from .prover import Budget, prove_deep
from .sequent import LabeledSequent, NestedSequent, residuate

ATOMS = ("p", "q", "r")

# transitivity, symmetry, Euclideanity and reflexivity
STANDARD_AXIOMS: dict[str, PathAxiom] = {
    name: parse_axiom(text).as_path()
    for name, text in (
        ("transitivity", "<><> -> <>"),
        ("symmetry", "<#> -> <>"),
        ("euclidean", "<#><> -> <>"),
        ("reflexivity", "e -> <>"),
    )
}


def random_formula(rng: random.Random, depth: int = 3, atoms: Sequence[str] = ATOMS) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        name = rng.choice(atoms)
        return PosLiteral(name) if rng.random() < 0.5 else NegLiteral(name)
    op = rng.choice((And, Or, Box, Dia, BlackBox, BlackDia))
    if op in (And, Or):
        return op(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms))
    return op(random_formula(rng, depth - 1, atoms))


def random_nested(
    rng: random.Random, max_nodes: int = 12, max_formulas: int = 6, depth: int = 2
) -> NestedSequent:
    """A random tree of at most ``max_nodes`` nodes holding at most ``max_formulas`` formulas."""
    n = rng.randint(1, max_nodes)
    parent = [None] + [rng.randrange(k) for k in range(1, n)]
    polarity = [rng.choice((Diamond.WHITE, Diamond.BLACK)) for _ in range(n)]
    formulas: list[list[Formula]] = [[] for _ in range(n)]
    for _ in range(rng.randint(0, max_formulas)):
        formulas[rng.randrange(n)].append(random_formula(rng, depth))

    def build(v: int) -> NestedSequent:
        kids = [(polarity[c], build(c)) for c in range(n) if parent[c] == v]
        return NestedSequent(formulas[v], kids)

    return build(0)


def random_display_moves(rng: random.Random, x: NestedSequent, count: int) -> tuple[NestedSequent, dict]:
    """Apply up to ``count`` random display steps; returns the result and the address map."""
    moved = {a: a for a in x.addresses()}
    for _ in range(count):
        if not x.children:
            break
        x, step = residuate(x, rng.randrange(len(x.children)))
        moved = {a: step[b] for a, b in moved.items()}
    return x, moved


def random_word(rng: random.Random, max_len: int, min_len: int = 0) -> Word:
    return tuple(rng.choice((Diamond.WHITE, Diamond.BLACK)) for _ in range(rng.randint(min_len, max_len)))


def random_path_axioms(rng: random.Random, max_axioms: int = 3, max_antecedent: int = 3) -> list[PathAxiom]:
    out = []
    for _ in range(rng.randint(0, max_axioms)):
        out.append(PathAxiom(random_word(rng, max_antecedent), rng.choice((Diamond.WHITE, Diamond.BLACK))))
    return out


def random_graph(rng: random.Random, max_nodes: int = 6, max_edges: int = 8) -> PropagationGraph:
    """A propagation graph of a random (not necessarily tree-shaped) set of relational atoms."""
    n = rng.randint(1, max_nodes)
    nodes = [f"v{k}" for k in range(n)]
    forward = {(rng.choice(nodes), rng.choice(nodes)) for _ in range(rng.randint(0, max_edges))}
    return PropagationGraph.build(nodes, sorted(forward))


def random_labeled(rng: random.Random, max_labels: int = 5, max_formulas: int = 5) -> LabeledSequent:
    labels = [f"v{k}" for k in range(rng.randint(1, max_labels))]
    rel = [(rng.choice(labels), rng.choice(labels)) for _ in range(rng.randint(0, 2 * len(labels)))]
    fs = [(rng.choice(labels), random_formula(rng, 2)) for _ in range(rng.randint(0, max_formulas))]
    return LabeledSequent(rel, fs)


def axiom_subsets(pool: dict[str, PathAxiom] = STANDARD_AXIOMS) -> list[list[PathAxiom]]:
    names = sorted(pool)
    return [[pool[n] for n in combo] for k in range(len(names) + 1) for combo in combinations(names, k)]


def _apply_word(w: Word, a: Formula) -> Formula:
    for d in reversed(w):
        a = diamond_of(d, a)
    return a


def theorem_goal(rng: random.Random, axioms: Sequence[PathAxiom], tries: int = 50) -> Formula:
    """A goal provable over ``axioms``, built from a completion member ``w -> d``.

    The goal is ``w A -> d A`` for a small ``A``, optionally under a box or
    paired with a second such implication.
    """
    grammar = PathGrammar(axioms)
    base = None
    for _ in range(tries):
        w = random_word(rng, 4)
        d = rng.choice((Diamond.WHITE, Diamond.BLACK))
        if completion_member(grammar, w, d):
            base = (w, d)
            break
    if base is None:
        base = ((Diamond.WHITE,), Diamond.WHITE)
    w, d = base
    a = rng.choice((PosLiteral("p"), NegLiteral("q"), And(PosLiteral("p"), PosLiteral("q"))))
    goal = implies(_apply_word(w, a), diamond_of(d, a))
    roll = rng.random()
    if roll < 0.2:
        goal = Box(goal) if rng.random() < 0.5 else BlackBox(goal)
    elif roll < 0.35:
        goal = And(goal, implies(PosLiteral("r"), _residuation_theorem(rng)))
    return goal


def _residuation_theorem(rng: random.Random) -> Formula:
    # r -> []<#>r or r -> [#]<>r
    return Box(BlackDia(PosLiteral("r"))) if rng.random() < 0.5 else BlackBox(Dia(PosLiteral("r")))


@dataclass(frozen=True)
class CorpusItem:
    axioms: tuple[PathAxiom, ...]
    goal: Formula
    proof: Proof


def proof_corpus(seed: int, count: int, budget: Budget | None = None, max_tries: int | None = None) -> Iterator[CorpusItem]:
    """Prover-generated DKT proofs of random theorem goals over standard axiom subsets."""
    rng = random.Random(seed)
    subsets = axiom_subsets()
    budget = budget or Budget(depth=12, steps=4000)
    made = tries = 0
    seen: set[tuple[str, str]] = set()
    while made < count:
        tries += 1
        if max_tries is not None and tries > max_tries:
            return
        axioms = rng.choice(subsets)
        goal = theorem_goal(rng, axioms)
        key = (str(goal), ";".join(map(str, axioms)))
        if key in seen:
            continue
        seen.add(key)
        p = prove_deep(goal, axioms, budget)
        if p is not None:
            made += 1
            yield CorpusItem(tuple(axioms), goal, p)
