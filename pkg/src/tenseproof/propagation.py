"""Propagation graphs and propagation-rule applicability.

The propagation graph of a sequent has a pair of dual edges for every
nesting (or relational atom): ``(n, m, <>)`` and ``(m, n, <#>)`` when ``m`` is
a ``o``-child of ``n`` (or ``Rnm`` holds).  A propagation rule may copy
``A`` from a node holding ``<?>A`` to any node reachable by a walk whose
diamond word is in the completion for ``<?>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .axioms import PathGrammar, ParseNode, completion_member, terminal, tree_from_reachability
from .cfl import Reachability
from .formula import Diamond
from .sequent import LabeledSequent, NestedSequent

PGNode = Hashable


class PropagationError(ValueError):
    pass


@dataclass(frozen=True)
class PropagationGraph:
    nodes: frozenset
    edges: frozenset  # of (node, node, Diamond)

    @classmethod
    def build(cls, nodes: Iterable[PGNode], forward: Iterable[tuple[PGNode, PGNode]]) -> "PropagationGraph":
        """Graph from ``<>``-edges; the dual ``<#>`` edges are added here."""
        es = set()
        for a, b in forward:
            es.add((a, b, Diamond.WHITE))
            es.add((b, a, Diamond.BLACK))
        return cls(frozenset(nodes), frozenset(es))

    def successors(self, n: PGNode) -> list[tuple[PGNode, Diamond]]:
        return sorted(((b, d) for a, b, d in self.edges if a == n), key=repr)

    def is_dual_closed(self) -> bool:
        return all((b, a, d.dual) in self.edges for a, b, d in self.edges)

    def rename(self, mapping) -> "PropagationGraph":
        return PropagationGraph(
            frozenset(mapping[n] for n in self.nodes),
            frozenset((mapping[a], mapping[b], d) for a, b, d in self.edges),
        )


@dataclass(frozen=True)
class PropPath:
    """``n1, d1, n2, ..., n_k``; a single node is the empty path."""

    nodes: tuple
    diamonds: tuple[Diamond, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.diamonds) + 1:
            raise PropagationError("a path has one more node than diamonds")

    @property
    def source(self) -> PGNode:
        return self.nodes[0]

    @property
    def target(self) -> PGNode:
        return self.nodes[-1]

    def steps(self) -> list[tuple[PGNode, Diamond, PGNode]]:
        return list(zip(self.nodes, self.diamonds, self.nodes[1:]))

    def __str__(self) -> str:
        parts = [str(self.nodes[0])]
        for d, n in zip(self.diamonds, self.nodes[1:]):
            parts += [d.value, str(n)]
        return ", ".join(parts)

    def rename(self, mapping) -> "PropPath":
        return PropPath(tuple(mapping.get(n, n) for n in self.nodes), self.diamonds)

    def reverse(self) -> "PropPath":
        return PropPath(self.nodes[::-1], tuple(d.dual for d in reversed(self.diamonds)))

    @classmethod
    def from_steps(cls, start: PGNode, steps: Sequence[tuple[PGNode, Diamond, PGNode]]) -> "PropPath":
        nodes = [start]
        ds = []
        for a, d, b in steps:
            if a != nodes[-1]:
                raise PropagationError("steps do not chain")
            ds.append(d)
            nodes.append(b)
        return cls(tuple(nodes), tuple(ds))


def path_string(p: PropPath) -> tuple[Diamond, ...]:
    return p.diamonds


def pg_of_nested(x: NestedSequent) -> PropagationGraph:
    """Nodes are addresses (tuples of child indices) of ``x``."""
    fwd = []
    nodes = []
    for addr in x.addresses():
        nodes.append(addr)
        for i, (pol, _) in enumerate(x.node(addr).children):
            child = addr + (i,)
            fwd.append((addr, child) if pol is Diamond.WHITE else (child, addr))
    return PropagationGraph.build(nodes, fwd)


def pg_of_labeled(s: LabeledSequent) -> PropagationGraph:
    nodes = set(s.labels())
    return PropagationGraph.build(nodes, s.rel)


def is_path_in(g: PropagationGraph, p: PropPath) -> bool:
    return p.nodes[0] in g.nodes and all((a, b, d) in g.edges for a, d, b in p.steps())


def witness_valid(g: PropagationGraph, p: PropPath, grammar: PathGrammar, target: Diamond) -> bool:
    return is_path_in(g, p) and completion_member(grammar, p.diamonds, target)


class PropagationIndex:
    """All completion-licensed reachability facts of one graph."""

    def __init__(self, g: PropagationGraph, grammar: PathGrammar) -> None:
        self.graph = g
        self.grammar = grammar
        order = sorted(g.nodes, key=repr)
        edges = sorted(((a, b, terminal(d)) for a, b, d in g.edges), key=repr)
        self._r = Reachability(grammar.binary, order, edges)

    def path(self, source: PGNode, target: Diamond, dest: PGNode) -> PropPath | None:
        if source not in self.graph.nodes or dest not in self.graph.nodes:
            raise PropagationError(f"unknown node {source if source not in self.graph.nodes else dest!r}")
        fact = (target, source, dest)
        if not self._r.holds(*fact):
            return None
        steps = [(a, lab[1], b) for a, lab, b in self._r.walk(fact)]
        return PropPath.from_steps(source, steps)

    def destinations(self, source: PGNode, target: Diamond) -> list[PGNode]:
        return sorted(self._r.targets(target, source), key=repr)

    def parse(self, source: PGNode, target: Diamond, dest: PGNode) -> ParseNode:
        return tree_from_reachability(self._r, target, source, dest)


def reachable(
    g: PropagationGraph, source: PGNode, target: Diamond, grammar: PathGrammar, dest: PGNode
) -> PropPath | None:
    """A walk from ``source`` to ``dest`` whose word is in the completion for ``target``."""
    if source not in g.nodes:
        raise PropagationError(f"unknown node {source!r}")
    return PropagationIndex(g, grammar).path(source, target, dest)
