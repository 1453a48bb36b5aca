"""Context-free reachability on edge-labelled graphs.

A fact ``(A, u, v)`` says some walk from ``u`` to ``v`` spells a word derivable
from nonterminal ``A``.  Facts are closed under the grammar rules with a
priority worklist ordered by witness length (Knuth's generalisation of
Dijkstra's algorithm), so the back-pointer kept for each fact replays a
shortest witness; ties are broken by discovery order.  The same engine
decides string membership (run it on a chain graph) and propagation-rule
applicability.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

Symbol = Hashable
Node = Hashable


@dataclass(frozen=True)
class Production:
    """``head -> body``; ``terminal`` productions read one edge label."""

    head: Symbol
    body: tuple[Symbol, ...]
    terminal: bool = False
    tag: object = None  # caller data, e.g. the axiom the production came from


@dataclass
class BinaryGrammar:
    """A grammar whose rules have at most two body symbols.

    ``origin`` maps each binarized rule to ``(original production, offset)``;
    helper nonterminals are tuples ``("_aux", id, offset)``.
    """

    rules: list[Production] = field(default_factory=list)
    nullable_heads: set[Symbol] = field(default_factory=set)
    origin: dict[int, tuple[Production, int]] = field(default_factory=dict)

    @classmethod
    def from_productions(cls, prods: Sequence[Production]) -> "BinaryGrammar":
        g = cls()
        for pid, p in enumerate(prods):
            if p.terminal or len(p.body) <= 2:
                g.origin[len(g.rules)] = (p, 0)
                g.rules.append(p)
                if not p.body and not p.terminal:
                    g.nullable_heads.add(p.head)
                continue
            head = p.head
            for k in range(len(p.body) - 2):
                aux = ("_aux", pid, k + 1)
                g.origin[len(g.rules)] = (p, k)
                g.rules.append(Production(head, (p.body[k], aux), tag=p.tag))
                head = aux
            g.origin[len(g.rules)] = (p, len(p.body) - 2)
            g.rules.append(Production(head, p.body[-2:], tag=p.tag))
        return g


Fact = tuple[Symbol, Node, Node]
# back-pointer: (rule index, child facts); terminal rules have no children
Pointer = tuple[object, tuple[Fact, ...]]


class Reachability:
    """Saturated fact set for one graph and one grammar."""

    def __init__(
        self,
        grammar: BinaryGrammar,
        nodes: Iterable[Node],
        edges: Iterable[tuple[Node, Node, Symbol]],
    ) -> None:
        self.grammar = grammar
        self.nodes = list(dict.fromkeys(nodes))
        self.edges = list(dict.fromkeys(edges))
        self.back: dict[Fact, Pointer] = {}
        self._out: dict[tuple[Symbol, Node], list[Node]] = defaultdict(list)
        self._in: dict[tuple[Symbol, Node], list[Node]] = defaultdict(list)
        self._saturate()

    def _saturate(self) -> None:
        g = self.grammar
        unit: dict[Symbol, list[int]] = defaultdict(list)
        left: dict[Symbol, list[int]] = defaultdict(list)
        right: dict[Symbol, list[int]] = defaultdict(list)
        term: dict[Symbol, list[int]] = defaultdict(list)
        for i, r in enumerate(g.rules):
            if r.terminal:
                term[r.body[0]].append(i)
            elif len(r.body) == 1:
                unit[r.body[0]].append(i)
            elif len(r.body) == 2:
                left[r.body[0]].append(i)
                right[r.body[1]].append(i)
        heap: list = []
        tick = 0
        length: dict[Fact, int] = {}

        def push(f: Fact, n: int, ptr: Pointer) -> None:
            nonlocal tick
            if f not in self.back:
                heapq.heappush(heap, (n, tick, f, ptr))
                tick += 1

        for u, v, lab in self.edges:
            for i in term.get(lab, ()):
                push((g.rules[i].head, u, v), 1, (i, ()))
        for i, r in enumerate(g.rules):
            if not r.terminal and not r.body:
                for u in self.nodes:
                    push((r.head, u, u), 0, (i, ()))
        while heap:
            n, _, f, ptr = heapq.heappop(heap)
            if f in self.back:
                continue
            self.back[f] = ptr
            length[f] = n
            a, u, v = f
            self._out[(a, u)].append(v)
            self._in[(a, v)].append(u)
            for i in unit.get(a, ()):
                push((g.rules[i].head, u, v), n, (i, (f,)))
            for i in left.get(a, ()):
                c = g.rules[i].body[1]
                for w in list(self._out.get((c, v), ())):
                    o = (c, v, w)
                    push((g.rules[i].head, u, w), n + length[o], (i, (f, o)))
            for i in right.get(a, ()):
                b = g.rules[i].body[0]
                for w in list(self._in.get((b, u), ())):
                    o = (b, w, u)
                    push((g.rules[i].head, w, v), n + length[o], (i, (o, f)))
        self.length = length

    def holds(self, sym: Symbol, u: Node, v: Node) -> bool:
        return (sym, u, v) in self.back

    def targets(self, sym: Symbol, u: Node) -> list[Node]:
        return list(self._out.get((sym, u), ()))

    def walk(self, fact: Fact) -> list[tuple[Node, Symbol, Node]]:
        """The edges of the witness walk for ``fact``, in order."""
        out: list[tuple[Node, Symbol, Node]] = []
        stack = [fact]
        while stack:
            f = stack.pop()
            i, kids = self.back[f]
            r = self.grammar.rules[i]  # type: ignore[index]
            if r.terminal:
                out.append((f[1], r.body[0], f[2]))
            else:
                stack.extend(reversed(kids))
        return out

    def tree(self, fact: Fact) -> "DerivationNode":
        """The derivation of ``fact`` over the original (unbinarized) rules."""
        result = self._expand(fact)
        assert isinstance(result, DerivationNode)
        return result

    def _expand(self, fact: Fact):
        i, kids = self.back[fact]
        r = self.grammar.rules[i]  # type: ignore[index]
        orig, _ = self.grammar.origin[i]  # type: ignore[index]
        if r.terminal:
            return DerivationNode(fact[0], orig, (), fact[1], fact[2])
        parts: list[DerivationNode] = []
        for k in kids:
            sub = self._expand(k)
            if isinstance(sub, list):
                parts.extend(sub)
            else:
                parts.append(sub)
        if _is_aux(fact[0]):
            return parts
        return DerivationNode(fact[0], orig, tuple(parts), fact[1], fact[2])


def _is_aux(sym: Symbol) -> bool:
    return isinstance(sym, tuple) and len(sym) == 3 and sym[0] == "_aux"


@dataclass(frozen=True)
class DerivationNode:
    symbol: Symbol
    production: Production
    children: tuple["DerivationNode", ...]
    start: Node
    end: Node
