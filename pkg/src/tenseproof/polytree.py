"""Labeled polytrees and their correspondence with nested sequents.

A labeled polytree is a directed graph whose underlying undirected graph is
a tree, with a multiset of formulas at each vertex.  Every nested sequent
maps to one (``to_polytree``) and every polytree can be read back as a
nested sequent from any chosen vertex (``to_nested``).  Nested sequents that
differ only by display moves map to isomorphic polytrees.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator, Mapping, Sequence

from .formula import Diamond, Formula
from .sequent import (
    Address,
    Label,
    LabeledSequent,
    LabelGen,
    NestedSequent,
    RelAtom,
)


class PolytreeError(ValueError):
    pass


class LabeledPolytree:
    """A directed labeled graph ``(V, E, L)``.

    The class also represents arbitrary labeled graphs (for instance the
    graph of a labeled sequent with a cycle); ``is_polytree`` tells which.
    Vertex and edge order is kept for deterministic traversal.
    """

    __slots__ = ("vertices", "edges", "labels", "_adj")

    def __init__(
        self,
        vertices: Iterable[Label] = (),
        edges: Iterable[RelAtom] = (),
        labels: Mapping[Label, Sequence[Formula]] | None = None,
    ) -> None:
        self.vertices: tuple[Label, ...] = tuple(dict.fromkeys(vertices))
        self.edges: tuple[RelAtom, ...] = tuple(dict.fromkeys(tuple(e) for e in edges))
        labels = labels or {}
        self.labels: dict[Label, tuple[Formula, ...]] = {
            v: tuple(labels.get(v, ())) for v in self.vertices
        }
        self._adj: dict[Label, list[tuple[Label, Diamond]]] | None = None

    def __repr__(self) -> str:
        return f"LabeledPolytree(V={list(self.vertices)}, E={list(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledPolytree):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and set(self.edges) == set(other.edges)
            and all(label_key(self.labels[v]) == label_key(other.labels[v]) for v in self.vertices)
        )

    __hash__ = None  # type: ignore[assignment]

    def neighbors(self, v: Label) -> list[tuple[Label, Diamond]]:
        """Neighbours of ``v`` with the nesting they get when ``v`` is the parent."""
        if self._adj is None:
            adj: dict[Label, list[tuple[Label, Diamond]]] = {u: [] for u in self.vertices}
            for x, y in self.edges:
                adj[x].append((y, Diamond.WHITE))
                adj[y].append((x, Diamond.BLACK))
            self._adj = adj
        return self._adj[v]

    def is_polytree(self) -> bool:
        n = len(self.vertices)
        if n == 0:
            return not self.edges
        if len(self.edges) != n - 1 or any(x == y for x, y in self.edges):
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w, _ in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    # Functional updates used by the rule kernels.

    def with_formulas(self, v: Label, extra: Sequence[Formula]) -> "LabeledPolytree":
        labels = dict(self.labels)
        labels[v] = labels[v] + tuple(extra)
        return LabeledPolytree(self.vertices, self.edges, labels)

    def without_formulas(self, v: Label, gone: Sequence[Formula]) -> "LabeledPolytree":
        pool = list(self.labels[v])
        for f in gone:
            pool.remove(f)
        labels = dict(self.labels)
        labels[v] = tuple(pool)
        return LabeledPolytree(self.vertices, self.edges, labels)

    def with_vertex(self, v: Label, formulas: Sequence[Formula] = ()) -> "LabeledPolytree":
        labels = dict(self.labels)
        labels[v] = tuple(formulas)
        return LabeledPolytree(self.vertices + (v,), self.edges, labels)

    def with_edges(self, extra: Iterable[RelAtom]) -> "LabeledPolytree":
        return LabeledPolytree(self.vertices, self.edges + tuple(extra), self.labels)

    def without_edges(self, gone: Iterable[RelAtom]) -> "LabeledPolytree":
        drop = set(gone)
        return LabeledPolytree(self.vertices, [e for e in self.edges if e not in drop], self.labels)

    def without_vertices(self, gone: Iterable[Label]) -> "LabeledPolytree":
        drop = set(gone)
        return LabeledPolytree(
            [v for v in self.vertices if v not in drop],
            [e for e in self.edges if e[0] not in drop and e[1] not in drop],
            self.labels,
        )

    def rename(self, mapping: Mapping[Label, Label]) -> "LabeledPolytree":
        g = lambda v: mapping.get(v, v)  # noqa: E731
        labels: dict[Label, tuple[Formula, ...]] = {}
        for v in self.vertices:
            labels[g(v)] = labels.get(g(v), ()) + self.labels[v]
        return LabeledPolytree(
            [g(v) for v in self.vertices], [(g(x), g(y)) for x, y in self.edges], labels
        )

    def side(self, v: Label, w: Label) -> list[Label]:
        """Vertices reachable from neighbour ``w`` without passing through ``v``."""
        out = [w]
        seen = {v, w}
        i = 0
        while i < len(out):
            for u, _ in self.neighbors(out[i]):
                if u not in seen:
                    seen.add(u)
                    out.append(u)
            i += 1
        return out

    def tree_path(self, a: Label, b: Label) -> list[Label]:
        """The unique vertex path from ``a`` to ``b`` (polytrees only)."""
        parent: dict[Label, Label | None] = {a: None}
        stack = [a]
        while stack:
            v = stack.pop()
            if v == b:
                break
            for w, _ in self.neighbors(v):
                if w not in parent:
                    parent[w] = v
                    stack.append(w)
        if b not in parent:
            raise PolytreeError(f"{b} is not reachable from {a}")
        path = [b]
        while path[-1] != a:
            path.append(parent[path[-1]])  # type: ignore[arg-type]
        return path[::-1]

    def distance(self, a: Label, b: Label) -> int:
        return len(self.tree_path(a, b)) - 1

    def diameter(self) -> int:
        if not self.vertices:
            return 0
        return max(self.distance(a, b) for a in self.vertices for b in self.vertices)


def label_key(fs: Sequence[Formula]) -> tuple[str, ...]:
    return tuple(sorted(str(f) for f in fs))


def edge_diamond(g: LabeledPolytree, a: Label, b: Label) -> Diamond:
    """The diamond labelling the propagation edge from ``a`` to neighbour ``b``."""
    if (a, b) in set(g.edges):
        return Diamond.WHITE
    if (b, a) in set(g.edges):
        return Diamond.BLACK
    raise PolytreeError(f"{a} and {b} are not adjacent")


# -- translations between nested sequents and polytrees ---------------------

def to_polytree_addressed(
    x: Label, s: NestedSequent, gen: LabelGen | None = None
) -> tuple[LabeledPolytree, dict[Address, Label]]:
    """Polytree of ``s`` started at label ``x``, with the node-to-label map.

    Every node of the nested sequent becomes a vertex; only the empty
    sequent as a whole gives the empty graph.
    """
    if s.is_empty:
        return LabeledPolytree(), {}
    gen = gen if gen is not None else LabelGen()
    gen.reserve([x])
    vertices: list[Label] = []
    edges: list[RelAtom] = []
    labels: dict[Label, tuple[Formula, ...]] = {}
    amap: dict[Address, Label] = {}

    def walk(node: NestedSequent, here: Label, addr: Address) -> None:
        vertices.append(here)
        labels[here] = node.formulas
        amap[addr] = here
        for i, (pol, child) in enumerate(node.children):
            y = gen.fresh()
            edges.append((here, y) if pol is Diamond.WHITE else (y, here))
            walk(child, y, addr + (i,))

    walk(s, x, ())
    return LabeledPolytree(vertices, edges, labels), amap


def to_polytree(x: Label, s: NestedSequent, gen: LabelGen | None = None) -> LabeledPolytree:
    return to_polytree_addressed(x, s, gen)[0]


def to_nested_addressed(x: Label, g: LabeledPolytree) -> tuple[NestedSequent, dict[Label, Address]]:
    """Nested reading of ``g`` from vertex ``x``, with the label-to-node map."""
    if not g.vertices:
        return NestedSequent(), {}
    if x not in g.labels:
        raise PolytreeError(f"unknown label {x!r}")
    amap: dict[Label, Address] = {}

    def build(v: Label, parent: Label | None, addr: Address) -> NestedSequent:
        amap[v] = addr
        kids = []
        for w, pol in g.neighbors(v):
            if w == parent:
                continue
            if w in amap:
                raise PolytreeError("graph is not a polytree")
            kids.append((pol, build(w, v, addr + (len(kids),))))
        return NestedSequent(g.labels[v], kids)

    result = build(x, None, ())
    if len(amap) != len(g.vertices):
        raise PolytreeError("graph is not a polytree")
    return result, amap


def to_nested(x: Label, g: LabeledPolytree) -> NestedSequent:
    return to_nested_addressed(x, g)[0]


# -- isomorphism ------------------------------------------------------------

def _codes(g: LabeledPolytree, root: Label) -> dict[tuple[Label, Label | None], str]:
    memo: dict[tuple[Label, Label | None], str] = {}

    def code(v: Label, parent: Label | None) -> str:
        k = (v, parent)
        if k not in memo:
            kids = sorted(
                (">" if pol is Diamond.WHITE else "<") + code(w, v)
                for w, pol in g.neighbors(v)
                if w != parent
            )
            memo[k] = "(" + "&".join(label_key(g.labels[v])) + "|" + ",".join(kids) + ")"
        return memo[k]

    code(root, None)
    return memo


def iso(g: LabeledPolytree, h: LabeledPolytree) -> dict[Label, Label] | None:
    """An isomorphism from ``g`` to ``h`` preserving edges and label multisets."""
    if not (g.is_polytree() and h.is_polytree()):
        raise PolytreeError("iso is defined on polytrees only")
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    if not g.vertices:
        return {}
    r = g.vertices[0]
    gc = _codes(g, r)
    target = gc[(r, None)]
    for s in h.vertices:
        if label_key(h.labels[s]) != label_key(g.labels[r]):
            continue
        hc = _codes(h, s)
        if hc[(s, None)] != target:
            continue
        f: dict[Label, Label] = {}

        def pair(a: Label, pa: Label | None, b: Label, pb: Label | None) -> None:
            f[a] = b
            pool = [(w, pol) for w, pol in h.neighbors(b) if w != pb]
            for w, pol in g.neighbors(a):
                if w == pa:
                    continue
                c = gc[(w, a)]
                for i, (u, qol) in enumerate(pool):
                    if qol is pol and hc[(u, b)] == c:
                        del pool[i]
                        pair(w, a, u, b)
                        break

        pair(r, None, s, None)
        return f
    return None


def embed(p: LabeledPolytree, c: LabeledPolytree) -> dict[Label, Label] | None:
    """An injective map of polytree ``p`` into ``c`` keeping edges and
    directions, with each label multiset of ``p`` contained in its image's.

    Locally injective maps between trees are injective, so children only
    need distinct images among the neighbours of their parent's image.
    """
    if not p.vertices:
        return {}
    memo: dict[tuple, dict[Label, Label] | None] = {}

    def fits(a: Label, b: Label) -> bool:
        have = Counter(str(f) for f in c.labels[b])
        need = Counter(str(f) for f in p.labels[a])
        return all(have[k] >= n for k, n in need.items())

    def go(a: Label, pa: Label | None, b: Label, pb: Label | None) -> dict[Label, Label] | None:
        key = (a, pa, b, pb)
        if key in memo:
            return memo[key]
        memo[key] = None
        if not fits(a, b):
            return None
        kids = [(w, pol) for w, pol in p.neighbors(a) if w != pa]
        spots = [(u, pol) for u, pol in c.neighbors(b) if u != pb]

        def assign(k: int, used: frozenset) -> dict[Label, Label] | None:
            if k == len(kids):
                return {}
            w, pol = kids[k]
            for u, qol in spots:
                if u in used or qol is not pol:
                    continue
                sub = go(w, a, u, b)
                if sub is None:
                    continue
                rest = assign(k + 1, used | {u})
                if rest is not None:
                    return {**sub, **rest}
            return None

        found = assign(0, frozenset())
        if found is not None:
            found = {a: b, **found}
        memo[key] = found
        return found

    r = p.vertices[0]
    for b in c.vertices:
        m = go(r, None, b, None)
        if m is not None:
            return m
    return None


def merge(g: LabeledPolytree, h: LabeledPolytree, x: Label) -> LabeledPolytree:
    """Glue two polytrees sharing exactly the vertex ``x``."""
    shared = set(g.vertices) & set(h.vertices)
    if shared != {x}:
        raise PolytreeError(f"merge needs exactly {{{x}}} in common, found {sorted(shared)}")
    labels = dict(g.labels)
    for v in h.vertices:
        labels[v] = labels.get(v, ()) + h.labels[v]
    out = LabeledPolytree(g.vertices + h.vertices, g.edges + h.edges, labels)
    if not out.is_polytree():
        raise PolytreeError("merge result is not a polytree")
    return out


# -- graphs of labeled sequents ---------------------------------------------

def labeled_sequent_of(g: LabeledPolytree) -> LabeledSequent:
    return LabeledSequent(g.edges, [(v, f) for v in g.vertices for f in g.labels[v]])


def graph_of(s: LabeledSequent) -> LabeledPolytree:
    order: list[Label] = []
    for x, y in s.rel:
        order += [x, y]
    order += [x for x, _ in s.lformulas]
    labels: dict[Label, list[Formula]] = {}
    for x, f in s.lformulas:
        labels.setdefault(x, []).append(f)
    return LabeledPolytree(order, s.rel, labels)


def is_polytree_sequent(s: LabeledSequent) -> bool:
    return graph_of(s).is_polytree()


# -- display moves ----------------------------------------------------------

def display_moves(g: LabeledPolytree, source: Label, target: Label) -> Iterator[tuple[str, Label]]:
    """Display steps carrying the root from ``source`` to ``target``.

    Yields ``(rule, new_root)``; moving into a ``o``-child is an ``rp`` step
    and into a ``b``-child an ``rf`` step (read from conclusion to premise).
    """
    path = g.tree_path(source, target)
    for a, b in zip(path, path[1:]):
        yield ("rp" if edge_diamond(g, a, b) is Diamond.WHITE else "rf"), b


def display_derivation(s, source: Label, target: Label, root: Label = "x"):
    """An ``rf``/``rp``-only derivation of the reading at ``source`` from the
    reading at ``target``.

    ``s`` is a nested sequent (labels refer to ``to_polytree(root, s)``) or a
    polytree.  The result is a proof whose single leaf is an open assumption
    (rule ``open``) holding the reading at ``target``.
    """
    from .proof import Proof

    g = s if isinstance(s, LabeledPolytree) else to_polytree(root, s)
    if source not in g.labels or target not in g.labels:
        raise PolytreeError(f"unknown node {source if source not in g.labels else target!r}")
    steps = list(display_moves(g, source, target))
    node = Proof(to_nested(target, g), "open")
    roots = [source] + [v for _, v in steps]
    for (rule, _), here in zip(reversed(steps), reversed(roots[:-1])):
        node = Proof(to_nested(here, g), rule, {}, (node,))
    return node


def label_counter(g: LabeledPolytree) -> Counter:
    return Counter((v, str(f)) for v in g.vertices for f in g.labels[v])
