from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import is_isomorphism
from strategies import nested
from tenseproof.formula import Diamond, PosLiteral
from tenseproof.generate import random_display_moves, random_nested
from tenseproof.polytree import (
    LabeledPolytree,
    PolytreeError,
    display_derivation,
    embed,
    graph_of,
    iso,
    is_polytree_sequent,
    labeled_sequent_of,
    merge,
    to_nested,
    to_nested_addressed,
    to_polytree,
    to_polytree_addressed,
)
from tenseproof.proof import check, skt
from tenseproof.sequent import LabelGen, NestedSequent, parse_labeled, parse_nested

A, B, C, D = (PosLiteral(n) for n in "ABCD")
N = parse_nested


def example_graph() -> LabeledPolytree:
    return LabeledPolytree("xyz", [("x", "y"), ("z", "x")], {"x": [A], "y": [B, C], "z": [D]})


class TestIso:
    def test_single_vertices(self):
        g = LabeledPolytree(["x"], [], {"x": [PosLiteral("p")]})
        h = LabeledPolytree(["y"], [], {"y": [PosLiteral("p")]})
        assert iso(g, h) == {"x": "y"}

    def test_label_multiplicity(self):
        g = LabeledPolytree(["x"], [], {"x": [PosLiteral("p")]})
        h = LabeledPolytree(["x"], [], {"x": [PosLiteral("p")] * 2})
        assert iso(g, h) is None

    def test_direction_matters(self):
        assert iso(LabeledPolytree("xy", [("x", "y")]), LabeledPolytree("xy", [("y", "x")])) is not None
        g = LabeledPolytree("xy", [("x", "y")], {"x": [A]})
        h = LabeledPolytree("xy", [("y", "x")], {"y": [A]})
        f = iso(g, h)
        assert f is None or is_isomorphism(f, g, h)
        h2 = LabeledPolytree("xy", [("y", "x")], {"x": [A]})
        assert iso(g, h2) is None

    @given(nested(), nested())
    def test_residuation_invariance(self, x, y):
        left = to_polytree("x", x.union(NestedSequent((), [(Diamond.WHITE, y)])))
        right = to_polytree("x", NestedSequent((), [(Diamond.BLACK, x)]).union(y))
        f = iso(left, right)
        assert f is not None and is_isomorphism(f, left, right)

    def test_non_polytree_is_rejected(self):
        g = graph_of(parse_labeled("R(x,u), R(z,u), R(y,x), R(y,z)"))
        with pytest.raises(PolytreeError):
            iso(g, g)


class TestTranslations:
    def test_to_polytree_example(self):
        g = to_polytree("x", N("A, o{B, b{C}}, b{D}"), LabelGen.letters(["x"]))
        assert set(g.vertices) == {"x", "z", "y", "w"}
        assert set(g.edges) == {("x", "z"), ("y", "z"), ("w", "x")}
        assert g.labels == {"x": (A,), "z": (B,), "y": (C,), "w": (D,)}

    def test_empty_and_flat(self):
        assert to_polytree("x", N("emp")).vertices == ()
        g = to_polytree("x", N("p, q"))
        assert g.vertices == ("x",) and len(g.labels["x"]) == 2

    def test_to_nested_example(self):
        g = example_graph()
        assert to_nested("x", g) == N("A, o{B, C}, b{D}")
        assert to_nested("y", g) == N("B, C, b{A, b{D}}")
        assert to_nested("z", g) == N("D, o{A, o{B, C}}")

    def test_unknown_start(self):
        with pytest.raises(PolytreeError):
            to_nested("q", example_graph())

    def test_empty_graph_reads_as_empty(self):
        assert to_nested("x", LabeledPolytree()) == N("emp")

    @given(nested(), st.sampled_from(["x", "a"]), st.sampled_from(["y", "b"]))
    def test_start_vertex_irrelevance(self, x, u, v):
        g, h = to_polytree(u, x), to_polytree(v, x)
        f = iso(g, h)
        assert f is not None and is_isomorphism(f, g, h)

    @given(nested())
    def test_round_trip_from_polytrees(self, x):
        g = to_polytree("x", x)
        for v in g.vertices:
            back = to_polytree(v, to_nested(v, g))
            assert iso(back, g) is not None

    @given(nested())
    def test_address_maps_agree(self, x):
        g, amap = to_polytree_addressed("x", x)
        y, lmap = to_nested_addressed("x", g)
        assert y == x
        for a, v in amap.items():
            assert x.node(a).formulas == y.node(lmap[v]).formulas

    @given(nested(), nested())
    def test_context_correspondence(self, x, y):
        if x.is_empty or y.is_empty:
            return
        g = to_polytree("x", x, LabelGen(prefix="a"))
        h = to_polytree("x", y, LabelGen(prefix="b"))
        assert iso(merge(g, h, "x"), to_polytree("x", x.union(y))) is not None


class TestMerge:
    def test_labels_union(self):
        g = LabeledPolytree(["x"], [], {"x": [PosLiteral("p")]})
        h = LabeledPolytree(["x"], [], {"x": [PosLiteral("q")]})
        assert [str(f) for f in merge(g, h, "x").labels["x"]] == ["p", "q"]

    def test_chain(self):
        m = merge(LabeledPolytree("xu", [("x", "u")]), LabeledPolytree("vx", [("v", "x")]), "x")
        assert set(m.edges) == {("x", "u"), ("v", "x")} and m.is_polytree()

    def test_shared_vertex_required(self):
        with pytest.raises(PolytreeError):
            merge(LabeledPolytree("xu", [("x", "u")]), LabeledPolytree("xu", [("u", "x")]), "x")

    @given(nested())
    def test_decomposition_exists(self, x):
        g = to_polytree("x", x)
        if len(g.vertices) < 2:
            return
        v, w = g.vertices[0], g.neighbors(g.vertices[0])[0][0]
        side = set(g.side(v, w))
        rest = [u for u in g.vertices if u not in side]
        h1 = LabeledPolytree(rest, [e for e in g.edges if e[0] in rest and e[1] in rest], g.labels)
        h2 = LabeledPolytree(
            [v, *side], [e for e in g.edges if {e[0], e[1]} <= side | {v} and not {e[0], e[1]} <= set(rest)],
            {u: g.labels[u] for u in side},
        )
        assert merge(h1, h2, v) == g or iso(merge(h1, h2, v), g) is not None


class TestLabeledSequents:
    def test_sequent_of_graph(self):
        g = LabeledPolytree("xyz", [("x", "y"), ("z", "x")], {"x": [A], "y": [B], "z": [C]})
        assert labeled_sequent_of(g) == parse_labeled("R(x,y), R(z,x), x:A, y:B, z:C")
        assert labeled_sequent_of(LabeledPolytree()) == parse_labeled("")
        two = labeled_sequent_of(LabeledPolytree(["x"], [], {"x": [PosLiteral("p")] * 2}))
        assert len(two.lformulas) == 2

    def test_graph_of_sequent(self):
        g = graph_of(parse_labeled("R(x,y), R(y,z), R(u,x), x:A, z:B, z:C, u:D"))
        assert set(g.vertices) == {"x", "y", "z", "u"}
        assert set(g.edges) == {("x", "y"), ("y", "z"), ("u", "x")}
        assert g.labels["y"] == () and g.labels["z"] == (B, C)
        assert graph_of(parse_labeled("")).vertices == ()
        assert graph_of(parse_labeled("x:p")).vertices == ("x",)

    def test_polytree_sequents(self):
        assert is_polytree_sequent(parse_labeled("R(x,y), R(z,x), x:A"))
        assert not is_polytree_sequent(parse_labeled("R(x,u), R(z,u), R(y,x), R(y,z)"))
        assert not is_polytree_sequent(parse_labeled("x:p, y:q"))
        assert not is_polytree_sequent(parse_labeled("R(x,x)"))


class TestDisplayDerivation:
    def test_same_vertex_is_empty(self):
        d = display_derivation(N("A, o{B}"), "x", "x")
        assert d.rule == "open" and d.size() == 1

    def test_one_step(self):
        d = display_derivation(N("A, o{B}"), "x", "_v0")
        assert d.rule == "rp" and d.premises[0].conclusion == N("B, b{A}")

    def test_unknown_vertex(self):
        with pytest.raises(PolytreeError):
            display_derivation(N("A"), "x", "nope")

    @given(nested())
    def test_checked_and_short(self, x):
        g = to_polytree("x", x)
        calc = skt(allow_open=True)
        for v in g.vertices:
            d = display_derivation(g, "x", v)
            assert check(d, calc).accepted
            assert d.height() - 1 <= g.distance("x", v)


def test_embedding_respects_labels_and_directions():
    small = to_polytree("x", N("A, o{B}"))
    big = to_polytree("x", N("A, C, o{B, b{D}}, b{D}"))
    m = embed(small, big)
    assert m is not None and m["x"] == "x"
    assert embed(to_polytree("x", N("A, b{B}")), big) is None


def test_display_moves_keep_polytrees_isomorphic():
    rng = random.Random(5)
    for _ in range(50):
        x = random_nested(rng)
        y, _ = random_display_moves(rng, x, 10)
        assert iso(to_polytree("x", x), to_polytree("x", y)) is not None
