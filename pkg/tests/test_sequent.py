from __future__ import annotations

import pytest
from hypothesis import given

from oracles import substructures_oracle
from strategies import formulas, labeled, nested
from tenseproof.formula import BlackBox, Box, Diamond, Or, PosLiteral, Top
from tenseproof.sequent import (
    Context,
    ContextError,
    LabelGen,
    LabeledSequent,
    NestedSequent,
    SequentSyntaxError,
    context_of,
    interpret,
    match_context,
    nested_equal,
    parse_labeled,
    parse_nested,
    plug,
    residuate,
    show_labeled,
    show_nested,
    substructures,
)

N = parse_nested
A, B = PosLiteral("A"), PosLiteral("B")


class TestEquality:
    def test_commutativity(self):
        assert nested_equal(N("A, o{B}, C"), N("C, A, o{B}"))

    def test_empty_is_a_unit(self):
        assert nested_equal(N("A, emp"), N("A"))
        assert nested_equal(N("o{emp}"), N("o{}"))

    def test_polarity_matters(self):
        assert not nested_equal(N("o{A}"), N("b{A}"))

    def test_multiplicity_matters(self):
        assert not nested_equal(N("A, A"), N("A"))

    @given(nested())
    def test_reordering_children_keeps_equality(self, x):
        flipped = NestedSequent(tuple(reversed(x.formulas)), tuple(reversed(x.children)))
        assert flipped == x and hash(flipped) == hash(x)


class TestText:
    @given(nested())
    def test_nested_round_trip(self, x):
        assert parse_nested(show_nested(x)) == x

    @given(labeled)
    def test_labeled_round_trip(self, s):
        assert parse_labeled(show_labeled(s)) == s

    def test_relational_atoms_are_a_set(self):
        s = parse_labeled("R(x,y), R(x,y), x:p, x:p")
        assert s.rel == (("x", "y"),)
        assert len(s.lformulas) == 2

    @pytest.mark.parametrize("text", ["A, o{B", "A,, B", "o{A}}", "q{A}"])
    def test_nested_errors(self, text):
        with pytest.raises(SequentSyntaxError):
            parse_nested(text)

    def test_unclosed_brace_position(self):
        with pytest.raises(SequentSyntaxError) as e:
            parse_nested("A, o{B")
        assert e.value.position == 6 and "'}'" in str(e.value)

    @pytest.mark.parametrize("text", ["R(x,), x:p", "x:", "R(x,y) x:p"])
    def test_labeled_errors(self, text):
        with pytest.raises(SequentSyntaxError):
            parse_labeled(text)


class TestSubstructures:
    def test_empty(self):
        assert substructures(N("emp")) == set()

    def test_formula(self):
        assert substructures(N("A")) == {N("A")}

    def test_white_nesting(self):
        assert substructures(N("o{A, B}")) == {N("o{A, B}"), N("A"), N("B"), N("A, B")}

    @given(nested(max_depth=2, max_formulas=2, max_children=2))
    def test_matches_recursive_oracle(self, x):
        assert {s.key() for s in substructures(x)} == substructures_oracle(x)


class TestContexts:
    def test_plug_into_nesting(self):
        c = Context(children=((Diamond.WHITE, Context(holes=(1,))),))
        assert plug(c, {1: N("p, ~q")}) == N("o{p, ~q}")

    def test_identity_fill(self):
        assert plug(Context((A,), holes=(1,)), {1: N("emp")}) == N("A")

    def test_two_holes(self):
        c = Context(holes=(1,), children=((Diamond.BLACK, Context(holes=(2,))),))
        assert plug(c, {1: N("p"), 2: N("q")}) == N("p, b{q}")

    def test_arity_error(self):
        with pytest.raises(ContextError):
            plug(Context(holes=(1,)), {2: N("p")})

    def test_match_examples(self):
        pat = Context(children=((Diamond.WHITE, Context(holes=(1,))),))
        assert match_context(pat, N("o{p, q}")) == [{1: N("p, q")}]
        assert match_context(pat, N("b{p}")) == []
        x = N("A, o{B, b{C}}")
        assert match_context(Context(holes=(1,)), x) == [{1: x}]

    @given(nested(), nested())
    def test_plug_then_match_recovers_a_filler(self, x, y):
        addrs = list(x.addresses())
        c = context_of(x, {addrs[-1]: 1})
        target = plug(c, {1: y})
        found = match_context(c, target)
        assert found and all(plug(c, f) == target for f in found)
        assert any(f[1] == y for f in found)


class TestResiduation:
    @given(nested())
    def test_address_map_tracks_nodes(self, x):
        for i in range(len(x.children)):
            y, moved = residuate(x, i)
            assert sorted(moved.values()) == sorted(y.addresses())
            for a, b in moved.items():
                assert sorted(map(str, x.node(a).formulas)) == sorted(map(str, y.node(b).formulas))

    @given(nested())
    def test_residuating_back_restores(self, x):
        for i in range(len(x.children)):
            y, _ = residuate(x, i)
            z, _ = residuate(y, len(y.children) - 1)
            assert z == x


class TestInterpretation:
    def test_examples(self):
        assert interpret(N("emp")) == Top()
        assert interpret(N("o{A}")) == Box(A)
        assert interpret(N("A, b{B}")) == Or(A, BlackBox(B))

    @given(formulas, formulas)
    def test_comma_is_disjunction(self, a, b):
        assert interpret(NestedSequent([a, b])) == Or(a, b)


def test_label_generator_is_deterministic():
    g = LabelGen.letters(["x"])
    assert [g.fresh() for _ in range(3)] == ["z", "y", "w"]
    h = LabelGen(avoid={"_v0"})
    assert h.fresh() == "_v1"


def test_labeled_queries():
    s = parse_labeled("R(x,y), x:p, y:q, x:r")
    assert s.labels() == {"x", "y"}
    assert [str(f) for f in s.formulas_at("x")] == ["p", "r"]
    assert LabeledSequent() == parse_labeled("")
