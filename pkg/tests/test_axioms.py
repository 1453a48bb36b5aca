from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_words, bounded_completion
from strategies import path_axioms, words
from tenseproof.axioms import (
    AxiomScopeError,
    AxiomSyntaxError,
    NotComposableError,
    PathAxiom,
    PathGrammar,
    check_scope,
    compose,
    completion_member,
    inverse,
    parse_axiom,
    parse_axiom_file,
    parse_tree,
    parse_word,
    relational_chain,
    rule_schemas,
)
from tenseproof.formula import Diamond
from tenseproof.generate import random_path_axioms

W, B = Diamond.WHITE, Diamond.BLACK


def P(text: str) -> PathAxiom:
    return parse_axiom(text).as_path()


class TestText:
    def test_words(self):
        assert parse_word("<><#>") == (W, B)
        assert parse_word("e") == ()

    def test_axiom_round_trip(self):
        for text in ["<><> -> <>", "<#><> -> <><#>", "e -> <>", "<> -> e"]:
            assert str(parse_axiom(text)) == text

    def test_file_with_comments(self):
        text = "# transitivity\n<><> -> <>\n\n<#> -> <>  # symmetry\n"
        assert [str(a) for a in parse_axiom_file(text)] == ["<><> -> <>", "<#> -> <>"]

    def test_file_error_has_line(self):
        with pytest.raises(AxiomSyntaxError) as e:
            parse_axiom_file("<><> -> <>\n<>< -> <>\n")
        assert e.value.line == 2

    @pytest.mark.parametrize("text", ["<><>", "<> -> <> -> <>", "<x> -> <>", " -> <>"])
    def test_bad_axioms(self, text):
        with pytest.raises(AxiomSyntaxError):
            parse_axiom(text)


class TestInverseAndComposition:
    def test_inverse_examples(self):
        assert inverse(P("<><> -> <>")) == P("<#><#> -> <#>")
        assert inverse(P("e -> <>")) == P("e -> <#>")
        assert inverse(P("<><#><#> -> <>")) == P("<><><#> -> <#>")

    @given(path_axioms)
    def test_inverse_is_an_involution(self, f):
        assert inverse(inverse(f)) == f

    def test_compose_examples(self):
        assert compose(P("<><> -> <#>"), P("<#><> -> <>"), 1) == P("<><><> -> <>")
        assert compose(P("<> -> <>"), P("<><> -> <#>"), 1) == P("<><> -> <#>")
        assert compose(P("<#><><> -> <#>"), P("<><#> -> <>"), 2) == P("<><#><><> -> <>")

    def test_not_composable(self):
        with pytest.raises(NotComposableError):
            compose(P("<> -> <>"), P("<#> -> <>"), 1)
        with pytest.raises(NotComposableError):
            compose(P("<> -> <>"), P("<> -> <>"), 2)


class TestScope:
    def test_equality_row_rejected(self):
        with pytest.raises(AxiomScopeError):
            check_scope(parse_axiom("<> -> e"))
        with pytest.raises(AxiomScopeError):
            rule_schemas(parse_axiom("<><#> -> e"))

    def test_supported_rows(self):
        for text in ["<><> -> <>", "e -> <>", "e -> e", "<#><> -> <><#>"]:
            check_scope(parse_axiom(text))


class TestSchemas:
    def test_confluence_nested_rule(self):
        s = rule_schemas(parse_axiom("<#><> -> <><#>"))
        assert s.nested_premise == "X, o{b{Y}}" and s.nested_conclusion == "X, b{o{Y}}"
        assert s.eigenvariables == 1

    def test_transitivity_labeled_rule(self):
        s = rule_schemas(parse_axiom("<><> -> <>"))
        assert s.labeled_conclusion == "R, Rxy1, Ry1y, G"
        assert s.labeled_premise == "R, Rxy1, Ry1y, Rxy, G"

    def test_reflexivity(self):
        s = rule_schemas(parse_axiom("e -> <>"))
        assert s.labeled_premise == "R, Rxx, G"

    def test_relational_chain(self):
        assert relational_chain((W, B), "x", "y", ["u"]) == [("x", "u"), ("y", "u")]
        assert relational_chain((), "x", "x", []) == []


class TestGrammar:
    def test_transitivity_productions(self):
        g = PathGrammar([P("<><> -> <>")])
        heads = sorted((str(p.head), p.body) for p in g.productions if not p.terminal)
        assert len(heads) == 2
        assert completion_member(g, (B, B), B)

    def test_empty_set(self):
        g = PathGrammar()
        assert [w for w in all_words(4) if completion_member(g, w, W)] == [(W,)]

    def test_reflexivity_is_nullable(self):
        assert W in PathGrammar([P("e -> <>")]).nullable
        assert not PathGrammar([P("<><> -> <>")]).nullable

    def test_golden_memberships(self):
        comp = PathGrammar([P("<><#><> -> <>"), P("<><> -> <#>")])
        assert completion_member(comp, (W, W, W, W), W)
        trans = PathGrammar([P("<><> -> <>")])
        assert completion_member(trans, (B, B), B)
        assert not completion_member(trans, (B, W), W)

    def test_parse_tree_examples(self):
        g = PathGrammar([P("<><> -> <>")])
        t = parse_tree(g, (W, W, W), W)
        assert t is not None and t.frontier() == (W, W, W)
        internal = []
        stack = [t]
        while stack:
            n = stack.pop()
            if not n.is_identity:
                internal.append(n.production())
            stack += n.children
        assert internal == [P("<><> -> <>")] * 2
        leaf = parse_tree(PathGrammar(), (W,), W)
        assert leaf is not None and leaf.is_identity
        assert parse_tree(g, (W, B), W) is None

    @given(st.lists(path_axioms, max_size=3), words(5), st.sampled_from([W, B]))
    def test_parse_trees_use_declared_productions(self, axs, w, d):
        g = PathGrammar(axs)
        t = parse_tree(g, w, d)
        assert (t is not None) == completion_member(g, w, d)
        if t is None:
            return
        assert t.frontier() == w
        allowed = set(axs) | {inverse(a) for a in axs}
        stack = [t]
        while stack:
            n = stack.pop()
            if not n.is_identity:
                assert n.production() in allowed
                assert n.production().consequent is n.symbol
            stack += n.children

    @given(st.lists(path_axioms, max_size=3))
    def test_inverses_do_not_change_the_language(self, axs):
        g1 = PathGrammar(axs)
        g2 = PathGrammar(list(axs) + [inverse(a) for a in axs])
        for w in all_words(4):
            for d in (W, B):
                assert completion_member(g1, w, d) == completion_member(g2, w, d)


def test_membership_agrees_with_bounded_completion():
    rng = random.Random(11)
    for _ in range(25):
        axs = random_path_axioms(rng, 3, 3)
        g = PathGrammar(axs)
        oracle = bounded_completion(axs)
        for w in all_words(6):
            for d in (W, B):
                assert completion_member(g, w, d) == ((w, d) in oracle), (axs, w, d)
