from __future__ import annotations

import pytest

from golden import CONFLUENCE, confluence_labeled, confluence_shallow, transitive_inverse_proof
from tenseproof.axioms import AxiomError, AxiomScopeError, parse_axiom
from tenseproof.formula import parse_formula
from tenseproof.proof import (
    Calculus,
    Proof,
    RuleError,
    apply_rule,
    check,
    dkt,
    lkt_pr,
    lkt_st,
    skt,
    substitute,
)
from tenseproof.sequent import parse_labeled, parse_nested

N, L = parse_nested, parse_labeled
TRANS = [parse_axiom("<><> -> <>")]


def kinds(p: Proof, c: Calculus) -> list[tuple[str, str]]:
    return [(d.rule, d.kind) for d in check(p, c).diagnostics]


class TestGolden:
    def test_shallow_accepted(self):
        r = check(confluence_shallow(), skt(CONFLUENCE))
        assert r.accepted and r.nodes == 11

    def test_labeled_accepted(self):
        assert check(confluence_labeled(), lkt_st(CONFLUENCE)).accepted

    def test_undeclared_axiom(self):
        assert kinds(confluence_shallow(), skt()) == [("gp", "axiom")]
        assert ("l_gp", "axiom") in kinds(confluence_labeled(), lkt_st())

    def test_eigenvariable_clash(self):
        bad = confluence_labeled(box_eigen="x")
        assert ("l_box", "eigenvariable") in kinds(bad, lkt_st(CONFLUENCE))

    def test_structural_eigenvariables(self):
        p = confluence_labeled()
        leaf_side = p.premises[0].premises[0].premises[0]
        assert leaf_side.rule == "l_gp"
        renamed = Proof(leaf_side.conclusion, "l_gp", {}, (leaf_side.premises[0].map_sequents(lambda s: s.rename({"u": "y"})),))
        assert ("l_gp", "eigenvariable") in kinds(renamed, lkt_st(CONFLUENCE))


class TestDiagnostics:
    def test_unknown_rule(self):
        p = Proof(N("p, ~p"), "dp", {})
        assert kinds(p, skt()) == [("dp", "unknown-rule")]

    def test_arity(self):
        leaf = Proof(N("p, ~p"), "id")
        p = Proof(N("p & q, ~p, ~q"), "and", {}, (leaf,))
        assert kinds(p, skt()) == [("and", "arity")]

    def test_shape(self):
        leaf = Proof(N("p, ~p"), "id")
        p = Proof(N("p | q, ~p"), "or", {}, (leaf,))
        assert kinds(p, skt()) == [("or", "shape")]

    def test_leaf_without_dual_pair(self):
        assert kinds(Proof(N("p, q"), "id"), skt()) == [("id", "shape")]

    def test_report_fields(self):
        leaf = Proof(N("p, q"), "id")
        p = Proof(N("p | q"), "or", {}, (leaf,))
        d = check(p, skt()).to_dict()
        assert list(d) == ["calculus", "accepted", "nodes", "rule_counts", "diagnostics"]
        assert d["diagnostics"] == [{"node": "root.0", "rule": "id", "kind": "shape", "message": d["diagnostics"][0]["message"]}]
        assert check(p, skt()).lines()[0].startswith("REJECTED")

    def test_open_leaves_need_permission(self):
        p = Proof(N("p"), "open")
        assert not check(p, skt()).accepted
        assert check(p, skt(allow_open=True)).accepted

    def test_modal_fragment_drops_past_rules(self):
        assert ("bbox", "unknown-rule") in kinds(confluence_shallow(), skt(modal_only=True))
        with pytest.raises(AxiomError):
            skt(CONFLUENCE, modal_only=True)


class TestCalculi:
    def test_path_only_families(self):
        with pytest.raises(AxiomError):
            dkt(CONFLUENCE)
        with pytest.raises(AxiomError):
            lkt_pr(CONFLUENCE)
        assert str(dkt(TRANS)) == "dkt [<><> -> <>]"

    def test_scope(self):
        with pytest.raises(AxiomScopeError):
            skt([parse_axiom("<> -> e")])

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            Calculus("kt")


class TestDeep:
    def inverse_proof(self) -> Proof:
        return transitive_inverse_proof()

    def test_propagation_accepted(self):
        assert check(self.inverse_proof(), dkt(TRANS)).accepted

    def test_witness_must_be_a_member(self):
        assert ("dp", "witness") in kinds(self.inverse_proof(), dkt())

    def test_witness_must_be_a_path(self):
        p = self.inverse_proof()
        dp = p.premises[0].premises[0].premises[0]
        dp.params["witness"] = [[], "<>", [0], "<#>", [0, 0]]
        assert ("dp", "witness") in kinds(p, dkt(TRANS))

    def test_weakening_and_contraction(self):
        leaf = Proof(N("p, ~p"), "id")
        w = Proof(N("p, ~p, o{q}"), "w", {}, (leaf,))
        assert check(w, dkt()).accepted
        c = Proof(N("p, ~p"), "c", {"node": []}, (Proof(N("p, p, ~p"), "id"),))
        assert check(c, dkt()).accepted
        bad = Proof(N("p, ~p"), "w", {}, (Proof(N("p, ~p, q"), "id"),))
        assert not check(bad, dkt()).accepted


class TestLabeled:
    def test_weakening_contraction_substitution(self):
        leaf = Proof(L("x:p, x:~p"), "id")
        assert check(Proof(L("R(x,y), x:p, x:~p"), "l_w", {}, (leaf,)), lkt_st()).accepted
        assert check(Proof(L("x:p, x:~p"), "l_c", {}, (Proof(L("x:p, x:p, x:~p"), "id"),)), lkt_st()).accepted
        s = Proof(L("R(x,x), x:p, x:~p"), "l_s", {}, (Proof(L("R(x,y), y:p, x:~p, x:p"), "id"),))
        assert not check(s, lkt_st()).accepted
        s2 = Proof(L("R(x,x), x:p, x:~p"), "l_s", {}, (Proof(L("R(x,y), x:p, y:~p, y:p, x:~p"), "id"),))
        assert not check(s2, lkt_st()).accepted
        s3 = Proof(L("R(x,x), x:p, x:~p"), "l_s", {}, (Proof(L("R(x,y), x:p, y:~p"), "open"),))
        assert check(s3, lkt_st(allow_open=True)).accepted

    def test_prop_with_witness(self):
        leaf = Proof(L("R(x,y), R(y,z), x:<>p, z:p, z:~p"), "id")
        p = Proof(L("R(x,y), R(y,z), x:<>p, z:~p"), "l_prop", {"label": "x", "formula": "<>p", "witness": ["x", "<>", "y", "<>", "z"]}, (leaf,))
        assert check(p, lkt_pr(TRANS)).accepted
        assert ("l_prop", "witness") in kinds(p, lkt_pr())

    def test_non_polytree_sequent_flagged(self):
        ok = Proof(L("R(x,y), x:p, x:~p"), "l_w", {}, (Proof(L("x:p, x:~p"), "id"),))
        assert check(ok, lkt_pr()).accepted
        # weakening can only remove atoms, and the premise is not a polytree
        bad = Proof(L("R(x,y), x:p, x:~p"), "l_w", {}, (Proof(L("R(x,y), R(y,x), x:p, x:~p"), "id"),))
        assert kinds(bad, lkt_pr()) == [("l_w", "shape"), ("id", "polytree")]

    def test_substitution_absent_from_propagation_calculus(self):
        s = Proof(L("R(x,x), x:p, x:~p"), "l_s", {}, (Proof(L("R(x,y), x:p, y:~p"), "open"),))
        assert kinds(s, lkt_pr(allow_open=True)) == [("l_s", "unknown-rule")]


class TestApplyRule:
    def test_or(self):
        assert apply_rule(N("q, p | ~q"), "or", {"formula": "p | ~q"}) == [N("q, p, ~q")]

    def test_display(self):
        assert apply_rule(N("A, o{B}"), "rp", {"child": 0}) == [N("B, b{A}")]
        assert apply_rule(N("A, b{B}"), "rf", {"child": 0}) == [N("B, o{A}")]

    def test_propagation(self):
        s = N("<#>p, b{b{~p}}")
        out = apply_rule(s, "dp", {"node": [], "formula": "<#>p", "witness": [[], "<#>", [0], "<#>", [0, 0]]})
        assert out == [N("<#>p, b{b{~p, p}}")]

    def test_not_applicable(self):
        with pytest.raises(RuleError):
            apply_rule(N("p"), "or", {"formula": "p | q"})
        with pytest.raises(RuleError):
            apply_rule(L("x:[]p"), "l_box", {"label": "x", "formula": "[]p", "eigen": "x"})

    def test_labeled_box(self):
        out = apply_rule(L("x:[#]p"), "l_bbox", {"label": "x", "formula": "[#]p", "eigen": "y"})
        assert out == [L("R(y,x), y:p")]

    def test_built_proofs_check(self):
        goal = parse_formula("[](p & q) -> []p")
        s0 = N(str(goal))
        (s1,) = apply_rule(s0, "or", {"formula": str(goal)})
        (s2,) = apply_rule(s1, "wbox", {"formula": "[]p", "shallow": True})
        assert s2 == N("<>(~p | ~q), o{p}")
        (s3,) = apply_rule(s2, "wdia", {"formula": "<>(~p | ~q)", "child": 0})
        (s4,) = apply_rule(s3, "rp", {"child": 0})
        (s5,) = apply_rule(s4, "or", {"formula": "~p | ~q"})
        proof = Proof(s0, "or", {}, (Proof(s1, "wbox", {}, (Proof(s2, "wdia", {}, (Proof(s3, "rp", {}, (Proof(s4, "or", {}, (Proof(s5, "id"),)),)),)),)),))
        assert check(proof, skt()).accepted


class TestSubstitution:
    def test_examples(self):
        assert substitute(L("R(x,y), R(x,z), y:p"), "x", "y") == L("R(x,x), R(x,z), x:p")
        s = L("R(x,y), x:p")
        assert substitute(s, "x", "q") == s
        merged = substitute(L("R(x,y), R(x,w)"), "y", "w")
        assert merged.rel == (("x", "y"),)
