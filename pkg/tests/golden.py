"""Hand-written proofs shared by the tests."""

from __future__ import annotations

from tenseproof.axioms import parse_axiom
from tenseproof.proof import Proof
from tenseproof.sequent import parse_labeled, parse_nested

CONFLUENCE = [parse_axiom("<#><> -> <><#>")]
GOAL_TEXT = "[#][]~p | <><#>p"


def _chain(parse, steps: list[tuple[str, str, dict]]) -> Proof:
    """Build a one-branch proof from (sequent, rule, params), leaf first."""
    node = None
    for text, rule, params in steps:
        node = Proof(parse(text), rule, params, () if node is None else (node,))
    assert node is not None
    return node


def confluence_shallow() -> Proof:
    return _chain(parse_nested, [
        ("p, ~p, o{<#>p, b{<><#>p}}", "id", {}),
        ("<#>p, b{p, ~p}, b{<><#>p}", "rf", {}),
        ("<#>p, b{~p}, b{<><#>p}", "bdia", {}),
        ("o{<#>p, b{~p}}, <><#>p", "rp", {}),
        ("o{b{~p}}, <><#>p", "wdia", {}),
        ("b{o{~p}}, <><#>p", "gp", {}),
        ("o{~p}, o{<><#>p}", "rp", {}),
        ("[]~p, o{<><#>p}", "wbox", {}),
        ("b{[]~p}, <><#>p", "rf", {}),
        ("[#][]~p, <><#>p", "bbox", {}),
        (GOAL_TEXT, "or", {}),
    ])


def confluence_labeled(box_eigen: str = "z") -> Proof:
    """The labeled proof; ``box_eigen`` renames the eigenvariable of the
    box step in its premise and everything above it."""
    z = box_eigen
    return _chain(parse_labeled, [
        (f"R(x,u), R({z},u), R(y,x), R(y,{z}), {z}:~p, x:<><#>p, u:<#>p, {z}:p", "id", {}),
        (f"R(x,u), R({z},u), R(y,x), R(y,{z}), {z}:~p, x:<><#>p, u:<#>p", "l_bdia", {}),
        (f"R(x,u), R({z},u), R(y,x), R(y,{z}), {z}:~p, x:<><#>p", "l_dia", {}),
        (f"R(y,x), R(y,{z}), {z}:~p, x:<><#>p", "l_gp", {}),
        ("R(y,x), y:[]~p, x:<><#>p", "l_box", {}),
        ("x:[#][]~p, x:<><#>p", "l_bbox", {}),
        (f"x:{GOAL_TEXT}", "l_or", {}),
    ])


def transitive_inverse_proof() -> Proof:
    """A deep proof of <#><#>p -> <#>p whose propagation step needs transitivity.

    Deep box rules keep their principal formula.
    """
    top = "[#][#]~p, <#>p, b{[#]~p, b{~p%s}}"
    leaf = Proof(parse_nested(top % ", p"), "id", {"node": [0, 0]})
    witness = [[], "<#>", [0], "<#>", [0, 0]]
    dp = Proof(parse_nested(top % ""), "dp", {"node": [], "formula": "<#>p", "witness": witness}, (leaf,))
    box2 = Proof(parse_nested("[#][#]~p, <#>p, b{[#]~p}"), "bbox", {"node": [0], "formula": "[#]~p"}, (dp,))
    box1 = Proof(parse_nested("[#][#]~p, <#>p"), "bbox", {"node": [], "formula": "[#][#]~p"}, (box2,))
    return Proof(parse_nested("[#][#]~p | <#>p"), "or", {"formula": "[#][#]~p | <#>p"}, (box1,))
