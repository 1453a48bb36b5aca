"""Why propagation needs inverses and compositions of the axioms.

Over transitivity <><> -> <>, the past formula <#><#>p -> <#>p is provable
only because the inverse <#><#> -> <#> is in the completion.  Over
<><#><> -> <> and <><> -> <#>, the word <><><><> reaches <> by composing
<><> -> <#> with its own inverse <#><#> -> <>, as the parse tree shows.
"""

from __future__ import annotations

from tenseproof.axioms import PathGrammar, completion_member, parse_axiom, parse_tree, parse_word
from tenseproof.formula import implies, parse_formula
from tenseproof.proof import check, dkt
from tenseproof.prover import Budget, prove_deep

CASES = [
    ("<#><#>p", "<#>p", ["<><> -> <>"]),
    ("<><><><>p", "<>p", ["<><#><> -> <>", "<><> -> <#>"]),
]


def print_tree(node, depth: int = 0) -> None:
    what = "identity" if node.is_identity else str(node.axiom)
    print(f"    {'  ' * depth}{node.symbol.value}  {what}{'  (inverted)' if node.inverted else ''}")
    for c in node.children:
        print_tree(c, depth + 1)


def main() -> None:
    for left, right, texts in CASES:
        axioms = [parse_axiom(t) for t in texts]
        grammar = PathGrammar(axioms)
        word, target = parse_word(left[:-1]), parse_word(right[:-1])[0]
        print(f"axioms: {'; '.join(texts)}")
        print(f"  {left[:-1]} -> {right[:-1]} in completion: {completion_member(grammar, word, target)}")
        print_tree(parse_tree(grammar, word, target))

        goal = implies(parse_formula(left), parse_formula(right))
        proof = prove_deep(goal, axioms, Budget(depth=12))
        assert proof is not None
        print(f"  proof of {goal}: {proof.spine()}")
        for _, node in proof.walk():
            if node.rule == "dp":
                print(f"  propagation witness: {node.params['witness']}")
        print(f"  {check(proof, dkt(axioms)).lines()[0]}")
        bare = prove_deep(goal, (), Budget(depth=12))
        print(f"  without axioms: {'found' if bare else 'no proof'}\n")


if __name__ == "__main__":
    main()
