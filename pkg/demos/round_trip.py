"""Send prover output around all three calculi and back.

deep -> shallow -> labeled -> (eliminate structural rules) -> deep -> shallow.
Every stage is re-checked by the kernel.
"""

from __future__ import annotations

import sys

from tenseproof import (
    check,
    deep_to_shallow,
    dkt,
    eliminate_structural,
    labeled_to_deep,
    lkt_pr,
    lkt_st,
    parse_axiom,
    parse_formula,
    prove_deep,
    shallow_to_labeled,
    skt,
)


def stage(name: str, p, calc) -> None:
    report = check(p, calc)
    print(f"{name:<12} {p.size():>4} rules  height {p.height():>3}  {'ok' if report.accepted else 'REJECTED'}")
    if not report.accepted:
        sys.exit("\n".join(report.lines()))


def main() -> None:
    axioms = [parse_axiom("<><#><> -> <>"), parse_axiom("<><> -> <#>")]
    goal = parse_formula("[#](<><><><>p -> <>p)")
    print(f"goal: {goal}\naxioms: {'; '.join(map(str, axioms))}\n")

    deep = prove_deep(goal, axioms)
    assert deep is not None
    stage("deep", deep, dkt(axioms))
    shallow = deep_to_shallow(deep, skt(axioms))
    stage("shallow", shallow, skt(axioms))
    labeled = shallow_to_labeled(shallow, skt(axioms))
    stage("labeled", labeled, lkt_st(axioms))
    propagating = eliminate_structural(labeled, lkt_st(axioms))
    stage("propagating", propagating, lkt_pr(axioms))
    deep2 = labeled_to_deep(propagating)
    stage("deep again", deep2, dkt(axioms))
    shallow2 = deep_to_shallow(deep2, skt(axioms))
    stage("shallow again", shallow2, skt(axioms))
    print(f"\nsame end sequent: {shallow2.conclusion == shallow.conclusion}")


if __name__ == "__main__":
    main()
