"""Check a shallow proof of <#><>p -> <><#>p and read it as a labeled proof.

The proof in data/ex8.prf uses the structural rule of the confluence axiom
<#><> -> <><#>.  Display steps (rf, rp) only move the root around, so they
disappear in the labeled version.
"""

from __future__ import annotations

from pathlib import Path

from tenseproof import check, lkt_st, parse_axiom_file, proof_from_text, shallow_to_labeled, skt

DATA = Path(__file__).parent / "data"


def show(p, indent: int = 0) -> None:
    print(f"{'  ' * indent}{p.rule:<7} {p.conclusion}")
    for q in p.premises:
        show(q, indent + 1)


def main() -> None:
    axioms = parse_axiom_file((DATA / "conf.gp").read_text())
    shallow = proof_from_text((DATA / "ex8.prf").read_text(), labeled=False)

    print("shallow proof:")
    show(shallow)
    print(check(shallow, skt(axioms)).lines()[0])
    print("without the axiom:", check(shallow, skt()).lines()[1].strip())

    labeled = shallow_to_labeled(shallow, skt(axioms))
    print("\nlabeled proof:")
    show(labeled)
    print(check(labeled, lkt_st(axioms)).lines()[0])
    print(f"{shallow.size()} shallow rules became {labeled.size()} labeled rules")


if __name__ == "__main__":
    main()
