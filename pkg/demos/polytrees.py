"""Nested sequents as labeled polytrees.

Display-equivalent nested sequents give isomorphic polytrees, and any
vertex of the polytree can be read back as the root of a nested sequent.
"""

from __future__ import annotations

from tenseproof.polytree import display_derivation, iso, labeled_sequent_of, to_nested, to_polytree
from tenseproof.propagation import pg_of_nested
from tenseproof.sequent import LabelGen, parse_nested, residuate


def main() -> None:
    x = parse_nested("A, o{B, b{C}}, b{D}")
    g = to_polytree("x", x, LabelGen.letters(["x"]))
    print(f"nested:  {x}")
    print(f"labeled: {labeled_sequent_of(g)}")
    for v in g.vertices:
        print(f"  read from {v}: {to_nested(v, g)}")

    y, moved = residuate(x, 0)
    print(f"\none display step gives {y}")
    print(f"polytrees isomorphic: {iso(to_polytree('x', x), to_polytree('x', y)) is not None}")
    gx, gy = pg_of_nested(x), pg_of_nested(y)
    same = {(moved[a], moved[b], d) for a, b, d in gx.edges} == set(gy.edges)
    print(f"propagation graphs equal under the address map: {same}")

    print("\ndisplay derivation bringing y to the root:")
    node = display_derivation(g, "x", "y")
    while True:
        print(f"  {node.rule:<5} {node.conclusion}")
        if not node.premises:
            break
        node = node.premises[0]


if __name__ == "__main__":
    main()
