"""Hypothesis strategies for formulas, sequents and axioms."""

from __future__ import annotations

from hypothesis import strategies as st

from tenseproof.axioms import PathAxiom
from tenseproof.formula import And, BlackBox, BlackDia, Box, Dia, Diamond, NegLiteral, Or, PosLiteral
from tenseproof.sequent import LabeledSequent, NestedSequent

names = st.sampled_from(["p", "q", "r", "s1"])
literals = st.one_of(names.map(PosLiteral), names.map(NegLiteral))


def _extend(children):
    unary = st.sampled_from([Box, Dia, BlackBox, BlackDia])
    binary = st.sampled_from([And, Or])
    return st.one_of(
        st.builds(lambda f, a: f(a), unary, children),
        st.builds(lambda f, a, b: f(a, b), binary, children, children),
    )


formulas = st.recursive(literals, _extend, max_leaves=6)
diamonds = st.sampled_from([Diamond.WHITE, Diamond.BLACK])


def words(max_len: int = 3, min_len: int = 0):
    return st.lists(diamonds, min_size=min_len, max_size=max_len).map(tuple)


path_axioms = st.builds(PathAxiom, words(3), diamonds)


def nested(max_depth: int = 3, max_formulas: int = 2, max_children: int = 2):
    leaf = st.lists(formulas, max_size=max_formulas).map(lambda fs: NestedSequent(fs))
    return st.recursive(
        leaf,
        lambda inner: st.builds(
            lambda fs, kids: NestedSequent(fs, kids),
            st.lists(formulas, max_size=max_formulas),
            st.lists(st.tuples(diamonds, inner), max_size=max_children),
        ),
        max_leaves=6,
    )


labels = st.sampled_from(["x", "y", "z", "u"])
labeled = st.builds(
    LabeledSequent,
    st.lists(st.tuples(labels, labels), max_size=4),
    st.lists(st.tuples(labels, formulas), max_size=4),
)
