from __future__ import annotations

import pytest
from hypothesis import given

from strategies import formulas
from tenseproof.formula import (
    And,
    BlackBox,
    Bottom,
    Dia,
    FormulaError,
    FormulaSyntaxError,
    NegLiteral,
    Or,
    PosLiteral,
    Top,
    negate,
    parse_formula,
    pretty,
)

p, q = PosLiteral("p"), PosLiteral("q")


def test_parse_precedence():
    assert parse_formula("<>p & [#]q") == And(Dia(p), BlackBox(q))
    assert parse_formula("~p | p") == Or(NegLiteral("p"), p)
    assert parse_formula("p | q & p") == Or(p, And(q, p))
    assert parse_formula("p & q & p") == And(And(p, q), p)


def test_unbalanced_reports_offset():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("[](p")
    assert e.value.position == 4


@pytest.mark.parametrize("text", ["", "p &", "T", "F & p", "<>", "p q", "[#(p)", "p $ q"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_schematic_letters_are_atoms():
    assert parse_formula("A | ~B") == Or(PosLiteral("A"), NegLiteral("B"))


def test_negation_clauses():
    assert negate(p) == NegLiteral("p")
    assert negate(parse_formula("[](p & ~q)")) == parse_formula("<>(~p | q)")
    assert negate(parse_formula("<#>[#]p")) == parse_formula("[#]<#>~p")


def test_sugar_expands_through_negation():
    assert parse_formula("p -> q") == Or(NegLiteral("p"), q)
    assert parse_formula("~(p & q)") == Or(NegLiteral("p"), NegLiteral("q"))
    assert parse_formula("p <-> q") == And(Or(NegLiteral("p"), q), Or(NegLiteral("q"), p))


def test_constants_are_rejected_by_negation():
    with pytest.raises(FormulaError):
        negate(And(p, Top()))
    with pytest.raises(FormulaError):
        negate(Bottom())


def test_pretty_uses_symbols():
    assert pretty(parse_formula("<#>p & []q")) == "◆p ∧ □q"


@given(formulas)
def test_negate_is_an_involution(a):
    assert negate(negate(a)) == a


@given(formulas)
def test_print_parse_round_trip(a):
    assert parse_formula(str(a)) == a
    assert str(parse_formula(str(a))) == str(a)
