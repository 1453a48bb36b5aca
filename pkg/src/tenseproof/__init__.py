"""Proof calculi for tense logic extended with path axioms.

Shallow nested (display), deep nested and labeled sequent calculi, their
checkers, the translations between them and a bounded prover.
"""

from __future__ import annotations

from .axioms import GeneralPathAxiom, PathAxiom, PathGrammar, completion_member, parse_axiom, parse_axiom_file
from .formula import Diamond, Formula, parse_formula
from .proof import Calculus, CheckReport, Proof, check, dkt, lkt_pr, lkt_st, skt
from .proofio import proof_from_text, proof_to_text
from .prover import Budget, prove_deep, prove_labeled
from .sequent import LabeledSequent, NestedSequent, parse_labeled, parse_nested
from .translate import deep_to_shallow, eliminate_structural, labeled_to_deep, pipeline_reverse, shallow_to_labeled

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "Calculus",
    "CheckReport",
    "Diamond",
    "Formula",
    "GeneralPathAxiom",
    "LabeledSequent",
    "NestedSequent",
    "PathAxiom",
    "PathGrammar",
    "Proof",
    "check",
    "completion_member",
    "deep_to_shallow",
    "dkt",
    "eliminate_structural",
    "labeled_to_deep",
    "lkt_pr",
    "lkt_st",
    "parse_axiom",
    "parse_axiom_file",
    "parse_formula",
    "parse_labeled",
    "parse_nested",
    "pipeline_reverse",
    "proof_from_text",
    "proof_to_text",
    "prove_deep",
    "prove_labeled",
    "shallow_to_labeled",
    "skt",
]
