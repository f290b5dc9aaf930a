"""Proof systems: schemas, tautologies, the checker and a proof library."""

from .checker import (MP, Axiom, EqRule, Gen, Hyp, LanguageMismatch, MalformedLine, Proof,
                      ProofLine, Verdict, check_proof, parse_proof, render_proof)
from .library import proof_library
from .schemas import (EQUATIONAL, HILBERT3, HILBERT3_ALT8, MODAL, RE_EQFREE, SYSTEMS,
                      instantiate, match_axiom)
from .tautology import TooManyLetters, is_tautology

__all__ = [
    "MP", "Axiom", "EqRule", "Gen", "Hyp", "LanguageMismatch", "MalformedLine", "Proof",
    "ProofLine", "Verdict", "check_proof", "parse_proof", "render_proof", "proof_library",
    "EQUATIONAL", "HILBERT3", "HILBERT3_ALT8", "MODAL", "RE_EQFREE", "SYSTEMS",
    "instantiate", "match_axiom", "TooManyLetters", "is_tautology",
]
