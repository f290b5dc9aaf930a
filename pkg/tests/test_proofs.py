import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from df3forge import gen as G
from df3forge import syntax as S
from df3forge.proofs import schemas as SC
from df3forge.proofs.checker import (MP, Axiom, EqRule, Hyp, LanguageMismatch, MalformedLine,
                                     Proof, ProofLine, check_proof, parse_proof, render_proof)
from df3forge.proofs.library import proof_library
from df3forge.proofs.tautology import TooManyLetters, is_tautology

F = lambda text: S.parse("FMD3", text)  # noqa: E731


# -- tautologies

def test_tautology_examples():
    assert is_tautology(F("P(x,y,z) | ~P(x,y,z)"))
    assert is_tautology(F("(Ex. P(x,y,z)) -> Ex. P(x,y,z)"))
    assert not is_tautology(F("P(x,y,z) -> Ex. P(x,y,z)"))


def _many_letters(k):
    # Ex ~Ex ~ ... P: each prefix is its own propositional letter
    f = S.atom_p()
    out = []
    for _ in range(k):
        f = S.exists("x", S.neg(f))
        out.append(f)
    return S.big_disj(out)


def test_too_many_letters():
    assert not is_tautology(_many_letters(20))
    with pytest.raises(TooManyLetters):
        is_tautology(_many_letters(21))


# -- schema matching

def test_schema_examples():
    assert SC.match_schema("7", F("(Ex. Ey. P(x,y,z)) -> Ey. Ex. P(x,y,z)")) is not None
    assert SC.match_schema("3", F("P(x,y,z) -> Ez. P(x,y,z)")) is not None
    assert SC.match_schema("6", F("(Ex. ~Ex. P(x,y,z)) -> ~Ex. P(x,y,z)")) is not None
    assert SC.match_schema("3", F("P(x,y,z) -> P(x,y,z)")) is None


def test_systems_have_their_schemas():
    assert SC.ORDER[SC.HILBERT3] == ("1", "2", "3", "4", "5", "6", "7")
    assert "8" in SC.ORDER[SC.HILBERT3_ALT8] and "6" not in SC.ORDER[SC.HILBERT3_ALT8]
    assert SC.match_axiom(SC.HILBERT3_ALT8, F("(Ex. ~Ex. P(x,y,z)) -> ~Ex. P(x,y,z)")) is None


def test_v4_side_condition():
    ok = F("(Ex. Ey. P(x,y,z)) -> Ex. Ex. Ey. P(x,y,z)")
    assert SC.match_schema("V4", SC.instantiate("V4", {"phi": F("Ex. Ey. P(x,y,z)"), "v": "x"}))
    # v free in phi violates the side condition
    bad = SC.instantiate("V4", {"phi": F("Ey. P(x,y,z)"), "v": "x"})
    assert SC.match_schema("V4", bad) is None
    assert ok is not None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["1", "2", "3", "4", "5", "6", "7", "8"]))
def test_instances_match_their_schema(seed, schema):
    rng = random.Random(seed)
    b = {"phi": G.random_fmd3(rng, 3), "psi": G.random_fmd3(rng, 3),
         "v": rng.choice(S.VAR3), "w": rng.choice(S.VAR3)}
    if SC.template(schema) == SC.TAUTOLOGY:
        return
    assert SC.match_schema(schema, SC.instantiate(schema, b)) is not None


# -- checker

def _small_proof(line2):
    return Proof(SC.HILBERT3, [
        ProofLine(1, F("P(x,y,z)"), Hyp("h")),
        ProofLine(2, line2, Axiom.of("3", phi=F("P(x,y,z)"), v="x")),
        ProofLine(3, F("Ex. P(x,y,z)"), MP(1, 2)),
    ], {"h": F("P(x,y,z)")})


def test_direct_schema_application_accepted():
    assert check_proof(_small_proof(F("P(x,y,z) -> Ex. P(x,y,z)"))).accepted


def test_tampered_axiom_rejected_at_line_2():
    tampered = S.imp(S.atom_p(), S.exists("x", S.atom_p()))
    with pytest.raises(S.LanguageViolation):
        F("P(x,y,z) -> Ex. P(x,x,z)")  # not even expressible
    v = check_proof(_small_proof(S.imp(S.atom_p(), S.exists("y", S.atom_p()))))
    assert not v.accepted and v.first_failure[0] in (2, 3)
    assert check_proof(_small_proof(tampered)).accepted


def test_equational_d5_symmetry():
    X0 = S.tvar(0)
    fg, gf = S.tcyl("f", S.tcyl("g", X0)), S.tcyl("g", S.tcyl("f", X0))
    p = Proof(SC.EQUATIONAL, [
        ProofLine(1, S.Equation(fg, gf), Axiom.of("D5")),
        ProofLine(2, S.Equation(gf, fg), EqRule("symmetry", (1,))),
    ], {})
    assert check_proof(p).accepted


def test_malformed_references():
    p = Proof(SC.HILBERT3, [ProofLine(1, F("Ex. P(x,y,z)"), MP(1, 2))], {})
    with pytest.raises(MalformedLine):
        check_proof(p)


def test_language_mismatch():
    p = Proof(SC.HILBERT3, [ProofLine(1, S.parse("MODAL", "p | ~p"), Axiom.of("1"))], {})
    with pytest.raises(LanguageMismatch):
        check_proof(p)


# -- library

LIB = proof_library()


def test_library_names():
    assert {"ax8_from_base", "ax6_from_ax8", "forall_conj", "eq_invariance"} <= set(LIB)


def test_ax8_conclusion_shape():
    p = LIB["ax8_from_base"]
    phi = S.atom_p()
    want = S.iff(S.exists("x", S.conj(phi, S.exists("x", phi))),
                 S.conj(S.exists("x", phi), S.exists("x", phi)))
    assert p.conclusion is want
    assert p.system == SC.HILBERT3


def test_ax6_from_ax8_in_alt_system():
    assert LIB["ax6_from_ax8"].system == SC.HILBERT3_ALT8
    assert check_proof(LIB["ax6_from_ax8"]).accepted


@pytest.mark.parametrize("name", sorted(LIB))
def test_library_accepted_and_round_trips(name):
    p = LIB[name]
    assert check_proof(p).accepted
    text = render_proof(p)
    q = parse_proof(text)
    assert render_proof(q) == text
    assert check_proof(q).accepted


@pytest.mark.parametrize("name", sorted(LIB))
def test_every_line_matters(name):
    p = LIB[name]
    rng = random.Random(name)
    from df3forge.checks import mutate_statement

    for k in range(len(p.lines)):
        old = p.lines[k]
        new = mutate_statement(rng, old.statement)
        if new == old.statement:
            continue
        lines = list(p.lines)
        lines[k] = ProofLine(old.index, new, old.justification)
        assert not check_proof(Proof(p.system, lines, p.hypotheses)).accepted


def test_parse_proof_errors():
    with pytest.raises(MalformedLine):
        parse_proof("1. P(x,y,z) ; AX 1")  # no system
    with pytest.raises(MalformedLine):
        parse_proof("system: NOPE\n")
    with pytest.raises(MalformedLine):
        parse_proof("system: HILBERT3\n1. P(x,y ; AX 1")
