import random
from itertools import product

import numpy as np
import pytest

from df3forge import checks as K
from df3forge import coded as C
from df3forge import pairing as PC
from df3forge import pipeline as PL
from df3forge import syntax as S
from df3forge.semantics import hf


# -- coded relations

def test_names_pick_out_one_set():
    u = hf.hf_universe(4)
    sets = hf.hf_universe(3).elements
    truths = C.unary_truth([C.name(s) for s in sets], u.in_matrix())
    for s, t in zip(sets, truths):
        assert np.flatnonzero(t).tolist() == [u.index[s]]
        assert S.free_vars(C.name(s)) <= {"x"}


def test_relation_helpers():
    a, b = hf.hf_universe(2).elements
    r = {(a, b)}
    assert C.compose(r, {(b, b)}) == {(a, b)}
    assert C.converse(r) == {(b, a)}
    assert C.identity([a, b]) == {(a, a), (b, b)}
    assert C.relation_formula(set()) is C.falsum()


@pytest.fixture(scope="module")
def comp_universes():
    field = hf.hf_universe(2).elements
    return field, C.universes(C.comp_witnesses(field), field)


def test_small_comp_conv_id(comp_universes):
    field, cu = comp_universes
    prm = PL.default_params()
    a, b = field
    R, T = {(a, b)}, {(b, b), (b, a)}
    fs = [PC.comp(prm, C.relation_formula(R), C.relation_formula(T)).formula,
          PC.conv(prm, C.relation_formula(R)).formula,
          PC.ident(prm).formula]
    exp = [C.codes_of(C.compose(R, T)), C.codes_of(C.converse(R)), C.codes_of(C.identity(field))]
    assert [r.verdict for r in C.coded_check(fs, exp, cu)] == [hf.TriState.TRUE_STABLE] * 3


def test_swapped_composition_is_caught(comp_universes):
    field, cu = comp_universes
    prm = PL.default_params()
    a, b = field
    R, T = {(a, b)}, {(b, b)}
    f = PC.comp(prm, C.relation_formula(T), C.relation_formula(R)).formula
    (rep,) = C.coded_check([f], [C.codes_of(C.compose(R, T))], cu)
    assert rep.verdict == hf.TriState.FALSE_STABLE


# -- check runners at reduced sizes

def test_soundness_small():
    r = K.check_soundness(instances=20, random_models=0, max_n=3)
    assert r.passed and r.line().startswith("PASS  [1]")


def test_broken_schema_fails_soundness():
    r = K.check_soundness(instances=20, random_models=0, max_n=3, extra_schemas=K.BROKEN_SCHEMA)
    assert not r.passed and r.line().startswith("FAIL")


def test_substitution_corpus():
    fs = K.substitution_corpus(500)
    assert len(fs) == 500 and len(set(fs)) == 500
    assert all(S.free_vars(f) <= {"x", "y"} for f in fs)


def test_substitution_small():
    assert K.check_substitution(corpus_size=40, sizes=(2,)).passed


def test_mutated_substitution_fails(monkeypatch):
    real = PC.subst2
    monkeypatch.setattr(PC, "subst2", lambda prm, f, u, v: real(prm, f, v, u))
    assert not K.check_substitution(corpus_size=40, sizes=(2,)).passed


def test_bridge_loop_free_passes():
    r = K.check_bridge_loop_free(2)
    assert r.passed and r.details["loop_free_models"] == 1024


def test_modal_and_equational_small():
    assert K.check_modal_correspondence(size=30).passed
    assert K.check_equational_agreement(size=30).passed


def test_proof_library_small():
    r = K.check_proof_library(mutations=50)
    assert r.passed


def test_mutation_changes_statement():
    rng = random.Random(0)
    f = S.parse("FMD3", "Ex. (P(x,y,z) -> Ey. P(x,y,z))")
    changed = sum(K.mutate_statement(rng, f) is not f for _ in range(50))
    assert changed >= 45


def test_qp_witness_count():
    field = hf.hf_universe(2).elements
    assert len(K.qp_witnesses(field)) == 3 * len(list(product(field, repeat=2)))


def test_quick_suite_shape():
    assert len(K.acceptance_suite("quick")) == 6
    assert len(K.acceptance_suite("full")) == 12


def test_digest_is_stable():
    f = S.parse("FMD3", "Ex. P(x,y,z)")
    assert K.digest(f) == K.digest(S.parse("FMD3", "Ex. P(x,y,z)"))
    assert len(K.digest(f)) == 64
