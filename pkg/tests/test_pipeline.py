import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from df3forge import checks as K
from df3forge import gen as G
from df3forge import pairing as PC
from df3forge import pipeline as PL
from df3forge import syntax as S
from df3forge.semantics import hf
from df3forge.semantics.engine import Engine, variables_of
from df3forge.semantics.models import SizeTooLarge, all_model_arrays, random_model_arrays

seeds = st.integers(0, 2**32 - 1)


# -- bridge

def test_induced_model_satisfies_delta():
    In = np.array([[False, True], [False, False]])
    from df3forge.semantics.models import delta_induced_p

    P = delta_induced_p(In)
    assert Engine(2, P=P[None], In=In[None]).valid(PL.bridge().delta).all()


def test_bridge_failures_need_membership_loops():
    prof = K.bridge_failure_profile(2)
    assert prof["models"] == 4096
    assert prof["loop_free_failures"] == 0
    assert prof["failures"] == prof["failures_with_loop"]


def test_bridge_size_limits():
    assert PL.check_bridge_equiv(1).models == 0
    with pytest.raises(SizeTooLarge):
        PL.check_bridge_equiv(4)


# -- h' and h

def test_h_prime_atoms():
    prm = PL.default_params()
    assert PL.h_prime(S.atom_eq("x", "y")) is PC.diag(prm, 0, 1)
    assert PL.h_prime(S.atom_in("x", "y")) is PL.h_prime_in()


def test_h_prime_one_free_variable():
    rng = random.Random(0)
    for _ in range(100):
        f = G.random_l3(rng, 3)
        g = PL.h_prime(f)
        assert g.lang == S.FMD3 and S.free_vars(g) <= {"x"}


def test_h_shape():
    f = S.exists("x", S.atom_eq("x", "x"))
    g = PL.h(f)
    prm = PL.default_params()
    assert g is S.forall("x", S.imp(S.conj(PL.sax_star(), PC.triplet_at(prm, "1")), PL.h_prime(f)))
    assert g.lang == S.FMD3 and not S.free_vars(g)


def test_h_boolean_preservation_l3():
    rng = random.Random(11)
    goals = []
    for _ in range(50):
        a, b = G.random_l3_sentence(rng, 3), G.random_l3_sentence(rng, 3)
        goals.append(S.iff(PL.h(S.conj(a, b)), S.conj(PL.h(a), PL.h(b))))
    P, _ = all_model_arrays(2, "P")
    assert all(v.all() for v in Engine(2, P=P).valid_many(goals))
    P3, _ = random_model_arrays(np.random.default_rng(0), 3, 8, "P")
    assert all(v.all() for v in Engine(3, P=P3).valid_many(goals[:10]))


# -- reduce_f

def test_reduce_f_rename_example():
    f = S.parse("FOL", "Av0. Ev1. v0=v1")
    assert PL.reduce_f(f) is S.parse("L3", "Ax. Ey. x=y")


def test_reduce_f_rejects_other_languages():
    with pytest.raises(S.LanguageViolation):
        PL.reduce_f(S.atom_p())


def test_curated_paths():
    paths = [PL.reduce_path(PL.fol_closure(S.parse("FOL", t))) for t in K.CURATED_4VAR.values()]
    assert paths.count("width3") == 7 and paths.count("register") == 3


@settings(max_examples=100, deadline=None)
@given(seeds, seeds)
def test_reduce_f_commutes_with_boolean_connectives(s1, s2):
    a = G.random_fol_sentence(random.Random(s1), 3)
    b = G.random_fol_sentence(random.Random(s2), 3)
    assert PL.reduce_f(S.neg(a)) is S.neg(PL.reduce_f(a))
    assert PL.reduce_f(S.disj(a, b)) is S.disj(PL.reduce_f(a), PL.reduce_f(b))


@settings(max_examples=150, deadline=None)
@given(seeds, st.integers(1, 4))
def test_renaming_paths_preserve_truth_everywhere(seed, n):
    """Without the register, the reduct agrees with the source sentence in
    every membership structure, not only in ones with pairs."""
    rng = random.Random(seed)
    f = G.random_fol_sentence(rng, 4)
    s = PL.fol_closure(f)
    bases = [nd for nd in S.nodes(s) if not nd.fv and nd.kind == S.EX]
    if any(PL.reduce_path(nd) == "register" for nd in bases):
        return
    In = np.random.default_rng(seed).random((16, n, n)) < rng.random()
    tf = Engine(n, In=In, variables=variables_of(f) or ["v0"]).valid(f)
    tg = Engine(n, In=In).valid(PL.reduce_f(f))
    assert np.array_equal(tf, tg)


@pytest.mark.parametrize("text", [
    "Ev0 v1 v2 v3. (in(v0,v1) & in(v1,v2) & ~v2=v3)",
    "Av0 v1 v2 v3. ((in(v0,v1) & in(v2,v3)) -> (v0=v2 | ~v1=v3 | in(v0,v3)))",
    "Ev0 v1. (in(v0,v1) & Ev2 v3. (in(v2,v3) & ~v0=v2 & v1=v3))",
])
def test_register_path_in_register_universe(text):
    f = S.parse("FOL", text)
    assert PL.reduce_path(PL.fol_closure(f)) == "register"
    assert K.register_oracle(f, PL.reduce_f(f)) == hf.TriState.TRUE_STABLE
    assert K.register_oracle(S.neg(f), PL.reduce_f(S.neg(f))) == hf.TriState.TRUE_STABLE


def test_curated_sentences_are_sentences():
    for text in K.CURATED_4VAR.values():
        f = S.parse("FOL", text)
        assert not S.free_vars(f) and len(S.all_vars(f)) == 4


# -- Tr

def test_tr_extensionality():
    f = dict(PL.zf_corpus())["extensionality"]
    g, rep = PL.tr(f)
    assert g.lang == S.FMD3 and not S.free_vars(g)
    assert S.atoms_of(g) == {S.atom_p()}
    assert rep.node_count_shared == S.shared_size(g) and rep.depth > 0
    assert PL.tr(f, stats=False)[0] is g
    d = rep.to_dict("out.fmd")
    assert {"input", "output_file", "nodes_shared", "depth", "millis"} <= set(d)


def test_corpus():
    corpus = PL.zf_corpus()
    assert len(corpus) >= 6
    assert all(f.lang == S.FOL and not S.free_vars(f) for _, f in corpus)


def test_tr_rejects_non_fol():
    with pytest.raises(S.LanguageViolation):
        PL.tr(S.atom_p())


# -- other presentations

def test_modal_example():
    f = S.parse("FMD3", "(Ex. Ey. P(x,y,z)) -> Ey. Ex. P(x,y,z)")
    want = S.imp(S.diamond(1, S.diamond(2, S.prop_p())), S.diamond(2, S.diamond(1, S.prop_p())))
    assert PL.fmd3_to_modal(f) is want


def test_equation_example():
    assert PL.fmd3_to_equation(S.parse("FMD3", "Ex. P(x,y,z)")) is S.parse_term("f X0")


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_round_trips(seed):
    f = G.random_fmd3(random.Random(seed), 5)
    assert PL.modal_to_fmd3(PL.fmd3_to_modal(f)) is f
    assert PL.equation_to_fmd3(PL.fmd3_to_equation(f)) is f


def test_conversions_check_language():
    with pytest.raises(S.LanguageViolation):
        PL.fmd3_to_modal(S.prop_p())
