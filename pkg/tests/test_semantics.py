import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from df3forge import gen as G
from df3forge import pipeline as PL
from df3forge import syntax as S
from df3forge.proofs import schemas as SC
from df3forge.semantics import hf, kripke, setalg
from df3forge.semantics.engine import Engine, PartialAssignment
from df3forge.semantics.models import (Model, SizeTooLarge, all_model_arrays, count_models,
                                       enumerate_models, eval_formula, satisfies,
                                       valid_in_model)

F = lambda text: S.parse("FMD3", text)  # noqa: E731

M = Model(2, frozenset({(0, 0, 0), (1, 1, 1), (0, 1, 0), (0, 1, 1)}))


def test_atom_lookup():
    assert eval_formula(M, S.atom_p(), {"x": 0, "y": 1, "z": 0})


def test_forall_z():
    f = F("Az. P(x,y,z)")
    assert eval_formula(M, f, {"x": 0, "y": 1})
    assert not eval_formula(M, f, {"x": 0, "y": 0})


def test_partial_assignment_rejected():
    with pytest.raises(PartialAssignment):
        eval_formula(M, S.atom_p(), {"x": 0})


def test_validity_examples():
    assert valid_in_model(M, F("P(x,y,z) | ~P(x,y,z)"))
    assert not valid_in_model(M, S.atom_p())
    assert not eval_formula(M, S.atom_p(), {"x": 0, "y": 0, "z": 1})


def test_model_counts():
    assert count_models(1, "P") == 2
    assert count_models(2, "P") == 256
    assert count_models(2, "P+in") == 4096
    assert len(list(enumerate_models(2, "P"))) == 256
    with pytest.raises(SizeTooLarge):
        next(enumerate_models(4, "P"))


def test_engine_matches_reference_evaluator():
    rng = random.Random(5)
    fs = [G.random_fmd3(rng, 4) for _ in range(40)]
    P, _ = all_model_arrays(2, "P")
    eng = Engine(2, P=P)
    res = eng.run(fs)
    for b in range(0, 256, 17):
        m = Model.from_arrays(P[b])
        for f in fs:
            arr = eng.full(res[f])[b]
            for a in product(range(2), repeat=3):
                assert bool(arr[a]) == satisfies(m, f, dict(zip(S.VAR3, a)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_axiom_7_valid_everywhere(seed):
    rng = random.Random(seed)
    f = SC.instantiate("7", {"phi": G.random_fmd3(rng, 4), "v": "x", "w": "y"})
    P, _ = all_model_arrays(2, "P")
    assert Engine(2, P=P).valid(f).all()


def test_axiom_6_valid_on_sampled_models():
    rng = random.Random(1)
    nrng = np.random.default_rng(1)
    from df3forge.semantics.models import random_model_arrays

    P, _ = random_model_arrays(nrng, 3, 50, "P")
    for _ in range(30):
        f = SC.instantiate("6", {"phi": G.random_fmd3(rng, 4), "v": rng.choice(S.VAR3)})
        assert Engine(3, P=P).valid(f).all()


def test_model_json_round_trip():
    assert Model.from_json(M.to_json()) == M


# -- Kripke frames

def test_frame_shape():
    fr = kripke.to_frame(M)
    assert fr.worlds == 8
    for i in (1, 2, 3):
        assert len(fr.relation(i)) == 16
        assert all(bin(c).count("1") == 2 for c in fr.classes(i))


def test_frames_commute_small_models():
    rng = np.random.default_rng(0)
    from df3forge.semantics.models import random_model_arrays

    for n in (1, 2, 3):
        P, _ = random_model_arrays(rng, n, 3, "P")
        for b in range(3):
            fr = kripke.to_frame(Model.from_arrays(P[b]))
            assert fr.commute(1, 2) and fr.commute(1, 3) and fr.commute(2, 3)


def test_modal_correspondence_depth4():
    rng = random.Random(9)
    fs = [G.random_fmd3(rng, 4) for _ in range(60)]
    P, _ = all_model_arrays(2, "P")
    eng = Engine(2, P=P)
    res = eng.run(fs)
    for b in range(0, 256, 5):
        fr = kripke.to_frame(Model.from_arrays(P[b]))
        for f in fs:
            arr = eng.full(res[f])[b]
            ts = kripke.truth_set(fr, PL.fmd3_to_modal(f))
            for a in product(range(2), repeat=3):
                assert bool(arr[a]) == bool(ts >> kripke.world_of(2, a) & 1)


def test_modal_axioms_on_frames():
    p = S.prop_p()
    c1 = S.imp(S.diamond(1, S.diamond(2, p)), S.diamond(2, S.diamond(1, p)))
    s5 = S.imp(S.diamond(1, p), S.box(1, S.diamond(1, p)))
    not_valid = S.imp(p, S.box(1, p))
    assert kripke.valid_on_small_frames([c1, s5, not_valid], 4) == [True, True, False]


def test_frame_from_relations_requires_equivalence():
    with pytest.raises(kripke.NotEquivalence):
        kripke.KripkeFrame.from_relations(2, [{(0, 1)}, {(0, 0), (1, 1)}, {(0, 0), (1, 1)}], 0)


# -- set algebras

def test_cylindrify_example():
    assert setalg.cylindrify(2, 0, {(0, 1, 0)}) == {(0, 1, 0), (1, 1, 0)}


@pytest.mark.parametrize("seed", range(100))
def test_d4_d5(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    s = setalg.random_subset(rng, n)
    c = lambda i, a: setalg.cylindrify(n, i, a)  # noqa: E731
    top = setalg.unit(n)
    assert c(0, c(1, s)) == c(1, c(0, s))
    assert c(0, top - c(0, s)) == top - c(0, s)


def test_unbound_term_variable():
    with pytest.raises(setalg.UnboundTermVariable):
        setalg.set_algebra_eval(setalg.SetAlgebra3(2, {}), S.tvar(0))


# -- hereditarily finite sets

def test_level_sizes():
    assert len(hf.hf_universe(4).elements) == 16
    assert hf.level_size(5) == 65536


def test_oracle_examples():
    assert hf.hf_oracle(S.parse("FOL", "Ev0. Av1. ~in(v1,v0)"), 3, 0) == hf.TriState.TRUE_STABLE
    assert hf.hf_oracle(S.parse("FOL", "Av0. Ev1. in(v0,v1)"), 4, 0) == hf.TriState.UNSTABLE
    assert hf.hf_oracle(S.parse("FOL", PL.ZF_TEXT["pairing"]), 4, 1) == hf.TriState.TRUE_STABLE


def test_oracle_rejects_bad_arguments():
    f = S.parse("FOL", "Ev0. Av1. ~in(v1,v0)")
    with pytest.raises(hf.RankTooLarge):
        hf.hf_oracle(f, 6, 1)
    with pytest.raises(ValueError):
        hf.hf_oracle(f, 3, 2)
    with pytest.raises(S.LanguageViolation):
        hf.hf_oracle(S.parse("MODAL", "p"), 3, 0)


def test_ackermann_membership_is_hf_membership():
    u = hf.hf_universe(4)
    In = hf.ackermann_in(4)
    assert np.array_equal(In, u.in_matrix())


def test_kuratowski_pair_decodes():
    a, b = hf.hf_universe(2).elements
    p = hf.kpair(a, b)
    assert p == frozenset({frozenset({a}), frozenset({a, b})})
    assert hf.decode(hf.encode(p)) == p


def test_equiv_oracle_separates():
    t = S.parse("FOL", "Ev0. Av1. ~in(v1,v0)")
    f = S.parse("FOL", "Ev0. Av1. in(v1,v0)")
    assert hf.hf_oracle_equiv(t, PL.reduce_f(t)) == hf.TriState.TRUE_STABLE
    assert hf.hf_oracle_equiv(t, PL.reduce_f(f)) == hf.TriState.FALSE_STABLE
