import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from df3forge import gen as G
from df3forge import syntax as S


P = S.atom_p()


def test_parse_unique_atom():
    assert S.parse("FMD3", "P(x,y,z)") is P


def test_other_argument_orders_rejected():
    with pytest.raises(S.LanguageViolation):
        S.parse("FMD3", "P(y,x,z)")


def test_forall_is_sugar():
    assert S.parse("FMD3", "Ax. P(x,y,z)") is S.neg(S.exists("x", S.neg(P)))


def test_render_basic():
    assert S.render(P) == "P(x,y,z)"
    assert S.render(S.exists("x", P)) == "Ex. P(x,y,z)"
    assert S.render(S.parse("L3", "in(x,y) | x=z")) == "(in(x,y) | x=z)"


def test_free_vars():
    assert S.free_vars(P) == {"x", "y", "z"}
    assert S.free_vars(S.exists("z", P)) == {"x", "y"}
    assert S.free_vars(S.parse("FMD3", "Ey. Ez. P(x,y,z)")) == {"x"}


def test_classify():
    assert S.classify(S.parse("FMD3", "Ey. Ez. P(x,y,z)")).is_fmd3_one_free_x
    assert not S.classify(P).is_sentence
    assert S.classify(S.parse("FMD3", "Ex. Ey. Ez. P(x,y,z)")).is_sentence


def test_hash_consing_shares_nodes():
    a = S.parse("FMD3", "(Ex. P(x,y,z)) | Ex. P(x,y,z)")
    assert a.a is a.b
    assert S.shared_size(a) == 3
    assert S.tree_size(a) == 5


def test_l3_only_in_xy():
    assert S.parse("L3", "in(x,y)").kind == S.ATOM_IN
    with pytest.raises(S.LanguageViolation):
        S.parse("L3", "in(y,x)")


def test_fol_variables():
    f = S.parse("FOL", "Ev0. Av1. ~in(v1,v0)")
    assert f.lang == S.FOL and not S.free_vars(f)
    with pytest.raises(S.LanguageViolation):
        S.parse("FOL", "Ex. in(x,x)")


def test_mixing_fol_and_l3_rejected():
    with pytest.raises(S.LanguageViolation):
        S.disj(S.atom_in("x", "y"), S.atom_in("v0", "v1"))


@pytest.mark.parametrize("text", ["P(x,y", "Ex P(x,y,z)", "P(x,y,z) &", "~", "Q(x,y,z)"])
def test_syntax_errors(text):
    with pytest.raises((S.FormulaSyntaxError, S.LanguageViolation)):
        S.parse("FMD3", text)


def test_dag_stats_agree():
    f = G.random_fmd3(random.Random(4), 6)
    assert S.dag_stats(f) == (S.shared_size(f), S.tree_size(f), S.depth(f))


def test_shared_format_round_trip():
    f = S.parse("FMD3", "Ax. (Ey. P(x,y,z) -> Ey. P(x,y,z))")
    text = S.render_shared(f)
    assert text.startswith("# df3-forge shared")
    assert S.parse_shared(text) is f


def test_deep_formula_renders_and_parses():
    f = P
    for i in range(20000):
        f = S.neg(f) if i % 2 else S.exists("x", f)
    assert S.depth(f) == 20001
    assert S.parse("FMD3", S.render(f)) is f


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(min_value=0, max_value=6))
def test_render_parse_round_trip_fmd3(seed, depth):
    f = G.random_fmd3(random.Random(seed), depth)
    assert S.parse("FMD3", S.render(f)) is f
    assert S.parse("FMD3", S.render(f, pretty=True)) is f
    assert S.parse_shared(S.render_shared(f)) is f


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_render_parse_round_trip_other_languages(seed):
    rng = random.Random(seed)
    for lang, f in (("L3", G.random_l3(rng, 4)), ("FOL", G.random_fol(rng, 4)),
                    ("MODAL", G.random_modal(rng, 4))):
        assert S.parse(lang, S.render(f, pretty=True)) is f


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_term_round_trip(seed):
    t = G.random_term(random.Random(seed), 5, 3)
    assert S.parse_term(S.render(t)) is t
