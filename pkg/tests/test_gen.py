import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from df3forge import gen as G
from df3forge import syntax as S

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(0, 6))
def test_depth_bound(seed, depth):
    # S.depth counts the atom as one level
    assert S.depth(G.random_fmd3(random.Random(seed), depth)) <= depth + 1
    assert S.depth(G.random_modal(random.Random(seed), depth)) <= depth + 1


@pytest.mark.parametrize("make", [G.random_fmd3, G.random_l3, G.random_fol, G.random_modal,
                                  G.random_fol_sentence, G.random_l3_sentence])
def test_same_seed_same_formula(make):
    assert make(random.Random(7), 4) is make(random.Random(7), 4)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_languages_and_sentences(seed):
    rng = random.Random(seed)
    assert G.random_fmd3(rng, 4, sugar=True).lang == S.FMD3
    assert G.random_l3(rng, 4).lang == S.L3
    f = G.random_fol_sentence(rng, 4)
    assert f.lang == S.FOL and not S.free_vars(f)
    assert not S.free_vars(G.random_l3_sentence(rng, 4))


def test_corpus_distinct_and_filtered():
    fs = G.corpus(lambda r: G.random_fmd3(r, 3), random.Random(0), 100,
                  keep=lambda f: "z" not in S.free_vars(f))
    assert len(fs) == 100 == len(set(fs))
    assert all("z" not in S.free_vars(f) for f in fs)


def test_term_variables_bounded():
    rng = random.Random(1)
    for _ in range(50):
        t = G.random_term(rng, 5, 2)
        assert S.parse_term(S.render(t)) is t
