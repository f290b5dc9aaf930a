"""Coded relations over hereditarily finite sets.

A binary relation ``R`` on a few small sets is represented, as in the
relation-algebra reduct, by a one-free-variable FMD3 formula that holds
exactly at the Kuratowski codes ``<a,b>`` of its pairs.  Individual sets
are named by formulas ``name(s)`` defined by membership recursion through
the simulated substitution, which is faithful on transitive universes with
the membership-induced ``P``.

Composition witnesses are pairs of pairs, so they live well above ``V_4``;
universes here are ``V_4`` followed by the closure of exactly the
witnesses a check needs, and stability is probed against a larger
extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import pairing as PC
from . import pipeline as PL
from . import syntax as S
from .semantics import hf
from .semantics.hf import TriState, Universe, kpair


def _prm():
    return PL.default_params()


def falsum() -> S.Formula:
    """A contradiction with no free variable besides ``x``."""
    return S.neg(S.exists("y", _prm().true))


@lru_cache(maxsize=None)
def name(s: frozenset) -> S.Formula:
    """FMD3 formula with free variable ``x`` true exactly at ``x = s``."""
    prm = _prm()
    member = PC.subst2(prm, PL.e_formula(), "y", "x")
    inside = S.big_disj([PC.subst2(prm, name(t), "y", "x") for t in
                         sorted(s, key=hf._order_key)]) if s else falsum()
    return S.forall("y", S.iff(member, inside))


def relation_formula(pairs) -> S.Formula:
    """Formula for the coded relation ``{<a,b> : (a,b) in pairs}``."""
    codes = sorted({kpair(a, b) for a, b in pairs}, key=hf._order_key)
    if not codes:
        return falsum()
    return S.big_disj([name(c) for c in codes])


def compose(r, s) -> set:
    return {(a, c) for a, b in r for b2, c in s if b == b2}


def converse(r) -> set:
    return {(b, a) for a, b in r}


def identity(field) -> set:
    return {(a, a) for a in field}


# ---------------------------------------------------------------------------
# universes

def comp_witnesses(field) -> list:
    """``<<a,b>,<b,c>>`` for all ``a, b, c`` in ``field``."""
    return [kpair(kpair(a, b), kpair(b, c)) for a, b, c in product(field, repeat=3)]


def pair_codes(field) -> list:
    return [kpair(a, b) for a, b in product(field, repeat=2)]


def extension_noise(base: Universe, rank: int = 3) -> list:
    """Extra sets used to probe stability: pairs over ``V_rank``."""
    lev = hf.hf_universe(rank).elements
    return [kpair(a, b) for a, b in product(lev, repeat=2)]


@dataclass
class CodedUniverses:
    small: Universe
    big: Universe
    field: list  # base sets the relations live on
    probe: list  # element indices (a prefix of both universes) where x is checked

    def in_small(self):
        return self.small.in_matrix()

    def in_big(self):
        return self.big.in_matrix()


def universes(witnesses, field=None, probe_rank: int = 4) -> CodedUniverses:
    field = field if field is not None else hf.hf_universe(2).elements
    v = hf.hf_universe(probe_rank)
    small = v.extend(witnesses)
    big = small.extend(extension_noise(small))
    return CodedUniverses(small, big, list(field), list(range(v.n)))


# ---------------------------------------------------------------------------
# evaluation

def unary_truth(fs, In: np.ndarray) -> list[np.ndarray]:
    """Truth vectors (over ``x``) of one-free-variable FMD3 formulas."""
    from .semantics.engine import Engine
    from .semantics.models import delta_induced_p

    eng = Engine(In.shape[0], P=delta_induced_p(In[None]), variables=list(S.VAR3))
    res = eng.run(list(fs))
    out = []
    for f in fs:
        arr = eng.full(res[f])[0]
        out.append(arr.reshape(arr.shape[0], -1)[:, 0].copy())
    return out


@dataclass
class CodedReport:
    verdict: TriState
    expected: list
    got_small: list
    got_big: list


def coded_check(fs, expected_sets, cu: CodedUniverses, cache=None) -> list[CodedReport]:
    """Compare each formula's extension on the probe elements with the
    expected set of HF elements, over both universes."""
    ins = cache if cache is not None else (cu.in_small(), cu.in_big())
    small_t = unary_truth(fs, ins[0])
    big_t = unary_truth(fs, ins[1])
    out = []
    for ts, tb, exp in zip(small_t, big_t, expected_sets):
        want = np.zeros(len(cu.probe), dtype=bool)
        for e in exp:
            i = cu.small.index.get(e)
            if i is not None and i < len(cu.probe):
                want[i] = True
        a, b = ts[cu.probe], tb[cu.probe]
        if not np.array_equal(a, b):
            v = TriState.UNSTABLE
        elif np.array_equal(a, want):
            v = TriState.TRUE_STABLE
        else:
            v = TriState.FALSE_STABLE
        show = lambda arr: [hf.show(cu.small.elements[i]) for i in np.flatnonzero(arr)]  # noqa: E731
        out.append(CodedReport(v, show(want), show(a), show(b)))
    return out


def codes_of(rel) -> set:
    return {kpair(a, b) for a, b in rel}
