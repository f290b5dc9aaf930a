from itertools import product

import numpy as np
import pytest

from df3forge import pairing as PC
from df3forge import pipeline as PL
from df3forge import syntax as S
from df3forge.semantics import hf
from df3forge.semantics.engine import Engine
from df3forge.semantics.models import delta_induced_p

X, Y, Z = "x", "y", "z"


@pytest.fixture(scope="module")
def prm():
    return PL.default_params()


def test_simulated_equality(prm):
    assert PC.eq_formula(prm, Y, Z) is S.exists(X, S.conj(prm.delta_xy, prm.delta_xz))
    assert PC.eq_formula(prm, X, X) is S.disj(prm.delta_xy, S.neg(prm.delta_xy))
    assert PC.eq_formula(prm, Z, Y) is PC.eq_formula(prm, Y, Z)


def test_simulated_substitution_cases(prm):
    f = S.exists(Z, S.atom_p())
    assert PC.subst2(prm, f, X, Y) is f
    assert PC.subst2(prm, f, Z, Y) is S.exists(X, S.conj(prm.delta_xz, f))
    for u, v in product(S.VAR3, repeat=2):
        assert S.free_vars(PC.subst2(prm, f, u, v)) <= {u, v}


def test_subst_rejects_z_free(prm):
    with pytest.raises(PC.FreeVarViolation):
        PC.subst2(prm, S.atom_p(), X, Y)


def test_projection_definitions(prm):
    assert PC.proj_eq(prm, X, "0", Y, "") is PC.subst2(prm, prm.p0, X, Y)
    zz = PC.proj_eq(prm, Z, "0", Z, "1")
    assert zz is S.exists(X, S.conj(PC.proj_eq(prm, Z, "0", X, ""), PC.proj_eq(prm, Z, "1", X, "")))
    with pytest.raises(ValueError):
        PC.proj_eq(prm, X, "2", Y, "")


def test_index_set():
    assert len(PC.H) == 15
    assert PC.H[0] == "" and set(PC.H) == {"".join(b) for n in range(4)
                                             for b in product("01", repeat=n)}


def test_conjunct_counts(prm):
    b = PC.ax_build(prm)
    assert b.counts == {"A1": 27 * 15 ** 3, "A2": 882, "A3": 2700, "A4": 9}
    assert S.free_vars(b.formula) <= {X, Y, Z}
    strong = PC.ax_build(prm, strong=True)
    assert set(strong.counts) == {"A1", "A2", "A3", "A4", "A5"}


def test_comp_expansion(prm):
    f = S.exists(Y, S.exists(Z, S.atom_p()))
    g = S.neg(f)
    c = PC.comp(prm, f, g)
    assert c.op == "COMP" and c.args == (f, g)
    assert c.formula is S.exists(Y, S.big_conj([
        PC.at(prm, f, Y, "0"), PC.at(prm, g, Y, "1"),
        PC.proj_eq(prm, X, "0", Y, "00"), PC.proj_eq(prm, Y, "01", Y, "10"),
        PC.proj_eq(prm, Y, "11", X, "1")]))
    assert S.free_vars(c.formula) == {X}


def test_ra_arity(prm):
    with pytest.raises(PC.ArityMismatch):
        PC.ra_apply(prm, "COMP", [PC.ident(prm)])
    with pytest.raises(PC.FreeVarViolation):
        PC.conv(prm, S.atom_p())


def test_cylindric_definitions(prm):
    assert PC.diag(prm, 0, 1) is S.conj(PC.triplet_at(prm, "1"),
                                       PC.proj_eq(prm, X, "10", X, "110"))
    f = S.exists(Y, S.exists(Z, S.atom_p()))
    assert PC.cyl(prm, 0, f) is PC.ra_apply(prm, "COMP", [f, PC.t_rel(prm, 0)]).formula
    assert PC.ca_apply(prm, "C", [f], i=0) is PC.cyl(prm, 0, f)


def _v4_engine(vs=("x", "y", "z")):
    In = hf.ackermann_in(4)
    return Engine(16, P=delta_induced_p(In)[None], variables=list(vs)), hf.hf_universe(4)


def test_delta_on_two_element_model(prm):
    In = np.array([[False, True], [False, False]])
    eng = Engine(2, P=delta_induced_p(In)[None])
    t = eng.full(eng.truth(prm.delta_xy))[0]
    assert np.argwhere(t[:, :, 0]).tolist() == [[0, 0], [1, 1]]
    assert (t == t[:, :, :1]).all()


def test_projection_on_kuratowski_pairs(prm):
    eng, u = _v4_engine()
    t = eng.full(eng.truth(PC.proj_eq(prm, X, "0", Y, "")))[0]
    low = hf.hf_universe(2).elements
    checked = 0
    for a, b in product(low, repeat=2):
        if a == b:
            continue
        p = hf.kpair(a, b)
        assert t[u.index[p], u.index[a], 0]
        assert not t[u.index[p], u.index[b], 0]
        checked += 1
    assert checked == 2


def test_l3_first_projection_on_pairs():
    prm = PL.l3_params()
    u = hf.hf_universe(4)
    eng = Engine(16, In=u.in_matrix()[None])
    t = eng.full(eng.truth(prm.p0))[0]
    assert S.free_vars(prm.p0) == {X, Y}
    for a, b in product(hf.hf_universe(2).elements, repeat=2):
        p = hf.kpair(a, b)
        hits = [u.elements[j] for j in np.flatnonzero(t[u.index[p], :, 0])]
        assert hits == [a]


def test_pairing_statement_parts():
    parts = PL.pi_plus_parts()
    verdicts = {k: hf.hf_oracle(v, 4, 1) for k, v in parts.items()}
    assert verdicts == {"pi": hf.TriState.UNSTABLE, "injective": hf.TriState.TRUE_STABLE,
                        "aligned": hf.TriState.TRUE_STABLE, "nontrivial": hf.TriState.TRUE_STABLE}
    assert hf.hf_oracle(parts["nontrivial"], 3, 0) == hf.TriState.TRUE_STABLE
    assert PL.pi_plus().lang == S.L3 and not S.free_vars(PL.pi_plus())
