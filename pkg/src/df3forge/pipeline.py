"""Concrete parameters over ``P``, the bridge sentences, and the translation
chain from first-order set theory down to the single atom ``P(x,y,z)``.

    FOL --reduce_f--> L3 --h--> FMD3,      tr = h . reduce_f

``h`` wraps the homomorphism ``h_prime`` (L3 formulas to one-free-variable
FMD3 formulas over coded triplets) with the strong pairing axiom and the
image of the pairing statement ``pi_plus``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import pairing as PC
from . import syntax as S
from .pairing import Params, X, Y, Z
from .syntax import big_conj, conj, disj, exists, forall, iff, imp, neg


class NotASentence(ValueError):
    pass


class UnsupportedFormula(ValueError):
    pass


# ---------------------------------------------------------------------------
# parameters

@dataclass(frozen=True)
class ChainParts:
    """Intermediate formulas of the ordered-pair definitions."""

    member: S.Formula      # u in v   (two free variables x, y)
    singleton: S.Formula   # x = {y}
    sing_in: S.Formula     # {x} in y
    double: S.Formula      # x = {{y}}
    in_union: S.Formula    # x in U y
    op: S.Formula          # x is an ordered pair
    p0: S.Formula
    p1: S.Formula


def pair_chain(base: Params, member: S.Formula) -> ChainParts:
    """Ordered-pair projections built from a membership formula ``member``
    (free in ``x, y``) and the simulated equality of ``base``."""
    sub = lambda f, u, v: PC.subst2(base, f, u, v)  # noqa: E731
    e = lambda u, v: PC.eq_formula(base, u, v)  # noqa: E731
    ine = lambda u, v: sub(member, u, v)  # noqa: E731

    singleton = forall(Z, iff(ine(Z, X), e(Z, Y)))
    sing_in = exists(Z, conj(sub(singleton, Z, X), ine(Z, Y)))
    double = exists(Z, conj(sub(singleton, Z, Y), sub(singleton, X, Z)))
    in_union = exists(Z, conj(ine(X, Z), ine(Z, Y)))
    unique_first = exists(Y, forall(Z, iff(sub(sing_in, Z, X), e(Y, Z))))
    unique_second = forall(Y, forall(Z, imp(
        big_conj([sub(in_union, Y, X), neg(sub(sing_in, Y, X)),
                  sub(in_union, Z, X), neg(sub(sing_in, Z, X))]),
        e(Y, Z))))
    nonempty = forall(Y, exists(Z, imp(ine(Y, X), ine(Z, Y))))
    op = big_conj([unique_first, unique_second, nonempty])
    p0 = conj(op, sub(sing_in, Y, X))
    p1 = conj(op, disj(double, conj(sub(in_union, Y, X), neg(sub(sing_in, Y, X)))))
    return ChainParts(member, singleton, sing_in, double, in_union, op, p0, p1)


def e_formula() -> S.Formula:
    """``E = Az. P(x,y,z)``."""
    return forall(Z, S.atom_p())


def d_formula() -> S.Formula:
    return conj(S.atom_p(), neg(e_formula()))


@lru_cache(maxsize=None)
def default_params() -> Params:
    d = d_formula()
    dxy, dxz = exists(Z, d), exists(Y, d)
    base = Params(dxy, dxz, dxy, dxy, name="fmd3-base")
    ch = pair_chain(base, e_formula())
    return Params(dxy, dxz, ch.p0, ch.p1, name="fmd3")


@lru_cache(maxsize=None)
def default_chain() -> ChainParts:
    d = d_formula()
    dxy, dxz = exists(Z, d), exists(Y, d)
    return pair_chain(Params(dxy, dxz, dxy, dxy, name="fmd3-base"), e_formula())


@lru_cache(maxsize=None)
def l3_params() -> Params:
    """Mirror parameters over ``in``/``=``: real equality and the same
    ordered-pair chain with ``in(x,y)`` as membership."""
    dxy, dxz = S.atom_eq(X, Y), S.atom_eq(X, Z)
    base = Params(dxy, dxz, dxy, dxy, real_eq=True, name="l3-base")
    ch = pair_chain(base, S.atom_in(X, Y))
    return Params(dxy, dxz, ch.p0, ch.p1, real_eq=True, name="l3")


@lru_cache(maxsize=None)
def l3_chain() -> ChainParts:
    dxy, dxz = S.atom_eq(X, Y), S.atom_eq(X, Z)
    return pair_chain(Params(dxy, dxz, dxy, dxy, real_eq=True, name="l3-base"), S.atom_in(X, Y))


# ---------------------------------------------------------------------------
# pairing statements over in / =

def close3(f: S.Formula) -> S.Formula:
    """``Ax Ay Az f``."""
    return S.forall_many(S.VAR3, f)


@lru_cache(maxsize=None)
def pi() -> S.Formula:
    return close3(PC.build_ax(l3_params()))


@lru_cache(maxsize=None)
def pi_plus_parts() -> dict:
    prm = l3_params()
    p0, p1 = prm.p0, prm.p1
    sub = lambda f, u, v: PC.subst2(prm, f, u, v)  # noqa: E731
    inj = S.forall_many([X, Y], imp(
        conj(exists(Z, conj(sub(p0, X, Z), sub(p0, Y, Z))),
             exists(Z, conj(sub(p1, X, Z), sub(p1, Y, Z)))),
        S.atom_eq(X, Y)))
    aligned = forall(X, iff(exists(Y, p0), exists(Y, p1)))
    nontrivial = S.exists_many([X, Y], neg(S.atom_eq(X, Y)))
    return {"pi": pi(), "injective": inj, "aligned": aligned, "nontrivial": nontrivial}


@lru_cache(maxsize=None)
def pi_plus() -> S.Formula:
    return big_conj(list(pi_plus_parts().values()))


# ---------------------------------------------------------------------------
# bridges

@dataclass(frozen=True)
class Bridge:
    delta: S.Formula
    delta_prime: S.Formula


def _xyz_equal():
    return conj(S.atom_eq(X, Y), S.atom_eq(Y, Z))


@lru_cache(maxsize=None)
def bridge() -> Bridge:
    P = S.atom_p()
    delta = close3(iff(P, disj(_xyz_equal(), S.atom_in(X, Y))))
    ez = forall(Z, P)
    delta_prime = close3(conj(iff(S.atom_in(X, Y), ez), iff(_xyz_equal(), conj(P, neg(ez)))))
    return Bridge(delta, delta_prime)


@dataclass
class BridgeReport:
    n: int
    models: int
    failures: int
    exhaustive: bool
    countermodel: object = None

    @property
    def ok(self) -> bool:
        return self.failures == 0


def check_bridge_equiv(n: int, sample: int | None = None, seed: int = 0) -> BridgeReport:
    """Check ``Delta <-> Delta'`` over ``{P, in}``-models of size ``n``.

    Exhaustive unless ``sample`` is given (or ``n = 3``, where the model
    space is too large and 10^4 random models are drawn).
    """
    from .semantics.engine import Engine
    from .semantics.models import (Model, SizeTooLarge, iter_model_arrays,
                                   random_model_arrays)

    if n > 3:
        raise SizeTooLarge("bridge check supports n <= 3")
    if n < 2:
        return BridgeReport(n, 0, 0, True)
    br = bridge()
    goal = iff(br.delta, br.delta_prime)
    if n == 3 and sample is None:
        sample = 10_000
    batches = []
    if sample is None:
        batches = iter_model_arrays(n, "P+in", chunk=4096)
    else:
        rng = np.random.default_rng(seed)
        batches = [random_model_arrays(rng, n, sample, "P+in")]
    total = fails = 0
    first = None
    for P, In in batches:
        ok = Engine(n, P=P, In=In).valid(goal)
        total += len(ok)
        bad = np.flatnonzero(~ok)
        fails += len(bad)
        if first is None and len(bad):
            first = Model.from_arrays(P[bad[0]], In[bad[0]])
    return BridgeReport(n, total, fails, sample is None, first)


# ---------------------------------------------------------------------------
# h' and h

IOTA = {X: 0, Y: 1, Z: 2}


@lru_cache(maxsize=None)
def h_prime_in() -> S.Formula:
    """Image of ``in(x,y)``: ``E<x_{1(0)}, x_{1(1)}>``."""
    prm = default_params()
    i, j = "1" + PC.COORD[0], "1" + PC.COORD[1]
    return exists(Y, exists(Z, big_conj([
        PC.proj_eq(prm, Y, "", X, i),
        PC.proj_eq(prm, Z, "", X, j),
        PC.subst2(prm, e_formula(), Y, Z),
    ])))


_hp_memo: dict = {}


def h_prime(f: S.Formula) -> S.Formula:
    """Homomorphic image of an L3 formula among the cylindric operations."""
    if f.lang != S.L3:
        raise S.LanguageViolation(f"h' takes L3 formulas, got {f.lang}")
    prm = default_params()
    memo = _hp_memo
    if f in memo:
        return memo[f]
    for nd in S.nodes(f):
        if nd in memo:
            continue
        k = nd.kind
        if k == S.ATOM_IN:
            out = h_prime_in()
        elif k == S.ATOM_EQ:
            out = PC.diag(prm, IOTA[nd.a], IOTA[nd.b])
        elif k == S.NOT:
            out = PC.ca_neg(prm, memo[nd.a])
        elif k == S.OR:
            out = PC.ra_plus(memo[nd.a], memo[nd.b])
        elif k == S.EX:
            out = PC.cyl(prm, IOTA[nd.a], memo[nd.b])
        else:
            raise S.LanguageViolation(f"{k} does not occur in L3")
        memo[nd] = out
    return memo[f]


@lru_cache(maxsize=None)
def sax_closed() -> S.Formula:
    return close3(PC.build_sax(default_params()))


@lru_cache(maxsize=None)
def sax_star() -> S.Formula:
    prm = default_params()
    return conj(sax_closed(), forall(X, imp(PC.triplet_at(prm, "1"), h_prime(pi_plus()))))


def h(f: S.Formula, close: bool = True) -> S.Formula:
    """``Ax([SAx* & Triplet x_1] -> h'(f))`` for an L3 sentence ``f``."""
    if f.lang != S.L3:
        raise S.LanguageViolation(f"h takes L3 formulas, got {f.lang}")
    if S.free_vars(f):
        if not close:
            raise NotASentence(f"free variables {sorted(S.free_vars(f))}")
        f = S.universal_closure(f)
    prm = default_params()
    return forall(X, imp(conj(sax_star(), PC.triplet_at(prm, "1")), h_prime(f)))


# ---------------------------------------------------------------------------
# reduce_f: FOL to L3

def fol_closure(f: S.Formula) -> S.Formula:
    """``Av0 ... Avn f`` where ``v0..vn`` is the shortest prefix covering the
    free variables; sentences are returned unchanged."""
    fv = S.free_vars(f)
    if not fv:
        return f
    n = max(S.fol_index(v) for v in fv)
    return S.forall_many([S.folvar(i) for i in range(n + 1)], f)


def width(f: S.Formula) -> int:
    """Largest number of free variables of any subformula."""
    return max(bin(nd.fv).count("1") for nd in S.nodes(f))


def _in3(u: str, v: str) -> S.Formula:
    return PC.subst2(l3_params(), S.atom_in(X, Y), u, v)


def _rename(g: S.Formula, sigma: dict, greedy: bool) -> S.Formula:
    """Translate a FOL formula into L3 by renaming variables.

    ``sigma`` maps the free variables of ``g`` injectively into ``x, y, z``.
    In greedy mode each quantifier picks the first name not used by the
    other free variables of its body.
    """
    memo: dict = {}

    def go(nd, sig):
        key = (nd, tuple(sorted((v, sig[v]) for v in S.free_vars(nd))))
        hit = memo.get(key)
        if hit is not None:
            return hit
        k = nd.kind
        if k == S.ATOM_IN:
            out = _in3(sig[nd.a], sig[nd.b])
        elif k == S.ATOM_EQ:
            out = S.atom_eq(sig[nd.a], sig[nd.b])
        elif k == S.NOT:
            out = neg(go(nd.a, sig))
        elif k == S.OR:
            out = disj(go(nd.a, sig), go(nd.b, sig))
        elif k == S.EX:
            v = nd.a
            if greedy and v not in S.free_vars(nd.b):
                # vacuous over nonempty domains; three names may all be taken
                memo[key] = out = go(nd.b, sig)
                return out
            if greedy:
                taken = {sig[w] for w in S.free_vars(nd.b) if w != v}
                name = next(n for n in S.VAR3 if n not in taken)
            else:
                name = sig[v]
            sig2 = dict(sig)
            sig2[v] = name
            out = exists(name, go(nd.b, sig2))
        else:
            raise S.LanguageViolation(f"{k} does not occur in FOL")
        memo[key] = out
        return out

    return S._with_stack(lambda: go(g, sigma))


def _path(i: int, m: int) -> str:
    return "1" * i + "0" if i < m else "1" * m


def _seq(prm: Params, u: str, m: int) -> S.Formula:
    return big_conj([PC.defined(prm, u, _path(i, m)) for i in range(m + 1)])


def _register_translation(s: S.Formula) -> S.Formula:
    """Variable elimination through a sequence register.

    The values of ``v_a0 .. v_am`` are read off one element ``x`` coding the
    nested pair ``<c0,<c1,...,<c_{m-1},c_m>>>``; quantifying a variable moves
    to another register that agrees on all other components.
    """
    prm = l3_params()
    vs = sorted(S.all_vars(s), key=S.var_sort_key)
    m = len(vs) - 1
    pos = {v: _path(i, m) for i, v in enumerate(vs)}
    seq_x, seq_y = _seq(prm, X, m), _seq(prm, Y, m)
    in_yz = _in3(Y, Z)
    memo: dict = {}
    for nd in S.nodes(s):
        k = nd.kind
        if k == S.ATOM_IN:
            out = exists(Y, exists(Z, big_conj([
                PC.proj_eq(prm, Y, "", X, pos[nd.a]),
                PC.proj_eq(prm, Z, "", X, pos[nd.b]),
                in_yz])))
        elif k == S.ATOM_EQ:
            out = PC.proj_eq(prm, X, pos[nd.a], X, pos[nd.b])
        elif k == S.NOT:
            out = neg(memo[nd.a])
        elif k == S.OR:
            out = disj(memo[nd.a], memo[nd.b])
        elif k == S.EX:
            keep = [PC.proj_eq(prm, X, pos[w], Y, pos[w]) for w in vs if w != nd.a]
            out = exists(Y, big_conj([seq_y] + keep
                                     + [exists(X, conj(S.atom_eq(X, Y), memo[nd.b]))]))
        else:
            raise S.LanguageViolation(f"{k} does not occur in FOL")
        memo[nd] = out
    return exists(X, conj(seq_x, memo[s]))


def reduce_path(s: S.Formula) -> str:
    """Which scheme the base case uses: ``rename``, ``width3`` or ``register``."""
    vs = S.all_vars(s)
    if len(vs) <= 3:
        return "rename"
    if width(s) <= 3:
        return "width3"
    return "register"


def _reduce_base(s: S.Formula) -> S.Formula:
    path = reduce_path(s)
    if path == "rename":
        vs = sorted(S.all_vars(s), key=S.var_sort_key)
        return _rename(s, dict(zip(vs, S.VAR3)), greedy=False)
    if path == "width3":
        return _rename(s, {}, greedy=True)
    return _register_translation(s)


def reduce_f(f: S.Formula) -> S.Formula:
    """FOL (over ``in``, ``=``) to an L3 sentence.

    The closure is split along negation and disjunction, so ``reduce_f``
    commutes with both on sentences; each remaining existential sentence is
    translated by renaming when three names suffice and through a sequence
    register otherwise.
    """
    if f.lang != S.FOL:
        raise S.LanguageViolation(f"reduce_f takes FOL formulas, got {f.lang}")
    s = fol_closure(f)
    memo: dict = {}
    for nd in S.nodes(s):
        if nd.fv:
            continue
        k = nd.kind
        if k == S.NOT:
            memo[nd] = neg(memo[nd.a])
        elif k == S.OR:
            memo[nd] = disj(memo[nd.a], memo[nd.b])
        elif k == S.EX:
            memo[nd] = _reduce_base(nd)
        else:
            raise UnsupportedFormula(f"unexpected closed {k} node")
    return memo[s]


# ---------------------------------------------------------------------------
# Tr

@dataclass
class TranslationReport:
    input: S.Formula
    output: S.Formula
    node_count_shared: int
    node_count_tree: int
    depth: int
    elapsed: float
    extra: dict = field(default_factory=dict)

    def to_dict(self, output_file: str | None = None) -> dict:
        text_in = S.render(self.input)
        return {"input": text_in, "output_file": output_file,
                "nodes_shared": self.node_count_shared,
                "nodes_tree": str(self.node_count_tree),
                "depth": self.depth, "millis": round(self.elapsed * 1000, 3),
                **self.extra}


def report_for(inp, out, t0, stats: bool = True, **extra) -> TranslationReport:
    elapsed = time.perf_counter() - t0
    shared, tree, dep = S.dag_stats(out) if stats else (-1, -1, -1)
    return TranslationReport(inp, out, shared, tree, dep, elapsed, extra)


def tr(f: S.Formula, stats: bool = True) -> tuple[S.Formula, TranslationReport]:
    """``h(reduce_f(f))``.  Size statistics walk the whole output DAG, which
    costs seconds on real outputs; pass ``stats=False`` to skip them."""
    t0 = time.perf_counter()
    mid = reduce_f(f)
    out = h(mid)
    extra = {"intermediate_nodes": S.shared_size(mid)} if stats else {}
    return out, report_for(f, out, t0, stats, **extra)


# ---------------------------------------------------------------------------
# other presentations

_MOD = {X: 1, Y: 2, Z: 3}
_MOD_INV = {v: k for k, v in _MOD.items()}
_CYL = {X: "f", Y: "g", Z: "h"}
_CYL_INV = {"cf": X, "cg": Y, "ch": Z}


def _need(f, lang):
    if f.lang != lang:
        raise S.LanguageViolation(f"expected a {lang} formula, got {f.lang}")


def fmd3_to_modal(f: S.Formula) -> S.Formula:
    _need(f, S.FMD3)
    memo: dict = {}
    for nd in S.nodes(f):
        k = nd.kind
        if k == S.ATOM_P:
            memo[nd] = S.prop_p()
        elif k == S.NOT:
            memo[nd] = neg(memo[nd.a])
        elif k == S.OR:
            memo[nd] = disj(memo[nd.a], memo[nd.b])
        else:
            memo[nd] = S.diamond(_MOD[nd.a], memo[nd.b])
    return memo[f]


def modal_to_fmd3(f: S.Formula) -> S.Formula:
    _need(f, S.MODAL)
    memo: dict = {}
    for nd in S.nodes(f):
        k = nd.kind
        if k == S.ATOM_PROP:
            memo[nd] = S.atom_p()
        elif k == S.NOT:
            memo[nd] = neg(memo[nd.a])
        elif k == S.OR:
            memo[nd] = disj(memo[nd.a], memo[nd.b])
        else:
            memo[nd] = exists(_MOD_INV[nd.a], memo[nd.b])
    return memo[f]


def fmd3_to_equation(f: S.Formula) -> S.Term:
    _need(f, S.FMD3)
    memo: dict = {}
    for nd in S.nodes(f):
        k = nd.kind
        if k == S.ATOM_P:
            memo[nd] = S.tvar(0)
        elif k == S.NOT:
            memo[nd] = S.tminus(memo[nd.a])
        elif k == S.OR:
            memo[nd] = S.tplus(memo[nd.a], memo[nd.b])
        else:
            memo[nd] = S.tcyl(_CYL[nd.a], memo[nd.b])
    return memo[f]


def equation_to_fmd3(t: S.Term) -> S.Formula:
    """Inverse of :func:`fmd3_to_equation` on terms over the variable ``X0``."""
    memo: dict = {}
    for nd in S.nodes(t):
        k = nd.kind
        if k == S.TVAR:
            if nd.a != 0:
                raise S.LanguageViolation("only X0 corresponds to P(x,y,z)")
            memo[nd] = S.atom_p()
        elif k == S.MINUS:
            memo[nd] = neg(memo[nd.a])
        elif k == S.PLUS:
            memo[nd] = disj(memo[nd.a], memo[nd.b])
        else:
            memo[nd] = exists(_CYL_INV[k], memo[nd.a])
    return memo[t]


# ---------------------------------------------------------------------------
# demo corpus

ZF_TEXT = {
    "extensionality": "Av0 v1. ((Av2. (in(v2,v0) <-> in(v2,v1))) -> v0=v1)",
    "empty_set": "Ev0. Av1. ~in(v1,v0)",
    "pairing": "Av0 v1. Ev2. (in(v0,v2) & in(v1,v2))",
    "union": "Av0. Ev1. Av2 v3. ((in(v3,v2) & in(v2,v0)) -> in(v3,v1))",
    "power_set": "Av0. Ev1. Av2. ((Av3. (in(v3,v2) -> in(v3,v0))) -> in(v2,v1))",
    "foundation": "Av0. ((Ev1. in(v1,v0)) -> Ev1. (in(v1,v0) & ~Ev2. (in(v2,v1) & in(v2,v0))))",
    "separation_instance": "Av0. Ev1. Av2. (in(v2,v1) <-> (in(v2,v0) & ~in(v2,v2)))",
    "infinity": ("Ev0. ((Ev1. (in(v1,v0) & Av2. ~in(v2,v1))) & "
                 "Av1. (in(v1,v0) -> Ev2. (in(v2,v0) & Av3. (in(v3,v2) <-> (in(v3,v1) | v3=v1)))))"),
    "replacement_instance": ("Av0. Ev1. Av3. (in(v3,v1) <-> "
                             "Ev2. (in(v2,v0) & Av4. (in(v4,v3) <-> v4=v2)))"),
    "choice": ("Av0. (((Av1. (in(v1,v0) -> Ev2. in(v2,v1))) & "
               "(Av1 v2. ((in(v1,v0) & in(v2,v0) & ~v1=v2) -> ~Ev3. (in(v3,v1) & in(v3,v2))))) -> "
               "Ev4. Av1. (in(v1,v0) -> Ev2. (in(v2,v1) & in(v2,v4) & "
               "Av3. ((in(v3,v1) & in(v3,v4)) -> v3=v2))))"),
}


def zf_corpus() -> list[tuple[str, S.Formula]]:
    return [(k, S.parse(S.FOL, v)) for k, v in ZF_TEXT.items()]
