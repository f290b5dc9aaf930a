"""Simulated equality, substitution and projections; pairing axioms; the
relation-algebra and cylindric operations on one-free-variable formulas.

Everything is parametric in four formulas ``delta_xy``, ``delta_xz``,
``p0``, ``p1``.  The same builders serve two instantiations: the
equality-free one over ``P`` and its mirror over ``in``/``=``, where the
simulated equalities are replaced by real ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import syntax as S
from .syntax import big_conj, conj, disj, exists, iff, imp, neg

X, Y, Z = "x", "y", "z"
VARS = S.VAR3


class FreeVarViolation(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


def _need_fv(f: S.Formula, allowed: set, what: str):
    extra = S.free_vars(f) - set(allowed)
    if extra:
        raise FreeVarViolation(f"{what}: unexpected free variables {sorted(extra)}")


def third(u: str, v: str) -> str:
    (w,) = set(VARS) - {u, v}
    return w


# ---------------------------------------------------------------------------
# parameters

@dataclass(frozen=True, eq=False)
class Params:
    """The four parameter formulas.

    With ``real_eq`` the simulated equalities ``e_uv`` are the atoms
    ``u=v`` themselves (the mirror over ``in``/``=``).
    """

    delta_xy: S.Formula
    delta_xz: S.Formula
    p0: S.Formula
    p1: S.Formula
    real_eq: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        _need_fv(self.delta_xy, {X, Y}, "delta_xy")
        _need_fv(self.delta_xz, {X, Z}, "delta_xz")
        _need_fv(self.p0, {X, Y}, "p0")
        _need_fv(self.p1, {X, Y}, "p1")

    @property
    def true(self) -> S.Formula:
        return disj(self.delta_xy, neg(self.delta_xy))


# builders are memoised per (params, arguments); Params compares by identity
_memo: dict = {}


def _cached(tag, prm, *args):
    return _memo.get((tag, id(prm)) + args)


def _store(tag, prm, args, value):
    _memo[(tag, id(prm)) + args] = value
    _keep_alive.add(prm)
    return value


_keep_alive: set = set()


def clear_caches():
    _memo.clear()
    _keep_alive.clear()


# ---------------------------------------------------------------------------
# simulated equality and substitution

def eq_formula(prm: Params, u: str, v: str) -> S.Formula:
    """``e_uv``."""
    if prm.real_eq:
        return S.atom_eq(u, v)
    if u == v:
        return prm.true
    pair = frozenset((u, v))
    if pair == {X, Y}:
        return prm.delta_xy
    if pair == {X, Z}:
        return prm.delta_xz
    hit = _cached("e", prm, Y, Z)
    if hit is None:
        hit = _store("e", prm, (Y, Z), exists(X, conj(prm.delta_xy, prm.delta_xz)))
    return hit


def subst2(prm: Params, f: S.Formula, u: str, v: str) -> S.Formula:
    """``f<u,v>``: ``f`` with ``x, y`` simultaneously replaced by ``u, v``."""
    if u not in VARS or v not in VARS:
        raise S.LanguageViolation(f"bad substitution target ({u},{v})")
    _need_fv(f, {X, Y}, "subst2")
    key = (f, u, v)
    hit = _cached("s", prm, *key)
    if hit is not None:
        return hit
    e = lambda a, b: eq_formula(prm, a, b)  # noqa: E731
    if (u, v) == (X, Y):
        out = f
    elif (u, v) == (X, Z):
        out = exists(Y, conj(e(Y, Z), f))
    elif (u, v) == (Y, Z):
        out = exists(X, conj(e(X, Y), subst2(prm, f, X, Z)))
    elif (u, v) == (Y, X):
        out = exists(Z, conj(e(X, Z), subst2(prm, f, Y, Z)))
    elif (u, v) == (Z, X):
        out = exists(Y, conj(e(Y, Z), subst2(prm, f, Y, X)))
    elif (u, v) == (Z, Y):
        out = exists(X, conj(e(X, Z), f))
    elif (u, v) == (X, X):
        out = exists(Y, conj(e(X, Y), f))
    elif (u, v) == (Y, Y):
        out = exists(X, conj(e(X, Y), f))
    else:  # (z, z)
        out = exists(X, conj(e(X, Z), subst2(prm, f, X, X)))
    return _store("s", prm, key, out)


# ---------------------------------------------------------------------------
# projections

def index_str(i) -> str:
    if isinstance(i, str):
        if i in ("", "e", "eps", "ε"):
            return ""
        if set(i) <= {"0", "1"}:
            return i
    elif isinstance(i, (tuple, list)):
        if all(b in (0, 1) for b in i):
            return "".join(map(str, i))
    raise ValueError(f"not an index over {{0,1}}: {i!r}")


H: tuple = tuple(
    "".join(bits) for n in range(4) for bits in itertools.product("01", repeat=n))


def proj_eq(prm: Params, u: str, i, v: str, j) -> S.Formula:
    """``(u_i =. v_j)``: the ``i``-th projection of ``u`` equals the ``j``-th of ``v``."""
    i, j = index_str(i), index_str(j)
    key = (u, i, v, j)
    hit = _cached("p", prm, *key)
    if hit is not None:
        return hit
    out = _proj(prm, u, i, v, j)
    return _store("p", prm, key, out)


def _proj(prm, u, i, v, j):
    if u == v:
        if u == X:
            return exists(Y, conj(eq_formula(prm, X, Y), proj_eq(prm, X, i, Y, j)))
        if u == Y:
            return exists(X, conj(eq_formula(prm, X, Y), proj_eq(prm, X, i, Y, j)))
        return exists(X, conj(proj_eq(prm, Z, i, X, ""), proj_eq(prm, Z, j, X, "")))
    w = third(u, v)
    if j == "":
        if i == "":
            return eq_formula(prm, u, v)
        if len(i) == 1:
            return subst2(prm, prm.p0 if i == "0" else prm.p1, u, v)
        k = i[-1]
        pk = prm.p0 if k == "0" else prm.p1
        return exists(w, conj(proj_eq(prm, u, i[:-1], w, ""), subst2(prm, pk, w, v)))
    return exists(w, conj(proj_eq(prm, u, i, w, ""), proj_eq(prm, v, j, w, "")))


def defined(prm: Params, u: str, i) -> S.Formula:
    """``u_i =. u_i``: the projection path ``i`` is defined at ``u``."""
    return proj_eq(prm, u, i, u, i)


# ---------------------------------------------------------------------------
# pairing axioms

@dataclass
class AxiomBuild:
    formula: S.Formula
    families: dict  # family name -> list of conjuncts in order

    @property
    def counts(self) -> dict:
        return {k: len(v) for k, v in self.families.items()}

    def conjuncts(self) -> list:
        return [c for fam in self.families.values() for c in fam]


def _family_a1(prm):
    out = []
    for u, v, w in itertools.product(VARS, repeat=3):
        for i, j, k in itertools.product(H, repeat=3):
            out.append(imp(conj(proj_eq(prm, u, i, v, j), proj_eq(prm, v, j, w, k)),
                           proj_eq(prm, u, i, w, k)))
    return out


def _family_a2(prm):
    out = []
    short = [h for h in H if len(h) <= 2]
    for u, v in itertools.product(VARS, repeat=2):
        for i, j in itertools.product(short, repeat=2):
            for k in "01":
                ik, jk = i + k, j + k
                out.append(imp(conj(proj_eq(prm, u, i, v, j), defined(prm, u, ik)),
                               proj_eq(prm, u, ik, v, jk)))
    return out


def _family_a3(prm):
    out = []
    for u, v, w in itertools.product(VARS, repeat=3):
        if w in (u, v):
            continue
        for i, j in itertools.product(H, repeat=2):
            out.append(imp(conj(defined(prm, u, i), defined(prm, v, j)),
                           exists(w, conj(proj_eq(prm, w, "0", u, i),
                                          proj_eq(prm, w, "1", v, j)))))
    return out


def _family_a4(prm):
    return [exists(w, proj_eq(prm, u, "", w, "")) for u, w in itertools.product(VARS, repeat=2)]


def _family_a5(prm):
    return [
        imp(conj(proj_eq(prm, X, "0", Y, "0"), proj_eq(prm, X, "1", Y, "1")),
            proj_eq(prm, X, "", Y, "")),
        iff(defined(prm, X, "0"), defined(prm, X, "1")),
    ]


def _build(prm: Params, strong: bool) -> AxiomBuild:
    key = ("SAx" if strong else "Ax",)
    hit = _cached("ax", prm, *key)
    if hit is not None:
        return hit
    fams = {"A1": _family_a1(prm), "A2": _family_a2(prm),
            "A3": _family_a3(prm), "A4": _family_a4(prm)}
    if strong:
        fams["A5"] = _family_a5(prm)
    allc = [c for fam in fams.values() for c in fam]
    return _store("ax", prm, key, AxiomBuild(big_conj(allc), fams))


def build_ax(prm: Params) -> S.Formula:
    return _build(prm, False).formula


def build_sax(prm: Params) -> S.Formula:
    return _build(prm, True).formula


def ax_build(prm: Params, strong: bool = False) -> AxiomBuild:
    return _build(prm, strong)


# ---------------------------------------------------------------------------
# relation-algebra reduct

RA_OPS = ("PAIR", "AT", "COMP", "CONV", "ID", "NEG", "PLUS")


@dataclass(frozen=True)
class DraElement:
    """A formula produced by COMP/CONV/ID together with its construction."""

    formula: S.Formula
    op: str
    args: tuple = ()

    @property
    def certificate(self):
        return (self.op, self.args)


def pair_formula(prm: Params) -> S.Formula:
    return conj(exists(Y, prm.p0), exists(Y, prm.p1))


def at(prm: Params, f: S.Formula, u: str, i="") -> S.Formula:
    """``f u_i``: ``f`` evaluated at the ``i``-th projection of ``u``."""
    i = index_str(i)
    _need_fv(f, {X}, "at")
    if u in (Y, Z):
        return exists(X, conj(proj_eq(prm, X, "", u, i), f))
    if u == X:
        return exists(Y, conj(proj_eq(prm, Y, "", X, i), at(prm, f, Y, "")))
    raise S.LanguageViolation(f"bad variable {u!r}")


def _formula(a):
    return a.formula if isinstance(a, DraElement) else a


def comp(prm: Params, f, g) -> DraElement:
    f, g = _formula(f), _formula(g)
    _need_fv(f, {X}, "COMP")
    _need_fv(g, {X}, "COMP")
    body = big_conj([
        at(prm, f, Y, "0"),
        at(prm, g, Y, "1"),
        proj_eq(prm, X, "0", Y, "00"),
        proj_eq(prm, Y, "01", Y, "10"),
        proj_eq(prm, Y, "11", X, "1"),
    ])
    return DraElement(exists(Y, body), "COMP", (f, g))


def conv(prm: Params, f) -> DraElement:
    f = _formula(f)
    _need_fv(f, {X}, "CONV")
    body = big_conj([at(prm, f, Y, ""), proj_eq(prm, Y, "0", X, "1"), proj_eq(prm, Y, "1", X, "0")])
    return DraElement(exists(Y, body), "CONV", (f,))


def ident(prm: Params) -> DraElement:
    return DraElement(proj_eq(prm, X, "0", X, "1"), "ID", ())


def ra_neg(prm: Params, f) -> S.Formula:
    f = _formula(f)
    _need_fv(f, {X}, "NEG")
    return conj(pair_formula(prm), neg(f))


def ra_plus(f, g) -> S.Formula:
    f, g = _formula(f), _formula(g)
    _need_fv(f, {X}, "PLUS")
    _need_fv(g, {X}, "PLUS")
    return disj(f, g)


_RA_ARITY = {"PAIR": 0, "COMP": 2, "CONV": 1, "ID": 0, "NEG": 1, "PLUS": 2}


def ra_apply(prm: Params, op: str, args: Sequence = (), u: str | None = None, i=""):
    """Dispatch on the operation tag.  ``AT`` takes ``u`` and ``i``."""
    op = op.upper()
    if op == "AT":
        if len(args) != 1 or u is None:
            raise ArityMismatch("AT takes one formula plus a variable and an index")
        return at(prm, _formula(args[0]), u, i)
    if op not in _RA_ARITY:
        raise ValueError(f"unknown relation-algebra operation {op!r}")
    if len(args) != _RA_ARITY[op]:
        raise ArityMismatch(f"{op} takes {_RA_ARITY[op]} arguments, got {len(args)}")
    if op == "PAIR":
        return pair_formula(prm)
    if op == "COMP":
        return comp(prm, *args)
    if op == "CONV":
        return conv(prm, *args)
    if op == "ID":
        return ident(prm)
    if op == "NEG":
        return ra_neg(prm, *args)
    return ra_plus(*args)


# ---------------------------------------------------------------------------
# cylindric reduct

COORD = {0: "0", 1: "10", 2: "11"}


def triplet(prm: Params) -> S.Formula:
    return defined(prm, X, "11")


def triplet_at(prm: Params, i) -> S.Formula:
    """``Triplet x_i``."""
    return at(prm, triplet(prm), X, i)


def t_rel(prm: Params, i: int) -> S.Formula:
    hit = _cached("T", prm, i)
    if hit is not None:
        return hit
    parts = [triplet_at(prm, "0"), triplet_at(prm, "1")]
    for j in range(3):
        if j != i:
            parts.append(proj_eq(prm, X, "0" + COORD[j], X, "1" + COORD[j]))
    return _store("T", prm, (i,), big_conj(parts))


def cyl(prm: Params, i: int, f) -> S.Formula:
    return comp(prm, _formula(f), t_rel(prm, i)).formula


def diag(prm: Params, i: int, j: int) -> S.Formula:
    return conj(triplet_at(prm, "1"), proj_eq(prm, X, "1" + COORD[i], X, "1" + COORD[j]))


def ca_neg(prm: Params, f) -> S.Formula:
    f = _formula(f)
    _need_fv(f, {X}, "CNEG")
    return conj(triplet_at(prm, "1"), neg(f))


def ca_apply(prm: Params, op: str, args: Sequence = (), i: int | None = None, j: int | None = None):
    op = op.upper()
    if op == "TRIPLET":
        return triplet(prm)
    if op == "T":
        return t_rel(prm, _coord(i))
    if op == "C":
        if len(args) != 1:
            raise ArityMismatch("C takes one formula")
        return cyl(prm, _coord(i), args[0])
    if op == "D":
        return diag(prm, _coord(i), _coord(j))
    if op == "CNEG":
        if len(args) != 1:
            raise ArityMismatch("CNEG takes one formula")
        return ca_neg(prm, args[0])
    if op == "PLUS":
        if len(args) != 2:
            raise ArityMismatch("PLUS takes two formulas")
        return ra_plus(*args)
    raise ValueError(f"unknown cylindric operation {op!r}")


def _coord(i):
    if i not in (0, 1, 2):
        raise ValueError(f"coordinate must be 0, 1 or 2, got {i!r}")
    return i
