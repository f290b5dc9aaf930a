"""Finite relational models, enumeration, and the reference evaluator."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .. import syntax as S
from .engine import Engine, MissingRelation, PartialAssignment, variables_of


class SizeTooLarge(ValueError):
    pass


SIG_P = "P"
SIG_IN = "in"
SIG_BOTH = "P+in"


def _norm_sig(sig) -> str:
    if isinstance(sig, str):
        s = sig.replace(" ", "").lower()
        if s in ("p",):
            return SIG_P
        if s in ("in", "∈"):
            return SIG_IN
        if s in ("p+in", "in+p", "{p,in}", "both", "p,in"):
            return SIG_BOTH
    else:
        s = {str(x).lower() for x in sig}
        if s == {"p"}:
            return SIG_P
        if s in ({"in"}, {"∈"}):
            return SIG_IN
        if s == {"p", "in"}:
            return SIG_BOTH
    raise ValueError(f"unknown signature {sig!r}")


@dataclass(frozen=True)
class Model:
    """Universe ``{0..n-1}`` with an optional ternary ``P`` and binary ``In``."""

    universe_size: int
    P: frozenset | None = None
    In: frozenset | None = None

    def __post_init__(self):
        n = self.universe_size
        if n < 1:
            raise ValueError("universe must be non-empty")
        if self.P is None and self.In is None:
            raise MissingRelation("a model needs at least one relation")
        for rel, ar in ((self.P, 3), (self.In, 2)):
            if rel is None:
                continue
            for t in rel:
                if len(t) != ar or any(not 0 <= e < n for e in t):
                    raise ValueError(f"bad tuple {t} for universe of size {n}")

    @property
    def n(self):
        return self.universe_size

    def p_array(self):
        a = np.zeros((self.n,) * 3, dtype=bool)
        for t in self.P or ():
            a[t] = True
        return a

    def in_array(self):
        a = np.zeros((self.n,) * 2, dtype=bool)
        for t in self.In or ():
            a[t] = True
        return a

    def to_json(self) -> str:
        d = {"universe": self.n}
        if self.P is not None:
            d["P"] = sorted(list(t) for t in self.P)
        if self.In is not None:
            d["in"] = sorted(list(t) for t in self.In)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Model":
        d = json.loads(text)
        P = d.get("P")
        In = d.get("in")
        return cls(int(d["universe"]),
                   None if P is None else frozenset(tuple(t) for t in P),
                   None if In is None else frozenset(tuple(t) for t in In))

    @classmethod
    def from_arrays(cls, P=None, In=None) -> "Model":
        n = (P if P is not None else In).shape[0]
        return cls(n,
                   None if P is None else frozenset(map(tuple, np.argwhere(P).tolist())),
                   None if In is None else frozenset(map(tuple, np.argwhere(In).tolist())))


def delta_induced_p(In):
    """``P(a,b,c)`` iff ``a=b=c`` or ``a in b``; works on ``(n,n)`` or batched ``(B,n,n)``."""
    In = np.asarray(In, dtype=bool)
    n = In.shape[-1]
    diag = np.zeros((n, n, n), dtype=bool)
    r = np.arange(n)
    diag[r, r, r] = True
    return In[..., :, :, None] | diag


def with_delta(m: Model) -> Model:
    """Expand a membership model with the ``P`` that the bridge defines."""
    P = delta_induced_p(m.in_array())
    return Model.from_arrays(P=P, In=m.in_array())


# --------------------------------------------------------------------------
# enumeration

def _bits_to_arrays(codes, n, arity):
    cells = n ** arity
    codes = np.asarray(codes, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(cells, dtype=np.int64)) & 1
    return bits.astype(bool).reshape((len(codes),) + (n,) * arity)


_LIMITS = {SIG_P: 3, SIG_IN: 5, SIG_BOTH: 3}


def count_models(n: int, signature) -> int:
    sig = _norm_sig(signature)
    k = {SIG_P: n ** 3, SIG_IN: n ** 2, SIG_BOTH: n ** 3 + n ** 2}[sig]
    return 2 ** k


def enumerate_models(n: int, signature) -> Iterator[Model]:
    """Every interpretation over ``{0..n-1}``, each once, in a fixed order.

    The order is by integer code: bit ``k`` of the code is the ``k``-th tuple
    in row-major order; for ``P+in`` the ``P`` code varies slowest.
    """
    sig = _norm_sig(signature)
    if n < 1 or n > _LIMITS[sig]:
        raise SizeTooLarge(f"exhaustive enumeration for {sig} supports 1 <= n <= {_LIMITS[sig]}")
    for P, In in iter_model_arrays(n, sig, chunk=1):
        yield Model.from_arrays(None if P is None else P[0], None if In is None else In[0])


def iter_model_arrays(n: int, signature, chunk: int = 4096):
    """Stream batches ``(P, In)`` of stacked arrays in enumeration order."""
    sig = _norm_sig(signature)
    if n < 1 or n > _LIMITS[sig]:
        raise SizeTooLarge(f"exhaustive enumeration for {sig} supports 1 <= n <= {_LIMITS[sig]}")
    np_ = 2 ** (n ** 3) if sig != SIG_IN else 1
    ni = 2 ** (n ** 2) if sig != SIG_P else 1
    total = np_ * ni
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        pc, ic = codes // ni, codes % ni
        P = _bits_to_arrays(pc, n, 3) if sig != SIG_IN else None
        In = _bits_to_arrays(ic, n, 2) if sig != SIG_P else None
        yield P, In


def all_model_arrays(n: int, signature):
    """All models of size ``n`` as one batch."""
    Ps, Ins = [], []
    for P, In in iter_model_arrays(n, signature, chunk=1 << 16):
        Ps.append(P)
        Ins.append(In)
    P = None if Ps[0] is None else np.concatenate(Ps)
    In = None if Ins[0] is None else np.concatenate(Ins)
    return P, In


def random_model_arrays(rng: np.random.Generator, n: int, count: int, signature,
                        density: float | None = None):
    """``count`` random models of size ``n``.  Density defaults to a fresh
    uniform draw per model so sparse and dense relations both show up."""
    sig = _norm_sig(signature)
    if density is None:
        dens = rng.random(count)
    else:
        dens = np.full(count, density)
    P = In = None
    if sig != SIG_IN:
        P = rng.random((count, n, n, n)) < dens[:, None, None, None]
    if sig != SIG_P:
        In = rng.random((count, n, n)) < dens[:, None, None]
    return P, In


def irreflexive_in_arrays(n: int):
    """All membership relations on ``n`` points without loops ``a in a``."""
    _, In = all_model_arrays(n, SIG_IN)
    keep = ~In[:, np.arange(n), np.arange(n)].any(axis=1)
    return In[keep]


# --------------------------------------------------------------------------
# single-model evaluation

def _check_assignment(f, a):
    missing = S.free_vars(f) - set(a)
    if missing:
        raise PartialAssignment(f"assignment misses {sorted(missing)}")


def _engine_for(m: Model, *fs) -> Engine:
    vs = variables_of(*fs)
    if not vs:
        vs = ["x"]
    P = None if m.P is None else m.p_array()[None]
    In = None if m.In is None else m.in_array()[None]
    return Engine(m.n, P=P, In=In, variables=vs)


def eval_formula(m: Model, f: S.Formula, a: Mapping[str, int]) -> bool:
    """Tarskian satisfaction ``m |= f[a]``."""
    _check_assignment(f, a)
    for v in S.free_vars(f):
        if not 0 <= a[v] < m.n:
            raise PartialAssignment(f"{v} -> {a[v]} is outside the universe")
    eng = _engine_for(m, f)
    arr = eng.run([f])[f][0]
    idx = tuple(a[v] if arr.shape[i] > 1 else 0 for i, v in enumerate(eng.variables))
    return bool(arr[idx])


def valid_in_model(m: Model, f: S.Formula) -> bool:
    eng = _engine_for(m, f)
    return bool(eng.valid(f)[0])


def countermodel(f: S.Formula, n_max: int = 2, signature=SIG_P):
    """First enumerated model (with a falsifying assignment) where ``f`` fails."""
    for n in range(1, n_max + 1):
        for P, In in iter_model_arrays(n, signature):
            eng = Engine(n, P=P, In=In, variables=variables_of(f) or ["x"])
            full = eng.truth(f)
            bad = np.argwhere(~full)
            if len(bad):
                b = bad[0]
                m = Model.from_arrays(None if P is None else P[b[0]],
                                      None if In is None else In[b[0]])
                return m, dict(zip(eng.variables, map(int, b[1:])))
    return None


# --------------------------------------------------------------------------
# reference evaluator: plain recursion, no numpy.  Used as an oracle.

def satisfies(m: Model, f: S.Formula, a: Mapping[str, int]) -> bool:
    P = m.P
    In = m.In
    rng = range(m.n)

    def go(g, env):
        k = g.kind
        if k == S.ATOM_P:
            if P is None:
                raise MissingRelation("no P")
            return (env["x"], env["y"], env["z"]) in P
        if k == S.ATOM_IN:
            if In is None:
                raise MissingRelation("no in")
            return (env[g.a], env[g.b]) in In
        if k == S.ATOM_EQ:
            return env[g.a] == env[g.b]
        if k == S.NOT:
            return not go(g.a, env)
        if k == S.OR:
            return go(g.a, env) or go(g.b, env)
        if k == S.EX:
            e = dict(env)
            for d in rng:
                e[g.a] = d
                if go(g.b, e):
                    return True
            return False
        raise MissingRelation(f"cannot evaluate {k}")

    _check_assignment(f, a)
    return go(f, dict(a))


def all_assignments(n: int, vs=S.VAR3):
    for t in itertools.product(range(n), repeat=len(vs)):
        yield dict(zip(vs, t))
