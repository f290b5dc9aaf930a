"""Hereditarily finite sets and a rank-truncated truth oracle.

``V_0`` is empty and ``V_{k+1}`` is the powerset of ``V_k``.  Elements of
``V_k`` are numbered in Ackermann order (``j in i`` iff bit ``j`` of ``i``
is set), so ``V_{k-1}`` is always a prefix of ``V_k`` and assignments into
the smaller level carry over unchanged.

Structures built here are transitive sets with the real membership
relation, which makes them models of the ``in``/``=`` languages.  For
``P``-formulas the ternary relation is induced from membership through the
bridge ``P(a,b,c) <-> a=b=c or a in b``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .. import syntax as S
from .engine import Engine, EvaluationTooLarge, variables_of
from .models import delta_induced_p

MAX_RANK = 5
MAX_DENSE = 4096


class RankTooLarge(ValueError):
    pass


class TriState(enum.Enum):
    TRUE_STABLE = "TRUE_STABLE"
    FALSE_STABLE = "FALSE_STABLE"
    UNSTABLE = "UNSTABLE"

    def __str__(self):
        return self.value


def level_size(k: int) -> int:
    s = 0
    for _ in range(k):
        s = 2 ** s
    return s


def decode(i: int) -> frozenset:
    """The hereditarily finite set with Ackermann code ``i``."""
    out = []
    j = 0
    while i:
        if i & 1:
            out.append(decode(j))
        i >>= 1
        j += 1
    return frozenset(out)


def encode(s: frozenset) -> int:
    return sum(1 << encode(e) for e in s)


def rank_of(s: frozenset) -> int:
    return 0 if not s else 1 + max(rank_of(e) for e in s)


def singleton(a) -> frozenset:
    return frozenset([a])


def kpair(a, b) -> frozenset:
    """Kuratowski pair ``{{a},{a,b}}``."""
    return frozenset([frozenset([a]), frozenset([a, b])])


def kseq(items: Sequence) -> frozenset:
    """Right-nested pairs ``<c0,<c1,...<c_{m-1},c_m>...>>``."""
    acc = items[-1]
    for c in reversed(items[:-1]):
        acc = kpair(c, acc)
    return acc


def transitive_closure(seeds: Iterable[frozenset]) -> set:
    out = set()
    stack = list(seeds)
    while stack:
        s = stack.pop()
        if s in out:
            continue
        out.add(s)
        stack.extend(s)
    return out


def show(s: frozenset) -> str:
    if not s:
        return "0"
    return "{" + ",".join(sorted(show(e) for e in s)) + "}"


@dataclass
class Universe:
    """A finite transitive set with a fixed element order."""

    elements: list

    def __post_init__(self):
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements")

    @property
    def n(self) -> int:
        return len(self.elements)

    def is_transitive(self) -> bool:
        return all(e in self.index for s in self.elements for e in s)

    def in_matrix(self) -> np.ndarray:
        n = self.n
        if n > MAX_DENSE:
            raise EvaluationTooLarge(f"membership matrix of {n} elements is too large")
        m = np.zeros((n, n), dtype=bool)
        for i, s in enumerate(self.elements):
            for e in s:
                m[self.index[e], i] = True
        return m

    def extend(self, more: Iterable[frozenset]) -> "Universe":
        """This universe followed by the new elements (and their closure)."""
        extra = sorted(transitive_closure(more) - set(self.index), key=_order_key)
        return Universe(self.elements + extra)

    @classmethod
    def closure(cls, seeds: Iterable[frozenset], base: "Universe | None" = None) -> "Universe":
        base = base or Universe([])
        return base.extend(seeds)


def _order_key(s):
    return (rank_of(s), len(s), show(s))


def hf_universe(rank: int) -> Universe:
    if rank < 0 or rank > MAX_RANK:
        raise RankTooLarge(f"rank must be between 0 and {MAX_RANK}")
    n = level_size(rank)
    if n > MAX_DENSE:
        raise EvaluationTooLarge(f"V_{rank} has {n} elements; dense evaluation is not possible")
    return Universe([decode(i) for i in range(n)])


def ackermann_in(rank: int) -> np.ndarray:
    n = level_size(rank)
    if n > MAX_DENSE:
        raise EvaluationTooLarge(f"V_{rank} has {n} elements; dense evaluation is not possible")
    i = np.arange(n)
    return ((i[None, :] >> i[:, None]) & 1).astype(bool)


# --------------------------------------------------------------------------
# evaluation

def _strip_forall(f: S.Formula):
    outer = []
    while f.kind == S.NOT and f.a.kind == S.EX and f.a.b.kind == S.NOT:
        outer.append(f.a.a)
        f = f.a.b.a
    return outer, f


def evaluate_in(f: S.Formula, universe: Universe | None = None, In=None, variables=None):
    """Full truth array of ``f`` over a transitive universe (first axis dropped)."""
    if In is None:
        In = universe.in_matrix()
    vs = variables or variables_of(f) or ["x"]
    uses_p = any(nd.kind == S.ATOM_P for nd in S.nodes(f))
    P = delta_induced_p(In)[None] if uses_p else None
    eng = Engine(In.shape[0], P=P, In=In[None], variables=vs)
    return eng.truth(f)[0], vs


@dataclass
class OracleReport:
    verdict: TriState
    outer: list
    small_n: int
    big_n: int
    restricted_n: int
    true_small: bool
    true_big: bool
    disagreements: int


def stable_eval(f: S.Formula, small: Universe, big: Universe, restrict: int,
                small_in=None, big_in=None) -> OracleReport:
    """Compare ``f`` over two nested universes.

    ``small`` must be a prefix of ``big``.  Free variables and the leading
    universal block range over the first ``restrict`` elements; the rest of
    the formula is evaluated with quantifiers bounded to each universe.
    """
    outer, body = _strip_forall(f)
    outer = list(dict.fromkeys(list(outer) + sorted(S.free_vars(f), key=S.var_sort_key)))
    vs = list(dict.fromkeys(outer + variables_of(body)))
    if not vs:
        vs = ["x"]
    if small_in is None:
        small_in = small.in_matrix()
    if big_in is None:
        big_in = big.in_matrix()
    ts, _ = evaluate_in(body, In=small_in, variables=vs)
    tb, _ = evaluate_in(body, In=big_in, variables=vs)
    sl = tuple(slice(0, restrict) if v in outer else slice(0, 1) for v in vs)
    a = np.asarray(ts[sl])
    b = np.asarray(tb[sl])
    dis = int((a != b).sum())
    if dis:
        verdict = TriState.UNSTABLE
    elif a.all():
        verdict = TriState.TRUE_STABLE
    else:
        verdict = TriState.FALSE_STABLE
    return OracleReport(verdict, outer, small.n if small else small_in.shape[0],
                        big.n if big else big_in.shape[0], restrict,
                        bool(a.all()), bool(b.all()), dis)


def hf_oracle(f: S.Formula, rank: int = 4, margin: int = 1) -> TriState:
    return hf_oracle_report(f, rank, margin).verdict


def hf_oracle_report(f: S.Formula, rank: int = 4, margin: int = 1) -> OracleReport:
    """Evaluate over ``V_rank`` and ``V_{rank-1}``.

    The leading universal quantifiers and free variables are restricted to
    ``V_{rank-1-margin}``; everything else is bounded by the level itself.
    """
    if rank > MAX_RANK:
        raise RankTooLarge(f"rank {rank} exceeds {MAX_RANK}")
    if rank < 2 or margin < 0 or rank - 1 - margin < 1:
        raise ValueError("need rank >= 2 and 0 <= margin <= rank - 2")
    if f.lang not in (S.L3, S.FOL, S.FMD3, S.MIXED3):
        raise S.LanguageViolation(f"hf_oracle does not evaluate {f.lang} formulas")
    restrict = level_size(rank - 1 - margin)
    return stable_eval(f, None, None, restrict,
                       small_in=ackermann_in(rank - 1), big_in=ackermann_in(rank))


def check_prefix(small: Universe, big: Universe) -> bool:
    return big.elements[: small.n] == small.elements


def hf_oracle_equiv(f: S.Formula, g: S.Formula, rank: int = 4, margin: int = 1) -> TriState:
    """Verdict for the biconditional ``f <-> g`` of two sentences that may
    live in different languages (so the biconditional cannot be built)."""
    if S.free_vars(f) or S.free_vars(g):
        raise ValueError("hf_oracle_equiv compares sentences")
    hf_oracle_report(f, rank, margin)  # argument validation
    vals = []
    for k in (rank - 1, rank):
        In = ackermann_in(k)
        a = bool(evaluate_in(f, In=In)[0].all())
        b = bool(evaluate_in(g, In=In)[0].all())
        vals.append(a == b)
    if vals[0] != vals[1]:
        return TriState.UNSTABLE
    return TriState.TRUE_STABLE if vals[0] else TriState.FALSE_STABLE
