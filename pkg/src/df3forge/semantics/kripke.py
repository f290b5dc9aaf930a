"""Kripke frames with three commuting equivalence relations.

Worlds are ``0..W-1``; world sets are Python ints used as bitsets.  Each
relation is stored as its partition (a class label per world), which makes
``<i>S`` the union of the classes that meet ``S``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .. import syntax as S
from .models import Model, MissingRelation


class NotEquivalence(ValueError):
    pass


@dataclass(frozen=True)
class KripkeFrame:
    worlds: int
    labels: tuple  # three tuples: class label of each world
    val_p: int  # bitset of worlds where p holds

    def __post_init__(self):
        if len(self.labels) != 3 or any(len(l) != self.worlds for l in self.labels):
            raise ValueError("need three labelings of all worlds")

    def classes(self, i: int) -> list[int]:
        """Equivalence classes of ``R_i`` (1-based) as bitsets."""
        out: dict = {}
        for w, c in enumerate(self.labels[i - 1]):
            out[c] = out.get(c, 0) | (1 << w)
        return list(out.values())

    def relation(self, i: int) -> set[tuple[int, int]]:
        lab = self.labels[i - 1]
        return {(u, v) for u in range(self.worlds) for v in range(self.worlds) if lab[u] == lab[v]}

    def diamond(self, i: int, s: int) -> int:
        out = 0
        for c in self.classes(i):
            if c & s:
                out |= c
        return out

    def commute(self, i: int, j: int) -> bool:
        return compose(self.relation(i), self.relation(j)) == compose(self.relation(j), self.relation(i))

    @classmethod
    def from_relations(cls, worlds: int, rels, val_p) -> "KripkeFrame":
        labels = []
        for r in rels:
            r = set(r)
            if not is_equivalence(worlds, r):
                raise NotEquivalence("accessibility relation is not an equivalence")
            lab = []
            for w in range(worlds):
                lab.append(min(v for v in range(worlds) if (w, v) in r))
            labels.append(tuple(lab))
        if not isinstance(val_p, int):
            val_p = sum(1 << w for w in val_p)
        return cls(worlds, tuple(labels), val_p)


def compose(r, s):
    out = set()
    by_first: dict = {}
    for b, c in s:
        by_first.setdefault(b, []).append(c)
    for a, b in r:
        for c in by_first.get(b, ()):
            out.add((a, c))
    return out


def is_equivalence(worlds, r) -> bool:
    ws = range(worlds)
    if any((w, w) not in r for w in ws):
        return False
    if any((b, a) not in r for a, b in r):
        return False
    return compose(r, r) <= r


def to_frame(m: Model) -> KripkeFrame:
    """Worlds are triples ``(a,b,c)`` coded as ``a*n*n + b*n + c``; ``R_i``
    lets coordinate ``i-1`` vary."""
    if m.P is None:
        raise MissingRelation("to_frame needs P")
    n = m.n
    trip = list(itertools.product(range(n), repeat=3))
    labels = tuple(_dense([t[:i] + t[i + 1:] for t in trip]) for i in range(3))
    val = 0
    for w, t in enumerate(trip):
        if t in m.P:
            val |= 1 << w
    return KripkeFrame(n ** 3, labels, val)


def _dense(lab):
    seen: dict = {}
    return tuple(seen.setdefault(c, len(seen)) for c in lab)


def world_of(m_or_n, triple) -> int:
    n = m_or_n.n if isinstance(m_or_n, Model) else m_or_n
    a, b, c = triple
    return (a * n + b) * n + c


def truth_set(fr: KripkeFrame, f: S.Formula) -> int:
    full = (1 << fr.worlds) - 1
    val: dict = {}
    cls = {i: fr.classes(i) for i in (1, 2, 3)}
    for nd in S.nodes(f):
        k = nd.kind
        if k == S.ATOM_PROP:
            v = fr.val_p
        elif k == S.NOT:
            v = full & ~val[nd.a]
        elif k == S.OR:
            v = val[nd.a] | val[nd.b]
        elif k == S.DIA:
            s = val[nd.b]
            v = 0
            for c in cls[nd.a]:
                if c & s:
                    v |= c
        else:
            raise S.LanguageViolation(f"{k} is not a modal construct")
        val[nd] = v
    return val[f]


def eval_modal(fr: KripkeFrame, w: int, f: S.Formula) -> bool:
    return bool(truth_set(fr, f) >> w & 1)


def frame_valid(fr: KripkeFrame, f: S.Formula) -> bool:
    return truth_set(fr, f) == (1 << fr.worlds) - 1


# --------------------------------------------------------------------------
# frame enumeration

@lru_cache(maxsize=None)
def set_partitions(w: int) -> tuple:
    """All partitions of ``range(w)`` as restricted-growth label tuples."""
    out = []

    def rec(prefix, top):
        if len(prefix) == w:
            out.append(tuple(prefix))
            return
        for c in range(top + 2):
            rec(prefix + [c], max(top, c))

    if w == 0:
        return ((),)
    rec([0], 0)
    return tuple(out)


def _commute_labels(a, b) -> bool:
    # R_a;R_b = R_b;R_a  iff  the class graph is a union of complete
    # bipartite blocks; check through explicit composition on small frames
    w = len(a)
    ra = {(u, v) for u in range(w) for v in range(w) if a[u] == a[v]}
    rb = {(u, v) for u in range(w) for v in range(w) if b[u] == b[v]}
    return compose(ra, rb) == compose(rb, ra)


def enumerate_frames(max_worlds: int = 4):
    """Every frame with ``1..max_worlds`` worlds and three pairwise commuting
    equivalences, with every valuation of ``p``."""
    for w in range(1, max_worlds + 1):
        parts = set_partitions(w)
        ok = {(a, b): _commute_labels(a, b) for a in parts for b in parts}
        for a in parts:
            for b in parts:
                if not ok[a, b]:
                    continue
                for c in parts:
                    if ok[a, c] and ok[b, c]:
                        for val in range(1 << w):
                            yield KripkeFrame(w, (a, b, c), val)


def count_frames(max_worlds: int = 4) -> int:
    return sum(1 for _ in enumerate_frames(max_worlds))


# --------------------------------------------------------------------------
# batched evaluation over all small frames

def frame_batches(max_worlds: int = 4):
    """Per world count ``w``: relation matrices ``(F, 3, w, w)`` and
    valuations ``(F, w)`` covering every frame of :func:`enumerate_frames`."""
    import numpy as np

    out = []
    for w in range(1, max_worlds + 1):
        frames = [fr for fr in enumerate_frames(w) if fr.worlds == w]
        lab = np.array([fr.labels for fr in frames])  # (F, 3, w)
        rel = lab[:, :, :, None] == lab[:, :, None, :]
        val = np.array([[(fr.val_p >> i) & 1 for i in range(w)] for fr in frames], dtype=bool)
        out.append((w, rel, val))
    return out


def truth_batch(rel, val, fs) -> dict:
    """Truth arrays ``(F, w)`` of modal formulas over a frame batch."""
    res: dict = {}
    for nd in S.nodes(*fs):
        k = nd.kind
        if k == S.ATOM_PROP:
            v = val
        elif k == S.NOT:
            v = ~res[nd.a]
        elif k == S.OR:
            v = res[nd.a] | res[nd.b]
        elif k == S.DIA:
            v = (rel[:, nd.a - 1] & res[nd.b][:, None, :]).any(axis=2)
        else:
            raise S.LanguageViolation(f"{k} is not a modal construct")
        res[nd] = v
    return res


def valid_on_small_frames(fs, max_worlds: int = 4) -> list[bool]:
    """Whether each formula holds at every world of every small frame."""
    ok = [True] * len(fs)
    for _, rel, val in frame_batches(max_worlds):
        res = truth_batch(rel, val, fs)
        for i, f in enumerate(fs):
            ok[i] = ok[i] and bool(res[f].all())
    return ok
