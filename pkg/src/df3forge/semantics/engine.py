"""Vectorised evaluation of formula DAGs over batches of finite models.

Every node is mapped to a boolean array of shape ``(B, n, ..., n)`` with
one leading batch axis (one entry per model) and one axis per variable.
Axes of variables that are not free in the node have size 1, so negation
and disjunction are plain numpy broadcasting and ``E v`` is an ``any``
reduction along the axis of ``v``.

Nodes are visited once, children first (interned uids are topologically
ordered), and intermediate arrays are dropped as soon as their last parent
has consumed them.  This keeps memory proportional to the live frontier
rather than to the size of the DAG, which matters for the pairing axioms.
"""

from __future__ import annotations

import numpy as np

from .. import syntax as S

MAX_CELLS = 300_000_000


class MissingRelation(ValueError):
    pass


class PartialAssignment(ValueError):
    pass


class EvaluationTooLarge(MemoryError):
    pass


def variables_of(*roots) -> list[str]:
    seen = set()
    for r in roots:
        seen |= S.all_vars(r)
    return sorted(seen, key=S.var_sort_key)


class Engine:
    """Evaluate formulas over ``B`` models sharing a universe of size ``n``.

    ``P`` is a ``(B, n, n, n)`` and ``In`` a ``(B, n, n)`` boolean array;
    either may be ``None``.  ``variables`` fixes the axis order; by default
    the three-variable languages use ``x, y, z``.
    """

    def __init__(self, n: int, P=None, In=None, variables=None):
        if P is None and In is None:
            raise MissingRelation("no relation given")
        self.n = n
        self.P = None if P is None else np.asarray(P, dtype=bool)
        self.In = None if In is None else np.asarray(In, dtype=bool)
        self.batch = (self.P if self.P is not None else self.In).shape[0]
        if self.P is not None and self.P.shape != (self.batch, n, n, n):
            raise ValueError(f"P has shape {self.P.shape}, expected {(self.batch, n, n, n)}")
        if self.In is not None and self.In.shape != (self.batch, n, n):
            raise ValueError(f"In has shape {self.In.shape}, expected {(self.batch, n, n)}")
        self.variables = list(variables) if variables is not None else list(S.VAR3)
        self.axis = {v: i + 1 for i, v in enumerate(self.variables)}
        self.rank = len(self.variables) + 1
        self._atoms: dict = {}

    # atoms ---------------------------------------------------------------
    def _place(self, arr, axes):
        """Put a ``(B, n, ...)`` array whose data axes belong to ``axes``
        into the full axis layout."""
        shape = [arr.shape[0]] + [1] * (self.rank - 1)
        order = sorted(range(len(axes)), key=lambda k: axes[k])
        arr = arr.transpose([0] + [k + 1 for k in order])
        for k in order:
            shape[axes[k]] = self.n
        return arr.reshape(shape)

    def _axis(self, v):
        try:
            return self.axis[v]
        except KeyError:
            raise PartialAssignment(f"variable {v} has no axis") from None

    def atom(self, node):
        hit = self._atoms.get(node)
        if hit is not None:
            return hit
        k = node.kind
        if k == S.ATOM_P:
            if self.P is None:
                raise MissingRelation("formula uses P but the model has no P")
            out = self._place(self.P, [self._axis("x"), self._axis("y"), self._axis("z")])
        elif k == S.ATOM_IN:
            if self.In is None:
                raise MissingRelation("formula uses in but the model has no in")
            i, j = self._axis(node.a), self._axis(node.b)
            if i == j:
                diag = self.In[:, np.arange(self.n), np.arange(self.n)]
                out = self._place(diag, [i])
            else:
                out = self._place(self.In, [i, j])
        elif k == S.ATOM_EQ:
            i, j = self._axis(node.a), self._axis(node.b)
            if i == j:
                out = np.ones((1,) * self.rank, dtype=bool)
            else:
                out = self._place(np.eye(self.n, dtype=bool)[None], [i, j])
        else:
            raise MissingRelation(f"cannot evaluate {k} atoms over a relational model")
        self._atoms[node] = out
        return out

    # main loop -----------------------------------------------------------
    def run(self, roots):
        """Return ``{root: array}`` for every root."""
        roots = list(roots)
        order = S.nodes(*roots)
        limit = MAX_CELLS
        full = self.batch * self.n ** (self.rank - 1)
        if full > limit:
            big = max((bin(nd.fv).count("1") for nd in order), default=0)
            if self.batch * self.n ** big > limit:
                raise EvaluationTooLarge(
                    f"{self.batch} models x {self.n}^{big} assignments exceeds {limit} cells")
        refs: dict = {}
        for nd in order:
            for c in nd.children:
                refs[c] = refs.get(c, 0) + 1
        for r in roots:
            refs[r] = refs.get(r, 0) + 1
        val: dict = {}
        axis = self.axis
        for nd in order:
            k = nd.kind
            if k == S.NOT:
                v = ~val[nd.a]
            elif k == S.OR:
                v = val[nd.a] | val[nd.b]
            elif k == S.EX:
                c = val[nd.b]
                ax = axis.get(nd.a)
                if ax is None:
                    raise PartialAssignment(f"variable {nd.a} has no axis")
                v = c.any(axis=ax, keepdims=True) if c.shape[ax] > 1 else c
            elif k == S.DIA:
                raise MissingRelation("modal formulas need a Kripke frame")
            else:
                v = self.atom(nd)
            val[nd] = v
            for c in nd.children:
                left = refs[c] - 1
                if left:
                    refs[c] = left
                else:
                    del refs[c]
                    del val[c]
        return {r: val[r] for r in roots}

    def full(self, arr):
        """Broadcast an evaluation result to the full ``(B, n, ..., n)`` shape."""
        return np.broadcast_to(arr, (self.batch,) + (self.n,) * (self.rank - 1))

    def truth(self, f):
        return self.full(self.run([f])[f])

    def valid(self, f):
        """Per-model validity (true under every assignment), shape ``(B,)``."""
        arr = self.run([f])[f]
        return arr.reshape(arr.shape[0], -1).all(axis=1)

    def valid_many(self, fs):
        res = self.run(fs)
        return [res[f].reshape(res[f].shape[0], -1).all(axis=1) for f in fs]
