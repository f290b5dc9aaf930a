"""Propositional tautology test by abstraction and truth tables.

Every maximal subformula that is not built from ``~`` and ``|`` becomes a
letter (identical subformulas share one, which hash-consing makes free).
"""

from __future__ import annotations

import numpy as np

from .. import syntax as S

MAX_LETTERS = 20


class TooManyLetters(ValueError):
    pass


def skeleton(f: S.Formula) -> tuple[list, list]:
    """Boolean nodes of ``f`` in evaluation order and the abstracted letters."""
    letters: list = []
    seen: set = set()
    order: list = []
    stack = [f]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if n.kind in (S.NOT, S.OR):
            order.append(n)
            stack.extend(n.children)
        else:
            letters.append(n)
    order.sort(key=lambda n: n.uid)
    letters.sort(key=lambda n: n.uid)
    return order, letters


def truth_table(f: S.Formula) -> tuple[np.ndarray, list]:
    """Value of ``f`` on every row of the truth table over its letters."""
    order, letters = skeleton(f)
    k = len(letters)
    if k > MAX_LETTERS:
        raise TooManyLetters(f"{k} propositional letters (limit {MAX_LETTERS})")
    rows = np.arange(1 << k)
    val = {a: ((rows >> i) & 1).astype(bool) for i, a in enumerate(letters)}
    for n in order:
        if n.kind == S.NOT:
            val[n] = ~val[n.a]
        else:
            val[n] = val[n.a] | val[n.b]
    return np.broadcast_to(val[f], rows.shape), letters


def is_tautology(f: S.Formula) -> bool:
    if f.lang == S.META:
        raise S.LanguageViolation("schema templates are not formulas")
    return bool(truth_table(f)[0].all())
