"""Random formula and term generators for the property suites.

All generators take a ``random.Random`` so runs are reproducible from a
seed, and respect a maximum nesting depth (atoms have depth 0).
"""

from __future__ import annotations

import random

from . import syntax as S


def _grow(rng: random.Random, depth: int, leaf, unary_ops, p_leaf=0.2, binary_ops=(S.disj,)):
    if depth <= 0 or rng.random() < p_leaf:
        return leaf()
    r = rng.random()
    d = rng.randint(0, depth - 1)
    if r < 0.3:
        return S.neg(_grow(rng, d, leaf, unary_ops, p_leaf, binary_ops))
    if r < 0.6:
        op = rng.choice(binary_ops)
        return op(_grow(rng, d, leaf, unary_ops, p_leaf, binary_ops),
                  _grow(rng, rng.randint(0, depth - 1), leaf, unary_ops, p_leaf, binary_ops))
    op = rng.choice(unary_ops)
    return op(_grow(rng, d, leaf, unary_ops, p_leaf, binary_ops))


def _quant(v):
    return lambda f: S.exists(v, f)


def _dia(i):
    return lambda f: S.diamond(i, f)


def _all(v):
    return lambda f: S.forall(v, f)


_FMD3_Q = [_quant(v) for v in S.VAR3]
_FMD3_Q_SUGAR = _FMD3_Q + [_all(v) for v in S.VAR3]
_BIN_SUGAR = (S.disj, S.conj, S.imp, S.iff)


def random_fmd3(rng: random.Random, depth: int = 3, sugar: bool = False) -> S.Formula:
    """Random FMD3 formula.  With ``sugar`` the depth bound counts the
    derived connectives ``& -> <-> A`` as single steps."""
    if sugar:
        return _grow(rng, depth, S.atom_p, _FMD3_Q_SUGAR, binary_ops=_BIN_SUGAR)
    return _grow(rng, depth, S.atom_p, _FMD3_Q)


def random_modal(rng: random.Random, depth: int = 3) -> S.Formula:
    return _grow(rng, depth, S.prop_p, [_dia(i) for i in (1, 2, 3)])


def random_l3(rng: random.Random, depth: int = 3) -> S.Formula:
    atoms = [lambda: S.atom_in("x", "y")] + [
        (lambda u=u, v=v: S.atom_eq(u, v)) for u in S.VAR3 for v in S.VAR3]
    return _grow(rng, depth, lambda: rng.choice(atoms)(), _FMD3_Q)


def random_l3_sentence(rng: random.Random, depth: int = 3) -> S.Formula:
    return S.universal_closure(random_l3(rng, depth))


def random_fol(rng: random.Random, depth: int = 3, nvars: int = 4) -> S.Formula:
    vs = [S.folvar(i) for i in range(nvars)]

    def leaf():
        u, v = rng.choice(vs), rng.choice(vs)
        return S.atom_in(u, v) if rng.random() < 0.7 else S.atom_eq(u, v)

    return _grow(rng, depth, leaf, [_quant(v) for v in vs])


def random_fol_sentence(rng: random.Random, depth: int = 3, nvars: int = 4) -> S.Formula:
    """A FOL sentence: random body under a random quantifier prefix
    covering its free variables."""
    body = random_fol(rng, depth, nvars)
    for v in sorted(S.free_vars(body), key=S.var_sort_key, reverse=True):
        body = S.exists(v, body) if rng.random() < 0.5 else S.forall(v, body)
    return body


def random_term(rng: random.Random, depth: int = 3, nvars: int = 1) -> S.Term:
    def go(d):
        if d <= 0 or rng.random() < 0.2:
            return S.tvar(rng.randrange(nvars))
        r = rng.random()
        if r < 0.3:
            return S.tminus(go(d - 1))
        if r < 0.6:
            return S.tplus(go(d - 1), go(rng.randint(0, d - 1)))
        return S.tcyl(rng.choice("fgh"), go(d - 1))

    return go(depth)


def corpus(make, rng: random.Random, size: int, keep=lambda f: True, tries: int = 200_000):
    """``size`` distinct formulas from ``make(rng)`` that satisfy ``keep``."""
    out: dict = {}
    for _ in range(tries):
        f = make(rng)
        if f not in out and keep(f):
            out[f] = None
            if len(out) >= size:
                break
    return list(out)
