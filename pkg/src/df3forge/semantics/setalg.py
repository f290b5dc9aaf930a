"""Diagonal-free set algebras on ``U^3``.

Elements are frozensets of triples.  ``+`` is union, ``-`` complement in
``U^3``, and ``f``, ``g``, ``h`` cylindrify along coordinates 0, 1, 2.
This evaluator is deliberately independent of the numpy engine so the two
can be compared.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .. import syntax as S


class UnboundTermVariable(KeyError):
    pass


_COORD = {"cf": 0, "cg": 1, "ch": 2}


@dataclass
class SetAlgebra3:
    universe_size: int
    generator_assignment: dict = field(default_factory=dict)

    @property
    def unit(self) -> frozenset:
        return unit(self.universe_size)

    def cyl(self, i: int, s: frozenset) -> frozenset:
        return cylindrify(self.universe_size, i, s)


def unit(n: int) -> frozenset:
    return frozenset(itertools.product(range(n), repeat=3))


def cylindrify(n: int, i: int, s) -> frozenset:
    """``C_i(S)``: all triples that agree with some member of ``S`` off ``i``."""
    out = set()
    for t in s:
        for d in range(n):
            out.add(t[:i] + (d,) + t[i + 1:])
    return frozenset(out)


def set_algebra_eval(alg: SetAlgebra3, t: S.Term) -> frozenset:
    n = alg.universe_size
    top = unit(n)
    val: dict = {}
    for nd in S.nodes(t):
        k = nd.kind
        if k == S.TVAR:
            try:
                v = frozenset(alg.generator_assignment[nd.a])
            except KeyError:
                raise UnboundTermVariable(f"X{nd.a} is not assigned") from None
        elif k == S.PLUS:
            v = val[nd.a] | val[nd.b]
        elif k == S.MINUS:
            v = top - val[nd.a]
        else:
            v = cylindrify(n, _COORD[k], val[nd.a])
        val[nd] = v
    return val[t]


def equation_holds(alg: SetAlgebra3, eq: S.Equation) -> bool:
    return set_algebra_eval(alg, eq.lhs) == set_algebra_eval(alg, eq.rhs)


def random_subset(rng: random.Random, n: int) -> frozenset:
    p = rng.random()
    return frozenset(t for t in itertools.product(range(n), repeat=3) if rng.random() < p)


def random_algebra(rng: random.Random, n: int, variables) -> SetAlgebra3:
    return SetAlgebra3(n, {v: random_subset(rng, n) for v in variables})
