"""Curated, machine-checked proofs.

Proofs are produced by small builder functions so that each lemma exists
for several instantiations; every entry is pruned to the lines its
conclusion depends on.
"""

from __future__ import annotations

from functools import lru_cache

from .. import syntax as S
from ..syntax import conj, disj, exists, forall, iff, imp, neg
from . import schemas as SC
from .checker import MP, Axiom, EqRule, Gen, Hyp, Proof, ProofLine


class Builder:
    """Append-only proof under construction; methods return line numbers."""

    def __init__(self, system: str, hypotheses: dict | None = None):
        self.system = system
        self.hypotheses = dict(hypotheses or {})
        self.steps: list = []  # (statement, justification with 1-based refs)
        self.index: dict = {}

    def _add(self, stmt, just) -> int:
        self.steps.append((stmt, just))
        return len(self.steps)

    def stmt(self, i):
        return self.steps[i - 1][0]

    def hyp(self, name: str) -> int:
        return self._add(self.hypotheses[name], Hyp(name))

    def taut(self, f) -> int:
        schema = SC.ORDER[self.system][0]
        return self._add(f, Axiom(schema))

    def ax(self, schema: str, **b) -> int:
        inst = SC.instantiate(schema, b)
        keys = tuple(sorted(("?" + k, v) for k, v in b.items()))
        return self._add(inst, Axiom(schema, keys))

    def mp(self, i: int, j: int) -> int:
        major = self.stmt(j)
        assert major.kind == S.OR and major.a.a is self.stmt(i), "MP shape"
        return self._add(major.b, MP(i, j))

    def gen(self, v, i: int) -> int:
        f = self.stmt(i)
        return self._add(S.box(v, f) if self.system == SC.MODAL else forall(v, f), Gen(v, i))

    def chain(self, taut_formula, *premises) -> int:
        """Detach a tautology ``p1 -> (p2 -> ... -> c)`` against premises."""
        k = self.taut(taut_formula)
        for p in premises:
            k = self.mp(p, k)
        return k

    # derived rules --------------------------------------------------------

    def mono(self, v, k: int) -> int:
        """From ``A -> B`` derive ``Ev A -> Ev B`` by Gen and ((2))."""
        f = self.stmt(k)
        a, b = f.a.a, f.b
        g = self.gen(v, k)
        ax = self.ax("2", v=v, phi=a, psi=b)
        return self.mp(g, ax)

    def imp_trans(self, k1: int, k2: int) -> int:
        a, b = self.stmt(k1).a.a, self.stmt(k1).b
        c = self.stmt(k2).b
        return self.chain(imp(imp(a, b), imp(imp(b, c), imp(a, c))), k1, k2)

    def build(self) -> Proof:
        return prune(self.system, self.steps, self.hypotheses)


def _refs(j):
    if isinstance(j, MP):
        return (j.i, j.j)
    if isinstance(j, Gen):
        return (j.i,)
    if isinstance(j, EqRule):
        return j.premises
    return ()


def _renumber(j, new):
    if isinstance(j, MP):
        return MP(new[j.i], new[j.j])
    if isinstance(j, Gen):
        return Gen(j.v, new[j.i])
    if isinstance(j, EqRule):
        return EqRule(j.rule, tuple(new[i] for i in j.premises), j.op, j.subst)
    return j


def prune(system, steps, hypotheses) -> Proof:
    """Keep only lines the last one depends on, renumbered in order."""
    need = {len(steps)}
    for k in range(len(steps), 0, -1):
        if k in need:
            need.update(_refs(steps[k - 1][1]))
    new: dict = {}
    lines = []
    for k in range(1, len(steps) + 1):
        if k in need:
            new[k] = len(lines) + 1
            stmt, j = steps[k - 1]
            lines.append(ProofLine(new[k], stmt, _renumber(j, new)))
    used = {j.name for _, j in steps if isinstance(j, Hyp)}
    return Proof(system, lines, {h: f for h, f in hypotheses.items() if h in used})


# ---------------------------------------------------------------------------
# first-order lemmas

def ax8_from_base(phi, psi, v) -> Proof:
    """((8)) from ((1))-((7)) with MP and Gen."""
    b = Builder(SC.HILBERT3)
    C = exists(v, psi)
    lhs = exists(v, conj(phi, C))
    e_phi = exists(v, phi)
    # lhs -> Ev phi
    to_phi = b.mono(v, b.taut(imp(conj(phi, C), phi)))
    # lhs -> Ev Ev psi -> Ev psi
    to_cc = b.mono(v, b.taut(imp(conj(phi, C), C)))
    to_c = b.imp_trans(to_cc, b.ax("4", v=v, phi=psi))
    fwd = b.chain(imp(imp(lhs, e_phi), imp(imp(lhs, C), imp(lhs, conj(e_phi, C)))), to_phi, to_c)
    # (Ev phi & C) -> lhs, splitting phi into (phi & C) | ~C
    split = conj(phi, C)
    h1 = b.mono(v, b.taut(imp(phi, disj(split, neg(C)))))
    a5 = b.ax("5", v=v, phi=split, psi=neg(C))
    B = exists(v, disj(split, neg(C)))
    D, F = exists(v, split), exists(v, neg(C))
    h2 = b.chain(imp(iff(B, disj(D, F)), imp(B, disj(D, F))), a5)
    h3 = b.ax("6", v=v, phi=psi)
    bwd = b.chain(imp(imp(e_phi, B), imp(imp(B, disj(D, F)),
                                          imp(imp(F, neg(C)), imp(conj(e_phi, C), D)))),
                  h1, h2, h3)
    rhs = conj(e_phi, C)
    b.chain(imp(imp(lhs, rhs), imp(imp(rhs, lhs), iff(lhs, rhs))), fwd, bwd)
    return b.build()


def ax6_from_ax8(phi, v) -> Proof:
    """((6)) in the system where it is replaced by ((8))."""
    b = Builder(SC.HILBERT3_ALT8)
    C = exists(v, phi)
    X = conj(neg(C), C)
    a8 = b.ax("8", v=v, phi=neg(C), psi=phi)
    not_z = b.gen(v, b.taut(neg(X)))
    x_to_z = b.mono(v, b.taut(imp(X, neg(neg(X)))))
    Xp, Y, Z = exists(v, X), exists(v, neg(C)), exists(v, neg(neg(X)))
    t = imp(iff(Xp, conj(Y, C)), imp(imp(Xp, Z), imp(neg(Z), imp(Y, neg(C)))))
    b.chain(t, a8, x_to_z, not_z)
    return b.build()


def forall_conj(a, c, v) -> Proof:
    """``Av(A & B) <-> (Av A & Av B)``."""
    b = Builder(SC.HILBERT3)
    ab = conj(a, c)
    L = forall(v, ab)
    parts = []
    for piece in (a, c):
        m = b.mono(v, b.taut(imp(neg(piece), neg(ab))))
        e1, e2 = exists(v, neg(piece)), exists(v, neg(ab))
        parts.append(b.chain(imp(imp(e1, e2), imp(neg(e2), neg(e1))), m))
    R = conj(forall(v, a), forall(v, c))
    fwd = b.chain(imp(imp(L, forall(v, a)), imp(imp(L, forall(v, c)), imp(L, R))), *parts)
    m = b.mono(v, b.taut(imp(neg(ab), disj(neg(a), neg(c)))))
    a5 = b.ax("5", v=v, phi=neg(a), psi=neg(c))
    p, q = exists(v, neg(ab)), exists(v, disj(neg(a), neg(c)))
    r, s = exists(v, neg(a)), exists(v, neg(c))
    bwd = b.chain(imp(imp(p, q), imp(iff(q, disj(r, s)), imp(conj(neg(r), neg(s)), neg(p)))), m, a5)
    b.chain(imp(imp(L, R), imp(imp(R, L), iff(L, R))), fwd, bwd)
    return b.build()


def iff_congruence(a, c, d, v) -> Proof:
    """From hypothesis ``B <-> B'`` derive ``Av(A -> B) <-> Av(A -> B')``."""
    hyp = iff(c, d)
    b = Builder(SC.HILBERT3, {"eqv": hyp})
    h = b.hyp("eqv")
    dirs = []
    for src, dst in ((c, d), (d, c)):
        inner = b.chain(imp(hyp, imp(neg(imp(a, dst)), neg(imp(a, src)))), h)
        m = b.mono(v, inner)
        e1, e2 = exists(v, neg(imp(a, dst))), exists(v, neg(imp(a, src)))
        dirs.append(b.chain(imp(imp(e1, e2), imp(neg(e2), neg(e1))), m))
    L, R = forall(v, imp(a, c)), forall(v, imp(a, d))
    b.chain(imp(imp(L, R), imp(imp(R, L), iff(L, R))), *dirs)
    return b.build()


def exists_congruence(c, d, v) -> Proof:
    """From hypothesis ``B <-> B'`` derive ``Ev B <-> Ev B'``."""
    hyp = iff(c, d)
    b = Builder(SC.HILBERT3, {"eqv": hyp})
    h = b.hyp("eqv")
    dirs = [b.mono(v, b.chain(imp(hyp, imp(s, t)), h)) for s, t in ((c, d), (d, c))]
    L, R = exists(v, c), exists(v, d)
    b.chain(imp(imp(L, R), imp(imp(R, L), iff(L, R))), *dirs)
    return b.build()


def modus_ponens_demo() -> Proof:
    p = S.atom_p()
    b = Builder(SC.HILBERT3, {"h": p})
    b.mp(b.hyp("h"), b.ax("3", phi=p, v="x"))
    return b.build()


def exists_swap_twice(phi, v, w) -> Proof:
    """``Ev Ew phi -> Ev Ew phi`` routed through ((7)) twice."""
    b = Builder(SC.HILBERT3)
    one = b.ax("7", v=v, w=w, phi=phi)
    two = b.ax("7", v=w, w=v, phi=phi)
    b.imp_trans(one, two)
    return b.build()


def re_vacuous_forall(phi, v) -> Proof:
    """In the equality-free restricted system: ``Ev phi -> Av Ev phi`` and back."""
    b = Builder(SC.RE_EQFREE)
    e = exists(v, phi)
    fwd = b.ax("V4", phi=e, v=v)
    bwd = b.ax("V3", phi=e, v=v)
    b.chain(imp(imp(e, forall(v, e)), imp(imp(forall(v, e), e), iff(e, forall(v, e)))), fwd, bwd)
    return b.build()


# ---------------------------------------------------------------------------
# modal and equational

def modal_box_commute(i: int, j: int) -> Proof:
    """``[i][j]p -> [j][i]p`` from ((C1)) by contraposition."""
    b = Builder(SC.MODAL)
    q = neg(S.prop_p())
    c1 = b.ax("C1", i=j, j=i, phi=q)
    lhs, rhs = S.diamond(j, S.diamond(i, q)), S.diamond(i, S.diamond(j, q))
    b.chain(imp(imp(lhs, rhs), imp(neg(rhs), neg(lhs))), c1)
    return b.build()


def modal_necessitation_k(i: int) -> Proof:
    """``[i]p -> [i]p`` via necessitation of a tautology and ((K))."""
    b = Builder(SC.MODAL)
    p = S.prop_p()
    n = b.gen(i, b.taut(imp(p, p)))
    k = b.ax("K", i=i, phi=p, psi=p)
    b.mp(n, k)
    return b.build()


def _eqb():
    return Builder(SC.EQUATIONAL)


def eq_d5_symmetry() -> Proof:
    b = _eqb()
    x = S.tvar(0)
    a = b._add(S.Equation(S.tcyl("f", S.tcyl("g", x)), S.tcyl("g", S.tcyl("f", x))), Axiom("D5"))
    st = b.stmt(a)
    b._add(S.Equation(st.rhs, st.lhs), EqRule("sym", (a,)))
    return b.build()


def eq_invariance() -> Proof:
    """Commutativity of ``+`` instantiated by the rule of invariance, then
    lifted through ``f``."""
    b = _eqb()
    x0, x1 = S.tvar(0), S.tvar(1)
    a = b._add(S.Equation(S.tplus(x0, x1), S.tplus(x1, x0)), Axiom("B1"))
    sub = ((0, S.tcyl("g", x0)), (1, S.tminus(x1)))
    from .schemas import subst_term
    st = b.stmt(a)
    c = b._add(S.Equation(subst_term(st.lhs, dict(sub)), subst_term(st.rhs, dict(sub))),
               EqRule("inv", (a,), subst=sub))
    st = b.stmt(c)
    b._add(S.Equation(S.tcyl("f", st.lhs), S.tcyl("f", st.rhs)), EqRule("cong", (c,), op="f"))
    return b.build()


def eq_closure_chain() -> Proof:
    """``f f f X0 = f X0`` from ((D2)) by congruence and transitivity."""
    b = _eqb()
    x = S.tvar(0)
    f = lambda t: S.tcyl("f", t)  # noqa: E731
    d2 = b._add(S.Equation(f(f(x)), f(x)), Axiom("D2"))
    inst = b._add(S.Equation(f(f(f(x))), f(f(x))), EqRule("inv", (d2,), subst=((0, f(x)),)))
    b._add(S.Equation(f(f(f(x))), f(x)), EqRule("trans", (inst, d2)))
    return b.build()


# ---------------------------------------------------------------------------

def _instances():
    P = S.atom_p()
    ex = S.parse(S.FMD3, "Ey. P(x,y,z)")
    mix = S.parse(S.FMD3, "~P(x,y,z) | Az. P(x,y,z)")
    return P, ex, mix


@lru_cache(maxsize=None)
def proof_library() -> dict:
    P, ex, mix = _instances()
    lib = {
        "ax8_from_base": ax8_from_base(P, P, "x"),
        "ax8_from_base_y": ax8_from_base(ex, mix, "y"),
        "ax8_from_base_z": ax8_from_base(mix, ex, "z"),
        "ax6_from_ax8": ax6_from_ax8(P, "x"),
        "ax6_from_ax8_y": ax6_from_ax8(ex, "y"),
        "ax6_from_ax8_z": ax6_from_ax8(mix, "z"),
        "forall_conj": forall_conj(P, ex, "x"),
        "forall_conj_z": forall_conj(mix, neg(P), "z"),
        "iff_congruence": iff_congruence(ex, P, neg(neg(P)), "x"),
        "exists_congruence": exists_congruence(mix, disj(neg(P), forall("z", P)), "y"),
        "mp_demo": modus_ponens_demo(),
        "exists_swap_twice": exists_swap_twice(P, "x", "y"),
        "re_vacuous_forall": re_vacuous_forall(P, "x"),
        "modal_box_commute": modal_box_commute(1, 2),
        "modal_necessitation_k": modal_necessitation_k(3),
        "eq_d5_symmetry": eq_d5_symmetry(),
        "eq_invariance": eq_invariance(),
        "eq_closure_chain": eq_closure_chain(),
    }
    return lib
