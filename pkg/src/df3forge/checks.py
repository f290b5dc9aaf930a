"""Property suites shared by the test-suite and ``df3forge selftest``.

Each runner returns a :class:`CheckResult`; none of them raises on a
failed property.  Sizes default to the acceptance settings and can be
scaled down for quick runs.
"""

from __future__ import annotations

import hashlib
import json
import random
import subprocess
import sys
import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import coded as C
from . import gen as G
from . import pairing as PC
from . import pipeline as PL
from . import syntax as S
from .proofs import schemas as SC
from .proofs.checker import check_proof, render_stmt
from .proofs.library import proof_library
from .proofs.tautology import is_tautology
from .semantics import hf, kripke, setalg
from .semantics.engine import Engine
from .semantics.models import (Model, all_model_arrays, delta_induced_p, irreflexive_in_arrays,
                               random_model_arrays)


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    summary: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  [{self.key}] {self.title}: {self.summary} ({self.seconds:.1f}s)"


def _timed(fn):
    def run(*a, **k):
        t0 = time.perf_counter()
        res = fn(*a, **k)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# ---------------------------------------------------------------------------
# 1. soundness of the axiom schemas

TAUT_TEMPLATES = (
    "?phi | ~?phi",
    "?phi -> (?psi -> ?phi)",
    "(?phi -> (?psi -> ?chi)) -> ((?phi -> ?psi) -> (?phi -> ?chi))",
    "(~?phi -> ~?psi) -> (?psi -> ?phi)",
    "~~?phi <-> ?phi",
    "(?phi & ?psi) -> (?psi | ?chi)",
)

SOUNDNESS_SCHEMAS = ("1", "2", "3", "4", "5", "6", "7", "8", "V2", "V3", "V4")

BROKEN_SCHEMA = {"BROKEN": "?phi -> A ?v. ?phi"}


def schema_instances(rng: random.Random, schema: str, count: int, depth: int = 5,
                     extra: dict | None = None) -> list:
    """Random instances of a first-order schema over FMD3."""
    out = []
    taut = [S.parse_template(t) for t in TAUT_TEMPLATES]
    for _ in range(count):
        phi, psi, chi = (G.random_fmd3(rng, depth) for _ in range(3))
        v, w = rng.choice(S.VAR3), rng.choice(S.VAR3)
        if extra and schema in extra:
            tpl = S.parse_template(extra[schema])
            out.append(S.substitute_meta(tpl, {"?phi": phi, "?psi": psi, "?v": v, "?w": w}))
            continue
        if SC.template(schema) == SC.TAUTOLOGY:
            tpl = rng.choice(taut)
            out.append(S.substitute_meta(tpl, {"?phi": phi, "?psi": psi, "?chi": chi}))
            continue
        if schema == "V4":
            free = S.free_vars(phi)
            v = rng.choice([u for u in S.VAR3 if u not in free] or [v])
            if v in free:
                phi = S.exists(v, phi)
        out.append(SC.instantiate(schema, {"phi": phi, "psi": psi, "v": v, "w": w}))
    return out


@_timed
def check_soundness(instances: int = 1000, random_models: int = 500, max_n: int = 6,
                    seed: int = 0, depth: int = 5, extra_schemas: dict | None = None) -> CheckResult:
    """Every schema instance is valid on all 2-element models and on random
    models with up to ``max_n`` elements."""
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    schemas = list(SOUNDNESS_SCHEMAS) + list(extra_schemas or {})
    P2, _ = all_model_arrays(2, "P")
    sizes = nrng.integers(1, max_n + 1, size=random_models) if random_models else []
    batches = [(n, random_model_arrays(nrng, int(n), int((sizes == n).sum()), "P")[0])
               for n in range(1, max_n + 1) if random_models and (sizes == n).any()]
    bad: dict = {}
    total = 0
    for sc in schemas:
        inst = schema_instances(rng, sc, instances, depth, extra_schemas)
        if SC.ORDER[SC.HILBERT3][0] == sc:
            not_taut = sum(not is_tautology(f) for f in inst)
            if not_taut:
                bad[sc] = f"{not_taut} tautology instances rejected"
        fails = 0
        for n, P in [(2, P2)] + batches:
            ok = Engine(n, P=P).valid_many(inst)
            fails += sum(int((~o).sum()) for o in ok)
        total += len(inst)
        if fails:
            bad[sc] = f"{fails} (instance, model) failures"
    summary = (f"{len(schemas)} schemas x {instances} instances, 256 models at n=2 + "
               f"{random_models} random models n<={max_n}; "
               + ("all valid" if not bad else f"failing: {bad}"))
    return CheckResult("1", "soundness of axiom schemas", not bad, summary,
                       details={"failing": bad, "instances": total})


@_timed
def check_modal_schemas(instances: int = 200, seed: int = 0, depth: int = 4) -> CheckResult:
    rng = random.Random(seed)
    fs = []
    for sc in SC.ORDER[SC.MODAL][1:]:
        for _ in range(instances):
            fs.append(SC.instantiate(sc, {"phi": G.random_modal(rng, depth),
                                          "psi": G.random_modal(rng, depth),
                                          "i": rng.randint(1, 3), "j": rng.randint(1, 3)}))
    ok = kripke.valid_on_small_frames(fs, 4)
    bad = len(ok) - sum(ok)
    return CheckResult("M", "modal schemas on frames with <= 4 worlds", bad == 0,
                       f"{len(fs)} instances on {kripke.count_frames(4)} frames; {bad} invalid")


@_timed
def check_equational_axioms(trials: int = 1000, max_n: int = 4, seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    eqs = [e for sc in SC.ORDER[SC.EQUATIONAL] for e in SC.template(sc)]
    bad = 0
    for _ in range(trials):
        alg = setalg.random_algebra(rng, rng.randint(1, max_n), range(3))
        bad += sum(not setalg.equation_holds(alg, e) for e in eqs)
    return CheckResult("5b", "equational axioms in set algebras", bad == 0,
                       f"{len(eqs)} equations x {trials} random assignments (n<={max_n}); {bad} failures")


# ---------------------------------------------------------------------------
# 2. simulated substitution

def substitution_corpus(size: int = 500, seed: int = 0, depth: int = 3) -> list:
    rng = random.Random(seed)
    # depth counts surface connectives; in primitive syntax only 191
    # formulas of depth <= 3 have free variables within {x, y}
    return G.corpus(lambda r: G.random_fmd3(r, depth, sugar=True), rng, size,
                    keep=lambda f: S.free_vars(f) <= {"x", "y"})


@_timed
def check_substitution(corpus_size: int = 500, sizes=(2, 3), seed: int = 0) -> CheckResult:
    prm = PL.default_params()
    fs = substitution_corpus(corpus_size, seed)
    cases = [(u, v) for u in S.VAR3 for v in S.VAR3]
    fails = []
    checked = 0
    for n in sizes:
        In = irreflexive_in_arrays(n)
        eng = Engine(n, P=delta_induced_p(In))
        grid = dict(zip(S.VAR3, np.indices((n, n, n))))
        subs = {(f, c): PC.subst2(prm, f, *c) for f in fs for c in cases}
        res = eng.run(list(fs) + list(subs.values()))
        for f in fs:
            T = eng.full(res[f])[:, :, :, 0]
            for c in cases:
                want = T[:, grid[c[0]], grid[c[1]]]
                got = eng.full(res[subs[f, c]])
                checked += 1
                if not np.array_equal(want, got):
                    fails.append((n, S.render(f), c))
    return CheckResult("2", "substitution simulation", not fails,
                       f"{len(fs)} formulas x 9 cases on irreflexive membership models, "
                       f"n in {tuple(sizes)}: {checked - len(fails)}/{checked} agree",
                       details={"failures": fails[:5]})


# ---------------------------------------------------------------------------
# 3. bridge

@_timed
def check_bridge(sample3: int = 10_000, seed: int = 0) -> CheckResult:
    r2 = PL.check_bridge_equiv(2)
    r3 = PL.check_bridge_equiv(3, sample=sample3, seed=seed) if sample3 else None
    ok = r2.ok and (r3 is None or r3.ok)
    parts = [f"n=2: {r2.models - r2.failures}/{r2.models}"]
    if r3 is not None:
        parts.append(f"n=3 sampled: {r3.models - r3.failures}/{r3.models}")
    cm = r2.countermodel or (r3.countermodel if r3 else None)
    if cm is not None:
        parts.append(f"countermodel {cm.to_json()}")
    return CheckResult("3", "bridge equivalence Delta <-> Delta'", ok, "; ".join(parts),
                       details={"n2": r2, "n3": r3})


@_timed
def check_bridge_loop_free(n: int = 2) -> CheckResult:
    """The bridge on all models of size ``n`` whose membership has no loop."""
    prof = bridge_failure_profile(n)
    ok = prof["loop_free_failures"] == 0
    return CheckResult("3a", "bridge on loop-free membership", ok,
                       f"n={n}: {prof['loop_free_models'] - prof['loop_free_failures']}/"
                       f"{prof['loop_free_models']} loop-free models; {prof['failures_with_loop']} of "
                       f"{prof['failures']} failures (out of {prof['models']}) have a loop",
                       details=prof)


def bridge_failure_profile(n: int = 2) -> dict:
    """How bridge failures relate to membership loops ``a in a``."""
    from .semantics.models import iter_model_arrays

    br = PL.bridge()
    goal = S.iff(br.delta, br.delta_prime)
    stats = {"models": 0, "failures": 0, "failures_with_loop": 0, "loop_free_models": 0,
             "loop_free_failures": 0}
    for P, In in iter_model_arrays(n, "P+in"):
        ok = Engine(n, P=P, In=In).valid(goal)
        loop = In[:, np.arange(n), np.arange(n)].any(axis=1)
        stats["models"] += len(ok)
        stats["failures"] += int((~ok).sum())
        stats["failures_with_loop"] += int((~ok & loop).sum())
        stats["loop_free_models"] += int((~loop).sum())
        stats["loop_free_failures"] += int((~ok & ~loop).sum())
    return stats


# ---------------------------------------------------------------------------
# 4 and 5. modal and equational presentations

def fmd3_corpus(size: int = 200, seed: int = 0, depth: int = 3) -> list:
    return G.corpus(lambda r: G.random_fmd3(r, depth), random.Random(seed), size)


@_timed
def check_modal_correspondence(size: int = 200, seed: int = 0) -> CheckResult:
    fs = fmd3_corpus(size, seed)
    mods = [PL.fmd3_to_modal(f) for f in fs]
    P, _ = all_model_arrays(2, "P")
    res = Engine(2, P=P).run(fs)
    eng = Engine(2, P=P)
    bad = 0
    for b in range(P.shape[0]):
        fr = kripke.to_frame(Model.from_arrays(P[b]))
        for f, m in zip(fs, mods):
            want = eng.full(res[f])[b].reshape(-1)
            ts = kripke.truth_set(fr, m)
            got = np.array([(ts >> w) & 1 for w in range(8)], dtype=bool)
            bad += not np.array_equal(want, got)
    return CheckResult("4", "modal correspondence", bad == 0,
                       f"{len(fs)} formulas x {P.shape[0]} models at n=2; {bad} disagreements")


@_timed
def check_equational_agreement(size: int = 200, seed: int = 0) -> CheckResult:
    fs = fmd3_corpus(size, seed)
    terms = [PL.fmd3_to_equation(f) for f in fs]
    P, _ = all_model_arrays(2, "P")
    eng = Engine(2, P=P)
    res = eng.run(fs)
    triples = list(product(range(2), repeat=3))
    bad = 0
    for b in range(P.shape[0]):
        gen = frozenset(t for t in triples if P[b][t])
        alg = setalg.SetAlgebra3(2, {0: gen})
        for f, t in zip(fs, terms):
            arr = eng.full(res[f])[b]
            want = frozenset(tr for tr in triples if arr[tr])
            bad += setalg.set_algebra_eval(alg, t) != want
    return CheckResult("5", "equational agreement", bad == 0,
                       f"{len(fs)} terms x {P.shape[0]} models at n=2; {bad} disagreements")


# ---------------------------------------------------------------------------
# 6. proof library

def mutate_statement(rng: random.Random, stmt):
    """A different statement of the same language."""
    if isinstance(stmt, S.Equation):
        side = rng.choice(("lhs", "rhs"))
        t = getattr(stmt, side)
        choice = rng.randrange(3)
        if choice == 0:
            t2 = S.tminus(t)
        elif choice == 1:
            t2 = S.tcyl(rng.choice("fgh"), t)
        else:
            t2 = S.tplus(t, S.tvar(rng.randrange(3)))
        return S.Equation(t2, stmt.rhs) if side == "lhs" else S.Equation(stmt.lhs, t2)
    nodes = S.nodes(stmt)
    target = rng.choice(nodes)
    k = rng.randrange(4)
    if k == 0:
        repl = S.neg(target)
    elif k == 1:
        repl = S.prop_p() if stmt.lang == S.MODAL else S.atom_p()
    elif k == 2 and target.kind == S.EX:
        repl = S.exists(rng.choice([v for v in S.VAR3 if v != target.a]), target.b)
    elif k == 2 and target.kind == S.DIA:
        repl = S.diamond(rng.choice([i for i in (1, 2, 3) if i != target.a]), target.b)
    elif target.kind == S.OR:
        repl = S.disj(target.b, target.a)
    else:
        repl = S.disj(target, target)
    return _replace(stmt, target, repl)


def _replace(root, target, repl):
    memo = {target: repl}
    for n in S.nodes(root):
        if n in memo:
            continue
        k = n.kind
        if k == S.NOT:
            memo[n] = S.neg(memo[n.a])
        elif k == S.OR:
            memo[n] = S.disj(memo[n.a], memo[n.b])
        elif k == S.EX:
            memo[n] = S.exists(n.a, memo[n.b])
        elif k == S.DIA:
            memo[n] = S.diamond(n.a, memo[n.b])
        else:
            memo[n] = n
    return memo[root]


@_timed
def check_proof_library(mutations: int = 1000, seed: int = 0) -> CheckResult:
    from .proofs.checker import Proof, ProofLine

    lib = proof_library()
    rejected = [k for k, p in lib.items() if not check_proof(p).accepted]
    rng = random.Random(seed)
    names = sorted(lib)
    survived = []
    done = 0
    while done < mutations:
        name = rng.choice(names)
        p = lib[name]
        k = rng.randrange(len(p.lines))
        old = p.lines[k]
        new = mutate_statement(rng, old.statement)
        if new == old.statement:
            continue
        lines = list(p.lines)
        lines[k] = ProofLine(old.index, new, old.justification)
        done += 1
        if check_proof(Proof(p.system, lines, p.hypotheses)).accepted:
            survived.append((name, k + 1, render_stmt(new)))
    ok = not rejected and not survived
    return CheckResult("6", "proof library", ok,
                       f"{len(lib) - len(rejected)}/{len(lib)} proofs accepted; "
                       f"{mutations - len(survived)}/{mutations} mutations rejected",
                       details={"rejected": rejected, "survived": survived[:5]})


# ---------------------------------------------------------------------------
# 7. Ax / SAx build

_BUILD_SCRIPT = r"""
import hashlib, json, resource, sys, time
from df3forge import pairing as PC, pipeline as PL, syntax as S
t0 = time.perf_counter()
prm = PL.default_params()
ax = PC.ax_build(prm)
sax = PC.ax_build(prm, strong=True)
elapsed = time.perf_counter() - t0
digest = hashlib.sha256()
for f in (ax.formula, sax.formula):
    digest.update(S.render_shared(f).encode())
print(json.dumps({
    "H": len(PC.H), "ax_counts": ax.counts, "sax_counts": sax.counts,
    "ax_nodes": S.shared_size(ax.formula), "sax_nodes": S.shared_size(sax.formula),
    "seconds": elapsed, "peak_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024,
    "digest": digest.hexdigest()}))
"""


def run_ax_build() -> dict:
    out = subprocess.run([sys.executable, "-c", _BUILD_SCRIPT], capture_output=True,
                         text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


AX_EXPECTED = {"A1": 27 * 15 ** 3, "A2": 882, "A3": 2700, "A4": 9}


@_timed
def check_ax_build(runs: int = 2) -> CheckResult:
    reps = [run_ax_build() for _ in range(runs)]
    r = reps[0]
    counts_ok = r["H"] == 15 and all(r["ax_counts"].get(k) == v for k, v in AX_EXPECTED.items()) \
        and r["sax_counts"].get("A5") == 2
    det = len({x["digest"] for x in reps}) == 1 and len({x["ax_nodes"] for x in reps}) == 1
    fast = max(x["seconds"] for x in reps) < 60
    small = max(x["peak_mb"] for x in reps) < 2048
    ok = counts_ok and det and fast and small
    return CheckResult("7", "Ax/SAx build", ok,
                       f"|H|={r['H']}, counts {r['ax_counts']}, A5={r['sax_counts'].get('A5')}; "
                       f"nodes Ax={r['ax_nodes']} SAx={r['sax_nodes']}; "
                       f"{max(x['seconds'] for x in reps):.1f}s, "
                       f"peak {max(x['peak_mb'] for x in reps):.0f} MB; "
                       f"deterministic={det}", details={"runs": reps})


# ---------------------------------------------------------------------------
# 8. relation-algebra reduct over coded relations

def qp_witnesses(field) -> list:
    out = []
    for a, b in product(field, repeat=2):
        s = hf.kpair(a, b)
        for u, v in ((a, b), (a, a), (b, b)):
            out.append(hf.kpair(hf.kpair(u, s), hf.kpair(s, v)))
    return out


@_timed
def check_reduct(relations: int = 200, seed: int = 0) -> CheckResult:
    prm = PL.default_params()
    field = hf.hf_universe(2).elements
    pairs = list(product(field, repeat=2))
    cu = C.universes(C.comp_witnesses(field) + qp_witnesses(field), field)
    rng = random.Random(seed)
    fs, exp, tags = [], [], []
    for _ in range(relations):
        R = {p for p in pairs if rng.random() < 0.5}
        T = {p for p in pairs if rng.random() < 0.5}
        fs.append(PC.comp(prm, C.relation_formula(R), C.relation_formula(T)).formula)
        exp.append(C.codes_of(C.compose(R, T)))
        tags.append("COMP")
        fs.append(PC.conv(prm, C.relation_formula(R)).formula)
        exp.append(C.codes_of(C.converse(R)))
        tags.append("CONV")
    fs.append(PC.ident(prm).formula)
    exp.append(C.codes_of(C.identity(field)))
    tags.append("ID")
    p = PC.proj_eq(prm, "x", "1", "x", "00")
    q = PC.proj_eq(prm, "x", "1", "x", "01")
    cp, cq = PC.conv(prm, p), PC.conv(prm, q)
    idf = PC.ident(prm).formula
    below = S.conj(PC.ra_plus(PC.comp(prm, cp, p), PC.comp(prm, cq, q)), S.neg(idf))
    unit = S.disj(idf, PC.ra_neg(prm, idf))
    every = C.codes_of(pairs)
    fs += [below, PC.comp(prm, cp, q).formula, unit]
    exp += [set(), every, every]
    tags += ["QP_LE", "QP_EQ", "QP_UNIT"]
    reps = C.coded_check(fs, exp, cu)
    bad = [(t, r) for t, r in zip(tags, reps) if r.verdict != hf.TriState.TRUE_STABLE]
    by = {}
    for t, r in zip(tags, reps):
        by.setdefault(t, [0, 0])
        by[t][0] += r.verdict == hf.TriState.TRUE_STABLE
        by[t][1] += 1
    summary = ", ".join(f"{t} {a}/{n}" for t, (a, n) in by.items())
    return CheckResult("8", "relation-algebra reduct oracle", not bad,
                       f"TRUE_STABLE: {summary} (universes {cu.small.n}/{cu.big.n} elements)",
                       details={"failures": bad[:3]})


# ---------------------------------------------------------------------------
# 9. pipeline

@_timed
def check_pipeline(pairs: int = 20, seed: int = 0, time_limit: float = 120.0) -> CheckResult:
    problems = []
    outs = {}
    times = {}
    for name, f in PL.zf_corpus():
        t0 = time.perf_counter()
        g, _ = PL.tr(f, stats=False)
        times[name] = time.perf_counter() - t0
        outs[name] = g
        atoms = S.atoms_of(g)
        if g.lang != S.FMD3 or S.free_vars(g) or atoms != {S.atom_p()}:
            problems.append(f"{name}: not an FMD3 sentence over P(x,y,z)")
        if times[name] > time_limit:
            problems.append(f"{name}: {times[name]:.0f}s")
        if PL.tr(f, stats=False)[0] is not g:
            problems.append(f"{name}: nondeterministic")
    rng = random.Random(seed)
    goals = []
    for _ in range(pairs):
        a, b = G.random_l3_sentence(rng, 3), G.random_l3_sentence(rng, 3)
        goals.append(S.iff(PL.h(S.conj(a, b)), S.conj(PL.h(a), PL.h(b))))
    for _ in range(pairs):
        a, b = G.random_fol_sentence(rng, 3), G.random_fol_sentence(rng, 3)
        goals.append(S.iff(PL.tr(S.conj(a, b), stats=False)[0],
                              S.conj(PL.tr(a, stats=False)[0], PL.tr(b, stats=False)[0])))
    P, _ = all_model_arrays(2, "P")
    eng = Engine(2, P=P)
    valid = eng.valid_many(goals)
    nbad = sum(int((~v).sum()) > 0 for v in valid)
    if nbad:
        problems.append(f"{nbad} Boolean-preservation goals fail")
    guard = eng.valid(S.exists("x", S.conj(PL.sax_star(), PC.triplet_at(PL.default_params(), "1"))))
    summary = (f"{len(outs)} corpus sentences translated (max {max(times.values()):.0f}s); "
               f"{2 * pairs - nbad}/{2 * pairs} Boolean-preservation goals valid on 256 models; "
               f"guard SAx* & Triplet x_1 satisfiable in {int(guard.sum())}/256 models")
    return CheckResult("9", "pipeline well-formedness", not problems,
                       summary if not problems else summary + "; " + "; ".join(problems),
                       details={"times": times, "guard_models": int(guard.sum())})


# ---------------------------------------------------------------------------
# 10. reduce_f

CURATED_4VAR = {
    "singleton_of_empty": "Ev0. ((Av1. ~in(v1,v0)) & Ev2. (in(v0,v2) & Av3. (in(v3,v2) -> v3=v0)))",
    "upper_bound": "Av0 v1. ((Av2. (in(v2,v0) -> in(v2,v1))) -> Ev3. (in(v0,v3) & in(v1,v3)))",
    "distinct_copy": "Ev0 v1. (~v0=v1 & Av2. (in(v2,v0) <-> Ev3. (in(v3,v1) & v2=v3)))",
    "power_set": PL.ZF_TEXT["power_set"],
    "infinity": PL.ZF_TEXT["infinity"],
    "nested_union": "Av0. Ev1. (Av2. (in(v2,v1) -> Ev3. (in(v3,v0) & in(v2,v3))))",
    "member_chain2": "Ev0. Ev1. (in(v1,v0) & Ev2. (in(v2,v1) & Av3. ~in(v3,v2)))",
    "chain3": "Ev0 v1 v2 v3. (in(v0,v1) & in(v1,v2) & in(v2,v3))",
    "two_witnesses": "Av0 v1. Ev2 v3. (in(v2,v3) & (v0=v2 | v1=v3))",
    "union": PL.ZF_TEXT["union"],
}


def register_universe(nvars: int, base_rank: int = 2):
    base = hf.hf_universe(base_rank)
    seqs = [hf.kseq(list(t)) for t in product(base.elements, repeat=nvars)]
    small = base.extend(seqs)
    big = small.extend(hf.hf_universe(4).elements)
    return base, small, big


def register_oracle(f: S.Formula, g: S.Formula, base_rank: int = 2) -> hf.TriState:
    """``f`` over ``V_base`` against its register translation ``g`` over the
    closure of ``V_base`` under sequences (and a larger extension)."""
    from .semantics.engine import variables_of

    base, small, big = register_universe(len(S.all_vars(f)), base_rank)
    tf = bool(Engine(base.n, In=base.in_matrix()[None], variables=variables_of(f)).valid(f)[0])
    vals = [bool(Engine(u.n, In=u.in_matrix()[None]).valid(g)[0]) == tf for u in (small, big)]
    if vals[0] != vals[1]:
        return hf.TriState.UNSTABLE
    return hf.TriState.TRUE_STABLE if vals[0] else hf.TriState.FALSE_STABLE


def reduce_oracle(f: S.Formula) -> tuple[str, hf.TriState]:
    g = PL.reduce_f(f)
    path = PL.reduce_path(PL.fol_closure(f))
    if path == "register":
        return path, register_oracle(f, g)
    return path, hf.hf_oracle_equiv(f, g, 4, 1)


@_timed
def check_reduce_f(sentences: int = 100, seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(sentences):
        a, b = G.random_fol_sentence(rng, 3), G.random_fol_sentence(rng, 3)
        if PL.reduce_f(S.neg(a)) is not S.neg(PL.reduce_f(a)):
            bad += 1
        if PL.reduce_f(S.disj(a, b)) is not S.disj(PL.reduce_f(a), PL.reduce_f(b)):
            bad += 1
    verdicts = {}
    for name, text in CURATED_4VAR.items():
        verdicts[name] = reduce_oracle(S.parse(S.FOL, text))
    non = {k: f"{p}:{v}" for k, (p, v) in verdicts.items() if v != hf.TriState.TRUE_STABLE}
    paths = {}
    for p, _ in verdicts.values():
        paths[p] = paths.get(p, 0) + 1
    return CheckResult("10", "reduce_f contract", bad == 0 and not non,
                       f"{2 * sentences - bad}/{2 * sentences} commutation identities; "
                       f"{len(verdicts) - len(non)}/{len(verdicts)} curated TRUE_STABLE "
                       f"(paths {paths})" + (f"; not stable: {non}" if non else ""),
                       details={"verdicts": verdicts})


# ---------------------------------------------------------------------------
# driver

def digest(f: S.Formula) -> str:
    return hashlib.sha256(S.render_shared(f).encode()).hexdigest()


def acceptance_suite(level: str = "full", extra_schemas: dict | None = None) -> list:
    """Callables for the selftest table.  ``quick`` keeps to ``|U| <= 2``."""
    quick = level == "quick"
    suite = [
        lambda: check_soundness(instances=200 if quick else 1000,
                                random_models=0 if quick else 500,
                                extra_schemas=extra_schemas),
        lambda: check_substitution(corpus_size=500, sizes=(2,) if quick else (2, 3)),
        (lambda: check_bridge_loop_free(2)) if quick else (lambda: check_bridge()),
        lambda: check_modal_correspondence(),
        lambda: check_equational_agreement(),
        lambda: check_proof_library(mutations=200 if quick else 1000),
    ]
    if not quick:
        suite += [check_ax_build, check_reduct, check_pipeline, check_reduce_f,
                  check_modal_schemas, check_equational_axioms]
    return suite
