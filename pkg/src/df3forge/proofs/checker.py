"""Proof objects, the line-based proof file format and the checker.

File format (one line per step, ``#`` starts a comment)::

    system: HILBERT3
    1. P(x,y,z) ; HYP h
    2. P(x,y,z) -> Ex. P(x,y,z) ; AX 3 phi:=P(x,y,z); v:=x
    3. Ex. P(x,y,z) ; MP 1 2

Justifications: ``HYP name``, ``AX id [bindings]``, ``MP i j``, ``GEN v i``
(``GEN k i`` in the modal system), and for equations ``EQ refl``,
``EQ sym i``, ``EQ trans i j``, ``EQ cong op i [j]`` and
``EQ inv i X0:=t; X1:=s``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .. import syntax as S
from . import schemas as SC
from .tautology import TooManyLetters

Statement = Union[S.Formula, S.Equation]


class MalformedLine(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class LanguageMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# justifications

@dataclass(frozen=True)
class Hyp:
    name: str


@dataclass(frozen=True)
class Axiom:
    schema: str
    bindings: tuple = ()  # sorted (key, value) pairs

    @staticmethod
    def of(schema: str, **bindings) -> "Axiom":
        return Axiom(schema, tuple(sorted(bindings.items())))


@dataclass(frozen=True)
class MP:
    i: int
    j: int


@dataclass(frozen=True)
class Gen:
    v: object  # variable name, or modality index in the modal system
    i: int


@dataclass(frozen=True)
class EqRule:
    rule: str
    premises: tuple = ()
    op: str | None = None
    subst: tuple = ()


Justification = Union[Hyp, Axiom, MP, Gen, EqRule]


@dataclass(frozen=True)
class ProofLine:
    index: int
    statement: Statement
    justification: Justification


@dataclass
class Proof:
    system: str
    lines: list
    hypotheses: dict = field(default_factory=dict)

    @property
    def conclusion(self) -> Statement:
        return self.lines[-1].statement

    def __post_init__(self):
        if self.system not in SC.SYSTEMS:
            raise ValueError(f"unknown proof system {self.system!r}")


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    first_failure: tuple | None = None  # (line index, reason)

    def __bool__(self):
        return self.accepted


# ---------------------------------------------------------------------------
# checking

def _premise(stmts: dict, i, at: int):
    if not isinstance(i, int) or i < 1 or i >= at:
        raise MalformedLine(f"premise {i} is not an earlier line", at)
    return stmts[i]


def _check_axiom(system, stmt, j: Axiom) -> str | None:
    if j.schema not in SC.ORDER[system]:
        return f"schema {j.schema} is not an axiom of {system}"
    tpl = SC.template(j.schema)
    if tpl == SC.TAUTOLOGY or not j.bindings:
        try:
            ok = SC.match_schema(j.schema, stmt) is not None
        except TooManyLetters as e:
            return str(e)
        return None if ok else f"not an instance of ({j.schema})"
    b = dict(j.bindings)
    try:
        if isinstance(tpl, tuple):
            ok = any(SC.instantiate(j.schema, b, k) == stmt for k in range(len(tpl)))
        else:
            inst = SC.instantiate(j.schema, b)
            key = {(k if k.startswith("?") else "?" + k): v for k, v in b.items()}
            ok = inst is stmt and SC.side_condition(j.schema, key)
    except (KeyError, S.LanguageViolation) as e:
        return f"bad bindings for ({j.schema}): {e}"
    return None if ok else f"bindings do not produce this instance of ({j.schema})"


_EQ_ALIAS = {"reflexivity": "refl", "symmetry": "sym", "transitivity": "trans",
             "congruence": "cong", "invariance": "inv"}


def _check_eq(stmt, j: EqRule, stmts, at) -> str | None:
    if not isinstance(stmt, S.Equation):
        return "equational rule applied to a formula"
    prem = [_premise(stmts, i, at) for i in j.premises]
    if any(not isinstance(p, S.Equation) for p in prem):
        return "equational rule with a formula premise"
    r = _EQ_ALIAS.get(j.rule, j.rule)
    if r == "refl" and not prem:
        return None if stmt.lhs is stmt.rhs else "reflexivity needs t = t"
    if r == "sym" and len(prem) == 1:
        p = prem[0]
        return None if (stmt.lhs, stmt.rhs) == (p.rhs, p.lhs) else "not the symmetric equation"
    if r == "trans" and len(prem) == 2:
        a, b = prem
        if a.rhs is not b.lhs:
            return "premises do not chain"
        return None if (stmt.lhs, stmt.rhs) == (a.lhs, b.rhs) else "wrong transitive conclusion"
    if r == "cong":
        op = j.op
        if op == "+" and len(prem) == 2:
            want = (S.tplus(prem[0].lhs, prem[1].lhs), S.tplus(prem[0].rhs, prem[1].rhs))
        elif op == "-" and len(prem) == 1:
            want = (S.tminus(prem[0].lhs), S.tminus(prem[0].rhs))
        elif op in S.CYL and len(prem) == 1:
            want = (S.tcyl(op, prem[0].lhs), S.tcyl(op, prem[0].rhs))
        else:
            return f"bad congruence step {op!r}"
        return None if (stmt.lhs, stmt.rhs) == want else "wrong congruence conclusion"
    if r == "inv" and len(prem) == 1:
        sub = dict(j.subst)
        p = prem[0]
        want = (SC.subst_term(p.lhs, sub), SC.subst_term(p.rhs, sub))
        return None if (stmt.lhs, stmt.rhs) == want else "not a substitution instance"
    return f"unknown equational rule {r!r} with {len(prem)} premises"


def _check_line(system, line: ProofLine, stmts, hyps) -> str | None:
    stmt, j, at = line.statement, line.justification, line.index
    if isinstance(j, Hyp):
        if j.name not in hyps:
            return f"unknown hypothesis {j.name!r}"
        return None if hyps[j.name] == stmt else f"statement differs from hypothesis {j.name!r}"
    if isinstance(j, Axiom):
        return _check_axiom(system, stmt, j)
    if isinstance(j, MP):
        a, b = _premise(stmts, j.i, at), _premise(stmts, j.j, at)
        if not (isinstance(a, S.Formula) and isinstance(b, S.Formula)):
            return "MP needs formula premises"
        for minor, major in ((a, b), (b, a)):
            if major.kind == S.OR and major.a.kind == S.NOT and major.a.a is minor \
                    and major.b is stmt:
                return None
        return "MP premises do not have the shapes A and A -> B"
    if isinstance(j, Gen):
        a = _premise(stmts, j.i, at)
        if system == SC.EQUATIONAL or not isinstance(a, S.Formula):
            return "generalization is not a rule of this system"
        try:
            want = S.box(j.v, a) if system == SC.MODAL else S.forall(j.v, a)
        except S.LanguageViolation as e:
            return str(e)
        return None if want is stmt else "not the generalization of the premise"
    if isinstance(j, EqRule):
        if system != SC.EQUATIONAL:
            return "equational rules belong to the equational system"
        return _check_eq(stmt, j, stmts, at)
    return f"unknown justification {j!r}"


def _lang_of(stmt) -> str:
    return S.EQ if isinstance(stmt, S.Equation) else stmt.lang


def check_proof(p: Proof, hypotheses: dict | None = None) -> Verdict:
    """Accept iff every line is justified; stop at the first failure."""
    if not p.lines:
        return Verdict(False, (0, "empty proof"))
    hyps = dict(p.hypotheses)
    hyps.update(hypotheses or {})
    want = SC.SYSTEM_LANG[p.system]
    for h, f in hyps.items():
        if _lang_of(f) != want:
            raise LanguageMismatch(f"hypothesis {h!r} is {_lang_of(f)}, system needs {want}")
    stmts: dict = {}
    for k, line in enumerate(p.lines, 1):
        if line.index != k:
            raise MalformedLine(f"expected line number {k}", line.index)
        if _lang_of(line.statement) != want:
            raise LanguageMismatch(
                f"line {k}: {_lang_of(line.statement)} statement in a {want} proof")
        why = _check_line(p.system, line, stmts, hyps)
        if why is not None:
            return Verdict(False, (k, why))
        stmts[k] = line.statement
    return Verdict(True)


# ---------------------------------------------------------------------------
# text format

_LINE = re.compile(r"\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*?)\s*\Z")


def _parse_stmt(system, text):
    lang = SC.SYSTEM_LANG[system]
    return S.parse(lang, text)


def _parse_bindings(system, text, at):
    out = {}
    for piece in filter(None, (s.strip() for s in text.split(";"))):
        if ":=" not in piece:
            raise MalformedLine(f"binding {piece!r} lacks ':='", at)
        key, val = (s.strip() for s in piece.split(":=", 1))
        if system == SC.EQUATIONAL:
            if not re.fullmatch(r"X\d+", key):
                raise MalformedLine(f"equational binding {key!r} must be a term variable", at)
            out[key] = S.parse_term(val)
        elif key.lstrip("?") in ("v", "w"):
            out["?" + key.lstrip("?")] = val
        elif key.lstrip("?") in ("i", "j"):
            out["?" + key.lstrip("?")] = int(val)
        else:
            out["?" + key.lstrip("?")] = S.parse(SC.SYSTEM_LANG[system], val)
    return out


def _ints(parts, n, at):
    if len(parts) != n:
        raise MalformedLine(f"expected {n} line numbers", at)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise MalformedLine("line numbers must be integers", at) from None


def _parse_just(system, text, at) -> Justification:
    head, _, rest = text.strip().partition(" ")
    head = head.upper()
    rest = rest.strip()
    if head == "HYP":
        if not rest:
            raise MalformedLine("HYP needs a name", at)
        return Hyp(rest)
    if head == "AX":
        schema, _, bind = rest.partition(" ")
        if not schema:
            raise MalformedLine("AX needs a schema id", at)
        schema = schema.strip("()")
        b = _parse_bindings(system, bind, at)
        if system == SC.EQUATIONAL:
            b = {int(k[1:]): v for k, v in b.items()}
        return Axiom(schema, tuple(sorted(b.items(), key=lambda kv: str(kv[0]))))
    if head == "MP":
        i, j = _ints(rest.split(), 2, at)
        return MP(i, j)
    if head == "GEN":
        parts = rest.split()
        if len(parts) != 2:
            raise MalformedLine("GEN needs a variable and a line", at)
        v = int(parts[0]) if system == SC.MODAL else parts[0]
        return Gen(v, _ints(parts[1:], 1, at)[0])
    if head == "EQ":
        parts = rest.split(None, 1)
        if not parts:
            raise MalformedLine("EQ needs a rule", at)
        rule = parts[0].lower()
        tail = parts[1] if len(parts) > 1 else ""
        if rule == "refl":
            return EqRule("refl")
        if rule == "sym":
            return EqRule("sym", tuple(_ints(tail.split(), 1, at)))
        if rule == "trans":
            return EqRule("trans", tuple(_ints(tail.split(), 2, at)))
        if rule == "cong":
            op, *nums = tail.split()
            return EqRule("cong", tuple(_ints(nums, len(nums), at)), op=op)
        if rule == "inv":
            num, _, bind = tail.partition(" ")
            b = _parse_bindings(system, bind, at)
            sub = tuple(sorted((int(k[1:]), v) for k, v in b.items()))
            return EqRule("inv", tuple(_ints([num], 1, at)), subst=sub)
        raise MalformedLine(f"unknown equational rule {rule!r}", at)
    raise MalformedLine(f"unknown justification {head!r}", at)


def parse_proof(text: str, system: str | None = None, hypotheses: dict | None = None) -> Proof:
    lines = []
    hyps = dict(hypotheses or {})
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        low = line.lower()
        if low.startswith("system:"):
            system = line.split(":", 1)[1].strip().upper()
            if system not in SC.SYSTEMS:
                raise MalformedLine(f"unknown system {system!r}")
            continue
        if low.startswith("hyp:"):
            name, _, ftext = line[4:].partition(":=")
            if system is None:
                raise MalformedLine("hypotheses must follow the system header")
            hyps[name.strip()] = _parse_stmt(system, ftext.strip())
            continue
        m = _LINE.match(line)
        if not m:
            raise MalformedLine(f"cannot read {line!r}")
        if system is None:
            raise MalformedLine("no proof system given")
        at = int(m.group(1))
        try:
            stmt = _parse_stmt(system, m.group(2))
        except (S.FormulaSyntaxError, S.LanguageViolation) as e:
            raise MalformedLine(str(e), at) from None
        lines.append(ProofLine(at, stmt, _parse_just(system, m.group(3), at)))
    if system is None:
        raise MalformedLine("no proof system given")
    return Proof(system, lines, hyps)


def render_stmt(stmt) -> str:
    return str(stmt) if isinstance(stmt, S.Equation) else S.render(stmt, pretty=True)


def _render_binding(k, v):
    key = f"X{k}" if isinstance(k, int) else str(k).lstrip("?")
    if isinstance(v, S.Formula):
        val = S.render(v, pretty=True)
    elif isinstance(v, S.Term):
        val = S.render_term(v)
    else:
        val = str(v)
    return f"{key}:={val}"


def render_just(j: Justification) -> str:
    if isinstance(j, Hyp):
        return f"HYP {j.name}"
    if isinstance(j, Axiom):
        b = "; ".join(_render_binding(k, v) for k, v in j.bindings)
        return f"AX {j.schema}" + (f" {b}" if b else "")
    if isinstance(j, MP):
        return f"MP {j.i} {j.j}"
    if isinstance(j, Gen):
        return f"GEN {j.v} {j.i}"
    parts = ["EQ", j.rule]
    if j.op:
        parts.append(j.op)
    parts += [str(i) for i in j.premises]
    if j.subst:
        parts.append("; ".join(_render_binding(k, v) for k, v in j.subst))
    return " ".join(parts)


def render_proof(p: Proof) -> str:
    out = [f"system: {p.system}"]
    for name, f in p.hypotheses.items():
        out.append(f"hyp: {name} := {render_stmt(f)}")
    for ln in p.lines:
        out.append(f"{ln.index}. {render_stmt(ln.statement)} ; {render_just(ln.justification)}")
    return "\n".join(out) + "\n"
