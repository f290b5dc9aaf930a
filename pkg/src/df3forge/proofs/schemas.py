"""Axiom schemas of the four presentations and a one-way matcher.

Formula templates use ``?phi``/``?psi`` for formulas, ``?v``/``?w`` for
variables and ``?i``/``?j`` for modality indices.  Equational templates use
``X0, X1, X2`` as term metavariables; the schemas quantified over a
cylindrification ``F`` are expanded into one variant per letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .. import syntax as S

HILBERT3 = "HILBERT3"
HILBERT3_ALT8 = "HILBERT3_ALT8"
RE_EQFREE = "RE_EQFREE"
MODAL = "MODAL"
EQUATIONAL = "EQUATIONAL"
SYSTEMS = (HILBERT3, HILBERT3_ALT8, RE_EQFREE, MODAL, EQUATIONAL)

SYSTEM_LANG = {HILBERT3: S.FMD3, HILBERT3_ALT8: S.FMD3, RE_EQFREE: S.FMD3,
               MODAL: S.MODAL, EQUATIONAL: S.EQ}

TAUTOLOGY = "taut"

_FORMULA_SCHEMAS = {
    "1": TAUTOLOGY,
    "2": "(A ?v. (?phi -> ?psi)) -> ((E ?v. ?phi) -> E ?v. ?psi)",
    "3": "?phi -> E ?v. ?phi",
    "4": "(E ?v. E ?v. ?phi) -> E ?v. ?phi",
    "5": "(E ?v. (?phi | ?psi)) <-> ((E ?v. ?phi) | E ?v. ?psi)",
    "6": "(E ?v. ~E ?v. ?phi) -> ~E ?v. ?phi",
    "7": "(E ?v. E ?w. ?phi) -> E ?w. E ?v. ?phi",
    "8": "(E ?v. (?phi & E ?v. ?psi)) <-> ((E ?v. ?phi) & E ?v. ?psi)",
    "V1": TAUTOLOGY,
    "V2": "(A ?v. (?phi -> ?psi)) -> ((A ?v. ?phi) -> A ?v. ?psi)",
    "V3": "(A ?v. ?phi) -> ?phi",
    "V4": "?phi -> A ?v. ?phi",
    "B": TAUTOLOGY,
    "K": "[?i](?phi -> ?psi) -> ([?i]?phi -> [?i]?psi)",
    "S5": "<?i>?phi -> [?i]<?i>?phi",
    "C1": "<?i><?j>?phi -> <?j><?i>?phi",
    "C2": "<?i>[?j]?phi -> [?j]<?i>?phi",
}

_EQ_SCHEMAS = {
    "B1": ["X0 + X1 = X1 + X0"],
    "B2": ["X0 + (X1 + X2) = (X0 + X1) + X2"],
    "B3": ["-(-(X0 + X1) + -(X0 + -X1)) = X0"],
    "D1": [f"X0 + {F} X0 = {F} X0" for F in "fgh"],
    "D2": [f"{F} {F} X0 = {F} X0" for F in "fgh"],
    "D3": [f"{F}(X0 + X1) = {F} X0 + {F} X1" for F in "fgh"],
    "D4": [f"{F}(-{F} X0) = -{F} X0" for F in "fgh"],
    "D5": ["f g X0 = g f X0", "f h X0 = h f X0", "g h X0 = h g X0"],
}

ORDER = {
    HILBERT3: ("1", "2", "3", "4", "5", "6", "7"),
    HILBERT3_ALT8: ("1", "2", "3", "4", "5", "7", "8"),
    RE_EQFREE: ("V1", "V2", "V3", "V4"),
    MODAL: ("B", "K", "S5", "C1", "C2"),
    EQUATIONAL: ("B1", "B2", "B3", "D1", "D2", "D3", "D4", "D5"),
}


class UnknownSchema(KeyError):
    pass


@lru_cache(maxsize=None)
def template(schema: str):
    """Parsed template: a META formula, ``TAUTOLOGY``, or a tuple of equations."""
    if schema in _FORMULA_SCHEMAS:
        t = _FORMULA_SCHEMAS[schema]
        return t if t == TAUTOLOGY else S.parse_template(t)
    if schema in _EQ_SCHEMAS:
        return tuple(S.parse(S.EQ, t) for t in _EQ_SCHEMAS[schema])
    raise UnknownSchema(schema)


def schema_text(schema: str) -> str:
    if schema in _FORMULA_SCHEMAS:
        t = _FORMULA_SCHEMAS[schema]
        return "propositional tautology" if t == TAUTOLOGY else t
    return " ; ".join(_EQ_SCHEMAS[schema])


def side_condition(schema: str, bindings: dict) -> bool:
    """((V4)) requires ``v`` not free in ``phi``."""
    if schema == "V4":
        return bindings["?v"] not in S.free_vars(bindings["?phi"])
    return True


# ---------------------------------------------------------------------------
# matching

def _bind(b: dict, key, value) -> bool:
    old = b.get(key, _MISSING)
    if old is _MISSING:
        b[key] = value
        return True
    return old is value or old == value


_MISSING = object()


def match_formula(tpl: S.Formula, f: S.Formula, b: dict | None = None) -> dict | None:
    b = {} if b is None else b
    stack = [(tpl, f)]
    while stack:
        t, g = stack.pop()
        k = t.kind
        if k == S.ATOM_META:
            if g.lang == S.META or not _bind(b, t.a, g):
                return None
            continue
        if k != g.kind:
            return None
        if k in (S.EX, S.DIA):
            if S.is_metavar(t.a):
                if not _bind(b, t.a, g.a):
                    return None
            elif t.a != g.a:
                return None
            stack.append((t.b, g.b))
        elif k == S.NOT:
            stack.append((t.a, g.a))
        elif k == S.OR:
            stack.append((t.a, g.a))
            stack.append((t.b, g.b))
        elif t is not g:
            return None
    return b


def match_term(tpl: S.Term, t: S.Term, b: dict | None = None) -> dict | None:
    b = {} if b is None else b
    stack = [(tpl, t)]
    while stack:
        p, q = stack.pop()
        if p.kind == S.TVAR:
            if not _bind(b, p.a, q):
                return None
            continue
        if p.kind != q.kind:
            return None
        stack.extend(zip(p.children, q.children))
    return b


def match_equation(tpl: S.Equation, e: S.Equation) -> dict | None:
    b = match_term(tpl.lhs, e.lhs)
    if b is None:
        return None
    return match_term(tpl.rhs, e.rhs, b)


def match_schema(schema: str, stmt) -> dict | None:
    """Bindings under which ``stmt`` is an instance of ``schema``."""
    from .tautology import is_tautology

    tpl = template(schema)
    if tpl == TAUTOLOGY:
        return {} if isinstance(stmt, S.Formula) and is_tautology(stmt) else None
    if isinstance(tpl, tuple):
        if not isinstance(stmt, S.Equation):
            return None
        for variant in tpl:
            b = match_equation(variant, stmt)
            if b is not None:
                return b
        return None
    if not isinstance(stmt, S.Formula):
        return None
    b = match_formula(tpl, stmt)
    if b is None or not side_condition(schema, b):
        return None
    return b


def match_axiom(system: str, stmt) -> tuple[str, dict] | None:
    """First schema of ``system`` (in listing order) that ``stmt`` instantiates."""
    for schema in ORDER[system]:
        b = match_schema(schema, stmt)
        if b is not None:
            return schema, b
    return None


# ---------------------------------------------------------------------------
# instantiation

def instantiate(schema: str, bindings: dict, variant: int = 0):
    """Build the instance of a schema; keys may omit the leading ``?``."""
    tpl = template(schema)
    if tpl == TAUTOLOGY:
        raise ValueError("tautology schemas have no template")
    if isinstance(tpl, tuple):
        eq = tpl[variant]
        sub = {int(str(k).lstrip("X")): v for k, v in bindings.items()}
        return S.Equation(subst_term(eq.lhs, sub), subst_term(eq.rhs, sub))
    b = {(k if str(k).startswith("?") else "?" + str(k)): v for k, v in bindings.items()}
    return S.substitute_meta(tpl, b)


def subst_term(t: S.Term, sub: dict) -> S.Term:
    """Simultaneous substitution of terms for term variables."""
    memo: dict = {}
    for n in S.nodes(t):
        k = n.kind
        if k == S.TVAR:
            memo[n] = sub.get(n.a, n)
        elif k == S.PLUS:
            memo[n] = S.tplus(memo[n.a], memo[n.b])
        elif k == S.MINUS:
            memo[n] = S.tminus(memo[n.a])
        else:
            memo[n] = S.tcyl(S.CYL_NAME[k], memo[n.a])
    return memo[t]


@dataclass(frozen=True)
class SchemaInfo:
    schema: str
    system: str
    text: str


def schemas_of(system: str) -> list[SchemaInfo]:
    return [SchemaInfo(s, system, schema_text(s)) for s in ORDER[system]]
