"""Hash-consed ASTs for the object languages, with parser and printer.

Formulas live in one of five languages:

* ``FMD3``  three variables, single atom ``P(x,y,z)``, no equality
* ``L3``    three variables, atom ``in(x,y)`` and equality ``u=v``
* ``FOL``   variables ``v0, v1, ...`` with ``in`` and ``=``
* ``MODAL`` one letter ``p`` with diamonds ``<1>``, ``<2>``, ``<3>``
* ``MIXED3`` three-variable formulas mentioning both ``P`` and ``in``/``=``
  (only needed for the bridge sentences)

The core only has negation, disjunction, existential quantification and
diamonds.  Everything else is sugar that the parser expands and the pretty
printer folds back.

Nodes are interned: building the same formula twice returns the very same
object, so ``is``/``==`` is content equality and a formula is a DAG with
full structural sharing.  Every node gets a ``uid`` larger than the uids of
its children, which gives a topological order for free.
"""

from __future__ import annotations

import itertools
import re
import sys
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

FMD3 = "FMD3"
L3 = "L3"
FOL = "FOL"
MODAL = "MODAL"
MIXED3 = "MIXED3"
META = "META"
EQ = "EQ"
LANGS = (FMD3, L3, FOL, MODAL, MIXED3)

VAR3 = ("x", "y", "z")

# node kinds
ATOM_P = "P"
ATOM_IN = "in"
ATOM_EQ = "eq"
ATOM_PROP = "p"
ATOM_META = "meta"
NOT = "not"
OR = "or"
EX = "ex"
DIA = "dia"
ATOMS = (ATOM_P, ATOM_IN, ATOM_EQ, ATOM_PROP, ATOM_META)

# term kinds
TVAR = "tvar"
PLUS = "plus"
MINUS = "minus"
CYL = {"f": "cf", "g": "cg", "h": "ch"}
CYL_NAME = {v: k for k, v in CYL.items()}


class LanguageViolation(ValueError):
    """A construct that is not part of the requested language."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)


class FormulaSyntaxError(SyntaxError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        super().__init__(message if pos is None else f"{message} (at offset {pos})")
        self.pos = pos
        self.text = text
        self.offset = None if pos is None else pos + 1


class FormulaTooLarge(ValueError):
    """Raised when a tree rendering would exceed the size limit."""


# ---------------------------------------------------------------------------
# variables

_FOLVAR = re.compile(r"v(0|[1-9][0-9]*)\Z")
_BITS: dict[str, int] = {"x": 1, "y": 2, "z": 4}


def is_var3(v: str) -> bool:
    return v in _BITS and v in VAR3


def is_folvar(v: str) -> bool:
    return isinstance(v, str) and _FOLVAR.match(v) is not None


def is_metavar(v) -> bool:
    return isinstance(v, str) and v.startswith("?")


def fol_index(v: str) -> int:
    return int(v[1:])


def folvar(i: int) -> str:
    if i < 0:
        raise ValueError("variable index must be >= 0")
    return f"v{i}"


def var_bit(v: str) -> int:
    b = _BITS.get(v)
    if b is None:
        if is_metavar(v):
            return 0
        if not is_folvar(v):
            raise LanguageViolation(f"not a variable: {v!r}")
        b = 1 << (3 + fol_index(v))
        _BITS[v] = b
    return b


def vars_of_mask(mask: int) -> frozenset[str]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(VAR3[i] if i < 3 else f"v{i - 3}")
        mask >>= 1
        i += 1
    return frozenset(out)


def var_sort_key(v: str):
    if v in VAR3:
        return (0, VAR3.index(v))
    if is_folvar(v):
        return (1, fol_index(v))
    return (2, v)


# ---------------------------------------------------------------------------
# interning

_TABLE: dict[tuple, object] = {}
_LOCK = threading.Lock()
_COUNTER = itertools.count()


class Formula:
    """An interned formula node.

    ``kind`` is one of the node kinds above.  Payload layout:
    ``not``: a = child; ``or``: a, b = children; ``ex``: a = variable,
    b = child; ``dia``: a = modality index, b = child; ``in``/``eq``:
    a, b = variable names; ``meta``: a = metavariable name.
    """

    __slots__ = ("kind", "a", "b", "uid", "fv", "lang", "__weakref__")

    def __repr__(self):
        try:
            text = render(self, limit=200)
        except FormulaTooLarge:
            text = f"<{self.kind} node #{self.uid}>"
        return f"Formula({text!r})"

    def __str__(self):
        return render(self)

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __reduce__(self):
        return (_rebuild_formula, (render_shared(self),))

    @property
    def children(self) -> tuple[Formula, ...]:
        k = self.kind
        if k == NOT:
            return (self.a,)
        if k == OR:
            return (self.a, self.b)
        if k == EX or k == DIA:
            return (self.b,)
        return ()


def _rebuild_formula(text):
    return parse_shared(text)


def _new(cls, key, lang, fv):
    with _LOCK:
        node = _TABLE.get(key)
        if node is None:
            node = object.__new__(cls)
            node.kind, node.a, node.b = key
            node.uid = next(_COUNTER)
            node.fv = fv
            node.lang = lang
            _TABLE[key] = node
    return node


def intern_table_size() -> int:
    return len(_TABLE)


def _join(l1: str, l2: str) -> str:
    if l1 == l2:
        return l1
    if l1 == META:
        return l2
    if l2 == META:
        return l1
    three = (FMD3, L3, MIXED3)
    if l1 in three and l2 in three:
        return MIXED3
    raise LanguageViolation(f"cannot combine {l1} and {l2} formulas")


# ---------------------------------------------------------------------------
# constructors

def atom_p() -> Formula:
    key = (ATOM_P, None, None)
    n = _TABLE.get(key)
    return n if n is not None else _new(Formula, key, FMD3, 7)


def atom_in(u: str, v: str) -> Formula:
    key = (ATOM_IN, u, v)
    n = _TABLE.get(key)
    if n is not None:
        return n
    if is_var3(u) and is_var3(v):
        if (u, v) != ("x", "y"):
            raise LanguageViolation(f"in({u},{v}) is not available; only in(x,y) is")
        lang = L3
    elif is_folvar(u) and is_folvar(v):
        lang = FOL
    else:
        raise LanguageViolation(f"bad arguments for in: {u!r}, {v!r}")
    return _new(Formula, key, lang, var_bit(u) | var_bit(v))


def atom_eq(u: str, v: str) -> Formula:
    key = (ATOM_EQ, u, v)
    n = _TABLE.get(key)
    if n is not None:
        return n
    if is_var3(u) and is_var3(v):
        lang = L3
    elif is_folvar(u) and is_folvar(v):
        lang = FOL
    else:
        raise LanguageViolation(f"bad arguments for '=': {u!r}, {v!r}")
    return _new(Formula, key, lang, var_bit(u) | var_bit(v))


def prop_p() -> Formula:
    key = (ATOM_PROP, None, None)
    n = _TABLE.get(key)
    return n if n is not None else _new(Formula, key, MODAL, 0)


def meta(name: str) -> Formula:
    """Formula metavariable, used only inside axiom-schema templates."""
    if not name.startswith("?"):
        name = "?" + name
    key = (ATOM_META, name, None)
    n = _TABLE.get(key)
    return n if n is not None else _new(Formula, key, META, 0)


def neg(f: Formula) -> Formula:
    key = (NOT, f, None)
    n = _TABLE.get(key)
    return n if n is not None else _new(Formula, key, f.lang, f.fv)


def disj(f: Formula, g: Formula) -> Formula:
    key = (OR, f, g)
    n = _TABLE.get(key)
    return n if n is not None else _new(Formula, key, _join(f.lang, g.lang), f.fv | g.fv)


def exists(v: str, f: Formula) -> Formula:
    key = (EX, v, f)
    n = _TABLE.get(key)
    if n is not None:
        return n
    lang = f.lang
    if lang == MODAL:
        raise LanguageViolation("quantifiers are not part of the modal language")
    if lang == FOL:
        if not is_folvar(v):
            raise LanguageViolation(f"FOL quantifier over non-FOL variable {v!r}")
    elif lang == META:
        if not (is_var3(v) or is_folvar(v) or is_metavar(v)):
            raise LanguageViolation(f"bad quantifier variable {v!r}")
    elif not (is_var3(v) or is_metavar(v)):
        raise LanguageViolation(f"{lang} quantifier over {v!r}; only x, y, z exist")
    return _new(Formula, key, lang, f.fv & ~var_bit(v))


def diamond(i, f: Formula) -> Formula:
    key = (DIA, i, f)
    n = _TABLE.get(key)
    if n is not None:
        return n
    if f.lang not in (MODAL, META):
        raise LanguageViolation(f"diamond applied to a {f.lang} formula")
    if not (i in (1, 2, 3) or is_metavar(i)):
        raise LanguageViolation(f"modality index must be 1, 2 or 3, got {i!r}")
    return _new(Formula, key, MODAL if f.lang == MODAL else META, 0)


def conj(f: Formula, g: Formula) -> Formula:
    return neg(disj(neg(f), neg(g)))


def imp(f: Formula, g: Formula) -> Formula:
    return disj(neg(f), g)


def iff(f: Formula, g: Formula) -> Formula:
    return conj(imp(f, g), imp(g, f))


def forall(v: str, f: Formula) -> Formula:
    return neg(exists(v, neg(f)))


def box(i, f: Formula) -> Formula:
    return neg(diamond(i, neg(f)))


def exists_many(vs: Iterable[str], f: Formula) -> Formula:
    for v in reversed(list(vs)):
        f = exists(v, f)
    return f


def forall_many(vs: Iterable[str], f: Formula) -> Formula:
    for v in reversed(list(vs)):
        f = forall(v, f)
    return f


def big_conj(fs: Sequence[Formula]) -> Formula:
    """Right-folded conjunction ``f1 & (f2 & (... & fn))``."""
    if not fs:
        raise ValueError("empty conjunction")
    acc = fs[-1]
    for f in reversed(fs[:-1]):
        acc = conj(f, acc)
    return acc


def big_disj(fs: Sequence[Formula]) -> Formula:
    if not fs:
        raise ValueError("empty disjunction")
    acc = fs[-1]
    for f in reversed(fs[:-1]):
        acc = disj(f, acc)
    return acc


def universal_closure(f: Formula) -> Formula:
    return forall_many(sorted(free_vars(f), key=var_sort_key), f)


# ---------------------------------------------------------------------------
# equational terms

class Term:
    """Interned term of the equational presentation (``+ - f g h``)."""

    __slots__ = ("kind", "a", "b", "uid", "fv", "lang", "__weakref__")

    def __repr__(self):
        return f"Term({render_term(self)!r})"

    def __str__(self):
        return render_term(self)

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __reduce__(self):
        return (parse_term, (render_term(self),))

    @property
    def children(self) -> tuple[Term, ...]:
        k = self.kind
        if k == PLUS:
            return (self.a, self.b)
        if k == TVAR:
            return ()
        return (self.a,)


def tvar(i: int) -> Term:
    key = (TVAR, i, None)
    n = _TABLE.get(key)
    return n if n is not None else _new(Term, key, EQ, 1 << i)


def tplus(s: Term, t: Term) -> Term:
    key = (PLUS, s, t)
    n = _TABLE.get(key)
    return n if n is not None else _new(Term, key, EQ, s.fv | t.fv)


def tminus(t: Term) -> Term:
    key = (MINUS, t, None)
    n = _TABLE.get(key)
    return n if n is not None else _new(Term, key, EQ, t.fv)


def tcyl(op: str, t: Term) -> Term:
    """Apply one of the unary closure operators ``f``, ``g``, ``h``."""
    key = (CYL[op], t, None)
    n = _TABLE.get(key)
    return n if n is not None else _new(Term, key, EQ, t.fv)


def term_vars(t: Term) -> frozenset[int]:
    m, i, out = t.fv, 0, []
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return render(self)


# ---------------------------------------------------------------------------
# DAG utilities

def nodes(*roots) -> list:
    """All nodes reachable from ``roots``, children before parents."""
    seen = set()
    out = []
    stack = list(roots)
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        out.append(n)
        stack.extend(n.children)
    out.sort(key=_uid)
    return out


def _uid(n):
    return n.uid


def shared_size(*roots) -> int:
    return len(nodes(*roots))


def tree_size(f) -> int:
    size: dict = {}
    for n in nodes(f):
        size[n] = 1 + sum(size[c] for c in n.children)
    return size[f]


def depth(f) -> int:
    d: dict = {}
    for n in nodes(f):
        cs = n.children
        d[n] = 1 + max((d[c] for c in cs), default=0)
    return d[f]


def dag_stats(f) -> tuple[int, int, int]:
    """``(shared_size, tree_size, depth)`` in one traversal."""
    size: dict = {}
    d: dict = {}
    ns = nodes(f)
    for n in ns:
        cs = n.children
        if not cs:
            size[n] = d[n] = 1
        elif len(cs) == 1:
            c = cs[0]
            size[n] = 1 + size[c]
            d[n] = 1 + d[c]
        else:
            a, b = cs
            size[n] = 1 + size[a] + size[b]
            d[n] = 1 + (d[a] if d[a] > d[b] else d[b])
    return len(ns), size[f], d[f]


def free_vars(f: Formula) -> frozenset[str]:
    return vars_of_mask(f.fv)


def atoms_of(f: Formula) -> set[Formula]:
    return {n for n in nodes(f) if n.kind in ATOMS}


def bound_vars(f: Formula) -> set[str]:
    return {n.a for n in nodes(f) if n.kind == EX}


def all_vars(f: Formula) -> set[str]:
    out = set(free_vars(f))
    for n in nodes(f):
        if n.kind == EX:
            out.add(n.a)
        elif n.kind in (ATOM_IN, ATOM_EQ):
            out.update((n.a, n.b))
    return out


def substitute_meta(template: Formula, bindings: dict) -> Formula:
    """Instantiate formula metavariables (``?phi``), variable metavariables
    (``?v``) and modality metavariables (``?i``) of a schema template."""
    memo: dict = {}
    for n in nodes(template):
        k = n.kind
        if k == ATOM_META:
            memo[n] = bindings[n.a]
        elif k == NOT:
            memo[n] = neg(memo[n.a])
        elif k == OR:
            memo[n] = disj(memo[n.a], memo[n.b])
        elif k == EX:
            v = bindings[n.a] if is_metavar(n.a) else n.a
            memo[n] = exists(v, memo[n.b])
        elif k == DIA:
            i = bindings[n.a] if is_metavar(n.a) else n.a
            memo[n] = diamond(i, memo[n.b])
        else:
            memo[n] = n
    return memo[template]


@dataclass(frozen=True)
class Classification:
    is_sentence: bool
    is_fmd3_one_free_x: bool
    free_variable_set: frozenset


def classify(f: Formula) -> Classification:
    fv = free_vars(f)
    return Classification(
        is_sentence=not fv,
        is_fmd3_one_free_x=f.lang == FMD3 and fv <= {"x"},
        free_variable_set=fv,
    )


# ---------------------------------------------------------------------------
# printing

DEFAULT_RENDER_LIMIT = 2_000_000


def render(obj, pretty: bool = False, limit: int = DEFAULT_RENDER_LIMIT) -> str:
    """Canonical ASCII text.  ``pretty`` folds ``& -> <-> A [i]`` back in."""
    if isinstance(obj, Equation):
        return f"{render_term(obj.lhs)} = {render_term(obj.rhs)}"
    if isinstance(obj, Term):
        return render_term(obj)
    if tree_size(obj) > limit:
        raise FormulaTooLarge(
            f"tree rendering exceeds {limit} nodes; use render_shared instead")
    text: dict = {}
    is_open: dict = {}
    for n in nodes(obj):
        text[n], is_open[n] = _render_node(n, text, is_open, pretty)
    return text[obj]


def _operand(n, text, is_open):
    return f"({text[n]})" if is_open[n] else text[n]


def _render_node(n, text, is_open, pretty):
    k = n.kind
    if k == ATOM_P:
        return "P(x,y,z)", False
    if k == ATOM_IN:
        return f"in({n.a},{n.b})", False
    if k == ATOM_EQ:
        return f"{n.a}={n.b}", False
    if k == ATOM_PROP:
        return "p", False
    if k == ATOM_META:
        return n.a, False
    if pretty:
        sugared = _sugar(n, text, is_open)
        if sugared is not None:
            return sugared
    if k == NOT:
        c = n.a
        return "~" + text[c], is_open[c]
    if k == OR:
        return f"({_operand(n.a, text, is_open)} | {text[n.b]})", False
    if k == EX:
        return f"E{n.a}. {text[n.b]}", True
    if k == DIA:
        return f"<{n.a}>{text[n.b]}", is_open[n.b]
    raise AssertionError(k)


def _sugar(n, text, is_open):
    k = n.kind
    if k == NOT:
        c = n.a
        if c.kind == OR and c.a.kind == NOT and c.b.kind == NOT:
            left, right = c.a.a, c.b.a
            if (left.kind == OR and right.kind == OR and left.a.kind == NOT
                    and right.a.kind == NOT and left.a.a is right.b and right.a.a is left.b):
                a, b = left.a.a, left.b
                return f"({_operand(a, text, is_open)} <-> {text[b]})", False
            return f"({_operand(left, text, is_open)} & {text[right]})", False
        if c.kind == EX and c.b.kind == NOT:
            return f"A{c.a}. {text[c.b.a]}", True
        if c.kind == DIA and c.b.kind == NOT:
            body = c.b.a
            return f"[{c.a}]{text[body]}", is_open[body]
        return None
    if k == OR and n.a.kind == NOT:
        return f"({_operand(n.a.a, text, is_open)} -> {text[n.b]})", False
    return None


def render_term(t: Term) -> str:
    text: dict = {}
    for n in nodes(t):
        k = n.kind
        if k == TVAR:
            text[n] = f"X{n.a}"
        elif k == PLUS:
            text[n] = f"({text[n.a]} + {text[n.b]})"
        elif k == MINUS:
            text[n] = "-" + text[n.a]
        else:
            text[n] = f"{CYL_NAME[k]} {text[n.a]}"
    return text[t]


def render_shared(f: Formula) -> str:
    """Line-based shared rendering: one ``$k = ...`` definition per node.

    Unlike :func:`render` its size is linear in the number of distinct
    subformulas, so it is the format used for very large formulas.
    """
    ids: dict = {}
    lines = ["# df3-forge shared formula", f"lang {f.lang}"]
    for n in nodes(f):
        k = n.kind
        if k in ATOMS:
            body = _render_node(n, {}, {}, False)[0]
        else:
            cs = n.children
            ref = {c: f"${ids[c]}" for c in cs}
            op = {c: False for c in cs}
            body = _render_node(n, ref, op, False)[0]
        ids[n] = len(ids)
        lines.append(f"${ids[n]} = {body}")
    lines.append(f"root ${ids[f]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"""
    \s*(?:
      (?P<op><->|->|!=|:=|[()~|&,.=+\-;])
    | (?P<dia><(?:[0-9]+|\?\w+)>)
    | (?P<box>\[(?:[0-9]+|\?\w+)\])
    | (?P<ref>\$[0-9]+)
    | (?P<id>\??[A-Za-z_][A-Za-z0-9_]*)
    )""", re.X)
_QUANT_VARS = re.compile(r"(?:x|y|z|v(?:0|[1-9][0-9]*))+\Z")
_ONE_VAR = re.compile(r"x|y|z|v(?:0|[1-9][0-9]*)")
_EQ_ID = re.compile(r"(?:[fgh]|X[0-9]+)+\Z")
_EQ_PIECE = re.compile(r"[fgh]|X[0-9]+")


def _tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text, lang, refs=None, template=False):
        self.text = text
        self.lang = lang
        self.toks = _tokenize(text)
        self.i = 0
        self.refs = refs
        self.template = template

    # token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, value):
        t = self.peek()
        if t[0] in ("op",) and t[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        t = self.peek()
        if t[1] != value or t[0] == "eof":
            self.fail(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2])
        self.i += 1
        return t

    def fail(self, msg, pos=None):
        raise FormulaSyntaxError(msg, self.peek()[2] if pos is None else pos, self.text)

    def violation(self, msg, pos):
        raise LanguageViolation(msg, pos)

    def done(self):
        t = self.peek()
        if t[0] != "eof":
            self.fail(f"unexpected {t[1]!r}", t[2])

    # formulas
    def formula(self):
        left = self.imp()
        if self.accept("<->"):
            return iff(left, self.formula())
        return left

    def imp(self):
        left = self.disj()
        if self.accept("->"):
            return imp(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.accept("|"):
            left = disj(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.accept("&"):
            left = conj(left, self.unary())
        return left

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "~":
            self.i += 1
            return neg(self.unary())
        if kind in ("dia", "box"):
            self.i += 1
            if self.lang not in (MODAL, None):
                self.violation("modalities are not part of " + self.lang, pos)
            body = val[1:-1]
            idx = body if body.startswith("?") else int(body)
            if idx not in (1, 2, 3) and not is_metavar(idx):
                self.violation(f"modality index {idx} out of range 1..3", pos)
            sub = self.unary()
            return diamond(idx, sub) if kind == "dia" else box(idx, sub)
        if kind == "op" and val == "(":
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if kind == "ref":
            self.i += 1
            if self.refs is None:
                self.fail("references are only allowed in shared files", pos)
            try:
                return self.refs[int(val[1:])]
            except KeyError:
                self.fail(f"undefined reference {val}", pos)
        if kind == "id":
            q = self.quantifier()
            if q is not None:
                return q
            return self.atom()
        self.fail(f"unexpected {val or 'end of input'!r}", pos)

    def quantifier(self):
        kind, val, pos = self.peek()
        if val[0] not in "EA":
            return None
        rest = val[1:]
        vs = []
        j = 1
        if rest:
            if not _QUANT_VARS.match(rest):
                return None
            vs = _ONE_VAR.findall(rest)
        while self.peek(j)[0] == "id" and (
                _QUANT_VARS.match(self.peek(j)[1]) or is_metavar(self.peek(j)[1])):
            tok = self.peek(j)[1]
            vs.extend([tok] if is_metavar(tok) else _ONE_VAR.findall(tok))
            j += 1
            if self.peek(j)[1] == ",":
                j += 1
        if not vs or self.peek(j)[1] != ".":
            return None
        self.i += j + 1
        for v in vs:
            self.check_var(v, pos)
        body = self.formula()
        if val[0] == "E":
            return exists_many(vs, body)
        return forall_many(vs, body)

    def check_var(self, v, pos):
        lang = self.lang
        if is_metavar(v):
            if not self.template:
                self.fail(f"metavariable {v} outside a schema", pos)
            return
        if lang == FOL:
            if not is_folvar(v):
                self.violation(f"{v} is not a FOL variable (use v0, v1, ...)", pos)
        elif lang in (FMD3, L3, MIXED3):
            if not is_var3(v):
                self.violation(f"{v} is not one of x, y, z", pos)
        elif lang == MODAL:
            self.violation("variables are not part of the modal language", pos)
        elif not (is_var3(v) or is_folvar(v)):
            self.fail(f"{v!r} is not a variable", pos)

    def var(self):
        kind, val, pos = self.next()
        if kind != "id":
            self.fail(f"expected a variable, found {val!r}", pos)
        self.check_var(val, pos)
        return val

    def atom(self):
        kind, val, pos = self.next()
        lang = self.lang
        if val == "P" and self.peek()[1] == "(":
            if lang in (L3, FOL, MODAL):
                self.violation(f"P is not part of {lang}", pos)
            self.expect("(")
            args = [self.var()]
            self.expect(",")
            args.append(self.var())
            self.expect(",")
            args.append(self.var())
            self.expect(")")
            if tuple(args) != VAR3:
                self.violation(f"P({','.join(args)}) is not available; only P(x,y,z) is", pos)
            return atom_p()
        if val == "in" and self.peek()[1] == "(":
            if lang in (FMD3, MODAL):
                self.violation(f"in is not part of {lang}", pos)
            self.expect("(")
            u = self.var()
            self.expect(",")
            v = self.var()
            self.expect(")")
            if is_var3(u) and (u, v) != ("x", "y"):
                self.violation(f"in({u},{v}) is not available; only in(x,y) is", pos)
            try:
                return atom_in(u, v)
            except LanguageViolation as e:
                self.violation(str(e), pos)
        if val == "p" and lang in (MODAL, None) and self.peek()[1] not in ("=", "!="):
            return prop_p()
        if is_metavar(val) and self.peek()[1] not in ("=", "!="):
            if not self.template:
                self.fail(f"metavariable {val} outside a schema", pos)
            return meta(val)
        if self.peek()[1] in ("=", "!="):
            if lang in (FMD3, MODAL):
                self.violation(f"equality is not part of {lang}", pos)
            self.check_var(val, pos)
            chain = [val]
            negated = False
            while self.peek()[1] in ("=", "!="):
                op = self.next()[1]
                if op == "!=":
                    if negated or len(chain) > 1:
                        self.fail("'!=' cannot be chained", pos)
                    negated = True
                chain.append(self.var())
            try:
                parts = [atom_eq(a, b) for a, b in zip(chain, chain[1:])]
            except LanguageViolation as e:
                self.violation(str(e), pos)
            f = big_conj(parts)
            return neg(f) if negated else f
        self.fail(f"unknown atom {val!r}", pos)

    # terms
    def equation(self):
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        return Equation(lhs, rhs)

    def term(self):
        left = self.tunary()
        while self.accept("+"):
            left = tplus(left, self.tunary())
        return left

    def tunary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.i += 1
            return tminus(self.tunary())
        if kind == "op" and val == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if kind == "id" and _EQ_ID.match(val):
            self.i += 1
            pieces = _EQ_PIECE.findall(val)
            if pieces[-1] in CYL:
                inner = self.tunary()
            else:
                inner = tvar(int(pieces[-1][1:]))
                pieces = pieces[:-1]
                if any(p not in CYL for p in pieces):
                    self.fail(f"malformed term {val!r}", pos)
            for p in reversed(pieces):
                inner = tcyl(p, inner)
            return inner
        self.fail(f"unexpected {val or 'end of input'!r} in term", pos)


_DEEP = threading.local()
_DEEP_STACK = 1 << 30
_DEEP_LIMIT = 400_000


def _with_stack(fn):
    """Run a recursive ``fn`` on a thread with a large C stack.

    Raising the recursion limit alone overflows the main thread's stack on
    deeply nested input.
    """
    if getattr(_DEEP, "active", False):
        return fn()
    box: dict = {}

    def run():
        _DEEP.active = True
        try:
            box["value"] = fn()
        except BaseException as e:  # re-raised in the caller
            box["error"] = e

    with _LOCK_DEEP:
        limit = sys.getrecursionlimit()
        old = threading.stack_size()
        threading.stack_size(_DEEP_STACK)
        sys.setrecursionlimit(max(limit, _DEEP_LIMIT))
        try:
            t = threading.Thread(target=run)
            t.start()
        finally:
            threading.stack_size(old)
        t.join()
        sys.setrecursionlimit(limit)
    if "error" in box:
        err = box["error"]
        if isinstance(err, RecursionError):
            raise FormulaTooLarge("formula nesting too deep for the recursive parser") from None
        raise err
    return box["value"]


_LOCK_DEEP = threading.Lock()


def parse(lang: str, text: str):
    """Parse ``text`` as a formula of ``lang`` (or an equation for ``EQ``)."""
    lang = _norm_lang(lang)
    p = _Parser(text, lang)

    def go():
        if lang == EQ:
            out = p.equation()
        else:
            out = p.formula()
        p.done()
        return out

    out = _with_stack(go)
    if lang != EQ:
        _check_lang(out, lang)
    return out


def parse_term(text: str) -> Term:
    p = _Parser(text, EQ)

    def go():
        t = p.term()
        p.done()
        return t

    return _with_stack(go)


def parse_template(text: str, lang: str | None = None) -> Formula:
    """Parse a schema template; ``?name`` tokens are metavariables."""
    p = _Parser(text, lang, template=True)

    def go():
        f = p.formula()
        p.done()
        return f

    return _with_stack(go)


def parse_shared(text: str) -> Formula:
    """Inverse of :func:`render_shared`."""
    refs: dict[int, Formula] = {}
    lang = None
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("lang "):
            lang = _norm_lang(line[5:].strip())
            continue
        if line.startswith("root "):
            ref = line[5:].strip()
            root = refs[int(ref.lstrip("$"))]
            continue
        m = re.match(r"\$([0-9]+)\s*=\s*(.*)\Z", line)
        if not m:
            raise FormulaSyntaxError(f"line {lineno}: expected '$k = formula'")
        p = _Parser(m.group(2), lang if lang != MIXED3 else None, refs=refs)
        try:
            f = p.formula()
            p.done()
        except FormulaSyntaxError as e:
            raise FormulaSyntaxError(f"line {lineno}: {e}") from None
        refs[int(m.group(1))] = f
    if root is None:
        raise FormulaSyntaxError("shared file has no root line")
    if lang is not None:
        _check_lang(root, lang)
    return root


def _norm_lang(lang: str) -> str:
    u = lang.upper()
    aliases = {"FMD": FMD3, "FMD3": FMD3, "L3": L3, "FOL": FOL, "LW": FOL,
               "MODAL": MODAL, "MIXED": MIXED3, "MIXED3": MIXED3,
               "EQ": EQ, "EQUATIONAL": EQ}
    if u not in aliases:
        raise ValueError(f"unknown language {lang!r}")
    return aliases[u]


def _check_lang(f: Formula, lang: str) -> None:
    if lang == MIXED3:
        if f.lang not in (FMD3, L3, MIXED3):
            raise LanguageViolation(f"expected a three-variable formula, got {f.lang}")
    elif f.lang != lang:
        raise LanguageViolation(f"expected a {lang} formula, got {f.lang}")


def iter_formula_lines(text: str) -> Iterator[str]:
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line
