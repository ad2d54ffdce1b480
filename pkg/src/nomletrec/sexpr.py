"""S-expression reader and printer for expressions and problem files.

Token conventions: ``a``..``z`` followed by letters/digits are atoms, ``?X``
expression variables, ``@A`` atom variables, ``%E`` environment variables.
Any other bare token is a 0-ary function symbol (``0``, ``True``); a 0-ary
symbol whose name looks like an atom must be written ``(c)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .terms import (
    ID, App, Atom, AtomSusp, AtomVar, Binding, EnvVar, ExprVar, Lam, Letrec, Perm,
    Susp, SwapPerm, apply_perm,
)

ATOM_RE = re.compile(r"^[a-z][a-z0-9]*$")
KEYWORDS = {"lam", "letrec", "perm"}


class ParseError(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class Tok:
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Tok]:
    toks = []
    line, col, i = 1, 1, 0
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
        elif c.isspace():
            col, i = col + 1, i + 1
        elif c == ";":
            while i < n and src[i] != "\n":
                i += 1
        elif c in "()":
            toks.append(Tok(c, line, col))
            col, i = col + 1, i + 1
        else:
            j = i
            while j < n and not src[j].isspace() and src[j] not in "();":
                j += 1
            toks.append(Tok(src[i:j], line, col))
            col += j - i
            i = j
    return toks


def read_all(src: str) -> list:
    """Read every datum; lists become Python lists of Tok/list."""
    toks = tokenize(src)
    pos = 0

    def datum():
        nonlocal pos
        if pos >= len(toks):
            last = toks[-1] if toks else Tok("", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        t = toks[pos]
        pos += 1
        if t.text == ")":
            raise ParseError("unexpected ')'", t.line, t.col)
        if t.text != "(":
            return t
        out = [t]  # keep the open paren for positions
        while True:
            if pos >= len(toks):
                raise ParseError("unclosed '('", t.line, t.col)
            if toks[pos].text == ")":
                pos += 1
                return out
            out.append(datum())

    data = []
    while pos < len(toks):
        data.append(datum())
    return data


def _pos(d):
    t = d[0] if isinstance(d, list) else d
    return t.line, t.col


def _err(msg, d):
    raise ParseError(msg, *_pos(d))


def _items(d):
    return d[1:]


def _is_tok(d, text=None):
    return isinstance(d, Tok) and (text is None or d.text == text)


# ---------------------------------------------------------------------------
# permutations in swapping-list form


def as_swaps(p) -> tuple:
    if isinstance(p, Perm):
        return tuple(p.to_swaps())
    if isinstance(p, SwapPerm):
        return p.swaps
    raise TypeError(p)


def make_perm(swaps: tuple):
    """Ground swap lists become ``Perm``; others stay ``SwapPerm``."""
    if all(isinstance(x, Atom) and isinstance(y, Atom) for x, y in swaps):
        return Perm.from_swaps(swaps)
    return SwapPerm(tuple(swaps))


def compose_perms(p, q):
    """p o q for either representation."""
    if isinstance(p, Perm) and isinstance(q, Perm):
        return p.compose(q)
    return make_perm(as_swaps(p) + as_swaps(q))


def perm_on_leaf(p, w):
    """Apply a permutation to an atom-like leaf (atom, atom var or suspended V)."""
    if isinstance(p, Perm) and p.is_identity():
        return w
    if isinstance(w, Atom):
        if isinstance(p, Perm):
            return p(w)
        return AtomSusp(p, w)
    if isinstance(w, AtomVar):
        return AtomSusp(p, w)
    if isinstance(w, AtomSusp):
        q = compose_perms(p, w.perm)
        if isinstance(q, Perm) and isinstance(w.var, Atom):
            return q(w.var)
        if isinstance(q, Perm) and q.is_identity():
            return w.var
        return AtomSusp(q, w.var)
    raise TypeError(w)


def push_perm(p, e):
    """Push a permutation of either representation down to the leaves."""
    if isinstance(p, Perm) and not _has_av(e):
        return apply_perm(p, e)
    if isinstance(p, Perm) and p.is_identity():
        return e
    if isinstance(e, (Atom, AtomVar, AtomSusp)):
        return perm_on_leaf(p, e)
    if isinstance(e, Susp):
        return Susp(compose_perms(p, e.perm), e.var)
    if isinstance(e, Lam):
        return Lam(perm_on_leaf(p, e.binder), push_perm(p, e.body))
    if isinstance(e, App):
        return App(e.fn, tuple(push_perm(p, a) for a in e.args))
    if isinstance(e, Letrec):
        items = tuple(Binding(perm_on_leaf(p, b.binder), push_perm(p, b.rhs))
                      if isinstance(b, Binding) else b for b in e.bindings)
        return Letrec(items, push_perm(p, e.body))
    raise TypeError(e)


def _has_av(e) -> bool:
    if isinstance(e, (AtomVar, AtomSusp)):
        return True
    if isinstance(e, Susp):
        return isinstance(e.perm, SwapPerm)
    if isinstance(e, Lam):
        return _has_av(e.binder) or _has_av(e.body)
    if isinstance(e, App):
        return any(_has_av(a) for a in e.args)
    if isinstance(e, Letrec):
        return _has_av(e.body) or any(
            isinstance(b, EnvVar) or _has_av(b.binder) or _has_av(b.rhs) for b in e.bindings)
    return False


# ---------------------------------------------------------------------------
# expressions


def parse_leaf(d):
    """Parse a binder or atom-like position: ``a``, ``@A`` or ``(perm ... V)``."""
    if isinstance(d, Tok):
        if ATOM_RE.match(d.text) and d.text not in KEYWORDS:
            return Atom(d.text)
        if d.text.startswith("@") and len(d.text) > 1:
            return AtomVar(d.text[1:])
        _err(f"expected an atom or atom variable, got {d.text!r}", d)
    if len(d) >= 2 and _is_tok(d[1], "perm"):
        if len(d) != 4:
            _err("perm expects a swap list and a target", d)
        p = _parse_swaps(d[2])
        return perm_on_leaf(p, parse_leaf(d[3]))
    _err("expected an atom or atom variable", d)


def _parse_swaps(d):
    if not isinstance(d, list):
        _err("expected a swap list", d)
    swaps = []
    for s in _items(d):
        if not isinstance(s, list) or len(s) != 3:
            _err("a swap is a pair (w w)", s)
        swaps.append((parse_leaf(s[1]), parse_leaf(s[2])))
    return make_perm(tuple(swaps))


def parse_expr(d):
    if isinstance(d, Tok):
        t = d.text
        if t.startswith("?") and len(t) > 1:
            return Susp(ID, ExprVar(t[1:]))
        if t.startswith("@") and len(t) > 1:
            return AtomVar(t[1:])
        if t.startswith("%"):
            _err("environment variable outside a letrec environment", d)
        if t in KEYWORDS:
            _err(f"keyword {t!r} used as an expression", d)
        if ATOM_RE.match(t):
            return Atom(t)
        return App(t, ())
    if len(d) < 2:
        _err("empty application", d)
    head = d[1]
    if not isinstance(head, Tok):
        _err("function position must be a symbol", head)
    h = head.text
    if h == "lam":
        if len(d) != 4:
            _err("lam expects a binder and a body", d)
        return Lam(parse_leaf(d[2]), parse_expr(d[3]))
    if h == "letrec":
        if len(d) != 4 or not isinstance(d[2], list):
            _err("letrec expects a binding list and a body", d)
        items = []
        for b in _items(d[2]):
            if isinstance(b, Tok) and b.text.startswith("%") and len(b.text) > 1:
                items.append(EnvVar(b.text[1:]))
            elif isinstance(b, list) and len(b) == 3:
                items.append(Binding(parse_leaf(b[1]), parse_expr(b[2])))
            else:
                _err("a binding is (binder expr) or %E", b)
        return Letrec(tuple(items), parse_expr(d[3]))
    if h == "perm":
        if len(d) != 4:
            _err("perm expects a swap list and a target", d)
        p = _parse_swaps(d[2])
        return push_perm(p, parse_expr(d[3]))
    if h[0] in "?@%(" or h in KEYWORDS:
        _err(f"bad function symbol {h!r}", head)
    return App(h, tuple(parse_expr(a) for a in d[2:]))


def parse(src: str):
    data = read_all(src)
    if len(data) != 1:
        if not data:
            raise ParseError("empty input", 1, 1)
        _err("expected exactly one expression", data[1])
    return parse_expr(data[0])


# ---------------------------------------------------------------------------
# printing


def show_perm(p) -> str:
    return "(" + " ".join(f"({show(x)} {show(y)})" for x, y in as_swaps(p)) + ")"


def show(e) -> str:
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, AtomVar):
        return "@" + e.name
    if isinstance(e, ExprVar):
        return "?" + e.name
    if isinstance(e, EnvVar):
        return "%" + e.name
    if isinstance(e, AtomSusp):
        return f"(perm {show_perm(e.perm)} {show(e.var)})"
    if isinstance(e, Susp):
        if isinstance(e.perm, Perm) and e.perm.is_identity():
            return "?" + e.var.name
        return f"(perm {show_perm(e.perm)} ?{e.var.name})"
    if isinstance(e, Lam):
        return f"(lam {show(e.binder)} {show(e.body)})"
    if isinstance(e, App):
        if not e.args:
            if ATOM_RE.match(e.fn) or e.fn in KEYWORDS:
                return f"({e.fn})"
            return e.fn
        return "(" + " ".join([e.fn] + [show(a) for a in e.args]) + ")"
    if isinstance(e, Letrec):
        items = []
        for b in e.bindings:
            if isinstance(b, EnvVar):
                items.append("%" + b.name)
            else:
                items.append(f"({show(b.binder)} {show(b.rhs)})")
        return f"(letrec ({' '.join(items)}) {show(e.body)})"
    if hasattr(e, "show"):
        return e.show()
    raise TypeError(e)


# ---------------------------------------------------------------------------
# problem files


@dataclass
class Problem:
    """Unification problem: equations plus freshness constraints."""

    eqs: list = field(default_factory=list)
    fresh: list = field(default_factory=list)

    def show(self) -> str:
        parts = [f"(eq {show(s)} {show(t)})" for s, t in self.eqs]
        parts += [f"(fresh {show(a)} {show(e)})" for a, e in self.fresh]
        return "(problem" + "".join("\n  " + p for p in parts) + ")"


@dataclass
class MatchProblem:
    """Matching problem: pattern/target pairs with ground targets."""

    eqs: list = field(default_factory=list)
    fresh: list = field(default_factory=list)

    def show(self) -> str:
        parts = [f"(le {show(s)} {show(t)})" for s, t in self.eqs]
        parts += [f"(fresh {show(a)} {show(e)})" for a, e in self.fresh]
        return "(match" + "".join("\n  " + p for p in parts) + ")"


def parse_problem(src: str):
    data = read_all(src)
    if len(data) != 1 or not isinstance(data[0], list) or len(data[0]) < 2:
        raise ParseError("expected a single (problem ...) or (match ...) form",
                         *(_pos(data[0]) if data else (1, 1)))
    d = data[0]
    kind = d[1]
    if not _is_tok(kind) or kind.text not in ("problem", "match"):
        _err("expected 'problem' or 'match'", kind)
    rel = "eq" if kind.text == "problem" else "le"
    prob = Problem() if rel == "eq" else MatchProblem()
    for item in d[2:]:
        if not isinstance(item, list) or len(item) != 4 or not _is_tok(item[1]):
            _err(f"expected ({rel} e e) or (fresh v e)", item)
        tag = item[1].text
        if tag == rel:
            prob.eqs.append((parse_expr(item[2]), parse_expr(item[3])))
        elif tag == "fresh":
            prob.fresh.append((parse_leaf(item[2]), parse_expr(item[3])))
        else:
            _err(f"unknown clause {tag!r}", item[1])
    return prob


def parse_edges(src: str) -> list[tuple[str, str]]:
    """Edge list: one ``v1 v2`` pair per line, ``#`` starts a comment."""
    edges = []
    for lineno, raw in enumerate(src.splitlines(), 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if len(parts) != 2:
            raise ParseError("expected two vertex names", lineno, 1)
        edges.append((parts[0], parts[1]))
    return edges
