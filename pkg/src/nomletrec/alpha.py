"""Alpha-equivalence and garbage analysis for ground letrec expressions."""
from __future__ import annotations

from collections import Counter

from .terms import App, Atom, Binding, Lam, Letrec, free_atoms, shape


class _Slot:
    """A binder occurrence; letrec slots belong to a group of the same letrec pair."""

    __slots__ = ("group",)

    def __init__(self, group=None):
        self.group = group


class _Search:
    def __init__(self):
        self.ml: dict = {}
        self.mr: dict = {}

    def eq(self, s, t, envl, envr):
        if isinstance(s, Atom):
            if not isinstance(t, Atom):
                return
            sl, sr = envl.get(s), envr.get(t)
            if sl is None or sr is None:
                if sl is None and sr is None and s == t:
                    yield
                return
            if sl.group is None or sr.group is None:
                if sl is sr:
                    yield
                return
            if sl.group is not sr.group:
                return
            if sl in self.ml:
                if self.ml[sl] is sr:
                    yield
                return
            if sr in self.mr:
                return
            # the atom pair forces this binding correspondence
            self.ml[sl], self.mr[sr] = sr, sl
            yield
            del self.ml[sl], self.mr[sr]
        elif isinstance(s, Lam):
            if not isinstance(t, Lam):
                return
            slot = _Slot()
            yield from self.eq(s.body, t.body, {**envl, s.binder: slot}, {**envr, t.binder: slot})
        elif isinstance(s, App):
            if not isinstance(t, App) or s.fn != t.fn or len(s.args) != len(t.args):
                return
            yield from self._seq(s.args, t.args, 0, envl, envr)
        elif isinstance(s, Letrec):
            if not isinstance(t, Letrec) or len(s.bindings) != len(t.bindings):
                return
            yield from self._letrec(s, t, envl, envr)
        else:
            raise TypeError(f"alpha_eq expects ground expressions, got {s!r}")

    def _seq(self, xs, ys, i, envl, envr):
        if i == len(xs):
            yield
            return
        for _ in self.eq(xs[i], ys[i], envl, envr):
            yield from self._seq(xs, ys, i + 1, envl, envr)

    def _letrec(self, s, t, envl, envr):
        lhs = [b.rhs for b in s.bindings]
        rhs = [b.rhs for b in t.bindings]
        if Counter(map(shape, lhs)) != Counter(map(shape, rhs)):
            return
        group = object()
        ls = [_Slot(group) for _ in lhs]
        rs = [_Slot(group) for _ in rhs]
        envl = {**envl, **{b.binder: sl for b, sl in zip(s.bindings, ls)}}
        envr = {**envr, **{b.binder: sr for b, sr in zip(t.bindings, rs)}}
        ridx = {sr: j for j, sr in enumerate(rs)}
        n = len(lhs)

        def loop(i):
            if i == n:
                yield
                return
            sl = ls[i]
            if sl in self.ml:
                j = ridx[self.ml[sl]]
                for _ in self.eq(lhs[i], rhs[j], envl, envr):
                    yield from loop(i + 1)
                return
            want = shape(lhs[i])
            for j, sr in enumerate(rs):
                if sr in self.mr or shape(rhs[j]) != want:
                    continue
                self.ml[sl], self.mr[sr] = sr, sl
                for _ in self.eq(lhs[i], rhs[j], envl, envr):
                    yield from loop(i + 1)
                del self.ml[sl], self.mr[sr]

        for _ in self.eq(s.body, t.body, envl, envr):
            yield from loop(0)


def alpha_eq(e1, e2) -> bool:
    """Decide e1 ~ e2 for ground expressions.

    Bound atoms are compared through binder slots; a letrec pair opens a group of
    slots whose bijection is found by backtracking, where any atom comparison
    between two unassigned slots of the group forces their correspondence.
    """
    search = _Search()
    for _ in search.eq(e1, e2, {}, {}):
        return True
    return False


# ---------------------------------------------------------------------------
# garbage


def garbage_split(bindings, body):
    """Split an environment into (garbage, non-garbage) with maximal garbage.

    A binding is kept iff its binder is reachable from the free atoms of the
    body through the free atoms of kept right-hand sides.
    """
    by_binder = {b.binder: b for b in bindings}
    live: set = set()
    todo = [a for a in free_atoms(body) if a in by_binder]
    while todo:
        a = todo.pop()
        if a in live:
            continue
        live.add(a)
        todo.extend(x for x in free_atoms(by_binder[a].rhs) if x in by_binder and x not in live)
    garbage = tuple(b for b in bindings if b.binder not in live)
    kept = tuple(b for b in bindings if b.binder in live)
    return garbage, kept


def is_garbage_free(e) -> bool:
    if isinstance(e, Lam):
        return is_garbage_free(e.body)
    if isinstance(e, App):
        return all(is_garbage_free(a) for a in e.args)
    if isinstance(e, Letrec):
        garbage, _ = garbage_split(e.bindings, e.body)
        return not garbage and is_garbage_free(e.body) and all(
            is_garbage_free(b.rhs) for b in e.bindings if isinstance(b, Binding))
    return True
