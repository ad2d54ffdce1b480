"""Permutation groups over atoms: composition, membership and generator reduction.

Membership is decided with a base and strong generating set built by the
Schreier-Sims algorithm over the finite carrier of atoms moved by the inputs.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .terms import ID, Perm


def compose(p: Perm, q: Perm) -> Perm:
    return p.compose(q)


def invert(p: Perm) -> Perm:
    return p.inverse()


def domain(p: Perm) -> frozenset:
    return p.domain()


# permutations of range(n) as tuples: (p*q)[x] = p[q[x]]

def _mul(p: tuple, q: tuple) -> tuple:
    return tuple(map(p.__getitem__, q))


def _inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class _Level:
    __slots__ = ("base", "gens", "trans", "inv")

    def __init__(self, base: int, ident: tuple):
        self.base = base
        self.gens: list[tuple] = []
        self.trans: dict[int, tuple] = {base: ident}
        self.inv: dict[int, tuple] = {base: ident}  # inverses of the transversal

    def grow_orbit(self):
        queue = list(self.trans)
        while queue:
            x = queue.pop()
            u = self.trans[x]
            for g in self.gens:
                y = g[x]
                if y not in self.trans:
                    self.trans[y] = w = _mul(g, u)
                    self.inv[y] = _inv(w)
                    queue.append(y)


class StabilizerChain:
    """Base and strong generating set for the group generated by ``gens``."""

    def __init__(self, gens: Iterable[tuple], n: int):
        self.n = n
        self.ident = tuple(range(n))
        self.levels: list[_Level] = []
        self._done: set = set()  # Schreier generators already sifted; stay valid as the chain grows
        for g in gens:
            self.add(g)

    def add(self, g: tuple) -> bool:
        """Extend the group by ``g``; report whether it was new."""
        h, j = self._sift(g, 0)
        if h == self.ident:
            return False
        self._insert(h, 0, j)
        self._close()
        return True

    def copy(self) -> "StabilizerChain":
        out = StabilizerChain((), self.n)
        for lvl in self.levels:
            new = _Level(lvl.base, self.ident)
            new.gens = list(lvl.gens)
            new.trans = dict(lvl.trans)
            new.inv = dict(lvl.inv)
            out.levels.append(new)
        out._done = set(self._done)
        return out

    def _sift(self, g: tuple, start: int) -> tuple[tuple, int]:
        for k in range(start, len(self.levels)):
            lvl = self.levels[k]
            u = lvl.inv.get(g[lvl.base])
            if u is None:
                return g, k
            g = _mul(u, g)
        return g, len(self.levels)

    def _insert(self, h: tuple, lo: int, hi: int):
        """Add h as a strong generator of every level lo..hi (h fixes their earlier bases)."""
        for k in range(lo, hi + 1):
            if k == len(self.levels):
                moved = next(x for x in range(self.n) if h[x] != x)
                self.levels.append(_Level(moved, self.ident))
            self.levels[k].gens.append(h)
            self.levels[k].grow_orbit()

    def _close(self):
        done = self._done
        changed = True
        while changed:
            changed = False
            for i in range(len(self.levels)):
                lvl = self.levels[i]
                for x in list(lvl.trans):
                    for gi, s in enumerate(lvl.gens):
                        key = (i, x, gi)
                        if key in done:
                            continue
                        done.add(key)
                        schreier = _mul(lvl.inv[s[x]], _mul(s, lvl.trans[x]))
                        h, j = self._sift(schreier, i + 1)
                        if h != self.ident:
                            self._insert(h, i + 1, j)
                            changed = True

    def contains(self, g: tuple) -> bool:
        h, j = self._sift(g, 0)
        return j == len(self.levels) and h == self.ident

    def order(self) -> int:
        out = 1
        for lvl in self.levels:
            out *= len(lvl.trans)
        return out


def _carrier(perms: Iterable[Perm]) -> list:
    atoms: set = set()
    for p in perms:
        atoms |= p.domain()
    return sorted(atoms)


def _encode(p: Perm, index: dict, n: int) -> tuple:
    out = list(range(n))
    for a, b in p.items():
        out[index[a]] = index[b]
    return tuple(out)


class PermGroup:
    """The subgroup generated by a list of ground permutations."""

    def __init__(self, gens: Sequence[Perm] = ()):
        self.gens = list(gens)
        self._chain = None
        self._carrier: list = []

    def _build(self, extra: Perm | None = None):
        carrier = _carrier(self.gens + ([extra] if extra is not None else []))
        if self._chain is None or not set(carrier) <= set(self._carrier):
            self._carrier = carrier
            index = {a: i for i, a in enumerate(carrier)}
            n = len(carrier)
            self._index = index
            self._chain = StabilizerChain((_encode(g, index, n) for g in self.gens), n)
        return self._chain

    def contains(self, p: Perm) -> bool:
        if p.is_identity():
            return True
        if not self.gens:
            return False
        if not p.domain() <= set().union(*(g.domain() for g in self.gens)):
            return False
        chain = self._build(p)
        return chain.contains(_encode(p, self._index, chain.n))

    __contains__ = contains

    def add(self, p: Perm) -> bool:
        """Add ``p`` as a generator unless already a member; report whether it was added."""
        if self.contains(p):
            return False
        self.gens.append(p)
        self._chain = None
        return True

    def order(self) -> int:
        if not self.gens:
            return 1
        return self._build().order()

    def extended(self, p: Perm) -> "PermGroup":
        """A new group generated by these generators and ``p``, reusing the chain when possible."""
        out = PermGroup(self.gens + [p])
        if self._chain is not None and p.domain() <= set(self._carrier):
            out._carrier = self._carrier
            out._index = self._index
            out._chain = self._chain.copy()
            out._chain.add(_encode(p, self._index, self._chain.n))
        return out


class GroupCache:
    """Groups keyed by generator tuple; a new key extends the group of its longest cached prefix."""

    def __init__(self):
        self._groups: dict = {}

    def get(self, gens: Sequence[Perm]) -> PermGroup:
        key = tuple(gens)
        grp = self._groups.get(key)
        if grp is None:
            prev = self._groups.get(key[:-1]) if key else None
            grp = prev.extended(key[-1]) if prev is not None else PermGroup(key)
            self._groups[key] = grp
        return grp


def member(p: Perm, gens: Sequence[Perm]) -> bool:
    """Is ``p`` in the group generated by ``gens``?"""
    return PermGroup(gens).contains(p)


def reduce(gens: Sequence[Perm]) -> list[Perm]:
    """Greedy filter in input order: drop a generator if the remaining ones generate it.

    The remaining set only shrinks during the scan, so every kept generator
    stays outside the group generated by the others.
    """
    kept = list(gens)
    i = 0
    while i < len(kept):
        rest = kept[:i] + kept[i + 1:]
        if member(kept[i], rest):
            kept = rest
        else:
            i += 1
    return kept


__all__ = ["GroupCache", "ID", "PermGroup", "StabilizerChain", "compose", "domain", "invert", "member", "reduce"]
