"""Compressed permutations: an append-only grammar of swaps and compositions.

Each nonterminal has exactly one rule, either the identity, a swap terminal
``(W1 W2)`` or a composition ``P1 P2`` of two earlier nonterminals, and is
paired with a nonterminal for its inverse when created. Rules are
hash-consed, so building the same permutation twice yields the same index.

Nonterminals without atom variables are canonicalized: their explicit map is
computed once and the nonterminal is rebuilt from a minimal swap list, which
keeps ground permutations small no matter how they were produced.
"""
from __future__ import annotations

from .terms import Atom, AtomSusp, AtomVar, Perm

_ID = ("id",)


class PermGrammar:
    def __init__(self):
        self.rules: list[tuple] = []
        self.inv: list[int] = []
        self._index: dict = {}
        self._vars: list[frozenset] = []
        self._atoms: list[frozenset] = []
        self._value: dict[int, Perm] = {}
        self._canon: dict[Perm, int] = {}
        self._subst_memo: dict = {}
        self.identity = self._add(_ID)

    def __len__(self) -> int:
        return len(self.rules)

    # -- construction --------------------------------------------------------

    def _add(self, rule: tuple) -> int:
        got = self._index.get(rule)
        if got is not None:
            return got
        i = len(self.rules)
        self.rules.append(rule)
        self.inv.append(-1)
        self._index[rule] = i
        self._vars.append(self._rule_vars(rule))
        self._atoms.append(self._rule_atoms(rule))
        kind = rule[0]
        if kind == "seq":
            j = self._add(("seq", self.inv[rule[2]], self.inv[rule[1]]))
        else:  # identity and swaps are their own inverses
            j = i
        self.inv[i], self.inv[j] = j, i
        return i

    def _rule_vars(self, rule) -> frozenset:
        if rule[0] == "seq":
            return self._vars[rule[1]] | self._vars[rule[2]]
        if rule[0] == "swap":
            return leaf_vars(rule[1]) | leaf_vars(rule[2])
        return frozenset()

    def _rule_atoms(self, rule) -> frozenset:
        if rule[0] == "seq":
            return self._atoms[rule[1]] | self._atoms[rule[2]]
        if rule[0] == "swap":
            return leaf_atoms(rule[1]) | leaf_atoms(rule[2])
        return frozenset()

    def swap(self, w1, w2) -> int:
        if w1 == w2:
            return self.identity
        if isinstance(w1, Atom) and isinstance(w2, Atom):
            return self.ground(Perm.swap(w1, w2))
        key = tuple(sorted((w1, w2), key=repr))
        return self._add(("swap",) + key)

    def compose(self, i: int, j: int) -> int:
        """The nonterminal for val(i) after val(j) (j acts first)."""
        if i == self.identity:
            return j
        if j == self.identity:
            return i
        if self.inv[i] == j:
            return self.identity
        if self.is_ground(i) and self.is_ground(j):
            return self.ground(self.value(i).compose(self.value(j)))
        return self._add(("seq", i, j))

    def inverse(self, i: int) -> int:
        return self.inv[i]

    def ground(self, p: Perm) -> int:
        """Canonical nonterminal for an explicit ground permutation."""
        got = self._canon.get(p)
        if got is not None:
            return got
        out = self.identity
        for a, b in reversed(p.to_swaps()):
            t = self._add(("swap",) + tuple(sorted((a, b))))
            out = t if out == self.identity else self._add(("seq", t, out))
        self._canon[p] = out
        self._value[out] = p
        return out

    # -- queries ---------------------------------------------------------------

    def atom_vars(self, i: int) -> frozenset:
        return self._vars[i]

    def atoms(self, i: int) -> frozenset:
        return self._atoms[i]

    def is_ground(self, i: int) -> bool:
        return not self._vars[i]

    def value(self, i: int) -> Perm:
        """Explicit map of a ground nonterminal."""
        got = self._value.get(i)
        if got is None:
            if not self.is_ground(i):
                raise ValueError("permutation contains atom variables")
            got = self._value[i] = self.ground_under(i, {})
        return got

    def image(self, i: int, a: Atom, assign: dict | None = None) -> Atom:
        if assign is None:
            return self.value(i)(a)
        return self.ground_under(i, assign)(a)

    def leaf_value(self, w, assign: dict | None = None) -> Atom:
        if isinstance(w, Atom):
            return w
        if isinstance(w, AtomVar):
            if assign is None or w not in assign:
                raise ValueError(f"atom variable {w} has no value")
            return assign[w]
        if isinstance(w, AtomSusp):
            return self.image(w.perm.idx, self.leaf_value(w.var, assign), assign)
        raise TypeError(w)

    def _postorder(self, i: int) -> list[int]:
        out, seen, stack = [], set(), [(i, False)]
        while stack:
            k, ready = stack.pop()
            if ready:
                out.append(k)
                continue
            if k in seen:
                continue
            seen.add(k)
            stack.append((k, True))
            if self.rules[k][0] == "seq":
                stack.append((self.rules[k][2], False))
                stack.append((self.rules[k][1], False))
        return out

    def ground_under(self, i: int, assign: dict) -> Perm:
        """Evaluate val(i) once atom variables take the values in ``assign``."""
        memo: dict = {}
        for k in self._postorder(i):
            if not assign and k in self._value:
                memo[k] = self._value[k]
                continue
            rule = self.rules[k]
            if rule[0] == "id":
                memo[k] = Perm()
            elif rule[0] == "swap":
                memo[k] = Perm.swap(self.leaf_value(rule[1], assign), self.leaf_value(rule[2], assign))
            else:
                memo[k] = memo[rule[1]].compose(memo[rule[2]])
        return memo[i]

    def expand(self, i: int) -> list:
        """The swap terminals of val(i), leftmost first (may be long)."""
        out: list = []
        stack = [i]
        while stack:
            k = stack.pop()
            rule = self.rules[k]
            if rule[0] == "seq":
                stack.append(rule[2])
                stack.append(rule[1])
            elif rule[0] == "swap":
                out.append((rule[1], rule[2]))
        return out

    def substitute(self, i: int, assign: dict, leaf_fn) -> int:
        """Rebuild ``i`` with atom variables replaced; ``leaf_fn`` rebuilds leaves."""
        key = tuple(sorted(assign.items()))
        memo = self._subst_memo.setdefault(key, {})

        for k in self._postorder(i):
            if k in memo:
                continue
            if not (self._vars[k] & assign.keys()):
                memo[k] = k
                continue
            rule = self.rules[k]
            if rule[0] == "seq":
                memo[k] = self.compose(memo[rule[1]], memo[rule[2]])
            else:
                memo[k] = self.swap(leaf_fn(rule[1]), leaf_fn(rule[2]))
        return memo[i]


def leaf_vars(w) -> frozenset:
    if isinstance(w, AtomVar):
        return frozenset([w])
    if isinstance(w, AtomSusp):
        return w.perm.atom_vars() | leaf_vars(w.var)
    return frozenset()


def leaf_atoms(w) -> frozenset:
    if isinstance(w, Atom):
        return frozenset([w])
    if isinstance(w, AtomSusp):
        return w.perm.atoms() | leaf_atoms(w.var)
    return frozenset()


class GPerm:
    """A handle on a grammar nonterminal, usable wherever terms expect a permutation."""

    __slots__ = ("g", "idx")

    def __init__(self, g: PermGrammar, idx: int):
        self.g = g
        self.idx = idx

    def __eq__(self, other) -> bool:
        return isinstance(other, GPerm) and other.idx == self.idx and other.g is self.g

    def __hash__(self) -> int:
        return hash(("GPerm", self.idx))

    def __repr__(self) -> str:
        if self.is_ground():
            return repr(self.value())
        return "(" + " ".join(f"({x!r} {y!r})" for x, y in self.expand()) + ")"

    def compose(self, other: "GPerm") -> "GPerm":
        return GPerm(self.g, self.g.compose(self.idx, other.idx))

    __matmul__ = compose

    def inverse(self) -> "GPerm":
        return GPerm(self.g, self.g.inverse(self.idx))

    def is_identity(self) -> bool:
        if self.idx == self.g.identity:
            return True
        return self.is_ground() and self.value().is_identity()

    def is_ground(self) -> bool:
        return self.g.is_ground(self.idx)

    def value(self) -> Perm:
        return self.g.value(self.idx)

    def __call__(self, a: Atom) -> Atom:
        return self.g.image(self.idx, a)

    def atom_vars(self) -> frozenset:
        return self.g.atom_vars(self.idx)

    def atoms(self) -> frozenset:
        return self.g.atoms(self.idx)

    def ground_under(self, assign: dict) -> Perm:
        return self.g.ground_under(self.idx, assign)

    def expand(self) -> list:
        return self.g.expand(self.idx)

    def size(self) -> int:
        return len(self.expand())


__all__ = ["GPerm", "PermGrammar", "leaf_atoms", "leaf_vars"]
