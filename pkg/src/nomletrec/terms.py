"""Syntax trees for the letrec languages and ground permutations.

All tiers share one set of node classes:

* ground expressions use ``Atom`` leaves, ``Lam``, ``App`` and ``Letrec``;
* the variable tier adds ``Susp(perm, ExprVar)``;
* the atom-variable tier allows ``AtomVar`` and ``AtomSusp`` wherever an atom
  may appear (leaves and binders), with permutations in swapping-list form
  (``SwapPerm``);
* the environment tier allows ``EnvVar`` items inside a letrec environment.

Ground permutations are kept as explicit finite maps (``Perm``).
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


@dataclass(frozen=True, order=True, slots=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True, slots=True)
class AtomVar:
    name: str

    def __repr__(self) -> str:
        return "@" + self.name


@dataclass(frozen=True, order=True, slots=True)
class ExprVar:
    name: str

    def __repr__(self) -> str:
        return "?" + self.name


@dataclass(frozen=True, order=True, slots=True)
class EnvVar:
    name: str

    def __repr__(self) -> str:
        return "%" + self.name


def _canonical_names() -> Iterator[str]:
    yield from string.ascii_lowercase
    for n in itertools.count(1):
        for c in string.ascii_lowercase:
            yield f"{c}{n}"


def fresh_atom(avoid: Iterable[Atom]) -> Atom:
    """Lowest canonical atom (a..z, a1..z1, ...) not in ``avoid``."""
    used = {a.name for a in avoid}
    for name in _canonical_names():
        if name not in used:
            return Atom(name)
    raise AssertionError("unreachable")


def fresh_atoms(avoid: Iterable[Atom], k: int) -> list[Atom]:
    used = set(avoid)
    out = []
    for _ in range(k):
        a = fresh_atom(used)
        used.add(a)
        out.append(a)
    return out


class Perm:
    """A ground permutation stored as the map of its non-fixed points."""

    __slots__ = ("_map", "_key")

    def __init__(self, mapping: dict[Atom, Atom] | None = None):
        m = {a: b for a, b in (mapping or {}).items() if a != b}
        if set(m) != set(m.values()):
            raise ValueError(f"not a bijection: {mapping}")
        self._map = m
        self._key = frozenset(m.items())

    @classmethod
    def swap(cls, a: Atom, b: Atom) -> "Perm":
        return cls({a: b, b: a})

    @classmethod
    def from_swaps(cls, swaps: Iterable[tuple[Atom, Atom]]) -> "Perm":
        """Swapping list s1 s2 ... sn read as s1 o s2 o ... o sn."""
        p = ID
        for a, b in swaps:
            p = p.compose(cls.swap(a, b))
        return p

    def __call__(self, a):
        return self._map.get(a, a)

    def compose(self, other: "Perm") -> "Perm":
        """self o other: apply ``other`` first."""
        if not other._map:
            return self
        if not self._map:
            return other
        keys = set(self._map) | set(other._map)
        return Perm({x: self(other(x)) for x in keys})

    __matmul__ = compose

    def inverse(self) -> "Perm":
        return Perm({b: a for a, b in self._map.items()})

    def domain(self) -> frozenset[Atom]:
        return frozenset(self._map)

    def is_identity(self) -> bool:
        return not self._map

    def items(self):
        return sorted(self._map.items())

    def to_swaps(self) -> list[tuple[Atom, Atom]]:
        """Canonical swapping list, at most |dom|-1 swaps."""
        out: list[tuple[Atom, Atom]] = []
        seen: set[Atom] = set()
        for start in sorted(self._map):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            x = self._map[start]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self._map[x]
            for y in reversed(cycle[1:]):
                out.append((start, y))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        if not self._map:
            return "Id"
        return "".join(f"({a} {b})" for a, b in self.to_swaps())


ID = Perm()


@dataclass(frozen=True, slots=True)
class SwapPerm:
    """Permutation in swapping-list form; entries may mention atom variables."""

    swaps: tuple = ()

    def __repr__(self) -> str:
        return "".join(f"({a} {b})" for a, b in self.swaps) or "Id"


@dataclass(frozen=True, slots=True)
class AtomSusp:
    """A permutation applied to an atom or atom variable (a suspended V)."""

    perm: object
    var: Union[Atom, AtomVar]


@dataclass(frozen=True, slots=True)
class Susp:
    perm: object
    var: ExprVar


@dataclass(frozen=True, slots=True)
class Lam:
    binder: object
    body: object


@dataclass(frozen=True, slots=True)
class App:
    fn: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Binding:
    binder: object
    rhs: object


@dataclass(frozen=True, slots=True)
class Letrec:
    bindings: tuple
    body: object

    def binders(self) -> list:
        return [b.binder for b in self.bindings if isinstance(b, Binding)]


Expr = Union[Atom, AtomVar, AtomSusp, Susp, Lam, App, Letrec]


def var(name: str, perm: Perm | None = None) -> Susp:
    return Susp(perm or ID, ExprVar(name))


def letrec(pairs, body) -> Letrec:
    return Letrec(tuple(Binding(a, e) for a, e in pairs), body)


# ---------------------------------------------------------------------------
# traversals


def free_atoms(e) -> frozenset[Atom]:
    """Free atoms, with letrec binders scoping over all rhs and the body."""
    if isinstance(e, Atom):
        return frozenset((e,))
    if isinstance(e, (Susp, AtomVar, AtomSusp)):
        return frozenset()
    if isinstance(e, Lam):
        return free_atoms(e.body) - {e.binder}
    if isinstance(e, App):
        return frozenset().union(*map(free_atoms, e.args))
    if isinstance(e, Letrec):
        inner = free_atoms(e.body).union(
            *(free_atoms(b.rhs) for b in e.bindings if isinstance(b, Binding)))
        return inner - set(e.binders())
    raise TypeError(e)


def bound_atoms(e) -> frozenset[Atom]:
    if isinstance(e, Lam):
        own = {e.binder} if isinstance(e.binder, Atom) else set()
        return bound_atoms(e.body) | own
    if isinstance(e, App):
        return frozenset().union(*map(bound_atoms, e.args))
    if isinstance(e, Letrec):
        own = {a for a in e.binders() if isinstance(a, Atom)}
        return bound_atoms(e.body).union(
            own, *(bound_atoms(b.rhs) for b in e.bindings if isinstance(b, Binding)))
    return frozenset()


def all_atoms(e) -> frozenset[Atom]:
    """Every atom occurring syntactically, including inside permutations."""
    out: set[Atom] = set()

    def perm_atoms(p):
        if isinstance(p, Perm):
            out.update(p.domain())
        elif isinstance(p, SwapPerm):
            for x, y in p.swaps:
                leaf(x)
                leaf(y)
        elif hasattr(p, "atoms"):
            out.update(p.atoms())

    def leaf(w):
        if isinstance(w, Atom):
            out.add(w)
        elif isinstance(w, AtomSusp):
            perm_atoms(w.perm)
            leaf(w.var)

    def go(t):
        if isinstance(t, (Atom, AtomVar, AtomSusp)):
            leaf(t)
        elif isinstance(t, Susp):
            perm_atoms(t.perm)
        elif isinstance(t, Lam):
            leaf(t.binder)
            go(t.body)
        elif isinstance(t, App):
            for a in t.args:
                go(a)
        elif isinstance(t, Letrec):
            for b in t.bindings:
                if isinstance(b, Binding):
                    leaf(b.binder)
                    go(b.rhs)
            go(t.body)

    go(e)
    return frozenset(out)


def expr_vars(e) -> frozenset[ExprVar]:
    if isinstance(e, Susp):
        return frozenset((e.var,))
    if isinstance(e, Lam):
        return expr_vars(e.body)
    if isinstance(e, App):
        return frozenset().union(*map(expr_vars, e.args))
    if isinstance(e, Letrec):
        return expr_vars(e.body).union(
            *(expr_vars(b.rhs) for b in e.bindings if isinstance(b, Binding)))
    return frozenset()


def atom_vars(e) -> frozenset[AtomVar]:
    out: set[AtomVar] = set()

    def perm_vars(p):
        if isinstance(p, SwapPerm):
            for x, y in p.swaps:
                leaf(x)
                leaf(y)
        elif hasattr(p, "atom_vars"):
            out.update(p.atom_vars())

    def leaf(w):
        if isinstance(w, AtomVar):
            out.add(w)
        elif isinstance(w, AtomSusp):
            perm_vars(w.perm)
            leaf(w.var)

    def go(t):
        if isinstance(t, (Atom, AtomVar, AtomSusp)):
            leaf(t)
        elif isinstance(t, Susp):
            perm_vars(t.perm)
        elif isinstance(t, Lam):
            leaf(t.binder)
            go(t.body)
        elif isinstance(t, App):
            for a in t.args:
                go(a)
        elif isinstance(t, Letrec):
            for b in t.bindings:
                if isinstance(b, Binding):
                    leaf(b.binder)
                    go(b.rhs)
            go(t.body)

    go(e)
    return frozenset(out)


def env_vars(e) -> frozenset[EnvVar]:
    if isinstance(e, Lam):
        return env_vars(e.body)
    if isinstance(e, App):
        return frozenset().union(*map(env_vars, e.args))
    if isinstance(e, Letrec):
        own = {b for b in e.bindings if isinstance(b, EnvVar)}
        return env_vars(e.body).union(
            own, *(env_vars(b.rhs) for b in e.bindings if isinstance(b, Binding)))
    return frozenset()


def size(e, count_perms: bool = False) -> int:
    """Tree size with names of size 1; permutations optionally counted."""
    def psize(p):
        if not count_perms:
            return 0
        if isinstance(p, Perm):
            return 2 * len(p.to_swaps())
        if isinstance(p, SwapPerm):
            return sum(size(x, True) + size(y, True) for x, y in p.swaps)
        return 0

    if isinstance(e, (Atom, AtomVar)):
        return 1
    if isinstance(e, AtomSusp):
        return 1 + psize(e.perm)
    if isinstance(e, Susp):
        return 1 + psize(e.perm)
    if isinstance(e, Lam):
        return 1 + size(e.binder, count_perms) + size(e.body, count_perms)
    if isinstance(e, App):
        return 1 + sum(size(a, count_perms) for a in e.args)
    if isinstance(e, Letrec):
        n = 1 + size(e.body, count_perms)
        for b in e.bindings:
            if isinstance(b, Binding):
                n += size(b.binder, count_perms) + size(b.rhs, count_perms)
            else:
                n += 1
        return n
    raise TypeError(e)


def depth(e) -> int:
    if isinstance(e, Lam):
        return 1 + depth(e.body)
    if isinstance(e, App):
        return 1 + max((depth(a) for a in e.args), default=0) if e.args else 0
    if isinstance(e, Letrec):
        kids = [depth(e.body)] + [depth(b.rhs) for b in e.bindings if isinstance(b, Binding)]
        return 1 + max(kids)
    return 0


def is_ground(e) -> bool:
    return not expr_vars(e) and not atom_vars(e) and not env_vars(e)


def subterms(e) -> Iterator:
    yield e
    if isinstance(e, Lam):
        yield from subterms(e.body)
    elif isinstance(e, App):
        for a in e.args:
            yield from subterms(a)
    elif isinstance(e, Letrec):
        for b in e.bindings:
            if isinstance(b, Binding):
                yield from subterms(b.rhs)
        yield from subterms(e.body)


# ---------------------------------------------------------------------------
# ground permutations acting on the variable tier


def apply_perm(p: Perm, e):
    """Push a permutation down to atoms and suspensions."""
    if not isinstance(p, Perm):
        from .sexpr import push_perm  # symbolic swaps over atom variables
        return push_perm(p, e)
    if p.is_identity():
        return e
    if isinstance(e, Atom):
        return p(e)
    if isinstance(e, (AtomVar, AtomSusp)) or (isinstance(e, Lam) and not isinstance(e.binder, Atom)):
        from .sexpr import push_perm
        return push_perm(p, e)
    if isinstance(e, Susp):
        return Susp(p.compose(e.perm), e.var)
    if isinstance(e, Lam):
        return Lam(p(e.binder), apply_perm(p, e.body))
    if isinstance(e, App):
        return App(e.fn, tuple(apply_perm(p, a) for a in e.args))
    if isinstance(e, Letrec):
        return Letrec(tuple(Binding(p(b.binder), apply_perm(p, b.rhs)) for b in e.bindings),
                      apply_perm(p, e.body))
    raise TypeError(f"apply_perm: unsupported node {e!r}")


def substitute(e, sigma: dict):
    """Instantiate expression variables; ``sigma`` maps ExprVar to Expr."""
    if isinstance(e, Susp):
        if e.var in sigma:
            return apply_perm(e.perm, sigma[e.var])
        return e
    if isinstance(e, Lam):
        return Lam(e.binder, substitute(e.body, sigma))
    if isinstance(e, App):
        return App(e.fn, tuple(substitute(a, sigma) for a in e.args))
    if isinstance(e, Letrec):
        return Letrec(tuple(Binding(b.binder, substitute(b.rhs, sigma)) for b in e.bindings),
                      substitute(e.body, sigma))
    return e


def compose_chain(theta: list[tuple[ExprVar, object]]) -> dict:
    """Resolve a single-assignment chain into an idempotent substitution.

    Later assignments never mention earlier variables, so resolving from the
    back gives every variable its fully instantiated image.
    """
    resolved: dict = {}
    for x, e in reversed(theta):
        resolved[x] = substitute(e, resolved)
    return resolved


def shape(e):
    """Cheap top-symbol key used to prune binding correspondences."""
    if isinstance(e, (Atom, AtomVar, AtomSusp)):
        return ("atom",)
    if isinstance(e, Lam):
        return ("lam",)
    if isinstance(e, App):
        return ("app", e.fn, len(e.args))
    if isinstance(e, Letrec):
        return ("letrec", len(e.bindings))
    return ("var",)


def eval_perm(p, assign: dict) -> Perm:
    """Ground value of a permutation once atom variables get their images."""
    if isinstance(p, Perm):
        return p
    if isinstance(p, SwapPerm):
        return Perm.from_swaps((eval_leaf(x, assign), eval_leaf(y, assign)) for x, y in p.swaps)
    return p.ground_under(assign)


def eval_leaf(w, assign: dict) -> Atom:
    if isinstance(w, Atom):
        return w
    if isinstance(w, AtomVar):
        return assign[w]
    if isinstance(w, AtomSusp):
        return eval_perm(w.perm, assign)(eval_leaf(w.var, assign))
    raise TypeError(w)


def instantiate_atom_vars(e, assign: dict):
    """Replace atom variables by atoms and evaluate every permutation to a ``Perm``."""
    if isinstance(e, (Atom, AtomVar, AtomSusp)):
        return eval_leaf(e, assign)
    if isinstance(e, Susp):
        return Susp(eval_perm(e.perm, assign), e.var)
    if isinstance(e, Lam):
        return Lam(eval_leaf(e.binder, assign), instantiate_atom_vars(e.body, assign))
    if isinstance(e, App):
        return App(e.fn, tuple(instantiate_atom_vars(a, assign) for a in e.args))
    if isinstance(e, Letrec):
        return Letrec(tuple(Binding(eval_leaf(b.binder, assign), instantiate_atom_vars(b.rhs, assign))
                            if isinstance(b, Binding) else b for b in e.bindings),
                      instantiate_atom_vars(e.body, assign))
    raise TypeError(e)
