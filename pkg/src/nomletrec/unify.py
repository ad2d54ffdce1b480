"""Nominal unification for the letrec language with expression variables.

The solver state is a tuple (equations, freshness context, substitution
chain). Equations are kept in three buckets:

* ``pending``: not yet classified (decomposition and the
  suspension rules consume these first);
* ``vareqs``: solved-form candidates ``X = e`` with ``e`` not a suspension;
* ``fix``: fixpoint equations ``X = tau.X`` stored by their group element.

Rule priorities follow the algorithm: decomposition, variable-variable
elimination and fixpoint elimination first, then merging of two equations on
the same variable and elimination of a solved variable together with its
fixpoints, then output. Letrec decomposition branches over binding orders.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from .freshness import simplify
from .permgroup import GroupCache, PermGroup
from .terms import (
    ID, App, Atom, AtomSusp, AtomVar, ExprVar, Lam, Letrec, Perm, Susp, all_atoms, apply_perm,
    expr_vars, size, substitute,
)


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Unifier:
    """(theta, nabla, fix): substitution chain, atomic freshness, fixpoint equations."""

    theta: list
    nabla: frozenset
    fix: list  # pairs (X, tau) meaning X = tau.X

    def key(self):
        return (tuple(self.theta), tuple(sorted(self.nabla, key=repr)), tuple(self.fix))


@dataclass
class State:
    pending: list
    vareqs: dict
    fix: dict
    nabla: frozenset
    theta: list

    def copy(self) -> "State":
        return State(list(self.pending), {k: list(v) for k, v in self.vareqs.items()},
                     {k: list(v) for k, v in self.fix.items()}, self.nabla, list(self.theta))


@dataclass
class Stats:
    rules: Counter = field(default_factory=Counter)
    failures: Counter = field(default_factory=Counter)
    branches: int = 0
    states: int = 0
    max_fix: int = 0
    max_fix_total: int = 0
    size: int = 0
    size_with_perms: int = 0
    measures: list = field(default_factory=list)

    @property
    def applications(self) -> int:
        return sum(self.rules.values())


class Fail(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# step outcomes
@dataclass
class Next:
    state: State


@dataclass
class Branches:
    states: list


@dataclass
class Failed:
    reason: str


@dataclass
class Done:
    unifier: Unifier


# ---------------------------------------------------------------------------
# flattening


class FreshVars:
    def __init__(self, avoid=(), prefix: str = "_"):
        self.used = {v.name for v in avoid}
        self.prefix = prefix
        self.n = 0

    def __call__(self) -> ExprVar:
        while True:
            self.n += 1
            name = f"{self.prefix}{self.n}"
            if name not in self.used:
                self.used.add(name)
                return ExprVar(name)


def flatten(eqs, fresh: FreshVars | None = None) -> list:
    """Replace every non-atom, non-suspension child by a fresh variable plus a defining equation."""
    if fresh is None:
        fresh = FreshVars(set().union(*(expr_vars(s) | expr_vars(t) for s, t in eqs)) if eqs else ())
    out = []

    def child(e, defs):
        if isinstance(e, (Atom, AtomVar, AtomSusp, Susp)):
            return e
        x = Susp(ID, fresh())
        top = flat(e, defs)
        defs.append((x, top))
        return x

    def flat(e, defs):
        if isinstance(e, App):
            return App(e.fn, tuple(child(a, defs) for a in e.args))
        if isinstance(e, Lam):
            return Lam(e.binder, child(e.body, defs))
        if isinstance(e, Letrec):
            return Letrec(tuple(type(b)(b.binder, child(b.rhs, defs)) for b in e.bindings),
                          child(e.body, defs))
        return e

    for s, t in eqs:
        defs: list = []
        fs = flat(s, defs)
        ft = flat(t, defs)
        out.append((fs, ft))
        out.extend(reversed(defs))
    return out


# ---------------------------------------------------------------------------
# letrec decomposition


def binder_perm(A: list, B: list, rho) -> Perm:
    """The permutation with pi(B[rho[i]]) = A[i], completed canonically on A and B."""
    m = {B[rho[i]]: A[i] for i in range(len(A))}
    src = sorted(set(A) - set(B))
    dst = sorted(set(B) - set(A))
    m.update(zip(src, dst))
    return Perm(m)


def letrec_branches(s: Letrec, t: Letrec):
    """All (rho, pi, equations, freshness) alternatives for ``s = t``."""
    A = [b.binder for b in s.bindings]
    B = [b.binder for b in t.bindings]
    out = []
    for rho in itertools.permutations(range(len(A))):
        pi = binder_perm(A, B, rho)
        eqs = [(s.bindings[i].rhs, apply_perm(pi, t.bindings[rho[i]].rhs)) for i in range(len(A))]
        eqs.append((s.body, apply_perm(pi, t.body)))
        if any(isinstance(x, Atom) and isinstance(y, Atom) and x != y for x, y in eqs):
            continue
        out.append((rho, pi, eqs, [(a, t) for a in A]))
    return out


# ---------------------------------------------------------------------------
# the solver


def measure(st: State) -> tuple[int, int, int]:
    """(#Var, #letrec/lambda/function/atom symbols, #Eqs) of the equations."""
    eqs = list(st.pending)
    for x, es in st.vareqs.items():
        eqs.extend((Susp(ID, x), e) for e in es)
    for x, taus in st.fix.items():
        eqs.extend((Susp(ID, x), Susp(t, x)) for t in taus)
    vs: set = set()
    syms = 0
    for s, t in eqs:
        for e in (s, t):
            vs |= expr_vars(e)
            syms += size(e) - _count_susp(e)
    return len(vs), syms, len(eqs)


def _count_susp(e) -> int:
    if isinstance(e, Susp):
        return 1
    if isinstance(e, Lam):
        return _count_susp(e.body)
    if isinstance(e, App):
        return sum(_count_susp(a) for a in e.args)
    if isinstance(e, Letrec):
        return _count_susp(e.body) + sum(_count_susp(b.rhs) for b in e.bindings)
    return 0


class LetrecUnify:
    """Rule-based solver; ``run`` explores branches depth-first."""

    def __init__(self, elim_fp: bool = True, garbage_free: bool = False,
                 budget: int = 10**6, trace_measure: bool = False):
        self.elim_fp = elim_fp
        self.garbage_free = garbage_free
        self.budget = budget
        self.trace_measure = trace_measure
        self.stats = Stats()
        self._groups = GroupCache()

    # -- helpers -----------------------------------------------------------

    def _tick(self, rule: str):
        self.stats.rules[rule] += 1
        if self.stats.applications + self.stats.states > self.budget:
            raise BudgetExceeded(f"budget of {self.budget} exceeded")

    def _group(self, gens) -> PermGroup:
        return self._groups.get(gens)

    def _add_fresh(self, st: State, pairs):
        res = simplify(list(pairs) + [(a, Susp(ID, y)) for a, y in st.nabla])
        if res is None:
            raise Fail("FailF")
        st.nabla = res

    def _add_fix(self, st: State, x: ExprVar, tau: Perm):
        if tau.is_identity():
            self._tick("1")
            return
        if self.garbage_free:
            self._tick("FPS2")
            self._add_fresh(st, [(a, Susp(ID, x)) for a in sorted(tau.domain())])
            return
        taus = st.fix.setdefault(x, [])
        if tau in taus:
            self._tick("1")
            return
        if self.elim_fp and self._group(taus).contains(tau):
            self._tick("ElimFP")
            return
        taus.append(tau)
        self._note_fix(st)

    def _note_fix(self, st: State):
        counts = [len(v) for v in st.fix.values()]
        if counts:
            self.stats.max_fix = max(self.stats.max_fix, max(counts))
            self.stats.max_fix_total = max(self.stats.max_fix_total, sum(counts))

    def _eliminate(self, st: State, x: ExprVar, e):
        """Replace x by e everywhere and record x -> e in theta."""
        sigma = {x: e}
        st.pending = [(substitute(s, sigma), substitute(t, sigma)) for s, t in st.pending]
        for y in list(st.vareqs):
            es = [substitute(r, sigma) for r in st.vareqs[y]]
            if y == x:
                del st.vareqs[y]
                st.pending.extend((e, r) for r in es)
            else:
                st.vareqs[y] = es
                for r in es:
                    if y in expr_vars(r):
                        raise Fail("Cycle")
        for tau in st.fix.pop(x, []):
            st.pending.append((e, apply_perm(tau, e)))
        hit = [(a, y) for a, y in st.nabla if y == x]
        if hit:
            rest = [(a, Susp(ID, y)) for a, y in st.nabla if y != x]
            res = simplify(rest + [(a, e) for a, _ in hit])
            if res is None:
                raise Fail("FailFS")
            st.nabla = res
        st.theta.append((x, e))

    # -- one step ------------------------------------------------------------

    def step(self, st: State):
        try:
            return self._step(st)
        except Fail as f:
            return Failed(f.reason)

    def _step(self, st: State):
        if self.trace_measure:
            self.stats.measures.append(measure(st))
        if st.pending:
            s, t = st.pending.pop(0)
            return self._classify(st, s, t)
        for x, es in st.vareqs.items():
            if len(es) >= 2:
                self._tick("MMS")
                e2 = es.pop(1)
                st.pending.append((es[0], e2))
                return Next(st)
        if st.vareqs:
            used: set = set()
            for es in st.vareqs.values():
                for e in es:
                    used |= expr_vars(e)
            for x in st.vareqs:
                if x not in used:
                    e = st.vareqs[x][0]
                    self._tick("FPS" if st.fix.get(x) else "ElimX")
                    self._eliminate(st, x, e)
                    return Next(st)
            return Failed("Cycle")
        self._tick("Output")
        fix = [(x, tau) for x in sorted(st.fix) for tau in st.fix[x]]
        return Done(Unifier(list(st.theta), st.nabla, fix))

    def _classify(self, st: State, s, t):
        if s == t:
            self._tick("1")
            return Next(st)
        if isinstance(t, Susp) and not isinstance(s, Susp):
            s, t = t, s
        if isinstance(s, Susp):
            if isinstance(t, Susp):
                if s.var == t.var:
                    self._add_fix(st, s.var, s.perm.inverse().compose(t.perm))
                    return Next(st)
                self._tick("2")
                self._eliminate(st, s.var, Susp(s.perm.inverse().compose(t.perm), t.var))
                return Next(st)
            e = apply_perm(s.perm.inverse(), t)
            if s.var in expr_vars(e):
                return Failed("Cycle")
            st.vareqs.setdefault(s.var, []).append(e)
            return Next(st)
        return self._decompose(st, s, t)

    def _decompose(self, st: State, s, t):
        if isinstance(s, App) and isinstance(t, App):
            if s.fn != t.fn or len(s.args) != len(t.args):
                return Failed("Clash")
            self._tick("3")
            st.pending.extend(zip(s.args, t.args))
            return Next(st)
        if isinstance(s, Lam) and isinstance(t, Lam):
            if s.binder == t.binder:
                self._tick("4")
                st.pending.append((s.body, t.body))
                return Next(st)
            self._tick("5")
            st.pending.append((s.body, apply_perm(Perm.swap(s.binder, t.binder), t.body)))
            self._add_fresh(st, [(s.binder, t.body)])
            return Next(st)
        if isinstance(s, Letrec) and isinstance(t, Letrec):
            if len(s.bindings) != len(t.bindings):
                return Failed("Clash")
            self._tick("6")
            out = []
            for _rho, _pi, eqs, fr in letrec_branches(s, t):
                b = st.copy()
                b.pending.extend(eqs)
                res = simplify(fr + [(a, Susp(ID, y)) for a, y in b.nabla])
                if res is None:
                    continue
                b.nabla = res
                out.append(b)
            if not out:
                return Failed("Clash")
            return Branches(out)
        return Failed("Clash")

    # -- driver --------------------------------------------------------------

    def initial(self, eqs, fresh=()) -> State:
        st = State(flatten(list(eqs)), {}, {}, frozenset(), [])
        self.stats.size = sum(size(s) + size(t) for s, t in eqs)
        self.stats.size_with_perms = sum(size(s, True) + size(t, True) for s, t in eqs)
        res = simplify(list(fresh))
        if res is None:
            raise Fail("FailF")
        st.nabla = res
        return st

    def run(self, eqs, fresh=(), collect: bool = False) -> list[Unifier]:
        try:
            start = self.initial(eqs, fresh)
        except Fail as f:
            self.stats.failures[f.reason] += 1
            return []
        return self.explore([start], collect)

    def explore(self, stack: list, collect: bool = False) -> list[Unifier]:
        """Depth-first search from the given states (the last one is tried first)."""
        found: list[Unifier] = []
        seen: set = set()
        while stack:
            st = stack.pop()
            self.stats.states += 1
            while True:
                out = self.step(st)
                if isinstance(out, Next):
                    st = out.state
                    continue
                if isinstance(out, Branches):
                    self.stats.branches += len(out.states)
                    stack.extend(reversed(out.states))
                elif isinstance(out, Failed):
                    self.stats.failures[out.reason] += 1
                elif isinstance(out, Done):
                    k = out.unifier.key()
                    if k not in seen:
                        seen.add(k)
                        found.append(out.unifier)
                    if not collect:
                        return found
                break
        return found

    def split(self, eqs, fresh=()):
        """Run deterministically up to the first branching; return (done, states)."""
        try:
            st = self.initial(eqs, fresh)
        except Fail:
            return [], []
        while True:
            out = self.step(st)
            if isinstance(out, Next):
                st = out.state
            elif isinstance(out, Branches):
                self.stats.branches += len(out.states)
                return [], out.states
            elif isinstance(out, Done):
                return [out.unifier], []
            else:
                return [], []


def letrec_unify(eqs, fresh=(), mode: str = "decision", **opts) -> list[Unifier]:
    """Solve ``eqs`` under freshness ``fresh``; an empty list means UNSAT."""
    if mode not in ("decision", "collecting"):
        raise ValueError(f"unknown mode {mode!r}")
    return LetrecUnify(**opts).run(eqs, fresh, collect=(mode == "collecting"))


def fix_bound(s: int) -> float:
    """S * log2(S): the per-variable bound on irredundant fixpoint equations."""
    return s * math.log2(s) if s > 1 else 1.0


def ground_instance(u: Unifier, variables, extra_atoms=()) -> dict:
    """Instantiate every remaining variable by one shared fresh atom."""
    from .terms import compose_chain, fresh_atom

    atoms: set = set(extra_atoms)
    for _, e in u.theta:
        atoms |= all_atoms(e)
    for a, _ in u.nabla:
        atoms.add(a)
    for _, tau in u.fix:
        atoms |= tau.domain()
    c = fresh_atom(atoms)
    chain = compose_chain(u.theta)
    leftover: set = set()
    for e in chain.values():
        leftover |= expr_vars(e)
    leftover |= set(variables) - set(chain)
    leftover |= {y for _, y in u.nabla} | {x for x, _ in u.fix}
    mu = {y: c for y in leftover}
    out = {}
    for x in variables:
        out[x] = substitute(chain[x], mu) if x in chain else c
    return out
