"""Nominal letrec unification with atom variables.

Permutations are handles into a shared :class:`~nomletrec.grammar.PermGrammar`
so repeated composition never blows up their size. Equations between two
atom-like leaves are not solved by substitution; they become ``AtomEq``
constraints in the freshness context and are decided at output time.

The guided strategy instantiates atom variables (ElimA) only when some
expression variable collects more than ``p(S)`` fixpoint equations; the
instantiated fixpoints are then reduced with the permutation-group test.
Rule priority: the guided atom elimination whenever a variable overflows,
then decomposition and leaf rules, fixpoint elimination, merging, output,
variable elimination and finally the letrec rule, which guesses a binding correspondence and hands the problem to
the lambda rules as a nest of binders over a tuple.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from .freshness import AtomEq, Fresh, av_satisfiable
from .grammar import GPerm, PermGrammar
from .permgroup import GroupCache, PermGroup
from .terms import (
    App, Atom, AtomSusp, AtomVar, Binding, ExprVar, Lam, Letrec, Perm, Susp, SwapPerm,
    all_atoms, atom_vars, compose_chain, expr_vars, fresh_atom, fresh_atoms, instantiate_atom_vars,
    size, substitute,
)
from .unify import BudgetExceeded, FreshVars, flatten, letrec_unify

TUPLE = "tuple"
LEAVES = (Atom, AtomVar, AtomSusp)


def strategy(name: str):
    """Threshold functions p(x); all are capped at x*x."""
    if name == "nlogn":
        return lambda x: min(x * math.log2(x + 2), x * x)
    if name == "quadratic":
        return lambda x: x * x
    if name.startswith("constant:"):
        k = int(name.split(":", 1)[1])
        return lambda x: min(k, x * x)
    raise ValueError(f"unknown strategy {name!r}")


class _Fail(Exception):
    pass


@dataclass
class AVUnifier:
    theta: list
    atoms: list  # (A, a) choices made by atom elimination
    nabla: tuple
    fix: list  # (X, tau) meaning X = tau.X
    witness: dict

    def key(self):
        return (tuple((x, repr(e)) for x, e in self.theta), tuple(self.atoms),
                tuple(sorted(map(repr, self.nabla))), tuple((x, repr(t)) for x, t in self.fix))


@dataclass
class AVState:
    pending: list
    vareqs: dict
    fix: dict
    letrecs: list
    nabla: frozenset
    theta: list
    atoms: list

    def copy(self) -> "AVState":
        return AVState(list(self.pending), {k: list(v) for k, v in self.vareqs.items()},
                       {k: list(v) for k, v in self.fix.items()}, list(self.letrecs), self.nabla,
                       list(self.theta), list(self.atoms))


@dataclass
class AVStats:
    rules: Counter = field(default_factory=Counter)
    branches: int = 0
    states: int = 0
    stuck: int = 0
    max_fix: int = 0
    after_elimab: list = field(default_factory=list)
    size: int = 0
    bound: float = 0.0

    @property
    def applications(self) -> int:
        return sum(self.rules.values())


class LetrecUnifyAV:
    """Depth-first driver for the guided atom-variable algorithm."""

    def __init__(self, p: str = "nlogn", budget: int = 10**6):
        self.p_name = p
        self.p = strategy(p)
        self.budget = budget
        self.g = PermGrammar()
        self.stats = AVStats()
        self._groups = GroupCache()

    # -- permutations and terms ------------------------------------------------

    def gp(self, p) -> GPerm:
        if isinstance(p, GPerm):
            return p
        if isinstance(p, Perm):
            return GPerm(self.g, self.g.ground(p))
        if isinstance(p, SwapPerm):
            out = self.g.identity
            for x, y in p.swaps:
                out = self.g.compose(out, self.g.swap(self.conv(x), self.conv(y)))
            return GPerm(self.g, out)
        raise TypeError(p)

    def leaf(self, p: GPerm, w):
        """Normal form of p.w for an atom-like leaf w."""
        if isinstance(w, AtomSusp):
            p, w = p.compose(w.perm), w.var
        if p.is_identity():
            return w
        if isinstance(w, Atom) and p.is_ground():
            return p(w)
        return AtomSusp(p, w)

    def conv(self, e):
        """Parsed term to internal form (grammar permutations)."""
        if isinstance(e, (Atom, AtomVar)):
            return e
        if isinstance(e, AtomSusp):
            return self.leaf(self.gp(e.perm), self.conv(e.var))
        if isinstance(e, Susp):
            return Susp(self.gp(e.perm), e.var)
        if isinstance(e, Lam):
            return Lam(self.conv(e.binder), self.conv(e.body))
        if isinstance(e, App):
            return App(e.fn, tuple(self.conv(a) for a in e.args))
        if isinstance(e, Letrec):
            return Letrec(tuple(Binding(self.conv(b.binder), self.conv(b.rhs)) for b in e.bindings),
                          self.conv(e.body))
        raise TypeError(e)

    def export(self, e):
        """Internal term back to the parser's representation."""
        if isinstance(e, (Atom, AtomVar)):
            return e
        if isinstance(e, AtomSusp):
            return AtomSusp(self.export_perm(e.perm), self.export(e.var))
        if isinstance(e, Susp):
            return Susp(self.export_perm(e.perm), e.var)
        if isinstance(e, Lam):
            return Lam(self.export(e.binder), self.export(e.body))
        if isinstance(e, App):
            return App(e.fn, tuple(self.export(a) for a in e.args))
        if isinstance(e, Letrec):
            return Letrec(tuple(Binding(self.export(b.binder), self.export(b.rhs)) for b in e.bindings),
                          self.export(e.body))
        raise TypeError(e)

    def export_perm(self, p: GPerm):
        if p.is_ground():
            return p.value()
        return SwapPerm(tuple((self.export(x), self.export(y)) for x, y in p.expand()))

    def apply(self, p: GPerm, e):
        if p.is_identity():
            return e
        if isinstance(e, LEAVES):
            return self.leaf(p, e)
        if isinstance(e, Susp):
            return Susp(p.compose(e.perm), e.var)
        if isinstance(e, Lam):
            return Lam(self.leaf(p, e.binder), self.apply(p, e.body))
        if isinstance(e, App):
            return App(e.fn, tuple(self.apply(p, a) for a in e.args))
        if isinstance(e, Letrec):
            return Letrec(tuple(Binding(self.leaf(p, b.binder), self.apply(p, b.rhs)) for b in e.bindings),
                          self.apply(p, e.body))
        raise TypeError(e)

    def subst(self, e, x: ExprVar, r):
        if isinstance(e, Susp):
            return self.apply(e.perm, r) if e.var == x else e
        if isinstance(e, LEAVES):
            return e
        if isinstance(e, Lam):
            return Lam(e.binder, self.subst(e.body, x, r))
        if isinstance(e, App):
            return App(e.fn, tuple(self.subst(a, x, r) for a in e.args))
        if isinstance(e, Letrec):
            return Letrec(tuple(Binding(b.binder, self.subst(b.rhs, x, r)) for b in e.bindings),
                          self.subst(e.body, x, r))
        raise TypeError(e)

    def asubst_perm(self, p: GPerm, m: dict) -> GPerm:
        if not (p.atom_vars() & m.keys()):
            return p
        return GPerm(self.g, self.g.substitute(p.idx, m, lambda w: self.asubst(w, m)))

    def asubst(self, e, m: dict):
        """Replace atom variables by atoms."""
        if isinstance(e, Atom):
            return e
        if isinstance(e, AtomVar):
            return m.get(e, e)
        if isinstance(e, AtomSusp):
            return self.leaf(self.asubst_perm(e.perm, m), self.asubst(e.var, m))
        if isinstance(e, Susp):
            return Susp(self.asubst_perm(e.perm, m), e.var)
        if isinstance(e, Lam):
            return Lam(self.asubst(e.binder, m), self.asubst(e.body, m))
        if isinstance(e, App):
            return App(e.fn, tuple(self.asubst(a, m) for a in e.args))
        if isinstance(e, Letrec):
            return Letrec(tuple(Binding(self.asubst(b.binder, m), self.asubst(b.rhs, m))
                                for b in e.bindings), self.asubst(e.body, m))
        if isinstance(e, Fresh):
            return Fresh(self.asubst(e.subject, m), self.asubst(e.target, m))
        if isinstance(e, AtomEq):
            return AtomEq(self.asubst(e.left, m), self.asubst(e.right, m))
        raise TypeError(e)

    # -- freshness ---------------------------------------------------------------

    def simplify(self, cs) -> frozenset:
        out: set = set()
        todo = list(cs)
        while todo:
            c = todo.pop()
            if isinstance(c, AtomEq):
                l, r = c.left, c.right
                if l == r:
                    continue
                if isinstance(l, Atom) and isinstance(r, Atom):
                    raise _Fail("Clashab")
                out.add(AtomEq(*sorted((l, r), key=repr)))
                continue
            w, e = c.subject, c.target
            if isinstance(e, App):
                todo.extend(Fresh(w, a) for a in e.args)
            elif isinstance(e, Susp):
                if e.perm.is_identity():
                    out.add(c)
                else:
                    todo.append(Fresh(self.leaf(e.perm.inverse(), w), Susp(GPerm(self.g, self.g.identity), e.var)))
            elif isinstance(e, LEAVES):
                if w == e:
                    raise _Fail("FailF")
                if not (isinstance(w, Atom) and isinstance(e, Atom)):
                    out.add(c)
            elif isinstance(e, Lam):
                if w == e.binder:
                    continue
                if isinstance(w, Atom) and isinstance(e.binder, Atom):
                    todo.append(Fresh(w, e.body))
                else:
                    out.add(c)
            elif isinstance(e, Letrec):
                bs = [b.binder for b in e.bindings]
                if w in bs:
                    continue
                if isinstance(w, Atom) and all(isinstance(b, Atom) for b in bs):
                    todo.extend(Fresh(w, b.rhs) for b in e.bindings)
                    todo.append(Fresh(w, e.body))
                else:
                    out.add(c)
            else:
                raise TypeError(e)
        return frozenset(out)

    def _add_nabla(self, st: AVState, cs):
        st.nabla = self.simplify(list(st.nabla) + list(cs))

    # -- bookkeeping ----------------------------------------------------------------

    def _tick(self, rule: str):
        self.stats.rules[rule] += 1
        if self.stats.applications + self.stats.states > self.budget:
            raise BudgetExceeded(f"budget of {self.budget} exceeded")

    def _group(self, perms) -> PermGroup:
        return self._groups.get(perms)

    def _add_fix(self, st: AVState, x: ExprVar, tau: GPerm):
        if tau.is_identity():
            self._tick("1")
            return
        taus = st.fix.setdefault(x, [])
        if tau in taus:
            self._tick("1")
            return
        if tau.is_ground():
            ground = [t.value() for t in taus if t.is_ground()]
            if ground and self._group(ground).contains(tau.value()):
                self._tick("ElimFP")
                return
        taus.append(tau)
        self.stats.max_fix = max(self.stats.max_fix, len(taus))

    def _cycle_check(self, st: AVState):
        for y, es in st.vareqs.items():
            for r in es:
                if y in expr_vars(r):
                    raise _Fail("Cycle")

    def _eliminate(self, st: AVState, x: ExprVar, e):
        st.pending = [(self.subst(s, x, e), self.subst(t, x, e)) for s, t in st.pending]
        st.letrecs = [(self.subst(s, x, e), self.subst(t, x, e)) for s, t in st.letrecs]
        for y in list(st.vareqs):
            es = [self.subst(r, x, e) for r in st.vareqs[y]]
            if y == x:
                del st.vareqs[y]
                st.pending.extend((e, r) for r in es)
            else:
                st.vareqs[y] = es
        self._cycle_check(st)
        for tau in st.fix.pop(x, []):
            st.pending.append((e, self.apply(tau, e)))
        if any(x in expr_vars(c.target) for c in st.nabla if isinstance(c, Fresh)):
            st.nabla = self.simplify(
                [Fresh(c.subject, self.subst(c.target, x, e)) if isinstance(c, Fresh) else c
                 for c in st.nabla])
        st.theta.append((x, e))

    def _elim_atom(self, st: AVState, a: AtomVar, v: Atom):
        m = {a: v}
        st.pending = [(self.asubst(s, m), self.asubst(t, m)) for s, t in st.pending]
        st.letrecs = [(self.asubst(s, m), self.asubst(t, m)) for s, t in st.letrecs]
        st.vareqs = {y: [self.asubst(r, m) for r in es] for y, es in st.vareqs.items()}
        st.theta = [(y, self.asubst(r, m)) for y, r in st.theta]
        st.nabla = self.simplify([self.asubst(c, m) for c in st.nabla])
        old = st.fix
        st.fix = {}
        for y, taus in old.items():
            # re-adding applies ElimFP to everything that became ground
            st.fix[y] = []
            for t in taus:
                self._add_fix(st, y, self.asubst_perm(t, m))
        st.atoms.append((a, v))

    # -- rules ---------------------------------------------------------------------

    def step(self, st: AVState):
        try:
            return self._step(st)
        except _Fail as f:
            return ("fail", str(f))

    def _overflow(self, st: AVState):
        """ElimAB fires as soon as some variable holds more than p(S) non-ground fixpoints."""
        bound = self.stats.bound
        for x in sorted(st.fix):
            taus = st.fix[x]
            if len(taus) > bound:
                avs = sorted(set().union(*(t.atom_vars() for t in taus)))
                if avs:
                    return self._elim_a(st, avs[0], watch=x)
        return None

    def _step(self, st: AVState):
        if any(len(t) > self.stats.bound for t in st.fix.values()):
            out = self._overflow(st)
            if out is not None:
                return out
        if st.pending:
            s, t = st.pending.pop(0)
            return self._classify(st, s, t)
        for x, es in st.vareqs.items():
            if len(es) >= 2:
                self._tick("MMS")
                st.pending.append((es[0], es.pop(1)))
                return ("next", st)
        if not st.vareqs and not st.letrecs:
            return self._output(st)
        used: set = set()
        for es in st.vareqs.values():
            for e in es:
                used |= expr_vars(e)
        for s, t in st.letrecs:
            used |= expr_vars(s) | expr_vars(t)
        for x in st.vareqs:
            if x not in used:
                self._tick("FPS" if st.fix.get(x) else "ElimX")
                self._eliminate(st, x, st.vareqs[x][0])
                return ("next", st)
        if st.letrecs:
            return self._letrec(st)
        if _has_cycle(st.vareqs):
            return ("fail", "Cycle")
        self.stats.stuck += 1
        return ("fail", "Stuck")

    def _classify(self, st: AVState, s, t):
        if s == t:
            self._tick("1")
            return ("next", st)
        if isinstance(t, Susp) and not isinstance(s, Susp):
            s, t = t, s
        if isinstance(s, LEAVES) and isinstance(t, LEAVES):
            self._tick("2")
            self._add_nabla(st, [AtomEq(s, t)])
            return ("next", st)
        if isinstance(s, Susp):
            inv = s.perm.inverse()
            if isinstance(t, Susp) and t.var == s.var:
                self._add_fix(st, s.var, inv.compose(t.perm))
                return ("next", st)
            if isinstance(t, (Susp,) + LEAVES):
                self._tick("3a" if isinstance(t, Susp) else "3b")
                self._eliminate(st, s.var, self.apply(inv, t))
                return ("next", st)
            e = self.apply(inv, t)
            if s.var in expr_vars(e):
                return ("fail", "Cycle")
            st.vareqs.setdefault(s.var, []).append(e)
            self._cycle_check(st)
            return ("next", st)
        if isinstance(s, LEAVES) or isinstance(t, LEAVES):
            return ("fail", "ClashA")
        if isinstance(s, App) and isinstance(t, App):
            if s.fn != t.fn or len(s.args) != len(t.args):
                return ("fail", "Clash")
            self._tick("4")
            st.pending.extend(zip(s.args, t.args))
            return ("next", st)
        if isinstance(s, Lam) and isinstance(t, Lam):
            if s.binder == t.binder:
                self._tick("5")
                st.pending.append((s.body, t.body))
                return ("next", st)
            self._tick("6")
            sw = GPerm(self.g, self.g.swap(s.binder, t.binder))
            st.pending.append((s.body, self.apply(sw, t.body)))
            self._add_nabla(st, [Fresh(s.binder, t)])
            return ("next", st)
        if isinstance(s, Letrec) and isinstance(t, Letrec):
            if len(s.bindings) != len(t.bindings):
                return ("fail", "Clash")
            st.letrecs.append((s, t))
            return ("next", st)
        return ("fail", "Clash")

    def _letrec(self, st: AVState):
        s, t = st.letrecs.pop(0)
        n = len(s.bindings)
        self._tick("7")
        out = []
        for rho in itertools.permutations(range(n)):
            left = _nest([b.binder for b in s.bindings],
                         App(TUPLE, tuple(b.rhs for b in s.bindings) + (s.body,)))
            tb = [t.bindings[rho[i]] for i in range(n)]
            right = _nest([b.binder for b in tb], App(TUPLE, tuple(b.rhs for b in tb) + (t.body,)))
            b = st.copy()
            b.pending.append((left, right))
            out.append(b)
        return ("branch", out)

    def _elim_a(self, st: AVState, a: AtomVar, watch: ExprVar):
        atoms = set()
        for s, t in st.pending + st.letrecs:
            atoms |= all_atoms(s) | all_atoms(t)
        for es in st.vareqs.values():
            for e in es:
                atoms |= all_atoms(e)
        for _, e in st.theta:
            atoms |= all_atoms(e)
        for taus in st.fix.values():
            for t in taus:
                atoms |= t.atoms()
        for c in st.nabla:
            for part in ((c.subject, c.target) if isinstance(c, Fresh) else (c.left, c.right)):
                atoms |= all_atoms(part)
        atoms |= {v for _, v in st.atoms}
        atoms |= self._input_atoms
        pool = sorted(atoms) + [fresh_atom(atoms)]
        self._tick("ElimAB")
        out = []
        for v in pool:
            b = st.copy()
            try:
                self._elim_atom(b, a, v)
            except _Fail:
                continue
            taus = b.fix.get(watch, [])
            if not any(t.atom_vars() for t in taus):
                self.stats.after_elimab.append(len(taus))
            out.append(b)
        if not out:
            return ("fail", "ElimA")
        return ("branch", out)

    def _output(self, st: AVState):
        ok, witness = av_satisfiable(st.nabla, self._input_atoms)
        if not ok:
            return ("fail", "FailF")
        self._tick("Output")
        fix = [(x, t) for x in sorted(st.fix) for t in st.fix[x]]
        return ("done", AVUnifier(list(st.theta), list(st.atoms), tuple(sorted(st.nabla, key=repr)),
                                  fix, witness))

    # -- driver ------------------------------------------------------------------------

    def initial(self, eqs, fresh=()) -> AVState:
        eqs = list(eqs)
        fresh = list(fresh)
        self.stats.size = sum(size(s, True) + size(t, True) for s, t in eqs) + sum(
            size(e, True) + 1 for _, e in fresh)
        self.stats.bound = self.p(self.stats.size)
        self._input_atoms = set()
        for s, t in eqs:
            self._input_atoms |= all_atoms(s) | all_atoms(t)
        cons = [Fresh(self.conv(v), self.conv(e)) for v, e in fresh]
        for s, t in eqs:
            cons += [Fresh(self.conv(x), self.conv(y)) for x, y in binder_distinctness(s)]
            cons += [Fresh(self.conv(x), self.conv(y)) for x, y in binder_distinctness(t)]
        for _, e in fresh:
            cons += [Fresh(self.conv(x), self.conv(y)) for x, y in binder_distinctness(e)]
        names = set()
        for s, t in eqs:
            names |= expr_vars(s) | expr_vars(t)
        flat = flatten(eqs, FreshVars(names))
        st = AVState([(self.conv(s), self.conv(t)) for s, t in flat], {}, {}, [], frozenset(), [], [])
        st.nabla = self.simplify(cons)
        return st

    def run(self, eqs, fresh=(), collect: bool = False) -> list[AVUnifier]:
        try:
            start = self.initial(eqs, fresh)
        except _Fail:
            return []
        stack = [start]
        found: list = []
        seen: set = set()
        while stack:
            st = stack.pop()
            self.stats.states += 1
            while True:
                kind, val = self.step(st)
                if kind == "next":
                    st = val
                    continue
                if kind == "branch":
                    self.stats.branches += len(val)
                    stack.extend(reversed(val))
                elif kind == "done":
                    k = val.key()
                    if k not in seen:
                        seen.add(k)
                        found.append(val)
                    if not collect:
                        return found
                break
        return found

    # -- solutions -----------------------------------------------------------------------

    def ground_solution(self, u: AVUnifier, variables, atom_variables) -> tuple[dict, dict]:
        """(atom-variable values, expression-variable values) for an output unifier."""
        assign = dict(u.witness)
        assign.update(u.atoms)
        atoms = set(self._input_atoms) | set(assign.values())
        for _, e in u.theta:
            atoms |= all_atoms(e)
        for _, t in u.fix:
            atoms |= t.atoms()
        for c in u.nabla:
            for part in ((c.subject, c.target) if isinstance(c, Fresh) else (c.left, c.right)):
                atoms |= all_atoms(part)
        loose: set = set(atom_variables) - set(assign)
        for _, e in u.theta:
            loose |= atom_vars(e) - set(assign)
        extra = fresh_atoms(atoms, len(loose) + 1)
        for a, v in zip(sorted(loose), extra):
            assign[a] = v
        c = extra[-1]
        chain = compose_chain([(x, instantiate_atom_vars(self.export(e), assign)) for x, e in u.theta])
        leftover: set = set(variables) - set(chain)
        for e in chain.values():
            leftover |= expr_vars(e)
        mu = {y: c for y in leftover}
        exprs = {x: (substitute(chain[x], mu) if x in chain else c) for x in variables}
        return assign, exprs


def _nest(binders, body):
    for w in reversed(binders):
        body = Lam(w, body)
    return body


def _has_cycle(vareqs: dict) -> bool:
    succ = {x: set().union(*(expr_vars(e) for e in es)) & vareqs.keys() for x, es in vareqs.items()}
    state: dict = {}

    def visit(x) -> bool:
        state[x] = 1
        for y in succ[x]:
            if state.get(y) == 1 or (y not in state and visit(y)):
                return True
        state[x] = 2
        return False

    return any(x not in state and visit(x) for x in succ)


def binder_distinctness(e) -> list:
    """Pairs (Wi, Wj), i < j, for the binders of every letrec inside ``e``."""
    out = []
    if isinstance(e, Lam):
        out += binder_distinctness(e.body)
    elif isinstance(e, App):
        for a in e.args:
            out += binder_distinctness(a)
    elif isinstance(e, Letrec):
        bs = [b.binder for b in e.bindings]
        out += [(bs[i], bs[j]) for i in range(len(bs)) for j in range(i + 1, len(bs))]
        for b in e.bindings:
            out += binder_distinctness(b.rhs)
        out += binder_distinctness(e.body)
    return out


def letrec_unify_av(eqs, fresh=(), p: str = "nlogn", mode: str = "decision",
                    budget: int = 10**6) -> list[AVUnifier]:
    if mode not in ("decision", "collecting"):
        raise ValueError(f"unknown mode {mode!r}")
    return LetrecUnifyAV(p=p, budget=budget).run(eqs, fresh, collect=(mode == "collecting"))


def guess_all(eqs, fresh=()) -> bool:
    """Baseline: try every atom-variable instantiation, then solve without atom variables."""
    avs: set = set()
    atoms: set = set()
    for s, t in eqs:
        avs |= atom_vars(s) | atom_vars(t)
        atoms |= all_atoms(s) | all_atoms(t)
    for v, e in fresh:
        avs |= atom_vars(v) | atom_vars(e)
        atoms |= all_atoms(v) | all_atoms(e)
    avs_l = sorted(avs)
    pool = sorted(atoms) + fresh_atoms(atoms, len(avs_l))
    side = []
    for s, t in eqs:
        side += binder_distinctness(s) + binder_distinctness(t)
    for _, e in fresh:
        side += binder_distinctness(e)
    for images in itertools.product(pool, repeat=len(avs_l)):
        assign = dict(zip(avs_l, images))
        g_eqs = [(instantiate_atom_vars(s, assign), instantiate_atom_vars(t, assign)) for s, t in eqs]
        g_fresh = [(instantiate_atom_vars(v, assign), instantiate_atom_vars(e, assign))
                   for v, e in list(fresh) + side]
        if letrec_unify(g_eqs, g_fresh):
            return True
    return False


__all__ = ["AVUnifier", "LetrecUnifyAV", "binder_distinctness", "guess_all", "letrec_unify_av",
           "strategy"]
