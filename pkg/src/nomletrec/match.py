"""Nominal letrec matching ``s <| t`` with ground targets, plus hardness encoders.

The rules are the usual ones: decomposition, the lambda rule with its
freshness test, moving suspensions to the target, merging two bindings of
the same variable by alpha-equivalence, and the letrec rule that guesses a
correspondence between pattern and target bindings.

The letrec correspondence is not enumerated up front. Each target binder is
renamed to a placeholder atom (a *hole*) whose value becomes the pattern
binder it is paired with. Comparisons of a pattern atom with a hole force the
pairing; when nothing else can proceed, the solver branches on the unpaired
pattern binding with the fewest compatible targets. Equations whose target
still contains unresolved holes are only decomposed through function symbols
and atoms; everything else waits until the holes are resolved.

Environment variables in patterns are expanded inside the letrec rule into
``k`` fresh slots ``A1.X1; ...; Ak.Xk`` with the slack between binding counts
shared among them.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .alpha import alpha_eq, is_garbage_free
from .graphs import Graph
from .terms import (
    ID, App, Atom, AtomSusp, AtomVar, Binding, EnvVar, ExprVar, Lam, Letrec, Perm, Susp,
    SwapPerm, all_atoms, apply_perm, bound_atoms, atom_vars, expr_vars, free_atoms, fresh_atom, shape, substitute,
)
from .unify import BudgetExceeded, FreshVars

HOLE_PREFIX = "\x00"


def _is_hole(a) -> bool:
    return isinstance(a, Atom) and a.name.startswith(HOLE_PREFIX)


def _rename(e, m: dict):
    """Replace atoms by ``m`` everywhere (used only with fresh placeholders)."""
    if not m:
        return e
    if isinstance(e, Atom):
        return m.get(e, e)
    if isinstance(e, Lam):
        return Lam(m.get(e.binder, e.binder), _rename(e.body, m))
    if isinstance(e, App):
        return App(e.fn, tuple(_rename(a, m) for a in e.args))
    if isinstance(e, Letrec):
        return Letrec(tuple(Binding(m.get(b.binder, b.binder), _rename(b.rhs, m)) for b in e.bindings),
                      _rename(e.body, m))
    return e


@dataclass
class MatchSolution:
    sigma: dict
    atoms: dict = field(default_factory=dict)
    envs: dict = field(default_factory=dict)

    def key(self):
        envs = tuple(sorted((k, tuple(sorted(map(repr, v)))) for k, v in self.envs.items()))
        return (tuple(sorted(self.sigma.items(), key=repr)), tuple(sorted(self.atoms.items())), envs)


class _Group:
    """One letrec pair: pattern binders, target right-hand sides and the pairing so far."""

    __slots__ = ("binders", "prhs", "trhs", "holes", "tnames", "p2t", "t2p", "t_fa", "origin",
                 "pshape", "tshape")

    def copy(self) -> "_Group":
        g = _Group()
        g.binders, g.prhs, g.trhs, g.holes = self.binders, self.prhs, self.trhs, self.holes
        g.t_fa, g.origin, g.tnames = self.t_fa, self.origin, self.tnames
        g.pshape, g.tshape = self.pshape, self.tshape
        g.p2t, g.t2p = list(self.p2t), list(self.t2p)
        return g

    def complete(self) -> bool:
        return all(j is not None for j in self.p2t)


@dataclass
class MState:
    queue: list
    delayed: list
    sigma: dict
    avals: dict
    hole_val: dict
    groups: list
    envs: dict

    def copy(self) -> "MState":
        return MState(list(self.queue), list(self.delayed), dict(self.sigma), dict(self.avals),
                      dict(self.hole_val), [g.copy() for g in self.groups], dict(self.envs))


class _Fail(Exception):
    pass


@dataclass
class MatchStats:
    rules: dict = field(default_factory=dict)
    branches: int = 0
    states: int = 0

    @property
    def applications(self) -> int:
        return sum(self.rules.values())


class LetrecMatch:
    """Depth-first matcher; see the module docstring for the letrec strategy."""

    def __init__(self, budget: int = 10**6):
        self.budget = budget
        self.stats = MatchStats()
        self.hole_info: dict = {}
        self._used: set = set()
        self._pattern_atoms: set = set()
        self._nholes = 0

    # -- bookkeeping ---------------------------------------------------------

    def _tick(self, rule: str):
        self.stats.rules[rule] = self.stats.rules.get(rule, 0) + 1
        if self.stats.applications + self.stats.states > self.budget:
            raise BudgetExceeded(f"budget of {self.budget} exceeded")

    def _fresh(self) -> Atom:
        a = fresh_atom(self._used)
        self._used.add(a)
        return a

    def _new_hole(self) -> Atom:
        self._nholes += 1
        return Atom(f"{HOLE_PREFIX}{self._nholes}")

    def _open_holes(self, st: MState, t) -> set:
        return {a for a in all_atoms(t) if _is_hole(a) and a not in st.hole_val}

    def _resolve(self, st: MState, t):
        m = {a: st.hole_val[a] for a in all_atoms(t) if a in st.hole_val}
        return _rename(t, m)

    def _leaf_value(self, st: MState, w):
        """Atom denoted by a pattern leaf, or None while an atom variable is unknown."""
        if isinstance(w, Atom):
            return w
        if isinstance(w, AtomVar):
            return st.avals.get(w)
        if isinstance(w, AtomSusp):
            p = self._perm_value(st, w.perm)
            v = self._leaf_value(st, w.var)
            if p is None or v is None:
                return None
            return p(v)
        raise TypeError(w)

    def _perm_value(self, st: MState, p):
        if isinstance(p, Perm):
            return p
        if isinstance(p, SwapPerm):
            out = ID
            for x, y in p.swaps:
                a, b = self._leaf_value(st, x), self._leaf_value(st, y)
                if a is None or b is None:
                    return None
                out = out.compose(Perm.swap(a, b))
            return out
        raise TypeError(p)

    # -- setup -----------------------------------------------------------------

    def initial(self, eqs, fresh=()) -> MState:
        for p, t in eqs:
            if expr_vars(t) or not all(isinstance(x, Atom) for x in all_atoms(t)):
                raise ValueError("match targets must be ground")
            self._pattern_atoms |= all_atoms(p)
            self._used |= all_atoms(p) | all_atoms(t)
        for v, e in fresh:
            self._pattern_atoms |= all_atoms(e) | ({v} if isinstance(v, Atom) else set())
            self._used |= all_atoms(e)
        names = set()
        for p, _ in eqs:
            names |= expr_vars(p)
        self._fresh_vars = FreshVars(names, prefix="_s")
        self._fresh_avars = FreshVars((), prefix="_s")
        self.fresh_constraints = list(fresh)
        return MState(list(eqs), [], {}, {}, {}, [], {})

    # -- one step ----------------------------------------------------------------

    def step(self, st: MState):
        try:
            if st.queue:
                p, t = st.queue.pop(0)
                return self._process(st, p, t)
            return self._stuck(st)
        except _Fail as f:
            return ("fail", str(f))

    def _delay(self, st: MState, p, t):
        st.delayed.append((p, t))
        return ("next", st)

    def _wake(self, st: MState):
        st.queue.extend(st.delayed)
        st.delayed = []

    def _process(self, st: MState, p, t):
        t = self._resolve(st, t)
        open_ = self._open_holes(st, t)
        if isinstance(p, Susp):
            return self._var(st, p, t, open_)
        if isinstance(p, (Atom, AtomVar, AtomSusp)):
            return self._atom(st, p, t)
        if isinstance(p, App):
            if not isinstance(t, App) or t.fn != p.fn or len(t.args) != len(p.args):
                raise _Fail("Clash")
            self._tick("dec")
            st.queue[0:0] = list(zip(p.args, t.args))
            return ("next", st)
        if isinstance(p, Lam):
            if not isinstance(t, Lam):
                raise _Fail("Clash")
            if open_:
                return self._delay(st, p, t)
            a = self._leaf_value(st, p.binder)
            if a is None:
                return self._delay(st, p, t)
            if a == t.binder:
                self._tick("lam")
                st.queue.insert(0, (p.body, t.body))
                return ("next", st)
            if a in free_atoms(t.body):
                raise _Fail("FailLam")
            self._tick("lam-swap")
            st.queue.insert(0, (p.body, apply_perm(Perm.swap(a, t.binder), t.body)))
            return ("next", st)
        if isinstance(p, Letrec):
            if not isinstance(t, Letrec):
                raise _Fail("Clash")
            if open_:
                return self._delay(st, p, t)
            return self._letrec(st, p, t)
        raise TypeError(p)

    def _var(self, st: MState, p: Susp, t, open_):
        if isinstance(p.perm, Perm):
            perm = p.perm
        else:
            perm = self._perm_value(st, p.perm)
            if perm is None:
                return self._delay(st, p, t)
        if not perm.is_identity():
            if open_:
                return self._delay(st, p, t)
            t = apply_perm(perm.inverse(), t)
        x = p.var
        if x not in st.sigma:
            self._tick("bind")
            st.sigma[x] = t
            return ("next", st)
        old = self._resolve(st, st.sigma[x])
        old_open = self._open_holes(st, old)
        if open_ or old_open:
            groups = {self.hole_info[h][0] for h in open_ | old_open}
            if len(groups) > 1 or not (open_ and old_open):
                return self._delay(st, Susp(ID, x), t)
        self._tick("merge")
        if not alpha_eq(old, t):
            raise _Fail("Merge")
        return ("next", st)

    def _atom(self, st: MState, p, t):
        if not isinstance(t, Atom):
            raise _Fail("Clash")
        a = self._leaf_value(st, p)
        if _is_hole(t) and t not in st.hole_val:
            return self._atom_vs_hole(st, p, a, t)
        if a is None:
            if isinstance(p, AtomVar):
                self._tick("atomvar")
                st.avals[p] = t
                self._wake(st)
                return ("next", st)
            return self._delay(st, p, t)
        if a != t:
            raise _Fail("Clash")
        self._tick("atom")
        return ("next", st)

    def _atom_vs_hole(self, st: MState, p, a, h):
        gid, j = self.hole_info[h]
        g = st.groups[gid]
        if a is None and isinstance(p, AtomVar) and p in g.binders:
            i = g.binders.index(p)
            if g.p2t[i] == j:
                return ("next", st)
            if g.p2t[i] is not None or g.t2p[j] is not None:
                raise _Fail("Clash")
            self._pair(st, gid, i, j)
            return ("next", st)
        if a is None:
            return self._delay(st, p, h)
        if a in g.binders:
            i = g.binders.index(a)
            if g.p2t[i] is not None or g.t2p[j] is not None:
                raise _Fail("Clash")
            self._pair(st, gid, i, j)
            return ("next", st)
        # the hole must be the value of a slot binder of this group
        if g.t2p[j] is not None:
            i = g.t2p[j]
            self._set_slot(st, g, i, a)
            self._tick("slot")
            return ("next", st)
        cands = []
        seen_origin = set()
        for i, b in enumerate(g.binders):
            if isinstance(b, AtomVar) and g.p2t[i] is None and b not in st.avals:
                if g.origin[i] in seen_origin:
                    continue
                seen_origin.add(g.origin[i])
                cands.append(i)
        if not cands:
            raise _Fail("Clash")
        out = []
        for i in cands:
            b = st.copy()
            try:
                # the forced value goes in first so completing the group cannot pick a default
                self._set_slot(b, b.groups[gid], i, a)
                self._pair(b, gid, i, j)
            except _Fail:
                continue
            out.append(b)
        if not out:
            raise _Fail("Clash")
        self._tick("letrec-guess")
        return ("branch", out)

    def _set_slot(self, st: MState, g: _Group, i: int, a: Atom):
        var = g.binders[i]
        if var in st.avals:
            if st.avals[var] != a:
                raise _Fail("Clash")
            return
        others = {self._leaf_value(st, b) for k, b in enumerate(g.binders) if k != i}
        if a in others or a in g.t_fa:
            raise _Fail("FailFresh")
        st.avals[var] = a
        j = g.p2t[i]
        if j is not None:
            st.hole_val[g.holes[j]] = a
        self._wake(st)

    def _pair(self, st: MState, gid: int, i: int, j: int):
        g = st.groups[gid]
        g.p2t[i], g.t2p[j] = j, i
        val = self._leaf_value(st, g.binders[i])
        if val is not None:
            st.hole_val[g.holes[j]] = val
        st.queue.insert(0, (g.prhs[i], g.trhs[j]))
        self._tick("pair")
        if g.complete():
            self._finish_group(st, g)
        self._wake(st)

    def _finish_group(self, st: MState, g: _Group):
        # slot binders without a value stay open: a later pattern atom may still capture them
        for i, b in enumerate(g.binders):
            v = self._leaf_value(st, b)
            if v is not None:
                st.hole_val[g.holes[g.p2t[i]]] = v
        vals = [v for v in (self._leaf_value(st, b) for b in g.binders) if v is not None]
        if len(set(vals)) != len(vals):
            raise _Fail("FailFresh")

    def _open_slots(self, st: MState):
        for g in st.groups:
            if g.complete():
                for i, b in enumerate(g.binders):
                    if self._leaf_value(st, b) is None:
                        yield g, i

    def _default(self, st: MState, g: _Group, i: int) -> Atom:
        taken = {self._leaf_value(st, x) for x in g.binders} - {None}
        cand = g.tnames[g.p2t[i]]
        if cand in taken or cand in g.t_fa or cand in self._pattern_atoms:
            cand = self._fresh()
        return cand

    def _settle_slots(self, st: MState):
        for g, i in list(self._open_slots(st)):
            self._set_slot(st, g, i, self._default(st, g, i))

    # -- letrec ----------------------------------------------------------------

    def _letrec(self, st: MState, p: Letrec, t: Letrec):
        items = list(p.bindings)
        envs = [b for b in items if isinstance(b, EnvVar)]
        explicit = [b for b in items if isinstance(b, Binding)]
        m = len(t.bindings)
        if not envs:
            if len(explicit) != m:
                raise _Fail("Clash")
            return self._open_group(st, explicit, [None] * len(explicit), p.body, t)
        known = [e for e in envs if e in st.envs]
        for e in known:
            explicit.extend(Binding(a, Susp(ID, x)) for a, x in st.envs[e])
        fresh_envs = [e for e in envs if e not in st.envs]
        slack = m - len(explicit)
        if slack < 0 or (not fresh_envs and slack != 0):
            raise _Fail("Count")
        out = []
        for split in _compositions(slack, len(fresh_envs)):
            b = st.copy()
            binds = list(explicit)
            origin = [None] * len(explicit)
            for e, k in zip(fresh_envs, split):
                slots = []
                for _ in range(k):
                    av = AtomVar(self._fresh_avars().name)
                    xv = self._fresh_vars()
                    slots.append((av, xv))
                    binds.append(Binding(av, Susp(ID, xv)))
                    origin.append(e)
                b.envs[e] = slots
            try:
                res = self._open_group(b, binds, origin, p.body, t)
            except _Fail:
                continue
            out.append(res[1])
        self._tick("env-split")
        if not out:
            raise _Fail("Count")
        return ("branch", out)

    def _open_group(self, st: MState, binds, origin, pbody, t: Letrec):
        B = [b.binder for b in t.bindings]
        t_fa = free_atoms(t)
        concrete = [self._leaf_value(st, b.binder) for b in binds]
        if any(a is not None and a in t_fa for a in concrete):
            raise _Fail("FailFresh")
        for i, b in enumerate(binds):
            if concrete[i] is None and not isinstance(b.binder, AtomVar):
                # a suspended atom variable as binder: wait for its value
                st.delayed.append((Letrec(tuple(binds), pbody), t))
                return ("next", st)
        holes = [self._new_hole() for _ in B]
        ren = dict(zip(B, holes))
        inner = set()
        for b in t.bindings:
            inner |= all_atoms(b.rhs)
        inner |= all_atoms(t.body)
        clash = sorted((inner - set(B) - t_fa) & (self._pattern_atoms | {a for a in concrete if a}))
        for x in clash:
            ren[x] = self._fresh()
        g = _Group()
        g.binders = [b.binder if isinstance(b.binder, AtomVar) and concrete[i] is None else concrete[i]
                     for i, b in enumerate(binds)]
        g.prhs = [b.rhs for b in binds]
        g.trhs = [_rename(b.rhs, ren) for b in t.bindings]
        g.holes = holes
        g.tnames = B
        g.pshape = [None if isinstance(p, Susp) else shape(p) for p in g.prhs]
        g.tshape = [shape(t) for t in g.trhs]
        g.t_fa = t_fa
        g.origin = [o if o is not None else ("binder", i) for i, o in enumerate(origin)]
        g.p2t = [None] * len(binds)
        g.t2p = [None] * len(B)
        gid = len(st.groups)
        st.groups.append(g)
        for j, h in enumerate(holes):
            self.hole_info[h] = (gid, j)
        self._tick("letrec")
        st.queue.insert(0, (pbody, _rename(t.body, ren)))
        if not binds:
            self._finish_group(st, g)
        return ("next", st)

    # -- no equation can proceed -------------------------------------------------

    def _stuck(self, st: MState):
        for gid, g in enumerate(st.groups):
            if g.complete():
                continue
            # branch on whichever side has the fewest options: an explicit pattern binder, or a
            # target binding; unpaired slots of one environment are interchangeable, so a target
            # binding is only offered the first of them
            free_i, seen = [], set()
            for i, j0 in enumerate(g.p2t):
                if j0 is not None:
                    continue
                if self._is_slot(st, g, i):
                    if g.origin[i] in seen:
                        continue
                    seen.add(g.origin[i])
                free_i.append(i)
            best = None
            for i in free_i:
                if self._is_slot(st, g, i):
                    continue
                cands = [(i, j) for j in range(len(g.trhs))
                         if g.t2p[j] is None and self._compatible(st, g, i, j)]
                if best is None or len(cands) < len(best):
                    best = cands
                if len(best) <= 1:
                    break
            if best is None or len(best) > 1:
                for j, i0 in enumerate(g.t2p):
                    if i0 is not None:
                        continue
                    cands = [(i, j) for i in free_i if self._compatible(st, g, i, j)]
                    if best is None or len(cands) < len(best):
                        best = cands
                    if len(best) <= 1:
                        break
            cands = best
            out = []
            for i, j in cands:
                b = st.copy()
                try:
                    self._pair(b, gid, i, j)
                except _Fail:
                    continue
                out.append(b)
            self._tick("letrec-guess")
            if not out:
                raise _Fail("Clash")
            return ("branch", out)
        if st.delayed:
            slots = list(self._open_slots(st))
            if slots:
                return self._guess_slot(st, slots[0])
            avs = []
            for p, _ in st.delayed:
                avs.extend(sorted(_atom_vars_of(p) - set(st.avals)))
            if not avs:
                raise _Fail("Stuck")
            a = avs[0]
            pool = sorted(self._used) + [self._fresh()]
            out = []
            for c in pool:
                b = st.copy()
                b.avals[a] = c
                self._wake(b)
                out.append(b)
            self._tick("elim-atomvar")
            return ("branch", out)
        return self._finish(st)

    def _is_slot(self, st: MState, g: _Group, i: int) -> bool:
        return not isinstance(g.origin[i], tuple) and g.binders[i] not in st.avals

    def _guess_slot(self, st: MState, slot):
        """Either a pattern atom still waiting in the delayed work gets captured, or a generic name."""
        g, i = slot
        gid = st.groups.index(g)
        cands = set()
        for p, _ in st.delayed:
            # only atoms that may occur free can be captured; bound ones are alpha-renameable
            cands |= free_atoms(p) | (all_atoms(p) - bound_atoms(p))
            for w in atom_vars(p):
                a = self._leaf_value(st, w)
                if a is not None:
                    cands.add(a)
        cands = {a for a in cands if not _is_hole(a)}
        taken = {self._leaf_value(st, x) for x in g.binders} - {None}
        cands = sorted(cands - taken - g.t_fa) + [self._default(st, g, i)]
        out = []
        for a in dict.fromkeys(cands):
            b = st.copy()
            try:
                self._set_slot(b, b.groups[gid], i, a)
            except _Fail:
                continue
            out.append(b)
        self._tick("slot-guess")
        if not out:
            raise _Fail("Clash")
        return ("branch", out)

    def _compatible(self, st: MState, g: _Group, i: int, j: int) -> bool:
        if g.pshape[i] is None:
            return True
        if g.pshape[i] != g.tshape[j]:
            return False
        p, t = g.prhs[i], g.trhs[j]
        if isinstance(p, App):
            return all(self._arg_ok(st, g, pa, self._resolve_leaf(st, ta)) for pa, ta in zip(p.args, t.args))
        if isinstance(p, (Atom, AtomVar)):
            return self._arg_ok(st, g, p, self._resolve_leaf(st, t))
        return True

    def _resolve_leaf(self, st: MState, t):
        if isinstance(t, Atom):
            return st.hole_val.get(t, t)
        return t

    def _arg_ok(self, st: MState, g: _Group, pa, ta) -> bool:
        """Cheap necessary condition for ``pa <| ta`` used to rank letrec guesses."""
        if isinstance(pa, Susp) and isinstance(pa.perm, Perm) and pa.perm.is_identity():
            v = st.sigma.get(pa.var)
            if v is None:
                return True
            v = self._resolve_leaf(st, v)
            if not isinstance(v, Atom):
                return not isinstance(ta, Atom)
            if _is_hole(v):
                if _is_hole(ta) and ta not in st.hole_val:
                    return v == ta or self.hole_info[v][0] != self.hole_info[ta][0]
                return isinstance(ta, Atom)
            pa = v
        if isinstance(pa, Atom):
            if not isinstance(ta, Atom):
                return False
            if _is_hole(ta) and ta not in st.hole_val:
                gid, j = self.hole_info[ta]
                hg = st.groups[gid]
                if pa in hg.binders:
                    i = hg.binders.index(pa)
                    return hg.p2t[i] in (None, j) and hg.t2p[j] in (None, i)
                return any(isinstance(b, AtomVar) and b not in st.avals for b in hg.binders)
            return pa == ta
        return True

    def _finish(self, st: MState):
        self._settle_slots(st)
        sigma = {x: self._resolve(st, e) for x, e in st.sigma.items()}
        for v, e in self.fresh_constraints:
            a = self._leaf_value(st, v)
            if a is None or a in free_atoms(substitute(e, sigma)):
                raise _Fail("FailFresh")
        self._tick("output")
        envs = {}
        for e, slots in st.envs.items():
            envs[e] = tuple(Binding(st.avals[a], sigma[x]) for a, x in slots)
        slot_vars = {x for slots in st.envs.values() for _, x in slots}
        slot_avs = {a for slots in st.envs.values() for a, _ in slots}
        return ("done", MatchSolution({x: e for x, e in sigma.items() if x not in slot_vars},
                                      {a: v for a, v in st.avals.items() if a not in slot_avs},
                                      envs))

    # -- driver ------------------------------------------------------------------

    def run(self, eqs, fresh=(), collect: bool = False) -> list[MatchSolution]:
        stack = [self.initial(eqs, fresh)]
        found, seen = [], set()
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


def _atom_vars_of(p) -> set:
    return set(atom_vars(p))


def _compositions(total: int, parts: int):
    """All ways to write ``total`` as an ordered sum of ``parts`` non-negative integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def letrec_match(eqs, fresh=(), mode: str = "decision", budget: int = 10**6) -> list[MatchSolution]:
    """Solve the matching problem; an empty list means UNSAT."""
    if mode not in ("decision", "collecting"):
        raise ValueError(f"unknown mode {mode!r}")
    return LetrecMatch(budget=budget).run(eqs, fresh, collect=(mode == "collecting"))


# ---------------------------------------------------------------------------
# hardness encoders


def _vertex_atoms(g: Graph, prefix: str) -> dict:
    return {v: Atom(f"{prefix}{i + 1}") for i, v in enumerate(g.vertices)}


def encode_hamiltonian(g: Graph):
    """(pattern, target) solvable iff the 3-regular graph ``g`` has a Hamiltonian cycle."""
    if g.regular_degree() != 3:
        raise ValueError("the Hamiltonian encoder needs a 3-regular graph")
    node = _vertex_atoms(g, "n")
    binds = [Binding(node[v], App("node", (node[v],))) for v in g.vertices]
    k = 0
    for u, v in g.edges:
        for x, y in ((u, v), (v, u)):
            k += 1
            binds.append(Binding(Atom(f"e{k}"), App("f", (node[x], node[y]))))
    target = Letrec(tuple(binds), App("0"))
    n = len(g.vertices)
    X = [Susp(ID, ExprVar(f"X{i + 1}")) for i in range(n)]
    pbinds = [Binding(node[v], App("node", (X[i],))) for i, v in enumerate(g.vertices)]
    pbinds += [Binding(Atom(f"c{i + 1}"), App("f", (X[i], X[(i + 1) % n]))) for i in range(n)]
    for d in range(3 * n - n):
        pbinds.append(Binding(Atom(f"d{d + 1}"),
                              App("f", (Susp(ID, ExprVar(f"Z{d + 1}")), Susp(ID, ExprVar(f"W{d + 1}"))))))
    pattern = Letrec(tuple(pbinds), App("0"))
    return pattern, target


def _graph_env(g: Graph):
    node = _vertex_atoms(g, "a")
    binds = [Binding(node[v], App("node", (node[v],))) for v in g.vertices]
    names = []
    for k, (u, v) in enumerate(g.edges):
        b, b2 = Atom(f"b{k + 1}"), Atom(f"c{k + 1}")
        binds.append(Binding(b, App("edge", (node[u], node[v]))))
        binds.append(Binding(b2, App("edge", (node[v], node[u]))))
        names += [b, b2]
    return binds, names


def encode_graph_iso(g1: Graph, g2: Graph):
    """(pattern, target) with one variable; solvable iff ``g1`` and ``g2`` are isomorphic."""
    for g in (g1, g2):
        d = g.regular_degree()
        if d is None or d < 1:
            raise ValueError("the isomorphism encoder needs regular graphs of degree >= 1")
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        raise ValueError("graphs must have the same numbers of vertices and edges")
    tb, names = _graph_env(g1)
    target = Letrec(tuple(tb), App("g", tuple(names)))
    pb, _ = _graph_env(g2)
    pattern = Letrec(tuple(pb), Susp(ID, ExprVar("X")))
    assert is_garbage_free(target)
    return pattern, target


__all__ = ["LetrecMatch", "MatchSolution", "encode_graph_iso", "encode_hamiltonian", "letrec_match"]
