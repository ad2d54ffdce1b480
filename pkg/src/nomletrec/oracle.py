"""Brute-force reference implementations.

Nothing here reuses the solvers: permutation application, free atoms and
alpha-equivalence are transcribed directly from their definitions, and all
searches are exhaustive. Inputs are size-guarded.
"""
from __future__ import annotations

import itertools
from types import SimpleNamespace

from .graphs import Graph
from .terms import App, Atom, Binding, ExprVar, Lam, Letrec, Perm, Susp

MAX_VERTICES = 12
MAX_BINDINGS = 5


class OracleTooLarge(ValueError):
    pass


def naive_perm(m: dict, e):
    """Apply the atom map ``m`` to every atom, binders included."""
    if isinstance(e, Atom):
        return m.get(e, e)
    if isinstance(e, Lam):
        return Lam(m.get(e.binder, e.binder), naive_perm(m, e.body))
    if isinstance(e, App):
        return App(e.fn, tuple(naive_perm(m, x) for x in e.args))
    if isinstance(e, Letrec):
        return Letrec(tuple(Binding(m.get(b.binder, b.binder), naive_perm(m, b.rhs))
                            for b in e.bindings), naive_perm(m, e.body))
    if isinstance(e, Susp):
        raise TypeError("naive_perm on a suspension")
    raise TypeError(e)


def naive_fa(e) -> set:
    if isinstance(e, Atom):
        return {e}
    if isinstance(e, Lam):
        return naive_fa(e.body) - {e.binder}
    if isinstance(e, App):
        out = set()
        for x in e.args:
            out |= naive_fa(x)
        return out
    if isinstance(e, Letrec):
        out = naive_fa(e.body)
        for b in e.bindings:
            out |= naive_fa(b.rhs)
        return out - {b.binder for b in e.bindings}
    raise TypeError(e)


def alpha_eq_naive(e1, e2) -> bool:
    """Alpha-equivalence by exhaustive search over binding orders and renamings."""
    if isinstance(e1, Atom) or isinstance(e2, Atom):
        return e1 == e2
    if isinstance(e1, App) and isinstance(e2, App):
        return (e1.fn == e2.fn and len(e1.args) == len(e2.args)
                and all(alpha_eq_naive(x, y) for x, y in zip(e1.args, e2.args)))
    if isinstance(e1, Lam) and isinstance(e2, Lam):
        a, b = e1.binder, e2.binder
        if a == b:
            return alpha_eq_naive(e1.body, e2.body)
        return a not in naive_fa(e2.body) and alpha_eq_naive(
            e1.body, naive_perm({a: b, b: a}, e2.body))
    if isinstance(e1, Letrec) and isinstance(e2, Letrec):
        n = len(e1.bindings)
        if n != len(e2.bindings):
            return False
        if n > MAX_BINDINGS:
            raise OracleTooLarge(f"{n} bindings")
        A = [b.binder for b in e1.bindings]
        B = [b.binder for b in e2.bindings]
        if set(A) & naive_fa(e2):
            return False
        src = sorted(set(A) - set(B))
        dst = sorted(set(B) - set(A))
        for rho in itertools.permutations(range(n)):
            base = {B[rho[i]]: A[i] for i in range(n)}
            for images in itertools.permutations(dst):
                m = dict(base)
                m.update(zip(src, images))
                if not alpha_eq_naive(e1.body, naive_perm(m, e2.body)):
                    continue
                if all(alpha_eq_naive(e1.bindings[i].rhs, naive_perm(m, e2.bindings[rho[i]].rhs))
                       for i in range(n)):
                    return True
        return False
    return False


# ---------------------------------------------------------------------------
# ground solutions


def naive_subst(e, rho: dict):
    """Instantiate suspensions ``pi.X`` by ``pi`` applied to rho[X]."""
    if isinstance(e, Susp):
        m = dict(e.perm.items())
        return naive_perm(m, rho[e.var])
    if isinstance(e, Lam):
        return Lam(e.binder, naive_subst(e.body, rho))
    if isinstance(e, App):
        return App(e.fn, tuple(naive_subst(x, rho) for x in e.args))
    if isinstance(e, Letrec):
        return Letrec(tuple(Binding(b.binder, naive_subst(b.rhs, rho)) for b in e.bindings),
                      naive_subst(e.body, rho))
    return e


def _vars(e, out: list):
    if isinstance(e, Susp):
        if e.var not in out:
            out.append(e.var)
    elif isinstance(e, Lam):
        _vars(e.body, out)
    elif isinstance(e, App):
        for x in e.args:
            _vars(x, out)
    elif isinstance(e, Letrec):
        for b in e.bindings:
            if isinstance(b, Binding):
                _vars(b.rhs, out)
        _vars(e.body, out)


def ground_terms(atom_pool, depth_bound: int, signature: dict, lambdas: bool = True) -> list:
    """All ground expressions of depth <= depth_bound (letrec-free)."""
    levels = [[*atom_pool] + [App(f, ()) for f, k in sorted(signature.items()) if k == 0]]
    for _ in range(depth_bound):
        prev = levels[-1]
        nxt = list(levels[0])
        for f, k in sorted(signature.items()):
            if k > 0:
                nxt.extend(App(f, args) for args in itertools.product(prev, repeat=k))
        if lambdas:
            nxt.extend(Lam(a, body) for a in atom_pool for body in prev)
        levels.append(nxt)
    seen, out = set(), []
    for t in levels[-1]:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def problem_vars(problem) -> list[ExprVar]:
    out: list = []
    for s, t in problem.eqs:
        _vars(s, out)
        _vars(t, out)
    for _, e in problem.fresh:
        _vars(e, out)
    return out


def is_ground_solution(problem, rho: dict) -> bool:
    for s, t in problem.eqs:
        if not alpha_eq_naive(naive_subst(s, rho), naive_subst(t, rho)):
            return False
    for a, e in problem.fresh:
        if a in naive_fa(naive_subst(e, rho)):
            return False
    return True


def enum_ground_solutions(problem, atom_pool, depth_bound: int, signature: dict,
                          lambdas: bool = True, candidates=None) -> list[dict]:
    """Every assignment of bounded ground terms to the variables that solves ``problem``."""
    xs = problem_vars(problem)
    cands = candidates if candidates is not None else ground_terms(
        atom_pool, depth_bound, signature, lambdas)
    out = []
    for combo in itertools.product(cands, repeat=len(xs)):
        rho = dict(zip(xs, combo))
        if is_ground_solution(problem, rho):
            out.append(rho)
    return out


def _subterms(e, out: list):
    if e not in out:
        out.append(e)
    if isinstance(e, Lam):
        _subterms(e.body, out)
    elif isinstance(e, App):
        for x in e.args:
            _subterms(x, out)
    elif isinstance(e, Letrec):
        for b in e.bindings:
            if isinstance(b, Binding):
                _subterms(b.rhs, out)
        _subterms(e.body, out)


def _atoms(e, out: set):
    if isinstance(e, Atom):
        out.add(e)
    elif isinstance(e, Lam):
        out.add(e.binder)
        _atoms(e.body, out)
    elif isinstance(e, App):
        for x in e.args:
            _atoms(x, out)
    elif isinstance(e, Letrec):
        for b in e.bindings:
            if isinstance(b, Binding):
                out.add(b.binder)
                _atoms(b.rhs, out)
        _atoms(e.body, out)
    elif isinstance(e, Susp):
        for a, b in e.perm.items():
            out.update((a, b))


def match_candidates(eqs, limit: int = 4000) -> list:
    """Every target subterm under every renaming of the atoms in play."""
    subs: list = []
    atoms: set = set()
    for p, t in eqs:
        _subterms(t, subs)
        _atoms(p, atoms)
        _atoms(t, atoms)
    pool = sorted(atoms)
    if len(pool) > 5:
        raise OracleTooLarge(f"{len(pool)} atoms")
    out: list = []
    seen: set = set()
    for images in itertools.permutations(pool):
        m = dict(zip(pool, images))
        for u in subs:
            v = naive_perm(m, u)
            if v not in seen:
                seen.add(v)
                out.append(v)
        if len(out) > limit:
            raise OracleTooLarge(f"more than {limit} candidates")
    return out


def enum_matches(eqs, fresh=()) -> list[dict]:
    """All assignments of candidate subterms to pattern variables solving ``p <| t``."""
    prob = SimpleNamespace(eqs=list(eqs), fresh=list(fresh))
    xs = problem_vars(prob)
    if len(xs) > 2:
        raise OracleTooLarge(f"{len(xs)} variables")
    cands = match_candidates(eqs)
    out = []
    for combo in itertools.product(cands, repeat=len(xs)):
        rho = dict(zip(xs, combo))
        if is_ground_solution(prob, rho):
            out.append(rho)
    return out


def _open_atoms(e) -> set:
    """Atoms that may end up free after instantiation: free ones plus those in suspensions."""
    if isinstance(e, Atom):
        return {e}
    if isinstance(e, Susp):
        return {a for pair in e.perm.items() for a in pair}
    if isinstance(e, Lam):
        return _open_atoms(e.body) - {e.binder}
    if isinstance(e, App):
        return set().union(*map(_open_atoms, e.args))
    if isinstance(e, Letrec):
        out = _open_atoms(e.body)
        for b in e.bindings:
            out |= _open_atoms(b.rhs)
        return out - {b.binder for b in e.bindings}
    raise TypeError(e)


def _rebind(state, j, name):
    """Rename outer binder ``j`` to ``name`` by swapping the two names everywhere.

    ``state`` is (target, accumulated atom map); the map records the composite swap.
    """
    target, perm = state
    old = target.bindings[j].binder
    if old == name:
        return state
    sw = {old: name, name: old}
    perm = {a: sw.get(perm.get(a, a), perm.get(a, a)) for a in set(perm) | {old, name}}
    return naive_perm(sw, target), perm


def enum_env_matches(pattern, target) -> list[tuple]:
    """Brute force for ``letrec env; %E in body <| letrec ...`` with one environment variable.

    Tries every way of pairing the explicit binders with target bindings and every
    renaming of the leftover target binders to pattern atoms (or to fresh names),
    each realised as a swap on the whole target.  Returns (image bindings of E,
    assignment of expression variables) pairs.
    """
    if not isinstance(pattern, Letrec) or not isinstance(target, Letrec):
        raise ValueError("expected letrec pattern and target")
    envs = [b for b in pattern.bindings if not isinstance(b, Binding)]
    explicit = [b for b in pattern.bindings if isinstance(b, Binding)]
    if len(envs) != 1:
        raise OracleTooLarge("exactly one environment variable supported")
    m = len(target.bindings)
    if m > 4:
        raise OracleTooLarge(f"{m} target bindings")
    k = m - len(explicit)
    if k < 0:
        return []
    prob = SimpleNamespace(eqs=[(Letrec(tuple(explicit), pattern.body), target)], fresh=[])
    xs = problem_vars(prob)
    if len(xs) > 2:
        raise OracleTooLarge(f"{len(xs)} variables")
    t_fa = naive_fa(target)
    names = [b.binder for b in explicit]
    if set(names) & t_fa:
        return []
    p_atoms = _open_atoms(Letrec(tuple(explicit), pattern.body)) | set(names)
    base = match_candidates([(pattern, target)])
    out, seen = [], set()
    for paired in itertools.permutations(range(m), len(explicit)):
        aligned = (target, {})
        for x, j in zip(names, paired):
            aligned = _rebind(aligned, j, x)
        rest = [j for j in range(m) if j not in paired]
        pool = sorted((p_atoms | {aligned[0].bindings[j].binder for j in rest}) - t_fa - set(names))
        options = pool + [Atom(f"zz{i}") for i in range(k)]
        for chosen in itertools.permutations(options, k):
            fresh = [a.name for a in chosen if a.name.startswith("zz")]
            if fresh != [f"zz{i}" for i in range(len(fresh))]:
                continue
            tgt = aligned
            for j, a in zip(rest, chosen):
                tgt = _rebind(tgt, j, a)
            tgt, perm = tgt
            image = tuple(tgt.bindings[j] for j in rest)
            for combo in itertools.product(base, repeat=len(xs)):
                rho = dict(zip(xs, (naive_perm(perm, c) for c in combo)))
                inst = Letrec(tuple(Binding(b.binder, naive_subst(b.rhs, rho)) for b in explicit) + image,
                              naive_subst(pattern.body, rho))
                key = (image, tuple(sorted(rho.items(), key=repr)))
                if key not in seen and alpha_eq_naive(inst, target):
                    seen.add(key)
                    out.append((image, rho))
    return out


# ---------------------------------------------------------------------------
# graph oracles


def _guard(g: Graph):
    if len(g.vertices) > MAX_VERTICES:
        raise OracleTooLarge(f"{len(g.vertices)} vertices (limit {MAX_VERTICES})")


# ---------------------------------------------------------------------------
# permutation groups


def naive_closure(gens, limit: int = 50000) -> set:
    """Every element of the group generated by ``gens``, by breadth-first closure."""
    elems = {Perm()}
    frontier = [Perm()]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = g.compose(p)
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
        if len(elems) > limit:
            raise OracleTooLarge(f"group has more than {limit} elements")
        frontier = nxt
    return elems


def ham_cycle(g: Graph) -> bool:
    """Exhaustive depth-first search for a Hamiltonian cycle."""
    _guard(g)
    vs = list(g.vertices)
    if len(vs) < 3:
        return False
    adj = {v: set() for v in vs}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    start = vs[0]
    path = [start]
    used = {start}

    def dfs() -> bool:
        if len(path) == len(vs):
            return start in adj[path[-1]]
        for w in vs:
            if w not in used and w in adj[path[-1]]:
                path.append(w)
                used.add(w)
                if dfs():
                    return True
                path.pop()
                used.discard(w)
        return False

    return dfs()


def graph_iso(g1: Graph, g2: Graph) -> bool:
    """Exhaustive search over vertex bijections."""
    _guard(g1)
    _guard(g2)
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    e2 = {frozenset(e) for e in g2.edges}
    adj1 = {v: set() for v in g1.vertices}
    for u, v in g1.edges:
        adj1[u].add(v)
        adj1[v].add(u)
    v1 = list(g1.vertices)
    m: dict = {}
    used: set = set()

    def extend(i: int) -> bool:
        if i == len(v1):
            return True
        u = v1[i]
        for w in g2.vertices:
            if w in used:
                continue
            # every edge back to an already placed vertex must be preserved
            if all(frozenset((w, m[x])) in e2 for x in adj1[u] if x in m):
                m[u] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del m[u]
                used.discard(w)
        return False

    return extend(0)
