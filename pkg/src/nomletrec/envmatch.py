"""Matching with environment variables ``%E`` in letrec patterns.

The search itself lives in :mod:`nomletrec.match`; when a pattern
environment with ``n`` explicit bindings and environment variables meets a
target with ``m`` bindings, the slack ``m - n`` is split among the
environment variables in every possible way and each variable becomes that
many fresh bindings ``A.X``. Images of environment variables are reported as
binding multisets.
"""
from __future__ import annotations

from collections import Counter

from .match import LetrecMatch, MatchSolution
from .terms import (
    App, Atom, AtomSusp, AtomVar, Binding, EnvVar, Lam, Letrec, Susp, apply_perm, env_vars,
    eval_perm,
)


def env_match(eqs, fresh=(), mode: str = "decision", budget: int = 10**6) -> list[MatchSolution]:
    """Solve ``pattern <| target`` pairs whose patterns may contain environment variables."""
    if mode not in ("decision", "collecting"):
        raise ValueError(f"unknown mode {mode!r}")
    for _, t in eqs:
        if env_vars(t):
            raise ValueError("targets must not contain environment variables")
    return LetrecMatch(budget=budget).run(list(eqs), fresh, collect=(mode == "collecting"))


def instantiate(p, sol: MatchSolution):
    """The pattern with every expression, atom and environment variable replaced."""
    if isinstance(p, Atom):
        return p
    if isinstance(p, AtomVar):
        return sol.atoms[p]
    if isinstance(p, AtomSusp):
        return eval_perm(p.perm, sol.atoms)(instantiate(p.var, sol))
    if isinstance(p, Susp):
        return apply_perm(eval_perm(p.perm, sol.atoms), sol.sigma[p.var])
    if isinstance(p, Lam):
        return Lam(instantiate(p.binder, sol), instantiate(p.body, sol))
    if isinstance(p, App):
        return App(p.fn, tuple(instantiate(a, sol) for a in p.args))
    if isinstance(p, Letrec):
        items = []
        for b in p.bindings:
            if isinstance(b, EnvVar):
                items.extend(sol.envs[b])
            else:
                items.append(Binding(instantiate(b.binder, sol), instantiate(b.rhs, sol)))
        return Letrec(tuple(items), instantiate(p.body, sol))
    raise TypeError(p)


def env_image(sol: MatchSolution, e: EnvVar) -> Counter:
    """The image of ``e`` as a multiset of bindings."""
    return Counter(sol.envs.get(e, ()))


__all__ = ["env_image", "env_match", "instantiate"]
