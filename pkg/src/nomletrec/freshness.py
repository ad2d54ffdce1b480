"""Freshness constraints: simplification to atomic form and satisfiability.

Ground-tier constraints are pairs ``(a, e)`` meaning ``a # e``. The simplified
form is a frozenset of atomic pairs ``(a, X)``; ``None`` stands for bottom.

Atom-variable constraints use ``Fresh(subject, target)`` and
``AtomEq(left, right)``; the latter is the equality ``V1 =# pi.V2`` and is
checked natively rather than through its lambda encoding.
"""
from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    App, Atom, Lam, Letrec, Susp, all_atoms, atom_vars, eval_leaf, fresh_atoms,
    free_atoms, instantiate_atom_vars, substitute,
)


def simplify(constraints):
    """Normalize ``a # e`` constraints; return atomic pairs or None for bottom."""
    out: set = set()
    todo = list(constraints)
    while todo:
        a, e = todo.pop()
        if isinstance(e, Atom):
            if a == e:
                return None
        elif isinstance(e, App):
            todo.extend((a, x) for x in e.args)
        elif isinstance(e, Lam):
            if e.binder != a:
                todo.append((a, e.body))
        elif isinstance(e, Letrec):
            if a not in e.binders():
                todo.extend((a, b.rhs) for b in e.bindings)
                todo.append((a, e.body))
        elif isinstance(e, Susp):
            out.add((e.perm.inverse()(a), e.var))
        else:
            raise TypeError(f"freshness target {e!r}")
    return frozenset(out)


def check_ground(constraints, rho: dict) -> bool:
    """Do all constraints hold once ``rho`` grounds their variables?"""
    return all(a not in free_atoms(substitute(e, rho)) for a, e in constraints)


@dataclass(frozen=True)
class Fresh:
    subject: object  # atom-like leaf
    target: object


@dataclass(frozen=True)
class AtomEq:
    left: object
    right: object


def _parts(c):
    if isinstance(c, Fresh):
        return (c.subject, c.target)
    if isinstance(c, AtomEq):
        return (c.left, c.right)
    return c


def ground_check(constraints, assign: dict):
    """Ground the atom variables by ``assign`` and simplify; None means bottom."""
    pairs = []
    for c in constraints:
        if isinstance(c, AtomEq):
            if eval_leaf(c.left, assign) != eval_leaf(c.right, assign):
                return None
        elif isinstance(c, Fresh):
            pairs.append((eval_leaf(c.subject, assign), instantiate_atom_vars(c.target, assign)))
        else:
            pairs.append(c)
    return simplify(pairs)


def av_satisfiable(constraints, extra_atoms=()):
    """Search atom-variable images among the atoms present plus fresh ones.

    One fresh atom per atom variable suffices; fresh atoms are used in order
    to skip symmetric assignments. Returns (True, witness) or (False, None).
    """
    constraints = list(constraints)
    avs: set = set()
    atoms: set = set(extra_atoms)
    for c in constraints:
        for part in _parts(c):
            avs |= atom_vars(part)
            atoms |= all_atoms(part)
    avs_l = sorted(avs)
    fresh = fresh_atoms(atoms, len(avs_l))
    known = sorted(atoms)

    def go(i: int, assign: dict, used_fresh: int):
        if i == len(avs_l):
            if ground_check(constraints, assign) is not None:
                return dict(assign)
            return None
        choices = known + fresh[:used_fresh + 1]
        for a in choices:
            assign[avs_l[i]] = a
            nf = used_fresh + 1 if a in fresh[used_fresh:used_fresh + 1] else used_fresh
            w = go(i + 1, assign, nf)
            if w is not None:
                return w
        del assign[avs_l[i]]
        return None

    witness = go(0, {}, 0)
    return (witness is not None), witness


__all__ = ["AtomEq", "Fresh", "av_satisfiable", "check_ground", "ground_check", "simplify"]
