"""Nominal unification and matching for higher-order expressions with recursive let."""
from .alpha import alpha_eq, garbage_split, is_garbage_free
from .av import LetrecUnifyAV, letrec_unify_av
from .envmatch import env_match
from .grammar import GPerm, PermGrammar
from .match import LetrecMatch, encode_graph_iso, encode_hamiltonian, letrec_match
from .permgroup import PermGroup, member, reduce
from .sexpr import parse, parse_problem, show
from .terms import Atom, AtomVar, EnvVar, ExprVar, Perm
from .unify import LetrecUnify, letrec_unify

__all__ = [
    "Atom", "AtomVar", "EnvVar", "ExprVar", "GPerm", "LetrecMatch", "LetrecUnify", "LetrecUnifyAV",
    "Perm", "PermGrammar", "PermGroup", "alpha_eq", "encode_graph_iso", "encode_hamiltonian",
    "env_match", "garbage_split", "is_garbage_free", "letrec_match", "letrec_unify",
    "letrec_unify_av", "member", "parse", "parse_problem", "reduce", "show",
]
