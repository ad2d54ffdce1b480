"""Command-line front end.

Exit codes: 0 solvable (or true), 1 unsolvable (or false), 2 input error,
3 budget exhausted. Results are printed as s-expressions.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from . import oracle
from .alpha import alpha_eq
from .av import LetrecUnifyAV, strategy
from .freshness import AtomEq, Fresh
from .graphs import Graph
from .match import LetrecMatch, encode_graph_iso, encode_hamiltonian
from .sexpr import MatchProblem, ParseError, Problem, parse, parse_edges, parse_problem, show
from .terms import (
    App, Atom, Lam, Letrec, Susp, all_atoms, atom_vars, compose_chain, env_vars, expr_vars, fresh_atom,
)
from .unify import BudgetExceeded, LetrecUnify

EXIT_OK, EXIT_UNSAT, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e


def _load(path: str, kind: type):
    try:
        prob = parse_problem(_read(path))
    except ParseError as e:
        raise InputError(f"{path}:{e}") from e
    if not isinstance(prob, kind):
        want = "(problem ...)" if kind is Problem else "(match ...)"
        raise InputError(f"{path}: expected a {want} file")
    return prob


# ---------------------------------------------------------------------------
# formatting


def _section(name: str, items: list) -> str:
    if not items:
        return f"  ({name})"
    return f"  ({name}\n" + "\n".join("    " + x for x in items) + ")"


def _fix_line(x, perm) -> str:
    return f"(eq ?{x.name} {show(Susp(perm, x))})"


def _resolved(theta, variables, export=lambda e: e):
    """Apply the substitution chain and keep only the problem's own variables."""
    chain = compose_chain([(x, export(e)) for x, e in theta])
    keep = chain if variables is None else [x for x in chain if x in variables]
    return [(x, chain[x]) for x in sorted(keep)]


def format_unifier(u, variables=None) -> str:
    theta = [f"(?{x.name} {show(e)})" for x, e in _resolved(u.theta, variables)]
    fresh = [f"(fresh {show(a)} ?{y.name})" for a, y in sorted(u.nabla)]
    fix = [_fix_line(x, t) for x, t in u.fix]
    return "(unifier\n" + "\n".join([_section("theta", theta), _section("freshness", fresh),
                                     _section("fixpoints", fix)]) + ")"


def format_av_unifier(engine: LetrecUnifyAV, u, variables=None) -> str:
    ex = engine.export
    theta = [f"(?{x.name} {show(e)})" for x, e in _resolved(u.theta, variables, ex)]
    atoms = [f"({show(a)} {show(v)})" for a, v in u.atoms]
    cons = []
    for c in u.nabla:
        if isinstance(c, Fresh):
            cons.append(f"(fresh {show(ex(c.subject))} {show(ex(c.target))})")
        elif isinstance(c, AtomEq):
            cons.append(f"(atom-eq {show(ex(c.left))} {show(ex(c.right))})")
    fix = [_fix_line(x, engine.export_perm(t)) for x, t in u.fix]
    return "(unifier\n" + "\n".join([_section("theta", theta), _section("atoms", atoms),
                                     _section("freshness", cons), _section("fixpoints", fix)]) + ")"


def format_match(sol) -> str:
    sigma = [f"(?{x.name} {show(e)})" for x, e in sorted(sol.sigma.items())]
    atoms = [f"({show(a)} {show(v)})" for a, v in sorted(sol.atoms.items())]
    envs = []
    for e, binds in sorted(sol.envs.items()):
        body = " ".join(f"({show(b.binder)} {show(b.rhs)})" for b in sorted(binds, key=show_binding))
        envs.append(f"(%{e.name} ({body}))")
    return "(match-solution\n" + "\n".join([_section("sigma", sigma), _section("atoms", atoms),
                                            _section("envs", envs)]) + ")"


def show_binding(b) -> str:
    return f"({show(b.binder)} {show(b.rhs)})"


def format_stats(stats, extra: dict | None = None) -> str:
    rows = [f"(applications {stats.applications})", f"(branches {stats.branches})",
            f"(states {stats.states})"]
    for k, v in (extra or {}).items():
        rows.append(f"({k} {v})")
    rules = " ".join(f"({k} {v})" for k, v in sorted(stats.rules.items()))
    rows.append(f"(rules {rules})")
    return "(stats\n" + "\n".join("  " + r for r in rows) + ")"


# ---------------------------------------------------------------------------
# subcommands


def _input_vars(prob) -> set:
    out: set = set()
    for s, t in prob.eqs:
        out |= expr_vars(s) | expr_vars(t)
    for _, e in prob.fresh:
        out |= expr_vars(e)
    return out


def _explore_branch(opts: dict, state):
    engine = LetrecUnify(**opts)
    return engine.explore([state], collect=True), engine.stats


def cmd_unify(args) -> int:
    prob = _load(args.file, Problem)
    for s, t in prob.eqs:
        if atom_vars(s) or atom_vars(t):
            raise InputError("atom variables found; use unify-av")
    opts = dict(elim_fp=not args.no_elim_fp, garbage_free=args.garbage_free, budget=args.budget)
    engine = LetrecUnify(**opts)
    collect = args.mode == "collecting"
    if collect and args.jobs > 1:
        found, branches = engine.split(prob.eqs, prob.fresh)
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            parts = list(pool.map(_explore_branch, [opts] * len(branches), branches))
        seen = {u.key() for u in found}
        for us, st in parts:
            engine.stats.rules.update(st.rules)
            engine.stats.states += st.states
            engine.stats.branches += st.branches
            for u in us:
                if u.key() not in seen:
                    seen.add(u.key())
                    found.append(u)
    else:
        found = engine.run(prob.eqs, prob.fresh, collect=collect)
    variables = _input_vars(prob)
    for u in found:
        print(format_unifier(u, variables))
    if args.stats:
        print(format_stats(engine.stats, {"max-fix": engine.stats.max_fix}))
    if args.oracle:
        _oracle_report(prob, bool(found))
    return EXIT_OK if found else EXIT_UNSAT


def cmd_unify_av(args) -> int:
    prob = _load(args.file, Problem)
    engine = LetrecUnifyAV(p=args.strategy_p, budget=args.budget)
    found = engine.run(prob.eqs, prob.fresh, collect=args.mode == "collecting")
    variables = _input_vars(prob)
    for u in found:
        print(format_av_unifier(engine, u, variables))
    if args.stats:
        st = engine.stats
        print(format_stats(st, {"max-fix": st.max_fix, "stuck": st.stuck,
                                "size": st.size, "grammar": len(engine.g)}))
    return EXIT_OK if found else EXIT_UNSAT


def _match_like(args, allow_env: bool) -> int:
    prob = _load(args.file, MatchProblem)
    for p, t in prob.eqs:
        if env_vars(t) or atom_vars(t) or not all(isinstance(a, Atom) for a in all_atoms(t)):
            raise InputError("match targets must be ground")
        if env_vars(p) and not allow_env:
            raise InputError("environment variables found; use envmatch")
    engine = LetrecMatch(budget=args.budget)
    try:
        found = engine.run(prob.eqs, prob.fresh, collect=args.mode == "collecting")
    except ValueError as e:
        raise InputError(str(e)) from e
    for sol in found:
        print(format_match(sol))
    if args.stats:
        print(format_stats(engine.stats))
    if args.oracle:
        _oracle_report(prob, bool(found))
    return EXIT_OK if found else EXIT_UNSAT


def cmd_match(args) -> int:
    return _match_like(args, allow_env=False)


def cmd_envmatch(args) -> int:
    return _match_like(args, allow_env=True)


def cmd_alphaeq(args) -> int:
    try:
        e1, e2 = parse(_read(args.left)), parse(_read(args.right))
    except ParseError as e:
        raise InputError(str(e)) from e
    result = alpha_eq(e1, e2)
    print("true" if result else "false")
    return EXIT_OK if result else EXIT_UNSAT


def _graph(path: str) -> Graph:
    try:
        return Graph.from_edges(parse_edges(_read(path)))
    except ParseError as e:
        raise InputError(f"{path}:{e}") from e


def cmd_gen_ham(args) -> int:
    try:
        p, t = encode_hamiltonian(_graph(args.edges))
    except ValueError as e:
        raise InputError(str(e)) from e
    print(MatchProblem([(p, t)]).show())
    return EXIT_OK


def cmd_gen_gi(args) -> int:
    try:
        p, t = encode_graph_iso(_graph(args.target_edges), _graph(args.pattern_edges))
    except ValueError as e:
        raise InputError(str(e)) from e
    print(MatchProblem([(p, t)]).show())
    return EXIT_OK


def _signature(prob) -> dict:
    sig: dict = {}

    def walk(e):
        if isinstance(e, App):
            sig[e.fn] = len(e.args)
            for a in e.args:
                walk(a)
        elif isinstance(e, Lam):
            walk(e.body)
        elif isinstance(e, Letrec):
            for b in e.bindings:
                walk(b.rhs)
            walk(e.body)

    for s, t in prob.eqs:
        walk(s)
        walk(t)
    return sig


def _oracle_solutions(prob, depth: int):
    if isinstance(prob, MatchProblem):
        return oracle.enum_matches(prob.eqs, prob.fresh)
    atoms: set = set()
    for s, t in prob.eqs:
        atoms |= all_atoms(s) | all_atoms(t)
    for a, e in prob.fresh:
        atoms |= {a} | all_atoms(e)
    pool = sorted(atoms) + [fresh_atom(atoms)]
    if len(pool) > 4 or len(oracle.problem_vars(prob)) > 2:
        raise oracle.OracleTooLarge("problem outside the oracle's bounds")
    return oracle.enum_ground_solutions(prob, pool, depth, _signature(prob))


def _oracle_report(prob, solvable: bool, depth: int = 1):
    try:
        sols = _oracle_solutions(prob, depth)
    except (oracle.OracleTooLarge, TypeError):
        print("(oracle skipped)")
        return
    agree = solvable or not sols
    if isinstance(prob, MatchProblem):
        agree = solvable == bool(sols)
    print(f"(oracle (solutions {len(sols)}) (agree {'true' if agree else 'false'}))")


def cmd_oracle(args) -> int:
    try:
        prob = parse_problem(_read(args.file))
    except ParseError as e:
        raise InputError(f"{args.file}:{e}") from e
    try:
        sols = _oracle_solutions(prob, args.depth)
    except oracle.OracleTooLarge as e:
        raise InputError(f"outside oracle bounds: {e}") from e
    for rho in sols:
        body = " ".join(f"(?{x.name} {show(e)})" for x, e in rho.items())
        print(f"(solution {body})")
    return EXIT_OK if sols else EXIT_UNSAT


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nomletrec", description="Nominal unification and matching with letrec.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, oracle_flag=True):
        p.add_argument("--mode", choices=["decision", "collecting"], default="decision")
        p.add_argument("--stats", action="store_true", help="print rule statistics")
        p.add_argument("--budget", type=int, default=10**6, help="maximum rule applications")
        if oracle_flag:
            p.add_argument("--oracle", action="store_true", help="cross-check with brute force")

    p = sub.add_parser("unify", help="unify a (problem ...) file")
    p.add_argument("file")
    common(p)
    p.add_argument("--garbage-free", action="store_true", help="turn fixpoints into freshness constraints")
    p.add_argument("--no-elim-fp", action="store_true", help="keep redundant fixpoint equations")
    p.add_argument("--jobs", type=int, default=1, help="worker processes in collecting mode")
    p.set_defaults(func=cmd_unify)

    p = sub.add_parser("unify-av", help="unify a problem with atom variables")
    p.add_argument("file")
    common(p, oracle_flag=False)
    p.add_argument("--strategy-p", default="nlogn", help="nlogn, quadratic or constant:k")
    p.set_defaults(func=cmd_unify_av)

    for name, fn in (("match", cmd_match), ("envmatch", cmd_envmatch)):
        p = sub.add_parser(name, help=f"solve a (match ...) file{' with %%E' if name == 'envmatch' else ''}")
        p.add_argument("file")
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("alphaeq", help="decide alpha-equivalence of two expression files")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_alphaeq)

    p = sub.add_parser("gen-ham", help="Hamiltonian-cycle matching problem for a 3-regular graph")
    p.add_argument("edges")
    p.set_defaults(func=cmd_gen_ham)

    p = sub.add_parser("gen-gi", help="graph-isomorphism matching problem")
    p.add_argument("target_edges")
    p.add_argument("pattern_edges")
    p.set_defaults(func=cmd_gen_gi)

    p = sub.add_parser("oracle", help="brute-force ground solutions of a small problem")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=1)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if getattr(args, "strategy_p", None):
        try:
            strategy(args.strategy_p)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET


__all__ = ["build_parser", "format_match", "format_unifier", "main"]
