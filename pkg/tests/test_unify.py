import math

import pytest
from hypothesis import given, settings, strategies as st

from nomletrec import oracle
from nomletrec.alpha import alpha_eq
from nomletrec.sexpr import parse, parse_problem, show
from nomletrec.terms import Atom, ExprVar, Perm, Susp, compose_chain, substitute
from nomletrec.unify import (
    Done, Failed, LetrecUnify, fix_bound, flatten, ground_instance, letrec_branches, letrec_unify,
)

from corpus import blowup_problem, check_unifier, covers, problem_size, random_unify_problem

a, b, c, d = (Atom(n) for n in "abcd")
X = ExprVar("X")

EX44 = "(problem (eq (letrec ((a (pair a b)) (b (pair a b))) b) (letrec ((b (pair b c)) (c (pair b c))) c)))"


def unflatten(eqs, original_vars):
    """Substitute the defining equations of introduced variables back in."""
    defs = {t.var: s for s, t in eqs if isinstance(t, Susp) and t.var not in original_vars}
    defs.update({s.var: t for s, t in eqs if isinstance(s, Susp) and s.var not in original_vars})
    out = []
    for s, t in eqs:
        if (isinstance(s, Susp) and s.var in defs) or (isinstance(t, Susp) and t.var in defs):
            continue
        for _ in range(len(defs) + 1):
            s, t = substitute(s, defs), substitute(t, defs)
        out.append((s, t))
    return out


class TestFlatten:
    @pytest.mark.parametrize("src, expected", [
        ("(eq (f (g a)) ?X)", [("(f ?_1)", "?X"), ("?_1", "(g a)")]),
        ("(eq a ?X)", [("a", "?X")]),
        ("(eq (lam a (g a)) ?X)", [("(lam a ?_1)", "?X"), ("?_1", "(g a)")]),
    ])
    def test_examples(self, src, expected):
        eqs = parse_problem(f"(problem {src})").eqs
        flat = flatten(eqs)
        assert [(show(s), show(t)) for s, t in flat] == expected
        assert unflatten(flat, {X}) == eqs

    def test_depth_at_most_one(self):
        from nomletrec.terms import depth
        eqs = parse_problem("(problem (eq (letrec ((a (f (g a) (lam b (g b))))) (g (g a))) ?X))").eqs
        assert all(depth(s) <= 1 and depth(t) <= 1 for s, t in flatten(eqs))


class TestSteps:
    def test_letrec_identity_branch(self):
        s, t = parse_problem(EX44).eqs[0]
        rho, pi, eqs, _ = letrec_branches(s, t)[0]
        assert rho == (0, 1)
        assert dict(pi.items()) == {b: a, c: b, a: c}
        assert all(alpha_eq(x, y) for x, y in eqs)

    def test_trivial_equation_dropped(self):
        eng = LetrecUnify()
        st = eng.initial(parse_problem("(problem (eq (f a) (f a)))").eqs)
        out = eng.step(st)
        assert not out.state.pending and eng.stats.rules["1"] == 1

    def test_occurs_cycle(self):
        eng = LetrecUnify()
        assert eng.run(parse_problem("(problem (eq ?X (f ?Y)) (eq ?Y (g ?X)))").eqs) == []
        assert eng.stats.failures["Cycle"] == 1

    def test_clash(self):
        eng = LetrecUnify()
        assert eng.run(parse_problem("(problem (eq (f a ?X) (g a)))").eqs) == []
        assert eng.stats.failures["Clash"] == 1


class TestSolutions:
    def test_renamed_letrecs(self):
        us = letrec_unify(parse_problem(EX44).eqs, mode="collecting")
        assert len(us) == 1 and us[0].fix == []

    def test_reflexive_variable(self):
        (u,) = letrec_unify(parse_problem("(problem (eq ?X ?X))").eqs)
        assert u.theta == [] and u.nabla == frozenset() and u.fix == []

    def test_fixpoint_kept(self):
        prob = parse_problem("(problem (eq ?X (perm ((a b)) ?X)))")
        (u,) = letrec_unify(prob.eqs)
        assert u.fix == [(X, Perm.swap(a, b))]
        witness = parse("(letrec ((c a) (d b)) True)")
        assert oracle.is_ground_solution(prob, {X: witness})
        assert covers(prob, u, {X: witness})

    def test_lambda_renaming(self):
        prob = parse_problem("(problem (eq (lam a ?X) (lam b ?Y)) (eq ?Y (f b c)))")
        (u,) = letrec_unify(prob.eqs)
        assert show(compose_chain(u.theta)[X]) == "(f a c)"
        assert check_unifier(prob, u)

    def test_freshness_failure(self):
        prob = parse_problem("(problem (eq (lam a ?X) (lam b a)))")
        assert letrec_unify(prob.eqs) == []


class TestElimFP:
    def test_duplicate_dropped(self):
        eng = LetrecUnify()
        (u,) = eng.run(parse_problem("(problem (eq ?X (perm ((a b)) ?X)) (eq ?X (perm ((a b)) ?X)))").eqs)
        assert len(u.fix) == 1

    def test_member_of_group_dropped(self):
        src = "(problem (eq ?X (perm ((a b)) ?X)) (eq ?X (perm ((b c)) ?X)) (eq ?X (perm ((a c)) ?X)))"
        (u,) = letrec_unify(parse_problem(src).eqs)
        assert len(u.fix) == 2
        (v,) = letrec_unify(parse_problem(src).eqs, elim_fp=False)
        assert len(v.fix) == 3

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_exponential_without_elimination(self, n):
        prob = blowup_problem(n)
        (u,) = letrec_unify(prob.eqs, elim_fp=False)
        assert sum(1 for x, _ in u.fix if x.name == "X1") == 2 ** (n - 1)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_bounded_with_elimination(self, n):
        prob = blowup_problem(n)
        eng = LetrecUnify()
        eng.run(prob.eqs)
        assert eng.stats.max_fix <= fix_bound(problem_size(prob))


class TestGarbageFree:
    def test_fixpoints_become_freshness(self):
        (u,) = letrec_unify(parse_problem("(problem (eq ?X (perm ((a b)) ?X)))").eqs, garbage_free=True)
        assert u.fix == [] and u.nabla == {(a, X), (b, X)}

    def test_identity_fixpoint(self):
        (u,) = letrec_unify([(Susp(Perm(), X), Susp(Perm(), X))], garbage_free=True)
        assert u.nabla == frozenset()

    def test_lambda_same_variable(self):
        prob = parse_problem("(problem (eq (lam c ?X) (lam d ?X)))")
        (u,) = letrec_unify(prob.eqs, garbage_free=True)
        assert u.fix == [] and u.nabla == {(c, X), (d, X)}
        (v,) = letrec_unify(prob.eqs)
        assert v.fix == [(X, Perm.swap(c, d))]
        # the garbage-free answer is exact on garbage-free instances
        for t in oracle.ground_terms([c, d, Atom("e")], 1, {"f": 2, "c": 0}):
            gf = c not in oracle.naive_fa(t) and d not in oracle.naive_fa(t)
            assert oracle.is_ground_solution(prob, {X: t}) == gf


class TestRandom:
    @settings(max_examples=150, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_soundness(self, rnd):
        prob = random_unify_problem(rnd)
        eng = LetrecUnify()
        for u in eng.run(prob.eqs, prob.fresh, collect=True):
            assert check_unifier(prob, u)
        s = problem_size(prob)
        assert eng.stats.applications <= 10 * s ** 3 * math.log2(s)

    @settings(max_examples=150, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_decision_agrees_with_collecting(self, rnd):
        prob = random_unify_problem(rnd)
        assert bool(letrec_unify(prob.eqs, prob.fresh)) == bool(
            letrec_unify(prob.eqs, prob.fresh, mode="collecting"))
