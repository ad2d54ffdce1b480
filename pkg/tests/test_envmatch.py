import pytest
from hypothesis import given, settings, strategies as st

from nomletrec import oracle
from nomletrec.alpha import alpha_eq
from nomletrec.envmatch import env_image, env_match, instantiate
from nomletrec.sexpr import parse, parse_problem, show
from nomletrec.terms import Binding, EnvVar, ExprVar, Letrec

from corpus import ground_term

E, E1, E2 = EnvVar("E"), EnvVar("E1"), EnvVar("E2")
X = ExprVar("X")
CAP = parse("(img)")


def solve(src, mode="collecting"):
    prob = parse_problem(src)
    return prob, env_match(prob.eqs, prob.fresh, mode=mode)


def images(sol):
    return {e.name: sorted(show(Letrec((b,), parse("0"))) for b in bs) for e, bs in sol.envs.items()}


class TestExamples:
    def test_merge_nested_environments(self):
        prob, sols = solve("(match (le (letrec (%E1) (letrec (%E2) ?X))"
                           " (letrec ((a 0) (b 1)) (letrec ((c (t a b c))) c))))")
        assert len(sols) == 1
        sol = sols[0]
        assert show(sol.sigma[X]) == "c"
        assert {(show(b.binder), show(b.rhs)) for b in sol.envs[E1]} == {("a", "0"), ("b", "1")}
        assert {(show(b.binder), show(b.rhs)) for b in sol.envs[E2]} == {("c", "(t a b c)")}

    def test_single_binding(self):
        prob, (sol,) = solve("(match (le (letrec (%E) ?X) (letrec ((a 0)) a)))")
        assert show(sol.sigma[X]) == "a"
        assert [(show(b.binder), show(b.rhs)) for b in sol.envs[E]] == [("a", "0")]
        assert alpha_eq(instantiate(prob.eqs[0][0], sol), prob.eqs[0][1])

    def test_empty_image(self):
        prob, (sol,) = solve("(match (le (letrec ((a ?X) %E) a) (letrec ((b 0)) b)))")
        assert show(sol.sigma[X]) == "0"
        assert sol.envs[E] == [] or not sol.envs[E]
        assert env_image(sol, E) == {}

    def test_too_few_target_bindings(self):
        _, sols = solve("(match (le (letrec ((a ?X) (b ?Y) %E) a) (letrec ((c 0)) c)))")
        assert sols == []

    def test_slots_of_one_environment_are_not_permuted(self):
        _, sols = solve("(match (le (letrec (%E) (h)) (letrec ((a 0) (b 1) (c 2)) (h))))")
        assert len(sols) == 1
        assert sorted(show(b.rhs) for b in sols[0].envs[E]) == ["0", "1", "2"]

    def test_pattern_atom_captured_by_image(self):
        prob, sols = solve("(match (le (letrec (%E) (lam a c)) (letrec ((b (c)) (c c)) (lam a c))))")
        assert len(sols) == 1
        assert {(show(b.binder), show(b.rhs)) for b in sols[0].envs[E]} == {("b", "(c)"), ("c", "c")}

    def test_target_env_vars_rejected(self):
        with pytest.raises(ValueError):
            env_match([(parse("?X"), parse("(letrec (%E) a)"))])

    def test_two_env_vars_split(self):
        prob, sols = solve("(match (le (letrec (%E1 %E2) (f ?X)) (letrec ((a 0) (b 1)) (f a))))")
        splits = {(len(s.envs[E1]), len(s.envs[E2])) for s in sols}
        assert splits == {(0, 2), (1, 1), (2, 0)}
        for s in sols:
            assert alpha_eq(instantiate(prob.eqs[0][0], s), prob.eqs[0][1])


class TestAgainstOracle:
    @settings(max_examples=80, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(0, 2))
    def test_same_images(self, rnd, explicit):
        body = ground_term(rnd, 4)
        target = Letrec(tuple(Binding(n, ground_term(rnd, 3)) for n in rnd.sample(
            [parse(x) for x in "abcd"], rnd.randint(1, 3))), body)
        pattern_binds = tuple(Binding(b.binder, parse("?X") if i == 0 else b.rhs)
                              for i, b in enumerate(target.bindings[:explicit]))
        pattern = Letrec(pattern_binds + (E,), target.body)
        brute = oracle.enum_env_matches(pattern, target)
        sols = env_match([(pattern, target)], mode="collecting")
        assert bool(brute) == bool(sols)
        for s in sols:
            assert alpha_eq(instantiate(pattern, s), target)
        # solutions are compared through their closed images up to alpha; the body is a
        # constant so no binder of the image can capture it
        theirs = _classes(Letrec(image, CAP) for image, _ in brute)
        mine = _classes(Letrec(tuple(s.envs.get(E, ())), CAP) for s in sols)
        assert len(theirs) == len(mine)
        assert all(any(alpha_eq(x, y) for y in mine) for x in theirs)


def _classes(terms):
    out = []
    for t in terms:
        if not any(alpha_eq(t, o) for o in out):
            out.append(t)
    return out
