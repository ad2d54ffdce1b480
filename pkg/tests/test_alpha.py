import pytest
from hypothesis import given, settings, strategies as st

from nomletrec import oracle
from nomletrec.alpha import alpha_eq, garbage_split, is_garbage_free
from nomletrec.sexpr import parse, show
from nomletrec.terms import App, Atom, Lam, Letrec, Perm, apply_perm, free_atoms

from strategies import ground_terms, perms

a, b = Atom("a"), Atom("b")


def shuffle_envs(e, rnd):
    """Same term with every letrec environment reordered."""
    if isinstance(e, Lam):
        return Lam(e.binder, shuffle_envs(e.body, rnd))
    if isinstance(e, App):
        return App(e.fn, tuple(shuffle_envs(x, rnd) for x in e.args))
    if isinstance(e, Letrec):
        bs = [type(x)(x.binder, shuffle_envs(x.rhs, rnd)) for x in e.bindings]
        rnd.shuffle(bs)
        return Letrec(tuple(bs), shuffle_envs(e.body, rnd))
    return e


class TestExamples:
    def test_environment_order_irrelevant(self):
        assert alpha_eq(parse("(letrec ((a f) (b g)) (h a b))"), parse("(letrec ((b g) (a f)) (h a b))"))

    def test_nontrivial_fixpoint(self):
        t = parse("(letrec ((c a) (d b)) True)")
        assert alpha_eq(apply_perm(Perm.swap(a, b), t), t)

    @pytest.mark.parametrize("left, right, expected", [
        ("(lam a a)", "(lam b b)", True),
        ("(lam a b)", "(lam b a)", False),
        ("(lam a (lam b (f a b)))", "(lam b (lam a (f b a)))", True),
        ("(letrec ((a b)) a)", "(letrec ((c b)) c)", True),
        ("(letrec ((a b)) a)", "(letrec ((b b)) b)", False),
        ("(letrec ((a (g b)) (b (g a))) a)", "(letrec ((x (g y)) (y (g x))) y)", True),
        ("(letrec ((a c) (b c)) (f a b))", "(letrec ((a c) (b d)) (f a b))", False),
    ])
    def test_table(self, left, right, expected):
        e1, e2 = parse(left), parse(right)
        assert alpha_eq(e1, e2) is expected
        assert oracle.alpha_eq_naive(e1, e2) is expected

    def test_reflexive(self):
        e = parse("(letrec ((a (lam b (f a b))) (c a)) (g c))")
        assert alpha_eq(e, e)


class TestAgainstNaive:
    @settings(max_examples=300, deadline=None)
    @given(ground_terms(max_leaves=10), perms(), st.randoms(use_true_random=False))
    def test_permuted_copy(self, e, p, rnd):
        other = shuffle_envs(apply_perm(p, e), rnd)
        assert alpha_eq(e, other) == oracle.alpha_eq_naive(e, other)

    @settings(max_examples=300, deadline=None)
    @given(ground_terms(max_leaves=8), ground_terms(max_leaves=8))
    def test_random_pairs(self, e1, e2):
        assert alpha_eq(e1, e2) == oracle.alpha_eq_naive(e1, e2)

    @settings(max_examples=200, deadline=None)
    @given(ground_terms(max_leaves=10), st.randoms(use_true_random=False))
    def test_equivalence_is_symmetric(self, e, rnd):
        other = shuffle_envs(e, rnd)
        assert alpha_eq(e, other) and alpha_eq(other, e)


class TestGarbage:
    def test_unused_binding(self):
        garbage, kept = garbage_split(parse("(letrec ((a b) (b c)) b)").bindings, parse("b"))
        assert [show(g.binder) for g in garbage] == ["a"]
        assert [show(k.binder) for k in kept] == ["b"]

    def test_two_garbage_bindings(self):
        e = parse("(letrec ((a d) (b 1) (c d)) (f b))")
        garbage, _ = garbage_split(e.bindings, e.body)
        assert sorted(show(g.binder) for g in garbage) == ["a", "c"]

    def test_lambda_is_garbage_free(self):
        assert is_garbage_free(parse("(lam a a)"))
        assert not is_garbage_free(parse("(lam x (letrec ((a b)) x))"))

    @settings(max_examples=200, deadline=None)
    @given(ground_terms(max_leaves=10))
    def test_removing_garbage_preserves_meaning(self, e):
        if not isinstance(e, Letrec):
            return
        _, kept = garbage_split(e.bindings, e.body)
        smaller = Letrec(kept, e.body) if kept else e.body
        assert free_atoms(smaller) <= free_atoms(e)
