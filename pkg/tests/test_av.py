import pytest
from hypothesis import given, settings, strategies as st

from nomletrec.av import LetrecUnifyAV, binder_distinctness, guess_all, letrec_unify_av, strategy
from nomletrec.sexpr import parse, parse_problem
from nomletrec.terms import AtomVar

from corpus import av_blowup_problem, check_av_unifier, random_av_problem

SAME = ("(problem (eq (app (letrec ((@A a) (@B a)) @B) @A)"
        " (app (letrec ((@A a) (@B a)) @B) @B)))")
RENAMED = ("(problem (eq (app (letrec ((@A a) (@C a)) @C) @A)"
           " (app (letrec ((@A a) (@D a)) @D) @B)))")


def run(src, **kw):
    prob = parse_problem(src)
    eng = LetrecUnifyAV(**kw)
    return prob, eng, eng.run(prob.eqs, prob.fresh, collect=True)


class TestPaperPair:
    def test_binders_forced_equal(self):
        prob, eng, us = run(SAME)
        assert us == []
        assert not guess_all(prob.eqs, prob.fresh)

    def test_renamed_binders_solvable(self):
        prob, eng, us = run(RENAMED)
        assert us
        assert guess_all(prob.eqs, prob.fresh)
        assert all(check_av_unifier(eng, prob, u) for u in us)

    def test_distinctness_pairs(self):
        pairs = binder_distinctness(parse("(letrec ((@A a) (@C a) (b c)) @C)"))
        assert [(str(x), str(y)) for x, y in pairs] == [("@A", "@C"), ("@A", "b"), ("@C", "b")]


class TestSmall:
    def test_reflexive(self):
        _, _, us = run("(problem (eq ?X ?X))")
        assert len(us) == 1 and us[0].theta == [] and us[0].fix == []

    @pytest.mark.parametrize("src", [
        "(problem (eq ?X (perm ((@A @B)) ?X)))",
        "(problem (eq (lam @A ?X) (lam @B (f @B))))",
        "(problem (eq (lam @A (f @A ?X)) (lam b (f b a))))",
        "(problem (eq (lam a ?X) (lam b ?Y)) (eq ?Y (f b (g ?Z))) (eq (lam @A (f @A ?W)) (lam c (f c a))))",
    ])
    def test_sound(self, src):
        prob, eng, us = run(src)
        assert us
        assert all(check_av_unifier(eng, prob, u) for u in us)

    def test_atom_clash(self):
        _, _, us = run("(problem (eq (f @A @A) (f a b)))")
        assert us == []

    def test_strategies(self):
        assert strategy("nlogn")(8) == pytest.approx(8 * 3.321928, rel=1e-5)
        assert strategy("quadratic")(5) == 25
        assert strategy("constant:3")(10) == 3
        with pytest.raises(ValueError):
            strategy("cubic")


class TestElimAB:
    def test_fires_and_bounds_fixpoints(self):
        prob = av_blowup_problem(10)
        eng = LetrecUnifyAV()
        assert eng.run(prob.eqs, prob.fresh)
        assert eng.stats.rules["ElimAB"] >= 1
        assert eng.stats.after_elimab
        assert max(eng.stats.after_elimab) <= eng.stats.bound
        assert eng.stats.stuck == 0

    def test_small_family_needs_no_guess(self):
        prob = av_blowup_problem(5)
        eng = LetrecUnifyAV()
        (u,) = eng.run(prob.eqs, prob.fresh)
        assert "ElimAB" not in eng.stats.rules
        assert check_av_unifier(eng, prob, u)

    def test_tiny_threshold(self):
        prob = av_blowup_problem(5)
        eng = LetrecUnifyAV(p="constant:2")
        us = eng.run(prob.eqs, prob.fresh, collect=True)
        assert eng.stats.rules["ElimAB"] >= 1
        assert us and all(check_av_unifier(eng, prob, u) for u in us)


class TestRandom:
    @settings(max_examples=120, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_agrees_with_guessing(self, rnd):
        prob = random_av_problem(rnd)
        eng = LetrecUnifyAV()
        us = eng.run(prob.eqs, prob.fresh, collect=True)
        assert bool(us) == guess_all(prob.eqs, prob.fresh)
        assert all(check_av_unifier(eng, prob, u) for u in us)
        assert eng.stats.stuck == 0
