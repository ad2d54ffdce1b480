import pytest

from nomletrec import oracle
from nomletrec.graphs import complete, cycle, petersen
from nomletrec.permgroup import PermGroup
from nomletrec.sexpr import parse, parse_problem
from nomletrec.terms import Atom, ExprVar, Letrec, Perm

from graphs_corpus import cubic_graphs, regular_pairs, shuffled

a, b, c = Atom("a"), Atom("b"), Atom("c")
X = ExprVar("X")
SIG = {"f": 2, "g": 1, "c": 0}
K = parse("(k)")


def solutions(src, pool="abc", depth=1, sig=SIG):
    prob = parse_problem(src)
    return oracle.enum_ground_solutions(prob, [Atom(x) for x in pool], depth, sig)


class TestGroundSolutions:
    def test_variable_equals_atom(self):
        assert solutions("(problem (eq ?X a))") == [{X: a}]

    def test_swap_fixpoint(self):
        sols = solutions("(problem (eq ?X (perm ((a b)) ?X)))", depth=2)
        images = [rho[X] for rho in sols]
        assert c in images
        assert a not in images
        assert b not in images

    def test_distinct_atoms_never_equal(self):
        assert solutions("(problem (eq a b))") == []

    def test_freshness_filters(self):
        sols = solutions("(problem (eq ?X ?X) (fresh a ?X))", depth=0)
        assert {rho[X] for rho in sols} == {b, c, parse("(c)")}

    def test_candidates_grow_with_depth(self):
        shallow = oracle.ground_terms([a], 0, SIG)
        deep = oracle.ground_terms([a], 1, SIG)
        assert set(shallow) < set(deep)
        assert parse("(g a)") in deep and parse("(lam a a)") in deep

    def test_deterministic(self):
        src = "(problem (eq (f ?X ?Y) (f ?Y a)))"
        assert solutions(src) == solutions(src)


class TestAlphaNaive:
    def test_reflexive(self):
        e = parse("(letrec ((a (lam b (f a b))) (c a)) (g c))")
        assert oracle.alpha_eq_naive(e, e)

    def test_garbage_environment_absorbs_swap(self):
        e = parse("(letrec ((c a) (d b)) (True))")
        assert oracle.alpha_eq_naive(oracle.naive_perm({a: b, b: a}, e), e)

    def test_different_free_atoms(self):
        assert not oracle.alpha_eq_naive(parse("(lam a a)"), parse("(lam a b)"))

    def test_too_many_bindings(self):
        big = parse("(letrec (" + " ".join(f"(x{i} 0)" for i in range(6)) + ") 0)")
        with pytest.raises(oracle.OracleTooLarge):
            oracle.alpha_eq_naive(big, big)


class TestMatches:
    def test_lambda_pattern(self):
        prob = parse_problem("(match (le (app (lam c ?X1) ?X2) (app (lam a a) (lam b b))))")
        sols = oracle.enum_matches(prob.eqs)
        assert sols
        for s in sols:
            assert s[ExprVar("X1")] == c
            assert oracle.alpha_eq_naive(s[ExprVar("X2")], parse("(lam b b)"))

    def test_environment_image_captures_pattern_atom(self):
        pattern = parse("(letrec (%E) (lam a c))")
        target = parse("(letrec ((b (c)) (c c)) (lam a c))")
        images = {image for image, _ in oracle.enum_env_matches(pattern, target)}
        # b may be renamed freely, c must stay to capture the body's c
        assert target.bindings in images
        for image in images:
            assert image[1].binder == c
            assert oracle.alpha_eq_naive(Letrec(image, K), Letrec(target.bindings, K))


class TestGraphs:
    def test_complete_graph_has_cycle(self):
        assert oracle.ham_cycle(complete(4))

    def test_petersen_has_none(self):
        assert not oracle.ham_cycle(petersen())

    def test_cycle_isomorphic_to_itself(self):
        assert oracle.graph_iso(cycle(6), shuffled(cycle(6), 3))

    def test_size_guard(self):
        with pytest.raises(oracle.OracleTooLarge):
            oracle.ham_cycle(cycle(13))

    @pytest.mark.parametrize("name", sorted(cubic_graphs()))
    def test_relabelling_is_invisible(self, name):
        g = cubic_graphs()[name]
        assert oracle.ham_cycle(g) == oracle.ham_cycle(shuffled(g, 11))

    def test_pairs_are_symmetric(self):
        for g1, g2 in regular_pairs().values():
            assert oracle.graph_iso(g1, g2) == oracle.graph_iso(g2, g1)


class TestClosure:
    def test_symmetric_group_on_three(self):
        gens = [Perm.swap(a, b), Perm.swap(b, c)]
        assert len(oracle.naive_closure(gens)) == 6

    def test_agrees_with_stabilizer_chain(self):
        gens = [Perm({a: b, b: c, c: a})]
        elems = oracle.naive_closure(gens)
        group = PermGroup(gens)
        assert group.order() == len(elems)
        assert all(group.contains(p) for p in elems)
