import pytest
from hypothesis import given, settings

from nomletrec import oracle
from nomletrec.sexpr import ParseError, parse, parse_edges, parse_problem, show
from nomletrec.terms import (
    ID, Atom, Perm, apply_perm, bound_atoms, depth, fresh_atom, fresh_atoms, free_atoms, size,
)

from strategies import ground_terms, perms

a, b, c, x, y = (Atom(n) for n in "abcxy")


class TestPerm:
    def test_rightmost_swap_acts_first(self):
        p = Perm.from_swaps([(a, b), (b, c)])
        assert (p(a), p(b), p(c)) == (b, c, a)

    def test_swap_is_involution(self):
        s = Perm.swap(a, b)
        assert s.compose(s).is_identity()

    @given(perms(), perms())
    def test_compose_matches_pointwise(self, p, q):
        for at in (a, b, c, Atom("d"), Atom("e")):
            assert p.compose(q)(at) == p(q(at))

    @given(perms())
    def test_to_swaps_round_trip(self, p):
        assert Perm.from_swaps(p.to_swaps()) == p


class TestApplyPerm:
    def test_renames_binders_too(self):
        e = parse("(lam x (lam x a))")
        assert show(apply_perm(Perm.swap(x, y), e)) == "(lam y (lam y a))"

    def test_identity(self):
        e = parse("(letrec ((c a) (d b)) True)")
        assert apply_perm(ID, e) is e

    def test_letrec_leafwise(self):
        e = parse("(letrec ((c a) (d b)) True)")
        got = apply_perm(Perm.swap(a, b), e)
        assert show(got) == "(letrec ((c b) (d a)) True)"
        assert got == oracle.naive_perm({a: b, b: a}, e)

    @given(ground_terms(), perms())
    def test_agrees_with_naive(self, e, p):
        assert apply_perm(p, e) == oracle.naive_perm(dict(p.items()), e)


class TestAtomSets:
    @pytest.mark.parametrize("src, fa", [
        ("(letrec ((c a) (d b)) True)", {"a", "b"}),
        ("(lam a a)", set()),
        ("(letrec ((a b) (b c)) b)", {"c"}),
    ])
    def test_free_atoms(self, src, fa):
        assert {t.name for t in free_atoms(parse(src))} == fa

    def test_bound_atoms(self):
        assert bound_atoms(parse("(letrec ((a b) (b c)) (lam d d))")) == {a, b, Atom("d")}

    @given(ground_terms())
    def test_fa_matches_naive(self, e):
        assert free_atoms(e) == oracle.naive_fa(e)

    def test_fresh_atom_avoids(self):
        got = fresh_atom({a, b})
        assert got not in {a, b}
        assert len(set(fresh_atoms({a}, 3)) | {a}) == 4


class TestMeasures:
    def test_size_and_depth(self):
        e = parse("(f a (g b))")
        assert size(e) == 4
        assert depth(e) == 2  # leaves are depth 0, flat terms depth 1


class TestSexpr:
    @given(ground_terms())
    def test_round_trip(self, e):
        assert parse(show(e)) == e

    @pytest.mark.parametrize("src", [
        "(letrec ((a ?X) %E) a)",
        "(lam @A (perm ((@A b)) @B))",
        "(perm ((a b)) ?X)",
        "(f (c) 0)",
    ])
    def test_text_round_trip(self, src):
        assert show(parse(src)) == src

    def test_error_position(self):
        with pytest.raises(ParseError) as ei:
            parse_problem("(problem\n  (eq ?X (f a)")
        assert (ei.value.line, ei.value.col) == (2, 3)

    def test_edges_skip_comments(self):
        assert parse_edges("# c\n1 2\n\n2 3  # tail\n") == [("1", "2"), ("2", "3")]
