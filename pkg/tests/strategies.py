"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from nomletrec.terms import App, Atom, Binding, Lam, Letrec, Perm

ATOMS = [Atom(n) for n in "abcde"]
atoms = st.sampled_from(ATOMS)


def ground_terms(max_leaves: int = 12, pool=ATOMS, letrec_width: int = 3):
    """Ground expressions; letrec environments always have distinct binders."""
    pool_st = st.sampled_from(list(pool))
    leaves = st.one_of(pool_st, st.just(App("c")))

    def extend(children):
        lam = st.builds(Lam, pool_st, children)
        f = st.builds(lambda x, y: App("f", (x, y)), children, children)
        g = st.builds(lambda x: App("g", (x,)), children)

        @st.composite
        def lr(draw):
            k = draw(st.integers(1, letrec_width))
            names = draw(st.permutations(list(pool)))[:k]
            binds = tuple(Binding(n, draw(children)) for n in names)
            return Letrec(binds, draw(children))

        return st.one_of(lam, f, g, lr())

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def perms(draw, pool=ATOMS, max_swaps: int = 4):
    swaps = draw(st.lists(st.tuples(st.sampled_from(pool), st.sampled_from(pool)), max_size=max_swaps))
    return Perm.from_swaps([(x, y) for x, y in swaps if x != y])
