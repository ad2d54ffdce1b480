"""Graph corpora for the hardness-encoder tests."""
import random

from nomletrec.graphs import (
    Graph, complete, complete_bipartite, cycle, disjoint_union, mobius_kantor_like, petersen, prism,
    relabel,
)


def shuffled(g: Graph, seed: int) -> Graph:
    rng = random.Random(seed)
    images = list(g.vertices)
    rng.shuffle(images)
    return relabel(g, dict(zip(g.vertices, images)))


def cube() -> Graph:
    return Graph.from_edges([(u, u ^ (1 << i)) for u in range(8) for i in range(3) if u < u ^ (1 << i)],
                            range(8))


def cubic_graphs() -> dict:
    """3-regular graphs on at most 10 vertices, Hamiltonian or not."""
    return {
        "K4": complete(4),
        "K33": complete_bipartite(3, 3),
        "prism3": prism(3),
        "cube": cube(),
        "wagner": mobius_kantor_like(4),
        "2xK4": disjoint_union(complete(4), relabel(complete(4), {i: i + 4 for i in range(4)})),
        "prism5": prism(5),
        "moebius5": mobius_kantor_like(5),
        "petersen": petersen(),
    }


def regular_pairs() -> dict:
    """Pairs of regular graphs with equal vertex and edge counts, at most 8 vertices."""
    tri2 = disjoint_union(cycle(3), cycle(3, offset=3))
    k4 = complete(4)
    k4k4 = disjoint_union(k4, relabel(k4, {i: i + 4 for i in range(4)}))
    return {
        "C6 vs 2xC3": (cycle(6), tri2),
        "C3 vs C3": (cycle(3), cycle(3)),
        "C5 vs shuffled C5": (cycle(5), shuffled(cycle(5), 3)),
        "C8 vs 2xC4": (cycle(8), disjoint_union(cycle(4), cycle(4, offset=4))),
        "C7 vs C4+C3": (cycle(7), disjoint_union(cycle(4), cycle(3, offset=4))),
        "K4 vs shuffled K4": (k4, shuffled(k4, 1)),
        "K33 vs prism3": (complete_bipartite(3, 3), prism(3)),
        "prism3 vs shuffled prism3": (prism(3), shuffled(prism(3), 7)),
        "cube vs 2xK4": (cube(), k4k4),
        "cube vs shuffled cube": (cube(), shuffled(cube(), 5)),
        "wagner vs cube": (mobius_kantor_like(4), cube()),
    }
