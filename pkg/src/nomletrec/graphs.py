"""Small undirected graphs used by the hardness encoders and their oracles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: tuple  # pairs (u, v) with u != v, each undirected edge once

    @classmethod
    def from_edges(cls, pairs, vertices=None) -> "Graph":
        seen = set()
        edges = []
        verts = list(vertices or [])
        for u, v in pairs:
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {u!r}-{v!r}")
            seen.add(key)
            edges.append((u, v))
            for x in (u, v):
                if x not in verts:
                    verts.append(x)
        return cls(tuple(verts), tuple(edges))

    def degree(self, v) -> int:
        return sum(v in e for e in self.edges)

    def regular_degree(self) -> int | None:
        degs = {self.degree(v) for v in self.vertices}
        return degs.pop() if len(degs) == 1 else None

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def complete(n: int) -> Graph:
    return Graph.from_edges(itertools.combinations(range(n), 2), range(n))


def complete_bipartite(m: int, n: int) -> Graph:
    return Graph.from_edges(((i, m + j) for i in range(m) for j in range(n)), range(m + n))


def cycle(n: int, offset: int = 0) -> Graph:
    return Graph.from_edges(((offset + i, offset + (i + 1) % n) for i in range(n)),
                            range(offset, offset + n))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    return Graph(g.vertices + h.vertices, g.edges + h.edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(outer + spokes + inner, range(10))


def prism(n: int) -> Graph:
    """Circular ladder: two n-cycles joined by a perfect matching (3-regular)."""
    top = [(i, (i + 1) % n) for i in range(n)]
    bottom = [(n + i, n + (i + 1) % n) for i in range(n)]
    rungs = [(i, n + i) for i in range(n)]
    return Graph.from_edges(top + bottom + rungs, range(2 * n))


def mobius_kantor_like(n: int) -> Graph:
    """Moebius ladder on 2n vertices (3-regular)."""
    m = 2 * n
    ring = [(i, (i + 1) % m) for i in range(m)]
    chords = [(i, i + n) for i in range(n)]
    return Graph.from_edges(ring + chords, range(m))


def relabel(g: Graph, perm: dict) -> Graph:
    return Graph(tuple(perm[v] for v in g.vertices),
                 tuple((perm[u], perm[v]) for u, v in g.edges))
