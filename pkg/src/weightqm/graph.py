"""Graphs, paths, fragments and graph automorphism actions.

Paths are tuples of vertices. A fragment of size ``l`` of a path with ``n``
edges is a strictly increasing tuple of ``l`` edge positions in ``0..n-1``;
edge ``i`` is the oriented edge ``(p[i], p[i+1])``. Oriented edges are
``(head, tail)`` tuples, head first.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import words


class GraphError(ValueError):
    pass


class NotMedianError(GraphError):
    def __init__(self, triple, candidates):
        self.triple = triple
        self.candidates = candidates
        what = "no median" if not candidates else f"{len(candidates)} medians"
        super().__init__(f"{what} for triple {triple!r}")


# paths and fragments -------------------------------------------------------


def reverse_edge(e):
    return (e[1], e[0])


def reverse_edges(edges):
    """a = (e1..el)  ->  a-bar = (el-bar..e1-bar)."""
    return tuple((e[1], e[0]) for e in reversed(edges))


@dataclass(frozen=True)
class Fragment:
    path: tuple
    indices: tuple

    def __post_init__(self):
        n = len(self.path) - 1
        idx = self.indices
        if not idx or any(b <= a for a, b in zip(idx, idx[1:])) or idx[0] < 0 or idx[-1] > n - 1:
            raise GraphError(f"invalid fragment indices {idx} for a path of length {n}")

    @property
    def edges(self) -> tuple:
        p = self.path
        return tuple((p[i], p[i + 1]) for i in self.indices)

    @property
    def head(self):
        return self.path[self.indices[0]]

    @property
    def tail(self):
        return self.path[self.indices[-1] + 1]

    def reversed(self) -> "Fragment":
        n = len(self.path) - 1
        return Fragment(self.path[::-1], tuple(n - 1 - i for i in reversed(self.indices)))


def fragment_indices(n_edges: int, ell: int):
    if ell < 1:
        raise ValueError("fragment size must be positive")
    return itertools.combinations(range(n_edges), ell)


def fragments(p: Sequence, ell: int) -> list:
    """All ell-fragments of p, lexicographic in their index tuples."""
    p = tuple(p)
    return [Fragment(p, idx) for idx in fragment_indices(len(p) - 1, ell)]


def fragment_edges(p: Sequence, idx: Sequence) -> tuple:
    return tuple((p[i], p[i + 1]) for i in idx)


def contained_in(m, a: Fragment) -> bool:
    """Whether vertex m lies strictly between the head and tail of a on its path."""
    try:
        pos = a.path.index(m)
    except ValueError:
        raise GraphError(f"vertex {m!r} is not on the path") from None
    return a.indices[0] < pos <= a.indices[-1]


def is_path(p: Sequence, adjacent: Callable) -> bool:
    if len(set(p)) != len(p):
        return False
    return all(adjacent(u, v) for u, v in zip(p, p[1:]))


def subpaths(p: Sequence):
    """Contiguous sub-paths, including single vertices."""
    p = tuple(p)
    for i in range(len(p)):
        for j in range(i, len(p)):
            yield p[i : j + 1]


# finite graphs --------------------------------------------------------------


class Graph:
    """Finite undirected simplicial graph with a fixed vertex order."""

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable, name: str = "graph"):
        self.vertices = tuple(vertices)
        self.name = name
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise GraphError("duplicate vertices")
        adj = {v: set() for v in self.vertices}
        for u, v in edges:
            if u not in adj or v not in adj:
                raise GraphError(f"edge {(u, v)!r} has an unknown endpoint")
            if u == v:
                raise GraphError(f"loop at {u!r}")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {v: tuple(sorted(ns, key=self.index.__getitem__)) for v, ns in adj.items()}

    def __repr__(self):
        return f"Graph({self.name!r}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    def neighbors(self, v):
        return self._adj[v]

    def has_edge(self, u, v) -> bool:
        return v in self._adj.get(u, ())

    @cached_property
    def edges(self) -> tuple:
        ix = self.index
        return tuple((u, v) for u in self.vertices for v in self._adj[u] if ix[u] < ix[v])

    @cached_property
    def oriented_edges(self) -> tuple:
        return tuple(e for u, v in self.edges for e in ((u, v), (v, u)))

    def bfs_distances(self, source) -> dict:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        n = len(self.vertices)
        D = np.full((n, n), -1, dtype=np.int64)
        for i, v in enumerate(self.vertices):
            for w, d in self.bfs_distances(v).items():
                D[i, self.index[w]] = d
        return D

    def distance(self, u, v) -> int:
        d = int(self.distance_matrix[self.index[u], self.index[v]])
        if d < 0:
            raise GraphError(f"{u!r} and {v!r} are not connected")
        return d

    def is_connected(self) -> bool:
        return not self.vertices or len(self.bfs_distances(self.vertices[0])) == len(self.vertices)

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    @classmethod
    def from_json(cls, data) -> tuple:
        """Parse ``{"vertices", "edges", "generators"}``; returns (graph, action)."""
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        vertices = [str(v) for v in data["vertices"]]
        g = cls(vertices, [(str(u), str(v)) for u, v in data["edges"]], name=data.get("name", "json"))
        perms = {}
        for gen in data.get("generators", []):
            perms[gen["name"]] = {str(k): str(v) for k, v in gen["permutation"].items()}
        return g, GraphAction.from_permutations(g, perms)


def all_geodesics(G: Graph, x, y) -> list:
    """Every shortest path from x to y, ordered lexicographically by vertex index."""
    dy = G.bfs_distances(y)
    if x not in dy:
        raise GraphError(f"{x!r} and {y!r} are not connected")
    out = []

    def extend(prefix):
        u = prefix[-1]
        if u == y:
            out.append(tuple(prefix))
            return
        for w in G.neighbors(u):
            if dy.get(w) == dy[u] - 1:
                prefix.append(w)
                extend(prefix)
                prefix.pop()

    extend([x])
    return out


def median_candidates(G: Graph, x, y, z) -> list:
    D = G.distance_matrix
    i, j, k = G.index[x], G.index[y], G.index[z]
    ok = (
        (D[i] + D[:, j] == D[i, j])
        & (D[i] + D[:, k] == D[i, k])
        & (D[j] + D[:, k] == D[j, k])
    )
    return [G.vertices[m] for m in np.flatnonzero(ok)]


def median(G: Graph, x, y, z):
    cands = median_candidates(G, x, y, z)
    if len(cands) != 1:
        raise NotMedianError((x, y, z), cands)
    return cands[0]


def is_median_graph(G: Graph) -> bool:
    if not G.is_connected():
        return False
    D = G.distance_matrix
    # between[i, k, m]: m lies on a geodesic from i to k
    between = (D[:, None, :] + D[None, :, :]) == D[:, :, None]
    for i in range(len(G.vertices)):
        for j in range(i, len(G.vertices)):
            counts = (between[i, j][None, :] & between[i] & between[j]).sum(axis=1)
            if np.any(counts != 1):
                return False
    return True


# lazy Cayley graphs of free groups -----------------------------------------


class CayleyTree:
    """Cayl(F_r, S): lazily generated, vertices are reduced words."""

    def __init__(self, alphabet: words.Alphabet = words.F2):
        self.alphabet = alphabet
        self.name = f"tree-F{alphabet.rank}"

    def __repr__(self):
        return f"CayleyTree(rank={self.alphabet.rank})"

    def neighbors(self, v: str):
        return tuple(words.multiply(v, ch) for ch in self.alphabet.letters)

    def has_edge(self, u: str, v: str) -> bool:
        return len(words.multiply(words.inverse(u), v)) == 1

    def distance(self, u: str, v: str) -> int:
        return words.distance(u, v)

    def ball(self, r: int) -> list:
        return self.alphabet.ball(r)


class PieceCayleyGraph:
    """Cayl(F, P) for a symmetric piece set given by a membership predicate."""

    def __init__(self, is_piece: Callable[[str], bool], name: str = "pieces"):
        self.is_piece = is_piece
        self.name = name

    def has_edge(self, u: str, v: str) -> bool:
        g = words.multiply(words.inverse(u), v)
        return g != "" and self.is_piece(g)


# actions --------------------------------------------------------------------


class GraphAction:
    """A group acting by graph automorphisms, given by named generator maps."""

    def __init__(self, generators: dict, inverses: dict | None = None, name: str = "action"):
        self.generators = dict(generators)
        self.inverses = dict(inverses or {})
        self.name = name
        self._perms = None

    def __repr__(self):
        return f"GraphAction({self.name!r}, generators={sorted(self.generators)})"

    def act(self, gen: str, v):
        return self.generators[gen](v)

    def act_path(self, gen: str, p):
        f = self.generators[gen]
        return tuple(f(v) for v in p)

    def act_edges(self, gen: str, edges):
        f = self.generators[gen]
        return tuple((f(u), f(v)) for u, v in edges)

    def check_automorphisms(self, graph, edges: Iterable) -> list:
        """Edges (from the given sample) that some generator fails to map to an edge."""
        bad = []
        for name, f in self.generators.items():
            for u, v in edges:
                if not graph.has_edge(f(u), f(v)):
                    bad.append((name, (u, v)))
        return bad

    @classmethod
    def trivial(cls) -> "GraphAction":
        return cls({}, name="trivial")

    @classmethod
    def left_translation(cls, alphabet: words.Alphabet = words.F2) -> "GraphAction":
        gens = {ch: (lambda v, ch=ch: words.multiply(ch, v)) for ch in alphabet.letters}
        return cls(gens, name=f"F{alphabet.rank} left translation")

    @classmethod
    def from_permutations(cls, graph: Graph, perms: dict) -> "GraphAction":
        gens = {}
        for name, mapping in perms.items():
            full = {v: mapping.get(v, v) for v in graph.vertices}
            if sorted(full.values(), key=graph.index.__getitem__) != list(graph.vertices):
                raise GraphError(f"generator {name!r} is not a bijection")
            gens[name] = full.__getitem__
        act = cls(gens, name="permutations")
        bad = act.check_automorphisms(graph, graph.edges)
        if bad:
            raise GraphError(f"generator {bad[0][0]!r} does not preserve edge {bad[0][1]!r}")
        act._perms = {
            name: tuple(graph.index[f(v)] for v in graph.vertices) for name, f in gens.items()
        }
        return act

    def group_permutations(self, graph: Graph, budget: int = 100_000) -> list:
        """All group elements as index permutations (closure of the generators)."""
        n = len(graph.vertices)
        if self._perms is None:
            self._perms = {
                name: tuple(graph.index[f(v)] for v in graph.vertices)
                for name, f in self.generators.items()
            }
        ident = tuple(range(n))
        seen = {ident}
        queue = deque([ident])
        gens = list(self._perms.values())
        while queue:
            g = queue.popleft()
            for s in gens:
                h = tuple(s[i] for i in g)
                if h not in seen:
                    if len(seen) >= budget:
                        raise words.ResourceError("group enumeration exceeded its budget")
                    seen.add(h)
                    queue.append(h)
        return sorted(seen)
