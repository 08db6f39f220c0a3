"""Halfspace combinatorics of median graphs and median quasimorphisms.

Finite complexes store halfspaces as integer bitmasks over the vertex order,
so nesting and transversality are a couple of integer operations. The
Cayley tree of a free group is handled separately and lazily: there every
halfspace is the far side of exactly one oriented edge, and the halfspace is
identified with that edge.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from . import words
from .coherent import CoherentPair, FragmentCorrespondence, PathFamily
from .graph import (
    Graph,
    GraphAction,
    GraphError,
    all_geodesics,
    fragment_indices,
    is_median_graph,
)
from .weights import ActionQuasimorphism, WeightMap


@dataclass(frozen=True)
class Hyperplane:
    id: int
    edges: tuple
    halfspaces: tuple  # (h, complement of h)


@dataclass
class StaircaseReport:
    length: int
    witness: tuple | None  # (h-chain, k-chain) as halfspace ids
    cap: int
    capped: bool = False

    def to_dict(self, cx=None):
        d = {"length": self.length, "cap": self.cap, "capped": self.capped}
        if self.witness is not None:
            d["witness"] = [list(c) for c in self.witness]
            if cx is not None:
                d["witness_vertices"] = [[cx.members(h) for h in c] for c in self.witness]
        return d


class MedianComplex:
    """Finite median graph together with its halfspace lattice."""

    def __init__(self, graph: Graph, action: GraphAction | None = None, check: bool = True):
        if check and not is_median_graph(graph):
            raise GraphError(f"{graph.name} is not a median graph")
        self.graph = graph
        self.action = action or GraphAction.trivial()
        self.name = graph.name
        V = graph.vertices
        D = graph.distance_matrix
        masks = []
        ids = {}
        edge_h = {}
        for u, v in graph.oriented_edges:
            iu, iv = graph.index[u], graph.index[v]
            m = 0
            for i in range(len(V)):
                if D[i, iv] < D[i, iu]:
                    m |= 1 << i
            if m not in ids:
                ids[m] = len(masks)
                masks.append(m)
            edge_h[(u, v)] = ids[m]
        full = (1 << len(V)) - 1
        self.full = full
        self.masks = tuple(masks)
        self.complement = tuple(ids[full ^ m] for m in masks)
        self._edge_h = edge_h
        hyps = {}
        for (u, v), h in edge_h.items():
            key = min(h, self.complement[h])
            hyps.setdefault(key, []).append((u, v))
        self.hyperplanes = [
            Hyperplane(i, tuple(sorted({tuple(sorted(e, key=graph.index.__getitem__)) for e in es},
                                       key=lambda e: (graph.index[e[0]], graph.index[e[1]]))),
                       (key, self.complement[key]))
            for i, (key, es) in enumerate(sorted(hyps.items()))
        ]

    def __repr__(self):
        return f"MedianComplex({self.name!r}, hyperplanes={len(self.hyperplanes)})"

    # basic predicates ----------------------------------------------------

    @property
    def halfspace_ids(self):
        return range(len(self.masks))

    def members(self, h) -> list:
        m = self.masks[h]
        return [v for i, v in enumerate(self.graph.vertices) if m >> i & 1]

    def contains(self, h, v) -> bool:
        return bool(self.masks[h] >> self.graph.index[v] & 1)

    def edge_halfspace(self, e) -> int:
        """The halfspace dual to the oriented edge e that contains its tail."""
        return self._edge_h[e]

    def nested(self, h, k) -> bool:
        """k is a proper subset of h."""
        mh, mk = self.masks[h], self.masks[k]
        return h != k and mk & ~mh == 0

    def transverse(self, h, k) -> bool:
        mh, mk, f = self.masks[h], self.masks[k], self.full
        return bool(mh & mk and mh & (f ^ mk) and (f ^ mh) & mk and (f ^ mh) & (f ^ mk))

    @cached_property
    def _tight(self) -> tuple:
        n = len(self.masks)
        below = [[k for k in range(n) if self.nested(h, k)] for h in range(n)]
        tight = []
        for h in range(n):
            bs = set(below[h])
            tight.append(tuple(k for k in below[h] if not any(k in below[j] for j in bs if j != k)))
        return tuple(tight)

    def tightly_nested(self, h, k) -> bool:
        return k in self._tight[h]

    def interval(self, x, y) -> frozenset:
        """Halfspaces separating y from x: y inside, x outside."""
        ix, iy = self.graph.index[x], self.graph.index[y]
        return frozenset(
            h for h, m in enumerate(self.masks) if m >> iy & 1 and not m >> ix & 1
        )

    # segments ------------------------------------------------------------

    def reverse(self, s) -> tuple:
        return tuple(self.complement[h] for h in reversed(s))

    def is_segment(self, s) -> bool:
        return all(self.tightly_nested(h, k) for h, k in zip(s, s[1:]))

    def _chains(self, ell, allowed=None):
        def grow(chain):
            if len(chain) == ell:
                yield tuple(chain)
                return
            for k in self._tight[chain[-1]]:
                if allowed is None or k in allowed:
                    chain.append(k)
                    yield from grow(chain)
                    chain.pop()

        for h in self.halfspace_ids:
            if allowed is None or h in allowed:
                yield from grow([h])

    def segments(self, ell) -> list:
        return sorted(self._chains(ell))

    def segments_in_interval(self, x, y, ell) -> list:
        return sorted(self._chains(ell, self.interval(x, y)))

    def heads(self, s) -> list:
        h = s[0]
        out = set()
        for u, v in self.graph.oriented_edges:
            if self._edge_h[(u, v)] == h:
                out.add(u)
        return sorted(out, key=self.graph.index.__getitem__)

    def tails(self, s) -> list:
        h = s[-1]
        out = set()
        for u, v in self.graph.oriented_edges:
            if self._edge_h[(u, v)] == h:
                out.add(v)
        return sorted(out, key=self.graph.index.__getitem__)

    def in_interior(self, v, s) -> bool:
        return self.contains(s[0], v) and not self.contains(s[-1], v)

    # group action on halfspaces --------------------------------------------

    @cached_property
    def _group(self) -> list:
        return self.action.group_permutations(self.graph)

    def translate(self, perm, s) -> tuple:
        ids = {m: h for h, m in enumerate(self.masks)}
        out = []
        for h in s:
            m = self.masks[h]
            img = 0
            for i, j in enumerate(perm):
                if m >> i & 1:
                    img |= 1 << j
            out.append(ids[img])
        return tuple(out)

    def orbit(self, s) -> frozenset:
        return frozenset(self.translate(g, s) for g in self._group)

    def segment_sign(self, s) -> "SegmentSign":
        orb = self.orbit(s)
        rev = self.orbit(self.reverse(s))
        return SegmentSign(s, orb, rev, zero=orb == rev)

    def geodesic_family(self) -> PathFamily:
        return PathFamily(lambda x, y: all_geodesics(self.graph, x, y), R=0,
                          name=f"geodesics({self.name})", adjacent=self.graph.has_edge,
                          length=self.graph.distance)

    # staircases ----------------------------------------------------------

    def staircase_length(self, cap: int = 8) -> StaircaseReport:
        """Longest staircase (h1>..>hs, k1>..>ks), h_i > k_i, h_i crossing k_j for j < i."""
        n = len(self.masks)
        below = [[k for k in range(n) if self.nested(h, k)] for h in range(n)]
        best = [0, None]
        capped = False

        def grow(hs, ks):
            nonlocal capped
            if len(hs) > best[0]:
                best[0], best[1] = len(hs), (tuple(hs), tuple(ks))
            if len(hs) >= cap:
                capped = True
                return
            for h in below[hs[-1]]:
                if not all(self.transverse(h, k) for k in ks):
                    continue
                for k in below[ks[-1]]:
                    if self.nested(h, k):
                        hs.append(h), ks.append(k)
                        grow(hs, ks)
                        hs.pop(), ks.pop()

        for h in range(n):
            for k in below[h]:
                grow([h], [k])
        return StaircaseReport(best[0], best[1], cap, capped)


@dataclass(frozen=True)
class SegmentSign:
    """The +1/-1/0 indicator of the orbit of s and of its reverse."""

    segment: tuple
    orbit: frozenset
    reverse_orbit: frozenset
    zero: bool

    def __call__(self, t) -> int:
        if self.zero:
            return 0
        if t in self.orbit:
            return 1
        if t in self.reverse_orbit:
            return -1
        return 0


# the Cayley tree of a free group ----------------------------------------------


class TreeComplex:
    """Cayl(F_r, S) viewed as a CAT(0) cube complex, with F_r acting on the left.

    A halfspace is encoded by the oriented edge (alpha, omega) it is dual to,
    meaning the set of vertices closer to omega than to alpha.
    """

    def __init__(self, alphabet: words.Alphabet = words.F2):
        self.alphabet = alphabet
        self.name = f"tree-F{alphabet.rank}"
        self.action = GraphAction.left_translation(alphabet)

    def __repr__(self):
        return f"TreeComplex(rank={self.alphabet.rank})"

    def contains(self, h, v) -> bool:
        a, w = h
        return words.distance(v, w) < words.distance(v, a)

    def edge_halfspace(self, e):
        return tuple(e)

    def complement_of(self, h):
        return (h[1], h[0])

    def nested(self, h, k) -> bool:
        (a1, w1), (a2, w2) = h, k
        return self.contains(h, a2) and words.distance(a1, w2) == words.distance(a1, a2) + 1

    def transverse(self, h, k) -> bool:
        return False

    def tightly_nested(self, h, k) -> bool:
        return self.nested(h, k) and h[1] == k[0]

    def interval(self, x, y) -> tuple:
        p = words.tree_geodesic(x, y)
        return tuple(zip(p, p[1:]))

    def reverse(self, s) -> tuple:
        return tuple((w, a) for a, w in reversed(s))

    def is_segment(self, s) -> bool:
        return all(self.tightly_nested(h, k) for h, k in zip(s, s[1:]))

    def segments_in_interval(self, x, y, ell) -> list:
        hs = self.interval(x, y)
        out = []
        for idx in itertools.combinations(range(len(hs)), ell):
            s = tuple(hs[i] for i in idx)
            if self.is_segment(s):
                out.append(s)
        return out

    def heads(self, s) -> list:
        return [s[0][0]]

    def tails(self, s) -> list:
        return [s[-1][1]]

    def canonical(self, s) -> tuple:
        """Translate s so that the head of its first dual edge is e."""
        g = words.inverse(s[0][0])
        return tuple((words.multiply(g, a), words.multiply(g, w)) for a, w in s)

    def segment_from_word(self, omega: str, base: str = "") -> tuple:
        p = [words.multiply(base, omega[:k]) for k in range(len(omega) + 1)]
        return tuple(zip(p, p[1:]))

    def segment_sign(self, s) -> "TreeSegmentSign":
        c, r = self.canonical(s), self.canonical(self.reverse(s))
        return TreeSegmentSign(self, c, r, zero=c == r)

    def geodesic_family(self) -> PathFamily:
        return PathFamily(lambda x, y: [words.tree_geodesic(x, y)], R=0, name=self.name,
                          adjacent=lambda u, v: len(words.multiply(words.inverse(u), v)) == 1,
                          length=words.distance)


@dataclass(frozen=True)
class TreeSegmentSign:
    cx: TreeComplex = field(repr=False)
    canonical: tuple
    reverse_canonical: tuple
    zero: bool

    def __call__(self, t) -> int:
        if self.zero:
            return 0
        c = self.cx.canonical(t)
        if c == self.canonical:
            return 1
        if c == self.reverse_canonical:
            return -1
        return 0


# median quasimorphisms -------------------------------------------------------


def segment_orbit_sign(cx, s):
    return cx.segment_sign(s)


def median_qm(cx, s) -> ActionQuasimorphism:
    """f_s(x, y): signed count of translates of s among the segments of [x, y]."""
    eps = cx.segment_sign(s)
    ell = len(s)

    def f(x, y):
        if eps.zero:
            return 0
        return sum(eps(t) for t in cx.segments_in_interval(x, y, ell))

    return ActionQuasimorphism(f, name=f"f_s[{cx.name}]", antisymmetric=True)


class SegmentCorrespondence(FragmentCorrespondence):
    """phi_{p,q} matching fragments with equal segment image, lexicographic on the rest."""

    def __init__(self, cx, ell):
        super().__init__(ell)
        self.cx = cx

    def image(self, p, idx):
        return tuple(self.cx.edge_halfspace((p[i], p[i + 1])) for i in idx)

    def __call__(self, p, q) -> dict:
        if p == q:
            return {idx: idx for idx in fragment_indices(len(p) - 1, self.ell)}
        qs = {}
        q_rest = []
        for idx in fragment_indices(len(q) - 1, self.ell):
            lam = self.image(q, idx)
            if self.cx.is_segment(lam):
                qs[lam] = idx
            else:
                q_rest.append(idx)
        out = {}
        p_rest = []
        for idx in fragment_indices(len(p) - 1, self.ell):
            lam = self.image(p, idx)
            if self.cx.is_segment(lam) and lam in qs:
                out[idx] = qs.pop(lam)
            else:
                p_rest.append(idx)
        if qs or len(p_rest) != len(q_rest):
            raise GraphError("segment images of two geodesics differ")
        out.update(zip(p_rest, q_rest))
        return out


def median_weight(cx, s, c: int | None = None) -> tuple:
    """The weight W(a) = eps_s(lambda(a)) on segment-valued fragments, with its pair.

    Returns ``(W, pair)``. The finiteness constant is found by an exhaustive
    scan over the finite complex unless ``c`` is given.
    """
    ell = len(s)
    eps = cx.segment_sign(s)
    family = cx.geodesic_family()
    # geodesics in a median graph satisfy the witness condition with R = 0;
    # the declared constant follows the weaker R = 1 used in the defect bound
    family.R = 1
    pair = CoherentPair(family, SegmentCorrespondence(cx, ell), ell, action=cx.action)

    def W(edges):
        if eps.zero:
            return 0
        lam = tuple(cx.edge_halfspace(e) for e in edges)
        if not cx.is_segment(lam):
            return 0
        return eps(lam)

    weight = WeightMap(ell, W, norm=1, c=2, name=f"median weight[{cx.name}]")
    if c is None and isinstance(cx, MedianComplex):
        c = max(2, finiteness_scan(weight, pair, cx.graph.vertices))
    weight.c = c if c is not None else max(2, ell - 1)
    return weight, pair


def finiteness_scan(W: WeightMap, pair: CoherentPair, vertices) -> int:
    """Largest number of supported fragments of one family path containing one vertex."""
    from .graph import fragment_edges

    best = 0
    for x in vertices:
        for y in vertices:
            for p in pair.family.paths(x, y):
                counts = [0] * len(p)
                for idx in fragment_indices(len(p) - 1, pair.ell):
                    if W(fragment_edges(p, idx)) != 0:
                        for pos in range(idx[0] + 1, idx[-1] + 1):
                            counts[pos] += 1
                best = max(best, max(counts))
    return best


def heads_tails(cx, s) -> tuple:
    return cx.heads(s), cx.tails(s)


def nontransverse_check(zeta, cx, s, trailing) -> tuple:
    """Is zeta constant over the heads and over the tails of every translate of s?

    ``trailing`` is an iterable of (n-1)-tuples filling the remaining slots.
    Returns ``(ok, witness)``.
    """
    trailing = list(trailing)
    for t in sorted(cx.orbit(s)):
        for ends in (cx.heads(t), cx.tails(t)):
            for rest in trailing:
                vals = {zeta(v, *rest) for v in ends}
                if len(vals) > 1:
                    return False, {"translate": t, "vertices": ends, "args": rest}
    return True, None


def nontransverse_implies_stable(zeta, cx, s, pair: CoherentPair, W: WeightMap, trailing) -> dict:
    """Run both checks on the same samples; the implication holds unless only the first passes."""
    from .vanishing import phi_stability_check

    trailing = list(trailing)
    nt_ok, nt_witness = nontransverse_check(zeta, cx, s, trailing)
    vs = cx.graph.vertices
    samples = ((x, y, rest) for x in vs for y in vs for rest in trailing)
    st_ok, st_witness = phi_stability_check(zeta, pair, W, samples)
    return {"nontransverse": nt_ok, "stable": st_ok, "implication": st_ok or not nt_ok,
            "nontransverse_witness": nt_witness, "stability_witness": st_witness}


def hyperplanes(G: Graph) -> list:
    return MedianComplex(G).hyperplanes


def interval_halfspaces(cx, x, y):
    return cx.interval(x, y)
