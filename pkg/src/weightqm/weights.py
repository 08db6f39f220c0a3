"""l-weights, weight quasimorphisms and the triangle estimate behind their defect."""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .coherent import CoherentPair, VerificationError
from .graph import GraphAction, fragment_edges, fragment_indices, reverse_edges
from .report import Report


class WeightError(ValueError):
    pass


class PreconditionError(VerificationError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class WeightMap:
    """A map on l-tuples of oriented edges with declared norm and finiteness constant.

    ``candidates(path)`` may narrow the fragments worth evaluating on a path;
    it must return a superset of the supported index tuples. The default is
    every fragment.
    """

    def __init__(self, ell: int, fn: Callable, norm: float, c: int = 2, name: str = "W",
                 candidates: Callable | None = None):
        if ell < 1:
            raise ValueError("weight size must be positive")
        self.ell = ell
        self.fn = fn
        self.norm = norm
        self.c = c
        self.name = name
        self._candidates = candidates

    def __repr__(self):
        return f"WeightMap({self.name!r}, ell={self.ell}, norm={self.norm}, c={self.c})"

    def __call__(self, edges) -> float:
        v = self.fn(edges)
        if abs(v) > self.norm:
            raise WeightError(f"|W({edges!r})| = {abs(v)} exceeds the declared norm {self.norm}")
        return v

    def in_support(self, edges) -> bool:
        return self(edges) != 0

    def candidates(self, p) -> Iterable:
        if self._candidates is None:
            return fragment_indices(len(p) - 1, self.ell)
        return self._candidates(p)

    def all_fragments(self, p) -> Iterable:
        return fragment_indices(len(p) - 1, self.ell)


def zero_weight(ell: int) -> WeightMap:
    return WeightMap(ell, lambda edges: 0, norm=0, c=2, name="zero", candidates=lambda p: ())


class ActionQuasimorphism:
    """A two-variable map on vertices, memoized."""

    def __init__(self, fn: Callable, name: str = "f", antisymmetric: bool = False,
                 defect_bound: float | None = None):
        self.fn = fn
        self.name = name
        self.antisymmetric = antisymmetric
        self.defect_bound = defect_bound
        self._cached = lru_cache(maxsize=None)(fn)

    def __repr__(self):
        return f"ActionQuasimorphism({self.name!r})"

    def __call__(self, x, y):
        return self._cached(x, y)

    def based_at(self, s, act: Callable) -> Callable:
        """g -> f(s, g.s), a quasimorphism of the acting group."""
        return lambda g: self(s, act(g, s))


# sums over fragments -----------------------------------------------------------


def fragment_sum(W: WeightMap, p, tau: Callable | None = None, full: bool = False) -> float:
    """Sum over ell-fragments a of p of W(a) * tau(a)."""
    idxs = W.all_fragments(p) if full else W.candidates(p)
    total = 0
    for idx in idxs:
        edges = fragment_edges(p, idx)
        w = W(edges)
        if w:
            total += w if tau is None else w * tau(edges)
    return total


def weight_qm(W: WeightMap, pair: CoherentPair) -> ActionQuasimorphism:
    """f_W(x, y): the fragment sum of W along the first path of P(x, y)."""
    if W.ell != pair.ell:
        raise WeightError(f"weight size {W.ell} does not match the pair size {pair.ell}")
    family = pair.family

    def f(x, y):
        if x == y:
            return 0
        return fragment_sum(W, family.first(x, y))

    bound = 3 * (pair.R + 1) * W.c * W.norm
    return ActionQuasimorphism(f, name=f"f[{W.name}]", antisymmetric=True, defect_bound=bound)


def weight_bound(W: WeightMap, pair: CoherentPair, tau_norm: float = 1) -> float:
    return 3 * (pair.R + 1) * W.c * W.norm * tau_norm


# verification ---------------------------------------------------------------


def verify_weight(W: WeightMap, pair: CoherentPair, action: GraphAction | None, samples: Iterable) -> Report:
    """Invariance, alternation, boundedness, path-independence and finiteness on samples.

    ``samples`` are vertex pairs; every fragment of every path of P(x, y) is
    examined.
    """
    action = action or pair.action
    family = pair.family
    report = Report(f"{W.name} as a {W.ell}-weight for {family.name}")
    bad = {}
    max_count = 0
    max_abs = 0

    def fail(cond, ce):
        bad.setdefault(cond, ce)

    for x, y in samples:
        ps = family.paths(x, y)
        for p in ps:
            counts = [0] * len(p)
            for idx in W.all_fragments(p):
                a = fragment_edges(p, idx)
                try:
                    w = W(a)
                except WeightError as err:
                    fail("bounded", {"fragment": a, "error": str(err)})
                    w = W.fn(a)
                max_abs = max(max_abs, abs(w))
                if W.fn(reverse_edges(a)) != -w:
                    fail("alternating", {"fragment": a})
                if action is not None:
                    for g in sorted(action.generators):
                        if W.fn(action.act_edges(g, a)) != w:
                            fail("invariant", {"generator": g, "fragment": a})
                if w != 0:
                    for pos in range(idx[0] + 1, idx[-1] + 1):
                        counts[pos] += 1
            top = max(counts)
            max_count = max(max_count, top)
            if top > W.c:
                fail("finiteness", {"path": p, "vertex": p[counts.index(top)], "count": top})
            for q in ps:
                m = pair.phi(p, q)
                for idx, jdx in m.items():
                    if W.fn(fragment_edges(p, idx)) != W.fn(fragment_edges(q, jdx)):
                        fail("path-independent", {"p": p, "q": q, "fragment": idx})
                        break
    report.add("invariant", "invariant" not in bad, bad.get("invariant"))
    report.add("alternating", "alternating" not in bad, bad.get("alternating"))
    report.add("bounded", "bounded" not in bad, bad.get("bounded"), max_abs=max_abs, declared=W.norm)
    report.add("path-independent", "path-independent" not in bad, bad.get("path-independent"))
    report.add("finiteness", "finiteness" not in bad, bad.get("finiteness"),
               max_count=max_count, declared_c=W.c)
    return report


def check_tau(W: WeightMap, pair: CoherentPair, tau: Callable, x, y) -> None:
    """Spot-check symmetry and Phi-stability of tau on the paths of P(x, y)."""
    ps = pair.family.paths(x, y)
    for p in ps:
        for idx in W.all_fragments(p):
            a = fragment_edges(p, idx)
            if tau(a) != tau(reverse_edges(a)):
                raise PreconditionError("tau is not symmetric", {"fragment": a})
        for q in ps:
            if q is p:
                continue
            for idx, jdx in pair.phi(p, q).items():
                a = fragment_edges(p, idx)
                if W.fn(a) != 0 and tau(a) != tau(fragment_edges(q, jdx)):
                    raise PreconditionError("tau is not Phi-stable", {"p": p, "q": q, "fragment": idx})


def triangle_sums(W: WeightMap, pair: CoherentPair, tau: Callable, x, y, z) -> float:
    fam = pair.family
    return (fragment_sum(W, fam.first(x, y), tau) + fragment_sum(W, fam.first(y, z), tau)
            - fragment_sum(W, fam.first(x, z), tau))


def triangle_sum_residual(W: WeightMap, pair: CoherentPair, tau: Callable, x, y, z,
                          tau_norm: float | None = None, check: bool = True) -> tuple:
    """|S(x,y) + S(y,z) - S(x,z)| for S the tau-weighted fragment sum, and its bound.

    Without ``tau_norm`` the bound uses the largest |tau| seen on the three paths.
    """
    if check:
        for u, v in ((x, y), (y, z), (x, z)):
            check_tau(W, pair, tau, u, v)
    residual = abs(triangle_sums(W, pair, tau, x, y, z))
    if tau_norm is None:
        tau_norm = 0
        for u, v in ((x, y), (y, z), (x, z)):
            p = pair.family.first(u, v)
            for idx in W.all_fragments(p):
                tau_norm = max(tau_norm, abs(tau(fragment_edges(p, idx))))
    return residual, weight_bound(W, pair, tau_norm)


def defect(f: Callable, triples: Iterable) -> float:
    """max |f(y,z) - f(x,z) + f(x,y)| over the triples."""
    best = 0
    for x, y, z in triples:
        best = max(best, abs(f(y, z) - f(x, z) + f(x, y)))
    return best


def defect_on(f: Callable, vertices) -> tuple:
    """Exhaustive defect over all triples of a vertex set, vectorized.

    Returns (defect, witness triple).
    """
    vs = list(vertices)
    F = np.array([[f(x, y) for y in vs] for x in vs])
    dfx = F[None, :, :] - F[:, None, :] + F[:, :, None]  # [x, y, z] -> f(y,z) - f(x,z) + f(x,y)
    a = np.abs(dfx)
    i, j, k = np.unravel_index(int(np.argmax(a)), a.shape)
    return a[i, j, k].item(), (vs[i], vs[j], vs[k])
