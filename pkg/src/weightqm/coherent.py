"""Path families, fragment correspondences and the quasi-median property."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

from .graph import (
    Graph,
    GraphAction,
    NotMedianError,
    all_geodesics,
    fragment_indices,
    is_median_graph,
    is_path,
    median,
    subpaths,
)
from .report import Report


class VerificationError(RuntimeError):
    pass


class PathFamily:
    """P(x, y) as a cached provider of path tuples in a fixed order.

    ``witness`` optionally gives a fast route to quasi-median witnesses;
    without it the exhaustive decomposition search is used.
    """

    def __init__(self, provider: Callable, R: int, name: str = "family",
                 adjacent: Callable | None = None, length: Callable | None = None,
                 witness: Callable | None = None):
        self._provider = provider
        self.R = R
        self.name = name
        self.adjacent = adjacent
        self.length = length
        self.witness = witness
        self.paths = lru_cache(maxsize=None)(self._paths)

    def __repr__(self):
        return f"PathFamily({self.name!r}, R={self.R})"

    def _paths(self, x, y) -> tuple:
        ps = tuple(tuple(p) for p in self._provider(x, y))
        if not ps:
            raise VerificationError(f"P({x!r}, {y!r}) is empty")
        return ps

    def first(self, x, y) -> tuple:
        return self.paths(x, y)[0]

    def contains(self, p) -> bool:
        return tuple(p) in self.paths(p[0], p[-1])


class FragmentCorrespondence:
    """phi_{p,q} as a map of index tuples; this base class pairs equal index tuples."""

    def __init__(self, ell: int):
        self.ell = ell

    def __call__(self, p, q) -> dict:
        if len(p) != len(q):
            raise VerificationError("index correspondence needs paths of equal length")
        return {idx: idx for idx in fragment_indices(len(p) - 1, self.ell)}


@dataclass
class CoherentPair:
    family: PathFamily
    phi: FragmentCorrespondence
    ell: int
    action: GraphAction | None = None

    @property
    def R(self) -> int:
        return self.family.R


def geodesic_family(G: Graph, R: int | None = None) -> PathFamily:
    """All geodesics; medians give witnesses directly when G is a median graph."""
    med = is_median_graph(G)

    def witness(x, y, z):
        m = median(G, x, y, z)
        return _median_witness(fam, (x, y, z), m)

    fam = PathFamily(lambda x, y: all_geodesics(G, x, y), R=0 if R is None else R,
                     name=f"geodesics({G.name})", adjacent=G.has_edge, length=G.distance,
                     witness=witness if med else None)
    return fam


# quasi-median witnesses -------------------------------------------------------


def concat(*ps) -> tuple:
    out = list(ps[0])
    for p in ps[1:]:
        if out[-1] != p[0]:
            raise ValueError("paths do not meet")
        out.extend(p[1:])
    return tuple(out)


@dataclass(frozen=True)
class QmpWitness:
    triple: tuple
    medians: tuple
    s_x: tuple
    s_y: tuple
    s_z: tuple
    r1: tuple
    r2: tuple
    r3: tuple
    p_xy: tuple
    p_yz: tuple
    p_xz: tuple

    @property
    def r_lengths(self) -> tuple:
        return (len(self.r1) - 1, len(self.r2) - 1, len(self.r3) - 1)

    def problems(self, family: PathFamily, R: int) -> list:
        out = []
        if self.p_xy != concat(self.s_x, self.r1, self.s_y[::-1]):
            out.append("p_xy != s_x * r1 * rev(s_y)")
        if self.p_yz != concat(self.s_y, self.r2, self.s_z[::-1]):
            out.append("p_yz != s_y * r2 * rev(s_z)")
        if self.p_xz != concat(self.s_x, self.r3, self.s_z[::-1]):
            out.append("p_xz != s_x * r3 * rev(s_z)")
        if max(self.r_lengths) > R:
            out.append(f"r-lengths {self.r_lengths} exceed R={R}")
        for name in ("s_x", "s_y", "s_z", "r1", "r2", "r3", "p_xy", "p_yz", "p_xz"):
            if not family.contains(getattr(self, name)):
                out.append(f"{name} not in the family")
        return out

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _median_witness(family, triple, m) -> QmpWitness:
    x, y, z = triple
    sx, sy, sz = family.first(x, m), family.first(y, m), family.first(z, m)
    return QmpWitness(triple, (m, m, m), sx, sy, sz, (m,), (m,), (m,),
                      concat(sx, sy[::-1]), concat(sy, sz[::-1]), concat(sx, sz[::-1]))


def _prefix_len(p, q) -> int:
    k = 0
    while k < min(len(p), len(q)) and p[k] == q[k]:
        k += 1
    return k


def search_witness(family: PathFamily, x, y, z, R: int, budget: int = 200_000):
    """Exhaustive search over family paths and split points; None if nothing fits."""
    work = 0
    for pxy in family.paths(x, y):
        for pyz in family.paths(y, z):
            for pxz in family.paths(x, z):
                work += 1
                if work > budget:
                    raise VerificationError(f"witness search budget exhausted at {(x, y, z)!r}")
                ax = _prefix_len(pxy, pxz)
                ay = _prefix_len(pyz, pxy[::-1])
                az = _prefix_len(pyz[::-1], pxz[::-1])
                for i in range(ax - 1, -1, -1):
                    for j in range(ay - 1, -1, -1):
                        for k in range(az - 1, -1, -1):
                            if i > len(pxy) - 1 - j or j > len(pyz) - 1 - k or i > len(pxz) - 1 - k:
                                continue
                            w = QmpWitness(
                                (x, y, z), (pxy[i], pyz[j], pxz[len(pxz) - 1 - k]),
                                pxy[: i + 1], pyz[: j + 1], pxz[::-1][: k + 1],
                                pxy[i : len(pxy) - j], pyz[j : len(pyz) - k],
                                pxz[i : len(pxz) - k], pxy, pyz, pxz,
                            )
                            if max(w.r_lengths) <= R and not w.problems(family, R):
                                return w
    return None


def qmp_witness(pair_or_family, x, y, z, R: int | None = None) -> QmpWitness:
    family = getattr(pair_or_family, "family", pair_or_family)
    R = family.R if R is None else R
    if family.witness is not None:
        try:
            w = family.witness(x, y, z)
        except NotMedianError:
            w = None
        if w is not None and not w.problems(family, R):
            return w
    w = search_witness(family, x, y, z, R)
    if w is None:
        raise VerificationError(f"no quasi-median witness with R={R} for {(x, y, z)!r}")
    return w


def verify_qmp(pair_or_family, R: int, triples: Iterable) -> tuple:
    family = getattr(pair_or_family, "family", pair_or_family)
    report = Report(f"quasi-median property, R={R}, {family.name}")
    n = 0
    worst = 0
    for x, y, z in triples:
        n += 1
        try:
            w = qmp_witness(family, x, y, z, R)
        except VerificationError:
            report.add("witness", False, [x, y, z], triples_checked=n)
            return False, report
        worst = max(worst, *w.r_lengths)
    report.add("witness", True, triples_checked=n, max_r_length=worst)
    return True, report


# coherence ------------------------------------------------------------------


def verify_coherence(pair: CoherentPair, sample: Iterable, action: GraphAction | None = None) -> Report:
    """The four coherence conditions plus bijectivity of every phi_{p,q}."""
    family, phi, ell = pair.family, pair.phi, pair.ell
    action = action or pair.action
    report = Report(f"coherence of {family.name}, size {ell}")
    first_bad = {}

    def fail(cond, ce):
        first_bad.setdefault(cond, ce)

    for x, y in sample:
        ps = family.paths(x, y)
        if action is not None:
            for g in sorted(action.generators):
                moved = {action.act_path(g, p) for p in ps}
                target = set(family.paths(action.act(g, x), action.act(g, y)))
                if moved != target:
                    fail("action", {"generator": g, "pair": [x, y]})
        if {p[::-1] for p in family.paths(y, x)} != set(ps):
            fail("inversion", [x, y])
        for p in ps:
            if family.adjacent is not None and not is_path(p, family.adjacent):
                fail("paths", {"pair": [x, y], "path": p})
            for sp in subpaths(p):
                if not family.contains(sp):
                    fail("subpaths", {"pair": [x, y], "subpath": sp})
                    break
        if len({len(p) for p in ps}) != 1:
            fail("length", [x, y])
            continue
        for p in ps:
            base = list(fragment_indices(len(p) - 1, ell))
            for q in ps:
                m = phi(p, q)
                qs = set(fragment_indices(len(q) - 1, ell))
                if sorted(m) != base or set(m.values()) != qs or len(set(m.values())) != len(m):
                    fail("phi-bijective", {"pair": [x, y], "p": p, "q": q})
                if p == q and any(k != v for k, v in m.items()):
                    fail("phi-bijective", {"pair": [x, y], "p": p, "q": q, "why": "phi_pp not identity"})
    for cond in ("action", "inversion", "subpaths", "length", "phi-bijective"):
        report.add(cond, cond not in first_bad, first_bad.get(cond))
    if "paths" in first_bad:
        report.add("paths", False, first_bad["paths"])
    return report
