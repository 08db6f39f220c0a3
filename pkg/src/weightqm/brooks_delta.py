"""Free-group instances: Brooks counting quasimorphisms and Δ-decompositions.

Both live on Cayley graphs of F_r with vertices the reduced words and F_r
acting by left multiplication. Brooks weights use the tree geodesics;
Δ-decompositions use the single path spelled out by Δ(x^-1 y) in the Cayley
graph of the pieces.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

from . import words
from .cochain import MEMO_SIZE, GroupQuasimorphism
from .coherent import CoherentPair, FragmentCorrespondence, PathFamily, QmpWitness, VerificationError
from .graph import GraphAction, PieceCayleyGraph
from .report import Report
from .weights import ActionQuasimorphism, WeightMap, weight_qm


# Brooks -------------------------------------------------------------------


def _check_omega(omega: str, alphabet: words.Alphabet) -> str:
    omega = alphabet.reduce(omega) if omega not in ("", "e") else ""
    if not omega:
        raise words.WordError("a Brooks word must be non-empty")
    return omega


def chi(omega: str, g: str) -> int:
    if g == omega:
        return 1
    if g == words.inverse(omega):
        return -1
    return 0


def brooks_qm_direct(omega: str, g: str) -> int:
    """Occurrences of omega minus occurrences of omega^-1 in g, overlaps counted."""
    ell = len(omega)
    inv = words.inverse(omega)
    return sum((g[i:i + ell] == omega) - (g[i:i + ell] == inv) for i in range(len(g) - ell + 1))


def brooks_qm(omega: str, alphabet: words.Alphabet = words.F2) -> GroupQuasimorphism:
    omega = _check_omega(omega, alphabet)
    return GroupQuasimorphism(lambda g: brooks_qm_direct(omega, g), name=f"phi_{omega}")


def edge_label(e) -> str:
    return words.multiply(words.inverse(e[0]), e[1])


def is_connected(edges) -> bool:
    return all(edges[i][1] == edges[i + 1][0] for i in range(len(edges) - 1))


def _windows(ell: int) -> Callable:
    # on a path with distinct vertices the connected fragments are the runs of consecutive edges
    return lambda p: [tuple(range(i, i + ell)) for i in range(len(p) - ell)]


def tree_pair(ell: int, alphabet: words.Alphabet = words.F2, R: int = 1) -> CoherentPair:
    """Tree geodesics with identity correspondences and left translation."""
    family = PathFamily(lambda x, y: [words.tree_geodesic(x, y)], R=R, name=f"tree-F{alphabet.rank}",
                        adjacent=lambda u, v: len(edge_label((u, v))) == 1, length=words.distance)
    return CoherentPair(family, FragmentCorrespondence(ell), ell, GraphAction.left_translation(alphabet))


def brooks_weight(omega: str, alphabet: words.Alphabet = words.F2) -> tuple:
    """The |omega|-weight chi_omega(lambda(e1)...lambda(el)) on connected tuples.

    Returns ``(W, pair)``; the pair declares R = 1, so the defect bound of
    the weight quasimorphism is 6(|omega| - 1).
    """
    omega = _check_omega(omega, alphabet)
    ell = len(omega)

    def W(edges):
        if not is_connected(edges):
            return 0
        g = ""
        for e in edges:
            g = words.multiply(g, edge_label(e))
        return chi(omega, g)

    c = ell - 1 if ell >= 2 else 2
    weight = WeightMap(ell, W, norm=1, c=c, name=f"brooks[{omega}]", candidates=_windows(ell))
    return weight, tree_pair(ell, alphabet)


# Δ-decompositions ----------------------------------------------------------


class DeltaAxiomError(VerificationError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def inverse_seq(s: tuple) -> tuple:
    return tuple(words.inverse(p) for p in reversed(s))


def common_sequence(s: tuple, t: tuple) -> tuple:
    r = 0
    while r < min(len(s), len(t)) and s[r] == t[r]:
        r += 1
    return s[:r]


@dataclass(frozen=True)
class DeltaDecomposition:
    name: str
    is_piece: Callable
    split: Callable
    declared_R: int | None = None
    candidate: bool = False

    def __call__(self, g: str) -> tuple:
        return _delta_cached(self, g)

    def __hash__(self):
        return hash(self.name)

    @classmethod
    def letters(cls) -> "DeltaDecomposition":
        return cls("letters", lambda w: len(w) == 1, tuple, declared_R=0)

    @classmethod
    def syllables(cls) -> "DeltaDecomposition":
        """Maximal powers of single generators. Validity of the triangle condition is only checked empirically."""
        def is_piece(w):
            return len(w) >= 1 and len(set(w)) == 1

        def split(g):
            out = []
            for ch in g:
                if out and out[-1][0] == ch:
                    out[-1] += ch
                else:
                    out.append(ch)
            return tuple(out)

        return cls("syllables", is_piece, split, candidate=True)

    @classmethod
    def broken(cls) -> "DeltaDecomposition":
        """Letters, except that words of length two stay whole. Breaks sub-product closure."""
        return cls("broken", lambda w: 1 <= len(w) <= 2,
                   lambda g: (g,) if len(g) == 2 else tuple(g))


@lru_cache(maxsize=MEMO_SIZE)
def _delta_cached(delta: DeltaDecomposition, g: str) -> tuple:
    return tuple(delta.split(words.free_reduce(g)))


@dataclass(frozen=True)
class DeltaTriangle:
    c1: tuple
    c2: tuple
    c3: tuple
    r1: tuple
    r2: tuple
    r3: tuple

    @property
    def r_lengths(self) -> tuple:
        return (len(self.r1), len(self.r2), len(self.r3))


def delta_triangle(delta: DeltaDecomposition, g: str, h: str) -> DeltaTriangle:
    gh = words.multiply(g, h)
    dg, dh, dgh = delta(g), delta(h), delta(gh)
    c1 = inverse_seq(common_sequence(dg, dgh))
    c2 = inverse_seq(common_sequence(delta(words.inverse(g)), dh))
    c3 = inverse_seq(common_sequence(delta(words.inverse(h)), delta(words.inverse(gh))))

    def middle(seq, front, back, label):
        # seq = front . r . back
        if len(front) + len(back) > len(seq) or seq[:len(front)] != front \
                or seq[len(seq) - len(back):] != back:
            raise DeltaAxiomError(f"c-parts do not fit inside Delta({label})", {"g": g, "h": h})
        return seq[len(front):len(seq) - len(back)]

    r1 = middle(dg, inverse_seq(c1), c2, "g")
    r2 = middle(dh, inverse_seq(c2), c3, "h")
    r3 = inverse_seq(middle(dgh, inverse_seq(c1), c3, "gh"))
    return DeltaTriangle(c1, c2, c3, r1, r2, r3)


def _axiom_problems(delta: DeltaDecomposition, g: str) -> list:
    d = delta(g)
    out = []
    if "".join(d) != g or any(not p or not words.is_reduced(p) or not delta.is_piece(p) for p in d):
        out.append("concatenation")
    if delta(words.inverse(g)) != inverse_seq(d):
        out.append("inversion")
    for i in range(len(d)):
        for j in range(i, len(d)):
            if delta("".join(d[i:j + 1])) != d[i:j + 1]:
                out.append("sub-products")
                return out
    return out


def verify_delta_axioms(delta: DeltaDecomposition, ball: Iterable) -> Report:
    """Concatenation, inversion and sub-product axioms on the ball, and the triangle condition on all pairs.

    The largest r-length seen is reported as the empirical R.
    """
    ball = list(ball)
    report = Report(f"Delta-decomposition {delta.name}")
    bad = {}
    for g in ball:
        for prob in _axiom_problems(delta, g):
            bad.setdefault(prob, {"g": words.format_word(g), "Delta": list(delta(g))})
    R = 0
    for g in ball:
        for h in ball:
            try:
                t = delta_triangle(delta, g, h)
            except DeltaAxiomError:
                bad.setdefault("triangle", {"g": words.format_word(g), "h": words.format_word(h)})
                continue
            R = max(R, *t.r_lengths)
    report.add("concatenation", "concatenation" not in bad, bad.get("concatenation"))
    report.add("inversion", "inversion" not in bad, bad.get("inversion"))
    report.add("sub-products", "sub-products" not in bad, bad.get("sub-products"))
    report.add("triangle", "triangle" not in bad, bad.get("triangle"), empirical_R=R)
    if delta.declared_R is not None:
        report.add("declared-R", R <= delta.declared_R, None, declared_R=delta.declared_R, empirical_R=R)
    report.info.update(empirical_R=R, words=len(ball), candidate=delta.candidate)
    return report


def delta_path(delta: DeltaDecomposition, x: str, y: str) -> tuple:
    out = [x]
    for piece in delta(words.multiply(words.inverse(x), y)):
        out.append(words.multiply(out[-1], piece))
    return tuple(out)


def delta_path_family(delta: DeltaDecomposition, R: int | None = None) -> PathFamily:
    """Singleton families P(x, y) = {p_xy}; Δ-triangles give the quasi-median witnesses."""
    cayley = PieceCayleyGraph(delta.is_piece, name=f"Cayl(F, {delta.name})")

    def provider(x, y):
        p = delta_path(delta, x, y)
        if len(p) > 1 and not all(cayley.has_edge(u, v) for u, v in zip(p, p[1:])):
            raise DeltaAxiomError("Delta produced a non-piece", {"x": x, "y": y})
        return [p]

    def witness(x, y, z):
        t = delta_triangle(delta, words.multiply(words.inverse(x), y), words.multiply(words.inverse(y), z))
        pxy, pyz, pxz = fam.first(x, y), fam.first(y, z), fam.first(x, z)
        i, j, k = len(t.c1), len(t.c2), len(t.c3)
        return QmpWitness((x, y, z), (pxy[i], pyz[j], pxz[len(pxz) - 1 - k]),
                          pxy[: i + 1], pyz[: j + 1], pxz[::-1][: k + 1],
                          pxy[i:len(pxy) - j], pyz[j:len(pyz) - k], pxz[i:len(pxz) - k],
                          pxy, pyz, pxz)

    declared = delta.declared_R if R is None else R
    fam = PathFamily(provider, R=declared if declared is not None else 0, name=cayley.name,
                     adjacent=cayley.has_edge, length=lambda x, y: len(delta(words.multiply(words.inverse(x), y))),
                     witness=witness)
    return fam


class PieceWeight:
    """An alternating map on pieces; unlisted pieces get 0."""

    def __init__(self, values: dict, norm: float | None = None):
        table = {}
        for piece, v in values.items():
            piece = words.free_reduce(piece)
            if not piece:
                raise words.WordError("pieces exclude the neutral element")
            for key, val in ((piece, v), (words.inverse(piece), -v)):
                if key in table and table[key] != val:
                    raise ValueError(f"lambda is not alternating at {key!r}")
                table[key] = val
        self.values = table
        top = max((abs(v) for v in table.values()), default=0)
        if norm is not None and top > norm:
            raise ValueError(f"lambda exceeds its bound {norm}")
        self.norm = top if norm is None else norm

    def __call__(self, piece: str):
        return self.values.get(piece, 0)

    @classmethod
    def from_json(cls, text) -> "PieceWeight":
        data = json.loads(text) if isinstance(text, (str, bytes)) else text
        return cls({k: v for k, v in data.items()})


def delta_weight(lam: PieceWeight, delta: DeltaDecomposition) -> tuple:
    """The 1-weight W(e) = lambda(alpha^-1 omega) with its singleton coherent pair."""
    family = delta_path_family(delta)
    pair = CoherentPair(family, FragmentCorrespondence(1), 1, GraphAction.left_translation(words.F2))
    W = WeightMap(1, lambda edges: lam(edge_label(edges[0])), norm=lam.norm, c=2,
                  name=f"lambda[{delta.name}]")
    return W, pair


def delta_qm(lam: PieceWeight, delta: DeltaDecomposition) -> tuple:
    """(phi, f): phi(g) = sum of lambda over Δ(g), and f the matching weight quasimorphism."""
    W, pair = delta_weight(lam, delta)
    phi = GroupQuasimorphism(lambda g: sum(lam(p) for p in delta(g)), name=f"phi[{delta.name}]")
    f: ActionQuasimorphism = weight_qm(W, pair)
    return phi, f


DECOMPOSITIONS = {
    "letters": DeltaDecomposition.letters,
    "syllables": DeltaDecomposition.syllables,
    "broken": DeltaDecomposition.broken,
}
