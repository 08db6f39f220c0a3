"""Invariant cochains as evaluators: coboundary, cup product, hats and pullbacks.

A degree-n cochain is a function of n + 1 vertices. Nothing is tabulated;
constructors build new evaluators out of old ones, so invariance is
inherited from the ingredients.
"""
from __future__ import annotations

import json
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from . import words

MEMO_SIZE = 1 << 20


class Cochain:
    def __init__(self, degree: int, fn: Callable, name: str = "f",
                 invariance: str = "by-construction", norm: float | None = None,
                 exact_norm: bool = False):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.degree = degree
        self.fn = fn
        self.name = name
        self.invariance = invariance
        self.norm = norm
        self.exact_norm = exact_norm

    def __repr__(self):
        return f"Cochain({self.name!r}, degree={self.degree})"

    def __call__(self, *xs):
        if len(xs) != self.degree + 1:
            raise TypeError(f"{self.name} takes {self.degree + 1} vertices, got {len(xs)}")
        v = self.fn(*xs)
        if self.exact_norm and self.norm is not None and abs(v) > self.norm:
            raise ValueError(f"|{self.name}{xs!r}| = {abs(v)} exceeds its declared norm {self.norm}")
        return v

    def memoized(self, maxsize: int = MEMO_SIZE) -> "Cochain":
        return Cochain(self.degree, lru_cache(maxsize=maxsize)(self.fn), self.name,
                       self.invariance, self.norm, self.exact_norm)

    def _same_degree(self, other):
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same_degree(other)
        f, g = self.fn, other.fn
        return Cochain(self.degree, lambda *xs: f(*xs) + g(*xs), f"({self.name} + {other.name})",
                       _join(self, other))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same_degree(other)
        f, g = self.fn, other.fn
        return Cochain(self.degree, lambda *xs: f(*xs) - g(*xs), f"({self.name} - {other.name})",
                       _join(self, other))

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def scale(self, c) -> "Cochain":
        f = self.fn
        norm = None if self.norm is None else abs(c) * self.norm
        return Cochain(self.degree, lambda *xs: c * f(*xs), f"{c}*{self.name}", self.invariance, norm,
                       self.exact_norm)

    __rmul__ = scale


def _join(*fs) -> str:
    return "by-construction" if all(f.invariance == "by-construction" for f in fs) else "sampled"


def constant(degree: int, c) -> Cochain:
    return Cochain(degree, lambda *xs: c, name=str(c), norm=abs(c), exact_norm=True)


def zero(degree: int) -> Cochain:
    return constant(degree, 0)


def one() -> Cochain:
    """The constant 1 in degree 0, the unit for the cup product."""
    return constant(0, 1)


def coboundary(f: Cochain) -> Cochain:
    fn, n = f.fn, f.degree

    def df(*xs):
        total = 0
        for i in range(n + 2):
            v = fn(*(xs[:i] + xs[i + 1:]))
            total += v if i % 2 == 0 else -v
        return total

    return Cochain(n + 1, df, name=f"d{f.name}", invariance=f.invariance)


def cup(f: Cochain, g: Cochain) -> Cochain:
    p, q = f.degree, g.degree
    ff, gf = f.fn, g.fn

    def fg(*xs):
        a = ff(*xs[: p + 1])
        if a == 0:
            return 0
        return a * gf(*xs[p:])

    norm = f.norm * g.norm if f.norm is not None and g.norm is not None else None
    return Cochain(p + q, fg, name=f"({f.name} u {g.name})", invariance=_join(f, g), norm=norm)


class GroupQuasimorphism:
    """A real function on the free group, memoized, with optional defect metadata."""

    def __init__(self, fn: Callable, name: str = "phi", defect: float | None = None):
        self.fn = fn
        self.name = name
        self.defect = defect
        self._cached = lru_cache(maxsize=MEMO_SIZE)(fn)

    def __repr__(self):
        return f"GroupQuasimorphism({self.name!r})"

    def __call__(self, g):
        return self._cached(g)

    def defect_on(self, pairs: Iterable) -> float:
        best = 0
        for g, h in pairs:
            best = max(best, abs(self(g) + self(h) - self(words.multiply(g, h))))
        return best


def hat(phi: Callable, name: str | None = None) -> Cochain:
    """(g, h) -> phi(g^-1 h), invariant under left translation by construction."""
    return Cochain(1, lambda g, h: phi(words.multiply(words.inverse(g), h)),
                   name=name or f"hat({getattr(phi, 'name', 'phi')})")


def exponent_sum(letter: str) -> GroupQuasimorphism:
    inv = letter.swapcase()
    return GroupQuasimorphism(lambda g: g.count(letter) - g.count(inv), name=f"exp_{letter}", defect=0)


def orbit_pullback(f: Cochain, s, act: Callable) -> Cochain:
    """(g0, ..., gn) -> f(g0.s, ..., gn.s)."""
    fn = f.fn
    return Cochain(f.degree, lambda *gs: fn(*(act(g, s) for g in gs)),
                   name=f"o_{words.format_word(s) if isinstance(s, str) else s}({f.name})",
                   invariance=f.invariance)


def left_multiply(g: str, v: str) -> str:
    return words.multiply(g, v)


def sup_norm_sampled(f: Callable, tuples: Iterable) -> float:
    best = 0
    for t in tuples:
        best = max(best, abs(f(*t)))
    return best


def check_invariance(f: Callable, tuples: Iterable, generators: dict) -> tuple | None:
    """First (generator, tuple) where f(g.x) != f(x), or None."""
    for t in tuples:
        v = f(*t)
        for name, g in generators.items():
            if f(*(g(x) for x in t)) != v:
                return name, t
    return None


def random_tuples(vertices, size: int, count: int, seed: int = 0) -> list:
    """``count`` tuples of ``size`` vertices drawn uniformly with numpy's default generator."""
    vs = list(vertices)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(vs), size=(count, size))
    return [tuple(vs[i] for i in row) for row in idx]


def table_cochain(rows, degree: int | None = None, name: str = "table") -> Cochain:
    """Extend a finite table on free-group tuples by left invariance.

    Each row is ``[[w0, ..., wn], value]``; rows are normalized so that the
    first entry is the neutral element. Tuples outside the table evaluate to
    0, so the result is flagged partial.
    """
    if isinstance(rows, (str, bytes)):
        rows = json.loads(rows)
    table = {}
    for key, value in rows:
        key = tuple(words.parse_word(w, words.Alphabet(26)) for w in key)
        if degree is None:
            degree = len(key) - 1
        if len(key) != degree + 1:
            raise ValueError(f"row {key!r} does not have {degree + 1} entries")
        g = words.inverse(key[0])
        norm_key = tuple(words.multiply(g, w) for w in key)
        if norm_key in table and table[norm_key] != value:
            raise ValueError(f"rows conflict after normalization at {norm_key!r}")
        table[norm_key] = value

    def f(*xs):
        g = words.inverse(xs[0])
        return table.get(tuple(words.multiply(g, x) for x in xs), 0)

    norm = max((abs(v) for v in table.values()), default=0)
    return Cochain(degree, f, name=name, invariance="partial", norm=norm, exact_norm=True)
