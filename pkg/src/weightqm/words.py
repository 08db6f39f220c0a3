"""Free groups of finite rank as reduced words.

Elements are stored as plain strings over a case-encoded alphabet: the
generators are ``a, b, c, ...`` and their inverses ``A, B, C, ...``. The
empty string is the neutral element. Strings hash fast and slice cheaply,
which is what the exhaustive ball sweeps need.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

DEFAULT_BALL_CAP = 8
IDENTITY = ""


class WordError(ValueError):
    """Raised on symbols outside the alphabet."""


class ResourceError(RuntimeError):
    """Raised when a requested enumeration exceeds its configured cap."""


@dataclass(frozen=True)
class Alphabet:
    rank: int
    ball_cap: int = DEFAULT_BALL_CAP
    letters: tuple = field(init=False)

    def __post_init__(self):
        if not 1 <= self.rank <= 26:
            raise ValueError(f"rank must lie in 1..26, got {self.rank}")
        gens = string.ascii_lowercase[: self.rank]
        letters = []
        for g in gens:
            letters.extend([g, g.upper()])
        object.__setattr__(self, "letters", tuple(letters))

    @property
    def generators(self) -> tuple:
        return self.letters[::2]

    def order(self, letter: str) -> int:
        return self.letters.index(letter)

    def check(self, raw: str) -> None:
        for ch in raw:
            if ch not in self.letters:
                raise WordError(f"unknown symbol {ch!r} for rank {self.rank}")

    # group law ---------------------------------------------------------

    def reduce(self, raw: str | Iterable[str]) -> str:
        raw = "".join(raw)
        self.check(raw)
        return free_reduce(raw)

    def multiply(self, u: str, v: str) -> str:
        return multiply(u, v)

    def inverse(self, u: str) -> str:
        return inverse(u)

    def ball(self, r: int) -> list:
        """All reduced words of length <= r, by length then letter order."""
        if r < 0:
            raise ValueError("radius must be non-negative")
        if r > self.ball_cap:
            raise ResourceError(f"radius {r} exceeds the configured cap {self.ball_cap}")
        return list(_ball(self.rank, r))

    def sphere(self, r: int) -> list:
        return [w for w in self.ball(r) if len(w) == r]


F1 = Alphabet(1)
F2 = Alphabet(2)


def inv_letter(ch: str) -> str:
    return ch.swapcase()


def inverse(u: str) -> str:
    return u[::-1].swapcase()


def is_reduced(u: str) -> bool:
    return all(u[i] != u[i + 1].swapcase() for i in range(len(u) - 1))


def free_reduce(raw: str) -> str:
    stack = []
    for ch in raw:
        if stack and stack[-1] == ch.swapcase():
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


@lru_cache(maxsize=1 << 20)
def multiply(u: str, v: str) -> str:
    # cancel the longest suffix of u against the matching prefix of v
    k = 0
    n = min(len(u), len(v))
    while k < n and u[len(u) - 1 - k] == v[k].swapcase():
        k += 1
    return u[: len(u) - k] + v[k:]


def common_prefix(u: str, v: str) -> str:
    k = 0
    n = min(len(u), len(v))
    while k < n and u[k] == v[k]:
        k += 1
    return u[:k]


def distance(x: str, y: str) -> int:
    return len(x) + len(y) - 2 * len(common_prefix(x, y))


def tree_geodesic(x: str, y: str) -> tuple:
    """The unique path from x to y in the Cayley tree.

    Vertices are the partial products x, x*t1, x*t1*t2, ... of the reduced
    word x^-1 y, which amounts to walking back to the common prefix of x and
    y and then out to y.
    """
    c = len(common_prefix(x, y))
    down = [x[:k] for k in range(len(x), c - 1, -1)]
    up = [y[:k] for k in range(c + 1, len(y) + 1)]
    return tuple(down + up)


@lru_cache(maxsize=None)
def _ball(rank: int, r: int) -> tuple:
    letters = Alphabet(rank, ball_cap=max(r, 0)).letters
    out = [""]
    frontier = [""]
    for _ in range(r):
        nxt = []
        for w in frontier:
            for ch in letters:
                if w and w[-1] == ch.swapcase():
                    continue
                nxt.append(w + ch)
        out.extend(nxt)
        frontier = nxt
    return tuple(out)


def format_word(u: str) -> str:
    """CLI rendering: the neutral element prints as ``e``."""
    return u if u else "e"


def parse_word(text: str, alphabet: Alphabet = F2) -> str:
    if text in ("e", ""):
        return ""
    return alphabet.reduce(text)
