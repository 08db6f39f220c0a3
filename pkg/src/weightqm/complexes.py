"""Built-in finite graphs: trees, grids, cubes, cycles and staircase complexes.

Spec strings (as used on the command line): ``path:n``, ``star:n``,
``bintree:d``, ``grid:mxn``, ``cube:d``, ``cycle:n``, ``staircase:k``.
Grids and staircases use integer coordinate vertices ``(x, y)``.
"""
from __future__ import annotations

import itertools

from .graph import Graph, GraphError


def path_graph(n: int) -> Graph:
    """n edges, vertices 0..n."""
    return Graph(range(n + 1), [(i, i + 1) for i in range(n)], name=f"path:{n}")


def star(n: int) -> Graph:
    return Graph(range(n + 1), [(0, i) for i in range(1, n + 1)], name=f"star:{n}")


def binary_tree(depth: int) -> Graph:
    n = 2 ** (depth + 1) - 1
    return Graph(range(n), [((i - 1) // 2, i) for i in range(1, n)], name=f"bintree:{depth}")


def cycle(n: int) -> Graph:
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)], name=f"cycle:{n}")


def complete(n: int) -> Graph:
    return Graph(range(n), itertools.combinations(range(n), 2), name=f"complete:{n}")


def cells_complex(cells, name: str) -> Graph:
    """1-skeleton of a union of unit squares with lower-left corners ``cells``."""
    verts = set()
    edges = set()
    for i, j in cells:
        corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
        verts.update(corners)
        for a, b in zip(corners, corners[1:] + corners[:1]):
            edges.add(tuple(sorted((a, b))))
    return Graph(sorted(verts), sorted(edges), name=name)


def grid(m: int, n: int) -> Graph:
    """m x n vertices: the product of a path with m-1 edges and one with n-1 edges."""
    verts = [(x, y) for x in range(m) for y in range(n)]
    edges = [((x, y), (x + 1, y)) for x in range(m - 1) for y in range(n)]
    edges += [((x, y), (x, y + 1)) for x in range(m) for y in range(n - 1)]
    return Graph(verts, edges, name=f"grid:{m}x{n}")


def cube(d: int) -> Graph:
    verts = list(itertools.product((0, 1), repeat=d))
    edges = [(v, v[:i] + (1,) + v[i + 1:]) for v in verts for i in range(d) if v[i] == 0]
    return Graph(verts, edges, name=f"cube:{d}")


def staircase(k: int) -> Graph:
    """Triangular Young diagram of unit squares (i, j) with i + j <= k.

    Its boundary climbs in k notches. Vertical halfspaces cut off at one
    notch nest inside each other and are transverse to the horizontal
    halfspaces of the notches below, so the staircase length is k.
    """
    if k < 0:
        raise GraphError("staircase needs a non-negative number of steps")
    cells = [(i, j) for i in range(k + 1) for j in range(k + 1) if i + j <= k]
    return cells_complex(cells, name=f"staircase:{k}")


_BUILDERS = {
    "path": lambda a: path_graph(int(a)),
    "star": lambda a: star(int(a)),
    "bintree": lambda a: binary_tree(int(a)),
    "cycle": lambda a: cycle(int(a)),
    "complete": lambda a: complete(int(a)),
    "cube": lambda a: cube(int(a)),
    "staircase": lambda a: staircase(int(a)),
    "grid": lambda a: grid(*map(int, a.lower().split("x"))),
}


def build(spec: str) -> Graph:
    kind, _, arg = spec.partition(":")
    if kind not in _BUILDERS or not arg:
        raise GraphError(f"unknown complex spec {spec!r}; expected one of {sorted(_BUILDERS)} as kind:arg")
    return _BUILDERS[kind](arg)


BUILTIN_MEDIAN = ("path:4", "star:4", "bintree:2", "grid:3x3", "grid:4x4", "cube:3",
                  "staircase:2", "staircase:3")
