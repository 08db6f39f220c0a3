# Halfspaces, staircases and segment-counting quasimorphisms on small median graphs.
import itertools

import numpy as np

from weightqm import complexes as C
from weightqm.median import MedianComplex, TreeComplex, median_qm, median_weight
from weightqm.weights import weight_qm

grid = MedianComplex(C.grid(3, 3))
print("grid:3x3 has", len(grid.hyperplanes), "hyperplanes and", len(grid.masks), "halfspaces")

# the interval between opposite corners crosses every hyperplane once
print("|[x,y]| for opposite corners:", len(grid.interval((0, 0), (2, 2))))

# staircase length grows with the number of notches
for spec in ("grid:4x4", "staircase:1", "staircase:2", "staircase:3"):
    rep = MedianComplex(C.build(spec)).staircase_length()
    print(f"{spec:>12}: staircase length {rep.length}")

# f_s counts translates of a segment in the interval, minus translates of its reverse
s = grid.segments(2)[0]
f = median_qm(grid, s)
V = grid.graph.vertices
M = np.array([[f(x, y) for y in V] for x in V])
print("segment", s, "antisymmetric:", bool((M == -M.T).all()))
print(M)

# the weight built from s gives the same function
fw = weight_qm(*median_weight(grid, s))
assert all(fw(x, y) == f(x, y) for x, y in itertools.product(V, repeat=2))

# on the Cayley tree of F2 the segment of e -> ab recovers phi_ab
tree = TreeComplex()
ft = median_qm(tree, tree.segment_from_word("ab"))
print([ft("", g) for g in ("ab", "abab", "BA", "aab", "abBA")])
