# Brooks counting quasimorphisms as weight quasimorphisms on the Cayley tree of F2.
import numpy as np

from weightqm import words
from weightqm.brooks_delta import brooks_qm, brooks_weight
from weightqm.weights import defect_on, weight_qm

# words are plain strings, capitals are inverses, "" is the identity
print(words.multiply("ab", "Ba"), words.inverse("abA"), repr(words.format_word("")))

B3 = words.F2.ball(3)
print("ball of radius 3 has", len(B3), "elements")

# phi_ab counts copies of ab minus copies of BA
phi = brooks_qm("ab")
for g in ("ab", "abab", "BA", "aBAb", "abBA"):
    print(f"phi_ab({g}) = {phi(words.free_reduce(g))}")

# the same numbers come out of the edge weight W on 2-fragments of geodesics
W, pair = brooks_weight("ab")
f = weight_qm(W, pair)
assert all(f("", g) == phi(g) for g in B3)

# exhaustive defect over B3 x B3 x B3 against the bound 3(R+1)c|W|
for omega in ("ab", "aab", "abab"):
    W, pair = brooks_weight(omega)
    f = weight_qm(W, pair)
    value, witness = defect_on(f, B3)
    print(f"{omega:>5}: defect {value}, bound {f.defect_bound}, witness {witness}")

# values of phi_ab on the sphere of radius 4, as a histogram
sphere = words.F2.sphere(4)
vals = np.array([phi(g) for g in sphere])
for v, n in zip(*np.unique(vals, return_counts=True)):
    print(f"phi = {v:+d}: {n} words")
