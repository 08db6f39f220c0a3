# Delta-decompositions: which factorizations of F2 behave well enough to build quasimorphisms.
from weightqm import words
from weightqm.brooks_delta import DECOMPOSITIONS, PieceWeight, delta_qm, delta_triangle, verify_delta_axioms

B3 = words.F2.ball(3)

for name, make in DECOMPOSITIONS.items():
    delta = make()
    print(f"{name:>9}: aabbba ->", delta("aabbba"))
    rep = verify_delta_axioms(delta, B3)
    failed = [c.condition for c in rep.checks if not c.status]
    print(" " * 11, "PASS" if rep.passed else f"FAIL {failed}", "empirical R =", rep.info["empirical_R"])

# a triangle splits into three shared c-parts and a short middle
tri = delta_triangle(DECOMPOSITIONS["syllables"](), "aab", "Bab")
print(tri)

# the a-indicator on letters is the exponent sum, so it is a homomorphism
phi, f = delta_qm(PieceWeight({"a": 1}), DECOMPOSITIONS["letters"]())
print([phi(g) for g in ("a", "aab", "AbA", "bb")])

# syllable weights give a genuine quasimorphism
phi, f = delta_qm(PieceWeight({"aa": 1, "b": -0.5}), DECOMPOSITIONS["syllables"]())
print("defect on B3:", phi.defect_on((g, h) for g in B3 for h in B3))
