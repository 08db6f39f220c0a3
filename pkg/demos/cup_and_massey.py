# Bounded primitives for cup products with delta f_W, and a Massey product witness.
from weightqm import words
from weightqm.brooks_delta import brooks_qm, brooks_weight
from weightqm.cochain import coboundary, hat, random_tuples
from weightqm.vanishing import cup_primitive_left, cup_primitive_right, massey_witness

B3 = words.F2.ball(3)
W, pair = brooks_weight("ab")


def dhat(omega):
    return coboundary(hat(brooks_qm(omega))).memoized()


z1, z2 = dhat("aab"), dhat("bba")

# delta(beta) = delta(f_W) u zeta on random 5-tuples, beta itself sampled on 4-tuples
tuples = random_tuples(B3, 5, 2000, seed=1)
for side in (cup_primitive_left, cup_primitive_right):
    cert = side(W, pair, z1, tuples, zeta_norm=1, seed=1)
    print(cert.side, "residual", cert.residual, "|beta|", cert.beta_norm, "bound", cert.bound)

# the Massey witness needs (n+m+2)-tuples
cert = massey_witness(W, pair, z1, z2, random_tuples(B3, 6, 1000, seed=2), zeta_norms=(1, 1), seed=2)
print(cert.to_json())
