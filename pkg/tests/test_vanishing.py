import itertools

import pytest

from weightqm import words
from weightqm.brooks_delta import brooks_qm, brooks_weight
from weightqm.cochain import Cochain, coboundary, constant, cup, exponent_sum, hat, one, random_tuples, zero
from weightqm import complexes as C
from weightqm.median import MedianComplex, median_weight
from weightqm.vanishing import (
    PreconditionError,
    cup_primitive_left,
    cup_primitive_right,
    eta,
    kappa,
    kappa_coboundary_identity,
    massey_witness,
    nu,
    phi_stability_check,
    weight_cochain,
    zeta_tilde,
)
from weightqm.graph import reverse_edges

import oracles

B2, B3 = words.F2.ball(2), words.F2.ball(3)
W, PAIR = brooks_weight("ab")


def dhat(omega):
    return coboundary(hat(brooks_qm(omega))).memoized()


Z1, Z2 = dhat("aab"), dhat("bba")


def zt_oracle(omega):
    z = oracles.delta_hat_brooks(omega)
    return lambda head, tail, *xs: (z(head, *xs) + z(tail, *xs)) / 2


def test_zeta_tilde_constant_and_symmetric():
    zc = zeta_tilde(constant(2, 3))
    a = (("", "a"), ("a", "ab"))
    assert zc(a, "b", "bb") == 3
    zt = zeta_tilde(Z1)
    for t in random_tuples(B3, 4, 300, seed=2):
        p = words.tree_geodesic(t[0], t[1])
        if len(p) < 3:
            continue
        a = ((p[0], p[1]), (p[1], p[2]))
        assert zt(a, t[2], t[3]) == zt(reverse_edges(a), t[2], t[3])
        assert abs(zt(a, t[2], t[3])) <= 1


def test_zeta_tilde_hand_example():
    # zeta = d(indicator of e): zeta(x, y) = [y = e] - [x = e]; fragment (e -> a)
    ind = Cochain(0, lambda x: 1 if x == "" else 0)
    zt = zeta_tilde(coboundary(ind))
    a = (("", "a"),)
    assert zt(a, "") == 0.5
    assert zt(a, "b") == -0.5


def test_eta_trivial_cases():
    assert eta(W, PAIR, zero(2))("", "ab", "b") == 0
    assert eta(W, PAIR, Z1)("ab", "ab", "b") == 0
    ex = coboundary(hat(exponent_sum("a")))
    assert all(eta(W, PAIR, ex)(*t) == 0 for t in random_tuples(B3, 3, 200))


def test_eta_nu_kappa_match_resummation():
    e, n, k = eta(W, PAIR, Z1), nu(W, PAIR, Z1), kappa(W, PAIR, Z1, Z2)
    z1, z2 = zt_oracle("aab"), zt_oracle("bba")
    for x in random_tuples(B3, 4, 400, seed=9):
        x0, x1, x2 = x[:3]
        exp_eta = oracles.brooks_fragment_sum("ab", oracles.geodesic(x0, x1), lambda h, t: z1(h, t, x1, x2))
        exp_nu = oracles.brooks_fragment_sum("ab", oracles.geodesic(x1, x2), lambda h, t: z1(h, t, x0, x1))
        exp_k = oracles.brooks_fragment_sum(
            "ab", oracles.geodesic(x[1], x[2]),
            lambda h, t: z1(h, t, x[0], x[1]) * z2(h, t, x[2], x[3]))
        assert e(x0, x1, x2) == exp_eta
        assert n(x0, x1, x2) == exp_nu
        assert k(*x) == exp_k


def test_specific_eta_value():
    # frozen from the re-summation oracle above
    z1 = zt_oracle("aab")
    x = ("", "abab", "aab")
    expected = oracles.brooks_fragment_sum("ab", oracles.geodesic(x[0], x[1]), lambda h, t: z1(h, t, x[1], x[2]))
    assert eta(W, PAIR, Z1)(*x) == expected == -0.5


def test_nu_and_kappa_degenerate():
    assert nu(W, PAIR, Z1)("a", "ab", "ab") == 0
    assert kappa(W, PAIR, Z1, Z2)("a", "b", "b", "ab") == 0
    assert kappa(W, PAIR, zero(2), Z2)("a", "b", "ab", "ab") == 0


def test_cup_left_zero():
    c = cup_primitive_left(W, PAIR, zero(2), random_tuples(B3, 5, 200), zeta_norm=0)
    assert c.passed and c.residual == 0 and c.beta_norm == 0


def test_cup_right_zero():
    c = cup_primitive_right(W, PAIR, zero(2), random_tuples(B3, 5, 200), zeta_norm=0)
    assert c.passed and c.beta_norm == 0


def test_cup_left_brooks_small():
    c = cup_primitive_left(W, PAIR, Z1, random_tuples(B3, 5, 1500, seed=3), zeta_norm=1, seed=3)
    assert c.passed, c.to_json()
    assert c.bound == 6 and 0 < c.beta_norm <= 6


def test_cup_right_brooks_small():
    c = cup_primitive_right(W, PAIR, Z1, random_tuples(B3, 5, 1500, seed=4), zeta_norm=1)
    assert c.passed, c.to_json()


def test_cup_degree_one():
    z = hat(exponent_sum("b"))  # a homomorphism, so a 1-cocycle
    for side in (cup_primitive_left, cup_primitive_right):
        c = side(W, PAIR, z, random_tuples(B3, 4, 500, seed=6))
        assert c.residual == 0 and c.triangle_residual == 0


def test_non_cocycle_fails():
    z = hat(brooks_qm("ab"))
    c = cup_primitive_left(W, PAIR, z, random_tuples(B3, 4, 500, seed=6))
    assert not c.passed and c.witness is not None


def test_cup_constant_zeta_triangle_form():
    c = cup_primitive_left(W, PAIR, constant(2, 2), random_tuples(B3, 5, 500))
    assert c.passed and c.triangle_residual == 0


def test_right_degree_zero_unit():
    c = cup_primitive_right(W, PAIR, one(), random_tuples(B3, 3, 500))
    assert c.residual == 0 and c.bound == float("inf")
    f = weight_cochain(W, PAIR)
    assert all(c.primitive(x, y) == f(x, y) for x, y in itertools.product(B2, B2))


def test_correction_term_matters():
    # f_W u zeta is also a primitive, but it is not the bounded triangle sum
    f = weight_cochain(W, PAIR)
    naive = cup(f, Z1)
    c = cup_primitive_left(W, PAIR, Z1, random_tuples(B3, 5, 2000, seed=1), zeta_norm=1)
    fronts = [t[:4] for t in random_tuples(B3, 5, 2000, seed=1)]
    assert any(naive(*t) != c.primitive(*t) for t in fronts)


def test_certificate_json():
    c = cup_primitive_left(W, PAIR, Z1, random_tuples(B3, 5, 50, seed=8), zeta_norm=1, seed=8)
    d = c.to_dict()
    assert d["status"] == "PASS" and d["seed"] == 8 and d["bound_formula"].startswith("3(R+1)")
    assert '"samples": 50' in c.to_json()


def test_kappa_identity_trivial():
    parts_zero = kappa_coboundary_identity(W, PAIR, zero(2), zero(2), ("", "a", "b", "ab", "ba"))
    assert parts_zero == 0
    assert kappa_coboundary_identity(W, PAIR, Z1, Z2, ("ab",) * 5) == 0


def test_massey_small():
    c = massey_witness(W, PAIR, Z1, Z2, random_tuples(B3, 6, 800, seed=12), zeta_norms=(1, 1), seed=12)
    assert c.passed, c.to_json()
    assert c.bound == 6


def test_massey_swapped():
    c = massey_witness(W, PAIR, Z2, Z1, random_tuples(B3, 6, 500, seed=13))
    assert c.passed, c.to_json()


def test_massey_zero():
    c = massey_witness(W, PAIR, zero(2), Z2, random_tuples(B3, 6, 100))
    assert c.passed and c.beta_norm == 0


def test_massey_mixed_degrees():
    z = hat(exponent_sum("a"))
    c = massey_witness(W, PAIR, z, Z2, random_tuples(B3, 5, 300, seed=14))
    assert c.residual == 0 and c.kappa_residual == 0 and c.leibniz_residual == 0


def test_stability_on_tree_is_vacuous():
    ok, _ = phi_stability_check(Z1, PAIR, W, [(x, y, (x, y)) for x in B2 for y in B2])
    assert ok


def test_stability_on_grid():
    cx = MedianComplex(C.grid(3, 3))
    s = cx.segments(1)[0]
    Wm, pair = median_weight(cx, s)
    vs = cx.graph.vertices
    samples = [(x, y, (z,)) for x in vs for y in vs for z in vs[:3]]
    assert phi_stability_check(constant(1, 4), pair, Wm, samples)[0]
    # column coordinate: constant along the heads of a vertical hyperplane, not along a horizontal one
    col = Cochain(1, lambda v, z: v[0])
    row = Cochain(1, lambda v, z: v[1])
    oks = {phi_stability_check(col, pair, Wm, samples)[0], phi_stability_check(row, pair, Wm, samples)[0]}
    assert oks == {True, False}


def test_unstable_zeta_raises_precondition():
    cx = MedianComplex(C.grid(2, 2))
    s = cx.segments(1)[0]
    Wm, pair = median_weight(cx, s)
    vs = cx.graph.vertices
    z = Cochain(2, lambda v, y, w: v[0] + 2 * v[1])
    with pytest.raises(PreconditionError):
        cup_primitive_left(Wm, pair, z, [], stability_samples=[(x, y, (x, y)) for x in vs for y in vs])
