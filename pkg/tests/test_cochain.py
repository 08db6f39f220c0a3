import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from weightqm import brooks_delta as B
from weightqm import words
from weightqm.cochain import (
    Cochain,
    GroupQuasimorphism,
    check_invariance,
    coboundary,
    constant,
    cup,
    exponent_sum,
    hat,
    one,
    orbit_pullback,
    random_tuples,
    sup_norm_sampled,
    table_cochain,
    zero,
)
from weightqm.weights import weight_qm

import oracles

B2 = words.F2.ball(2)
B3 = words.F2.ball(3)
vertex = st.sampled_from(B3)
TRANSLATIONS = {ch: (lambda v, ch=ch: words.multiply(ch, v)) for ch in "aAbB"}


def brooks_hat(omega):
    return hat(B.brooks_qm(omega))


def real_cochain(degree, seed):
    # invariant: depends only on the normalized tuple x0^-1 xi
    def f(*xs):
        g = words.inverse(xs[0])
        h = hash(tuple(words.multiply(g, x) for x in xs) + (seed,))
        return math.sin(h % 10007) * 3.7
    return Cochain(degree, f, name=f"r{seed}")


def test_degree_check():
    with pytest.raises(TypeError):
        zero(1)("a")
    with pytest.raises(ValueError):
        Cochain(-1, lambda: 0)


def test_coboundary_of_constant_zero_cochain():
    d = coboundary(constant(0, 5))
    assert all(d(x, y) == 0 for x in B2 for y in B2)


def test_coboundary_of_constant_one_cochain():
    d = coboundary(constant(1, 2))
    assert d("", "a", "b") == 2


@settings(max_examples=200, deadline=None)
@given(st.tuples(*[vertex] * 4))
def test_dd_zero_on_hat(t):
    dd = coboundary(coboundary(brooks_hat("ab")))
    assert dd(*t) == 0


def test_dd_zero_sampled():
    f = real_cochain(1, 3)
    dd = coboundary(coboundary(f))
    assert max(abs(dd(*t)) for t in random_tuples(B3, 4, 2000, seed=1)) <= 1e-9


def test_cup_with_zero_and_unit():
    g = brooks_hat("aab")
    assert all(cup(g, zero(1))(*t) == 0 for t in random_tuples(B3, 3, 200))
    u = cup(one(), g)
    assert all(u(*t) == g(*t) for t in random_tuples(B3, 2, 200))


def test_cup_is_front_back():
    f, g = brooks_hat("ab"), brooks_hat("aab")
    fg = cup(f, g)
    x = ("", "ab", "abaab")
    assert fg(*x) == f(x[0], x[1]) * g(x[1], x[2]) == 1 * 1


@pytest.mark.parametrize("p, q", [(1, 1), (1, 2), (2, 1)])
def test_leibniz_integer(p, q):
    f = coboundary(brooks_hat("ab")) if p == 2 else brooks_hat("ab")
    g = coboundary(brooks_hat("bA")) if q == 2 else brooks_hat("bA")
    sign = -1 if p % 2 else 1
    lhs = coboundary(cup(f, g))
    rhs = cup(coboundary(f), g) + cup(f, coboundary(g)).scale(sign)
    assert all(lhs(*t) == rhs(*t) for t in random_tuples(B3, p + q + 2, 1000, seed=p * 10 + q))


def test_leibniz_real():
    f, g = real_cochain(1, 1), real_cochain(2, 2)
    lhs = coboundary(cup(f, g))
    rhs = cup(coboundary(f), g) - cup(f, coboundary(g))
    assert max(abs(lhs(*t) - rhs(*t)) for t in random_tuples(B3, 5, 1000, seed=5)) <= 1e-9


def test_hat_basics():
    phi = B.brooks_qm("ab")
    h = hat(phi)
    for g in B3:
        assert h("", g) == phi(g) == oracles.brooks("ab", g)
    assert check_invariance(h, random_tuples(B3, 2, 300), TRANSLATIONS) is None


def test_hat_exponent_sum_is_cocycle():
    d = coboundary(hat(exponent_sum("a")))
    assert all(d(*t) == 0 for t in itertools.product(B3, repeat=3))


def test_invariance_check_finds_violation():
    bad = Cochain(1, lambda x, y: len(y))
    assert check_invariance(bad, [("", "b")], TRANSLATIONS) is not None


def test_brooks_hat_coboundary_norm():
    # derived oracle: exhaustive sweep with an independent Brooks counter
    d = coboundary(brooks_hat("ab"))
    z = oracles.delta_hat_brooks("ab")
    value = sup_norm_sampled(d, itertools.product(B3, repeat=3))
    assert value == max(abs(z(*t)) for t in itertools.product(B3, repeat=3)) == 1
    assert value <= 6


def test_sup_norm():
    assert sup_norm_sampled(zero(1), [("", "a")]) == 0
    assert sup_norm_sampled(constant(2, -3), [("", "a", "b")]) == 3
    d = coboundary(brooks_hat("aab"))
    small, big = random_tuples(B3, 3, 100, 0), random_tuples(B3, 3, 100, 0) + random_tuples(B3, 3, 500, 1)
    assert sup_norm_sampled(d, small) <= sup_norm_sampled(d, big)


def test_quasimorphism_defect():
    phi = B.brooks_qm("ab")
    assert isinstance(phi, GroupQuasimorphism)
    assert phi.defect_on(itertools.product(B3, B3)) == 1


def test_orbit_pullback():
    W, pair = B.brooks_weight("ab")
    f = weight_qm(W, pair)
    fc = Cochain(1, f, name="f")
    act = lambda g, s: words.multiply(g, s)
    o = orbit_pullback(fc, "", act)
    assert all(o("", g) == f("", g) == B.brooks_qm_direct("ab", g) for g in B3)
    assert all(orbit_pullback(zero(2), "a", act)(*t) == 0 for t in random_tuples(B2, 3, 50))


def test_orbit_pullback_commutes_with_cup_and_coboundary():
    W, pair = B.brooks_weight("ab")
    f = Cochain(1, weight_qm(W, pair), name="f")
    g = coboundary(brooks_hat("aab"))
    act = lambda h, s: words.multiply(h, s)
    s = "bA"
    lhs, rhs = orbit_pullback(cup(f, g), s, act), cup(orbit_pullback(f, s, act), orbit_pullback(g, s, act))
    dl, dr = orbit_pullback(coboundary(f), s, act), coboundary(orbit_pullback(f, s, act))
    for t in random_tuples(B3, 4, 1000, seed=11):
        assert lhs(*t) == rhs(*t)
        assert dl(*t[:3]) == dr(*t[:3])


def test_table_cochain():
    f = table_cochain([[["a", "ab"], 2], [["e", "B"], -1]])
    assert f.invariance == "partial"
    assert f("", "b") == 2 and f("A", "Ab") == 2 and f("A", "") == 0
    assert f("b", "") == -1
    assert f("", "a") == 0
    with pytest.raises(ValueError):
        table_cochain([[["a", "ab"], 2], [["e", "b"], 3]])
    with pytest.raises(ValueError):
        table_cochain([[["a", "ab"], 2], [["e"], 3]])


def test_table_cochain_exact_norm():
    f = table_cochain('[[["e", "a"], 1.5]]')
    assert f.norm == 1.5
    assert f("b", "ba") == 1.5
