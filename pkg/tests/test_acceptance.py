"""The ten acceptance criteria, each at its stated tolerance and time limit.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""
import itertools
import math
import time

import pytest

from weightqm import complexes as C
from weightqm import words
from weightqm.brooks_delta import (
    DeltaDecomposition,
    PieceWeight,
    brooks_qm,
    brooks_qm_direct,
    brooks_weight,
    delta_qm,
    verify_delta_axioms,
)
from weightqm.cochain import Cochain, coboundary, cup, hat, random_tuples
from weightqm.coherent import geodesic_family, verify_qmp
from weightqm.median import MedianComplex, TreeComplex, median_qm, median_weight
from weightqm.vanishing import cup_primitive_left, cup_primitive_right, massey_witness
from weightqm.weights import defect_on, weight_qm

import oracles

B3, B4, B5 = (words.F2.ball(r) for r in (3, 4, 5))
SAMPLES = 10_000


def dhat(omega):
    return coboundary(hat(brooks_qm(omega))).memoized()


def test_01_brooks_defect_bound(verdict):
    rows, ok = [], True
    for omega in ("ab", "aab", "abab"):
        W, pair = brooks_weight(omega)
        bound = weight_qm(W, pair).defect_bound
        t0 = time.perf_counter()
        value, _ = defect_on(weight_qm(W, pair), B3)
        dt = time.perf_counter() - t0
        ok &= bound == 6 * (len(omega) - 1) and value <= bound and dt < 60
        rows.append(f"{omega}: {value}<={bound}")
    assert verdict(1, ok, ", ".join(rows)), rows


def test_02_brooks_weight_agreement(verdict):
    bad = []
    for omega in ("ab", "aab", "abab"):
        W, pair = brooks_weight(omega)
        f = weight_qm(W, pair)
        bad += [(omega, g) for g in B5 if not f("", g) == brooks_qm_direct(omega, g) == oracles.brooks(omega, g)]
    assert verdict(2, not bad, f"{len(B5)} words, mismatches {len(bad)}"), bad[:5]


def test_03_cup_primitive_certificates(verdict):
    W, pair = brooks_weight("ab")
    zeta = dhat("aab")
    zeta_norm = max(abs(zeta(*t)) for t in itertools.product(B3, repeat=3) if t[0] == "")
    tuples = random_tuples(B3, 5, SAMPLES, seed=0)
    t0 = time.perf_counter()
    certs = [side(W, pair, zeta, tuples, zeta_norm=zeta_norm, seed=0, tol=0)
             for side in (cup_primitive_left, cup_primitive_right)]
    dt = time.perf_counter() - t0
    ok = zeta_norm == 1 and dt < 120 and all(
        c.passed and c.residual == 0 and c.beta_norm <= 6 * zeta_norm == c.bound for c in certs)
    detail = "; ".join(f"{c.side}: residual {c.residual}, |beta| {c.beta_norm} <= {c.bound}" for c in certs)
    assert verdict(3, ok, f"{detail}, {dt:.1f}s"), [c.to_dict() for c in certs]


def test_04_massey_certificate(verdict):
    W, pair = brooks_weight("ab")
    z1, z2 = dhat("aab"), dhat("bba")
    tuples = random_tuples(B3, 6, SAMPLES, seed=0)
    c = massey_witness(W, pair, z1, z2, tuples, zeta_norms=(1, 1), seed=0, tol=0)
    ok = (c.passed and c.kappa_residual == 0 and c.residual == 0 and c.leibniz_residual == 0
          and c.beta_norm <= 6 == c.bound)
    detail = f"kappa {c.kappa_residual}, d(beta) {c.residual}, |beta| {c.beta_norm} <= {c.bound}"
    assert verdict(4, ok, detail), c.to_dict()


def test_05_quasi_median_property(verdict):
    failures = []
    for spec in C.BUILTIN_MEDIAN:
        G = C.build(spec)
        good, rep = verify_qmp(geodesic_family(G), 0, itertools.product(G.vertices, repeat=3))
        if not good:
            failures.append(spec)
    c5 = C.cycle(5)
    good5, rep5 = verify_qmp(geodesic_family(c5), 0, itertools.product(c5.vertices, repeat=3))
    witness = rep5.checks[0].counterexample if not good5 else None
    ok = not failures and not good5 and witness is not None
    assert verdict(5, ok, f"{len(C.BUILTIN_MEDIAN)} median graphs, cycle:5 witness {witness}"), failures


def test_06_median_combinatorics(verdict):
    bad = []
    for spec in ("grid:4x4", "path:4", "star:4", "bintree:3"):
        cx = MedianComplex(C.build(spec))
        G = cx.graph
        bad += [(spec, x, y) for x, y in itertools.product(G.vertices, repeat=2)
                if len(cx.interval(x, y)) != G.distance(x, y)]
    tree = TreeComplex()
    bad += [("tree-F2", x, y) for x, y in itertools.product(B3, repeat=2)
            if len(tree.interval(x, y)) != words.distance(x, y)]
    lengths = {}
    for spec, expect in (("bintree:3", 1), ("path:4", 1), ("grid:4x4", 1), ("staircase:2", 2), ("staircase:3", 3)):
        t0 = time.perf_counter()
        rep = MedianComplex(C.build(spec)).staircase_length()
        dt = time.perf_counter() - t0
        lengths[spec] = rep.length
        if rep.length != expect or rep.capped or dt >= 30:
            bad.append((spec, rep.length, dt))
    assert verdict(6, not bad, f"intervals ok, staircase {lengths}"), bad


def test_07_median_brooks_bridge(verdict):
    tree = TreeComplex()
    f = median_qm(tree, tree.segment_from_word("ab"))
    bad = [g for g in B5 if f("", g) != oracles.brooks("ab", g)]
    assert verdict(7, not bad, f"{len(B5)} words, mismatches {len(bad)}"), bad[:5]


def test_08_median_oracle_equivalence(verdict):
    counts, bad = {}, []
    for spec in ("grid:3x3", "staircase:2"):
        cx = MedianComplex(C.build(spec))
        segs = cx.segments(1) + cx.segments(2)
        counts[spec] = len(segs)
        pairs = list(itertools.product(cx.graph.vertices, repeat=2))
        for s in segs:
            fw = weight_qm(*median_weight(cx, s))
            fs = median_qm(cx, s)
            bad += [(spec, s, x, y) for x, y in pairs if fw(x, y) != fs(x, y)]
    assert verdict(8, not bad, f"segments checked {counts}"), bad[:5]


def test_09_delta_axioms(verdict):
    letters = DeltaDecomposition.letters()
    t0 = time.perf_counter()
    rep = verify_delta_axioms(letters, B5)
    dt = time.perf_counter() - t0
    phi, f = delta_qm(PieceWeight({"a": 1}), letters)
    value, _ = defect_on(f, B4)
    group_defect = phi.defect_on(itertools.product(B4, repeat=2))
    ok = rep.passed and rep.info["empirical_R"] == 0 and value == 0 == group_defect
    detail = f"axioms on B5 {rep.passed} (R={rep.info['empirical_R']}, {dt:.1f}s), defect on B4 {value}"
    assert verdict(9, ok, detail), rep.to_json()


def real_cochain(degree, seed):
    return Cochain(degree, lambda *xs: math.sin(seed + sum((i + 1) * len(x) + x.count("a") * 0.37
                                                            for i, x in enumerate(xs))), name=f"r{seed}")


def test_10_algebraic_identities(verdict):
    worst_int, worst_real = 0, 0.0
    ints = [hat(brooks_qm("ab")), hat(brooks_qm("bA")), dhat("aab")]
    reals = [real_cochain(1, 1), real_cochain(2, 2), real_cochain(1, 3)]
    for fams, is_int in ((ints, True), (reals, False)):
        worst = 0
        for f in fams:
            dd = coboundary(coboundary(f))
            worst = max(worst, max(abs(dd(*t)) for t in random_tuples(B3, f.degree + 3, SAMPLES, seed=f.degree)))
        for f, g in itertools.permutations(fams, 2):
            lhs = coboundary(cup(f, g))
            rhs = cup(coboundary(f), g) + cup(f, coboundary(g)).scale((-1) ** f.degree)
            tuples = random_tuples(B3, f.degree + g.degree + 2, SAMPLES, seed=f.degree + 10 * g.degree)
            worst = max(worst, max(abs(lhs(*t) - rhs(*t)) for t in tuples))
        if is_int:
            worst_int = worst
        else:
            worst_real = worst
    ok = worst_int == 0 and worst_real <= 1e-9
    assert verdict(10, ok, f"integer residual {worst_int}, real residual {worst_real:.2e}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
