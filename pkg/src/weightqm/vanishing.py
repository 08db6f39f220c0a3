"""Explicit bounded primitives for cup and Massey products with [δf_W].

Everything here is evaluated pointwise: the primitives are cochains built
from fragment sums, and the certificates record how they were checked on a
seeded sample of vertex tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .cochain import MEMO_SIZE, Cochain, coboundary, cup, sup_norm_sampled, zero
from .coherent import CoherentPair
from .graph import fragment_edges
from .report import dumps
from .weights import PreconditionError, WeightMap, fragment_sum, weight_bound, weight_qm

TOL = 1e-9


def zeta_tilde(zeta: Callable) -> Callable:
    """(a, x1..xn) -> mean of zeta at the head and at the tail of the fragment a."""
    def zt(edges, *xs):
        return (zeta(edges[0][0], *xs) + zeta(edges[-1][1], *xs)) / 2
    return zt


def _memo(degree, fn, name):
    return Cochain(degree, lru_cache(maxsize=MEMO_SIZE)(fn), name=name)


def weight_cochain(W: WeightMap, pair: CoherentPair) -> Cochain:
    f = weight_qm(W, pair)
    return Cochain(1, f, name=f.name)


def eta(W: WeightMap, pair: CoherentPair, zeta: Cochain) -> Cochain:
    """eta(x0..xn): W-weighted sum of zeta~(., x1..xn) along p(x0, x1)."""
    n = zeta.degree
    if n == 0:
        return zero(0)
    zt = zeta_tilde(zeta.fn)
    first = pair.family.first

    def fn(*xs):
        if xs[0] == xs[1]:
            return 0
        rest = xs[1:]
        return fragment_sum(W, first(xs[0], xs[1]), lambda a: zt(a, *rest))

    return _memo(n, fn, f"eta[{zeta.name}]")


def nu(W: WeightMap, pair: CoherentPair, zeta: Cochain) -> Cochain:
    """nu(x0..xn): W-weighted sum of zeta~(., x0..x_{n-1}) along p(x_{n-1}, x_n)."""
    n = zeta.degree
    if n == 0:
        return zero(0)
    zt = zeta_tilde(zeta.fn)
    first = pair.family.first

    def fn(*xs):
        if xs[-2] == xs[-1]:
            return 0
        rest = xs[:-1]
        return fragment_sum(W, first(xs[-2], xs[-1]), lambda a: zt(a, *rest))

    return _memo(n, fn, f"nu[{zeta.name}]")


def kappa(W: WeightMap, pair: CoherentPair, zeta1: Cochain, zeta2: Cochain) -> Cochain:
    """An (n+m)-argument map: the path runs between arguments n-1 and n (0-based)."""
    n, m = zeta1.degree, zeta2.degree
    if n == 0 or m == 0:
        raise ValueError("kappa needs two cochains of positive degree")
    z1, z2 = zeta_tilde(zeta1.fn), zeta_tilde(zeta2.fn)
    first = pair.family.first

    def fn(*ys):
        u, v = ys[n - 1], ys[n]
        if u == v:
            return 0
        left, right = ys[:n], ys[n:]
        return fragment_sum(W, first(u, v), lambda a: z1(a, *left) * z2(a, *right))

    return _memo(n + m - 1, fn, f"kappa[{zeta1.name},{zeta2.name}]")


def _triangle(W, pair, tau, x, y, z):
    first = pair.family.first
    total = 0
    for u, v, sign in ((x, y, 1), (y, z, 1), (x, z, -1)):
        if u != v:
            total += sign * fragment_sum(W, first(u, v), tau)
    return total


def phi_stability_check(zeta: Cochain, pair: CoherentPair, W: WeightMap, samples: Iterable) -> tuple:
    """Does zeta agree at heads and at tails of fragments matched by phi?

    ``samples`` holds (x, y, rest) with rest the trailing n-tuple. Only
    fragments in the support of W are compared. Returns ``(ok, witness)``.
    """
    family = pair.family
    for x, y, rest in samples:
        ps = family.paths(x, y)
        if len(ps) < 2:
            continue
        for p in ps:
            for q in ps:
                if p == q:
                    continue
                for idx, jdx in pair.phi(p, q).items():
                    a, b = fragment_edges(p, idx), fragment_edges(q, jdx)
                    if W.fn(a) == 0:
                        continue
                    for end, ea, eb in (("head", a[0][0], b[0][0]), ("tail", a[-1][1], b[-1][1])):
                        if zeta(ea, *rest) != zeta(eb, *rest):
                            return False, {"pair": [x, y], "p": p, "q": q, "fragment": idx, "end": end,
                                           "rest": rest}
    return True, None


def _require_stable(zeta, pair, W, stability_samples):
    if stability_samples is None:
        return
    ok, witness = phi_stability_check(zeta, pair, W, stability_samples)
    if not ok:
        raise PreconditionError(f"{zeta.name} is not Phi-stable", witness)


def _close(a, b, tol):
    return a == b if tol == 0 else abs(a - b) <= tol


@dataclass
class PrimitiveCertificate:
    side: str
    degree: int
    target: str
    primitive: Cochain = field(repr=False)
    samples: int
    seed: int | None
    residual: float
    triangle_residual: float
    beta_norm: float
    zeta_norm: float
    bound: float
    bound_formula: str
    tolerance: float
    witness: object = None

    @property
    def passed(self) -> bool:
        return (self.residual <= self.tolerance and self.triangle_residual <= self.tolerance
                and self.beta_norm <= self.bound and self.witness is None)

    def to_dict(self) -> dict:
        return {
            "kind": f"cup primitive ({self.side})",
            "status": "PASS" if self.passed else "FAIL",
            "degree": self.degree,
            "target": self.target,
            "samples": self.samples,
            "seed": self.seed,
            "max_residual": self.residual,
            "max_triangle_residual": self.triangle_residual,
            "sampled_norm": self.beta_norm,
            "zeta_norm": self.zeta_norm,
            "bound": self.bound,
            "bound_formula": self.bound_formula,
            "tolerance": self.tolerance,
            **({"witness": self.witness} if self.witness is not None else {}),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _finish(target_fn, beta, degree, tuples, tri_fn, tol):
    """Residuals of delta(beta) - target on tuples, of beta - triangle form on their front faces."""
    dbeta = coboundary(beta)
    res = tri = 0
    witness = None
    norm = 0
    for t in tuples:
        lhs, rhs = dbeta(*t), target_fn(*t)
        r = abs(lhs - rhs)
        if r > res:
            res = r
        if r > tol and witness is None:
            witness = {"tuple": t, "delta_beta": lhs, "target": rhs}
        front = t[: degree + 1]
        b = beta(*front)
        norm = max(norm, abs(b))
        if tri_fn is not None:
            d = abs(b - tri_fn(*front))
            tri = max(tri, d)
            if d > tol and witness is None:
                witness = {"tuple": front, "beta": b, "triangle_form": tri_fn(*front)}
    return res, tri, norm, witness


def cup_primitive_left(W: WeightMap, pair: CoherentPair, zeta: Cochain, tuples: Iterable,
                       zeta_norm: float | None = None, seed: int | None = None, tol: float = 0,
                       stability_samples: Iterable | None = None) -> PrimitiveCertificate:
    """beta = f_W u zeta + delta(eta), a primitive of delta(f_W) u zeta.

    ``tuples`` are (n+3)-tuples: delta(beta) is checked on them, beta and its
    triangle form on their first n+2 entries.
    """
    _require_stable(zeta, pair, W, stability_samples)
    n = zeta.degree
    tuples = list(tuples)
    f = weight_cochain(W, pair)
    beta = (cup(f, zeta) + coboundary(eta(W, pair, zeta))).memoized()
    target = cup(coboundary(f), zeta)
    zt = zeta_tilde(zeta.fn)

    def tri(*xs):
        if n == 0:
            return beta(*xs)
        rest = xs[2:]
        return _triangle(W, pair, lambda a: zt(a, *rest), xs[0], xs[1], xs[2])

    if zeta_norm is None:
        zeta_norm = sup_norm_sampled(zeta, [t[: n + 1] for t in tuples])
    res, tr, norm, witness = _finish(target, beta, n + 1, tuples, tri if n else None, tol)
    bound = _bound(W, pair, zeta_norm, n)
    return PrimitiveCertificate("left", n, f"d(f_W) u {zeta.name}", beta, len(tuples), seed, res, tr, norm,
                                zeta_norm, bound, "3(R+1)*c*|W|*|zeta|", tol, witness)


def cup_primitive_right(W: WeightMap, pair: CoherentPair, zeta: Cochain, tuples: Iterable,
                        zeta_norm: float | None = None, seed: int | None = None, tol: float = 0,
                        stability_samples: Iterable | None = None) -> PrimitiveCertificate:
    """beta' = (-1)^n (zeta u f_W - delta(nu)), a primitive of zeta u delta(f_W)."""
    _require_stable(zeta, pair, W, stability_samples)
    n = zeta.degree
    tuples = list(tuples)
    f = weight_cochain(W, pair)
    sign = -1 if n % 2 else 1
    beta = ((cup(zeta, f) - coboundary(nu(W, pair, zeta))).scale(sign)).memoized()
    target = cup(zeta, coboundary(f))
    zt = zeta_tilde(zeta.fn)

    def tri(*xs):
        rest = xs[:n]
        return _triangle(W, pair, lambda a: zt(a, *rest), xs[n - 1], xs[n], xs[n + 1])

    if zeta_norm is None:
        zeta_norm = sup_norm_sampled(zeta, [t[: n + 1] for t in tuples])
    res, tr, norm, witness = _finish(target, beta, n + 1, tuples, tri if n else None, tol)
    bound = _bound(W, pair, zeta_norm, n)
    return PrimitiveCertificate("right", n, f"{zeta.name} u d(f_W)", beta, len(tuples), seed, res, tr, norm,
                                zeta_norm, bound, "3(R+1)*c*|W|*|zeta|", tol, witness)


def _bound(W, pair, zeta_norm, n):
    # in degree 0 the primitive is f_W itself, unbounded; only its coboundary is
    return weight_bound(W, pair, zeta_norm) if n else float("inf")


def kappa_coboundary_identity(W: WeightMap, pair: CoherentPair, zeta1: Cochain, zeta2: Cochain,
                              x: tuple, parts: dict | None = None) -> float:
    """|delta(kappa)(x) - right-hand side| with both sides evaluated independently.

    The right-hand side is zeta1 u eta + (-1)^n nu u zeta2 - (-1)^n times the
    triangle sum for tau = zeta1~ * zeta2~ at the vertices x_{n-1}, x_n, x_{n+1}.
    """
    n, m = zeta1.degree, zeta2.degree
    parts = parts or _massey_parts(W, pair, zeta1, zeta2)
    sign = -1 if n % 2 else 1
    lhs = parts["dkappa"](*x)
    rhs = parts["leibniz_left"](*x) - sign * parts["triangle"](*x)
    return abs(lhs - rhs)


def _massey_parts(W, pair, zeta1, zeta2) -> dict:
    n, m = zeta1.degree, zeta2.degree
    sign = -1 if n % 2 else 1
    f = weight_cochain(W, pair)
    e2 = eta(W, pair, zeta2)
    n1 = nu(W, pair, zeta1)
    k = kappa(W, pair, zeta1, zeta2)
    beta1 = ((cup(zeta1, f) - coboundary(n1)).scale(sign)).memoized()
    beta2 = (cup(f, zeta2) + coboundary(e2)).memoized()
    leibniz_left = cup(zeta1, e2) + cup(n1, zeta2).scale(sign)
    dkappa = coboundary(k)
    beta = (leibniz_left - dkappa).memoized()
    z1, z2 = zeta_tilde(zeta1.fn), zeta_tilde(zeta2.fn)

    def triangle(*xs):
        left, right = xs[:n], xs[n + 1:]
        return _triangle(W, pair, lambda a: z1(a, *left) * z2(a, *right), xs[n - 1], xs[n], xs[n + 1])

    target = cup(zeta1, beta2).scale(sign) - cup(beta1, zeta2)
    return {"beta1": beta1, "beta2": beta2, "kappa": k, "eta": e2, "nu": n1, "beta": beta,
            "dkappa": dkappa, "leibniz_left": leibniz_left, "triangle": triangle, "target": target,
            "sign": sign, "degree": n + m}


@dataclass
class MasseyCertificate:
    degrees: tuple
    beta: Cochain = field(repr=False)
    parts: dict = field(repr=False)
    samples: int
    seed: int | None
    residual: float
    kappa_residual: float
    leibniz_residual: float
    triangle_residual: float
    beta_norm: float
    zeta_norms: tuple
    bound: float
    tolerance: float
    witness: object = None

    @property
    def passed(self) -> bool:
        return (max(self.residual, self.kappa_residual, self.leibniz_residual, self.triangle_residual)
                <= self.tolerance and self.beta_norm <= self.bound and self.witness is None)

    def to_dict(self) -> dict:
        return {
            "kind": "Massey witness",
            "status": "PASS" if self.passed else "FAIL",
            "degrees": list(self.degrees),
            "samples": self.samples,
            "seed": self.seed,
            "max_residual": self.residual,
            "max_kappa_residual": self.kappa_residual,
            "max_leibniz_residual": self.leibniz_residual,
            "max_triangle_residual": self.triangle_residual,
            "sampled_norm": self.beta_norm,
            "zeta_norms": list(self.zeta_norms),
            "bound": self.bound,
            "bound_formula": "3(R+1)*c*|W|*|zeta1|*|zeta2|",
            "bound_symbolic": "3(R+1)*c*|W|*|tau|",
            "tolerance": self.tolerance,
            **({"witness": self.witness} if self.witness is not None else {}),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def massey_witness(W: WeightMap, pair: CoherentPair, zeta1: Cochain, zeta2: Cochain, tuples: Iterable,
                   zeta_norms: tuple | None = None, seed: int | None = None, tol: float = 0,
                   stability_samples: Iterable | None = None) -> MasseyCertificate:
    """beta = zeta1 u eta + (-1)^n nu u zeta2 - delta(kappa) and its checks.

    ``tuples`` are (n+m+2)-tuples; delta(beta) is compared with
    (-1)^n zeta1 u beta2 - beta1 u zeta2 on them, while the kappa identity,
    the triangle form and the norm use the first n+m+1 entries.
    """
    for z in (zeta1, zeta2):
        _require_stable(z, pair, W, stability_samples)
    n, m = zeta1.degree, zeta2.degree
    tuples = list(tuples)
    parts = _massey_parts(W, pair, zeta1, zeta2)
    beta, sign = parts["beta"], parts["sign"]
    dbeta = coboundary(beta)
    target = parts["target"]
    leibniz = coboundary(parts["leibniz_left"])
    res = kres = lres = tres = norm = 0
    witness = None
    for t in tuples:
        lhs, rhs = dbeta(*t), target(*t)
        r = abs(lhs - rhs)
        res = max(res, r)
        lr = abs(leibniz(*t) - rhs)
        lres = max(lres, lr)
        front = t[: n + m + 1]
        kr = kappa_coboundary_identity(W, pair, zeta1, zeta2, front, parts)
        kres = max(kres, kr)
        b = beta(*front)
        tr = abs(b - sign * parts["triangle"](*front))
        tres = max(tres, tr)
        norm = max(norm, abs(b))
        if witness is None and max(r, lr, kr, tr) > tol:
            witness = {"tuple": t, "residual": r, "leibniz": lr, "kappa": kr, "triangle": tr}
    if zeta_norms is None:
        zeta_norms = (sup_norm_sampled(zeta1, [t[: n + 1] for t in tuples]),
                      sup_norm_sampled(zeta2, [t[: m + 1] for t in tuples]))
    bound = weight_bound(W, pair, zeta_norms[0] * zeta_norms[1])
    return MasseyCertificate((n, m), beta, parts, len(tuples), seed, res, kres, lres, tres, norm,
                             tuple(zeta_norms), bound, tol, witness)
