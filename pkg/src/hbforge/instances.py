"""Seeded generators for the 3x2 matrix families: de Jonquieres matrices with
z-monoid entries and the (x^m, y^n)-primary family with its Sylvester form."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .ideal import Ideal, dimension_height, monomials_of_degree, saturate
from .matrix import PolyMatrix
from .poly import Field, PolyError, PolyRing, Polynomial
from .resolutions import signed_maximal_minors
from .rees import certify_rees_ideal  # noqa: F401


def _random_form(ring: PolyRing, deg: int, rng, names=None, bound=None):
    """Random form of degree deg, optionally in a subset of the variables."""
    sub = ring if names is None else ring.subring(names)
    bound = bound or (ring.field.p if ring.field.p else 20)
    terms = [(e, rng.randrange(bound)) for e in monomials_of_degree(sub, deg)]
    f = sub.from_terms(terms)
    return f.to_ring(ring) if names is not None else f


def _z_degree(f: Polynomial) -> int:
    k = f.ring.index("z")
    return max((e[k] for e, _ in f.terms()), default=-1)


@dataclass
class DeJonquieres:
    d: int
    phi: PolyMatrix
    gammas: list
    gens: list
    seed: int


def dejonq_instance(d: int, seed: int = 0, field: Field = None, retries: int = 50) -> DeJonquieres:
    """[[x, g1], [y, g2], [0, g3]] with z-monoids g_i = a_i z + b_i.

    a_i, b_i are forms in k[x, y] of degrees d-2 and d-1, so each g_i lies in
    (x, y)^(d-2); the 2-minors are forms of degree d.
    """
    if d < 2:
        raise PolyError("need d >= 2")
    ring = PolyRing("x,y,z", field or Field())
    rng = random.Random(seed)
    z = ring.var("z")
    for _ in range(retries):
        gammas = []
        for _ in range(3):
            a = _random_form(ring, d - 2, rng, ["x", "y"])
            b = _random_form(ring, d - 1, rng, ["x", "y"])
            gammas.append(a * z + b)
        if not any(_z_degree(g) > 0 for g in gammas):
            continue
        phi = PolyMatrix(ring, [[ring("x"), gammas[0]], [ring("y"), gammas[1]], [ring.zero, gammas[2]]])
        gens = signed_maximal_minors(phi)
        if any(not g for g in gens):
            continue
        if dimension_height(Ideal(ring, gens))[1] != 2:
            continue
        return DeJonquieres(d, phi, gammas, gens, seed)
    raise PolyError("no admissible de Jonquieres sample")


def dejonq_expected_bidegrees(d: int):
    table = {(1, 1): 1}
    for k in range(1, d):
        key = (d - k, k)
        table[key] = table.get(key, 0) + 1
    return dict(sorted(table.items()))


@dataclass
class PrimaryFamily:
    m: int
    n: int
    eps: int
    phi: PolyMatrix
    q: list
    qp: list
    gens: list
    seed: int


def _z_top(f: Polynomial, deg: int):
    """Coefficient of z^deg in f (0 when absent)."""
    k = f.ring.index("z")
    for e, c in f.terms():
        if e[k] == deg:
            return c
    return 0


def primary_family_hypotheses(phi: PolyMatrix, m: int, n: int, eps: int, q, qp) -> dict:
    ring = phi.ring
    gens = signed_maximal_minors(phi)
    I = Ideal(ring, gens)
    height_ok = dimension_height(I)[1] == 2
    mm = Ideal(ring, [ring.var(v) for v in ring.variables])
    I1 = Ideal(ring, [e for r in phi.entries for e in r if e])
    comp, _ = saturate(I1, mm)
    x, y = ring.var("x"), ring.var("y")
    primary_ok = comp == Ideal(ring, [x ** m, y ** n])
    theta_ok = True
    if m == n:
        # the z^eps coefficients must not satisfy a1 = b2, a2 = a3 = b1 = b3 = 0
        a = [_z_top(f, eps) for f in q]
        b = [_z_top(f, eps) for f in qp]
        theta_ok = not (a[0] == b[1] and a[1] == a[2] == b[0] == b[2] == 0)
    return {"a": 1 <= n <= m and eps >= max(m - n, 1), "b": height_ok, "c": primary_ok, "d": theta_ok}


def primary_family_instance(m: int, n: int, eps: int, seed: int = 0, field: Field = None, retries: int = 50) -> PrimaryFamily:
    """[[x^m, p1], [y^m, p2], [0, p3]] with p_i = q_i x^m + q'_i y^n of degree n + eps."""
    if not (1 <= n <= m and eps >= max(m - n, 1)):
        raise PolyError("need 1 <= n <= m and eps >= max(m - n, 1)")
    ring = PolyRing("x,y,z", field or Field())
    rng = random.Random(seed)
    x, y = ring.var("x"), ring.var("y")
    for _ in range(retries):
        q = [_random_form(ring, n + eps - m, rng) for _ in range(3)]
        qp = [_random_form(ring, eps, rng) for _ in range(3)]
        ps = [a * x ** m + b * y ** n for a, b in zip(q, qp)]
        phi = PolyMatrix(ring, [[x ** m, ps[0]], [y ** m, ps[1]], [ring.zero, ps[2]]])
        if all(primary_family_hypotheses(phi, m, n, eps, q, qp).values()):
            return PrimaryFamily(m, n, eps, phi, q, qp, signed_maximal_minors(phi), seed)
    raise PolyError("no admissible sample")


def primary_family_content_matrix(inst: PrimaryFamily, S: PolyRing) -> PolyMatrix:
    """3x2 matrix whose 2-minors are (f, g, h) up to sign."""
    ts = [S.var(v) for v in S.variables[3:]]
    x, y = S.var("x"), S.var("y")
    lift = lambda f: f.to_ring(S)
    row2 = [sum((lift(a) * t for a, t in zip(inst.q, ts)), S.zero), sum((lift(b) * t for b, t in zip(inst.qp, ts)), S.zero)]
    rows = [[ts[0], ts[1] * y ** (inst.m - inst.n)], row2, [-(y ** inst.n), x ** inst.m]]
    return PolyMatrix(S, rows)


def random_two_degree_shape(n: int, a: int, eps1: int, eps2: int, seed: int = 0, field: Field = None,
                            nvars: int = 3, phi2_height=None, retries: int = 50):
    """Random [Phi1 over Phi2] with forms of degree eps1 (top a rows) and eps2.

    Resampled until I_{n-1}(phi) has height 2 and, when ``phi2_height`` is
    given, I_{n-a}(Phi2) has at least that height.
    """
    from .resolutions import TwoDegreeShape, height_of_minors

    names = ["x", "y", "z"] if nvars == 3 else [f"x{i + 1}" for i in range(nvars)]
    ring = PolyRing(names, field or Field())
    rng = random.Random(seed)
    for _ in range(retries):
        rows = []
        for i in range(n):
            deg = eps1 if i < a else eps2
            rows.append([_random_form(ring, deg, rng) for _ in range(n - 1)])
        shape = TwoDegreeShape(n, a, eps1, eps2, PolyMatrix(ring, rows))
        if not shape.check_height():
            continue
        if phi2_height is not None and height_of_minors(shape.Phi2, n - a, target=phi2_height) < phi2_height:
            continue
        return shape
    raise PolyError("no admissible two-degree sample")


def resofj_expected(n: int, a: int, eps1: int, eps2: int):
    """Betti table of R/J for J the minors fixing Phi2, when ht I_{n-a}(Phi2) = a."""
    from math import comb
    from .resolutions import BettiTable

    D = a * eps1 + (n - a) * eps2
    e = {(0, 0): 1, (1, D - eps1): a}
    for i in range(a - 1):
        b = comb(n - a - 1 + i, i) * comb(n - 1, i + n - a + 1)
        if b:
            e[(i + 2, (n - a + i) * eps2 + D)] = b
    return BettiTable(e)
