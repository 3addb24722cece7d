"""Symmetric and Rees algebra presentations, special fibers, Sylvester forms
and the certificates built on them (linear type, reductions, G_s, CM)."""
from __future__ import annotations

from dataclasses import dataclass

from .groebner import divide_track, eliminate, groebner_basis
from .ideal import Ideal, dimension_height, hilbert, quotient_element
from .matrix import PolyMatrix
from .poly import MonomialOrder, PolyError, PolyRing, Polynomial
from .resolutions import ModuleLayout, height_of_minors, minimal_module_generators, minimal_resolution, syzygies


# ---------------------------------------------------------------------------
# ambient rings


def rees_ring(R: PolyRing, n: int, degrees=None, prefix="t") -> PolyRing:
    """S = R[t_1..t_n] with block order [x | t] and a bigrading.

    x_i has bidegree (1, 0).  t_j gets (0, 1) when the generators share one
    degree (or no degrees are given) and (deg f_j, 1) otherwise.
    """
    if len(R.grading) != 1:
        raise PolyError("base ring must be singly graded")
    tnames = [f"{prefix}{j + 1}" for j in range(n)]
    clash = set(tnames) & set(R.variables)
    if clash:
        raise PolyError(f"variable names {sorted(clash)} already used in the base ring")
    m = R.ngens
    uniform = degrees is None or len(set(degrees)) <= 1
    xw = list(R.grading[0]) + ([0] * n if uniform else list(degrees))
    tw = [0] * m + [1] * n
    blocks = list(R.order.blocks) + [("grevlex", tuple(range(m, m + n)))]
    return PolyRing(list(R.variables) + tnames, R.field, MonomialOrder(blocks), (tuple(xw), tuple(tw)))


def _tvars(S: PolyRing, n: int):
    return [S.var(v) for v in S.variables[S.ngens - n:]]


def _base_vars(S: PolyRing, n: int):
    return list(S.variables[: S.ngens - n])


def _degree(f):
    d = f.multidegree()
    if d == "inhomogeneous" or d is None:
        raise PolyError(f"{f} is not a nonzero form")
    return d


# ---------------------------------------------------------------------------
# symmetric algebra and Rees ideal


def presentation(gens) -> PolyMatrix:
    """Syzygy matrix of the row (f_1 .. f_n), i.e. a presentation of I."""
    R = gens[0].ring
    row = PolyMatrix(R, [list(gens)], [0], [_degree(f) for f in gens])
    return syzygies(row)


def symmetric_ideal(phi: PolyMatrix, S: PolyRing = None, gens=None) -> Ideal:
    """Entries of (t_1 .. t_n) * phi in the Rees ambient ring."""
    R = phi.ring
    n = phi.nrows
    if gens is not None:
        if len(gens) != n:
            raise PolyError("presentation rows do not match the generators")
        for j in range(phi.ncols):
            acc = R.zero
            for i in range(n):
                acc = acc + gens[i] * phi[i, j]
            if acc:
                raise PolyError(f"column {j} of the matrix is not a syzygy")
    if S is None:
        degs = [_degree(f) for f in gens] if gens is not None else None
        S = rees_ring(R, n, degs)
    if S.ngens != R.ngens + n:
        raise PolyError("ambient ring does not match the presentation")
    ts = _tvars(S, n)
    out = []
    for j in range(phi.ncols):
        acc = S.zero
        for i in range(n):
            e = phi[i, j]
            if e:
                acc = acc + ts[i] * e.to_ring(S)
        out.append(acc)
    return Ideal(S, out)


def rees_by_elimination(gens, S: PolyRing) -> Ideal:
    """Eliminate u from (t_i - u f_i)."""
    R = gens[0].ring
    n = len(gens)
    m = R.ngens
    degs = [_degree(f) for f in gens]
    names = ["u"] + list(S.variables)
    while names[0] in S.variables:
        names[0] += "_"
    u = names[0]
    # grading: (x-degree with t_j weighted by deg f_j, t-degree with u weight 1)
    g1 = (0,) + tuple(R.grading[0]) + tuple(degs)
    g2 = (1,) + (0,) * m + (1,) * n
    blocks = [("grevlex", (0,))] + [(k, tuple(i + 1 for i in idx)) for k, idx in S.order.blocks]
    T = PolyRing(names, R.field, MonomialOrder(blocks), (g1, g2))
    uu = T.var(u)
    ts = [T.var(v) for v in S.variables[m:]]
    tag = [t - uu * f.to_ring(T) for t, f in zip(ts, gens)]
    out = eliminate(tag, [u], keep_ring=True)
    return Ideal.from_gb(groebner_basis([f.to_ring(S) for f in out], ring=S))


def saturate_by_element(A: Ideal, f: Polynomial) -> Ideal:
    cur = A
    while True:
        nxt = quotient_element(cur, f)
        if nxt == cur:
            return cur
        cur = nxt


def rees_by_saturation(gens, S: PolyRing, phi=None) -> Ideal:
    """L : f^oo with f the first generator."""
    if phi is None:
        phi = presentation(gens)
    L = symmetric_ideal(phi, S, gens)
    f = gens[0].to_ring(S)
    J = saturate_by_element(L, f)
    return Ideal.from_gb(J.gb())


class CrossCheckError(AssertionError):
    """The two Rees-ideal algorithms disagreed (an internal bug)."""


def rees_ideal(gens, S: PolyRing = None, phi=None, cross_check=True) -> Ideal:
    gens = [f for f in gens]
    if not any(gens):
        raise PolyError("all generators are zero")
    R = gens[0].ring
    if S is None:
        S = rees_ring(R, len(gens), [_degree(f) for f in gens])
    A = rees_by_elimination(gens, S)
    if cross_check:
        B = rees_by_saturation(gens, S, phi)
        if A.gb().basis != B.gb().basis:
            raise CrossCheckError("tag elimination and torsion saturation disagree")
    return A


def substitution_vanishes(F: Polynomial, gens) -> bool:
    """F(x, t_i -> f_i u) == 0, tested degree by degree in t."""
    S = F.ring
    n = len(gens)
    m = S.ngens - n
    R = gens[0].ring
    by_tdeg = {}
    for e, c in F.terms():
        k = sum(e[m:])
        by_tdeg.setdefault(k, []).append((e, c))
    for k, terms in by_tdeg.items():
        acc = R.zero
        for e, c in terms:
            t = R.monomial(e[:m], S.field.lift(c))
            for i, a in enumerate(e[m:]):
                if a:
                    t = t * gens[i] ** a
            acc = acc + t
        if acc:
            return False
    return True


# ---------------------------------------------------------------------------
# fiber and spread


@dataclass
class ReesPresentation:
    base: PolyRing
    ambient: PolyRing
    gens: list
    phi: PolyMatrix
    L: Ideal
    J: Ideal
    Q: Ideal = None
    spread: int = None
    fiber_multiplicity: int = None

    def to_json(self):
        return {
            "ambient": self.ambient.describe(),
            "generatorsOfI": [str(f) for f in self.gens],
            "symmetric": [str(f) for f in self.L.gens],
            "rees": [str(f) for f in self.J.gb().basis],
            "fiber": [str(f) for f in self.Q.gens] if self.Q is not None else None,
            "spread": self.spread,
            "fiberMultiplicity": self.fiber_multiplicity,
        }


def rees_presentation(gens, phi=None, with_fiber=True, shortcut=False) -> ReesPresentation:
    """Full presentation.  With ``shortcut`` an equigenerated ideal found to be
    of linear type takes J = L and skips both Rees-ideal algorithms."""
    R = gens[0].ring
    degs = [_degree(f) for f in gens]
    S = rees_ring(R, len(gens), degs)
    if phi is None:
        phi = presentation(gens)
    L = symmetric_ideal(phi, S, gens)
    J = None
    if shortcut and len(set(degs)) == 1 and linear_type_by_regularity(gens, phi, S)[0]:
        J = L
    if J is None:
        J = rees_ideal(gens, S, phi)
    rp = ReesPresentation(R, S, list(gens), phi, L, J)
    if with_fiber and len(set(degs)) == 1:
        fiber_and_spread(rp)
    return rp


def fiber_ring(S: PolyRing, n: int) -> PolyRing:
    names = list(S.variables[S.ngens - n:])
    return PolyRing(names, S.field, "grevlex")


def fiber_and_spread(rp: ReesPresentation):
    """Q = Rees ideal ∩ k[t]; spread = dim k[t]/Q; fiber multiplicity."""
    degs = {_degree(f) for f in rp.gens}
    if len(degs) != 1:
        raise PolyError("fiber as elimination needs an equigenerated ideal")
    n = len(rp.gens)
    S = rp.ambient
    drop = _base_vars(S, n)
    K = fiber_ring(S, n)
    Q = Ideal(K, [f.to_ring(K) for f in eliminate(rp.J.gb().basis, drop, keep_ring=False)])
    dim, _ = dimension_height(Q)
    hd = hilbert(Q)
    rp.Q = Q
    rp.spread = dim
    rp.fiber_multiplicity = hd.multiplicity
    return Q, dim, hd.multiplicity


# ---------------------------------------------------------------------------
# certificates


def standard_copy(A: Ideal) -> Ideal:
    """A in a grevlex ring where every variable has degree 1."""
    ring = A.ring
    C = PolyRing(ring.variables, ring.field, "grevlex")
    return Ideal(C, [g.to_ring(C) for g in A.gens])


def is_nonzerodivisor(A: Ideal, f: Polynomial) -> bool:
    """f regular on S/A, by HS(S/(A+f)) == (1 - t^d) HS(S/A).

    Both A and f must be homogeneous for the all-ones grading.
    """
    B = standard_copy(A)
    g = f.to_ring(B.ring)
    d = g.total_degree()
    lhs = hilbert(Ideal(B.ring, list(B.gens) + [g])).numerator
    base = hilbert(B).numerator
    rhs = [0] * (len(base) + d)
    for i, c in enumerate(base):
        rhs[i] += c
        rhs[i + d] -= c
    while len(rhs) > 1 and rhs[-1] == 0:
        rhs.pop()
    return list(lhs) == rhs


def linear_type_by_regularity(gens, phi=None, S=None):
    """(verdict, L) for an equigenerated ideal.

    The Rees ideal is L : f^oo and is prime without elements of R, so
    L equals it exactly when f_1 is regular on S/L.
    """
    if len({_degree(f) for f in gens}) != 1:
        raise PolyError("the regularity test needs an equigenerated ideal")
    R = gens[0].ring
    if phi is None:
        phi = presentation(gens)
    if S is None:
        S = rees_ring(R, len(gens))
    L = symmetric_ideal(phi, S, gens)
    f = next(g for g in gens if g)
    return is_nonzerodivisor(L, f.to_ring(S)), L


def certify_rees_ideal(gens, candidates, phi=None, S=None) -> dict:
    """Check that K = (candidates) is the full Rees ideal of an equigenerated ideal.

    Sufficient and exact: L ⊆ K, every candidate vanishes under t_i -> f_i,
    and f_1 is regular on S/K.  Then J = L : f_1^oo ⊆ K : f_1^oo = K ⊆ J.
    """
    if len({_degree(f) for f in gens}) != 1:
        raise PolyError("the certificate needs an equigenerated ideal")
    R = gens[0].ring
    if phi is None:
        phi = presentation(gens)
    if S is None:
        S = candidates[0].ring if candidates else rees_ring(R, len(gens))
    L = symmetric_ideal(phi, S, gens)
    K = Ideal(S, list(candidates))
    inside = all(substitution_vanishes(c, gens) for c in candidates)
    contains_L = K.contains_ideal(L)
    f = next(g for g in gens if g)
    regular = inside and contains_L and is_nonzerodivisor(K, f.to_ring(S))
    return {"in_rees": inside, "contains_symmetric": contains_L, "regular": regular, "equal": inside and contains_L and regular}


def is_linear_type(gens, phi=None, method="auto") -> bool:
    """L == Rees ideal.  ``method``: "regular" (equigenerated only), "compare" or "auto"."""
    equi = len({_degree(f) for f in gens}) == 1
    if method == "regular" or (method == "auto" and equi):
        return linear_type_by_regularity(gens, phi)[0]
    R = gens[0].ring
    S = rees_ring(R, len(gens), [_degree(f) for f in gens])
    if phi is None:
        phi = presentation(gens)
    L = symmetric_ideal(phi, S, gens)
    J = rees_ideal(gens, S, phi)
    return L.gb().basis == J.gb().basis


def sylvester_form(f: Polynomial, g: Polynomial, pair):
    """det of the content matrix of (f, g) with respect to (a, b).

    Returns (h, bidegree of h, content matrix rows)."""
    a, b = pair
    qf, rf = divide_track(f, [a, b])
    qg, rg = divide_track(g, [a, b])
    if rf or rg:
        raise PolyError("f and g must lie in the ideal (a, b)")
    h = qf[0] * qg[1] - qf[1] * qg[0]
    return h, (h.multidegree() if h else None), [qf, qg]


def bigraded_min_gens(A: Ideal, gens=None):
    """Minimal bihomogeneous generators and the multiset of their bidegrees."""
    ring = A.ring
    gens = list(A.gens if gens is None else gens)
    for g in gens:
        if g.multidegree() == "inhomogeneous":
            raise PolyError("bigraded_min_gens needs bihomogeneous generators")
    order = sorted(range(len(gens)), key=lambda i: (sum(_as_tuple(gens[i].multidegree())), _as_tuple(gens[i].multidegree()), i))
    layout = ModuleLayout(ring, [0])
    elems = [layout.encode([gens[i]]) for i in order]
    kept = minimal_module_generators(ring, layout, elems)
    ids = {id(e) for e in kept}
    chosen = [gens[i] for i, e in zip(order, elems) if id(e) in ids]
    table = {}
    for g in chosen:
        d = _as_tuple(g.multidegree())
        table[d] = table.get(d, 0) + 1
    return chosen, dict(sorted(table.items()))


def _as_tuple(d):
    return d if isinstance(d, tuple) else (d,)


def coarsened(A: Ideal) -> Ideal:
    """The same ideal in a singly graded copy of its ring (sum of the gradings)."""
    ring = A.ring
    if len(ring.grading) == 1:
        return A
    w = tuple(sum(col) for col in zip(*ring.grading))
    C = PolyRing(ring.variables, ring.field, ring.order, (w,))
    return Ideal(C, [g.to_ring(C) for g in A.gens])


def cm_via_pd(A: Ideal) -> dict:
    """Cohen–Macaulayness of S/A as pd == height (Auslander–Buchsbaum)."""
    B = coarsened(A)
    res, betti = minimal_resolution(B)
    _, height = dimension_height(B)
    pd = res.length
    return {"pd": pd, "height": height, "cm": pd == height, "betti": betti}


def ideal_power_gens(I: Ideal, k: int):
    ring = I.ring
    if k == 0:
        return [ring.one]
    cur = list(I.gens)
    for _ in range(k - 1):
        nxt = {}
        for a in cur:
            for b in I.gens:
                p = a * b
                nxt.setdefault(p.normalized(), p)
        cur = list(nxt.values())
    return cur


@dataclass
class ReductionCertificate:
    holds: bool
    r: int


def is_reduction(J: Ideal, I: Ideal, r_max: int = 6) -> ReductionCertificate:
    """Smallest r <= r_max with I^(r+1) = J I^r."""
    if not I.contains_ideal(J):
        raise PolyError("J is not contained in I")
    ring = I.ring
    Ir = [ring.one]
    for r in range(r_max + 1):
        Ir1 = ideal_power_gens(I, r + 1)
        JIr = Ideal(ring, [a * b for a in J.gens for b in Ir])
        if all(JIr.contains(g) for g in Ir1):
            # the reverse inclusion J I^r ⊆ I^(r+1) re-checked explicitly
            big = Ideal(ring, Ir1)
            if all(big.contains(g) for g in JIr.gens):
                return ReductionCertificate(True, r)
            raise AssertionError("J I^r not contained in I^(r+1)")
        Ir = ideal_power_gens(I, r + 1)
    return ReductionCertificate(False, r_max)


def g_condition(phi: PolyMatrix, s: int) -> dict:
    """G_s: ht I_j(phi) >= n - j + 1 for n - s + 1 <= j <= n - 1."""
    n = phi.nrows
    heights = {}
    for j in range(max(1, n - s + 1), n):
        need = n - j + 1
        h = height_of_minors(phi, j, target=need)
        heights[j] = h
        if h < need:
            return {"holds": False, "witness": j, "heights": heights}
    return {"holds": True, "witness": None, "heights": heights}
