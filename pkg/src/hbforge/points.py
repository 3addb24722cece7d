"""Finite sets of points in the projective plane: vanishing ideals, position
classification, Betti predictions, sector audits and map degrees."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import comb

from .groebner import BudgetError
from .ideal import Ideal, dimension_height, graded_piece, hilbert, intersect, piece_rank, quotient, saturate
from .linalg import rank
from .matrix import PolyMatrix
from .poly import Field, PolyError, PolyRing, Polynomial
from .rees import cm_via_pd, g_condition, is_linear_type, presentation, rees_presentation
from .resolutions import BettiTable, height_of_minors, minimal_resolution


VARS = ("x", "y", "z")


def plane_ring(field: Field) -> PolyRing:
    return PolyRing(list(VARS), field)


# ---------------------------------------------------------------------------
# point sets


def normalize_point(pt, field: Field):
    vals = [field(v) for v in pt]
    if len(vals) != 3:
        raise PolyError("points need three projective coordinates")
    last = None
    for v in reversed(vals):
        if v:
            last = v
            break
    if last is None:
        raise PolyError("(0:0:0) is not a projective point")
    inv = field.inv(last)
    p = field.p
    return tuple((v * inv) % p if p else v * inv for v in vals)


@dataclass(frozen=True)
class PointSet:
    field: Field
    points: tuple
    seed: int = None

    def __post_init__(self):
        pts = tuple(normalize_point(p, self.field) for p in self.points)
        if len(set(pts)) != len(pts):
            raise PolyError("points are not pairwise distinct")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def ring(self) -> PolyRing:
        return plane_ring(self.field)

    def subset(self, idx):
        return PointSet(self.field, tuple(self.points[i] for i in idx), self.seed)

    def to_json(self):
        return {
            "field": "Q" if self.field.p == 0 else self.field.p,
            "seed": self.seed,
            "points": [[self.field.to_str(c) for c in p] for p in self.points],
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        f = Field(data.get("field", 32003))
        pts = [tuple(f(Fraction(c)) if isinstance(c, str) else f(c) for c in p) for p in data["points"]]
        return cls(f, tuple(pts), data.get("seed"))


def random_points(n: int, field: Field, seed: int = 0) -> PointSet:
    """n distinct points of the affine chart z = 1, deterministic per seed."""
    p = field.p
    if p and p * p < n:
        raise PolyError(f"GF({p}) has only {p * p} affine points, {n} requested")
    rng = random.Random(seed)
    bound = p if p else 100
    seen = []
    have = set()
    while len(seen) < n:
        pt = (rng.randrange(bound), rng.randrange(bound), 1)
        if pt not in have:
            have.add(pt)
            seen.append(pt)
    return PointSet(field, tuple(seen), seed)


def point_prime(ring: PolyRing, pt) -> Ideal:
    """Two independent linear forms among the 2x2 minors of [[x,y,z],[a,b,c]]."""
    a, b, c = pt
    x, y, z = (ring.var(v) for v in VARS)
    cands = [x * b - y * a, x * c - z * a, y * c - z * b]
    chosen = []
    for f in cands:
        if f and piece_rank(chosen + [f], ring, 1) > len(chosen):
            chosen.append(f)
        if len(chosen) == 2:
            break
    return Ideal(ring, chosen)


def _intersect_balanced(ideals):
    while len(ideals) > 1:
        nxt = []
        for k in range(0, len(ideals) - 1, 2):
            nxt.append(intersect(ideals[k], ideals[k + 1]))
        if len(ideals) % 2:
            nxt.append(ideals[-1])
        ideals = nxt
    return ideals[0]


def ideal_of_points(P: PointSet) -> Ideal:
    if not len(P):
        raise PolyError("empty point set")
    ring = P.ring
    I = _intersect_balanced([point_prime(ring, pt) for pt in P.points])
    dim, height = dimension_height(I)
    if (dim, height) != (1, 2):
        raise AssertionError(f"ideal of points has dim {dim}, height {height}")
    return I


def evaluation_rank(points, field: Field, t: int) -> int:
    """Hilbert function of the reduced points at degree t (rank of evaluation)."""
    p = field.p
    mons = [(a, b, t - a - b) for a in range(t, -1, -1) for b in range(t - a, -1, -1)]
    rows = []
    for pt in points:
        row = []
        for e in mons:
            v = 1
            for c, k in zip(pt, e):
                if k:
                    v = v * (pow(c, k, p) if p else c ** k)
            row.append(v % p if p else v)
        rows.append(row)
    return rank(rows, p, len(mons))


# ---------------------------------------------------------------------------
# position


def initial_degree_for(n: int):
    """(s, h) with s least such that n < C(s+2, 2) and h = n - C(s+1, 2)."""
    if n < 1:
        raise PolyError("need at least one point")
    s = 0
    while n >= comb(s + 2, 2):
        s += 1
    return s, n - comb(s + 1, 2)


@dataclass
class PositionReport:
    n: int
    s: int
    h: int
    dim_Is: int
    dim_Is1: int
    dim_R1Is: int
    generic: bool
    tight: bool
    reg: int
    hilbert_values: list
    uniform: object = "untested"

    def to_json(self):
        return {
            "n": self.n,
            "s": self.s,
            "h": self.h,
            "flags": {"generic": self.generic, "tight": self.tight, "uniform": self.uniform},
            "dims": {"I_s": self.dim_Is, "I_s+1": self.dim_Is1, "R1*I_s": self.dim_R1Is},
            "reg": self.reg,
            "hilbert": self.hilbert_values,
        }


def product_span_rank(basis, ring: PolyRing, t: int) -> int:
    """dim_k of R_1 * span(basis) for a basis of degree-t forms."""
    prods = [ring.var(v) * f for v in ring.variables for f in basis]
    return piece_rank(prods, ring, t + 1)


def position_report(I: Ideal, n: int) -> PositionReport:
    ring = I.ring
    if ring.ngens != 3:
        raise PolyError("points live in k[x,y,z]")
    hd = hilbert(I)
    if hd.dim != 1 or hd.multiplicity != n:
        raise PolyError(f"R/I has dim {hd.dim} and degree {hd.multiplicity}, expected 1 and {n}")
    s, h = initial_degree_for(n)
    dim_s, basis_s = graded_piece(I, s)
    dim_s1, _ = graded_piece(I, s + 1)
    dim_r1 = product_span_rank(basis_s, ring, s)
    values = hd.values(s + 3)
    generic = all(v == min(comb(t + 2, 2), n) for t, v in enumerate(values))
    tight = generic and dim_r1 == min(3 * dim_s, dim_s1)
    # R/I is CM of dim 1: reg(R/I) is where the Hilbert function settles at n
    r = 0
    while hd.hfun(r) != n or any(hd.hfun(t) != n for t in range(r, r + 3)):
        r += 1
    return PositionReport(n, s, h, dim_s, dim_s1, dim_r1, generic, tight, r + 1, values)


def is_generic_subset(points, field: Field) -> bool:
    m = len(points)
    t = 0
    while True:
        want = min(comb(t + 2, 2), m)
        if evaluation_rank(points, field, t) != want:
            return False
        if want == m:
            return True
        t += 1


def _on_line(pts, field):
    return evaluation_rank(pts, field, 1) <= 2


def uniform_check(P: PointSet, m_max: int = None, max_subsets: int = 2 ** 14) -> dict:
    """Search for a subset that is not in generic position for its size.

    Subsets are scanned by increasing size so the first failure is minimal.
    A collinear witness is extended to every point of P on that line.
    """
    n = len(P)
    m_max = n if m_max is None else m_max
    if m_max > n:
        raise PolyError("m_max exceeds the number of points")
    work = sum(comb(n, m) for m in range(3, m_max + 1))
    if work > max_subsets:
        raise BudgetError(f"uniform check would visit {work} subsets (limit {max_subsets})")
    f = P.field
    for m in range(3, m_max + 1):
        for idx in combinations(range(n), m):
            pts = [P.points[i] for i in idx]
            if is_generic_subset(pts, f):
                continue
            witness = list(idx)
            if _on_line(pts, f):
                witness = [i for i in range(n) if i in idx or _on_line(pts[:2] + [P.points[i]], f)]
            return {
                "uniform": False,
                "witness": witness,
                "points": [[f.to_str(c) for c in P.points[i]] for i in witness],
                "checked_up_to": m,
            }
    return {"uniform": True if m_max == n else None, "witness": None, "points": None, "checked_up_to": m_max}


def conic_screen(P: PointSet) -> dict:
    """Cheap necessary condition for uniform position: no 3 on a line, no 6 on a conic."""
    f = P.field
    pts = P.points
    for idx in combinations(range(len(pts)), 3):
        if _on_line([pts[i] for i in idx], f):
            return {"passed": False, "witness": list(idx), "kind": "line"}
    for idx in combinations(range(len(pts)), 6):
        if evaluation_rank([pts[i] for i in idx], f, 2) < 6:
            return {"passed": False, "witness": list(idx), "kind": "conic"}
    return {"passed": True, "witness": None, "kind": None}


# ---------------------------------------------------------------------------
# predictions


def predicted_betti(s: int, h: int) -> BettiTable:
    """Betti table of the ideal of points in tight generic position."""
    if s < 2 or not 0 <= h <= s:
        raise PolyError("need s >= 2 and 0 <= h <= s")
    if 2 * h <= s:
        e = {(0, s): s - h + 1, (1, s + 1): s - 2 * h, (1, s + 2): h}
    else:
        e = {(0, s): s - h + 1, (0, s + 1): 2 * h - s, (1, s + 2): h}
    return BettiTable(e)


def predicted_regularity(s: int, h: int) -> int:
    return s if h == 0 else s + 1


def is_equigenerated(J: Ideal):
    degs = {g.total_degree() for g in J.gens}
    return degs.pop() if len(degs) == 1 else None


def map_degree(J: Ideal):
    """Degree of the plane map defined by an equigenerated height-2 ideal J."""
    s = is_equigenerated(J)
    if s is None:
        raise PolyError("map degree needs an equigenerated ideal")
    ring = J.ring
    m = Ideal(ring, [ring.var(v) for v in ring.variables])
    Jsat, _ = saturate(J, m)
    e_sat = hilbert(Jsat).multiplicity
    rp = rees_presentation(list(J.gens), shortcut=True)
    if not rp.fiber_multiplicity:
        raise PolyError("fiber multiplicity is zero")
    num = s * s - e_sat
    if num % rp.fiber_multiplicity:
        raise AssertionError(f"{num} is not divisible by the fiber multiplicity {rp.fiber_multiplicity}")
    return num // rp.fiber_multiplicity


# ---------------------------------------------------------------------------
# arrangements


def arrangement_gradient(d: int, n: int, seed: int = 0, field: Field = None, retries: int = 50):
    """Product F of n random linear forms in d variables and its gradient ideal."""
    field = field or Field()
    if n < d + 1:
        raise PolyError("need n >= d + 1 forms")
    if field.p and n % field.p == 0:
        raise PolyError("the characteristic divides n")
    names = [f"x{i + 1}" for i in range(d)] if d != 3 else list(VARS)
    ring = PolyRing(names, field)
    rng = random.Random(seed)
    bound = field.p if field.p else 50
    for _ in range(retries):
        coeffs = [[rng.randrange(bound) for _ in range(d)] for _ in range(n)]
        if all(rank([coeffs[i] for i in idx], field.p, d) == d for idx in combinations(range(n), d)):
            break
    else:
        raise PolyError("no sample with every d forms independent")
    forms = [sum((ring.var(v) * c for v, c in zip(names, row)), ring.zero) for row in coeffs]
    F = ring.one
    for l in forms:
        F = F * l
    grads = [F.derivative(v) for v in names]
    JF = Ideal(ring, grads)
    products = []
    for i in range(n):
        g = ring.one
        for k, l in enumerate(forms):
            if k != i:
                g = g * l
        products.append(g)
    phi = presentation(products)
    cert = {
        "linear_type": is_linear_type(grads),
        "g_condition": g_condition(phi, d)["holds"],
    }
    return F, JF, cert


# ---------------------------------------------------------------------------
# second-sector audit


def hilbert_burch_split(I: Ideal, s: int):
    """Minimal generators and presentation of I, split by generator degree."""
    res, betti = minimal_resolution(I)
    gens = list(res.maps[0].row(0))
    phi = res.maps[1]
    top = [i for i, d in enumerate(phi.row_shifts) if d == s]
    low = [i for i, d in enumerate(phi.row_shifts) if d == s + 1]
    cols = range(phi.ncols)
    Qm = phi.submatrix(top, cols)
    Lm = phi.submatrix(low, cols)
    return [gens[i] for i in top], [gens[i] for i in low], Qm, Lm, betti.of_ideal()


def expected_numerator(s: int):
    """Coefficients of 1 - 3t^s + (s-2)t^(2s-2) - (s-4)t^(2s-1)."""
    b = [0] * (2 * s)
    b[0] = 1
    b[s] -= 3
    b[2 * s - 2] += s - 2
    b[2 * s - 1] -= s - 4
    return b


def _formula(name, expected, computed):
    return {"name": name, "expected": expected, "computed": computed, "pass": expected == computed}


def sector2_audit(I: Ideal, n: int, points: PointSet = None, probe_primes=(), screen=False) -> dict:
    """Audit J = (I_s) for points with h = s - 2, s >= 5."""
    ring = I.ring
    rep = position_report(I, n)
    out = {"n": n, "s": rep.s, "h": rep.h, "position": rep.to_json(), "skipped": None}
    if rep.h != rep.s - 2 or rep.s < 5:
        out["skipped"] = "needs h = s - 2 and s >= 5"
        return out
    if not rep.tight:
        out["skipped"] = "not in tight generic position"
        return out
    s = rep.s
    if screen:
        if points is None:
            raise PolyError("the uniform screen needs the points")
        scr = conic_screen(points)
        out["screen"] = scr
        if not scr["passed"]:
            out["skipped"] = f"screen failed ({scr['kind']})"
            return out
    fs, gs, Qm, Lm, betti = hilbert_burch_split(I, s)
    J = Ideal(ring, fs)
    m = Ideal(ring, [ring.var(v) for v in ring.variables])
    out["betti"] = betti.to_json()
    out["shape"] = {"Q": list(Qm.shape), "L": list(Lm.shape)}
    k = s - 4
    ht_L = height_of_minors(Lm, k, target=3) if k > 0 else 3
    colon = quotient(J, I)
    _, ht_colon = dimension_height(colon)
    Jsat, steps = saturate(J, m)
    conds = {
        "finite_length": ht_colon == 3,
        "minors_height_3": ht_L == 3,
        "saturation_is_I": Jsat == I,
    }
    out["conditions"] = conds
    out["heights"] = {"minors_of_L": ht_L, "J:I": ht_colon}
    out["saturation"] = {"steps": steps, "J_saturated": Jsat == J}
    probes = []
    for P in probe_primes:
        probes.append({"prime": [str(g) for g in P.gens], "J_inside": P.contains_ideal(J), "I_inside": P.contains_ideal(I)})
    out["probes"] = probes
    formulas = []
    if all(conds.values()):
        hd = hilbert(J)
        formulas.append(_formula("numerator", expected_numerator(s), list(hd.numerator)))
        formulas.append(_formula("multiplicity", (s * s + 3 * s - 4) // 2, hd.multiplicity))
        formulas.append(_formula("linear_type", True, is_linear_type(fs)))
        rp = rees_presentation(fs, with_fiber=False, shortcut=True)
        formulas.append(_formula("rees_cm", True, cm_via_pd(rp.J)["cm"]))
        formulas.append(_formula("map_degree", (s * s - 3 * s + 4) // 2, map_degree(J)))
    out["formulas"] = formulas
    out["all_pass"] = all(f["pass"] for f in formulas) if formulas else None
    return out


def modified_example_ideal(seed: int = 0, field: Field = None) -> Ideal:
    """3-minors of a 4x3 matrix: random quadrics over the row (0, z, y)."""
    field = field or Field()
    ring = plane_ring(field)
    rng = random.Random(seed)
    quads = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    bound = field.p if field.p else 50
    rows = []
    for _ in range(3):
        rows.append([ring.from_terms([(e, rng.randrange(bound)) for e in quads]) for _ in range(3)])
    rows.append([ring.zero, ring("z"), ring("y")])
    M = PolyMatrix(ring, rows)
    return Ideal(ring, [g for g in M.minors(3) if g])
