"""Ideals: sums, products, intersections, quotients, saturation, Hilbert data."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

from .groebner import EXP_BITS, GroebnerBasis, eliminate, groebner_basis
from .linalg import rank, rref
from .poly import EXP_MAX, MonomialOrder, PolyError, PolyRing, Polynomial, RingMismatch


class Ideal:
    """Finitely generated ideal with a lazily computed reduced Groebner basis."""

    def __init__(self, ring: PolyRing, gens=()):
        self.ring = ring
        seen = set()
        keep = []
        for g in gens:
            if not isinstance(g, Polynomial):
                g = ring(g)
            if g.ring != ring:
                raise RingMismatch("generator from a different ring")
            if not g:
                continue
            key = g.normalized()
            if key in seen:
                continue
            seen.add(key)
            keep.append(g)
        self.gens = keep
        self._gb = None
        self._lock = threading.Lock()

    @classmethod
    def from_gb(cls, gb: GroebnerBasis):
        I = cls(gb.ring, gb.basis)
        I._gb = gb
        return I

    # groebner data ----------------------------------------------------------

    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    self._gb = groebner_basis(self.gens, ring=self.ring)
        return self._gb

    def reduce(self, f):
        return self.gb().reduce(f)

    def contains(self, f) -> bool:
        if not isinstance(f, Polynomial):
            f = self.ring(f)
        return not f or not self.gb().reduce(f)

    def __contains__(self, f):
        return self.contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def __le__(self, other):
        return other.contains_ideal(self)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.gb().basis == other.gb().basis

    def __hash__(self):
        return hash(tuple(self.gb().basis))

    def is_zero(self):
        return not self.gens

    def is_unit(self):
        return bool(self.gens) and self.gb().is_unit()

    def is_homogeneous(self):
        return all(g.multidegree() != "inhomogeneous" for g in self.gens)

    def degrees(self):
        return [g.multidegree() for g in self.gens]

    def lead_exponents(self):
        return [f.lead_exps() for f in self.gb().basis]

    def to_ring(self, ring):
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def to_json(self):
        return {"ring": self.ring.describe(), "generators": [str(g) for g in self.gens]}

    @classmethod
    def from_json(cls, data, ring=None):
        ring = ring or PolyRing.from_description(data["ring"])
        return cls(ring, [ring(s) for s in data["generators"]])

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.gens) + ")"

    def __add__(self, other):
        return combine("sum", self, other)

    def __mul__(self, other):
        return combine("product", self, other)

    def __pow__(self, k):
        return combine("power", self, k)


def unit_ideal(ring):
    return Ideal(ring, [ring.one])


def _check_same(A, B):
    if A.ring != B.ring:
        raise RingMismatch("ideals live in different rings")


def combine(op, A: Ideal, B) -> Ideal:
    if op == "sum":
        _check_same(A, B)
        return Ideal(A.ring, A.gens + B.gens)
    if op == "product":
        _check_same(A, B)
        return Ideal(A.ring, [a * b for a in A.gens for b in B.gens])
    if op == "power":
        k = int(B)
        if k < 0:
            raise PolyError("negative ideal power")
        if k == 0:
            return unit_ideal(A.ring)
        result = A
        for _ in range(k - 1):
            result = combine("product", result, A)
        return result
    raise PolyError(f"unknown ideal operation {op!r}")


# ---------------------------------------------------------------------------
# intersections and quotients


def tagged_ring(ring: PolyRing, tag="u"):
    """``ring`` with one extra variable of weight zero ordered above the rest."""
    name = tag
    while name in ring.variables:
        name += "_"
    blocks = [("grevlex", (0,))] + [(kind, tuple(i + 1 for i in idx)) for kind, idx in ring.order.blocks]
    grading = tuple((0,) + vec for vec in ring.grading)
    return PolyRing((name,) + ring.variables, ring.field, MonomialOrder(blocks), grading), name


def intersect(A: Ideal, B: Ideal) -> Ideal:
    """A ∩ B by eliminating u from u·A + (1−u)·B."""
    _check_same(A, B)
    ring = A.ring
    if A.is_zero() or B.is_zero():
        return Ideal(ring)
    if A.is_unit():
        return B
    if B.is_unit():
        return A
    T, u = tagged_ring(ring)
    uu = T.var(u)
    one_minus = T.one - uu
    gens = [uu * g.to_ring(T) for g in A.gens] + [one_minus * g.to_ring(T) for g in B.gens]
    out = eliminate(gens, [u], keep_ring=True)
    return Ideal.from_gb(groebner_basis([f.to_ring(ring) for f in out], ring=ring))


def intersect_all(ideals):
    ideals = list(ideals)
    if not ideals:
        raise PolyError("empty intersection")
    acc = ideals[0]
    for J in ideals[1:]:
        acc = intersect(acc, J)
    return acc


def quotient_element(A: Ideal, b: Polynomial) -> Ideal:
    """A : b = (A ∩ (b)) / b."""
    ring = A.ring
    if not b:
        return unit_ideal(ring)
    if A.contains(b):
        return unit_ideal(ring)
    C = intersect(A, Ideal(ring, [b]))
    gens = []
    for g in C.gens:
        q = g.divide_exact(b)
        gens.append(q)
    return Ideal(ring, gens)


def quotient(A: Ideal, B: Ideal) -> Ideal:
    _check_same(A, B)
    if B.is_zero():
        raise PolyError("quotient by the zero ideal")
    parts = [quotient_element(A, b) for b in B.gens]
    acc = parts[0]
    for P in parts[1:]:
        acc = intersect(acc, P)
    return Ideal.from_gb(acc.gb()) if acc.gens else acc


def saturate(A: Ideal, B: Ideal):
    """Iterate A : B until it stabilizes; returns (ideal, enlargements)."""
    steps = 0
    cur = A
    while True:
        nxt = quotient(cur, B)
        if nxt == cur:
            return cur, steps
        steps += 1
        cur = nxt


# ---------------------------------------------------------------------------
# dimension and Hilbert data


def _supports(exps_list):
    out = []
    for e in exps_list:
        mask = 0
        for i, a in enumerate(e):
            if a:
                mask |= 1 << i
        out.append(mask)
    return out


def dimension_from_leads(n, lead_exps):
    """Largest set of variables containing no lead monomial's support."""
    sup = _supports(lead_exps)
    if any(s == 0 for s in sup):
        return -1
    sup = sorted(set(sup))
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            m = 0
            for i in S:
                m |= 1 << i
            if all(s & ~m for s in sup):
                return size
    return 0


def dimension_height(A: Ideal):
    n = A.ring.ngens
    if A.is_zero():
        return n, 0
    d = dimension_from_leads(n, A.lead_exponents())
    if d < 0:
        return -1, n
    return d, n - d


def _minimalize(gens):
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _trim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


@lru_cache(maxsize=100000)
def _numerator(gens: tuple):
    """Hilbert series numerator of k[x]/(monomials) by pivot recursion:
    N(I) = N(I + (p)) + t^deg(p) N(I : p)."""
    gens = _minimalize(gens)
    if not gens:
        return (1,)
    sup = _supports(gens)
    disjoint = True
    seen = 0
    for s in sup:
        if s & seen:
            disjoint = False
            break
        seen |= s
    if disjoint:
        acc = [1]
        for g in gens:
            d = sum(g)
            f = [0] * (d + 1)
            f[0] = 1
            f[d] -= 1
            acc = _poly_mul(acc, f)
        return tuple(_trim(acc))
    n = len(gens[0])
    # pivot on a variable of the non-pure-power generators, so that the
    # pivot itself is never already in the ideal
    mixed = [g for g, s in zip(gens, sup) if s & (s - 1)]
    counts = [0] * n
    for g in mixed:
        for i, a in enumerate(g):
            if a:
                counts[i] += 1
    var = max(range(n), key=lambda i: (counts[i], -i))
    exps = sorted(g[var] for g in mixed if g[var])
    e = exps[len(exps) // 2]
    pivot = tuple(e if i == var else 0 for i in range(n))
    plus = tuple(gens) + (pivot,)
    colon = tuple(tuple(max(0, a - e) if i == var else a for i, a in enumerate(g)) for g in gens)
    left = _numerator(tuple(_minimalize(plus)))
    right = _numerator(tuple(_minimalize(colon)))
    shifted = [0] * e + list(right)
    return tuple(_trim(_poly_add(list(left), shifted)))


def hilbert_numerator(n, lead_exps):
    return list(_numerator(tuple(_minimalize([tuple(e) for e in lead_exps]))))


def _divide_one_minus_t(b):
    """Divide by (1 - t); returns None if not divisible."""
    if sum(b) != 0:
        return None
    q = []
    acc = 0
    for c in b[:-1]:
        acc += c
        q.append(acc)
    return q or [0]


@dataclass
class HilbertData:
    nvars: int
    dim: int
    height: int
    numerator: list
    multiplicity: int
    regularity: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def hfun(self, t: int) -> int:
        if t < 0:
            return 0
        n = self.nvars
        total = 0
        for k, c in enumerate(self.numerator):
            if c and t - k >= 0:
                total += c * comb(t - k + n - 1, n - 1)
        return total

    def values(self, upto: int):
        return [self.hfun(t) for t in range(upto + 1)]

    def reduced_numerator(self):
        """Numerator over (1 - t)^dim."""
        b = list(self.numerator)
        for _ in range(self.height):
            b = _divide_one_minus_t(b)
        return b

    def to_json(self):
        return {
            "dim": self.dim,
            "height": self.height,
            "numerator": self.numerator,
            "multiplicity": self.multiplicity,
            "regularity": self.regularity,
            "hfun": self.values(max(10, len(self.numerator))),
        }


def _standard_homogeneous(A: Ideal):
    for g in A.gens:
        degs = {sum(e) for e, _ in g.terms()}
        if len(degs) > 1:
            return False
    return True


def hilbert(A: Ideal) -> HilbertData:
    """Hilbert data of R/A for the standard grading (every variable degree 1)."""
    if not _standard_homogeneous(A):
        raise PolyError("hilbert requires a homogeneous ideal")
    n = A.ring.ngens
    leads = [] if A.is_zero() else A.lead_exponents()
    num = hilbert_numerator(n, leads)
    num = _trim(num)
    dim, height = dimension_height(A)
    if dim < 0:
        return HilbertData(n, -1, n, [0], 0)
    # order of vanishing of the numerator at t = 1 must equal the height
    b = list(num)
    order = 0
    while True:
        q = _divide_one_minus_t(b)
        if q is None:
            break
        b = q
        order += 1
    if order != height:
        raise AssertionError(f"Hilbert numerator vanishes to order {order} at 1, height is {height}")
    return HilbertData(n, dim, height, num, sum(b))


def monomials_of_degree(ring: PolyRing, t: int):
    """Exponent tuples of standard degree t, in decreasing monomial order."""
    n = ring.ngens
    out = []

    def rec(i, left, cur):
        if i == n - 1:
            out.append(tuple(cur + [left]))
            return
        for a in range(left, -1, -1):
            rec(i + 1, left - a, cur + [a])

    if t < 0:
        return []
    if n == 0:
        return [()] if t == 0 else []
    rec(0, t, [])
    out.sort(key=ring.mono, reverse=True)
    return out


def graded_piece(A: Ideal, t: int):
    """(dim_k A_t, row-reduced basis of A_t) from the Macaulay matrix."""
    ring = A.ring
    if not _standard_homogeneous(A):
        raise PolyError("graded_piece requires a homogeneous ideal")
    cols = monomials_of_degree(ring, t)
    index = {ring.mono(e): k for k, e in enumerate(cols)}
    rows = []
    for g in A.gens:
        dg = g.total_degree()
        if dg > t:
            continue
        for m in monomials_of_degree(ring, t - dg):
            mk = ring.mono(m)
            row = [0] * len(cols)
            for k, c in g._d.items():
                row[index[k + mk]] = c
            rows.append(row)
    red, piv = rref(rows, ring.field.p, len(cols))
    basis = []
    for row in red:
        basis.append(Polynomial(ring, {ring.mono(cols[k]): c for k, c in enumerate(row) if c}))
    return len(red), basis


def piece_rank(polys, ring: PolyRing, t: int) -> int:
    """Dimension of the k-span of homogeneous degree-t polynomials."""
    cols = monomials_of_degree(ring, t)
    index = {ring.mono(e): k for k, e in enumerate(cols)}
    rows = []
    for f in polys:
        row = [0] * len(cols)
        for k, c in f._d.items():
            row[index[k]] = c
        rows.append(row)
    return rank(rows, ring.field.p, len(cols))


def minimal_generators(A: Ideal):
    """Minimal homogeneous generating set, degree by degree (standard grading).

    Generators of degree t are kept only when they are not in the span of
    R_1 times the part of the ideal generated in lower degrees.
    """
    ring = A.ring
    if not _standard_homogeneous(A):
        raise PolyError("minimal generators need a homogeneous ideal")
    by_deg = {}
    for g in A.gens:
        by_deg.setdefault(g.total_degree(), []).append(g)
    kept = []
    for t in sorted(by_deg):
        lower = Ideal(ring, kept)
        sub = [lower.reduce(g) for g in by_deg[t]] if kept else list(by_deg[t])
        cols = monomials_of_degree(ring, t)
        index = {ring.mono(e): k for k, e in enumerate(cols)}
        rows = []
        for f in sub:
            row = [0] * len(cols)
            for k, c in f._d.items():
                row[index[k]] = c
            rows.append(row)
        # greedy: keep generator i when it raises the rank of the reduced span
        cur = []
        r = 0
        for g, row in zip(by_deg[t], rows):
            trial = cur + [row]
            nr = rank(trial, ring.field.p, len(cols))
            if nr > r:
                cur = trial
                r = nr
                kept.append(g)
    return kept
