"""Independent reference computations used by the tests.

sympy supplies Groebner bases and polynomial arithmetic; plain dense
elimination supplies Hilbert functions from Macaulay matrices.
"""
from itertools import combinations_with_replacement

import sympy
from hypothesis import strategies as st

from hbforge.poly import Polynomial, PolyRing


def to_sympy(f: Polynomial):
    gens = sympy.symbols(f.ring.variables)
    p = f.ring.field.p
    expr = sympy.Integer(0)
    for exps, c in f.terms():
        term = sympy.Rational(c) if not p else sympy.Integer(f.ring.field.lift(c))
        for g, e in zip(gens, exps):
            term *= g ** e
        expr += term
    return sympy.Poly(expr, *gens, modulus=p) if p else sympy.Poly(expr, *gens, domain="QQ")


def from_sympy(poly, ring: PolyRing) -> Polynomial:
    terms = [(m, int(c) if ring.field.p else sympy.Rational(c)) for m, c in poly.terms()]
    from fractions import Fraction

    fixed = []
    for m, c in terms:
        if not ring.field.p:
            c = Fraction(int(c.p), int(c.q))
        fixed.append((tuple(m), ring.field(c)))
    return ring.from_terms(fixed)


def sympy_reduced_gb(polys, ring: PolyRing):
    """Reduced monic Groebner basis in grevlex (or lex), as our Polynomials."""
    gens = sympy.symbols(ring.variables)
    order = "grevlex" if ring.order.describe(ring.variables) == "grevlex" else "lex"
    exprs = [to_sympy(f).as_expr() for f in polys]
    kw = {"modulus": ring.field.p} if ring.field.p else {"domain": "QQ"}
    G = sympy.groebner(exprs, *gens, order=order, **kw)
    out = []
    for g in G.exprs:
        P = sympy.Poly(g, *gens, **kw)
        out.append(from_sympy(P, ring).monic())
    return out


def monomials(n, t):
    out = []
    for combo in combinations_with_replacement(range(n), t):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def macaulay_hilbert(gens, t):
    """dim (R/I)_t from the rank of the degree-t Macaulay matrix (homogeneous gens)."""
    ring = gens[0].ring
    n = ring.ngens
    p = ring.field.p
    cols = {m: i for i, m in enumerate(monomials(n, t))}
    rows = []
    for g in gens:
        dg = g.total_degree()
        if dg > t:
            continue
        for m in monomials(n, t - dg):
            row = [0] * len(cols)
            for e, c in g.terms():
                row[cols[tuple(a + b for a, b in zip(e, m))]] = c
            rows.append(row)
    return len(cols) - rank_mod_p(rows, p)


# ---------------------------------------------------------------------------
# hypothesis strategies


def polynomials(ring: PolyRing, max_deg=4, max_terms=5, coeff_bound=None, homogeneous_degree=None):
    p = ring.field.p
    bound = coeff_bound or (p - 1 if p else 9)
    n = ring.ngens

    if homogeneous_degree is not None:
        mons = monomials(n, homogeneous_degree)
        exps = st.sampled_from(mons)
    else:
        exps = st.lists(st.integers(0, n - 1), max_size=max_deg).map(lambda idx: tuple(idx.count(i) for i in range(n)))
    coeffs = st.integers(1, bound) | st.integers(-bound, -1)
    return st.lists(st.tuples(exps, coeffs), min_size=1, max_size=max_terms).map(
        lambda ts: ring.from_terms([(e, ring.field(c)) for e, c in ts])
    )


def nonzero_polynomials(ring, **kw):
    return polynomials(ring, **kw).filter(bool)


# ---------------------------------------------------------------------------
# Betti / Hilbert alternating-sum identity


def _weights(ring):
    return tuple(sum(col) for col in zip(*ring.grading))


def _count_weighted(weights, t):
    """Number of monomials of weighted degree t."""
    ways = [1] + [0] * t
    for w in weights:
        if w == 0:
            raise ValueError("zero weight")
        for s in range(w, t + 1):
            ways[s] += ways[s - w]
    return ways[t]


def _standard_monomials(weights, leads, t):
    """Monomials of weighted degree t outside the monomial ideal of ``leads``."""
    n = len(weights)
    count = 0

    def rec(i, left, cur):
        nonlocal count
        if i == n:
            if left == 0 and not any(all(a <= b for a, b in zip(l, cur)) for l in leads):
                count += 1
            return
        w = weights[i]
        for e in range(left // w + 1):
            cur.append(e)
            rec(i + 1, left - e * w, cur)
            cur.pop()

    rec(0, t, [])
    return count


def betti_hilbert_identity(ideal, res, upto=None):
    """sum_i (-1)^i beta_ij #R_{t-j} equals #standard monomials of degree t."""
    ring = ideal.ring
    w = _weights(ring)
    table = res.betti()
    leads = ideal.lead_exponents() if not ideal.is_zero() else []
    top = max((j for _, j in table.entries), default=0)
    upto = top + 2 if upto is None else upto
    for t in range(upto + 1):
        lhs = sum((-1) ** i * b * _count_weighted(w, t - j) for (i, j), b in table.entries.items() if t >= j)
        if lhs != _standard_monomials(w, leads, t):
            return False
    return True


# ---------------------------------------------------------------------------
# Rees ideal by linear algebra: J_(a,b) = ker( k[x]_a (x) k[t]_b -> k[x]_(a+Db) )


def nullspace_mod_p(cols, p):
    """Kernel of the matrix whose columns are sparse dicts row -> value."""
    rows = sorted({r for c in cols for r in c})
    index = {r: i for i, r in enumerate(rows)}
    m, n = len(rows), len(cols)
    A = [[0] * n for _ in range(m)]
    for j, c in enumerate(cols):
        for r, v in c.items():
            A[index[r]][j] = v % p
    pivots = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [v * inv % p for v in A[rank]]
        for i in range(m):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-A[i][fc]) % p
        basis.append(v)
    return basis


def rees_mingen_counts(gens, max_a, max_b):
    """Minimal generator counts of the Rees ideal of equigenerated ``gens`` in
    bidegrees (a, b) with a <= max_a, 1 <= b <= max_b."""
    ring = gens[0].ring
    p = ring.field.p
    nx, nt = ring.ngens, len(gens)
    powers = {}

    def fpow(tm):
        if tm not in powers:
            acc = ring.one
            for f, e in zip(gens, tm):
                acc = acc * f ** e
            powers[tm] = acc
        return powers[tm]

    kernels = {}
    counts = {}
    for b in range(0, max_b + 1):
        for a in range(0, max_a + 1):
            basis = [(xm, tm) for tm in monomials(nt, b) for xm in monomials(nx, a)]
            cols = []
            for xm, tm in basis:
                img = fpow(tm) * ring.monomial(xm)
                cols.append({e: c for e, c in img.terms()})
            K = nullspace_mod_p(cols, p)
            kernels[(a, b)] = [{basis[i]: v[i] for i in range(len(basis)) if v[i]} for v in K]
            if b == 0 or not K:
                continue
            pos = {key: i for i, key in enumerate(basis)}
            lower = []
            for i in range(nx):
                for vec in kernels.get((a - 1, b), []):
                    row = [0] * len(basis)
                    for (xm, tm), c in vec.items():
                        row[pos[(tuple(e + (k == i) for k, e in enumerate(xm)), tm)]] = c
                    lower.append(row)
            for j in range(nt):
                for vec in kernels.get((a, b - 1), []):
                    row = [0] * len(basis)
                    for (xm, tm), c in vec.items():
                        row[pos[(xm, tuple(e + (k == j) for k, e in enumerate(tm)))]] = c
                    lower.append(row)
            extra = len(K) - rank_mod_p(lower, p)
            if extra:
                counts[(a, b)] = extra
    return counts
