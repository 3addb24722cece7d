"""Syzygies, minimal graded free resolutions, Betti tables, determinantal
ideals and the Buchsbaum–Rim complex."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .groebner import ModuleLayout, _entry, _reduce, buchberger
from .ideal import Ideal, dimension_height
from .matrix import PolyMatrix
from .poly import PolyError, PolyRing, Polynomial


def _scalar(shift):
    return sum(shift) if isinstance(shift, tuple) else shift


def _zero_shift(ring):
    return 0 if len(ring.grading) == 1 else (0,) * len(ring.grading)


# ---------------------------------------------------------------------------
# module helpers


def _vec_degree(ring, layout, d):
    return layout.degree(max(d))


def _echelon_insert(rows, v, p):
    """Reduce sparse vector ``v`` by echelon ``rows`` ({pivot: row}); insert
    it when independent.  Returns True if it was independent."""
    v = dict(v)
    while v:
        k = max(v)
        row = rows.get(k)
        if row is None:
            inv = pow(v[k], -1, p) if p else 1 / v[k]
            rows[k] = {m: (c * inv % p if p else c * inv) for m, c in v.items()}
            return True
        c = v[k]
        for m, a in row.items():
            w = v.get(m, 0) - c * a
            if p:
                w %= p
            if w:
                v[m] = w
            else:
                v.pop(m, None)
    return False


def minimal_module_generators(ring, layout, elems):
    """Minimal homogeneous generators of the submodule spanned by ``elems``.

    Degree by degree, candidates are reduced modulo a Groebner basis of the
    generators kept in lower degrees and a greedy rank test picks a basis of
    what is left.  Input order breaks ties.
    """
    p = ring.field.p
    items = [(layout.degree(max(e)), i, e) for i, e in enumerate(elems) if e]
    items.sort(key=lambda t: (t[0], t[1]))
    kept = []
    pos = 0
    while pos < len(items):
        deg = items[pos][0]
        batch = []
        while pos < len(items) and items[pos][0] == deg:
            batch.append(items[pos][2])
            pos += 1
        if kept:
            gb, _ = buchberger(ring, kept, layout=layout)
            entries = [_entry(ring, b) for b in gb]
        else:
            entries = []
        rows = {}
        for e in batch:
            nf = _reduce(ring, dict(e), entries) if entries else dict(e)
            if nf and _echelon_insert(rows, nf, p):
                kept.append(e)
    return kept


def _layout_for_rows(ring, row_shifts):
    return ModuleLayout(ring, [_scalar(s) for s in row_shifts])


def _columns_to_dicts(M: PolyMatrix, layout):
    return [layout.encode(col) for col in M.columns()]


def image_minimal(M: PolyMatrix) -> PolyMatrix:
    """Drop redundant columns of a graded matrix (minimal generators of the image)."""
    ring = M.ring
    rs = M.row_shifts if M.graded else [_zero_shift(ring)] * M.nrows
    layout = _layout_for_rows(ring, rs)
    cols = _columns_to_dicts(M, layout)
    keep_ids = {id(c) for c in minimal_module_generators(ring, layout, cols)}
    idx = [j for j, c in enumerate(cols) if id(c) in keep_ids]
    idx.sort(key=lambda j: (_scalar(M.col_shifts[j]) if M.graded else 0, j))
    return M.submatrix(range(M.nrows), idx)


def syzygies(M: PolyMatrix, minimal=True) -> PolyMatrix:
    """Generators of ker(M) as the columns of a matrix.

    Computed from a Groebner basis of the module spanned by the stacked
    vectors (column_j, e_j) with the first block weighted to dominate; basis
    vectors whose leading term lies in the second block have zero first block
    and their second block runs over generators of the kernel.
    """
    ring = M.ring
    r, k = M.nrows, M.ncols
    zs = _zero_shift(ring)
    rs = list(M.row_shifts) if M.graded else [zs] * r
    cs = list(M.col_shifts) if M.graded else [zs] * k
    if k == 0:
        return PolyMatrix(ring, [], [], []) if M.graded else PolyMatrix(ring, [])
    shifts = [_scalar(s) for s in rs] + [_scalar(s) for s in cs]
    weights = [1] * r + [0] * k
    layout = ModuleLayout(ring, shifts, weights)
    elems = []
    for j in range(k):
        col = M.col(j) + [ring.one if i == j else ring.zero for i in range(k)]
        elems.append(layout.encode(col))
    gb, _ = buchberger(ring, elems, layout=layout, product_criterion=False)
    syz = [b for b in gb if layout.comp(max(b)) >= r]
    sub = ModuleLayout(ring, [_scalar(s) for s in cs])
    moved = []
    for b in syz:
        parts = layout.decode(b)
        moved.append(sub.encode(parts[r:]))
    if minimal:
        moved = minimal_module_generators(ring, sub, moved)
    cols = [sub.decode(d) for d in moved]
    if not cols:
        return PolyMatrix(ring, [[] for _ in range(k)], cs, [])
    entries = [[cols[c][i] for c in range(len(cols))] for i in range(k)]
    if len(ring.grading) == 1:
        new_cs = [sub.degree(max(d)) for d in moved]
    else:
        new_cs = [_col_multidegree(ring, col, cs) for col in cols]
    return PolyMatrix(ring, entries, cs, new_cs, check=False)


def _col_multidegree(ring, col, row_shifts):
    for f, s in zip(col, row_shifts):
        if f:
            d = f.multidegree()
            d = d if isinstance(d, tuple) else (d,)
            return tuple(a + b for a, b in zip(d, s))
    raise PolyError("zero column")


# ---------------------------------------------------------------------------
# Betti tables and resolutions


class BettiTable:
    """Graded Betti numbers beta[i, j] (homological index i, internal degree j)."""

    def __init__(self, entries):
        self.entries = {(i, j): b for (i, j), b in entries.items() if b}

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    @property
    def length(self):
        return max((i for i, _ in self.entries), default=0)

    @property
    def regularity(self):
        return max((j - i for i, j in self.entries), default=0)

    def total(self, i):
        return sum(b for (k, _), b in self.entries.items() if k == i)

    def row(self, i):
        return {j: b for (k, j), b in sorted(self.entries.items()) if k == i}

    def of_ideal(self):
        """Table of the ideal I from the table of R/I (drop the R term)."""
        return BettiTable({(i - 1, j): b for (i, j), b in self.entries.items() if i >= 1})

    def hilbert(self, t, nvars):
        """Alternating sum  sum (-1)^i beta[i,j] dim R_{t-j}."""
        total = 0
        for (i, j), b in self.entries.items():
            if t - j >= 0:
                total += (-1) ** i * b * comb(t - j + nvars - 1, nvars - 1)
        return total

    def to_json(self):
        return [{"i": i, "j": j, "beta": b} for (i, j), b in sorted(self.entries.items())]

    @classmethod
    def from_json(cls, data):
        return cls({(d["i"], d["j"]): d["beta"] for d in data})

    def __str__(self):
        if not self.entries:
            return "(zero)"
        imax = self.length
        lo = min(j - i for i, j in self.entries)
        hi = self.regularity
        width = max(len(str(b)) for b in self.entries.values())
        width = max(width, len(str(imax)))
        lines = ["      " + " ".join(str(i).rjust(width) for i in range(imax + 1))]
        lines.append("total: " + " ".join(str(self.total(i)).rjust(width) for i in range(imax + 1)))
        for r in range(lo, hi + 1):
            cells = []
            for i in range(imax + 1):
                b = self[i, i + r]
                cells.append((str(b) if b else ".").rjust(width))
            lines.append(f"{r:>5}: " + " ".join(cells))
        return "\n".join(lines)

    def __repr__(self):
        return f"BettiTable({self.entries})"


class FreeResolution:
    """Chain of graded maps; ``maps[i-1]`` is d_i : F_i -> F_{i-1}."""

    def __init__(self, ring, maps, minimal=False, base_shifts=None):
        self.ring = ring
        self.maps = list(maps)
        self.minimal = minimal
        if base_shifts is None:
            base_shifts = self.maps[0].row_shifts if self.maps else (_zero_shift(ring),)
        self.base_shifts = tuple(base_shifts)

    @property
    def length(self):
        return len(self.maps)

    def shifts(self, i):
        if i == 0:
            return self.base_shifts
        return self.maps[i - 1].col_shifts

    def ranks(self):
        return [len(self.base_shifts)] + [m.ncols for m in self.maps]

    def betti(self) -> BettiTable:
        entries = {}
        for i in range(self.length + 1):
            for s in self.shifts(i):
                key = (i, _scalar(s))
                entries[key] = entries.get(key, 0) + 1
        return BettiTable(entries)

    def is_complex(self) -> bool:
        for a, b in zip(self.maps, self.maps[1:]):
            if not (a * b).is_zero():
                return False
        return True

    def has_unit_entries(self) -> bool:
        return any(m.has_unit_entry() for m in self.maps)

    def to_json(self):
        return {
            "ring": self.ring.describe(),
            "minimal": self.minimal,
            "maps": [m.to_json() for m in self.maps],
            "betti": self.betti().to_json(),
        }


def _pivot_out(maps, k, r0, c0):
    """Split off the trivial summand at the unit entry (r0, c0) of maps[k]."""
    A = maps[k]
    ring = A.ring
    u = A[r0, c0]
    inv = ring.field.inv(u.lc)
    colc = A.col(c0)
    rowr = A.row(r0)
    new = []
    for i in range(A.nrows):
        if i == r0:
            continue
        f = colc[i]
        row = []
        for j in range(A.ncols):
            if j == c0:
                continue
            e = A[i, j]
            if f and rowr[j]:
                e = e - (f * rowr[j]).scale(inv)
            row.append(e)
        new.append(row)
    rs = [s for i, s in enumerate(A.row_shifts) if i != r0]
    cs = [s for j, s in enumerate(A.col_shifts) if j != c0]
    out = list(maps)
    out[k] = PolyMatrix(ring, new, rs, cs, check=False)
    if k > 0:
        out[k - 1] = maps[k - 1].delete_col(r0)
    if k + 1 < len(maps):
        out[k + 1] = maps[k + 1].delete_row(c0)
    return out


def minimalize(maps):
    """Remove every unit entry by pivoting.  Among the unit entries of a map
    the pivot is the one of largest degree, then smallest row, then column."""
    maps = list(maps)
    k = 0
    while k < len(maps):
        A = maps[k]
        best = None
        for i in range(A.nrows):
            for j in range(A.ncols):
                e = A[i, j]
                if e and e.is_constant():
                    key = (-_scalar(A.col_shifts[j]), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            k += 1
            continue
        maps = _pivot_out(maps, k, best[1], best[2])
    # trailing zero maps vanish
    while maps and maps[-1].ncols == 0:
        maps.pop()
    return maps


def resolve_matrix(M: PolyMatrix, max_length=None) -> FreeResolution:
    """Minimal graded free resolution of coker M."""
    ring = M.ring
    if not M.graded:
        M = PolyMatrix.graded_from(ring, M.entries)
    if max_length is None:
        max_length = ring.ngens + 1
    d = image_minimal(M)
    maps = []
    base = M.row_shifts
    while d.ncols and len(maps) < max_length:
        maps.append(d)
        d = syzygies(d)
    if d.ncols:
        raise PolyError("resolution longer than the number of variables allows")
    maps = minimalize(maps)
    base = maps[0].row_shifts if maps else base
    return FreeResolution(ring, maps, minimal=True, base_shifts=base)


def ideal_row(I: Ideal) -> PolyMatrix:
    ring = I.ring
    gens = sorted(I.gens, key=lambda g: _scalar(_mdeg(g)))
    return PolyMatrix(ring, [gens], [_zero_shift(ring)], [_mdeg(g) for g in gens])


def _mdeg(g):
    d = g.multidegree()
    if d == "inhomogeneous":
        raise PolyError("inhomogeneous generator")
    return d


# callables notified with (source, resolution) after every minimal resolution
RESOLUTION_OBSERVERS = []


def minimal_resolution(obj):
    """(FreeResolution, BettiTable) of R/I for an Ideal, or of coker M."""
    if isinstance(obj, Ideal):
        if obj.is_zero():
            res = FreeResolution(obj.ring, [], True, (_zero_shift(obj.ring),))
            return res, res.betti()
        res = resolve_matrix(ideal_row(obj))
    else:
        res = resolve_matrix(obj)
    for observe in RESOLUTION_OBSERVERS:
        observe(obj, res)
    return res, res.betti()


def hilbert_consistent(res: FreeResolution, hilbert_data, upto=None) -> bool:
    """Betti alternating sums against a Hilbert function, degree by degree."""
    table = res.betti()
    n = res.ring.ngens
    if upto is None:
        upto = 2 * max(table.regularity, 0) + 2 + max((j for _, j in table.entries), default=0)
    return all(table.hilbert(t, n) == hilbert_data.hfun(t) for t in range(upto + 1))


# ---------------------------------------------------------------------------
# determinantal ideals


def signed_maximal_minors(phi: PolyMatrix):
    """Delta_i = (-1)^(i+1) det(phi without row i), i = 1..n."""
    n, m = phi.nrows, phi.ncols
    if m != n - 1:
        raise PolyError("signed maximal minors need an n x (n-1) matrix")
    cols = tuple(range(m))
    out = []
    for i in range(n):
        rows = tuple(k for k in range(n) if k != i)
        d = phi.det_sub(rows, cols)
        out.append(d if i % 2 == 0 else -d)
    # Laplace: phi^t * Delta = 0
    for j in range(m):
        acc = phi.ring.zero
        for i in range(n):
            if phi[i, j] and out[i]:
                acc = acc + phi[i, j] * out[i]
        if acc:
            raise AssertionError("Laplace identity failed")
    return out


def minors_ideal(M: PolyMatrix, k: int, limit=None) -> Ideal:
    if k <= 0:
        return Ideal(M.ring, [M.ring.one])
    gens = []
    for d in M.minors(k):
        if d:
            gens.append(d)
            if limit and len(gens) >= limit:
                break
    return Ideal(M.ring, gens)


def height_of_minors(M: PolyMatrix, k: int, target=None) -> int:
    """Height of I_k(M); with ``target`` minors are added in batches and the
    search stops as soon as the height reaches the target."""
    ring = M.ring
    if k <= 0:
        return ring.ngens
    if k > min(M.nrows, M.ncols):
        return 0
    gens = []
    it = M.minors(k)
    batch = max(4, ring.ngens)
    exhausted = False
    best = 0
    while not exhausted:
        added = 0
        for d in it:
            if d:
                gens.append(d)
                added += 1
                if added >= batch:
                    break
        else:
            exhausted = True
        if not gens:
            return 0
        _, h = dimension_height(Ideal(ring, gens))
        best = h
        if target is not None and h >= target:
            return h
        batch *= 2
    return best


@dataclass
class TwoDegreeShape:
    """phi = [Phi1 over Phi2]: a rows of degree eps1, n - a rows of degree eps2."""

    n: int
    a: int
    eps1: int
    eps2: int
    phi: PolyMatrix

    def __post_init__(self):
        n, a = self.n, self.a
        if self.phi.shape != (n, n - 1):
            raise PolyError("phi must be n x (n-1)")
        if not 1 <= a <= n - 1:
            raise PolyError("need 1 <= a <= n-1")
        if not 1 <= self.eps2 <= self.eps1:
            raise PolyError("need 1 <= eps2 <= eps1")
        for i in range(n):
            want = self.eps1 if i < a else self.eps2
            for j in range(n - 1):
                e = self.phi[i, j]
                if e and e.multidegree() != want:
                    raise PolyError(f"entry ({i},{j}) must be a form of degree {want}")

    @property
    def D(self):
        return self.a * self.eps1 + (self.n - self.a) * self.eps2

    @property
    def Phi1(self):
        return self.phi.submatrix(range(self.a), range(self.n - 1))

    @property
    def Phi2(self):
        return self.phi.submatrix(range(self.a, self.n), range(self.n - 1))

    def graded_phi(self):
        D = self.D
        rs = [D - self.eps1] * self.a + [D - self.eps2] * (self.n - self.a)
        return PolyMatrix(self.phi.ring, self.phi.entries, rs, [D] * (self.n - 1))

    def ideal_I(self):
        return Ideal(self.phi.ring, signed_maximal_minors(self.phi))

    def check_height(self):
        return height_of_minors(self.phi, self.n - 1, target=2) == 2


def fixed_minors(shape: TwoDegreeShape) -> Ideal:
    """J: the a maximal minors keeping every row of Phi2; f_i omits row i of
    Phi1 and carries the sign (-1)^(i+1)."""
    phi = shape.phi
    n = shape.n
    cols = tuple(range(n - 1))
    gens = []
    for i in range(shape.a):
        rows = tuple(k for k in range(n) if k != i)
        d = phi.det_sub(rows, cols)
        gens.append(d if i % 2 == 0 else -d)
    return Ideal(phi.ring, gens)


def fixed_minor_list(shape: TwoDegreeShape):
    phi = shape.phi
    n = shape.n
    cols = tuple(range(n - 1))
    out = []
    for i in range(shape.a):
        rows = tuple(k for k in range(n) if k != i)
        d = phi.det_sub(rows, cols)
        out.append(d if i % 2 == 0 else -d)
    return out


# ---------------------------------------------------------------------------
# Buchsbaum–Rim complex


def _divided_power_basis(r, i):
    """Exponent vectors of length r summing to i, lexicographically descending."""
    out = []

    def rec(k, left, cur):
        if k == r - 1:
            out.append(tuple(cur + [left]))
            return
        for a in range(left, -1, -1):
            rec(k + 1, left - a, cur + [a])

    if r == 0:
        return [()] if i == 0 else []
    rec(0, i, [])
    return out


def buchsbaum_rim(psi: PolyMatrix) -> FreeResolution:
    """Buchsbaum–Rim complex of psi : R(-delta)^s -> R^r (r <= s).

    F_1 = F, F_2 = wedge^{r+1} F via theta (signed r-minors), and for i >= 1
    F_{i+2} = D_i(G*) (x) wedge^{r+1+i} F with the contraction differential.
    """
    ring = psi.ring
    r, s = psi.nrows, psi.ncols
    if r > s:
        raise PolyError("Buchsbaum-Rim complex needs rank G <= rank F")
    degs = set()
    for j in range(s):
        for i in range(r):
            e = psi[i, j]
            if e:
                d = e.multidegree()
                if d == "inhomogeneous":
                    raise PolyError("psi entries must be forms")
                degs.add(d)
    if len(degs) > 1:
        raise PolyError("psi must have a uniform entry degree")
    delta = degs.pop() if degs else 1
    z = ring.zero
    maps = [PolyMatrix(ring, psi.entries, [0] * r, [delta] * s)]
    wedge = list(combinations(range(s), r + 1))
    if not wedge:
        return FreeResolution(ring, maps, minimal=False, base_shifts=[0] * r)
    # theta: wedge^{r+1} F -> F
    theta = [[z] * len(wedge) for _ in range(s)]
    all_rows = tuple(range(r))
    for c, I in enumerate(wedge):
        for j, ij in enumerate(I, start=1):
            cols = tuple(k for k in I if k != ij)
            d = psi.det_sub(all_rows, cols)
            if d:
                theta[ij][c] = d if (r + 1 - j) % 2 == 0 else -d
    maps.append(PolyMatrix(ring, theta, [delta] * s, [(r + 1) * delta] * len(wedge), check=False))
    prev_basis = [((0,) * r, I) for I in wedge]
    i = 1
    while r + 1 + i <= s:
        wedge_i = list(combinations(range(s), r + 1 + i))
        basis = [(alpha, I) for alpha in _divided_power_basis(r, i) for I in wedge_i]
        index = {b: k for k, b in enumerate(prev_basis)}
        mat = [[z] * len(basis) for _ in prev_basis]
        for c, (alpha, I) in enumerate(basis):
            for k in range(r):
                if not alpha[k]:
                    continue
                beta = tuple(a - (1 if t == k else 0) for t, a in enumerate(alpha))
                for pos, ij in enumerate(I):
                    coef = psi[k, ij]
                    if not coef:
                        continue
                    J = tuple(x for x in I if x != ij)
                    row = index[(beta if i > 1 else (0,) * r, J)]
                    mat[row][c] = mat[row][c] + (coef if pos % 2 == 0 else -coef)
        maps.append(PolyMatrix(ring, mat, [(r + i) * delta] * len(prev_basis), [(r + 1 + i) * delta] * len(basis), check=False))
        prev_basis = basis
        i += 1
    return FreeResolution(ring, maps, minimal=False, base_shifts=[0] * r)


def br_expected_ranks(r, s):
    """beta_i = C(r-1+i, i) C(s, i+r+1) for 0 <= i <= s-r-1."""
    return [comb(r - 1 + i, i) * comb(s, i + r + 1) for i in range(s - r)]


def acyclicity_check(C: FreeResolution) -> dict:
    """Buchsbaum–Eisenbud criterion: expected ranks from the end and
    grade I_{r_i}(d_i) >= i for every map."""
    ranks = C.ranks()
    m = C.length
    expected = [0] * (m + 2)
    for i in range(m, 0, -1):
        expected[i] = ranks[i] - expected[i + 1]
    # grades: computed grade of I_{r_i}(d_i); required: the threshold i
    out = {"ranks": expected[1 : m + 1], "grades": [], "required": list(range(1, m + 1)), "acyclic": True, "reason": None}
    if not C.is_complex():
        out.update(acyclic=False, reason="maps do not compose to zero")
        return out
    for i in range(1, m + 1):
        ri = expected[i]
        d = C.maps[i - 1]
        if ri < 0 or ri > min(d.nrows, d.ncols):
            out["grades"].append(None)
            out.update(acyclic=False, reason=f"expected rank {ri} of d_{i} impossible")
            return out
        if ri == 0:
            out["grades"].append(C.ring.ngens)
            continue
        h = height_of_minors(d, ri, target=i)
        out["grades"].append(h)
        if h == 0:
            out.update(acyclic=False, reason=f"I_{ri}(d_{i}) is zero")
            return out
        if h < i:
            out.update(acyclic=False, reason=f"grade I_{ri}(d_{i}) = {h} < {i}")
            return out
    return out
