"""Buchberger engine over packed monomials.

The engine works on plain dicts ``{packed key: coefficient}`` so the same code
serves ideals (component id 0) and submodules of free modules (component id
c+1, see ``PolyRing.module_key``).  Pair handling follows Gebauer and Moeller;
pairs are selected by lowest lcm degree with ties broken by the pair indices,
and reduction always uses the first usable basis element, so results do not
depend on anything but the input.
"""
from __future__ import annotations

import contextvars
import heapq
from dataclasses import dataclass

from .poly import Polynomial, PolyError, PolyRing, RingMismatch, EXP_BITS, EXP_MAX, KEY_BITS


class BudgetError(RuntimeError):
    """A resource cap was hit; the computation was abandoned."""


@dataclass(frozen=True)
class Budget:
    max_degree: int = 40
    max_basis: int = 20000


_budget = contextvars.ContextVar("hbforge_budget", default=Budget())


def current_budget() -> Budget:
    return _budget.get()


def set_budget(budget: Budget):
    """Install ``budget`` for the current context; returns a reset token."""
    return _budget.set(budget)


def reset_budget(token):
    _budget.reset(token)


# ---------------------------------------------------------------------------
# module keys


def module_key(ring: PolyRing, comp: int, shift: int = 0, weight: int = 0) -> int:
    """Offset added to a ring monomial to place it in component ``comp``.

    ``shift`` enters the leading order field (so degree-shifted components
    compare by shifted degree) and ``weight`` dominates everything, which is
    how position-over-term blocks are expressed.
    """
    off = (comp + 1) << ring.pos_shift
    if shift:
        off += shift << (ring.key_shift + (ring.nfields - 1) * KEY_BITS)
    if weight:
        off += weight << ring.weight_shift
    return off


SHIFT_BASE = 1 << 20


class ModuleLayout:
    """Component offsets plus the degree shift of each component."""

    def __init__(self, ring: PolyRing, shifts, weights=None):
        self.ring = ring
        self.shifts = list(shifts)
        self.weights = list(weights) if weights is not None else [0] * len(self.shifts)
        self.offsets = [
            module_key(ring, c, SHIFT_BASE + s if ring.nfields else 0, w)
            for c, (s, w) in enumerate(zip(self.shifts, self.weights))
        ]
        self._by_pos = {c + 1: c for c in range(len(self.shifts))}

    @property
    def rank(self):
        return len(self.shifts)

    def comp(self, key: int) -> int:
        return ((key & self.ring.pmask) >> self.ring.pos_shift) - 1

    def split(self, key: int):
        c = self.comp(key)
        return c, key - self.offsets[c]

    def encode(self, columns):
        """Column given as a list of Polynomials (one per component) to a dict."""
        d = {}
        for c, f in enumerate(columns):
            if f:
                off = self.offsets[c]
                for m, v in f._d.items():
                    d[m + off] = v
        return d

    def decode(self, d):
        ring = self.ring
        cols = [dict() for _ in self.shifts]
        for k, v in d.items():
            c, m = self.split(k)
            cols[c][m] = v
        return [Polynomial(ring, x) for x in cols]

    def degree(self, key: int) -> int:
        c, m = self.split(key)
        return self.ring.mono_degree(m) + self.shifts[c]


class _IdealLayout:
    """Trivial layout for rank-one computations (no component bits)."""

    rank = 1

    def __init__(self, ring):
        self.ring = ring

    def degree(self, key):
        return self.ring.mono_degree(key)


# ---------------------------------------------------------------------------
# reduction kernels


def _reduce(ring, d, basis, lead_only=False, cof=None, cofs=None):
    """Reduce dict ``d`` (consumed) by ``basis`` (list of (lead, tail, lc_inv)).

    Returns the remainder dict.  With ``lead_only`` the process stops at the
    first irreducible term and the untouched rest is returned with it.
    ``cof``/``cofs``: when given, ``cof`` (a dict) is updated in place so the
    invariant  remainder = input - sum(cof_j * basis_j)  stays true, using
    ``cofs[i]`` as the cofactor of basis element i.
    """
    if not d:
        return d
    p = ring.field.p
    em = ring.emask
    g = ring.guard
    pm = ring.pmask
    heap = [-k for k in d]
    heapq.heapify(heap)
    pop = heapq.heappop
    push = heapq.heappush
    rem = {}
    leads = [(b[0] & em, b[0] & pm, i) for i, b in enumerate(basis)]
    while heap:
        k = -pop(heap)
        c = d.get(k)
        if c is None:
            continue
        ke = (k & em) | g
        kp = k & pm
        hit = -1
        for le, lp, i in leads:
            if lp == kp and (ke - le) & g == g:
                hit = i
                break
        del d[k]
        if hit < 0:
            rem[k] = c
            if lead_only:
                rem.update(d)
                return rem
            continue
        lead, tail, inv = basis[hit]
        q = k - lead
        if inv != 1:
            c = c * inv % p if p else c * inv
        if p:
            for m, a in tail:
                nk = m + q
                v = d.get(nk)
                if v is None:
                    d[nk] = (-c * a) % p
                    push(heap, -nk)
                else:
                    v = (v - c * a) % p
                    if v:
                        d[nk] = v
                    else:
                        del d[nk]
        else:
            for m, a in tail:
                nk = m + q
                v = d.get(nk)
                if v is None:
                    d[nk] = -c * a
                    push(heap, -nk)
                else:
                    v = v - c * a
                    if v:
                        d[nk] = v
                    else:
                        del d[nk]
        if cof is not None:
            _axpy(cof, cofs[hit], c, q, p)
    return rem


def _axpy(target, src, c, shift, p):
    """target += c * x^shift * src (cofactor dicts)."""
    for m, a in src.items():
        nk = m + shift
        v = target.get(nk, 0) + c * a
        if p:
            v %= p
        if v:
            target[nk] = v
        else:
            target.pop(nk, None)


def _scale(d, c, p):
    if c == 1:
        return d
    if p:
        return {k: v * c % p for k, v in d.items()}
    return {k: v * c for k, v in d.items()}


def _inv(ring, c):
    return ring.field.inv(c)


def _entry(ring, d):
    """(lead, tail list, inverse of lead coefficient) for a dict."""
    keys = sorted(d, reverse=True)
    lead = keys[0]
    lc = d[lead]
    return lead, [(k, d[k]) for k in keys[1:]], (1 if lc == 1 else _inv(ring, lc))


def _monic(ring, d):
    lead = max(d)
    lc = d[lead]
    if lc == 1:
        return d, 1
    inv = _inv(ring, lc)
    return _scale(d, inv, ring.field.p), inv


# ---------------------------------------------------------------------------
# the engine


def buchberger(ring: PolyRing, elements, layout=None, track=False, budget=None, product_criterion=None):
    """Reduced Groebner basis of the span of ``elements`` (dicts).

    Returns ``(basis, cofactors)``: basis is a list of monic dicts sorted by
    ascending lead key; cofactors (when ``track``) lists, per basis element,
    a dict keyed by ``ring monomial + (j << cof_shift)`` expressing it in the
    input elements.
    """
    budget = budget or current_budget()
    layout = layout or _IdealLayout(ring)
    if product_criterion is None:
        product_criterion = layout.rank == 1
    p = ring.field.p
    em = ring.emask
    guard = ring.guard
    pm = ring.pmask
    cof_shift = ring.weight_shift + 64

    G = []        # list of (lead, tail, inv) reducer entries (monic => inv 1)
    Gd = []       # dicts
    Gcof = []
    active = []   # bool per index
    queue = []    # heap of (deg, kind, a, b, lcm)

    for j, e in enumerate(elements):
        if e:
            heapq.heappush(queue, (layout.degree(max(e)), 0, j, 0, 0))

    npairs = 0

    def lcm(a, b):
        return ring.mono_lcm(a, b)

    def divides(a, b):
        return (((b & em) | guard) - (a & em)) & guard == guard and (a & pm) == (b & pm)

    def coprime(a, b):
        return ring.mono_gcd_is_one(a & em, b & em)

    def add(d, cof):
        t = len(G)
        H = max(d)
        hp = H & pm
        # candidate pairs with every active element in the same component
        C = []
        for i in range(t):
            if active[i] and (G[i][0] & pm) == hp:
                C.append((i, lcm(G[i][0], H)))
        D = []
        for idx, (i, L) in enumerate(C):
            if product_criterion and coprime(G[i][0], H):
                D.append((i, L))
                continue
            if any(divides(L2, L) for _, L2 in C[idx + 1:]):
                continue
            if any(divides(L2, L) for _, L2 in D):
                continue
            D.append((i, L))
        if product_criterion:
            E = [(i, L) for i, L in D if not coprime(G[i][0], H)]
        else:
            E = D
        # drop old pairs whose lcm is divisible by H unless one of the new lcms equals it
        if queue:
            new_l = {}
            for i, L in C:
                new_l[i] = L
            kept = []
            for item in queue:
                deg, kind, a, b, L = item
                if kind == 1 and divides(H, L) and new_l.get(a) != L and new_l.get(b) != L:
                    continue
                kept.append(item)
            if len(kept) != len(queue):
                queue[:] = kept
                heapq.heapify(queue)
        for i, L in E:
            heapq.heappush(queue, (layout.degree(L), 1, i, t, L))
        for i in range(t):
            if active[i] and divides(H, G[i][0]):
                active[i] = False
        G.append(_entry(ring, d))
        Gd.append(d)
        Gcof.append(cof)
        active.append(True)
        if sum(active) > budget.max_basis:
            raise BudgetError(f"basis size exceeded {budget.max_basis}")

    def spoly(a, b):
        la, lb = G[a][0], G[b][0]
        L = lcm(la, lb)
        qa, qb = L - la, L - lb
        d = {}
        for k, v in Gd[a].items():
            d[k + qa] = v
        for k, v in Gd[b].items():
            nk = k + qb
            w = d.get(nk, 0) - v
            if p:
                w %= p
            if w:
                d[nk] = w
            else:
                d.pop(nk, None)
        cof = None
        if track:
            cof = {}
            _axpy(cof, Gcof[a], 1, qa, p)
            _axpy(cof, Gcof[b], -1, qb, p)
        return d, cof

    while queue:
        deg, kind, a, b, L = heapq.heappop(queue)
        if kind == 1:
            tdeg = sum(ring.exps(L))
            if tdeg > budget.max_degree:
                raise BudgetError(f"S-pair degree {tdeg} exceeds cap {budget.max_degree}")
        if kind == 0:
            d = dict(elements[a])
            cof = {(a << cof_shift): 1} if track else None
        else:
            npairs += 1
            d, cof = spoly(a, b)
        reducers = [G[i] for i in range(len(G)) if active[i]]
        rcofs = [Gcof[i] for i in range(len(G)) if active[i]] if track else None
        if track:
            neg = {}
            d = _reduce(ring, d, reducers, lead_only=True, cof=neg, cofs=rcofs)
            for k, v in neg.items():
                w = cof.get(k, 0) - v
                if p:
                    w %= p
                if w:
                    cof[k] = w
                else:
                    cof.pop(k, None)
        else:
            d = _reduce(ring, d, reducers, lead_only=True)
        if not d:
            continue
        d, inv = _monic(ring, d)
        if track and inv != 1:
            cof = _scale(cof, inv, p)
        add(d, cof)

    # interreduce the minimal basis
    idx = sorted((i for i in range(len(G)) if active[i]), key=lambda i: G[i][0])
    basis = []
    cofs = []
    for i in idx:
        others = [G[j] for j in idx if j != i]
        lead = G[i][0]
        tail = {k: v for k, v in Gd[i].items() if k != lead}
        ocofs = [Gcof[j] for j in idx if j != i] if track else None
        if track:
            neg = {}
            r = _reduce(ring, tail, others, cof=neg, cofs=ocofs)
            cof = dict(Gcof[i])
            for k, v in neg.items():
                w = cof.get(k, 0) - v
                if p:
                    w %= p
                if w:
                    cof[k] = w
                else:
                    cof.pop(k, None)
            cofs.append(cof)
        else:
            r = _reduce(ring, tail, others)
        r[lead] = 1
        basis.append(r)
    return basis, (cofs if track else None)


def reduce_dict(ring, d, basis_dicts, full=True):
    entries = [_entry(ring, b) for b in basis_dicts]
    return _reduce(ring, dict(d), entries, lead_only=not full)


def spairs_reduce_to_zero(ring, basis_dicts, layout=None) -> bool:
    """Buchberger's criterion checked directly on every pair."""
    entries = [_entry(ring, b) for b in basis_dicts]
    p = ring.field.p
    pm = ring.pmask
    n = len(basis_dicts)
    for a in range(n):
        for b in range(a + 1, n):
            la, lb = entries[a][0], entries[b][0]
            if (la & pm) != (lb & pm):
                continue
            L = ring.mono_lcm(la, lb)
            qa, qb = L - la, L - lb
            ia, ib = entries[a][2], entries[b][2]
            d = {}
            for k, v in basis_dicts[a].items():
                d[k + qa] = v * ia % p if p else v * ia
            for k, v in basis_dicts[b].items():
                nk = k + qb
                w = d.get(nk, 0) - (v * ib % p if p else v * ib)
                if p:
                    w %= p
                if w:
                    d[nk] = w
                else:
                    d.pop(nk, None)
            if _reduce(ring, d, entries):
                return False
    return True


# ---------------------------------------------------------------------------
# polynomial-level API


def _same_ring(polys, ring=None):
    for f in polys:
        if not isinstance(f, Polynomial):
            raise TypeError("expected Polynomial")
        if ring is None:
            ring = f.ring
        elif f.ring is not ring and f.ring != ring:
            raise RingMismatch("polynomials belong to different rings")
    return ring


class GroebnerBasis:
    """Reduced Groebner basis of an ideal, optionally with cofactors."""

    def __init__(self, ring, generators, basis, cofactors=None):
        self.ring = ring
        self.generators = list(generators)
        self.basis = list(basis)
        self._cof = cofactors
        self._entries = None

    @property
    def cofactors(self):
        """PolyMatrix whose row i expresses basis[i] in the generators."""
        if self._cof is None:
            return None
        from .matrix import PolyMatrix

        return PolyMatrix(self.ring, self._cof)

    def entries(self):
        if self._entries is None:
            self._entries = [_entry(self.ring, f._d) for f in self.basis]
        return self._entries

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring is not self.ring and f.ring != self.ring:
            raise RingMismatch("polynomial and basis live in different rings")
        return Polynomial(self.ring, _reduce(self.ring, dict(f._d), self.entries()))

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def lead_monomials(self):
        return [f.lm for f in self.basis]

    def is_unit(self):
        return len(self.basis) == 1 and self.basis[0].is_constant() and bool(self.basis[0])

    def check_spairs(self) -> bool:
        return spairs_reduce_to_zero(self.ring, [f._d for f in self.basis])

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.ring == other.ring and self.basis == other.basis

    def __repr__(self):
        return f"GroebnerBasis({[str(f) for f in self.basis]})"


def groebner_basis(gens, track=False, ring=None, budget=None) -> GroebnerBasis:
    gens = [g for g in gens]
    ring = _same_ring(gens, ring)
    if ring is None:
        raise PolyError("cannot infer the ring of an empty generator list")
    nz = [g for g in gens if g]
    basis, cofs = buchberger(ring, [g._d for g in nz], track=track, budget=budget)
    polys = [Polynomial(ring, d) for d in basis]
    cof_rows = None
    if track:
        cof_shift = ring.weight_shift + 64
        mask = (1 << cof_shift) - 1
        where = [i for i, g in enumerate(gens) if g]
        cof_rows = []
        for cof in cofs:
            row = [dict() for _ in gens]
            for k, v in cof.items():
                row[where[k >> cof_shift]][k & mask] = v
            cof_rows.append([Polynomial(ring, x) for x in row])
    return GroebnerBasis(ring, gens, polys, cof_rows)


def normal_form(p: Polynomial, gb) -> Polynomial:
    if not isinstance(gb, GroebnerBasis):
        gb = groebner_basis(list(gb), ring=p.ring)
    return gb.reduce(p)


def divide_track(p: Polynomial, divisors):
    """Division with quotients; the first divisor whose lead divides the
    current lead term is always the one used."""
    ring = _same_ring([p] + list(divisors))
    if any(not d for d in divisors):
        raise PolyError("division by the zero polynomial")
    fp = ring.field.p
    entries = [_entry(ring, d._d) for d in divisors]
    em, g, pm = ring.emask, ring.guard, ring.pmask
    d = dict(p._d)
    heap = [-k for k in d]
    heapq.heapify(heap)
    quots = [dict() for _ in divisors]
    rem = {}
    while heap:
        k = -heapq.heappop(heap)
        c = d.get(k)
        if c is None:
            continue
        del d[k]
        ke = (k & em) | g
        hit = -1
        for i, (lead, _, _) in enumerate(entries):
            if (lead & pm) == (k & pm) and (ke - (lead & em)) & g == g:
                hit = i
                break
        if hit < 0:
            rem[k] = c
            continue
        lead, tail, inv = entries[hit]
        q = k - lead
        c = c * inv % fp if fp else c * inv
        qd = quots[hit]
        v = qd.get(q, 0) + c
        if fp:
            v %= fp
        if v:
            qd[q] = v
        else:
            qd.pop(q, None)
        for m, a in tail:
            nk = m + q
            v = d.get(nk)
            if v is None:
                d[nk] = (-c * a) % fp if fp else -c * a
                heapq.heappush(heap, -nk)
            else:
                v = (v - c * a) % fp if fp else v - c * a
                if v:
                    d[nk] = v
                else:
                    del d[nk]
    return [Polynomial(ring, q) for q in quots], Polynomial(ring, rem)


def elimination_ring(ring: PolyRing, drop) -> PolyRing:
    """Same variables, block order with the ``drop`` block first."""
    drop = list(drop)
    keep = [v for v in ring.variables if v not in drop]
    return ring.with_order(MonomialBlocks.of(ring, [drop, keep]))


class MonomialBlocks:
    @staticmethod
    def of(ring, name_blocks):
        from .poly import MonomialOrder

        blocks = [[ring.index(v) for v in b] for b in name_blocks if b]
        return MonomialOrder.block(blocks)


def _eliminates(ring, drop_idx) -> bool:
    """True when the ring's order already eliminates exactly these variables."""
    target = set(drop_idx)
    seen = set()
    for _, idx in ring.order.blocks:
        seen |= set(idx)
        if seen == target:
            return True
        if not seen <= target:
            return False
    return False


def eliminate(gens, drop, keep_ring=False, budget=None, order="grevlex"):
    """Generators of the elimination ideal after removing ``drop``.

    The result lives in the subring of the remaining variables (with the
    given order), or in the input ring when ``keep_ring`` is set.
    """
    gens = list(gens)
    ring = _same_ring(gens)
    drop = [v if isinstance(v, str) else ring.variables[v] for v in drop]
    for v in drop:
        ring.index(v)
    drop_idx = [ring.index(v) for v in drop]
    if _eliminates(ring, drop_idx):
        work = ring
        moved = gens
    else:
        work = elimination_ring(ring, drop)
        moved = [g.to_ring(work) for g in gens]
    gb = groebner_basis(moved, budget=budget)
    mask = 0
    for i in drop_idx:
        mask |= EXP_MAX << (EXP_BITS * i)
    free = [f for f in gb.basis if all(not (m & mask) for m in f._d)]
    if keep_ring:
        return [f.to_ring(ring) for f in free]
    keep = [v for v in ring.variables if v not in drop]
    sub = ring.subring(keep, order)
    return [f.to_ring(sub) for f in free]
