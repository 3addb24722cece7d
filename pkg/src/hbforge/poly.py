"""Exact sparse multivariate polynomials over GF(p) or Q.

A monomial is packed into a single Python integer laid out (high to low) as

    [component weight][order-key fields][component id][exponents]

Every part is linear in the exponent vector, so monomial multiplication is
integer addition and comparing two packed integers compares the monomials in
the ring's order.  Exponent fields carry a guard bit which makes the
divisibility test a couple of mask operations.  Ring monomials have component
weight and id zero; module terms (see ``groebner``) reuse the same layout.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce

EXP_BITS = 16
EXP_MAX = (1 << (EXP_BITS - 1)) - 1
KEY_BITS = 32
POS_BITS = 20
DEFAULT_PRIME = 32003


class PolyError(ValueError):
    pass


class RingMismatch(PolyError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """GF(p) for a word-sized prime p, or the rationals (p == 0)."""

    __slots__ = ("p",)

    def __init__(self, modulus=DEFAULT_PRIME):
        if modulus in (0, None) or (isinstance(modulus, str) and modulus.upper() in ("Q", "QQ")):
            self.p = 0
            return
        p = int(modulus)
        if p >= 1 << 63:
            raise PolyError(f"modulus {p} does not fit a machine word")
        if not is_prime(p):
            raise PolyError(f"modulus {p} is not prime")
        self.p = p

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    def __call__(self, value):
        p = self.p
        if isinstance(value, str):
            value = value.strip()
            if "/" in value:
                num, den = value.split("/", 1)
                value = Fraction(int(num), int(den)) if not p else self._ratio(int(num), int(den))
            else:
                value = int(value)
        if p:
            if isinstance(value, Fraction):
                return self._ratio(value.numerator, value.denominator)
            return int(value) % p
        return Fraction(value)

    def _ratio(self, num, den):
        p = self.p
        if den % p == 0:
            raise PolyError(f"coefficient {num}/{den} is not defined in GF({p})")
        return num * pow(den, -1, p) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / Fraction(a)

    def to_str(self, c) -> str:
        p = self.p
        if p:
            return str(c - p if c > p // 2 else c)
        return str(c)

    def lift(self, c):
        """Symmetric integer (or exact rational) representative."""
        p = self.p
        if p:
            return c - p if c > p // 2 else c
        return c

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"


class MonomialOrder:
    """Sequence of variable blocks, each ordered by grevlex or lex.

    The first block dominates, so a block order whose first blocks are a set B
    is an elimination order for B.
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        self.blocks = tuple((kind, tuple(idx)) for kind, idx in blocks)
        for kind, _ in self.blocks:
            if kind not in ("grevlex", "lex"):
                raise PolyError(f"unknown block kind {kind!r}")

    @classmethod
    def grevlex(cls, n):
        return cls([("grevlex", range(n))])

    @classmethod
    def lex(cls, n):
        return cls([("lex", range(n))])

    @classmethod
    def block(cls, index_blocks):
        return cls([("grevlex", b) for b in index_blocks])

    @classmethod
    def parse(cls, text, variables):
        """``grevlex``, ``lex`` or ``block:x,y,z|t1,t2,t3`` (each block grevlex)."""
        if isinstance(text, MonomialOrder):
            return text
        n = len(variables)
        text = (text or "grevlex").strip()
        if text == "grevlex":
            return cls.grevlex(n)
        if text == "lex":
            return cls.lex(n)
        if text.startswith("block:"):
            pos = {v: i for i, v in enumerate(variables)}
            blocks = []
            for part in text[6:].split("|"):
                names = [s.strip() for s in part.split(",") if s.strip()]
                try:
                    blocks.append([pos[v] for v in names])
                except KeyError as exc:
                    raise PolyError(f"order references undeclared variable {exc.args[0]!r}") from None
            return cls.block(blocks)
        raise PolyError(f"unknown monomial order {text!r}")

    def validate(self, n):
        seen = [i for _, idx in self.blocks for i in idx]
        if sorted(seen) != list(range(n)):
            raise PolyError("monomial order must mention every variable exactly once")

    def key_fields(self, n):
        """Nonnegative linear forms whose lexicographic comparison is the order."""
        fields = []
        for kind, idx in self.blocks:
            if kind == "lex":
                for i in idx:
                    vec = [0] * n
                    vec[i] = 1
                    fields.append(vec)
            else:
                # partial sums e_1+..+e_j for j = k..1: first the block degree,
                # then a smaller exponent of the last variable wins
                for j in range(len(idx), 0, -1):
                    vec = [0] * n
                    for i in idx[:j]:
                        vec[i] = 1
                    fields.append(vec)
        return fields

    def describe(self, variables):
        if len(self.blocks) == 1:
            kind, idx = self.blocks[0]
            if list(idx) == list(range(len(variables))):
                return kind
        if all(kind == "grevlex" for kind, _ in self.blocks):
            return "block:" + "|".join(",".join(variables[i] for i in idx) for _, idx in self.blocks)
        return repr(self.blocks)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.blocks == self.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"MonomialOrder({self.blocks!r})"


class PolyRing:
    """Polynomial ring k[variables] with a monomial order and (multi)grading."""

    def __init__(self, variables, field=None, order="grevlex", grading=None):
        if isinstance(variables, str):
            variables = [v.strip() for v in variables.split(",") if v.strip()]
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PolyError("duplicate variable name")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise PolyError(f"bad variable name {v!r}")
        n = len(variables)
        if field is None or not isinstance(field, Field):
            field = Field(DEFAULT_PRIME if field is None else field)
        order = MonomialOrder.parse(order, variables)
        order.validate(n)
        if grading is None:
            grading = ((1,) * n,)
        grading = tuple(tuple(int(w) for w in vec) for vec in grading)
        if not 1 <= len(grading) <= 2:
            raise PolyError("grading must have one or two weight vectors")
        for vec in grading:
            if len(vec) != n:
                raise PolyError("weight vector length mismatch")
            if any(w < 0 for w in vec):
                raise PolyError("weights must be nonnegative")
        self.variables = variables
        self.field = field
        self.order = order
        self.grading = grading
        self.ngens = n
        self._index = {v: i for i, v in enumerate(variables)}
        self._layout()

    def _layout(self):
        n = self.ngens
        fields = self.order.key_fields(n)
        self.nfields = len(fields)
        self.pos_shift = n * EXP_BITS
        self.key_shift = self.pos_shift + POS_BITS
        self.weight_shift = self.key_shift + self.nfields * KEY_BITS
        self.emask = (1 << self.pos_shift) - 1
        self.pmask = ((1 << POS_BITS) - 1) << self.pos_shift
        self.guard = sum(1 << (EXP_BITS * i + EXP_BITS - 1) for i in range(n))
        vi = []
        for i in range(n):
            m = 1 << (EXP_BITS * i)
            for j, vec in enumerate(fields):
                if vec[i]:
                    m += vec[i] << (self.key_shift + (self.nfields - 1 - j) * KEY_BITS)
            vi.append(m)
        self._vi = tuple(vi)
        self.sel_weights = tuple(sum(col) for col in zip(*self.grading))

    # monomial helpers -------------------------------------------------------

    def mono(self, exps) -> int:
        m = 0
        for e, v in zip(exps, self._vi):
            if e:
                if e < 0 or e > EXP_MAX:
                    raise PolyError(f"exponent {e} out of range")
                m += e * v
        return m

    def exps(self, m: int) -> tuple:
        mask = EXP_MAX
        return tuple((m >> (EXP_BITS * i)) & mask for i in range(self.ngens))

    def divides(self, a: int, b: int) -> bool:
        em = self.emask
        g = self.guard
        return (((b & em) | g) - (a & em)) & g == g and (a & self.pmask) == (b & self.pmask)

    def mono_lcm(self, a: int, b: int) -> int:
        ea, eb = self.exps(a), self.exps(b)
        extra = 0
        for x, y, v in zip(ea, eb, self._vi):
            if y > x:
                extra += (y - x) * v
        return a + extra

    def mono_gcd_is_one(self, a: int, b: int) -> bool:
        return all(not (x and y) for x, y in zip(self.exps(a), self.exps(b)))

    def mono_degree(self, m: int, weights=None) -> int:
        w = weights or self.sel_weights
        return sum(e * wi for e, wi in zip(self.exps(m), w))

    def mono_multidegree(self, m: int) -> tuple:
        e = self.exps(m)
        return tuple(sum(a * w for a, w in zip(e, vec)) for vec in self.grading)

    def ring_part(self, m: int) -> int:
        return m & ((1 << self.weight_shift) - 1) & ~self.pmask

    # construction -----------------------------------------------------------

    def __eq__(self, other):
        return self is other or (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.field == other.field
            and self.order == other.order
            and self.grading == other.grading
        )

    def __hash__(self):
        return hash((self.variables, self.field, self.order, self.grading))

    def __repr__(self):
        return (
            f"PolyRing({','.join(self.variables)}; {self.field!r}; "
            f"{self.order.describe(self.variables)}; grading={list(self.grading)})"
        )

    def describe(self) -> dict:
        return {
            "variables": list(self.variables),
            "field": self.field.p or "Q",
            "order": self.order.describe(self.variables),
            "grading": [list(v) for v in self.grading],
        }

    @classmethod
    def from_description(cls, desc):
        return cls(desc["variables"], Field(desc.get("field", DEFAULT_PRIME)), desc.get("order", "grevlex"), desc.get("grading"))

    @property
    def zero(self):
        return Polynomial(self, {})

    @property
    def one(self):
        return Polynomial(self, {0: self.field(1)})

    def gens(self):
        one = self.field(1)
        return [Polynomial(self, {v: one}) for v in self._vi]

    def var(self, name):
        try:
            return Polynomial(self, {self._vi[self._index[name]]: self.field(1)})
        except KeyError:
            raise PolyError(f"unknown variable {name!r}") from None

    def index(self, name):
        return self._index[name]

    def const(self, c):
        c = self.field(c)
        return Polynomial(self, {0: c} if c else {})

    def monomial(self, exps, coeff=1):
        c = self.field(coeff)
        return Polynomial(self, {self.mono(exps): c} if c else {})

    def from_terms(self, terms):
        """Build from (exponent tuple, coefficient) pairs; duplicates are summed."""
        d = {}
        p = self.field.p
        for e, c in terms:
            m = self.mono(e)
            c = self.field(c)
            v = d.get(m, 0) + c
            if p:
                v %= p
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Polynomial(self, d)

    def parse(self, text):
        return parse(text, self)

    def __call__(self, text):
        if isinstance(text, Polynomial):
            return text.to_ring(self)
        if isinstance(text, str):
            return parse(text, self)
        return self.const(text)

    def with_order(self, order, grading=None):
        return PolyRing(self.variables, self.field, MonomialOrder.parse(order, self.variables), grading or self.grading)

    def with_field(self, field):
        return PolyRing(self.variables, field, self.order, self.grading)

    def subring(self, names, order="grevlex"):
        idx = [self._index[v] for v in names]
        grading = tuple(tuple(vec[i] for i in idx) for vec in self.grading)
        return PolyRing(list(names), self.field, order, grading)


class Polynomial:
    """Immutable polynomial; ``_d`` maps packed monomials to nonzero coefficients."""

    __slots__ = ("ring", "_d", "_keys")

    def __init__(self, ring: PolyRing, d: dict):
        self.ring = ring
        self._d = d
        self._keys = None

    # basic access -----------------------------------------------------------

    def keys_desc(self):
        if self._keys is None:
            self._keys = sorted(self._d, reverse=True)
        return self._keys

    def terms(self):
        """(exponent tuple, coefficient) pairs, strictly decreasing in the order."""
        r = self.ring
        return [(r.exps(m), self._d[m]) for m in self.keys_desc()]

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def is_zero(self):
        return not self._d

    def is_constant(self):
        return not self._d or (len(self._d) == 1 and 0 in self._d)

    @property
    def lm(self) -> int:
        return self.keys_desc()[0]

    @property
    def lc(self):
        return self._d[self.keys_desc()[0]]

    def lead_exps(self):
        return self.ring.exps(self.lm)

    def coefficient(self, exps):
        return self._d.get(self.ring.mono(exps), 0)

    def support(self):
        """Indices of variables that occur."""
        used = 0
        for m in self._d:
            used |= m & self.ring.emask
        return [i for i in range(self.ring.ngens) if (used >> (EXP_BITS * i)) & EXP_MAX]

    def max_exponent(self):
        best = 0
        for m in self._d:
            e = max(self.ring.exps(m), default=0)
            if e > best:
                best = e
        return best

    # grading ----------------------------------------------------------------

    def multidegree(self):
        """Common multidegree of all terms, ``None`` for the zero polynomial,
        or the string ``"inhomogeneous"``."""
        if not self._d:
            return None
        r = self.ring
        degs = {r.mono_multidegree(m) for m in self._d}
        if len(degs) != 1:
            return "inhomogeneous"
        d = degs.pop()
        return d if len(d) > 1 else d[0]

    def degree(self):
        """Total degree in the selection weights (sum of the gradings)."""
        if not self._d:
            return -1
        r = self.ring
        return max(r.mono_degree(m) for m in self._d)

    def total_degree(self):
        if not self._d:
            return -1
        return max(sum(self.ring.exps(m)) for m in self._d)

    def is_homogeneous(self):
        return self.multidegree() != "inhomogeneous"

    def homogeneous_part(self, deg):
        r = self.ring
        return Polynomial(r, {m: c for m, c in self._d.items() if r.mono_multidegree(m) == tuple(deg if isinstance(deg, tuple) else (deg,))})

    # arithmetic -------------------------------------------------------------

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch("polynomials belong to different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._check(other)
        p = self.ring.field.p
        d = dict(self._d)
        for m, c in other._d.items():
            v = d.get(m)
            if v is None:
                d[m] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    d[m] = v
                else:
                    del d[m]
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {m: p - c for m, c in self._d.items()})
        return Polynomial(self.ring, {m: -c for m, c in self._d.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._check(other)
        if not self._d or not other._d:
            return self.ring.zero
        if self.total_degree() + other.total_degree() > EXP_MAX:
            if self.max_exponent() + other.max_exponent() > EXP_MAX:
                raise PolyError("exponent overflow")
        p = self.ring.field.p
        a, b = (self._d, other._d) if len(self._d) <= len(other._d) else (other._d, self._d)
        d = {}
        get = d.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = ma + mb
                v = get(m, 0) + ca * cb
                d[m] = v
        if p:
            d = {m: v % p for m, v in d.items() if v % p}
        else:
            d = {m: v for m, v in d.items() if v}
        return Polynomial(self.ring, d)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero
        p = f.p
        if p:
            return Polynomial(self.ring, {m: v * c % p for m, v in self._d.items()})
        return Polynomial(self.ring, {m: v * c for m, v in self._d.items()})

    def mul_monomial(self, m, c=None):
        if c is None:
            return Polynomial(self.ring, {k + m: v for k, v in self._d.items()})
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {k + m: v * c % p for k, v in self._d.items()})
        return Polynomial(self.ring, {k + m: v * c for k, v in self._d.items()})

    def __pow__(self, k):
        if not isinstance(k, int):
            raise PolyError("exponent must be an integer")
        if k < 0:
            raise PolyError("negative exponent")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    # normalization ----------------------------------------------------------

    def monic(self):
        if not self._d:
            return self
        return self.scale(self.ring.field.inv(self.lc))

    def normalized(self):
        """Leading coefficient 1 over GF(p); content-free with positive leading
        coefficient over Q."""
        if not self._d:
            return self
        f = self.ring.field
        if f.p:
            return self.monic()
        from math import gcd, lcm

        vals = list(self._d.values())
        den = reduce(lcm, (v.denominator for v in vals), 1)
        num = reduce(gcd, (abs(v.numerator * (den // v.denominator)) for v in vals), 0)
        scale = Fraction(den, num)
        if self.lc < 0:
            scale = -scale
        return self.scale(scale)

    # evaluation / substitution ---------------------------------------------

    def evaluate(self, values):
        """Evaluate at a point given as a sequence of field elements."""
        f = self.ring.field
        p = f.p
        vals = [f(v) for v in values]
        total = 0
        for m, c in self._d.items():
            t = c
            for e, v in zip(self.ring.exps(m), vals):
                if e:
                    t = t * (pow(v, e, p) if p else v ** e)
            total += t
        return total % p if p else total

    def substitute(self, mapping):
        """Replace variables by polynomials of a (possibly different) ring.

        ``mapping`` maps variable names to Polynomials of the target ring;
        unmapped variables must exist in the target ring.
        """
        target = None
        for v in mapping.values():
            if isinstance(v, Polynomial):
                target = v.ring
                break
        if target is None:
            target = self.ring
        images = []
        for name in self.ring.variables:
            if name in mapping:
                img = mapping[name]
                images.append(img if isinstance(img, Polynomial) else target.const(img))
            else:
                images.append(target.var(name))
        cache = {}
        result = target.zero
        for m, c in self._d.items():
            t = target.const(self.ring.field.lift(c) if target.field != self.ring.field else c)
            for i, e in enumerate(self.ring.exps(m)):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    t = t * cache[key]
            result = result + t
        return result

    def to_ring(self, ring):
        """Re-encode in another ring sharing the variable names used here."""
        if ring == self.ring:
            return self
        src = self.ring
        try:
            idx = [ring.index(v) for v in src.variables]
        except KeyError:
            idx = None
        if idx is None:
            used = {src.variables[i] for i in self.support()}
            missing = used - set(ring.variables)
            if missing:
                raise RingMismatch(f"variables {sorted(missing)} not in target ring")
            idx = [ring._index.get(v, -1) for v in src.variables]
        if ring.field != src.field:
            conv = lambda c: ring.field(src.field.lift(c))
        else:
            conv = lambda c: c
        d = {}
        n = ring.ngens
        for m, c in self._d.items():
            e = src.exps(m)
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[idx[i]] = k
            cc = conv(c)
            if cc:
                d[ring.mono(ne)] = cc
        return Polynomial(ring, d)

    def derivative(self, name):
        r = self.ring
        i = r.index(name)
        f = r.field
        terms = []
        for e, c in self.terms():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms.append((tuple(ne), f(e[i]) * c))
        return r.from_terms(terms)

    def divide_exact(self, other):
        """Exact division; raises if ``other`` does not divide ``self``."""
        from .groebner import divide_track

        q, r = divide_track(self, [other])
        if r:
            raise PolyError("exact division failed")
        return q[0]

    # printing ---------------------------------------------------------------

    def __str__(self):
        if not self._d:
            return "0"
        r = self.ring
        f = r.field
        parts = []
        for m in self.keys_desc():
            c = self._d[m]
            e = r.exps(m)
            factors = [v if k == 1 else f"{v}^{k}" for v, k in zip(r.variables, e) if k]
            cs = f.to_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if factors:
                body = "*".join(factors) if cs == "1" else cs + "*" + "*".join(factors)
            else:
                body = cs
            if not parts:
                parts.append("-" + body if neg else body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def parse(text: str, ring: PolyRing) -> Polynomial:
    """Parse ``coeff*var^exp*... +/- ...``; parentheses are also accepted."""
    tokens = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            tokens.append(("num", int(num)))
        elif name:
            tokens.append(("var", name))
        elif op.strip():
            if op not in "+-*/^()":
                raise PolyError(f"unexpected character {op!r}")
            tokens.append(("op", op))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        kind, val = peek()
        sign = 1
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val = peek()
            if kind == "op" and val in "+-":
                take()
                t = term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term():
        acc = factor()
        while True:
            kind, val = peek()
            if kind == "op" and val == "*":
                take()
                acc = acc * factor()
            else:
                return acc

    def factor():
        base = atom()
        kind, val = peek()
        if kind == "op" and val == "^":
            take()
            k2, v2 = take()
            if k2 != "num":
                raise PolyError("malformed exponent")
            if v2 > EXP_MAX:
                raise PolyError(f"exponent {v2} out of range")
            return base ** v2
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            k2, v2 = peek()
            if k2 == "op" and v2 == "/":
                take()
                k3, v3 = take()
                if k3 != "num":
                    raise PolyError("malformed rational coefficient")
                return ring.const(ring.field(f"{val}/{v3}"))
            return ring.const(val)
        if kind == "var":
            return ring.var(val)
        if kind == "op" and val == "(":
            inner = expr()
            k2, v2 = take()
            if (k2, v2) != ("op", ")"):
                raise PolyError("unbalanced parenthesis")
            return inner
        raise PolyError(f"unexpected token {val!r} in {text!r}")

    if not tokens:
        raise PolyError("empty polynomial text")
    result = expr()
    if pos != len(tokens):
        raise PolyError(f"trailing input in {text!r}")
    return result
