"""Matrices of polynomials, optionally graded by row and column shifts."""
from __future__ import annotations

import json
from itertools import combinations

from .poly import Field, PolyError, PolyRing, Polynomial


def _as_vec(x):
    if x is None:
        return None
    return tuple(x) if isinstance(x, (tuple, list)) else (x,)


class PolyMatrix:
    """Immutable rows x cols grid of polynomials.

    With shifts present the matrix is a graded map: entry (i, j) must be
    homogeneous of degree ``col_shifts[j] - row_shifts[i]``.  Shifts are
    integers, or tuples for bigraded rings.
    """

    def __init__(self, ring: PolyRing, entries, row_shifts=None, col_shifts=None, check=True):
        self.ring = ring
        grid = []
        for row in entries:
            grid.append(tuple(e if isinstance(e, Polynomial) else ring(e) for e in row))
        self.entries = tuple(grid)
        self.nrows = len(grid)
        self.ncols = len(grid[0]) if grid else 0
        if any(len(r) != self.ncols for r in grid):
            raise PolyError("ragged matrix")
        for r in grid:
            for e in r:
                if e.ring != ring:
                    raise PolyError("matrix entry from a different ring")
        if (row_shifts is None) != (col_shifts is None):
            raise PolyError("give both row and column shifts or neither")
        self.row_shifts = tuple(row_shifts) if row_shifts is not None else None
        self.col_shifts = tuple(col_shifts) if col_shifts is not None else None
        if self.row_shifts is not None:
            if len(self.row_shifts) != self.nrows or len(self.col_shifts) != self.ncols:
                raise PolyError("shift vector length mismatch")
            if check:
                self.check_graded()
        self._memo = {}

    # shape ------------------------------------------------------------------

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def col(self, j):
        return [r[j] for r in self.entries]

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    @property
    def graded(self):
        return self.row_shifts is not None

    def check_graded(self):
        for i in range(self.nrows):
            for j in range(self.ncols):
                e = self.entries[i][j]
                if not e:
                    continue
                want = _sub(self.col_shifts[j], self.row_shifts[i])
                got = e.multidegree()
                if got == "inhomogeneous" or _as_vec(got) != _as_vec(want):
                    raise PolyError(f"entry ({i},{j}) = {e} is not homogeneous of degree {want}")

    @classmethod
    def graded_from(cls, ring, entries, row_shifts=None):
        """Infer column shifts from the first nonzero entry of each column."""
        grid = [[e if isinstance(e, Polynomial) else ring(e) for e in r] for r in entries]
        nrows = len(grid)
        ncols = len(grid[0]) if grid else 0
        if row_shifts is None:
            row_shifts = [_zero_like(ring)] * nrows
        cols = []
        for j in range(ncols):
            shift = None
            for i in range(nrows):
                e = grid[i][j]
                if e:
                    d = e.multidegree()
                    if d == "inhomogeneous":
                        raise PolyError(f"entry ({i},{j}) is inhomogeneous")
                    shift = _add(d, row_shifts[i])
                    break
            if shift is None:
                shift = _zero_like(ring)
            cols.append(shift)
        return cls(ring, grid, row_shifts, cols)

    # algebra ----------------------------------------------------------------

    def transpose(self):
        rs = None if self.col_shifts is None else tuple(_neg(s) for s in self.col_shifts)
        cs = None if self.row_shifts is None else tuple(_neg(s) for s in self.row_shifts)
        return PolyMatrix(self.ring, list(zip(*self.entries)) if self.nrows else [], rs, cs, check=False)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.ncols != other.nrows:
                raise PolyError("dimension mismatch in matrix product")
            z = self.ring.zero
            out = []
            for i in range(self.nrows):
                row = []
                for j in range(other.ncols):
                    acc = z
                    for k in range(self.ncols):
                        a = self.entries[i][k]
                        if a:
                            b = other.entries[k][j]
                            if b:
                                acc = acc + a * b
                    row.append(acc)
                out.append(row)
            shifts = (self.row_shifts, other.col_shifts) if self.graded and other.graded else (None, None)
            return PolyMatrix(self.ring, out, *shifts, check=False)
        return PolyMatrix(self.ring, [[e * other for e in r] for r in self.entries], self.row_shifts, self.col_shifts, check=False)

    def __add__(self, other):
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.row_shifts, self.col_shifts, check=False)

    def __neg__(self):
        return PolyMatrix(self.ring, [[-e for e in r] for r in self.entries], self.row_shifts, self.col_shifts, check=False)

    def is_zero(self):
        return all(not e for r in self.entries for e in r)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        rs = None if self.row_shifts is None else [self.row_shifts[i] for i in rows]
        cs = None if self.col_shifts is None else [self.col_shifts[j] for j in cols]
        return PolyMatrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows], rs, cs, check=False)

    def delete_row(self, i):
        return self.submatrix([k for k in range(self.nrows) if k != i], range(self.ncols))

    def delete_col(self, j):
        return self.submatrix(range(self.nrows), [k for k in range(self.ncols) if k != j])

    def stack(self, other):
        """Rows of self above rows of other."""
        rs = None
        if self.graded and other.graded:
            rs = self.row_shifts + other.row_shifts
            cs = self.col_shifts
        else:
            cs = None
        return PolyMatrix(self.ring, list(self.entries) + list(other.entries), rs, cs, check=False)

    def hconcat(self, other):
        cs = None
        rs = None
        if self.graded and other.graded:
            rs = self.row_shifts
            cs = self.col_shifts + other.col_shifts
        return PolyMatrix(self.ring, [a + b for a, b in zip(self.entries, other.entries)], rs, cs, check=False)

    def to_ring(self, ring):
        return PolyMatrix(ring, [[e.to_ring(ring) for e in r] for r in self.entries], self.row_shifts, self.col_shifts, check=False)

    def map_entries(self, fn):
        return PolyMatrix(self.ring, [[fn(e) for e in r] for r in self.entries], self.row_shifts, self.col_shifts, check=False)

    # determinants -----------------------------------------------------------

    def det_sub(self, rows, cols) -> Polynomial:
        """Determinant of the square submatrix on ``rows`` x ``cols``.

        Laplace expansion along the first listed row; subdeterminants are
        memoized per matrix so overlapping minors share work.
        """
        rows, cols = tuple(rows), tuple(cols)
        if len(rows) != len(cols):
            raise PolyError("minor must be square")
        return self._det(rows, cols)

    def _det(self, rows, cols):
        if not rows:
            return self.ring.one
        key = (rows, cols)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if len(rows) == 1:
            val = self.entries[rows[0]][cols[0]]
        else:
            r0 = rows[0]
            rest = rows[1:]
            val = self.ring.zero
            for k, c in enumerate(cols):
                a = self.entries[r0][c]
                if not a:
                    continue
                sub = self._det(rest, cols[:k] + cols[k + 1:])
                if not sub:
                    continue
                term = a * sub
                val = val + term if k % 2 == 0 else val - term
        self._memo[key] = val
        return val

    def det(self):
        if self.nrows != self.ncols:
            raise PolyError("determinant of a non-square matrix")
        return self._det(tuple(range(self.nrows)), tuple(range(self.ncols)))

    def minors(self, k):
        """All k x k minors, rows and columns in lexicographic order."""
        for rows in combinations(range(self.nrows), k):
            for cols in combinations(range(self.ncols), k):
                yield self._det(rows, cols)

    def has_unit_entry(self):
        return any(e and e.is_constant() for r in self.entries for e in r)

    # serialization ----------------------------------------------------------

    def to_json(self):
        d = {
            "ring": self.ring.describe(),
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [[str(e) for e in r] for r in self.entries],
        }
        if self.graded:
            d["rowShifts"] = [_plain(s) for s in self.row_shifts]
            d["colShifts"] = [_plain(s) for s in self.col_shifts]
        return d

    @classmethod
    def from_json(cls, data, ring=None):
        if isinstance(data, str):
            data = json.loads(data)
        if ring is None:
            ring = PolyRing.from_description(data["ring"])
        entries = [[ring(e) for e in r] for r in data["entries"]]
        if len(entries) != data.get("rows", len(entries)):
            raise PolyError("row count mismatch")
        rs = data.get("rowShifts")
        cs = data.get("colShifts")
        if rs is not None:
            rs = [tuple(s) if isinstance(s, list) else s for s in rs]
            cs = [tuple(s) if isinstance(s, list) else s for s in cs]
        return cls(ring, entries, rs, cs)

    def __str__(self):
        cells = [[str(e) for e in r] for r in self.entries]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"


def _plain(s):
    return list(s) if isinstance(s, tuple) else s


def _zero_like(ring):
    return 0 if len(ring.grading) == 1 else (0,) * len(ring.grading)


def _sub(a, b):
    if isinstance(a, tuple):
        return tuple(x - y for x, y in zip(a, b))
    return a - b


def _add(a, b):
    if isinstance(a, tuple):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _neg(a):
    if isinstance(a, tuple):
        return tuple(-x for x in a)
    return -a


def matrix_from_strings(ring, rows):
    return PolyMatrix(ring, [[ring(e) for e in r] for r in rows])
