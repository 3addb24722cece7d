"""Dense Gaussian elimination over GF(p) or Q."""
from __future__ import annotations

from fractions import Fraction


def rref(rows, p, ncols=None):
    """Reduced row echelon form.

    ``rows`` is a list of coefficient lists (copied).  Returns
    ``(echelon rows, pivot columns)``; over Q pass ``p = 0``.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = pow(row[c], -1, p) if p else 1 / Fraction(row[c])
        if p:
            row = [v * inv % p for v in row]
        else:
            row = [v * inv for v in row]
        m[r] = row
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                other = m[i]
                if p:
                    m[i] = [(a - f * b) % p for a, b in zip(other, row)]
                else:
                    m[i] = [a - f * b for a, b in zip(other, row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, p, ncols=None) -> int:
    """Rank via forward elimination only (no back substitution)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0]) if ncols is None else ncols
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = pow(row[c], -1, p) if p else 1 / Fraction(row[c])
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c] * inv
                if p:
                    f %= p
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], row)]
                else:
                    m[i] = [a - f * b for a, b in zip(m[i], row)]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows, p, ncols):
    """Basis of {v : rows * v = 0} as a list of vectors."""
    red, pivots = rref(rows, p, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[fc]) % p if p else -row[fc]
        basis.append(v)
    return basis
