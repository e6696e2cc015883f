"""Exact linear algebra over the rationals for symmetric matrices.

Symmetric congruence elimination with diagonal pivoting decides inertia
(and hence positive semidefiniteness) without any tolerance.  When the
active block has an all-zero diagonal but a nonzero off-diagonal entry,
that entry is used as an indefinite 2x2 pivot block, so the elimination
always runs to completion.  For matrices that are not positive
semidefinite, a rational vector v with v^T A v < 0 is reported.
"""

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int

    def as_tuple(self):
        return (self.positive, self.negative, self.zero)


@dataclass(frozen=True)
class SymmetricFactorization:
    inertia: Inertia
    negative_direction: tuple | None
    negative_value: Fraction | None

    @property
    def is_psd(self):
        return self.inertia.negative == 0


def _as_fraction_matrix(rows):
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(a)
    for row in a:
        if len(row) != n:
            raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    return a


def _swap(a, lmat, perm, filled, s, t):
    if s == t:
        return
    a[s], a[t] = a[t], a[s]
    for row in a:
        row[s], row[t] = row[t], row[s]
    for c in range(filled):
        lmat[s][c], lmat[t][c] = lmat[t][c], lmat[s][c]
    perm[s], perm[t] = perm[t], perm[s]


def symmetric_elimination(rows):
    """Exact inertia of a symmetric rational matrix by pivoted elimination."""
    a = _as_fraction_matrix(rows)
    n = len(a)
    zero = Fraction(0)
    one = Fraction(1)
    lmat = [[one if i == j else zero for j in range(n)] for i in range(n)]
    perm = list(range(n))
    pos = neg = nul = 0
    neg_block = None  # (kind, position, pivot value)
    k = 0
    while k < n:
        p = -1
        best = None
        for i in range(k, n):
            d = a[i][i]
            if d != 0 and (best is None or abs(d) > best):
                p, best = i, abs(d)
        if p >= 0:
            _swap(a, lmat, perm, k, k, p)
            d = a[k][k]
            if d > 0:
                pos += 1
            else:
                neg += 1
                if neg_block is None:
                    neg_block = ("1x1", k, d)
            mults = [a[i][k] / d for i in range(k + 1, n)]
            for off, m in enumerate(mults):
                i = k + 1 + off
                if m == 0:
                    continue
                lmat[i][k] = m
                rk = a[k]
                ri = a[i]
                for j in range(k + 1, n):
                    ri[j] -= m * rk[j]
            for i in range(k + 1, n):
                a[i][k] = zero
                a[k][i] = zero
            k += 1
            continue
        # all active diagonal entries are zero: look for an off-diagonal pivot
        pivot = None
        for i in range(k, n):
            for j in range(i + 1, n):
                if a[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            nul += n - k
            break
        i0, j0 = pivot
        _swap(a, lmat, perm, k, k, i0)
        if j0 == k:
            j0 = i0
        _swap(a, lmat, perm, k, k + 1, j0)
        av = a[k][k + 1]
        pos += 1
        neg += 1
        if neg_block is None:
            neg_block = ("2x2", k, av)
        us = [a[i][k] for i in range(k + 2, n)]
        vs = [a[i][k + 1] for i in range(k + 2, n)]
        for off in range(len(us)):
            i = k + 2 + off
            if vs[off]:
                lmat[i][k] = vs[off] / av
            if us[off]:
                lmat[i][k + 1] = us[off] / av
        for ioff in range(len(us)):
            i = k + 2 + ioff
            ui, vi = us[ioff], vs[ioff]
            if ui == 0 and vi == 0:
                continue
            ri = a[i]
            for joff in range(len(us)):
                j = k + 2 + joff
                ri[j] -= (vi * us[joff] + ui * vs[joff]) / av
        for i in range(k + 2, n):
            a[i][k] = a[k][i] = zero
            a[i][k + 1] = a[k + 1][i] = zero
        k += 2

    direction = None
    value = None
    if neg_block is not None:
        kind, kidx, pv = neg_block
        y = [zero] * n
        if kind == "1x1":
            y[kidx] = one
            value = pv
        else:
            y[kidx] = one
            y[kidx + 1] = one if pv < 0 else -one
            value = -2 * abs(pv)
        # back substitution for L^T z = y
        z = list(y)
        for i in range(n - 1, -1, -1):
            acc = y[i]
            for j in range(i + 1, n):
                if lmat[j][i]:
                    acc -= lmat[j][i] * z[j]
            z[i] = acc
        v = [zero] * n
        for i in range(n):
            v[perm[i]] = z[i]
        direction = tuple(v)
    return SymmetricFactorization(Inertia(pos, neg, nul), direction, value)


def quadratic_form(rows, v):
    """v^T A v in exact arithmetic."""
    n = len(rows)
    total = Fraction(0)
    vf = [Fraction(c) for c in v]
    for i in range(n):
        if vf[i] == 0:
            continue
        acc = Fraction(0)
        for j in range(n):
            if vf[j]:
                acc += Fraction(rows[i][j]) * vf[j]
        total += vf[i] * acc
    return total


def _matmul(a, b):
    n = len(a)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(n):
            aik = ai[k]
            if aik == 0:
                continue
            bk = b[k]
            for j in range(n):
                if bk[j]:
                    oi[j] += aik * bk[j]
    return out


def char_poly(rows):
    """Coefficients of det(lambda I - A), leading coefficient first.

    Faddeev-LeVerrier recurrence in exact arithmetic: returns
    (1, c1, ..., cn) for lambda^n + c1 lambda^(n-1) + ... + cn.
    """
    a = _as_fraction_matrix(rows)
    n = len(a)
    coeffs = [Fraction(1)]
    m = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        am = _matmul(a, m)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
        for i in range(n):
            am[i][i] += c
        m = am
    return tuple(coeffs)
