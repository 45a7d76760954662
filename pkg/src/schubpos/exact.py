"""Exact linear algebra over the rationals.

Matrices are plain lists of lists holding ``fractions.Fraction`` or Python
ints.  No floating point enters here; callers convert at the edge when they
want numerics.  The integer fast path routes through numpy int64 only when
an overflow bound proves the result exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

_INT64_SAFE = 2**62


class InconsistentSystemError(ArithmeticError):
    """An overdetermined exact solve had a nonzero residual."""


def identity(n, one=1):
    return [[one if i == j else one * 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    """Exact product of two list-of-list matrices (Fraction or int)."""
    n, k, m = len(A), len(B), len(B[0])
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def int_matmul(A, B):
    """Exact integer product; numpy int64 when provably overflow-free."""
    n = len(B)
    ma = max((max(map(abs, row), default=0) for row in A), default=0)
    mb = max((max(map(abs, row), default=0) for row in B), default=0)
    if ma * mb * n < _INT64_SAFE:
        out = np.array(A, dtype=np.int64) @ np.array(B, dtype=np.int64)
        return [[int(x) for x in row] for row in out]
    return mat_mul(A, B)


def scale_to_int(A):
    """Return (integer matrix, common denominator) with A = M / d."""
    d = 1
    for row in A:
        for x in row:
            dx = x.denominator if isinstance(x, Fraction) else 1
            if dx != 1:
                d = lcm(d, dx)
    M = [
        [
            x.numerator * (d // x.denominator) if isinstance(x, Fraction) else x * d
            for x in row
        ]
        for row in A
    ]
    return M, d


def mat_equal(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def det(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
            M[i][k] = Fraction(0)
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def solve_right(A, b):
    """Solve A x = b exactly for square invertible A; b a vector."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] != 0), None)
        if piv is None:
            raise InconsistentSystemError("singular matrix in solve_right")
        M[k], M[piv] = M[piv], M[k]
        pk = M[k][k]
        M[k] = [x / pk for x in M[k]]
        for r in range(n):
            if r != k and M[r][k] != 0:
                f = M[r][k]
                M[r] = [x - f * y for x, y in zip(M[r], M[k])]
    return [M[i][n] for i in range(n)]


def nullspace(A, ncols=None):
    """Basis of the exact right nullspace of A (rows = equations)."""
    if not A:
        ncols = ncols or 0
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m, n = len(A), len(A[0])
    M = [[Fraction(x) for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(v)
    return basis


def solve_overdetermined(K, rhs):
    """Solve K X = rhs exactly, K with full column rank, extra rows checked.

    ``rhs`` is a list (one entry per row of K) of payload vectors; payload
    entries only need +, -, and multiplication by Fraction (Fractions and
    q-polynomials both qualify).  Raises InconsistentSystemError unless the
    residual of every surplus row is identically zero.
    """
    rows = [[Fraction(x) for x in row] for row in K]
    load = [list(p) for p in rhs]
    nrow = len(rows)
    ncol = len(rows[0]) if rows else 0
    perm = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, nrow) if rows[i][c] != 0), None)
        if piv is None:
            raise InconsistentSystemError("cover matrix lost column rank")
        rows[r], rows[piv] = rows[piv], rows[r]
        load[r], load[piv] = load[piv], load[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        load[r] = [x * (1 / pv) for x in load[r]]
        for i in range(nrow):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                load[i] = [x - y * f for x, y in zip(load[i], load[r])]
        perm.append(c)
        r += 1
    for i in range(r, nrow):
        if any(load[i]):
            raise InconsistentSystemError("nonzero residual in overdetermined solve")
    out = [None] * ncol
    for i, c in enumerate(perm):
        out[c] = load[i]
    return out


def elimination_transform(K):
    """Row-reduce [K | I] for K with full column rank.

    Returns (S, R): S maps right-hand sides to the unique solution
    (X = S @ B) and the rows of R span the left null space, so R @ B == 0
    is the exact consistency condition of the overdetermined system.
    """
    nrow = len(K)
    ncol = len(K[0]) if K else 0
    rows = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(nrow)]
        for i, row in enumerate(K)
    ]
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, nrow) if rows[i][c] != 0), None)
        if piv is None:
            raise InconsistentSystemError("cover matrix lost column rank")
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrow):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    S = [row[ncol:] for row in rows[:ncol]]
    R = [row[ncol:] for row in rows[ncol:]]
    return S, R


def charpoly(A):
    """Characteristic polynomial of A, exact, via Faddeev-LeVerrier.

    Returns coefficients [1, c1, ..., cn] of x^n + c1 x^(n-1) + ... + cn.
    """
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    coeffs = [Fraction(1)]
    Mk = [row[:] for row in M]
    for k in range(1, n + 1):
        ck = -sum(Mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k < n:
            for i in range(n):
                Mk[i][i] += ck
            Mk = mat_mul(M, Mk)
    return coeffs


def poly_eval(p, x):
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _poly_normalize(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _poly_rem(a, b):
    a = list(a)
    db, lead = len(b) - 1, b[0]
    while len(a) - 1 >= db and any(a):
        if a[0] == 0:
            a.pop(0)
            continue
        f = a[0] / lead
        for j in range(len(b)):
            a[j] -= f * b[j]
        a.pop(0)
    return _poly_normalize(a) if any(a) else [Fraction(0)]


def poly_derivative(p):
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [Fraction(0)]


def sturm_chain(p):
    chain = [_poly_normalize([Fraction(c) for c in p])]
    dp = poly_derivative(chain[0])
    if any(dp):
        chain.append(_poly_normalize(dp))
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not any(rem):
            break
        chain.append([-c for c in rem])
    return chain


def _sign_changes(chain, x):
    signs = []
    for p in chain:
        v = poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, a, b):
    """Distinct real roots of p in the half-open interval (a, b]."""
    chain = sturm_chain(p)
    return _sign_changes(chain, Fraction(a)) - _sign_changes(chain, Fraction(b))


def poly_gcd(p, q):
    a = _poly_normalize([Fraction(c) for c in p])
    b = _poly_normalize([Fraction(c) for c in q])
    while any(b) and len(b) > 0:
        r = _poly_rem(a, b)
        a, b = b, r
        if not any(b):
            break
    return [c / a[0] for c in a]
