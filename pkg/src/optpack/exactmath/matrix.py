"""Exact linear algebra: characteristic polynomials over Q and LDL^T /
Gaussian elimination over a number field.

charpoly uses Faddeev-LeVerrier (divisions are by integers, hence exact).
The LDL^T factorization uses symmetric diagonal pivoting, which is complete
for the PSD checks this package needs: a negative pivot or a zero diagonal
with a nonzero residual row certifies "not PSD" by Sylvester's criterion.
"""

from __future__ import annotations

from gmpy2 import mpq

from .numberfield import FieldElement, NumberField
from .qq import qq


def charpoly_coeffs(M):
    """Coefficients [c0, ..., cn] of det(xI - M), cn = 1, for a rational
    square matrix given as a list of rows."""
    n = len(M)
    for row in M:
        if len(row) != n:
            raise ValueError("matrix is not square")
    M = [[qq(x) for x in row] for row in M]
    # Faddeev-LeVerrier: A_1 = M, c_{n-1} = -tr A_1,
    # A_{k} = M (A_{k-1} + c_{n-k+1} I), c_{n-k} = -tr(A_k)/k
    coeffs = [mpq(0)] * (n + 1)
    coeffs[n] = mpq(1)
    A = [row[:] for row in M]
    for k in range(1, n + 1):
        tr = sum((A[i][i] for i in range(n)), mpq(0))
        c = -tr / k
        coeffs[n - k] = c
        if k == n:
            break
        for i in range(n):
            A[i][i] += c
        A = _matmul_qq(M, A)
    return coeffs


def _matmul_qq(A, B):
    n, m, p = len(A), len(B[0]), len(B)
    out = [[mpq(0)] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for k in range(p):
            a = Ai[k]
            if a == 0:
                continue
            Bk = B[k]
            row = out[i]
            for j in range(m):
                row[j] += a * Bk[j]
    return out


# ---------------------------------------------------------------------------
# matrices over a number field
# ---------------------------------------------------------------------------


def fe_matrix(field: NumberField, rows):
    """Coerce a list-of-rows matrix into FieldElements of `field`."""
    return [[field.coerce(x) for x in row] for row in rows]


def matmul(A, B):
    n, p, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for k in range(p):
                t = A[i][k] * B[k][j]
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def identity(field: NumberField, n):
    return [
        [field.one() if i == j else field.zero() for j in range(n)] for i in range(n)
    ]


def ldlt(field: NumberField, A):
    """Symmetric factorization P A P^T = L D L^T with unit lower L.

    Returns (perm, L, D, rank, psd) where perm is the row order applied,
    D the list of pivots (length n, zeros past the rank), and psd is False
    as soon as a negative pivot or a zero diagonal with nonzero residual
    appears (in which case the factorization stops early).
    """
    n = len(A)
    A = [[field.coerce(x) for x in row] for row in A]
    perm = list(range(n))
    L = identity(field, n)
    D = [field.zero() for _ in range(n)]
    rank = 0
    for k in range(n):
        pivot = -1
        for j in range(k, n):
            if A[j][j].sign() != 0:
                pivot = j
                break
        if pivot < 0:
            # remaining diagonal is zero; PSD requires the whole block zero
            for i in range(k, n):
                for j in range(k, n):
                    if not A[i][j].is_zero():
                        return perm, L, D, rank, False
            return perm, L, D, rank, True
        if pivot != k:
            A[k], A[pivot] = A[pivot], A[k]
            for row in A:
                row[k], row[pivot] = row[pivot], row[k]
            perm[k], perm[pivot] = perm[pivot], perm[k]
            for i in range(n):
                L[k][i], L[pivot][i] = L[pivot][i], L[k][i]
            # only the strictly-lower part of L is meaningful; re-fix diag
            for i in range(n):
                L[i][i] = field.one()
                for j in range(i + 1, n):
                    L[i][j] = field.zero()
        d = A[k][k]
        if d.sign() < 0:
            D[k] = d
            return perm, L, D, rank, False
        D[k] = d
        rank += 1
        dinv = d.inverse()
        for i in range(k + 1, n):
            f = A[i][k] * dinv
            L[i][k] = f
            if not A[i][k].is_zero():
                for j in range(k, n):
                    A[i][j] = A[i][j] - f * A[k][j]
        for i in range(k + 1, n):
            A[k][i] = field.zero()
    return perm, L, D, rank, True


def psd_rank(field: NumberField, A):
    """(is_psd, rank) for a symmetric matrix over the field; exact."""
    perm, L, D, rank, psd = ldlt(field, A)
    return psd, (rank if psd else None)


def solve(field: NumberField, A, B):
    """Solve A X = B by Gaussian elimination; A must be invertible."""
    n = len(A)
    m = len(B[0])
    A = [[field.coerce(x) for x in row] for row in A]
    X = [[field.coerce(x) for x in row] for row in B]
    for k in range(n):
        pivot = -1
        for j in range(k, n):
            if not A[j][k].is_zero():
                pivot = j
                break
        if pivot < 0:
            raise ValueError("singular matrix")
        A[k], A[pivot] = A[pivot], A[k]
        X[k], X[pivot] = X[pivot], X[k]
        inv = A[k][k].inverse()
        A[k] = [x * inv for x in A[k]]
        X[k] = [x * inv for x in X[k]]
        for i in range(n):
            if i == k or A[i][k].is_zero():
                continue
            f = A[i][k]
            A[i] = [a - f * b for a, b in zip(A[i], A[k])]
            X[i] = [a - f * b for a, b in zip(X[i], X[k])]
    return X


def inverse(field: NumberField, A):
    return solve(field, A, identity(field, len(A)))


def rank(field: NumberField, A):
    """Rank by Gaussian elimination with arbitrary pivoting."""
    A = [[field.coerce(x) for x in row] for row in A]
    n = len(A)
    m = len(A[0]) if A else 0
    r = 0
    col = 0
    while r < n and col < m:
        pivot = -1
        for i in range(r, n):
            if not A[i][col].is_zero():
                pivot = i
                break
        if pivot < 0:
            col += 1
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = A[r][col].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(r + 1, n):
            if not A[i][col].is_zero():
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        col += 1
    return r
