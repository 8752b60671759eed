"""Integer matrix kernels: Hermite and Smith normal forms with transforms.

Matrices are lists of row lists of Python ints.  Every routine returns
fresh lists and never mutates its argument.
"""
from __future__ import annotations

from typing import List

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy(m: Matrix) -> Matrix:
    return [list(r) for r in m]


def transpose(m: Matrix, ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(m: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf_with_transform(m: Matrix, ncols: int | None = None):
    """Row Hermite normal form.

    Returns (H, U, Uinv) with U @ m == H, U unimodular and Uinv its
    inverse.  H has positive pivots, entries above each pivot reduced into
    [0, pivot), and zero rows at the bottom.
    """
    h = copy(m)
    rows = len(h)
    cols = len(h[0]) if h else (ncols or 0)
    u = identity(rows)
    ui = identity(rows)

    def swap(i, j):
        h[i], h[j] = h[j], h[i]
        u[i], u[j] = u[j], u[i]
        for r in ui:
            r[i], r[j] = r[j], r[i]

    def addmul(i, j, q):
        # row_i += q * row_j
        if q == 0:
            return
        hi, hj = h[i], h[j]
        for c in range(cols):
            hi[c] += q * hj[c]
        ri, rj = u[i], u[j]
        for c in range(rows):
            ri[c] += q * rj[c]
        # inverse: column_j -= q * column_i
        for r in ui:
            r[j] -= q * r[i]

    def negate(i):
        h[i] = [-x for x in h[i]]
        u[i] = [-x for x in u[i]]
        for r in ui:
            r[i] = -r[i]

    piv_row = 0
    for c in range(cols):
        if piv_row >= rows:
            break
        while True:
            best = None
            for r in range(piv_row, rows):
                v = h[r][c]
                if v != 0 and (best is None or abs(v) < abs(h[best][c])):
                    best = r
            if best is None:
                break
            if best != piv_row:
                swap(piv_row, best)
            p = h[piv_row][c]
            done = True
            for r in range(piv_row + 1, rows):
                if h[r][c] != 0:
                    addmul(r, piv_row, -(h[r][c] // p))
                    if h[r][c] != 0:
                        done = False
            if done:
                break
        if h[piv_row][c] == 0:
            continue
        if h[piv_row][c] < 0:
            negate(piv_row)
        p = h[piv_row][c]
        for r in range(piv_row):
            addmul(r, piv_row, -(h[r][c] // p))
        piv_row += 1
    return h, u, ui


def hnf(m: Matrix, ncols: int | None = None) -> Matrix:
    """Nonzero rows of the row Hermite normal form."""
    h, _, _ = hnf_with_transform(m, ncols)
    return [r for r in h if any(r)]


def pivots(h: Matrix) -> list:
    out = []
    for r in h:
        for c, v in enumerate(r):
            if v != 0:
                out.append(c)
                break
    return out


def smith_with_transform(m: Matrix):
    """Smith normal form D = U @ m @ V with unimodular U, V.

    Returns (D, U, V, Vinv).  Diagonal entries are nonnegative and each
    divides the next.
    """
    a = copy(m)
    rows = len(a)
    cols = len(a[0]) if a else 0
    u = identity(rows)
    v = identity(cols)
    vi = identity(cols)

    def row_add(i, j, q):
        for c in range(cols):
            a[i][c] += q * a[j][c]
        for c in range(rows):
            u[i][c] += q * u[j][c]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_add(i, j, q):
        # column_i += q * column_j; Vinv gets row_j -= q * row_i
        for r in range(rows):
            a[r][i] += q * a[r][j]
        for r in range(cols):
            v[r][i] += q * v[r][j]
        for c in range(cols):
            vi[j][c] -= q * vi[i][c]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for r in range(t, rows):
                for c in range(t, cols):
                    if a[r][c] != 0 and (best is None or abs(a[r][c]) < abs(a[best[0]][best[1]])):
                        best = (r, c)
            if best is None:
                return _finish_smith(a, u, v, vi)
            if best[0] != t:
                row_swap(t, best[0])
            if best[1] != t:
                col_swap(t, best[1])
            p = a[t][t]
            clean = True
            for r in range(t + 1, rows):
                if a[r][t]:
                    row_add(r, t, -(a[r][t] // p))
                    clean = clean and a[r][t] == 0
            for c in range(t + 1, cols):
                if a[t][c]:
                    col_add(c, t, -(a[t][c] // p))
                    clean = clean and a[t][c] == 0
            if not clean:
                continue
            # divisibility: fold in any entry the pivot does not divide
            bad = None
            for r in range(t + 1, rows):
                for c in range(t + 1, cols):
                    if a[r][c] % p:
                        bad = r
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            for c in range(cols):
                a[t][c] = -a[t][c]
            for c in range(rows):
                u[t][c] = -u[t][c]
    return _finish_smith(a, u, v, vi)


def _finish_smith(a, u, v, vi):
    for t in range(min(len(a), len(a[0]) if a else 0)):
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v, vi


def unimodular_inverse(m: Matrix) -> Matrix:
    h, u, _ = hnf_with_transform(m)
    # U m = H = I for a unimodular m, so U is the inverse
    if h != identity(len(m)):
        raise ValueError("matrix is not unimodular")
    return u
