"""Dense exact linear algebra over a NumberField (lists of lists of FieldScalar)."""
from __future__ import annotations

from .basefield import FieldScalar, NumberField

__all__ = [
    "adjugate",
    "det",
    "greedy_cols",
    "greedy_rows",
    "identity",
    "inverse",
    "matmul",
    "rank",
    "solve_vector",
]


def identity(K: NumberField, n: int):
    return [[K.one if i == j else K.zero for j in range(n)] for i in range(n)]


def matmul(A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for k in range(m):
                a, b = A[i][k], B[k][j]
                if a and b:
                    acc = a * b if acc is None else acc + a * b
            row.append(acc if acc is not None else _zero_like(A, B))
        out.append(row)
    return out


def _zero_like(A, B):
    for M in (A, B):
        for row in M:
            for v in row:
                return v * 0
    raise ValueError("empty matrix")


def _echelon(K, M):
    """Row-reduce a copy of M; return (reduced rows, pivot columns, det sign*product)."""
    A = [list(r) for r in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    scale = K.one
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if A[i][c]), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
            scale = -scale
        piv = A[r][c]
        scale = scale * piv
        inv = piv.inverse()
        A[r] = [v * inv for v in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots, scale


def rank(K: NumberField, M) -> int:
    if not M or not M[0]:
        return 0
    return len(_echelon(K, M)[1])


def det(K: NumberField, M) -> FieldScalar:
    n = len(M)
    if n == 0:
        return K.one
    _, pivots, scale = _echelon(K, M)
    return scale if len(pivots) == n else K.zero


def inverse(K: NumberField, M):
    n = len(M)
    aug = [list(M[i]) + identity(K, n)[i] for i in range(n)]
    A, pivots, _ = _echelon(K, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in A]


def adjugate(K: NumberField, M):
    """adj(M) with M adj(M) = det(M) I; handles singular M by cofactors."""
    n = len(M)
    if n == 1:
        return [[K.one]]
    d = det(K, M)
    if d:
        Minv = inverse(K, M)
        return [[d * v for v in row] for row in Minv]
    out = [[K.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            v = det(K, minor)
            out[i][j] = -v if (i + j) % 2 else v
    return out


def solve_vector(K: NumberField, A, b):
    """Some solution x of A x = b, or None when inconsistent."""
    if not A:
        return [] if not any(b) else None
    m = len(A[0])
    aug = [list(A[i]) + [b[i]] for i in range(len(A))]
    R, pivots, _ = _echelon(K, aug)
    if m in pivots:
        return None
    x = [K.zero] * m
    for row, c in zip(R, pivots):
        x[c] = row[m]
    return x


def greedy_rows(K: NumberField, M, limit: int | None = None) -> list:
    """Indices of the lexicographically first maximal independent set of rows."""
    from .funcfield import KEchelon

    ech = KEchelon()
    chosen = []
    for i, row in enumerate(M):
        vec = {j: v for j, v in enumerate(row) if v}
        if vec and ech.add(vec):
            chosen.append(i)
            if limit is not None and len(chosen) == limit:
                break
    return chosen


def greedy_cols(K: NumberField, M, limit: int | None = None) -> list:
    if not M:
        return []
    T = [[M[i][j] for i in range(len(M))] for j in range(len(M[0]))]
    return greedy_rows(K, T, limit)
