"""Dense exact linear algebra over a FieldSpec (matrices are lists of rows of ints)."""

from __future__ import annotations

from .field import FieldSpec


class LinAlgError(ValueError):
    pass


class SingularMatrixError(LinAlgError):
    pass


def rref(F: FieldSpec, A: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form with first-nonzero pivoting; returns (R, pivot columns)."""
    M = [list(row) for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    add, mul, inv, neg = F.add, F.mul, F.inv, F.neg
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        lead_inv = inv(M[r][c])
        if lead_inv != 1:
            M[r] = [mul(x, lead_inv) for x in M[r]]
        pr = M[r]
        for i in range(rows):
            if i != r and M[i][c]:
                f = neg(M[i][c])
                M[i] = [add(x, mul(f, y)) if y else x for x, y in zip(M[i], pr)]
        pivots.append(c)
        r += 1
    return M, pivots


def solve(F: FieldSpec, A: list[list[int]], b: list[int]) -> list[int]:
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise LinAlgError(f"dimension mismatch: {n}x? matrix, vector of length {len(b)}")
    R, pivots = rref(F, [list(row) + [bi] for row, bi in zip(A, b)])
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise SingularMatrixError("matrix is singular")
    return [R[i][n] for i in range(n)]


def inverse(F: FieldSpec, A: list[list[int]]) -> list[list[int]]:
    n = len(A)
    if any(len(row) != n for row in A):
        raise LinAlgError("inverse of a non-square matrix")
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [R[i][n:] for i in range(n)]


def nullspace(F: FieldSpec, A: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    """Kernel basis: one vector per free column, with a 1 in that column."""
    cols = len(A[0]) if A else (ncols or 0)
    if not A:
        return [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    R, pivots = rref(F, A)
    pivset = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivset:
            continue
        v = [0] * cols
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R[i][free])
        basis.append(v)
    return basis


def matvec(F: FieldSpec, A: list[list[int]], x: list[int]) -> list[int]:
    out = []
    for row in A:
        acc = 0
        for a, b in zip(row, x):
            if a and b:
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out
