"""Row reduction and null spaces over F_q."""
from __future__ import annotations

import numpy as np

from .field import FieldCtx


def rref(ctx: FieldCtx, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of M; returns (nonzero rows, pivot columns)."""
    A = np.array(M, dtype=np.int64).copy()
    if A.size == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0), []
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        A[[r, k]] = A[[k, r]]
        A[r] = ctx.mul(int(ctx.inv(A[r, c])), A[r])
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = ctx.sub(A[i], ctx.mul(int(A[i, c]), A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace(ctx: FieldCtx, M: np.ndarray, ncols: int) -> np.ndarray:
    """Basis (as rows) of {x in F_q^ncols : M x = 0}."""
    M = np.asarray(M, dtype=np.int64).reshape(-1, ncols)
    R, pivots = rref(ctx, M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for i, pc in enumerate(pivots):
            basis[b, pc] = ctx.neg(int(R[i, f]))
    return basis


def rank(ctx: FieldCtx, M: np.ndarray) -> int:
    return len(rref(ctx, M)[1])


def matvec_zero_mask(ctx: FieldCtx, R: np.ndarray, X: np.ndarray) -> np.ndarray:
    """For each row x of X (coefficient vectors), whether R x = 0 over F_q."""
    ok = np.ones(X.shape[0], dtype=bool)
    for row in np.asarray(R):
        acc = np.zeros(X.shape[0], dtype=np.int64)
        for i, r in enumerate(row):
            if r:
                acc = ctx.add(acc, ctx.mul(int(r), X[:, i]))
        ok &= acc == 0
    return ok
