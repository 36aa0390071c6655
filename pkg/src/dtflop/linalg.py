"""Exact linear algebra over F_p, single and batched (numpy int64)."""
from __future__ import annotations

import numpy as np


def inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        t[x] = pow(x, p - 2, p)
    return t


def rref(M, p: int):
    """Row-reduced echelon form mod p; returns (matrix, pivot columns)."""
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = A.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        for k in range(rows):
            if k != r and A[k, c]:
                A[k] = (A[k] - A[k, c] * A[r]) % p
        piv.append(c)
        r += 1
    return A, piv


def rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def row_basis(M, p: int) -> np.ndarray:
    A, piv = rref(M, p)
    return A[: len(piv)]


def batch_rank(Ms: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices, shape (B, r, c)."""
    A = np.array(Ms, dtype=np.int64) % p
    B, rows, cols = A.shape
    inv = inv_table(p)
    rk = np.zeros(B, dtype=np.int64)
    ar = np.arange(B)
    ridx = np.arange(rows)
    for c in range(cols):
        active = ridx[None, :] >= rk[:, None]
        cand = (A[:, :, c] != 0) & active
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        b = ar[has]
        pr, tr = piv[has], rk[has]
        # swap pivot row into position rk
        row_p = A[b, pr].copy()
        A[b, pr] = A[b, tr]
        row_p = row_p * inv[row_p[:, c]][:, None] % p
        A[b, tr] = row_p
        below = (ridx[None, :] > tr[:, None])
        factors = A[b, :, c] * below
        A[b] = (A[b] - factors[:, :, None] * row_p[:, None, :]) % p
        rk[has] += 1
    return rk


def subspaces(n: int, p: int):
    """All subspaces of F_p^n as RREF row-basis matrices (k x n)."""
    from itertools import combinations, product
    out = [np.zeros((0, n), dtype=np.int64)]
    for k in range(1, n + 1):
        for piv in combinations(range(n), k):
            free = [(i, j) for i in range(k) for j in range(n)
                    if j > piv[i] and j not in piv]
            for vals in product(range(p), repeat=len(free)):
                M = np.zeros((k, n), dtype=np.int64)
                for i, c in enumerate(piv):
                    M[i, c] = 1
                for (i, j), v in zip(free, vals):
                    M[i, j] = v
                out.append(M)
    return out


def all_matrices(n: int, m: int, p: int) -> np.ndarray:
    """Every n x m matrix over F_p in lexicographic (row-major) order, shape (p^(nm), n, m)."""
    k = n * m
    if k == 0:
        return np.zeros((1, n, m), dtype=np.int64)
    idx = np.arange(p ** k, dtype=np.int64)
    digits = np.empty((p ** k, k), dtype=np.int64)
    for i in range(k - 1, -1, -1):
        digits[:, i] = idx % p
        idx //= p
    return digits.reshape(-1, n, m)


def batch_matmul(A, B, p):
    return np.einsum("bij,bjk->bik", A, B) % p
