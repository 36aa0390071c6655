"""Exhaustive counting of quiver representations over prime fields.

Entry points return CountVector objects: N_t = number of representations with
tr W = t.  Enumeration is lexicographic over arrows in quiver order (matrix
entries row-major, first entry most significant); the compiled kernel moves
arrows that occur linearly in W to the innermost loops and updates the trace
incrementally, which still visits and evaluates every state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
from numba import njit

from . import linalg
from .errors import BadPrime, NotPolynomial, SizeLimit
from .quiver import Potential, Quiver, ncderiv

__all__ = ["CountVector", "Rep", "fiber_counts", "is_nilpotent", "kron_locus_counts",
           "commuting_counts", "gl_order", "poly_interpolate_counts", "matrix_trace_counts",
           "enumerate_reps", "trace_batch", "jacobi_mask", "is_prime", "one_loop"]

NAIVE_LIMIT = 3 * 10 ** 9
BATCH_LIMIT = 2 * 10 ** 6
MAXD = 4


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class CountVector:
    p: int
    counts: tuple

    def total(self):
        return sum(self.counts)

    def __getitem__(self, t):
        return self.counts[t % self.p]

    def __add__(self, other):
        if other.p != self.p:
            raise ValueError("prime mismatch")
        return CountVector(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def scaled(self, c):
        return CountVector(self.p, tuple(c * a for a in self.counts))

    @staticmethod
    def delta(p, t=0, weight=1):
        v = [0] * p
        v[t % p] = weight
        return CountVector(p, tuple(v))

    @staticmethod
    def from_array(p, arr):
        return CountVector(p, tuple(int(x) for x in arr))


@dataclass(frozen=True)
class Rep:
    dim: tuple
    mats: dict


def gl_order(n: int, q: int) -> int:
    if n < 0:
        raise ValueError("n >= 0")
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def coef_mod(c, p: int) -> int:
    c = Fraction(c)
    if c.denominator % p == 0:
        raise BadPrime(f"coefficient {c} is not defined mod {p}")
    return c.numerator * pow(c.denominator, p - 2, p) % p


def one_loop(k: int, c=1):
    """Quiver with a single loop X and potential c*X^k."""
    return Quiver(1, (("X", 0, 0),)), Potential.build([(c, "X" * k)])


# -- batched evaluation -------------------------------------------------------------

def enumerate_reps(Q: Quiver, n, p: int, limit: int = BATCH_LIMIT) -> dict:
    shapes = [Q.shape(a, n) for a in Q.names]
    k = sum(r * c for r, c in shapes)
    if p ** k > limit:
        raise SizeLimit(f"{p}^{k} states exceed the batch limit", p ** k)
    flat = linalg.all_matrices(1, k, p).reshape(-1, k)
    out, pos = {}, 0
    for a, (r, c) in zip(Q.names, shapes):
        out[a] = flat[:, pos:pos + r * c].reshape(flat.shape[0], r, c)
        pos += r * c
    return out


def eval_path(Q: Quiver, mats: dict, n, word: str, p: int, vertex=None):
    """Batched matrix of a path word (row-vector convention)."""
    B = next(iter(mats.values())).shape[0]
    if not word:
        dim = n[vertex]
        return np.broadcast_to(np.eye(dim, dtype=np.int64), (B, dim, dim)).copy()
    out = mats[word[-1]]
    for ch in reversed(word[:-1]):
        out = linalg.batch_matmul(out, mats[ch], p)
    return out % p


def trace_batch(Q: Quiver, W: Potential, n, mats: dict, p: int) -> np.ndarray:
    B = next(iter(mats.values())).shape[0]
    val = np.zeros(B, dtype=np.int64)
    for c, w in W.terms:
        M = eval_path(Q, mats, n, w, p)
        val = (val + coef_mod(c, p) * np.trace(M, axis1=1, axis2=2)) % p
    return val


def jacobi_mask(Q: Quiver, W: Potential, n, mats: dict, p: int) -> np.ndarray:
    """True where every cyclic derivative of W vanishes."""
    B = next(iter(mats.values())).shape[0]
    ok = np.ones(B, dtype=bool)
    for E, s, t in Q.arrows:
        der = ncderiv(W, E)
        if not der:
            continue
        acc = None
        for w, c in der.items():
            M = coef_mod(c, p) * eval_path(Q, mats, n, w, p, vertex=t)
            acc = M if acc is None else acc + M
        ok &= ~(acc % p).reshape(B, -1).any(axis=1)
    return ok


def _block_mats(Q: Quiver, n, mats: dict):
    T = sum(n)
    offs = np.cumsum([0] + list(n))
    B = next(iter(mats.values())).shape[0]
    out = []
    for a, s, t in Q.arrows:
        N = np.zeros((B, T, T), dtype=np.int64)
        N[:, offs[s]:offs[s + 1], offs[t]:offs[t + 1]] = mats[a]
        out.append(N)
    return out


def nilpotent_mask(Q: Quiver, n, mats: dict, p: int) -> np.ndarray:
    """Chain V_0 = sum V_i, V_{k+1} = sum_a V_k M(a); nilpotent iff it dies in T steps."""
    T = sum(n)
    B = next(iter(mats.values())).shape[0]
    if T == 0:
        return np.ones(B, dtype=bool)
    blocks = _block_mats(Q, n, mats)
    S = np.broadcast_to(np.eye(T, dtype=np.int64), (B, T, T)).copy()
    for _ in range(T):
        stack = np.concatenate([linalg.batch_matmul(S, N, p) for N in blocks], axis=1)
        E, _ = batch_echelon(stack, p)
        S = E[:, :T, :]
    return ~S.reshape(B, -1).any(axis=1)


def batch_echelon(Ms, p):
    A = np.array(Ms, dtype=np.int64) % p
    B, rows, cols = A.shape
    inv = linalg.inv_table(p)
    rk = np.zeros(B, dtype=np.int64)
    ar = np.arange(B)
    ridx = np.arange(rows)
    for c in range(cols):
        cand = (A[:, :, c] != 0) & (ridx[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        b, pr, tr = ar[has], piv[has], rk[has]
        row_p = A[b, pr].copy()
        A[b, pr] = A[b, tr]
        row_p = row_p * inv[row_p[:, c]][:, None] % p
        A[b, tr] = row_p
        below = ridx[None, :] > tr[:, None]
        factors = A[b, :, c] * below
        A[b] = (A[b] - factors[:, :, None] * row_p[:, None, :]) % p
        rk[has] += 1
    return A, rk


def is_nilpotent(Q: Quiver, rep: Rep, p: int) -> bool:
    mats = {a: np.asarray(rep.mats[a], dtype=np.int64)[None] for a in Q.names}
    return bool(nilpotent_mask(Q, rep.dim, mats, p)[0])


# -- compiled kernel ------------------------------------------------------------

@njit(cache=True)
def _matmul(A, ra, ca, B, cb, out, p):
    for i in range(ra):
        for j in range(cb):
            s = 0
            for k in range(ca):
                s += A[i, k] * B[k, j]
            out[i, j] = s % p


@njit(cache=True)
def _kernel(p, rows, cols, off, n_outer, n_inner, wlen, warr, wcoef, wmode, eliminate):
    nar = rows.shape[0]
    counts = np.zeros(p, dtype=np.int64)
    M = np.zeros((nar, 4, 4), dtype=np.int64)
    P = np.zeros((4, 4), dtype=np.int64)
    T = np.zeros((4, 4), dtype=np.int64)
    st = np.zeros(n_outer, dtype=np.int64)
    L = np.zeros(n_inner, dtype=np.int64)
    dig = np.zeros(n_inner, dtype=np.int64)
    total_outer = 1
    for _ in range(n_outer):
        total_outer *= p
    inner_size = 1
    for _ in range(n_inner):
        inner_size *= p
    for it in range(total_outer):
        # load outer matrices
        for a in range(nar):
            if off[a] < n_outer:
                for i in range(rows[a]):
                    for j in range(cols[a]):
                        M[a, i, j] = st[off[a] + i * cols[a] + j]
        const = 0
        for k in range(n_inner):
            L[k] = 0
        for w in range(wlen.shape[0]):
            ln = wlen[w]
            if wmode[w] == 0:
                a0 = warr[w, 0]
                r0 = rows[a0]
                c0 = cols[a0]
                for i in range(r0):
                    for j in range(c0):
                        P[i, j] = M[a0, i, j]
                for s in range(1, ln):
                    a = warr[w, s]
                    _matmul(P, r0, c0, M[a], cols[a], T, p)
                    c0 = cols[a]
                    for i in range(r0):
                        for j in range(c0):
                            P[i, j] = T[i, j]
                tr = 0
                for i in range(r0):
                    tr += P[i, i]
                const = (const + wcoef[w] * tr) % p
            else:
                e = warr[w, 0]
                re = rows[e]
                ce = cols[e]
                if ln == 1:
                    for i in range(ce):
                        for j in range(ce):
                            P[i, j] = 1 if i == j else 0
                    r0 = ce
                    c0 = ce
                else:
                    a0 = warr[w, 1]
                    r0 = rows[a0]
                    c0 = cols[a0]
                    for i in range(r0):
                        for j in range(c0):
                            P[i, j] = M[a0, i, j]
                    for s in range(2, ln):
                        a = warr[w, s]
                        _matmul(P, r0, c0, M[a], cols[a], T, p)
                        c0 = cols[a]
                        for i in range(r0):
                            for j in range(c0):
                                P[i, j] = T[i, j]
                # tr(E P) = sum_ij E_ij P_ji
                base = off[e] - n_outer
                for i in range(re):
                    for j in range(ce):
                        L[base + i * ce + j] = (L[base + i * ce + j] + wcoef[w] * P[j, i]) % p
        if eliminate:
            nz = False
            for k in range(n_inner):
                if L[k] != 0:
                    nz = True
                    break
            if nz:
                share = inner_size // p
                for t in range(p):
                    counts[t] += share
            else:
                counts[const] += inner_size
        else:
            for k in range(n_inner):
                dig[k] = 0
            v = const
            for s in range(inner_size):
                counts[v] += 1
                k = n_inner - 1
                while k >= 0:
                    dig[k] += 1
                    v += L[k]
                    if v >= p:
                        v -= p
                    if dig[k] < p:
                        break
                    dig[k] = 0
                    k -= 1
        # advance outer odometer
        k = n_outer - 1
        while k >= 0:
            st[k] += 1
            if st[k] < p:
                break
            st[k] = 0
            k -= 1
    return counts


def _choose_inner(Q: Quiver, W: Potential, n):
    """Largest arrow set with at most one occurrence per word (greedy by size)."""
    sizes = {a: r * c for a, (r, c) in ((a, Q.shape(a, n)) for a in Q.names)}
    chosen: list = []
    for a in sorted(Q.names, key=lambda x: (-sizes[x], Q.names.index(x))):
        if sizes[a] == 0:
            continue
        trial = chosen + [a]
        if all(sum(w.count(b) for b in trial) <= 1 for _, w in W.terms):
            chosen = trial
    return [a for a in Q.names if a in chosen]


def _compile(Q: Quiver, W: Potential, n, p: int, inner):
    names = Q.names
    outer = [a for a in names if a not in inner]
    order = outer + list(inner)
    idx = {a: names.index(a) for a in names}
    rows = np.array([Q.shape(a, n)[0] for a in names], dtype=np.int64)
    cols = np.array([Q.shape(a, n)[1] for a in names], dtype=np.int64)
    if max(list(rows) + list(cols) + [0]) > MAXD:
        raise SizeLimit(f"matrix dimension above {MAXD}")
    off = np.zeros(len(names), dtype=np.int64)
    pos = 0
    for a in order:
        off[idx[a]] = pos
        pos += rows[idx[a]] * cols[idx[a]]
    n_outer = sum(int(rows[idx[a]] * cols[idx[a]]) for a in outer)
    n_inner = pos - n_outer
    words = []
    for c, w in W.terms:
        path = list(reversed(w))  # matrix-product order
        if any(n[Q.arrow(a)[1]] == 0 for a in path):
            continue
        hits = [i for i, a in enumerate(path) if a in inner]
        if hits:
            i = hits[0]
            path = path[i:] + path[:i]
        words.append((coef_mod(c, p), [idx[a] for a in path], 1 if hits else 0))
    maxlen = max([len(w[1]) for w in words] + [1])
    wlen = np.array([len(w[1]) for w in words], dtype=np.int64)
    warr = np.zeros((len(words), maxlen), dtype=np.int64)
    for i, w in enumerate(words):
        warr[i, :len(w[1])] = w[1]
    wcoef = np.array([w[0] for w in words], dtype=np.int64)
    wmode = np.array([w[2] for w in words], dtype=np.int64)
    return rows, cols, off, n_outer, n_inner, wlen, warr, wcoef, wmode


def fiber_counts(Q: Quiver, W: Potential, n, p: int, sector: str = "all",
                 method: str = "auto", limit: int = NAIVE_LIMIT, dry_run: bool = False) -> CountVector:
    """N_t = #{representations in the sector with tr W = t}.

    methods: 'naive' (compiled full enumeration), 'batch' (numpy, small sizes),
    'eliminate' (sum out the linearly occurring arrows exactly).
    """
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime")
    n = tuple(n)
    dim = Q.ambient_dim(n)
    if sector not in ("all", "nilpotent"):
        raise ValueError(f"unknown sector {sector!r}")
    if sector == "nilpotent":
        mats = enumerate_reps(Q, n, p, limit=min(limit, BATCH_LIMIT))
        vals = trace_batch(Q, W, n, mats, p) if dim else np.zeros(1, dtype=np.int64)
        mask = nilpotent_mask(Q, n, mats, p)
        return CountVector.from_array(p, np.bincount(vals[mask], minlength=p))
    if dim == 0:
        return CountVector.delta(p)
    if method == "auto":
        method = "naive" if p ** dim <= limit else "eliminate"
    if method == "batch":
        mats = enumerate_reps(Q, n, p, limit=limit)
        return CountVector.from_array(p, np.bincount(trace_batch(Q, W, n, mats, p), minlength=p))
    inner = _choose_inner(Q, W, n)
    rows, cols, off, n_outer, n_inner, wlen, warr, wcoef, wmode = _compile(Q, W, n, p, inner)
    budget = p ** n_outer if method == "eliminate" else p ** dim
    if budget > limit:
        raise SizeLimit(f"enumeration of {budget} states exceeds the limit {limit}", budget)
    if dry_run:
        return None
    counts = _kernel(p, rows, cols, off, n_outer, n_inner, wlen, warr, wcoef, wmode,
                     method == "eliminate")
    return CountVector.from_array(p, counts)


# -- one-loop counts --------------------------------------------------------------

def _poly_factor_type(coeffs, p):
    """Degrees and multiplicities of the irreducible factors of a monic poly of degree <= 3."""
    f = [c % p for c in coeffs]  # highest degree first, monic
    out = []
    deg = len(f) - 1
    r = 0
    while r < p and deg > 0:
        # synthetic division by (x - r)
        q, acc = [], 0
        for c in f:
            acc = (acc * r + c) % p
            q.append(acc)
        if q[-1] == 0:
            f = q[:-1]
            deg -= 1
            out.append(("lin", r))
            continue
        r += 1
    mult: dict = {}
    for _, root in out:
        mult[root] = mult.get(root, 0) + 1
    parts = [(1, m) for m in mult.values()]
    if deg >= 4:
        raise SizeLimit("factorization implemented for degree <= 3")
    if deg > 0:
        parts.append((deg, 1))
    return parts


def _power_sum(coeffs, k, p):
    """tr(X^k) from the characteristic polynomial x^a + c1 x^(a-1) + ... + ca."""
    a = len(coeffs) - 1
    e = [1] + [((-1) ** i * coeffs[i]) % p for i in range(1, a + 1)]
    ps = [0] * (k + 1)
    for m in range(1, k + 1):
        s = 0
        for i in range(1, m):
            if i <= a:
                s += (-1) ** (i - 1) * e[i] * ps[m - i]
        if m <= a:
            s += (-1) ** (m - 1) * m * e[m]
        ps[m] = s % p
    return ps[k]


def charpoly_class_count(parts, q) -> int:
    """Number of matrices with a given factorization type of the characteristic polynomial."""
    a = sum(d * m for d, m in parts)
    num = Fraction(gl_order(a, q))
    for d, m in parts:
        num *= Fraction(q ** (d * (m * m - m)), gl_order(m, q ** d))
    assert num.denominator == 1
    return int(num)


def matrix_trace_counts(a: int, k: int, c, p: int, method: str = "auto",
                        limit: int = 5 * 10 ** 7) -> CountVector:
    """Fiber counts of X -> c*tr(X^k) on a x a matrices over F_p."""
    if a == 0:
        return CountVector.delta(p)
    cm = coef_mod(c, p)
    if method == "auto":
        method = "enumerate" if p ** (a * a) <= limit else "charpoly"
    if method == "enumerate":
        Q, W = one_loop(k, cm)
        return fiber_counts(Q, W, (a,), p, limit=limit)
    if a > 3:
        raise SizeLimit("characteristic-polynomial route implemented for a <= 3")
    counts = [0] * p
    for tail in np.ndindex(*([p] * a)):
        coeffs = [1] + list(tail)
        parts = _poly_factor_type(coeffs, p)
        counts[cm * _power_sum(coeffs, k, p) % p] += charpoly_class_count(parts, p)
    return CountVector(p, tuple(counts))


# -- conjugacy classes and the Kronecker locus --------------------------------------------

@lru_cache(maxsize=64)
def matrix_classes(n: int, p: int):
    """Conjugacy classes of n x n matrices (n <= 2): list of (representative, size)."""
    if n == 0:
        return [(np.zeros((0, 0), dtype=np.int64), 1)]
    if n > 2:
        raise SizeLimit("class grouping implemented for n <= 2")
    allm = linalg.all_matrices(n, n, p)
    if n == 1:
        return [(allm[i], 1) for i in range(p)]
    tr = (allm[:, 0, 0] + allm[:, 1, 1]) % p
    det = (allm[:, 0, 0] * allm[:, 1, 1] - allm[:, 0, 1] * allm[:, 1, 0]) % p
    scalar = (allm[:, 0, 1] == 0) & (allm[:, 1, 0] == 0) & (allm[:, 0, 0] == allm[:, 1, 1])
    key = (tr * p + det) * 2 + scalar
    uniq, first, size = np.unique(key, return_index=True, return_counts=True)
    return [(allm[i], int(s)) for i, s in zip(first, size)]


def _trace_power(X, k, p):
    M = np.eye(X.shape[0], dtype=np.int64)
    for _ in range(k):
        M = M @ X % p
    return int(np.trace(M)) % p


def sylvester_map(X, Y, p):
    """Matrix of A -> XA - AY on n0 x n1 matrices (row-major vec)."""
    n0, n1 = X.shape[0], Y.shape[0]
    M = np.kron(X, np.eye(n1, dtype=np.int64)) - np.kron(np.eye(n0, dtype=np.int64), Y.T)
    return M % p


def kron_locus_counts(d: int, n, p: int, nilpotentXY: bool = False) -> CountVector:
    """Fiber counts of tr(X^{d+1} - Y^{d+1})/(d+1) on {XA = AY, XB = BY}."""
    n0, n1 = n
    c = Fraction(1, d + 1)
    if n0 == 0 or n1 == 0:
        a, sign = (n1, -1) if n0 == 0 else (n0, 1)
        if nilpotentXY:
            return CountVector.delta(p, 0, p ** (a * a - a))
        return matrix_trace_counts(a, d + 1, sign * c, p)
    cm = coef_mod(c, p)
    Xs, Ys = matrix_classes(n0, p), matrix_classes(n1, p)
    if nilpotentXY:
        Xs = [(X, s) for X, s in Xs if _is_nil(X, p)]
        Ys = [(Y, s) for Y, s in Ys if _is_nil(Y, p)]
    vx = [_trace_power(X, d + 1, p) for X, _ in Xs]
    vy = [_trace_power(Y, d + 1, p) for Y, _ in Ys]
    maps = np.array([sylvester_map(X, Y, p) for X, _ in Xs for Y, _ in Ys])
    ranks = linalg.batch_rank(maps, p)
    counts = [0] * p
    i = 0
    for ix, (X, sx) in enumerate(Xs):
        for iy, (Y, sy) in enumerate(Ys):
            ker = n0 * n1 - int(ranks[i])
            i += 1
            t = cm * (vx[ix] - vy[iy]) % p
            counts[t] += sx * sy * p ** (2 * ker)
    return CountVector(p, tuple(counts))


def _is_nil(X, p):
    M = np.eye(X.shape[0], dtype=np.int64)
    for _ in range(X.shape[0]):
        M = M @ X % p
    return not M.any()


# -- commuting matrices -------------------------------------------------------------------

def _partitions(n, maxpart=None):
    if n == 0:
        yield ()
        return
    maxpart = n if maxpart is None else maxpart
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _conjugate(lam):
    return tuple(sum(1 for x in lam if x > i) for i in range(lam[0])) if lam else ()


def _aut_order(lam, Q) -> Fraction:
    """|Aut| of the F_Q[t]/(P^inf)-module of type lam (P of degree 1 over F_Q)."""
    out = Fraction(Q) ** sum(x * x for x in _conjugate(lam))
    for s in set(lam):
        for k in range(1, lam.count(s) + 1):
            out *= 1 - Fraction(1, Q ** k)
    return out


def _centralizer_dim(lam) -> int:
    return sum(x * x for x in _conjugate(lam))


def _mobius(n):
    out, m, k = 1, n, 2
    while k * k <= m:
        if m % k == 0:
            m //= k
            if m % k == 0:
                return 0
            out = -out
        k += 1
    return -out if m > 1 else out


def irreducible_count(d: int, q: int) -> int:
    return sum(_mobius(d // e) * q ** e for e in range(1, d + 1) if d % e == 0) // d


def _class_types(n):
    blocks = [(d, lam) for d in range(1, n + 1) for s in range(1, n // d + 1)
              for lam in _partitions(s)]
    for r in range(1, n + 1):
        for combo in combinations_with_replacement(blocks, r):
            if sum(d * sum(lam) for d, lam in combo) == n:
                yield combo


def commuting_counts_types(n: int, q: int, flag: str = "bothFree") -> int:
    """Commuting-pair counts by summing over conjugacy-class types of the first matrix."""
    G = gl_order(n, q)
    total = Fraction(0)
    if flag in ("firstNilpotent", "bothNilpotent"):
        for lam in _partitions(n):
            size = G / _aut_order(lam, q)
            c = _centralizer_dim(lam)
            total += size * q ** (c - (len(lam) if flag == "bothNilpotent" else 0))
        return int(total)
    for combo in _class_types(n):
        ways = Fraction(1)
        for d in {d for d, _ in combo}:
            ent = [lam for dd, lam in combo if dd == d]
            N = irreducible_count(d, q)
            ways *= math.perm(N, len(ent)) if N >= len(ent) else 0
            for lam in set(ent):
                ways /= math.factorial(ent.count(lam))
        if not ways:
            continue
        aut = Fraction(1)
        cdim = 0
        for d, lam in combo:
            aut *= _aut_order(lam, q ** d)
            cdim += d * _centralizer_dim(lam)
        total += ways * (G / aut) * q ** cdim
    assert total.denominator == 1
    return int(total)


def commuting_counts_enum(n: int, p: int, flag: str = "bothFree", limit: int = BATCH_LIMIT) -> int:
    """Enumerate X, solve the centralizer system; nilpotent Y counted by enumerating the centralizer."""
    if p ** (n * n) > limit:
        raise SizeLimit(f"{p}^{n*n} first matrices exceed the limit", p ** (n * n))
    if n == 0:
        return 1
    Xs = linalg.all_matrices(n, n, p)
    if flag != "bothFree":
        Xs = Xs[[_is_nil(X, p) for X in Xs]]
    maps = np.array([sylvester_map(X, X, p) for X in Xs])
    ranks = linalg.batch_rank(maps, p)
    if flag != "bothNilpotent":
        return int(sum(p ** (n * n - int(r)) for r in ranks))
    total = 0
    for X, r in zip(Xs, ranks):
        basis = _nullspace(sylvester_map(X, X, p), p)
        k = basis.shape[0]
        if p ** k > limit:
            raise SizeLimit("centralizer too large to enumerate", p ** k)
        coeffs = linalg.all_matrices(1, k, p).reshape(-1, k)
        Ys = (coeffs @ basis % p).reshape(-1, n, n)
        total += int(_nil_batch(Ys, p).sum())
    return total


def commuting_counts(n: int, p: int, flag: str = "bothFree", method: str = "auto") -> int:
    if flag not in ("bothFree", "firstNilpotent", "bothNilpotent"):
        raise ValueError(flag)
    if method == "auto":
        method = "enumerate" if p ** (n * n) <= 10 ** 5 else "types"
    if method == "enumerate":
        return commuting_counts_enum(n, p, flag)
    return commuting_counts_types(n, p, flag)


def _nullspace(M, p):
    A, piv = linalg.rref(M, p)
    cols = M.shape[1]
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-A[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def _nil_batch(Ys, p):
    n = Ys.shape[1]
    M = Ys.copy()
    for _ in range(n - 1):
        M = linalg.batch_matmul(M, Ys, p)
    return ~M.reshape(M.shape[0], -1).any(axis=1)


# -- interpolation ---------------------------------------------------------------------------

def poly_interpolate_counts(counter, degree_bound: int, primes) -> tuple:
    """Interpolate counter(q) from degree_bound+1 primes and verify on the rest.

    Returns coefficients (constant term first) as Fractions.
    """
    primes = list(primes)
    if len(primes) < degree_bound + 2:
        raise ValueError("need at least degree_bound + 2 primes")
    pts = [(Fraction(q), Fraction(counter(q))) for q in primes]
    base, check = pts[: degree_bound + 1], pts[degree_bound + 1:]
    coeffs = [Fraction(0)] * (degree_bound + 1)
    for i, (xi, yi) in enumerate(base):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(base):
            if j == i:
                continue
            poly = [Fraction(0)] + poly
            for k in range(len(poly) - 1):
                poly[k] -= xj * poly[k + 1]
            denom *= xi - xj
        for k, c in enumerate(poly):
            coeffs[k] += yi * c / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    for x, y in check:
        if poly_eval(coeffs, x) != y:
            raise NotPolynomial(f"interpolant fails at q={x}")
    return tuple(coeffs)


def poly_eval(coeffs, q):
    return sum(Fraction(c) * Fraction(q) ** i for i, c in enumerate(coeffs))
