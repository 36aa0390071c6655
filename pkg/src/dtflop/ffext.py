"""Small extension fields F_{p^m} for Adams operations on realized classes.

psi^m of a class [X, f] over F_p is counted by the F_{p^m}-points of X with the
function Tr_{F_{p^m}/F_p}(f); for monomial classes this needs only the trace of
c*z^k on F_{p^m}.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np


def _polymulmod(a, b, mod, p):
    """Batched product of coefficient arrays (N, m) modulo a monic poly (low degree first)."""
    m = mod.shape[0] - 1
    N = a.shape[0]
    prod = np.zeros((N, 2 * m - 1), dtype=np.int64)
    for i in range(m):
        prod[:, i:i + m] += a[:, i:i + 1] * b
    prod %= p
    for deg in range(2 * m - 2, m - 1, -1):
        c = prod[:, deg].copy()
        prod[:, deg - m:deg + 1] -= c[:, None] * mod[None, :]
        prod %= p
    return prod[:, :m]


@lru_cache(maxsize=None)
def irreducible(p: int, m: int) -> tuple:
    """Lexicographically first monic irreducible of degree m (low degree first)."""
    if m == 1:
        return (0, 1)
    for tail in product(range(p), repeat=m):
        if tail[0] == 0:
            continue
        f = list(tail) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible found")


def _is_irreducible(f, p):
    m = len(f) - 1
    # no factor of degree <= m/2: check x^(p^k) != x mod f gcd-free via brute force on small cases
    for d in range(1, m // 2 + 1):
        for tail in product(range(p), repeat=d):
            g = list(tail) + [1]
            if _polymod(f, g, p) == [0] * d:
                return False
    return True


def _polymod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    while len(f) - 1 >= dg:
        c = f[-1] % p
        if c:
            shift = len(f) - 1 - dg
            for i, gc in enumerate(g):
                f[shift + i] = (f[shift + i] - c * gc) % p
        f.pop()
    f = [x % p for x in f] + [0] * (dg - len(f))
    return f[:dg]


@lru_cache(maxsize=None)
def field_elements(p: int, m: int) -> np.ndarray:
    k = p ** m
    idx = np.arange(k, dtype=np.int64)
    out = np.empty((k, m), dtype=np.int64)
    for i in range(m):
        out[:, i] = idx % p
        idx //= p
    return out


@lru_cache(maxsize=None)
def _trace_basis(p: int, m: int) -> np.ndarray:
    """Tr(x^i) for the power basis, via traces of multiplication matrices."""
    mod = np.array(irreducible(p, m), dtype=np.int64)
    basis = np.eye(m, dtype=np.int64)
    tr = np.zeros(m, dtype=np.int64)
    for i in range(m):
        e = np.repeat(basis[i:i + 1], m, axis=0)
        prod = _polymulmod(e, basis, mod, p)  # row j = x^i * x^j
        tr[i] = int(sum(prod[j, j] for j in range(m))) % p
    return tr


def power_map(p: int, m: int, k: int) -> np.ndarray:
    """z^k for every element z of F_{p^m}."""
    z = field_elements(p, m)
    mod = np.array(irreducible(p, m), dtype=np.int64)
    out = np.zeros_like(z)
    out[:, 0] = 1
    for _ in range(k):
        out = _polymulmod(out, z, mod, p)
    return out


@lru_cache(maxsize=None)
def monomial_trace_counts(p: int, m: int, k: int, c: int, units_only: bool) -> tuple:
    """#{z in F_{p^m} (or its units): Tr(c z^k) = t} for t in F_p."""
    zk = power_map(p, m, k)
    vals = (zk @ _trace_basis(p, m)) * c % p
    if units_only:
        vals = vals[1:]
    return tuple(int(x) for x in np.bincount(vals, minlength=p))
