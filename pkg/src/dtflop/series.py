"""Truncated power series in the symbols e_n, n in N^2, over a pluggable lambda-ring."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

__all__ = ["CoeffRing", "EvSeries", "mul", "add", "sym", "log_sym", "power", "scale",
           "dimvectors", "to_json"]


@dataclass(frozen=True)
class CoeffRing:
    """Minimal contract for coefficients: zero, one, sigma^n, zero test, rendering."""

    name: str
    zero: Any
    one: Any
    sigma: Callable[[int, Any], Any] | None = None
    is_zero: Callable[[Any], bool] = lambda x: x == 0
    render: Callable[[Any], str] = str


def dimvectors(D: int):
    """All n in N^2 with 1 <= |n| <= D, ordered by total degree."""
    return [(a, t - a) for t in range(1, D + 1) for a in range(t, -1, -1)]


@dataclass(frozen=True)
class EvSeries:
    ring: CoeffRing
    trunc: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): v for k, v in self.coeffs.items()
                 if sum(k) <= self.trunc and not self.ring.is_zero(v)}
        object.__setattr__(self, "coeffs", clean)

    def __getitem__(self, n):
        return self.coeffs.get(tuple(n), self.ring.zero)

    def const_term(self):
        return self[(0, 0)]

    def map(self, f, ring=None) -> "EvSeries":
        return EvSeries(ring or self.ring, self.trunc, {k: f(v) for k, v in self.coeffs.items()})

    def truncate(self, D: int) -> "EvSeries":
        return EvSeries(self.ring, min(D, self.trunc), self.coeffs)

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def equals(self, other, eq=None, D=None) -> bool:
        D = min(self.trunc, other.trunc) if D is None else D
        eq = eq or (lambda a, b: self.ring.is_zero(a - b))
        keys = {k for k in set(self.coeffs) | set(other.coeffs) if sum(k) <= D}
        return all(eq(self[k], other[k]) for k in keys)


def one(ring: CoeffRing, D: int) -> EvSeries:
    return EvSeries(ring, D, {(0, 0): ring.one})


def add(a: EvSeries, b: EvSeries) -> EvSeries:
    D = min(a.trunc, b.trunc)
    out = dict(a.coeffs)
    for k, v in b.coeffs.items():
        out[k] = out[k] + v if k in out else v
    return EvSeries(a.ring, D, out)


def scale(a: EvSeries, m) -> EvSeries:
    return EvSeries(a.ring, a.trunc, {k: m * v for k, v in a.coeffs.items()})


def mul(a: EvSeries, b: EvSeries) -> EvSeries:
    """Cauchy product with e_m e_n = e_{m+n}, truncated at the smaller degree."""
    D = min(a.trunc, b.trunc)
    out: dict = {}
    for k1, v1 in a.coeffs.items():
        for k2, v2 in b.coeffs.items():
            k = (k1[0] + k2[0], k1[1] + k2[1])
            if k[0] + k[1] > D:
                continue
            p = v1 * v2
            out[k] = out[k] + p if k in out else p
    return EvSeries(a.ring, D, out)


def sym(S: EvSeries, target: CoeffRing | None = None, sigma=None, D=None) -> EvSeries:
    """Plethystic exponential.

    The coefficient at n is the sum over multisets {(v_j, m_j)} with
    sum m_j v_j = n of prod_j sigma^{m_j}(S_{v_j}); it is assembled as the
    product over support vectors v of sum_m sigma^m(S_v) e_{m v}.

    ``sigma(m, coeff, v)`` may map into a different ``target`` ring (this is
    how symbolic coefficients are realized as count vectors).
    """
    if not S.ring.is_zero(S.const_term()):
        raise ValueError("sym needs zero constant term")
    target = target or S.ring
    D = S.trunc if D is None else min(D, S.trunc)
    if sigma is None:
        if S.ring.sigma is None:
            raise TypeError(f"ring {S.ring.name} has no sigma operations")
        sigma = lambda m, x, v: S.ring.sigma(m, x)
    out = one(target, D)
    for v in sorted(S.coeffs):
        if sum(v) == 0 or sum(v) > D:
            continue
        mmax = D // sum(v)
        factor = {(0, 0): target.one}
        for m in range(1, mmax + 1):
            factor[(m * v[0], m * v[1])] = sigma(m, S.coeffs[v], v)
        out = mul(out, EvSeries(target, D, factor))
    return out


def log_sym(S: EvSeries) -> EvSeries:
    """Inverse of sym, computed degree by degree."""
    ring = S.ring
    c0 = S.const_term()
    if not ring.is_zero(c0 - ring.one):
        raise ValueError("log_sym needs constant term 1")
    L = EvSeries(ring, S.trunc, {})
    for t in range(1, S.trunc + 1):
        E = sym(L, D=t)
        new = dict(L.coeffs)
        for a in range(t + 1):
            k = (a, t - a)
            new[k] = S[k] - E[k]
        L = EvSeries(ring, S.trunc, new)
    return L


def power(S: EvSeries, m) -> EvSeries:
    """Power structure A^m = Sym(m * Log A)."""
    return sym(scale(log_sym(S), m))


def to_json(S: EvSeries) -> str:
    rows = [{"n": list(k), "value": S.ring.render(v)} for k, v in sorted(S.coeffs.items(),
                                                                           key=lambda kv: (sum(kv[0]), kv[0]))]
    return json.dumps({"trunc": S.trunc, "coeffs": rows})
