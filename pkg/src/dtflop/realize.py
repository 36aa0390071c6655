"""Realization of motivic classes over A^1 as fiber-count vectors modulo constants.

Conventions (fixed here, checked in the test-suite):
  * L -> p*delta_0, L^{1/2} -> s = eps * (counts of z^2 on A^1), so u -> -s.
  * Mu(k) -> -(counts of c*z^k on G_m) for a twist c in F_p^x; with this sign
    Mu(1) is the convolution unit delta_0 as the symbolic ring requires.
  * sigma^n is computed from Adams operations (counts over F_{p^m} of the
    trace of the function) by Newton's identity, never from a single vector.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import ffext
from .errors import BadPrime, HalfPowerResidue, PrimeMismatch
from .fqcount import CountVector, gl_order, is_prime
from .mring import MotExpr, MotFrac
from .series import CoeffRing

__all__ = ["RealClass", "CycNum", "convolve", "realize_mu", "realize_halfL", "realize_expr",
           "realize_sigma", "adams", "fourier", "phi_normalize", "calibrate_halfL",
           "HALF_L_SIGN", "delta", "from_counts", "real_ring"]

# sign eps in L^{1/2} -> eps * [A^1, z^2]; pinned by calibrate_halfL
HALF_L_SIGN = 1


@dataclass(frozen=True, eq=False)
class RealClass:
    p: int
    vec: tuple
    meta: tuple = ()

    def __post_init__(self):
        if len(self.vec) != self.p:
            raise ValueError("vector length must equal p")
        object.__setattr__(self, "vec", tuple(Fraction(x) for x in self.vec))

    def _check(self, other):
        if not isinstance(other, RealClass):
            raise TypeError("expected RealClass")
        if other.p != self.p:
            raise PrimeMismatch(f"p={self.p} vs p={other.p}")

    def __add__(self, other):
        if other == 0:
            return self
        self._check(other)
        return RealClass(self.p, tuple(a + b for a, b in zip(self.vec, other.vec)), self.meta)

    __radd__ = __add__

    def __neg__(self):
        return RealClass(self.p, tuple(-a for a in self.vec), self.meta)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RealClass):
            return convolve(self, other)
        c = Fraction(other)
        return RealClass(self.p, tuple(c * a for a in self.vec), self.meta)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def normalized(self) -> "RealClass":
        """Representative with vec[0] = 0 (subtract the constant vec[0])."""
        c = self.vec[0]
        return RealClass(self.p, tuple(a - c for a in self.vec), self.meta)

    def equiv(self, other) -> bool:
        self._check(other)
        diff = {a - b for a, b in zip(self.vec, other.vec)}
        return len(diff) == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return len(set(self.vec)) == 1
        if not isinstance(other, RealClass):
            return NotImplemented
        return self.p == other.p and self.equiv(other)

    __hash__ = None

    def with_meta(self, **kw):
        meta = dict(self.meta)
        meta.update(kw)
        return RealClass(self.p, self.vec, tuple(sorted(meta.items())))

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "counts": [str(x) for x in self.vec],
                           "normalization": dict(self.meta)}, sort_keys=True)

    def __repr__(self):
        return f"RealClass(p={self.p}, vec=[{', '.join(str(x) for x in self.vec)}])"


def delta(p: int, t: int = 0, weight=1) -> RealClass:
    v = [0] * p
    v[t % p] = weight
    return RealClass(p, tuple(v))


def from_counts(cv: CountVector) -> RealClass:
    return RealClass(cv.p, cv.counts)


def convolve(a: RealClass, b: RealClass) -> RealClass:
    a._check(b)
    p = a.p
    out = [Fraction(0)] * p
    for s, x in enumerate(a.vec):
        if not x:
            continue
        for t, y in enumerate(b.vec):
            if y:
                out[(s + t) % p] += x * y
    return RealClass(p, tuple(out))


def real_ring(p: int) -> CoeffRing:
    return CoeffRing(f"Real[{p}]", RealClass(p, (0,) * p), delta(p), None,
                     lambda x: x == 0, lambda x: str(list(map(str, x.normalized().vec))))


# -- cyclotomic diagnostics ------------------------------------------------------

@dataclass(frozen=True)
class CycNum:
    """Element of Q(zeta_p) in the basis 1, zeta, ..., zeta^{p-2}."""

    p: int
    coeffs: tuple

    @staticmethod
    def from_power_vector(p, v) -> "CycNum":
        v = [Fraction(x) for x in v]
        last = v[p - 1]
        return CycNum(p, tuple(x - last for x in v[: p - 1]))

    def _full(self):
        return list(self.coeffs) + [Fraction(0)]

    def __add__(self, other):
        return CycNum(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if not isinstance(other, CycNum):
            return CycNum(self.p, tuple(Fraction(other) * a for a in self.coeffs))
        p = self.p
        out = [Fraction(0)] * p
        for i, a in enumerate(self._full()):
            if a:
                for j, b in enumerate(other._full()):
                    if b:
                        out[(i + j) % p] += a * b
        return CycNum.from_power_vector(p, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_power_vector(self.p, [other] + [0] * (self.p - 1))
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def to_list(self):
        return [str(c) for c in self.coeffs]


def fourier(a: RealClass, j: int) -> CycNum:
    if not 1 <= j % a.p:
        raise ValueError("j must be a nontrivial character index")
    out = [Fraction(0)] * a.p
    for t, x in enumerate(a.vec):
        out[(j * t) % a.p] += x
    return CycNum.from_power_vector(a.p, out)


# -- basic classes ----------------------------------------------------------------

def _check_prime(p):
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime")


def realize_mu(k: int, p: int, twist: int = 1) -> RealClass:
    """Raw fiber counts of z -> twist*z^k on G_m(F_p)."""
    _check_prime(p)
    return RealClass(p, ffext.monomial_trace_counts(p, 1, k, twist % p, True))


def halfL_base(p: int) -> RealClass:
    return RealClass(p, ffext.monomial_trace_counts(p, 1, 2, 1, False))


def realize_halfL(p: int, eps: int | None = None) -> RealClass:
    _check_prime(p)
    if p % 4 != 1:
        raise BadPrime(f"p = {p} is not 1 mod 4")
    eps = HALF_L_SIGN if eps is None else eps
    return (halfL_base(p) * eps).with_meta(halfL_sign=eps)


def calibrate_halfL(p: int) -> int:
    """Pin eps by the rank-1 symmetric square.

    u = -L^{1/2} is a line element, so sigma^2(u) = L.  Counting the symmetric
    square of the class -eps*[A^1, z^2] (points over F_p and F_{p^2}) agrees
    with p*delta_0 for exactly one eps.
    """
    good = []
    for eps in (1, -1):
        s = halfL_base(p) * (-eps)
        psi2 = RealClass(p, ffext.monomial_trace_counts(p, 2, 2, 1, False)) * (-eps)
        sym2 = (convolve(s, s) + psi2) / 2
        if sym2 == delta(p, 0, p):
            good.append(eps)
    if len(good) != 1:
        raise RuntimeError(f"calibration not decisive at p={p}: {good}")
    return good[0]


def _u_power(j: int, p: int, eps: int) -> RealClass:
    if j % 2 == 0:
        return delta(p, 0, Fraction(p) ** (j // 2))
    s = halfL_base(p) * eps
    return s * (-Fraction(p) ** ((j - 1) // 2))


def _mu_adams(m: int, k: int, p: int, twist: int) -> RealClass:
    if k == 1:
        return delta(p)
    return RealClass(p, ffext.monomial_trace_counts(p, m, k, twist % p, True)) * -1


def _admissible(x, p):
    _check_prime(p)
    num = x.num if isinstance(x, MotFrac) else x
    if any(j % 2 for j, _, _ in num.terms) and p % 4 != 1:
        raise BadPrime(f"half powers of L need p = 1 mod 4 (p = {p})")
    for k in num.mu_orders():
        if (p - 1) % k:
            raise BadPrime(f"Mu({k}) needs p = 1 mod {k} (p = {p})")


def adams(m: int, x, p: int, twist: int = 1, eps: int | None = None) -> RealClass:
    """psi^m of a realized MotExpr/MotFrac."""
    eps = HALF_L_SIGN if eps is None else eps
    if isinstance(x, MotFrac):
        out = adams(m, x.num, p, twist, eps)
        for b in x.den:
            out = out / (1 - Fraction(p) ** (-m * b))
        return out
    if not x.exact:
        raise ValueError("adams needs an exact expression")
    out = RealClass(p, (0,) * p)
    for j, k, c in x.terms:
        out = out + convolve(_u_power(m * j, p, eps), _mu_adams(m, k, p, twist)) * c
    return out


def realize_expr(x, p: int, twist: int = 1, eps: int | None = None) -> RealClass:
    """Realize a MotExpr (exact or truncated) or a MotFrac as a class mod constants."""
    _admissible(x, p)
    if isinstance(x, MotFrac) or x.exact:
        return adams(1, x, p, twist, eps)
    known = adams(1, MotExpr.build(x.as_dict()), p, twist, eps)
    if x.tail is None:
        return known.with_meta(tail="unbounded")
    kmax = max([k for _, k, _ in x.terms] + [1])
    bound = x.tail * (p + kmax) * p ** (x.floor / 2) / (1 - math.sqrt(2 / p))
    return known.with_meta(tail=bound)


def realize_sigma(n: int, x, p: int, twist: int = 1, eps: int | None = None) -> RealClass:
    """sigma^n via n sigma^n = sum_{m=1}^n psi^m * sigma^{n-m}."""
    _admissible(x, p)
    sig = [delta(p)]
    psi = [None] + [adams(m, x, p, twist, eps) for m in range(1, n + 1)]
    for j in range(1, n + 1):
        acc = RealClass(p, (0,) * p)
        for m in range(1, j + 1):
            acc = acc + convolve(psi[m], sig[j - m])
        sig.append(acc / j)
    return sig[n]


def phi_normalize(a: RealClass, ambient_dim: int, gauge_ranks, defer_half: bool = False) -> RealClass:
    """Multiply by q^{(sum r^2 - ambient)/2} / prod |GL_r(F_q)|."""
    p = a.p
    e2 = sum(r * r for r in gauge_ranks) - ambient_dim
    half = 0
    if e2 % 2:
        if not defer_half:
            raise HalfPowerResidue(f"net exponent {e2}/2 is not integral")
        half, e2 = 1, e2 - 1
    factor = Fraction(p) ** (e2 // 2)
    for r in gauge_ranks:
        factor /= gl_order(r, p)
    out = a * factor
    return out.with_meta(q_exponent=e2 // 2, gauge=list(gauge_ranks), deferred_half_power=half)
