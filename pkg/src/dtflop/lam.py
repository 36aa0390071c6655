"""Rational-function lambda-ring used for symbolic series work.

Coefficients live in Q(u, l_{k,i}) where u = -L^{1/2} and the l_{k,i}
(1 <= i < k) are line elements with Mu(k) = 1 + sum_i l_{k,i}.  Adams
operations substitute x -> x^m in every generator; sigma^n follows from
Newton's identity n sigma^n = sum_m psi^m sigma^{n-m}.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.fields import field

from .errors import OutsideSymbolicSubring
from .mring import MotExpr, MotFrac
from .series import CoeffRing

KMAX = 7
_NAMES = ["u"] + [f"l{k}_{i}" for k in range(2, KMAX + 1) for i in range(1, k)]
K, *_GENS = field(",".join(_NAMES), QQ)
u = _GENS[0]
_LINE = {}
_pos = 1
for _k in range(2, KMAX + 1):
    _LINE[_k] = _GENS[_pos:_pos + _k - 1]
    _pos += _k - 1
LL = u ** 2  # the class of the affine line


def mu(k: int):
    if k == 1:
        return K.one
    if k > KMAX:
        raise ValueError(f"Mu({k}) beyond the configured generators")
    return K.one + sum(_LINE[k], K.zero)


def _psi_poly(poly, m):
    R = poly.ring
    return R({tuple(e * m for e in mon): c for mon, c in poly.items()})


def adams(m: int, f):
    if m == 1:
        return f
    return K.new(_psi_poly(f.numer, m), _psi_poly(f.denom, m))


def sigma_all(n: int, f):
    """[sigma^0(f), ..., sigma^n(f)]."""
    psi = [None] + [adams(m, f) for m in range(1, n + 1)]
    out = [K.one]
    for j in range(1, n + 1):
        acc = K.zero
        for m in range(1, j + 1):
            acc += psi[m] * out[j - m]
        out.append(acc / j)
    return out


@lru_cache(maxsize=4096)
def _sigma_cached(n, f):
    return sigma_all(n, f)[n]


def sigma(n: int, f):
    return _sigma_cached(n, f)


RING = CoeffRing("Q(u,l)", K.zero, K.one, sigma, lambda x: x == 0, str)


def from_mot(x) -> object:
    """Embed a MotExpr or MotFrac."""
    if isinstance(x, MotFrac):
        out = from_mot(x.num)
        for b in x.den:
            out = out / (1 - u ** (-2 * b))
        return out
    if not x.exact:
        raise ValueError("only exact expressions embed")
    acc = K.zero
    for j, k, c in x.terms:
        acc += K(QQ(c.numerator, c.denominator)) * u ** j * mu(k)
    return acc


def to_mot(f) -> MotExpr:
    """Convert back to a MotExpr: f must be a Laurent polynomial in u, linear in
    and symmetric under each family l_{k,*}."""
    den = f.denom
    if len(den.terms()) != 1:
        raise OutsideSymbolicSubring("not a Laurent polynomial")
    (dmon, dc), = den.terms()
    if any(dmon[1:]):
        raise OutsideSymbolicSubring("line elements in the denominator")
    shift = dmon[0]
    acc: dict = {}
    coeff_by = {}
    for mon, c in f.numer.terms():
        j = mon[0] - shift
        c = Fraction(int(c.numerator), int(c.denominator)) / Fraction(int(dc.numerator), int(dc.denominator))
        rest = mon[1:]
        if not any(rest):
            acc[(j, 1)] = acc.get((j, 1), 0) + c
            continue
        if sum(rest) != 1:
            raise OutsideSymbolicSubring("nonlinear in line elements")
        idx = rest.index(1) + 1
        name = _NAMES[idx]
        k = int(name[1:name.index("_")])
        coeff_by.setdefault((j, k), {})[idx] = c
    for (j, k), d in coeff_by.items():
        vals = set(d.values())
        if len(d) != k - 1 or len(vals) != 1:
            raise OutsideSymbolicSubring(f"line elements of Mu({k}) not symmetric")
        c = vals.pop()
        acc[(j, k)] = acc.get((j, k), 0) + c
        acc[(j, 1)] = acc.get((j, 1), 0) - c
    return MotExpr.build(acc)


def from_q_poly(coeffs) -> object:
    """Polynomial in L given by integer/rational coefficient list (constant first)."""
    out = K.zero
    for i, c in enumerate(coeffs):
        c = Fraction(c)
        out += K(QQ(c.numerator, c.denominator)) * LL ** i
    return out


def eval_L(f, q) -> Fraction:
    """Evaluate a mu-free element with only even u-degrees at L = q."""
    def ev(poly):
        acc = Fraction(0)
        for mon, c in poly.terms():
            if any(mon[1:]):
                raise OutsideSymbolicSubring("line elements present")
            if mon[0] % 2:
                raise OutsideSymbolicSubring("odd power of u")
            acc += Fraction(int(c.numerator), int(c.denominator)) * Fraction(q) ** (mon[0] // 2)
        return acc
    return ev(f.numer) / ev(f.denom)
