"""Symbolic monodromic coefficient ring.

Elements are Laurent polynomials in u = -L^{1/2} with rational coefficients,
each term carrying at most one monodromic symbol Mu(k).  Mu(1) is the unit.

The sigma operations implemented here are those of the lambda-ring in which
u is a line element and Mu(k) = 1 + l_1 + ... + l_{k-1} for line elements l_i
(the eigenvalue decomposition of the mu_k-torsor).  Only results that are
linear in the Mu-symbols are returned; anything else raises
OutsideSymbolicSubring.  The orbit-count rule is kept separately as
``burnside_sigma``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, NamedTuple

from .errors import OddHalfPower, OutsideSymbolicSubring, TailTooLarge

__all__ = [
    "MotExpr", "MotFrac", "Approx", "ZERO", "ONE", "U", "L", "Mu", "const", "upow",
    "add", "mul", "gl_class", "burnside_sigma", "sigma", "expand_rational",
    "chi_spec", "forget_monodromy_eval", "parse",
]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True)
class MotExpr:
    """Canonical sum of terms c * u^j * Mu(k); k = 1 means no mu factor.

    ``floor``: if set, the expression is exact only in u-degrees > floor.
    ``tail``: optional constant C with |coeff at degree e| <= C * 2^((floor-e)/2)
    for every dropped term (e <= floor); used for certified evaluation bounds.
    """

    terms: tuple = ()
    floor: int | None = None
    tail: float | None = None

    @staticmethod
    def build(data, floor=None, tail=None) -> "MotExpr":
        """Canonicalize a mapping or iterable of ((j, k), c)."""
        items = data.items() if hasattr(data, "items") else data
        acc: dict = {}
        for (j, k), c in items:
            if k < 1:
                raise ValueError("mu order must be >= 1")
            c = _frac(c)
            if c:
                acc[(j, k)] = acc.get((j, k), 0) + c
        dropped = {}
        if floor is not None:
            dropped = {key: c for key, c in acc.items() if key[0] <= floor}
        terms = tuple(sorted(((j, k, c) for (j, k), c in acc.items()
                              if c and (j, k) not in dropped),
                             key=lambda t: (-t[0], t[1])))
        if floor is not None and dropped and tail is not None:
            extra = max(abs(float(c)) / 2 ** ((floor - j) / 2) for (j, _), c in dropped.items())
            tail = tail + extra
        elif floor is not None and dropped and tail is None:
            tail = None
        return MotExpr(terms, floor, tail if floor is not None else None)

    # -- views -----------------------------------------------------------
    def as_dict(self) -> dict:
        return {(j, k): c for j, k, c in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exact(self) -> bool:
        return self.floor is None

    def top_degree(self):
        return max((j for j, _, _ in self.terms), default=None)

    def mu_orders(self) -> set:
        return {k for _, k, _ in self.terms if k > 1}

    def is_mu_free(self) -> bool:
        return not self.mu_orders()

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return MotExpr(tuple((j, k, -c) for j, k, c in self.terms), self.floor, self.tail)

    def __sub__(self, other):
        return add(self, -_coerce(other))

    def __rsub__(self, other):
        return add(_coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, MotFrac):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(_coerce(other), self)

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1 or self.terms[0][1] != 1 or self.terms[0][2] not in (1, -1):
                raise ValueError("negative powers only of signed u-monomials")
            j, _, c = self.terms[0]
            return MotExpr.build({(j * n, 1): c ** n})
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "MotExpr":
        c = _frac(c)
        tail = None if self.tail is None else self.tail * abs(float(c))
        return MotExpr.build({(j, k): c * v for j, k, v in self.terms}, self.floor, tail)

    def shift(self, j: int) -> "MotExpr":
        """Multiply by u^j."""
        f = None if self.floor is None else self.floor + j
        return MotExpr(tuple((a + j, k, c) for a, k, c in self.terms), f, self.tail)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = const(other)
        if not isinstance(other, MotExpr):
            return NotImplemented
        return self.terms == other.terms and self.floor == other.floor

    def __hash__(self):
        return hash((self.terms, self.floor))

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"MotExpr({render(self)!r})"


class Approx(NamedTuple):
    value: float
    tail: float


def _coerce(x) -> MotExpr:
    if isinstance(x, MotExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to MotExpr")


def const(c) -> MotExpr:
    return MotExpr.build({(0, 1): c})


def upow(j: int, c=1) -> MotExpr:
    return MotExpr.build({(j, 1): c})


def Mu(k: int) -> MotExpr:
    return MotExpr.build({(0, k): 1}) if k > 1 else ONE


ZERO = MotExpr()
ONE = MotExpr(((0, 1, Fraction(1)),))
U = MotExpr(((1, 1, Fraction(1)),))
L = MotExpr(((2, 1, Fraction(1)),))


# -- ring operations ------------------------------------------------------

def _max_floor(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _rescale_tail(x: MotExpr, floor):
    if x.floor is None:
        return 0.0
    if x.tail is None:
        return None
    return x.tail / 2 ** ((floor - x.floor) / 2)


def add(a: MotExpr, b: MotExpr) -> MotExpr:
    floor = _max_floor(a.floor, b.floor)
    acc = a.as_dict()
    for key, c in b.as_dict().items():
        acc[key] = acc.get(key, 0) + c
    tail = None
    if floor is not None:
        ta, tb = _rescale_tail(a, floor), _rescale_tail(b, floor)
        tail = None if ta is None or tb is None else ta + tb
    return MotExpr.build(acc, floor, tail)


def _mul_terms(a: MotExpr, b: MotExpr) -> dict:
    acc: dict = {}
    for j1, k1, c1 in a.terms:
        for j2, k2, c2 in b.terms:
            if k1 > 1 and k2 > 1:
                raise OutsideSymbolicSubring(
                    f"product Mu({k1})*Mu({k2}) is not in the symbolic subring")
            key = (j1 + j2, max(k1, k2))
            acc[key] = acc.get(key, 0) + c1 * c2
    return acc


def mul(a: MotExpr, b: MotExpr) -> MotExpr:
    acc = _mul_terms(a, b)
    if a.floor is None and b.floor is None:
        return MotExpr.build(acc)
    if a.floor is None or b.floor is None:
        exact, trunc = (a, b) if a.floor is None else (b, a)
        if exact.is_zero():
            return ZERO
        top = exact.top_degree()
        floor = trunc.floor + top
        tail = None
        if trunc.tail is not None:
            weight = sum(abs(float(c)) * 2 ** ((j - top) / 2) for j, _, c in exact.terms)
            tail = trunc.tail * weight
        return MotExpr.build(acc, floor, tail)
    da, db = a.top_degree(), b.top_degree()
    cands = [a.floor + b.floor]
    if da is not None:
        cands.append(da + b.floor)
    if db is not None:
        cands.append(db + a.floor)
    return MotExpr.build(acc, max(cands), None)


# -- named classes ----------------------------------------------------------

def gl_class(n: int) -> MotExpr:
    """[GL_n] = prod_{0<=i<n} (L^n - L^i) expanded in u."""
    if n < 1:
        raise ValueError("n >= 1 required")
    out = ONE
    for i in range(n):
        out = out * MotExpr.build({(2 * n, 1): 1, (2 * i, 1): -1})
    return out


def burnside_sigma(n: int, k: int) -> MotExpr:
    """Orbit decomposition of size-n multisets from Z/k under rotation.

    An orbit of size r contributes Mu(r).  This is the combinatorial rule;
    it does not agree with ``sigma`` on Mu-classes (see module docstring).
    """
    seen = set()
    acc: dict = {}
    for ms in combinations_with_replacement(range(k), n):
        if ms in seen:
            continue
        orbit = set()
        cur = ms
        while cur not in orbit:
            orbit.add(cur)
            cur = tuple(sorted((x + 1) % k for x in cur))
        seen |= orbit
        r = len(orbit)
        acc[(0, r)] = acc.get((0, r), 0) + 1
    return MotExpr.build(acc)


# -- sigma operations -----------------------------------------------------------

_EXOTIC = object()


def _series_mul(f, g, n):
    out = []
    for i in range(n + 1):
        acc = ZERO
        bad = False
        for a in range(i + 1):
            x, y = f[a], g[i - a]
            if x is not _EXOTIC and x.is_zero() or y is not _EXOTIC and y.is_zero():
                continue
            if x is _EXOTIC or y is _EXOTIC:
                bad = True
                break
            try:
                acc = acc + x * y
            except OutsideSymbolicSubring:
                bad = True
                break
        out.append(_EXOTIC if bad else acc)
    return out


def _term_series(c: int, k: int, n: int):
    """sigma_T(c * Mu(k)) truncated at T^n, with _EXOTIC for non-representable coefficients."""
    if k == 1:
        base = [ONE] * (n + 1) if c > 0 else [ONE, -ONE] + [ZERO] * (n - 1)
    elif c > 0:
        # h_i(1, l_1..l_{k-1}): only i <= 1 is Mu-linear
        base = [ONE, Mu(k)] + [_EXOTIC] * (n - 1)
    else:
        e = [ONE, Mu(k) - ONE] + [_EXOTIC if j < k else ZERO for j in range(2, n + 1)]
        signed = [x if x is _EXOTIC else x.scale((-1) ** j) for j, x in enumerate(e)]
        base = _series_mul([ONE, -ONE] + [ZERO] * (n - 1), signed, n)
    base = base[: n + 1]
    out = [ONE] + [ZERO] * n
    for _ in range(abs(c)):
        out = _series_mul(out, base, n)
    return out


def sigma(n: int, x: MotExpr) -> MotExpr:
    """sigma^n(x) in the Mu-linear subring; raises OutsideSymbolicSubring otherwise."""
    if n < 0:
        raise ValueError("n >= 0 required")
    if n == 0:
        return ONE
    if n == 1:
        return x
    for _, _, c in x.terms:
        if c.denominator != 1:
            raise OutsideSymbolicSubring("sigma is defined here for integer coefficients only")
    total = [ONE] + [ZERO] * n
    for j, k, c in x.terms:
        ser = _term_series(int(c), k, n)
        ser = [s if s is _EXOTIC else s.shift(j * i) for i, s in enumerate(ser)]
        total = _series_mul(total, ser, n)
    res = total[n]
    if res is _EXOTIC:
        raise OutsideSymbolicSubring(f"sigma^{n} leaves the Mu-linear subring")
    if x.floor is None:
        return res
    f = x.floor
    top = x.top_degree()
    if top is None:
        floor = n * f
    else:
        floor = max(i * f + (n - i) * max(top, f) for i in range(1, n + 1))
    return MotExpr.build(res.as_dict(), floor, None)


# -- rational expressions -------------------------------------------------------------

def expand_rational(num: MotExpr, denom_factors: Iterable[int], floor: int) -> MotExpr:
    """num / prod_b (1 - L^{-b}) expanded in descending u-degree down to ``floor``."""
    if not num.exact:
        raise ValueError("numerator must be exact")
    bs = list(denom_factors)
    if any(b < 1 for b in bs):
        raise ValueError("denominator factors must be positive")
    top = num.top_degree()
    if top is None:
        return MotExpr.build({}, floor, 0.0)
    # coefficients of x^m in 1/prod(1 - x^b), x = u^-2
    mmax = max(0, (top - floor) // 2 + 1)
    geo = [0] * (mmax + 1)
    geo[0] = 1
    for b in bs:
        for m in range(b, mmax + 1):
            geo[m] += geo[m - b]
    acc: dict = {}
    for j, k, c in num.terms:
        for m, g in enumerate(geo):
            if g and j - 2 * m > floor:
                acc[(j - 2 * m, k)] = acc.get((j - 2 * m, k), 0) + c * g
    r = max(len(bs), 1)
    tail = 2 ** (r - 1) * sum(abs(float(c)) * 2 ** ((j - floor) / 2) for j, _, c in num.terms)
    return MotExpr.build(acc, floor, tail)


@dataclass(frozen=True)
class MotFrac:
    """Closed form num / prod_b (1 - L^{-b}); ``den`` is a sorted tuple of b's."""

    num: MotExpr
    den: tuple = ()

    def __post_init__(self):
        if not self.num.exact:
            raise ValueError("MotFrac numerator must be exact")
        object.__setattr__(self, "den", tuple(sorted(self.den)))

    @staticmethod
    def of(x) -> "MotFrac":
        return x if isinstance(x, MotFrac) else MotFrac(_coerce(x), ())

    def _lift(self, den):
        extra = list(den)
        for b in self.den:
            extra.remove(b)
        num = self.num
        for b in extra:
            num = num * MotExpr.build({(0, 1): 1, (-2 * b, 1): -1})
        return num

    def __add__(self, other):
        other = MotFrac.of(other)
        den = list(self.den)
        rest = list(other.den)
        for b in self.den:
            if b in rest:
                rest.remove(b)
        den = tuple(sorted(den + rest))
        return MotFrac(self._lift(den) + other._lift(den), den)

    __radd__ = __add__

    def __neg__(self):
        return MotFrac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-MotFrac.of(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MotFrac(self.num.scale(other), self.den)
        other = MotFrac.of(other)
        return MotFrac(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def expand(self, floor: int) -> MotExpr:
        return expand_rational(self.num, self.den, floor)

    def __str__(self):
        if not self.den:
            return render(self.num)
        return f"({render(self.num)})/" + "".join(f"(1-u^{-2 * b})" for b in self.den)


# -- specializations ----------------------------------------------------------

def chi_spec(x: MotExpr) -> Fraction:
    """Euler characteristic specialization: u -> 1, Mu(k) -> k."""
    if not x.exact:
        raise ValueError("chi_spec needs an exact expression")
    return sum((c * k for _, k, c in x.terms), Fraction(0))


def forget_monodromy_eval(x, q, strict: bool = True):
    """Evaluate with L -> q and Mu(k) -> k.

    Exact input returns a Fraction (odd u-degrees raise OddHalfPower when
    ``strict``).  Truncated input returns Approx(value, tail) using the stored
    coefficient envelope; a missing envelope raises TailTooLarge.
    """
    q = _frac(q)
    if isinstance(x, MotFrac):
        val = forget_monodromy_eval(x.num, q, strict)
        for b in x.den:
            val = val / (1 - q ** (-b))
        return val
    if x.exact:
        if any(j % 2 for j, _, _ in x.terms):
            if strict:
                raise OddHalfPower("odd power of u in an exact evaluation")
            return sum(c * k * (-math.sqrt(q)) ** j for j, k, c in x.terms)
        return sum((c * k * q ** (j // 2) for j, k, c in x.terms), Fraction(0))
    if x.tail is None:
        raise TailTooLarge("truncated expression carries no tail envelope")
    if q <= 2:
        raise TailTooLarge("tail envelope needs q > 2")
    val = sum(float(c) * k * (-math.sqrt(q)) ** j for j, k, c in x.terms)
    kmax = max([k for _, k, _ in x.terms] + [1])
    bound = x.tail * kmax * float(q) ** (x.floor / 2) / (1 - math.sqrt(2 / float(q)))
    return Approx(val, bound)


# -- text format ----------------------------------------------------------------

def render(x: MotExpr) -> str:
    parts = []
    for j, k, c in x.terms:
        s = f"{c}*u^{j}"
        if k > 1:
            s += f"*mu({k})"
        parts.append(s)
    if x.floor is not None:
        parts.append(f"O(u^{x.floor})")
    return "+".join(parts) if parts else "0"


_TERM = re.compile(r"^(-?\d+(?:/\d+)?)\*u\^(-?\d+)(?:\*mu\((\d+)\))?$")
_FLOOR = re.compile(r"^O\(u\^(-?\d+)\)$")


def parse(text: str) -> MotExpr:
    text = text.replace(" ", "")
    if text == "0":
        return ZERO
    acc: dict = {}
    floor = None
    # '+' separates terms; a '-' sign belongs to the coefficient
    for part in text.split("+"):
        m = _TERM.match(part)
        if m:
            key = (int(m.group(2)), int(m.group(3) or 1))
            acc[key] = acc.get(key, 0) + Fraction(m.group(1))
            continue
        m = _FLOOR.match(part)
        if m:
            floor = int(m.group(1))
            continue
        raise ValueError(f"cannot parse term {part!r}")
    return MotExpr.build(acc, floor, None)
