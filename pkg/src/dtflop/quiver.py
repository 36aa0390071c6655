"""Quivers, cyclic potentials, noncommutative derivatives, stability and HN types.

Words are strings of one-letter arrow names composed right to left: the word
"AX" means X first, then A.  A representation assigns to an arrow a: s -> t a
matrix of shape n(s) x n(t) acting on row vectors, so the matrix of a path is
the product of its arrows in path order (the reversed string).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import linalg
from .errors import SizeLimit

__all__ = ["Quiver", "Potential", "Stability", "ncderiv", "build_minus2", "build_conifold",
           "build_five_loop", "splitting_identity", "slope_less", "hn_types",
           "subrep_dimvectors", "relation_words", "MINUS2_RELATIONS", "DEFAULT_GAMMA"]


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple  # ((name, source, target), ...)

    def __post_init__(self):
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names) or any(len(n) != 1 for n in names):
            raise ValueError("arrow names must be unique single letters")

    @property
    def names(self):
        return [a[0] for a in self.arrows]

    def arrow(self, name):
        for a in self.arrows:
            if a[0] == name:
                return a
        raise KeyError(name)

    def shape(self, name, n):
        _, s, t = self.arrow(name)
        return n[s], n[t]

    def ambient_dim(self, n) -> int:
        return sum(n[s] * n[t] for _, s, t in self.arrows)

    def is_closed(self, word: str) -> bool:
        path = [self.arrow(c) for c in reversed(word)]
        for (_, _, t), (_, s, _) in zip(path, path[1:]):
            if t != s:
                return False
        return path[-1][2] == path[0][1]

    def key(self) -> str:
        return ";".join(f"{a}:{s}->{t}" for a, s, t in self.arrows) + f"|{self.vertex_count}"


def min_rotation(word: str) -> str:
    return min(word[i:] + word[:i] for i in range(len(word)))


@dataclass(frozen=True)
class Potential:
    """Linear combination of cyclic words, stored canonically (minimal rotations)."""

    terms: tuple  # ((Fraction, word), ...) sorted by word

    @staticmethod
    def build(pairs) -> "Potential":
        acc: dict = {}
        for c, w in pairs:
            w = min_rotation(w)
            acc[w] = acc.get(w, 0) + Fraction(c)
        return Potential(tuple(sorted((c, w) for w, c in acc.items() if c)))

    def __add__(self, other):
        return Potential.build(list(self.terms) + list(other.terms))

    def __neg__(self):
        return Potential(tuple((-c, w) for c, w in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self.terms

    def words(self):
        return {w for _, w in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{w}" for c, w in sorted(self.terms, key=lambda t: t[1]))

    @staticmethod
    def parse(text: str) -> "Potential":
        text = text.strip()
        if text == "0":
            return Potential(())
        pairs = []
        for part in re.split(r"\s\+\s", text):
            c, w = part.strip().split("*")
            pairs.append((Fraction(c), w))
        return Potential.build(pairs)


def ncderiv(W: Potential, E: str) -> dict:
    """Cyclic derivative: for each occurrence W = aEb emit the path ba."""
    acc: dict = {}
    for c, w in W.terms:
        for i, ch in enumerate(w):
            if ch == E:
                path = w[i + 1:] + w[:i]
                acc[path] = acc.get(path, 0) + c
    return {w: c for w, c in acc.items() if c}


def word_product(pairs) -> dict:
    """Product of linear combinations of words (concatenation)."""
    out = {"": Fraction(1)}
    for comb in pairs:
        nxt: dict = {}
        for w1, c1 in out.items():
            for w2, c2 in comb.items():
                nxt[w1 + w2] = nxt.get(w1 + w2, 0) + c1 * c2
        out = nxt
    return out


def build_minus2(d: int):
    if d < 1:
        raise ValueError("d >= 1")
    Q = Quiver(2, (("A", 0, 1), ("B", 0, 1), ("C", 1, 0), ("D", 1, 0), ("X", 0, 0), ("Y", 1, 1)))
    c = Fraction(1, d + 1)
    W = Potential.build([(c, "X" * (d + 1)), (-c, "Y" * (d + 1)), (-1, "XCA"), (1, "XDB"),
                         (1, "YAC"), (-1, "YBD")])
    return Q, W


def build_conifold():
    Q = Quiver(2, (("A", 0, 1), ("B", 0, 1), ("C", 1, 0), ("D", 1, 0)))
    return Q, Potential.build([(1, "ACBD"), (-1, "ADBC")])


def build_five_loop():
    return Quiver(1, tuple((n, 0, 0) for n in "BCDXY"))


def w_circ(d: int) -> Potential:
    c = Fraction(1, d + 1)
    return Potential.build([(c, "X" * (d + 1)), (-c, "Y" * (d + 1)), (-1, "XC"), (1, "XDB"),
                            (1, "YC"), (-1, "YBD")])


def splitting_identity(d: int) -> Potential:
    """Residual of XDB - XBD + (X-Y)(BD - C + (X^d + X^{d-1}Y + ... + Y^d)/(d+1)) - W_d°."""
    c = Fraction(1, d + 1)
    h = {"X" * (d - i) + "Y" * i: c for i in range(d + 1)}
    inner = {"BD": Fraction(1), "C": Fraction(-1)}
    for w, v in h.items():
        inner[w] = inner.get(w, 0) + v
    rhs = word_product([{"X": Fraction(1), "Y": Fraction(-1)}, inner])
    rhs["XDB"] = rhs.get("XDB", 0) + 1
    rhs["XBD"] = rhs.get("XBD", 0) - 1
    return Potential.build([(v, w) for w, v in rhs.items()]) - w_circ(d)


# relation lines written as (lhs, rhs) linear combinations of words
def relation_words(d: int):
    return [
        ({"AX": 1}, {"YA": 1}),
        ({"BX": 1}, {"YB": 1}),
        ({"XC": 1}, {"CY": 1}),
        ({"XD": 1}, {"DY": 1}),
        ({"X" * d: 1}, {"CA": 1, "DB": -1}),
        ({"Y" * d: 1}, {"AC": 1, "BD": -1}),
    ]


MINUS2_RELATIONS = relation_words


def match_relations(d: int) -> list:
    """For each relation line, the arrow E and sign s with dW_d/dE = s*(lhs - rhs), or None."""
    _, W = build_minus2(d)
    derivs = {E: ncderiv(W, E) for E in "ABCDXY"}
    out = []
    for lhs, rhs in relation_words(d):
        diff = {w: Fraction(c) for w, c in lhs.items()}
        for w, c in rhs.items():
            diff[w] = diff.get(w, 0) - c
        diff = {w: c for w, c in diff.items() if c}
        hit = None
        for E, dv in derivs.items():
            for s in (1, -1):
                if dv == {w: s * c for w, c in diff.items()}:
                    hit = (E, s)
        out.append(hit)
    return out


# -- stability -------------------------------------------------------------

@dataclass(frozen=True)
class Stability:
    values: tuple  # ((re, im), ...) per vertex, Fractions

    def __post_init__(self):
        vals = tuple((Fraction(r), Fraction(i)) for r, i in self.values)
        for r, i in vals:
            if not (i > 0 or (i == 0 and r < 0)):
                raise ValueError("stability values must lie in the upper half plane")
        object.__setattr__(self, "values", vals)

    def central_charge(self, n):
        re = sum(c * r for c, (r, _) in zip(n, self.values))
        im = sum(c * i for c, (_, i) in zip(n, self.values))
        return re, im

    def is_generic(self) -> bool:
        (r0, i0), (r1, i1) = self.values[0], self.values[1]
        return r0 * i1 - i0 * r1 != 0

    @staticmethod
    def parse(text: str) -> "Stability":
        vals = []
        for part in text.split(","):
            z = complex(part.strip().replace("i", "j"))
            vals.append((Fraction(z.real).limit_denominator(10 ** 6),
                         Fraction(z.imag).limit_denominator(10 ** 6)))
        return Stability(tuple(vals))


# gamma(1,0) = -1 + i, gamma(0,1) = 1 + i: the vertex-1 simple has the smaller slope
DEFAULT_GAMMA = Stability(((-1, 1), (1, 1)))


def _cross(z1, z2):
    return z1[0] * z2[1] - z1[1] * z2[0]


def slope_less(gamma: Stability, m, n) -> bool:
    """arg gamma(m) < arg gamma(n), exactly."""
    if not any(m) or not any(n):
        raise ValueError("nonzero dimension vectors required")
    return _cross(gamma.central_charge(m), gamma.central_charge(n)) > 0


def same_ray(gamma, m, n) -> bool:
    return _cross(gamma.central_charge(m), gamma.central_charge(n)) == 0


def hn_types(support, target, gamma: Stability):
    """Ordered tuples of multiples of support vectors with strictly decreasing slope."""
    if not gamma.is_generic():
        raise ValueError("non-generic stability")
    target = tuple(target)
    cands = set()
    for v in support:
        v = tuple(v)
        if not any(v):
            continue
        a = 1
        while all(a * x <= t for x, t in zip(v, target)):
            cands.add(tuple(a * x for x in v))
            a += 1
    cands = sorted(cands)
    out = []

    def rec(rem, last, acc):
        if not any(rem):
            out.append(tuple(acc))
            return
        for w in cands:
            if any(x > r for x, r in zip(w, rem)):
                continue
            if last is not None and not slope_less(gamma, w, last):
                continue
            rec(tuple(r - x for r, x in zip(rem, w)), w, acc + [w])

    if any(target):
        rec(target, None, [])
    else:
        out.append(())
    return out


# -- subrepresentations ----------------------------------------------------------

def subrep_dimvectors(Q: Quiver, mats: dict, n, p: int) -> set:
    """Dimension vectors of all arrow-invariant subspace tuples (row-vector action)."""
    if sum(n) > 4 or p > 3:
        raise SizeLimit("subrep search limited to total dim <= 4 and p <= 3")
    spaces = [linalg.subspaces(k, p) for k in n]
    out = set()
    for choice in product(*spaces):
        ok = True
        for name, s, t in Q.arrows:
            Us, Ut = choice[s], choice[t]
            if Us.shape[0] == 0:
                continue
            img = Us @ np.asarray(mats[name], dtype=np.int64) % p
            if linalg.rank(np.vstack([Ut, img]) if Ut.shape[0] else img, p) != Ut.shape[0]:
                ok = False
                break
        if ok:
            out.add(tuple(U.shape[0] for U in choice))
    return out


def is_stable(Q: Quiver, mats: dict, n, p: int, gamma: Stability, semi=False) -> bool:
    for w in subrep_dimvectors(Q, mats, n, p):
        if not any(w) or tuple(w) == tuple(n):
            continue
        if semi:
            if slope_less(gamma, n, w):
                return False
        elif not slope_less(gamma, w, n):
            return False
    return True
