"""DT pipeline for (Q_{-2}, W_d): LHS from counts, RHS from closed forms, Omega
extraction and the step-by-step proof-chain checks.

Everything is compared exactly.  RHS coefficients are kept as closed forms
num / prod (1 - L^{-b}), so their realizations are exact rational vectors and
the certified tail bound of every comparison is 0.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import fqcount as fq
from . import lam
from . import linalg
from . import realize as R
from .errors import BadPrime, SizeLimit, UnsupportedSector
from .mring import MotExpr, MotFrac, Mu, ONE, U, chi_spec, render
from .quiver import (DEFAULT_GAMMA, Potential, Quiver, Stability, build_five_loop, build_minus2,
                     hn_types, same_ray, w_circ)
from .series import CoeffRing, EvSeries, dimvectors, log_sym, mul, power, scale, sym

__all__ = ["SectorSpec", "twist", "rhs_coefficient", "rhs_series", "lhs_coefficient", "compare",
           "omega_extract", "omega_table", "proofstep_suite", "diagonal_sector_suite",
           "hn_assembly", "one_loop_check", "admissible_primes", "CompareReport"]

SECTORS = ("nilpotent", "all")


@dataclass(frozen=True)
class SectorSpec:
    sector: str
    d: int
    slope: tuple | None = None  # a dimension vector on the ray
    gamma: Stability | None = None

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}")
        if self.d < 1:
            raise ValueError("d >= 1")
        if self.slope is not None:
            g = self.gamma or DEFAULT_GAMMA
            if not g.is_generic():
                raise ValueError("slope sub-series need a generic stability")


def admissible(d: int, p: int) -> bool:
    return fq.is_prime(p) and (p - 1) % math.lcm(4, d + 1) == 0


def admissible_primes(d: int, bound: int = 60):
    return [p for p in range(2, bound) if admissible(d, p)]


def twist(d: int, v, p: int) -> int:
    """c_v = (v0 - v1)/(d+1): the one-loop function on the ray through v is c_v tr X^{d+1}."""
    return fq.coef_mod(Fraction(v[0] - v[1], d + 1), p)


# -- RHS -----------------------------------------------------------------------------

def rhs_coefficient(spec: SectorSpec, v, perturb: str | None = None):
    """Closed-form Sym-argument coefficient at v (None off the support)."""
    d = spec.d + (1 if perturb == "d" else 0)
    a, b = v
    if abs(a - b) == 1:
        return MotFrac((ONE - Mu(d + 1)) * U ** -2, (1,))
    if a == b and a >= 1:
        if spec.sector == "nilpotent":
            return MotFrac(U ** -2 + U ** -4, (1,))
        return MotFrac(U ** 2 + ONE, (1,))
    return None


MOTFRAC = CoeffRing("MotFrac", MotFrac(MotExpr()), MotFrac(ONE), None,
                    lambda x: x.is_zero(), str)


def rhs_series(spec: SectorSpec, Dmax: int, perturb: str | None = None) -> EvSeries:
    coeffs = {}
    g = spec.gamma or DEFAULT_GAMMA
    for v in dimvectors(Dmax):
        c = rhs_coefficient(spec, v, perturb)
        if c is None:
            continue
        if spec.slope is not None and not same_ray(g, v, spec.slope):
            continue
        coeffs[v] = c
    return EvSeries(MOTFRAC, Dmax, coeffs)


def rhs_lam(spec: SectorSpec, Dmax: int) -> EvSeries:
    return rhs_series(spec, Dmax).map(lam.from_mot, lam.RING)


@lru_cache(maxsize=4096)
def _sigma_real(m, coeff, p, t):
    return R.realize_sigma(m, coeff, p, twist=t)


def realized_rhs(spec: SectorSpec, p: int, n, perturb: str | None = None) -> R.RealClass:
    """Coefficient of e_n in Sym(rhs_series), each sigma^m realized by Adams/Newton."""
    n = tuple(n)
    if not any(n):
        return R.delta(p)
    S = rhs_series(spec, sum(n), perturb)
    S = EvSeries(S.ring, S.trunc, {v: c for v, c in S.coeffs.items()
                                    if v[0] <= n[0] and v[1] <= n[1]})
    d = spec.d + (1 if perturb == "d" else 0)
    E = sym(S, target=R.real_ring(p), D=sum(n),
            sigma=lambda m, c, v: _sigma_real(m, c, p, twist(d, v, p)))
    return E[n]


# -- LHS -----------------------------------------------------------------------------

def _perturbed_potential(d, perturb):
    Q, W = build_minus2(d)
    if perturb == "sign":
        W = Potential.build([(-c if w == "BXD" else c, w) for c, w in W.terms])
    return Q, W


def lhs_coefficient(spec: SectorSpec, n, p: int, route: str = "auto",
                    perturb: str | None = None, limit: int = fq.NAIVE_LIMIT, info: dict | None = None,
                    cache=None):
    """phi-normalized fiber counts of tr W_d on the representation space of dimension n."""
    n = tuple(n)
    info = {} if info is None else info
    d = spec.d
    if not fq.is_prime(p):
        raise BadPrime(f"{p} is not prime")
    if not any(n):
        info["route"] = "trivial"
        return R.delta(p)
    Q, W = _perturbed_potential(d, perturb)
    ambient = Q.ambient_dim(n)
    if spec.sector == "nilpotent":
        if n[0] and n[1]:
            raise UnsupportedSector("nilpotent sector realized only on the towers (0,n), (n,0)")
        # the critical locus of c tr X^{d+1} is nilpotent, so the full counts realize it
        route = "tower"
    def counted(rt, fn):
        if cache is None:
            return fn()
        from .cache import count_key
        return cache.fetch(count_key(Q.key(), str(W), n, p, spec.sector, rt), fn)

    if route == "auto":
        route = "enumerate"
        try:
            fq.fiber_counts(Q, W, n, p, limit=limit, dry_run=True)
        except SizeLimit:
            if perturb == "sign":
                raise
            route = "kron"
    if route == "enumerate":
        vec = R.from_counts(counted("enumerate", lambda: fq.fiber_counts(Q, W, n, p, limit=limit)))
    elif route in ("kron", "tower"):
        if perturb == "sign":
            raise ValueError("sign perturbation needs the enumeration route")
        kron = counted(route, lambda: fq.kron_locus_counts(d, n, p))
        vec = R.from_counts(kron) * (Fraction(p) ** (2 * n[0] * n[1]))
    else:
        raise ValueError(f"unknown route {route!r}")
    info["route"] = route
    out = R.phi_normalize(vec, ambient, n)
    if perturb == "normalization":
        out = out * p
    return out


# -- compare -------------------------------------------------------------------------

@dataclass
class CompareReport:
    d: int
    p: int
    sector: str
    results: list = field(default_factory=list)
    conditional: bool = False
    timestamp: str = ""

    @property
    def passed(self) -> bool:
        return all(r["verdict"] == "match" for r in self.results)

    def to_dict(self, volatile: bool = True) -> dict:
        out = {"d": self.d, "p": self.p, "sector": self.sector, "conditional": self.conditional,
               "results": [dict(r) if volatile else {k: v for k, v in r.items() if k != "runtimeMs"}
                           for r in self.results]}
        if volatile:
            out["timestamp"] = self.timestamp
        return out

    def to_json(self, volatile: bool = True) -> str:
        return json.dumps(self.to_dict(volatile), sort_keys=True, indent=1)


def _vec(x: R.RealClass):
    return [str(c) for c in x.normalized().vec]


def compare(spec: SectorSpec, p: int, dims, floor: int | None = None, route: str = "auto",
            perturb: str | None = None, cache=None) -> CompareReport:
    """LHS count class vs realized Sym(rhs_series) at each n, exactly modulo constants.

    ``floor`` is recorded for the report; the closed-form route needs no expansion.
    """
    if not admissible(spec.d, p):
        raise BadPrime(f"p = {p} is not 1 mod lcm(4, {spec.d + 1})")
    rep = CompareReport(spec.d, p, spec.sector, conditional=spec.d > 2,
                        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"))
    rhs_perturb = perturb if perturb == "d" else None
    lhs_perturb = perturb if perturb in ("sign", "normalization") else None
    for n in dims:
        t0 = time.perf_counter()
        info: dict = {}
        lhs = lhs_coefficient(spec, n, p, route=route, perturb=lhs_perturb, info=info, cache=cache)
        rhs = realized_rhs(spec, p, n, perturb=rhs_perturb)
        ok = lhs == rhs
        rep.results.append({"n": list(n), "verdict": "match" if ok else "mismatch",
                            "lhs": _vec(lhs), "rhs": _vec(rhs), "tailBound": 0,
                            "floor": floor, "route": info.get("route"),
                            "runtimeMs": int(1000 * (time.perf_counter() - t0))})
    return rep


# -- Omega ---------------------------------------------------------------------------

def omega_extract(Phi: EvSeries, Dmax: int | None = None) -> dict:
    """Omega(n) = Log(Phi)(n) * (L^{1/2} - L^{-1/2}); with u = -L^{1/2} the factor is u^{-1} - u."""
    if Dmax is not None:
        Phi = Phi.truncate(Dmax)
    Lg = log_sym(Phi)
    fac = lam.u ** -1 - lam.u
    return {v: lam.to_mot(c * fac) for v, c in sorted(Lg.coeffs.items())}


def omega_table(d: int, sector: str, Dmax: int = 4) -> list:
    spec = SectorSpec(sector, d)
    Phi = sym(rhs_lam(spec, Dmax))
    om = omega_extract(Phi, Dmax)
    return [{"n": list(v), "omega": render(x), "chi": str(chi_spec(x))} for v, x in om.items()]


def expected_omega(d: int, sector: str, v) -> MotExpr:
    """Omega from the theorem statements, written in u = -L^{1/2}."""
    a, b = v
    if abs(a - b) == 1:
        return -(ONE - Mu(d + 1)) * U ** -1
    if a == b:
        if sector == "nilpotent":
            return -(U ** 2 + ONE) * U ** -3  # P^1 L^{-3/2}
        return -(U ** 2 + ONE) * U  # L^{-3/2}(L+1)L^2
    return MotExpr()


# -- diagonal sector (commuting pairs) ------------------------------------------------

FLAGS = ("bothFree", "firstNilpotent", "bothNilpotent")


def _primes(k, start=2):
    out, q = [], start
    while len(out) < k:
        if fq.is_prime(q):
            out.append(q)
        q += 1
    return out


@lru_cache(maxsize=None)
def commuting_polynomial(n: int, flag: str) -> tuple:
    """|C_n| (with the flag) as a verified polynomial in q."""
    bound = n * n + n
    return fq.poly_interpolate_counts(lambda q: fq.commuting_counts(n, q, flag), bound,
                                      _primes(bound + 2))


def _gl_lam(n):
    out = lam.K.one
    for i in range(n):
        out *= lam.LL ** n - lam.LL ** i
    return out


def stack_series(flag: str, nmax: int) -> EvSeries:
    """sum_n [C_n^flag]/[GL_n] e_(n,n), in the symbolic ring."""
    coeffs = {(0, 0): lam.K.one}
    for n in range(1, nmax + 1):
        coeffs[(n, n)] = lam.from_q_poly(commuting_polynomial(n, flag)) / _gl_lam(n)
    return EvSeries(lam.RING, 2 * nmax, coeffs)


def _diag_sym(coeff, nmax):
    return sym(EvSeries(lam.RING, 2 * nmax, {(n, n): coeff for n in range(1, nmax + 1)}))


def diagonal_sector_suite(nmax: int = 3) -> dict:
    """The commuting-pair chain for the diagonal sector, as identities in Q(L)."""
    if nmax > 3:
        raise SizeLimit("diagonal suite is limited to n <= 3")
    LL = lam.LL
    C = stack_series("bothFree", nmax)
    Cn = stack_series("bothNilpotent", nmax)
    Cf = stack_series("firstNilpotent", nmax)
    eq = lambda a, b: a.equals(b, D=2 * nmax)
    nil_arg = _diag_sym(1 / (LL - 1), nmax)
    out = {
        "power_minus_L2": eq(Cn, power(C, -LL ** 2)),
        "power_L_minus2": eq(Cn, power(C, LL ** -2)),
        "nilpotent_closed_form": eq(Cn, nil_arg),
        "full_P1_power": eq(power(Cf, LL + 1), _diag_sym(LL * (LL + 1) / (LL - 1), nmax)),
        "nilpotent_total": eq(mul(Cn, power(Cn, LL ** -1)),
                              _diag_sym((LL + 1) / (LL * (LL - 1)), nmax)),
        "polynomials": {f: {n: [str(c) for c in commuting_polynomial(n, f)]
                            for n in range(1, nmax + 1)} for f in FLAGS},
    }
    return out


# -- HN assembly ---------------------------------------------------------------------

def hn_assembly(d: int, sector: str, Dmax: int = 6, gamma: Stability = DEFAULT_GAMMA) -> bool:
    """Product over rays of the sector series equals Sym of the theorem's argument.

    Off-diagonal rays: Sym of the one-loop coefficient on the ray.  The diagonal
    ray comes from the interpolated commuting-pair counts (not from the
    theorem's closed form).
    """
    spec = SectorSpec(sector, d)
    target = sym(rhs_lam(spec, Dmax))
    nmax = Dmax // 2
    if sector == "nilpotent":
        Cn = stack_series("bothNilpotent", nmax)
        diag = mul(Cn, power(Cn, lam.LL ** -1))
    else:
        diag = power(stack_series("firstNilpotent", nmax), lam.LL + 1)
    diag = EvSeries(lam.RING, Dmax, diag.coeffs)
    rays = {}
    for v in dimvectors(Dmax):
        if abs(v[0] - v[1]) == 1:
            rays[v] = EvSeries(lam.RING, Dmax, {v: lam.from_mot(rhs_coefficient(spec, v))})
    total = diag
    for v in sorted(rays):
        total = mul(total, sym(rays[v]))
    return total.equals(target, D=Dmax)


# -- one-loop building block -----------------------------------------------------------

def one_loop_check(d: int, a: int, p: int, sign: int = 1) -> bool:
    """[Mat_a, c tr X^{d+1}]/|GL_a| against sigma^a of the realized one-loop coefficient."""
    c = Fraction(sign, d + 1)
    method = "enumerate" if p ** (a * a) <= 5 * 10 ** 7 else "charpoly"
    lhs = R.from_counts(fq.matrix_trace_counts(a, d + 1, c, p, method=method)) / fq.gl_order(a, p)
    coeff = rhs_coefficient(SectorSpec("nilpotent", d), (1, 0))
    rhs = R.realize_sigma(a, coeff, p, twist=fq.coef_mod(c, p))
    return lhs == rhs


# -- proof steps -------------------------------------------------------------------------

def _locus_noC(d, n, p, limit=fq.BATCH_LIMIT):
    """Counts of tr(W_d minus its C-terms) on {AX = YA} in (A, B, D, X, Y)."""
    n0, n1 = n
    Qs = Quiver(2, (("A", 0, 1), ("X", 0, 0), ("Y", 1, 1)))
    mats = fq.enumerate_reps(Qs, n, p, limit=limit)
    A, X, Y = mats["A"], mats["X"], mats["Y"]
    # row-vector convention: the word AX is the path X then A, matrix X @ A
    ok = ~((linalg.batch_matmul(X, A, p) - linalg.batch_matmul(A, Y, p)) % p).reshape(len(A), -1).any(1)
    A, X, Y = A[ok], X[ok], Y[ok]
    bd = linalg.all_matrices(1, 2 * n0 * n1, p).reshape(-1, 2 * n0 * n1)
    nb = bd.shape[0]
    if A.shape[0] * nb > 50 * limit:
        raise SizeLimit("C-eliminated locus too large", A.shape[0] * nb)
    Q, W = build_minus2(d)
    Wr = Potential.build([(c, w) for c, w in W.terms if "C" not in w])
    Qr = Quiver(2, tuple(a for a in Q.arrows if a[0] != "C"))
    counts = np.zeros(p, dtype=np.int64)
    for i in range(A.shape[0]):
        m = {"A": np.repeat(A[i:i + 1], nb, 0), "X": np.repeat(X[i:i + 1], nb, 0),
             "Y": np.repeat(Y[i:i + 1], nb, 0),
             "B": bd[:, :n0 * n1].reshape(nb, n0, n1), "D": bd[:, n0 * n1:].reshape(nb, n1, n0)}
        counts += np.bincount(fq.trace_batch(Qr, Wr, n, m, p), minlength=p)
    return R.RealClass(p, tuple(int(x) for x in counts))


def _ss_diag_block(d, a, p):
    """[E_kron semistable at (a,a) -> tr(X^{d+1}-Y^{d+1})/(d+1)] / |GL_a|^2, for a = 1."""
    if a != 1:
        raise SizeLimit("semistable diagonal blocks enumerated for a = 1 only")
    cm = fq.coef_mod(Fraction(1, d + 1), p)
    counts = [0] * p
    for A in range(p):
        for B in range(p):
            if A == 0 and B == 0:
                continue
            for x in range(p):
                for y in range(p):
                    if (x - y) * A % p == 0 and (x - y) * B % p == 0:
                        counts[cm * (pow(x, d + 1, p) - pow(y, d + 1, p)) % p] += 1
    return R.RealClass(p, tuple(counts)) / fq.gl_order(1, p) ** 2


def _block_class(d, v, p):
    a0, a1 = v
    if a0 == a1:
        return _ss_diag_block(d, a0, p)
    g = math.gcd(a0, a1)
    prim = (a0 // g, a1 // g)
    if abs(prim[0] - prim[1]) != 1:
        raise ValueError(f"{v} is not on a Kronecker real-root ray")
    c = Fraction(prim[0] - prim[1], d + 1)
    return R.from_counts(fq.matrix_trace_counts(g, d + 1, c, p)) / fq.gl_order(g, p)


def _hn_support(n):
    out = []
    for v in dimvectors(sum(n)):
        if v[0] <= n[0] and v[1] <= n[1]:
            g = math.gcd(*v)
            prim = (v[0] // g, v[1] // g)
            if abs(prim[0] - prim[1]) == 1 or prim == (1, 1):
                out.append(v)
    return out


def step_s3(d, n, p, gamma=DEFAULT_GAMMA):
    total = R.from_counts(fq.kron_locus_counts(d, n, p)) / (fq.gl_order(n[0], p) * fq.gl_order(n[1], p))
    acc = R.RealClass(p, (0,) * p)
    types = hn_types(_hn_support(n), n, gamma)
    for t in types:
        term = R.delta(p)
        for v in t:
            term = R.convolve(term, _block_class(d, v, p))
        acc = acc + term
    return acc == total, len(types)


def step_s4(d, n, p):
    """E_kron at (a,a) against the P^1-power of the (nilpotent, commuting) stack, at q = p."""
    a = n[0]
    if n[0] != n[1]:
        return None
    lhs = _ss_diag_block(d, a, p)
    Cf = stack_series("firstNilpotent", a)
    # HN-semistable diagonal part of the P^1 power: all of its degree-a coefficient
    val = lam.eval_L(power(Cf, lam.LL + 1)[(a, a)], p)
    return lhs == R.delta(p, 0, val)


def step_s5(d, m, p):
    """5-loop fiber counts of tr W_d° against (3-loop tr(XDB-XBD)) * (tr Y'C')."""
    Q5 = build_five_loop()
    lhs = R.from_counts(fq.fiber_counts(Q5, w_circ(d), (m,), p))
    Q3 = Quiver(1, tuple((a, 0, 0) for a in "BDX"))
    three = R.from_counts(fq.fiber_counts(Q3, Potential.build([(1, "XDB"), (-1, "XBD")]), (m,), p))
    Q2 = Quiver(1, (("Y", 0, 0), ("C", 0, 0)))
    quad = R.from_counts(fq.fiber_counts(Q2, Potential.build([(1, "YC")]), (m,), p))
    # the coordinate change is a bijection, so the identity holds on the nose
    conv = R.convolve(three, quad)
    return lhs.vec == conv.vec


def proofstep_suite(d: int, p: int, n, steps=("s1", "s2", "s3", "s4", "s5"),
                    gamma: Stability = DEFAULT_GAMMA) -> dict:
    """Each step is an exact identity of count vectors modulo constants.

    Values: True/False, None (not applicable at n), or "size-limit: ..." strings.
    """
    n = tuple(n)
    if (d + 1) % p == 0:
        raise BadPrime(f"W_{d} has the coefficient 1/{d + 1}, undefined mod {p}")
    out: dict = {}
    Q, W = build_minus2(d)
    q = p
    full = locus = None
    for s in steps:
        try:
            if s in ("s1", "s2"):
                if locus is None:
                    locus = _locus_noC(d, n, p)
            if s == "s1":
                full = R.from_counts(fq.fiber_counts(Q, W, n, p))
                out[s] = full == locus * q ** (n[0] * n[1])
            elif s == "s2":
                kron = R.from_counts(fq.kron_locus_counts(d, n, p))
                out[s] = locus == kron * q ** (n[0] * n[1])
            elif s == "s3":
                out[s] = step_s3(d, n, p, gamma)[0]
            elif s == "s4":
                out[s] = step_s4(d, n, p)
            elif s == "s5":
                out[s] = step_s5(d, n[0], p) if n[0] == n[1] else None
            else:
                raise ValueError(f"unknown step {s}")
        except SizeLimit as e:
            out[s] = f"size-limit: {e}"
    return out
