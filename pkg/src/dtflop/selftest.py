"""Small-parameter property checks run by `dtflop selftest`.

Each check returns True on success.  Negative controls return True when the
injected fault is detected.
"""
from __future__ import annotations

import json
import math
import random
import tempfile

from . import dt, fqcount as fq, lam, mring, realize as R
from .cache import CountCache, count_key
from .errors import CachePoisoned
from .quiver import build_minus2, build_conifold, match_relations, splitting_identity
from .series import EvSeries, log_sym, mul, power, sym


def _rand_lam(rng):
    x = lam.K.zero
    for _ in range(rng.randint(1, 3)):
        c = rng.randint(-3, 3)
        j = rng.randint(-3, 3)
        x += c * lam.u ** j * lam.mu(rng.choice([1, 2, 3]))
    return x


def lambda_axioms(seed=0, trials=6) -> bool:
    rng = random.Random(seed)
    for _ in range(trials):
        a, b = _rand_lam(rng), _rand_lam(rng)
        for n in range(1, 4):
            rhs = sum((lam.sigma(i, a) * lam.sigma(n - i, b) for i in range(n + 1)), lam.K.zero)
            if lam.sigma(n, a + b) != rhs:
                return False
    # symbolic sigma agrees with the lambda-ring on mu-linear results
    x = mring.ONE - mring.Mu(2)
    return mring.sigma(2, x) == lam.to_mot(lam.sigma(2, lam.from_mot(x)))


def power_axioms(seed=1) -> bool:
    rng = random.Random(seed)
    ring = lam.RING
    S = EvSeries(ring, 3, {(0, 0): lam.K.one, (1, 0): _rand_lam(rng), (0, 1): _rand_lam(rng),
                           (1, 1): _rand_lam(rng), (2, 1): _rand_lam(rng)})
    a, b = _rand_lam(rng), _rand_lam(rng)
    ok = power(S, lam.K.one).equals(S)
    ok &= mul(power(S, a), power(S, b)).equals(power(S, a + b))
    ok &= power(power(S, a), b).equals(power(S, a * b))
    T = EvSeries(ring, 3, {(1, 0): _rand_lam(rng), (1, 1): _rand_lam(rng)})
    ok &= log_sym(sym(T)).equals(T)
    return bool(ok)


def convolution_laws(p=13, seed=2) -> bool:
    rng = random.Random(seed)
    vec = lambda: R.RealClass(p, tuple(rng.randint(-5, 5) for _ in range(p)))
    a, b, c = vec(), vec(), vec()
    ok = R.convolve(a, b).vec == R.convolve(b, a).vec
    ok &= R.convolve(R.convolve(a, b), c).vec == R.convolve(a, R.convolve(b, c)).vec
    ok &= R.convolve(a, R.delta(p)).vec == a.vec
    for j in range(1, p):
        ok &= R.fourier(R.convolve(a, b), j) == R.fourier(a, j) * R.fourier(b, j)
        ok &= R.fourier(R.RealClass(p, (3,) * p), j) == 0
    g = R.fourier(R.halfL_base(5), 1)
    ok &= g * g == 5
    return bool(ok)


def burnside_consistency(nmax=4, kmax=5) -> bool:
    for n in range(nmax + 1):
        for k in range(1, kmax + 1):
            b = mring.burnside_sigma(n, k)
            total = sum(c * kk for _, kk, c in b.terms)
            if total != math.comb(k + n - 1, n) or mring.chi_spec(b) != math.comb(k + n - 1, n):
                return False
    return True


def nilpotency_equivalence(p=2) -> bool:
    """Batched block-matrix test against the path-length definition."""
    Q, _ = build_minus2(1)
    for n in [(1, 0), (1, 1)]:
        mats = fq.enumerate_reps(Q, n, p)
        mask = fq.nilpotent_mask(Q, n, mats, p)
        total = sum(n)
        for i in range(0, len(mask), 7):
            rep = {a: m[i] for a, m in mats.items()}
            words = [""]
            dead = True
            for _ in range(total):
                words = [w + a for w in words for a in Q.names]
            for w in words:
                path = [Q.arrow(c) for c in reversed(w)]
                if any(t != s for (_, _, t), (_, s, _) in zip(path, path[1:])):
                    continue
                if n[path[0][1]] == 0 or any(n[t] == 0 for _, _, t in path):
                    continue
                M = fq.eval_path(Q, {a: m[None] for a, m in rep.items()}, n, w, p)
                if M.any():
                    dead = False
                    break
            if dead != bool(mask[i]):
                return False
    return True


def oracle_consistency() -> bool:
    Q, W = build_minus2(1)
    a = fq.fiber_counts(Q, W, (1, 1), 3, method="naive")
    b = fq.fiber_counts(Q, W, (1, 1), 3, method="batch")
    c = fq.fiber_counts(Q, W, (1, 1), 3, method="eliminate")
    kron = R.from_counts(fq.kron_locus_counts(1, (1, 1), 3)) * 9
    return a == b == c and R.from_counts(a) == kron


def symbolic_identities() -> bool:
    ok = all(splitting_identity(d).is_zero() for d in range(1, 7))
    ok &= all(all(m is not None for m in match_relations(d)) for d in range(1, 4))
    Qc, Wc = build_conifold()
    Q, W = build_minus2(1)
    mc = fq.enumerate_reps(Qc, (1, 1), 2)
    m = fq.enumerate_reps(Q, (1, 1), 2)
    ok &= int(fq.jacobi_mask(Qc, Wc, (1, 1), mc, 2).sum()) == int(fq.jacobi_mask(Q, W, (1, 1), m, 2).sum())
    return bool(ok)


def halfL_calibration() -> bool:
    return all(R.calibrate_halfL(p) == R.HALF_L_SIGN for p in (5, 13))


# -- negative controls ----------------------------------------------------------------

def control_halfL_sign_fault() -> bool:
    """Flipping the sign of L^{1/2} must break sigma^2(u) = L."""
    p = 13
    u_bad = R.realize_halfL(p, eps=-R.HALF_L_SIGN) * -1
    honest_psi2 = R.RealClass(p, R.ffext.monomial_trace_counts(p, 2, 2, 1, False)) * R.HALF_L_SIGN
    sym2_counted = (R.convolve(u_bad, u_bad) + honest_psi2) / 2
    return not (sym2_counted == R.delta(p, 0, p))


def control_perturbations() -> bool:
    spec = dt.SectorSpec("all", 1)
    return all(not dt.compare(spec, 13, [(0, 1), (1, 1)], perturb=k).passed
               for k in ("d", "sign", "normalization"))


def control_cache_poison() -> bool:
    with tempfile.TemporaryDirectory() as tmp:
        cache = CountCache(tmp)
        Q, W = build_minus2(1)
        key = count_key(Q.key(), str(W), (1, 1), 3, "all", "enumerate")
        cache.put(key, fq.fiber_counts(Q, W, (1, 1), 3))
        path = cache._path(key)
        entry = json.loads(path.read_text())
        entry["counts"][0] += 1
        path.write_text(json.dumps(entry))
        try:
            cache.get(key)
        except CachePoisoned:
            return True
        return False


CHECKS = {
    "lambda_axioms": lambda_axioms,
    "power_axioms": power_axioms,
    "convolution_laws": convolution_laws,
    "burnside_consistency": burnside_consistency,
    "nilpotency_equivalence": nilpotency_equivalence,
    "oracle_consistency": oracle_consistency,
    "symbolic_identities": symbolic_identities,
    "halfL_calibration": halfL_calibration,
    "control_halfL_sign_fault": control_halfL_sign_fault,
    "control_perturbations": control_perturbations,
    "control_cache_poison": control_cache_poison,
}


def run_all() -> dict:
    return {name: bool(fn()) for name, fn in CHECKS.items()}
