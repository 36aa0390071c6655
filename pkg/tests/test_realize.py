from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dtflop import ffext, fqcount as fq, realize as R
from dtflop.errors import BadPrime, HalfPowerResidue, PrimeMismatch
from dtflop.mring import L, Mu, ONE, U, MotFrac

vecs = st.lists(st.integers(-6, 6), min_size=5, max_size=5).map(lambda v: R.RealClass(5, tuple(v)))


@given(vecs, vecs, vecs)
def test_convolution_ring_laws(a, b, c):
    assert R.convolve(a, b).vec == R.convolve(b, a).vec
    assert R.convolve(R.convolve(a, b), c).vec == R.convolve(a, R.convolve(b, c)).vec
    assert R.convolve(a, R.delta(5)).vec == a.vec


@given(vecs, vecs, st.integers(1, 4))
def test_fourier_homomorphism(a, b, j):
    assert R.fourier(R.convolve(a, b), j) == R.fourier(a, j) * R.fourier(b, j)


@given(vecs, vecs)
def test_equality_mod_constants_via_fourier(a, b):
    same = all(R.fourier(a, j) == R.fourier(b, j) for j in range(1, 5))
    assert same == (a == b)


def test_fourier_examples():
    assert all(R.fourier(R.delta(5), j) == 1 for j in range(1, 5))
    g = R.fourier(R.halfL_base(5), 1)
    assert g * g == 5
    assert R.fourier(R.halfL_base(7), 1) * R.fourier(R.halfL_base(7), 1) == -7


def test_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        R.convolve(R.delta(5), R.delta(7))


def test_extension_field_counts():
    for p in (3, 5):
        for k in (1, 2, 3):
            direct = [0] * p
            for z in range(1, p):
                direct[pow(z, k, p)] += 1
            assert ffext.monomial_trace_counts(p, 1, k, 1, True) == tuple(direct)
    # Tr on F_{p^2} is onto and balanced for k = 1
    assert ffext.monomial_trace_counts(5, 2, 1, 1, False) == (5,) * 5


def test_halfL():
    assert R.calibrate_halfL(5) == R.HALF_L_SIGN == R.calibrate_halfL(13)
    s = R.realize_halfL(13)
    assert R.convolve(s, s) == R.delta(13, 0, 13)
    with pytest.raises(BadPrime):
        R.realize_halfL(7)


def test_realize_basic_classes():
    p = 13
    assert R.realize_expr(L, p) == R.delta(p, 0, p)
    assert R.realize_expr(Mu(1), p) == R.delta(p)
    # (1 - Mu(k)) realizes the fiber counts of z^k on A^1
    a1 = R.RealClass(p, ffext.monomial_trace_counts(p, 1, 4, 1, False))
    assert R.realize_expr(ONE - Mu(4), p) == a1
    with pytest.raises(BadPrime):
        R.realize_expr(Mu(3), 5)


def test_sigma_u_is_L():
    assert R.realize_sigma(2, U, 13) == R.delta(13, 0, 13)


@pytest.mark.parametrize("d,p,a", [(1, 5, 2), (2, 7, 2), (1, 13, 3)])
def test_one_loop_sigma(d, p, a):
    c = Fraction(1, d + 1)
    lhs = R.from_counts(fq.matrix_trace_counts(a, d + 1, c, p)) / fq.gl_order(a, p)
    coeff = MotFrac((ONE - Mu(d + 1)) * U ** -2, (1,))
    assert lhs == R.realize_sigma(a, coeff, p, twist=fq.coef_mod(c, p))


def test_phi_normalize():
    # x*y on A^2 is a unit after normalization
    counts = R.RealClass(5, (9, 4, 4, 4, 4))
    assert R.phi_normalize(counts, 2, ()) == R.delta(5)
    with pytest.raises(HalfPowerResidue):
        R.phi_normalize(counts, 1, ())
    assert dict(R.phi_normalize(counts, 1, (), defer_half=True).meta)["deferred_half_power"] == 1


def test_json():
    assert '"p": 5' in R.delta(5).to_json()
