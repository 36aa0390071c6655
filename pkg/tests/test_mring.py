from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import mot_exprs
from dtflop import mring
from dtflop.errors import OddHalfPower, OutsideSymbolicSubring, TailTooLarge
from dtflop.mring import L, Mu, ONE, U, ZERO, MotExpr, MotFrac


@given(mot_exprs(), mot_exprs())
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(mot_exprs(mu=False), mot_exprs(), mot_exprs())
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(mot_exprs())
def test_render_parse_roundtrip(x):
    assert mring.parse(mring.render(x)) == x


@given(mot_exprs())
def test_mu1_is_unit(x):
    assert x * Mu(1) == x


def test_mu_products_refused():
    with pytest.raises(OutsideSymbolicSubring):
        Mu(2) * Mu(3)


def test_gl_class():
    assert mring.forget_monodromy_eval(mring.gl_class(2), 3) == 48
    assert mring.forget_monodromy_eval(mring.gl_class(1), 5) == 4


def test_sigma_line_elements():
    assert mring.sigma(2, L) == U ** 4
    assert mring.sigma(3, U) == U ** 3
    assert mring.sigma(2, -ONE) == ZERO
    assert mring.sigma(2, ONE - Mu(2)) == ZERO


@given(st.integers(0, 5), st.integers(1, 6))
def test_sigma_of_integers(m, n):
    assert mring.sigma(n, ONE.scale(m)) == ONE.scale(Fraction(mring.math.comb(m + n - 1, n)))


def test_sigma_exotic_refused():
    with pytest.raises(OutsideSymbolicSubring):
        mring.sigma(2, Mu(3))


@pytest.mark.parametrize("n,k,expected", [(2, 2, ONE + Mu(2)), (3, 2, Mu(2).scale(2)),
                                          (2, 3, Mu(3).scale(2))])
def test_burnside_examples(n, k, expected):
    assert mring.burnside_sigma(n, k) == expected


def test_expand_rational_tail():
    x = mring.expand_rational(U ** -2, (1,), -40)
    val = mring.forget_monodromy_eval(x, 5)
    assert abs(val.value - 0.25) <= val.tail + 1e-12
    assert val.tail < 1e-6


def test_chi_and_eval_errors():
    assert mring.chi_spec(ONE - Mu(3)) == -2
    with pytest.raises(OddHalfPower):
        mring.forget_monodromy_eval(U, 5)
    with pytest.raises(TailTooLarge):
        mring.forget_monodromy_eval(MotExpr.build({(2, 1): 1}, floor=0), 5)


def test_motfrac_arithmetic():
    a = MotFrac(U ** -2, (1,))  # 1/(L-1)
    b = MotFrac(ONE)
    s = a + b  # L/(L-1)
    assert mring.forget_monodromy_eval(s, 5) == Fraction(5, 4)
    assert mring.forget_monodromy_eval(a * a, 3) == Fraction(1, 4)
