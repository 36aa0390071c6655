from hypothesis import given, strategies as st

from conftest import mot_exprs
from dtflop import lam, mring


@given(mot_exprs())
def test_roundtrip(x):
    assert lam.to_mot(lam.from_mot(x)) == x


@given(mot_exprs(), mot_exprs(), st.integers(1, 3))
def test_sigma_additive(a, b, n):
    fa, fb = lam.from_mot(a), lam.from_mot(b)
    rhs = sum((lam.sigma(i, fa) * lam.sigma(n - i, fb) for i in range(n + 1)), lam.K.zero)
    assert lam.sigma(n, fa + fb) == rhs


@given(mot_exprs(kmax=3), st.integers(1, 3))
def test_symbolic_sigma_agrees(x, n):
    try:
        s = mring.sigma(n, x)
    except mring.OutsideSymbolicSubring:
        return
    assert lam.from_mot(s) == lam.sigma(n, lam.from_mot(x))


def test_eval_L():
    assert lam.eval_L((lam.LL + 1) / (lam.LL - 1), 5) == mring.Fraction(3, 2)
