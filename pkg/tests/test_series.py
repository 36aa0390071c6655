from hypothesis import given, strategies as st

from dtflop import lam, series
from dtflop.series import EvSeries, dimvectors, log_sym, mul, power, sym


def lam_elem(draw_ints):
    c, j, k = draw_ints
    return c * lam.u ** j * lam.mu(k)


ints = st.tuples(st.integers(-3, 3), st.integers(-2, 2), st.sampled_from([1, 2, 3]))


@given(st.lists(st.tuples(st.sampled_from(dimvectors(3)), ints), max_size=3))
def test_log_inverts_sym(entries):
    T = EvSeries(lam.RING, 3, {v: lam_elem(x) for v, x in entries})
    assert log_sym(sym(T)).equals(T)


@given(ints, ints)
def test_sym_is_exponential(a, b):
    A = EvSeries(lam.RING, 3, {(1, 0): lam_elem(a), (1, 1): lam_elem(b)})
    B = EvSeries(lam.RING, 3, {(0, 1): lam_elem(b)})
    assert sym(series.add(A, B)).equals(mul(sym(A), sym(B)))


def test_power_of_one_loop_series():
    S = sym(EvSeries(lam.RING, 3, {(1, 0): 1 / (lam.LL - 1)}))
    assert power(S, lam.K.one).equals(S)
    assert power(S, lam.K.zero).equals(series.one(lam.RING, 3))


def test_dimvectors_order():
    assert dimvectors(2) == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_json_dump():
    S = EvSeries(lam.RING, 2, {(0, 0): lam.K.one, (1, 1): lam.u})
    assert '"n": [1, 1]' in series.to_json(S)
