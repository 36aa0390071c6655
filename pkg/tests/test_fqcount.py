from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dtflop import fqcount as fq, linalg, realize as R
from dtflop.errors import BadPrime, NotPolynomial, SizeLimit
from dtflop.quiver import build_minus2


def test_counts_11_p3_all_methods():
    Q, W = build_minus2(1)
    for m in ("naive", "batch", "eliminate"):
        assert fq.fiber_counts(Q, W, (1, 1), 3, method=m).counts == (405, 162, 162)


def test_nilpotent_sector_11():
    Q, W = build_minus2(1)
    assert fq.fiber_counts(Q, W, (1, 1), 3, sector="nilpotent").counts == (17, 0, 0)


def test_total_is_space_size():
    Q, W = build_minus2(2)
    assert fq.fiber_counts(Q, W, (1, 2), 5, method="eliminate").total() == 5 ** Q.ambient_dim((1, 2))


def test_kron_reduction_21():
    Q, W = build_minus2(1)
    full = R.from_counts(fq.fiber_counts(Q, W, (2, 1), 3))
    kron = R.from_counts(fq.kron_locus_counts(1, (2, 1), 3))
    assert full == kron * 3 ** 4


def test_size_limit_and_bad_prime():
    Q, W = build_minus2(1)
    with pytest.raises(SizeLimit) as e:
        fq.fiber_counts(Q, W, (2, 2), 13, limit=10 ** 6)
    assert e.value.estimate > 10 ** 6
    with pytest.raises(BadPrime):
        fq.fiber_counts(Q, W, (1, 1), 4)
    with pytest.raises(BadPrime):
        fq.coef_mod(Fraction(1, 2), 2)


@pytest.mark.parametrize("a,k,p", [(2, 2, 5), (2, 3, 7), (1, 4, 5)])
def test_charpoly_route_matches_enumeration(a, k, p):
    c = Fraction(1, k)
    assert fq.matrix_trace_counts(a, k, c, p, method="charpoly") == \
        fq.matrix_trace_counts(a, k, c, p, method="enumerate")


@pytest.mark.parametrize("flag", ["bothFree", "firstNilpotent", "bothNilpotent"])
@pytest.mark.parametrize("n,p", [(1, 3), (2, 2), (2, 3)])
def test_commuting_types_vs_enumeration(flag, n, p):
    assert fq.commuting_counts_types(n, p, flag) == fq.commuting_counts_enum(n, p, flag)


def test_commuting_closed_forms():
    for q in (2, 3, 5):
        assert fq.commuting_counts(2, q) == q ** 6 + q ** 5 - q ** 3
        assert fq.commuting_counts(2, q, "bothNilpotent") == q ** 3 + q ** 2 - q


def test_interpolation():
    coeffs = fq.poly_interpolate_counts(lambda q: fq.gl_order(2, q), 4, [2, 3, 5, 7, 11, 13])
    assert coeffs == tuple(Fraction(x) for x in (0, 1, -1, -1, 1))
    with pytest.raises(NotPolynomial):
        fq.poly_interpolate_counts(lambda q: 2 ** q, 2, [2, 3, 5, 7])


@given(st.integers(0, 3), st.sampled_from([2, 3, 5, 7]))
def test_gl_order_counts_invertible(n, p):
    if p ** (n * n) > 10 ** 5:
        return
    mats = linalg.all_matrices(n, n, p)
    if n == 0:
        assert fq.gl_order(0, p) == 1
        return
    assert int((linalg.batch_rank(mats, p) == n).sum()) == fq.gl_order(n, p)


@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=3))
def test_batch_rank_matches_rref(rows):
    M = np.array(rows)
    assert linalg.batch_rank(M[None], 5)[0] == linalg.rank(M, 5)
