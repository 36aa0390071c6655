import pytest
from hypothesis import given, strategies as st

from dtflop import quiver as qv
from dtflop.errors import SizeLimit
from dtflop.quiver import DEFAULT_GAMMA, Potential, Stability


def test_build_minus2_words():
    Q, W = qv.build_minus2(2)
    assert Q.names == ["A", "B", "C", "D", "X", "Y"]
    assert W.words() == {"XXX", "YYY", "AXC", "BXD", "ACY", "BDY"}
    assert all(Q.is_closed(w) for w in W.words())


@pytest.mark.parametrize("d", range(1, 7))
def test_splitting_identity(d):
    assert qv.splitting_identity(d).is_zero()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_relations_match_derivatives(d):
    hits = qv.match_relations(d)
    assert [h[0] for h in hits] == ["C", "D", "A", "B", "X", "Y"]


def test_ncderiv_example():
    _, W = qv.build_minus2(1)
    assert qv.ncderiv(W, "X") == {"X": 1, "CA": -1, "DB": 1}


def test_conifold():
    Q, W = qv.build_conifold()
    assert dict((w, c) for c, w in W.terms) == {"ACBD": 1, "ADBC": -1}


@given(st.lists(st.tuples(st.integers(-3, 3), st.sampled_from(["XCA", "CAX", "XX", "YAC"])), max_size=4))
def test_potential_roundtrip(pairs):
    W = Potential.build(pairs)
    assert Potential.parse(str(W)) == W


@given(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(any),
       st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(any))
def test_slope_antisymmetric(m, n):
    assert not (qv.slope_less(DEFAULT_GAMMA, m, n) and qv.slope_less(DEFAULT_GAMMA, n, m))


def test_hn_types_11():
    support = [(1, 0), (0, 1), (1, 1)]
    types = qv.hn_types(support, (1, 1), DEFAULT_GAMMA)
    assert ((1, 1),) in types and ((1, 0), (0, 1)) in types
    assert ((0, 1), (1, 0)) not in types


def test_stability_parse_and_validation():
    g = Stability.parse("-1+1i,1+1i")
    assert g == DEFAULT_GAMMA
    with pytest.raises(ValueError):
        Stability(((1, -1), (1, 1)))


def test_kronecker_semistability():
    Q = qv.Quiver(2, (("A", 0, 1), ("B", 0, 1)))
    assert qv.is_stable(Q, {"A": [[1]], "B": [[0]]}, (1, 1), 2, DEFAULT_GAMMA)
    assert not qv.is_stable(Q, {"A": [[0]], "B": [[0]]}, (1, 1), 2, DEFAULT_GAMMA, semi=True)
    with pytest.raises(SizeLimit):
        qv.subrep_dimvectors(Q, {"A": [[0]], "B": [[0]]}, (1, 1), 5)
