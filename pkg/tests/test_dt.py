from fractions import Fraction

import pytest

from dtflop import dt, fqcount as fq, realize as R
from dtflop.errors import BadPrime, UnsupportedSector
from dtflop.mring import Mu, ONE, U, MotFrac, chi_spec
from dtflop.quiver import Stability
from dtflop.series import sym


def test_rhs_coefficients():
    nil, full = dt.SectorSpec("nilpotent", 2), dt.SectorSpec("all", 2)
    assert dt.rhs_coefficient(nil, (1, 2)) == MotFrac((ONE - Mu(3)) * U ** -2, (1,))
    assert dt.rhs_coefficient(nil, (2, 2)) == MotFrac(U ** -2 + U ** -4, (1,))
    assert dt.rhs_coefficient(full, (1, 1)) == MotFrac(U ** 2 + ONE, (1,))
    assert dt.rhs_coefficient(full, (2, 0)) is None
    # the two sectors differ only on the diagonal
    a, b = dt.rhs_series(nil, 4), dt.rhs_series(full, 4)
    assert {v for v in a.coeffs if a[v] != b[v]} == {(1, 1), (2, 2)}


def test_slope_subseries():
    s = dt.rhs_series(dt.SectorSpec("all", 1, slope=(1, 1)), 4)
    assert set(s.coeffs) == {(1, 1), (2, 2)}


def test_lhs_examples():
    spec = dt.SectorSpec("all", 1)
    assert dt.lhs_coefficient(spec, (0, 0), 5) == R.delta(5)
    expect = R.from_counts(fq.matrix_trace_counts(1, 2, Fraction(-1, 2), 5)) / 4
    assert dt.lhs_coefficient(spec, (0, 1), 5) == expect
    a = dt.lhs_coefficient(spec, (1, 1), 5, route="enumerate")
    b = dt.lhs_coefficient(spec, (1, 1), 5, route="kron")
    assert a == b
    with pytest.raises(UnsupportedSector):
        dt.lhs_coefficient(dt.SectorSpec("nilpotent", 1), (1, 1), 5)


def test_compare_examples():
    assert dt.compare(dt.SectorSpec("all", 1), 5, [(1, 1)]).passed
    assert dt.compare(dt.SectorSpec("nilpotent", 2), 13, [(0, 2)]).passed
    assert not dt.compare(dt.SectorSpec("all", 1), 13, [(1, 1)], perturb="d").passed
    with pytest.raises(BadPrime):
        dt.compare(dt.SectorSpec("all", 2), 5, [(0, 1)])


def test_report_is_stable():
    spec = dt.SectorSpec("all", 1)
    a = dt.compare(spec, 5, [(0, 1), (1, 1)]).to_json(volatile=False)
    b = dt.compare(spec, 5, [(0, 1), (1, 1)]).to_json(volatile=False)
    assert a == b


def test_second_gamma_spot_check():
    g = Stability.parse("-2+1i,1+2i")
    assert dt.step_s3(1, (2, 1), 3, gamma=g)[0]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_omega_extract_and_chi(d):
    for sector in ("nilpotent", "all"):
        om = dt.omega_extract(sym_rhs(d, sector), 4)
        for v, x in om.items():
            assert x == dt.expected_omega(d, sector, v)
            if abs(v[0] - v[1]) == 1:
                assert chi_spec(x) == d
            elif sector == "nilpotent":
                assert chi_spec(x) == -2


def sym_rhs(d, sector):
    return sym(dt.rhs_lam(dt.SectorSpec(sector, d), 4))


def test_proofsteps_small():
    res = dt.proofstep_suite(1, 3, (1, 1))
    assert res == {"s1": True, "s2": True, "s3": True, "s4": True, "s5": True}
    with pytest.raises(BadPrime):
        dt.proofstep_suite(2, 3, (1, 1))


def test_s5_dimension_two():
    assert dt.step_s5(1, 2, 3)


def test_diagonal_chain_small():
    res = dt.diagonal_sector_suite(2)
    assert res["power_L_minus2"] and res["nilpotent_closed_form"]
    assert res["full_P1_power"] and res["nilpotent_total"]
    # finding: the exponent -L^2 does not hold (see A3)
    assert not res["power_minus_L2"]


@pytest.mark.parametrize("d,a,p", [(1, 2, 5), (2, 2, 13), (3, 1, 5)])
def test_one_loop(d, a, p):
    assert dt.one_loop_check(d, a, p)


def test_hn_assembly_small():
    assert dt.hn_assembly(1, "nilpotent", 4)
