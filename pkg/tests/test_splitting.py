from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import fermat, homogeneous_polys
from splitorder.ideals import frob_power_member
from splitorder.polyring import RingSpec, parse_poly, reduce_mod_p
from splitorder.splitting import (
    check_Nm,
    next_split_order,
    ppt_enclosure,
    splitting_prefix,
    vanishing_threshold,
)
from splitorder.splitting import _start


def test_linear_form_prefix_is_zero():
    f = parse_poly("x0", RingSpec(3, 2, (1,)))
    pref = splitting_prefix(f, 4)
    assert pref.s == [0, 0, 0, 0] and pref.bounded and pref.stop_reason is None


@pytest.mark.parametrize("p,s1", [(5, 1), (7, 0), (11, 1), (13, 0)])
def test_fermat_cubic_curve_first_level(p, s1):
    # s_1 = 1 exactly when p = 2 mod 3
    assert splitting_prefix(fermat(p, (1, 1, 1), 3), 1).s == [s1]


def test_unbounded_stops_recursion():
    pref = splitting_prefix(fermat(3, (1,) * 5, 5), 4)
    assert pref.s == [2, 3] and not pref.bounded
    assert pref.stop_reason == "s_2 = p"
    assert len(pref.witnesses) == 1
    with pytest.raises(ValueError):
        ppt_enclosure(pref)


def test_incremental_matches_batch():
    f = fermat(5, (1, 1, 1, 1), 4)
    pref = _start(f, 16_000_000, 20_000_000_000)
    for _ in range(3):
        next_split_order(pref)
    assert pref.s == splitting_prefix(f, 3).s


def test_wrong_f_rejected():
    pref = _start(fermat(5, (1, 1, 1), 3), 10**6, 10**9)
    with pytest.raises(ValueError):
        next_split_order(pref, fermat(5, (1, 1, 1), 3) + fermat(5, (1, 1, 1), 3))


def test_budget_reports_achieved_depth():
    f = fermat(7, (1,) * 5, 5) + parse_poly("x0*x1*x2*x3*x4", RingSpec(7, 2, (1,) * 5))
    pref = splitting_prefix(f, 3, max_cells=50_000)
    assert pref.depth < 3
    assert pref.stop_reason and "not computed" in pref.stop_reason
    assert pref.s == splitting_prefix(f, 2).s[: pref.depth]


def test_bad_inputs():
    r = RingSpec(3, 2, (1, 1))
    with pytest.raises(ValueError):
        splitting_prefix(parse_poly("x0 + x1^2", r))
    with pytest.raises(ValueError):
        splitting_prefix(r.zero())
    with pytest.raises(ValueError):
        splitting_prefix(r.var(0), 0)


def test_ppt_enclosure_values():
    pref = splitting_prefix(fermat(7, (1,) * 5, 5), 2)
    enc = ppt_enclosure(pref)
    assert pref.s == [1, 3]
    assert enc.lower == Fraction(5, 7) + Fraction(3, 49)
    assert enc.upper == enc.lower + Fraction(1, 49)
    assert Fraction(1, 2) not in enc


def test_nm_examples():
    r = RingSpec(5, 2, (1,) * 5)
    c = check_Nm(r, 3, 2)
    assert (c.lhs, c.rhs, c.holds) == (3 * 19, 25 * 5 + 5 - 15, True)
    with pytest.raises(ValueError):
        check_Nm(r, 3, 1)


def test_vanishing_thresholds():
    r = RingSpec(5, 2, (1,) * 5)
    assert vanishing_threshold(r, 3) == 1
    assert vanishing_threshold(RingSpec(2, 2, (1,) * 5), 4) == 3
    with pytest.raises(ValueError):
        vanishing_threshold(r, 5)


@settings(max_examples=60, deadline=None)
@given(homogeneous_polys(max_degree=4), st.integers(1, 3))
def test_witness_degree_and_maximality(f, depth):
    pref = splitting_prefix(f, depth)
    fbar = reduce_mod_p(f)
    for n, L in enumerate(pref.witnesses, 1):
        assert not frob_power_member(L, n)
        assert frob_power_member(L * fbar, n)
        assert L.degree == pref.witness_degree(n) == (f.ring.p**n - pref.s[n - 1] - 1) * f.degree


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 60), st.integers(1, 40), st.integers(0, 40), st.sampled_from((2, 3, 5, 7, 11)))
def test_quadratic_form_is_n2(N, d, extra, p):
    weights = (1,) * N + (1 + extra,)
    r = RingSpec(p, 2, weights)
    Q = r.Q
    quad = (Q - d) * p**2 + d * p + Q - N * d
    assert check_Nm(r, d, 2).holds == (quad > 0)
