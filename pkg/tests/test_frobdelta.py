import pytest
from hypothesis import given, settings

from _support import homogeneous_polys
from splitorder.frobdelta import delta, frobenius_lift, frobenius_power_mod_p
from splitorder.oracle import oracle_delta
from splitorder.polyring import Poly, RingSpec, parse_poly


def test_delta_of_variable_is_zero():
    r = RingSpec(5, 2, (1, 1))
    assert not delta(r.var(0))


def test_delta_binomial_p2():
    r = RingSpec(2, 2, (1, 1))
    res = delta(parse_poly("x0 + x1", r))
    assert res.delta == parse_poly("x0*x1", r.with_precision(1))
    assert res.degree == 2


def test_delta_binomial_p3():
    # ((x+y)^3 - x^3 - y^3)/3 = x^2 y + x y^2
    r = RingSpec(3, 2, (1, 1))
    assert delta(parse_poly("x0 + x1", r)).delta == parse_poly("x0^2*x1 + x0*x1^2", r.with_precision(1))


def test_delta_of_constant():
    # (2^5 - 2)/5 = 6 = 1 mod 5
    r = RingSpec(5, 2, (1,))
    assert delta(parse_poly("2", r)).delta == parse_poly("1", r.with_precision(1))


def test_delta_depends_on_lift():
    r = RingSpec(2, 2, (1, 1))
    a = delta(parse_poly("x0^2 + x0*x1 + x1^2", r)).delta
    b = delta(parse_poly("x0^2 + 3*x0*x1 + x1^2", r)).delta
    assert a != b


def test_frobenius_lift_exponents():
    r = RingSpec(3, 2, (1, 2))
    assert frobenius_lift(parse_poly("4*x0^2*x1", r)) == parse_poly("4*x0^6*x1^3", r)


def test_frobenius_power_needs_precision_one():
    with pytest.raises(ValueError):
        frobenius_power_mod_p(RingSpec(3, 2, (1,)).var(0))


@settings(max_examples=60, deadline=None)
@given(homogeneous_polys(max_degree=3))
def test_delta_matches_oracle(f):
    got = delta(f)
    assert got.degree == f.ring.p * f.degree
    assert got.delta.is_zero() or got.delta.degree == got.degree
    assert got.delta == oracle_delta(f).to_poly(f.ring)


@settings(max_examples=60, deadline=None)
@given(homogeneous_polys(max_degree=3))
def test_delta_only_sees_precision_two(f):
    # adding p^2 * g to f leaves Delta(f) mod p unchanged
    p = f.ring.p
    shifted = Poly(f.ring.with_precision(3), {m: c + p * p for m, c in f.terms.items()})
    assert delta(shifted).delta == delta(f).delta
