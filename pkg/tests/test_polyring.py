import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import homogeneous_polys, rings
from splitorder.polyring import (
    MAX_EXP,
    ExponentOverflow,
    ParseError,
    Poly,
    RingMismatch,
    RingSpec,
    change_precision,
    format_poly,
    is_prime,
    parse_poly,
    poly_derivative,
    poly_mul,
    poly_pow,
    reduce_mod_p,
    truncate_frobenius,
    weighted_degree_check,
)


def test_ring_basics():
    r = RingSpec(7, 2, (1, 1, 1, 1, 1))
    assert (r.N, r.Q, r.modulus) == (4, 5, 49)
    assert r.well_formed
    assert not RingSpec(3, 1, (2, 2, 3)).well_formed
    assert RingSpec(3, 1, (1, 2, 3)).well_formed
    assert RingSpec(3, 1, (1,)).well_formed
    assert not RingSpec(3, 1, (2,)).well_formed


@pytest.mark.parametrize("p,e,w", [(4, 1, (1,)), (3, 0, (1,)), (3, 1, ()), (3, 1, (0, 1))])
def test_ring_rejects(p, e, w):
    with pytest.raises(ValueError):
        RingSpec(p, e, w)


def test_is_prime():
    assert [n for n in range(31) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_coefficients_reduced_and_zeros_dropped():
    r = RingSpec(3, 2, (1, 1))
    f = Poly(r, {(1, 0): 10, (0, 1): 9})
    assert f.terms == {(1, 0): 1}


def test_degree_information():
    r = RingSpec(5, 1, (1, 2))
    assert weighted_degree_check(parse_poly("x0^2 + x1", r)) == (True, 2)
    assert weighted_degree_check(parse_poly("x0 + x1", r)) == (False, None)
    assert weighted_degree_check(r.zero()) == (True, None)


def test_derivative_example():
    r = RingSpec(5, 1, (1, 1, 1))
    f = parse_poly("x0^3*x1 + 2*x2^5", r)
    assert poly_derivative(f, 0) == parse_poly("3*x0^2*x1", r)
    assert poly_derivative(f, 2).is_zero()  # 10 = 0 mod 5


def test_parse_example_reduces_coefficients():
    r = RingSpec(5, 1, (1, 1, 1))
    f = parse_poly("2*x0*x1 - x2^2", r)
    assert f.terms == {(1, 1, 0): 2, (0, 0, 2): 4}


@pytest.mark.parametrize(
    "src,offset",
    [("x0^", 3), ("x0 + ", 5), ("x0 ** x1", 4), ("x0 $ x1", 3), ("x9", 1), ("", 0)],
)
def test_parse_errors_carry_offset(src, offset):
    r = RingSpec(3, 1, (1, 1))
    with pytest.raises(ParseError) as err:
        parse_poly(src, r)
    assert err.value.offset == offset


def test_exponent_overflow():
    r = RingSpec(3, 1, (1,))
    big = r.monomial((MAX_EXP // 2 + 1,))
    with pytest.raises(ExponentOverflow):
        poly_mul(big, big)
    with pytest.raises(ExponentOverflow):
        Poly(r, {(MAX_EXP + 1,): 1})


def test_ring_mismatch():
    a = RingSpec(3, 1, (1, 1)).var(0)
    b = RingSpec(5, 1, (1, 1)).var(0)
    with pytest.raises(RingMismatch):
        a + b


def test_change_precision_lifts_through_section():
    r = RingSpec(3, 1, (1, 1))
    f = parse_poly("2*x0 + x1", r)
    g = change_precision(f, 2)
    assert g.ring.e == 2 and g.terms == f.terms
    assert change_precision(parse_poly("7*x0", g.ring), 1).terms == {(1, 0): 1}


def test_truncate_frobenius():
    r = RingSpec(2, 1, (1, 1))
    f = parse_poly("x0^3 + x0*x1 + x1^2", r)
    assert truncate_frobenius(f, 1) == parse_poly("x0*x1", r)
    assert truncate_frobenius(f, 2) == f


@settings(max_examples=60, deadline=None)
@given(homogeneous_polys(), st.data())
def test_ring_axioms(f, data):
    g = data.draw(homogeneous_polys(ring=f.ring))
    h = data.draw(homogeneous_polys(ring=f.ring))
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero()
    assert poly_pow(f, 3) == f * f * f
    assert (f * g).degree == f.degree + g.degree


@settings(max_examples=60, deadline=None)
@given(homogeneous_polys())
def test_format_parse_round_trip(f):
    assert parse_poly(format_poly(f), f.ring) == f


@settings(max_examples=60, deadline=None)
@given(homogeneous_polys(), st.data())
def test_leibniz_rule(f, data):
    g = data.draw(homogeneous_polys(ring=f.ring))
    i = data.draw(st.integers(0, f.ring.nvars - 1))
    assert poly_derivative(f * g, i) == poly_derivative(f, i) * g + f * poly_derivative(g, i)


@settings(max_examples=40, deadline=None)
@given(rings(e=2))
def test_reduce_is_ring_map(ring):
    x, y = ring.var(0), ring.var(ring.nvars - 1)
    a, b = 5 * x + 7 * y, x * y + 3
    assert reduce_mod_p(a * b) == reduce_mod_p(a) * reduce_mod_p(b)
