import random

import pytest
from hypothesis import given, strategies as st

from tightcalc.errors import ExponentOverflow, ParseError, SignatureMismatch
from tightcalc.poly import (Polynomial, RingSignature, format_poly, frobenius_pow_poly, parse_poly,
                            poly_arith)

from _gen import rand_poly

S7 = RingSignature(7, ("x", "y", "u", "v"))
S3 = RingSignature(3, ("y1", "y2", "z"))


def P(s, sig=S3):
    return parse_poly(s, sig)


def test_parse_hypersurface_has_three_terms():
    f = parse_poly("x^3*y^3 + u^3 + v^3", S7)
    assert len(f.terms) == 3
    assert f.total_degree() == 6


def test_cancellation_gives_zero():
    assert P("x - x", RingSignature(5, ("x",))).terms == []
    assert P("y1 - y1").is_zero()


def test_coefficients_reduce_mod_p():
    f = P("5*y1")
    assert f.terms == [((1, 0, 0), 2)]
    assert P("3*z") == 0


@pytest.mark.parametrize("src", ["2 y1 z", "2*y1*z", "2y1*z", "  2 * y1 * z "])
def test_juxtaposition_and_star_agree(src):
    assert P(src) == P("2*y1*z")


def test_signed_terms_and_leading_minus():
    assert P("-y1 + z") == P("z - y1")
    assert P("-2") == P("1")


@pytest.mark.parametrize("src,offset", [("y1 +", 4), ("y1^", 3), ("q1", 0), ("y1 ** 2", 4), ("y1 $ z", 3)])
def test_parse_errors_carry_offsets(src, offset):
    with pytest.raises(ParseError) as ei:
        P(src)
    assert ei.value.offset == offset


def test_exponent_literal_overflow_is_an_error():
    with pytest.raises((ParseError, ExponentOverflow)):
        P("y1^4294967296")


def test_product_overflow_is_an_error():
    f = P("y1^2147483647")
    with pytest.raises(ExponentOverflow):
        f * P("y1")


def test_difference_of_squares():
    assert (P("z - y1") * P("z + y1")) == P("z^2 - y1^2")


def test_additive_identity():
    a = P("y1*z + 2")
    assert a + Polynomial.zero(S3) == a
    assert poly_arith(a, Polynomial.zero(S3), "add") == a


def test_freshman_dream_by_repeated_multiplication():
    f = P("y1 + y2")
    assert f * f * f == P("y1^3 + y2^3")


def test_frobenius_examples():
    s = RingSignature(3, ("x",))
    assert parse_poly("x", s).frobenius(2) == parse_poly("x^9", s)
    assert frobenius_pow_poly(P("z - y1"), 1) == P("z^3 - y1^3")
    assert Polynomial.zero(S3).frobenius(3).is_zero()


def test_mixed_rings_rejected():
    with pytest.raises(SignatureMismatch):
        P("y1") + parse_poly("x", S7)


def test_unknown_variable_names_rejected_in_signature():
    with pytest.raises(ValueError):
        RingSignature(3, ("x_1",))


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 5, 7]), st.sampled_from(["grevlex", "grlex", "lex"]))
def test_format_parse_round_trip(seed, p, order):
    sig = RingSignature(p, ("a", "b", "c2"), order)
    f = rand_poly(random.Random(seed), sig, 4, 4)
    assert parse_poly(format_poly(f), sig) == f


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 5]), st.integers(0, 2))
def test_frobenius_matches_repeated_multiplication(seed, p, e):
    sig = RingSignature(p, ("a", "b"))
    f = rand_poly(random.Random(seed), sig, 3, 2)
    assert f.frobenius(e) == f ** (p ** e)


@given(st.integers(0, 10_000))
def test_ring_axioms_on_random_triples(seed):
    rng = random.Random(seed)
    sig = RingSignature(5, ("a", "b"))
    f, g, h = (rand_poly(rng, sig) for _ in range(3))
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f - g) + g == f


def test_leading_star_factor_is_grammatical():
    # term := coeff? ('*'? factor)*  admits a bare '*' before the first factor
    assert P("y1+*z") == P("y1+z")
