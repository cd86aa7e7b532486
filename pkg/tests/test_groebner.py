import random

import pytest
from hypothesis import given, strategies as st

from tightcalc.errors import BudgetExceeded, CertificationError
from tightcalc.groebner import (Ideal, bracket_power_ideal, certify_minimal_primes, colon_ideal, groebner_basis,
                                intersect_ideals, krull_dimension, normal_form, radical_membership, set_pair_limit,
                                verify_groebner)
from tightcalc import groebner
from tightcalc.poly import RingSignature, parse_poly

from _gen import rand_homog_ideal, rand_poly, same_poly, sympy_gb

S3 = RingSignature(3, ("y1", "y2", "z"))
S7 = RingSignature(7, ("x", "y", "u", "v"))


def I3(*gens, sig=S3):
    return Ideal(sig, [parse_poly(g, sig) for g in gens])


def test_monomial_generators_are_already_reduced():
    I = I3("y1*z", "y2*z")
    assert sorted(map(str, I.gb)) == ["y1*z", "y2*z"]


def test_principal_basis():
    assert [str(g) for g in I3("y1").gb] == ["y1"]


def test_lex_example_against_s_pair_oracle():
    sig = RingSignature(5, ("x", "y"), "lex")
    I = I3("x^2+y", "x*y", sig=sig)
    assert verify_groebner(groebner_basis(I))
    G, syms = sympy_gb(I)
    assert len(G.exprs) == len(I.gb)
    assert all(same_poly(f, e, syms) for f, e in zip(I.gb, G.exprs))


def test_normal_forms():
    I = I3("y1*z", "y2*z")
    assert normal_form(parse_poly("y1*z", S3), I).is_zero()
    assert str(normal_form(parse_poly("z", S3), I)) == "z"
    f = parse_poly("x^3*y^3+u^3+v^3", S7)
    assert normal_form(f, Ideal(S7, [f])).is_zero()


def test_colon_examples():
    I = I3("y1*z", "y2*z")
    assert colon_ideal(I, parse_poly("z", S3)).same_ideal(I3("y1", "y2"))
    assert colon_ideal(I, parse_poly("1", S3)).same_ideal(I)
    s = RingSignature(5, ("x", "y"))
    assert colon_ideal(I3("x^3", sig=s), parse_poly("x", s)).same_ideal(I3("x^2", sig=s))


def test_intersections():
    assert intersect_ideals(I3("z"), I3("y1", "y2")).same_ideal(I3("y1*z", "y2*z"))
    I = I3("y1^2", "y2*z")
    assert intersect_ideals(I, I).same_ideal(I)
    s = RingSignature(5, ("x", "y"))
    assert intersect_ideals(I3("x", sig=s), I3("y", sig=s)).same_ideal(I3("x*y", sig=s))


def test_bracket_powers():
    s = RingSignature(3, ("x", "y"))
    assert bracket_power_ideal(I3("x", "y", sig=s), 1).same_ideal(I3("x^3", "y^3", sig=s))
    assert bracket_power_ideal(I3("z-y1"), 1).same_ideal(I3("z^3-y1^3"))
    assert bracket_power_ideal(I3("u", "v", "x^3", sig=S7), 1).same_ideal(I3("u^7", "v^7", "x^21", sig=S7))


def test_radical_membership():
    I = I3("y1^2", "y1*y2")
    assert radical_membership(parse_poly("y1", S3), I)
    assert not radical_membership(parse_poly("y2", S3), I)
    s = RingSignature(5, ("x", "y"))
    assert radical_membership(parse_poly("x*y", s), I3("x", sig=s))


def test_krull_dimensions():
    assert krull_dimension(I3("z")) == 2
    assert krull_dimension(I3("y1*z", "y2*z")) == 2
    assert krull_dimension(I3("u", "v", "x^3", "x^3*y^3+u^3+v^3", sig=S7)) == 1
    assert krull_dimension(Ideal(S3, [])) == 3


def test_minimal_primes_certificate():
    I = I3("y1*z", "y2*z")
    cert = certify_minimal_primes(I, [I3("z"), I3("y1", "y2")])
    assert cert.flags == ["structural", "structural"]
    s = RingSignature(3, ("x", "y"))
    assert certify_minimal_primes(I3("x", sig=s), [I3("x", sig=s)]).all_structural
    with pytest.raises(CertificationError):
        certify_minimal_primes(I, [I3("z")])


def test_non_linear_candidate_is_recorded_as_asserted():
    s = RingSignature(5, ("x", "y"))
    I = I3("x^2-y^3", sig=s)
    cert = certify_minimal_primes(I, [I])
    assert cert.flags != ["structural"] and cert.assumptions()


def test_pair_limit_is_reported_not_truncated():
    old = groebner.PAIR_LIMIT
    try:
        set_pair_limit(1)
        with pytest.raises(BudgetExceeded):
            I3("y1^2+y2*z", "y2^2+y1*z", "z^2+y1*y2").gb
    finally:
        set_pair_limit(old)


@given(st.integers(0, 100_000), st.sampled_from(["grevlex", "grlex", "lex"]), st.sampled_from([2, 3, 5, 7]))
def test_reduced_basis_matches_sympy(seed, order, p):
    sig = RingSignature(p, ("a", "b", "c"), order)
    I = rand_homog_ideal(random.Random(seed), sig, 3)
    G, syms = sympy_gb(I)
    if G.exprs == [1]:
        assert I.is_unit()
        return
    assert len(G.exprs) == len(I.gb)
    # both are reduced and monic: compare as sets
    ours = sorted(I.gb, key=str)
    assert all(any(same_poly(f, e, syms) for e in G.exprs) for f in ours)


@given(st.integers(0, 100_000))
def test_colon_generators_satisfy_definition(seed):
    rng = random.Random(seed)
    sig = RingSignature(3, ("a", "b", "c"))
    I = rand_homog_ideal(rng, sig, 2)
    f = rand_poly(rng, sig, 2, 2)
    if f.is_zero():
        f = f + 1
    C = colon_ideal(I, f)
    assert all(I.contains(g * f) for g in C.gb)
    assert I.issubset(C)
