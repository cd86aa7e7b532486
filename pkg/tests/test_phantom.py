import random

import pytest
from hypothesis import given, strategies as st

from tightcalc.closure import TestElementAssumption, jacobian_test_element, unit_test_element
from tightcalc.errors import CertificationError, PreconditionError
from tightcalc.modules import PresentedModule, QuotientRing
from tightcalc.phantom import (AVOIDANCE, ass_chain_probe, default_pool, lift_lemma_witness, minheight,
                               phantom_depth, phantom_regular, phantom_sequence_check, phantom_zerodivisor_witness)
from tightcalc.scenarios import random_cyclic_module

B = QuotientRing.parse(3, ["y1", "y2"], ["y1^2", "y1*y2"]).with_minimal_primes([["y1"]])
B0 = QuotientRing.parse(3, ["y1", "y2"], ["y1^2", "y1*y2"])
AB = unit_test_element(B, 3, "user-assumed")
CUSP = QuotientRing.parse(5, ["x", "y"], ["x^2-y^3"])
ACUSP = jacobian_test_element(CUSP, "x")
CE1 = QuotientRing.parse(3, ["y1", "y2", "z"], ["y1*z", "y2*z"]).with_minimal_primes([["z"], ["y1", "y2"]])
ACE1 = TestElementAssumption(CE1.poly("y1+z"), 1, "user-assumed")


def test_y2_on_embedded_point_is_phantom_not_regular():
    v = phantom_regular("y2", PresentedModule.free(B0), unit_test_element(B0, 3, "user-assumed"), E=2)
    assert not v.refuted and v.evidence == "certified"
    for lv in v.levels:
        assert lv.status == "certified"
        assert all(d["rule"] == "FrobeniusClosure" for d in lv.verdicts)


def test_nilpotent_is_certified_zerodivisor_at_level_one():
    R = QuotientRing.parse(3, ["y1"], ["y1^2"])
    v = phantom_regular("y1", PresentedModule.free(R), unit_test_element(R, 3, "user-assumed"), E=2)
    assert v.refuted and v.e == 1
    assert v.witness.coords[0] == R.poly("1")
    assert v.witness_verdict.q == 3


def test_regular_element_is_unconditionally_phantom_regular():
    v = phantom_regular("x", PresentedModule.free(CUSP), ACUSP, E=3)
    assert v.evidence == "regular" and v.assumptions == []
    assert all(lv.status == "zero" for lv in v.levels)


def test_sequence_checks():
    S = QuotientRing.parse(5, ["x", "y", "t"], ["x^2-y^3"])
    vs = phantom_sequence_check(["x", "t"], PresentedModule.free(S), jacobian_test_element(S, "x"), E=2)
    assert [v.evidence for v in vs] == ["regular", "regular"]
    vs = phantom_sequence_check(["y2", "y1"], PresentedModule.free(B), AB, E=2)
    assert not vs[0].refuted and vs[1].refuted
    assert phantom_sequence_check([], PresentedModule.free(B), AB) == []


def test_unit_and_annihilating_elements_rejected():
    with pytest.raises(PreconditionError):
        phantom_regular("1+y1", PresentedModule.free(B), AB)
    with pytest.raises(PreconditionError):
        phantom_regular("y2", PresentedModule.cyclic(B, ["1-y2"]), AB)  # y2 acts as 1


def test_depth_examples():
    d = phantom_depth(PresentedModule.free(B), AB)
    assert (d.lower_bound, d.elements, d.tail_status) == (1, ["y2"], "certified-depth-0")
    assert AVOIDANCE in d.assumptions
    d = phantom_depth(PresentedModule.cyclic(CE1, ["z-y1"]), ACE1)
    assert (d.lower_bound, d.tail_status) == (0, "certified-depth-0")
    assert all(v.refuted for v in d.tail) and len(d.tail) == len(d.pool)
    d = phantom_depth(PresentedModule.free(CUSP), ACUSP)
    assert (d.lower_bound, d.tail_status) == (1, "certified-depth-0")


def test_minheight_examples():
    assert minheight(CE1) == 1
    Q = CE1.quotient([CE1.poly("z-y1")]).with_minimal_primes([["y1", "z"]])
    assert minheight(Q) == 1
    dom = QuotientRing.parse(5, ["x", "y"], ["x^2-y^3"]).with_minimal_primes([["x^2-y^3"]])
    assert minheight(dom) == 1
    with pytest.raises(CertificationError):
        minheight(CUSP)


def test_depth_equals_minheight_on_rings():
    for R, A in ((B, AB), (CE1, ACE1)):
        d = phantom_depth(PresentedModule.free(R), A)
        assert d.tail_status == "certified-depth-0"
        assert d.lower_bound == minheight(R)


def test_default_pool_is_deterministic():
    assert [str(f) for f in default_pool(CE1, 16, 3)] == [str(f) for f in default_pool(CE1, 16, 3)]
    pool = default_pool(CE1, 16, 0)
    assert [str(f) for f in pool[:3]] == ["y1", "y2", "z"]
    assert len(pool) == 13  # every nonzero linear form over F_3 in three variables, up to sign
    assert len(default_pool(QuotientRing.parse(7, ["a", "b", "c"]), 16, 0)) == 16


def test_zerodivisor_witness_on_embedded_point():
    W = phantom_zerodivisor_witness("y1", PresentedModule.free(B), AB, E=2)
    assert W is not None and W.z_verdict.is_out and W.xz_verdict.is_in
    assert W.z.scale(B.poly("y1").frobenius(W.e)).module is W.z.module


def test_no_witness_for_regular_element():
    assert phantom_zerodivisor_witness("x", PresentedModule.free(CUSP), ACUSP, E=2) is None


def test_lifted_witness_refutes_again():
    R = QuotientRing.parse(3, ["y1"], ["y1^2"])
    A = unit_test_element(R, 3, "user-assumed")
    W = phantom_zerodivisor_witness("y1", PresentedModule.free(R), A, E=2)
    assert W is not None
    lifted = lift_lemma_witness("y1", PresentedModule.free(R), A, W)
    assert lifted is not None and lifted.refuted


@pytest.mark.parametrize("x", ["x", "y", "u", "v"])
def test_witness_agrees_with_zerodivisor_verdict_on_second_example(x):
    R = QuotientRing.parse(7, ["x", "y", "u", "v"], ["x^3*y^3+u^3+v^3"])
    A = jacobian_test_element(R, "u")
    M = PresentedModule.cyclic(R, ["u", "v", "x^3"])
    assert phantom_regular(x, M, A).refuted
    W = phantom_zerodivisor_witness(x, M, A)
    assert W is not None and W.z_verdict.is_out and W.xz_verdict.is_in


def test_chain_probe_free_unit():
    M = PresentedModule.free(CUSP)
    r = ass_chain_probe(M, M.basis(0), ACUSP)
    assert r.K == [] and r.K1 == [] and r.violations == 0


def test_chain_probe_embedded_point():
    M = PresentedModule.free(B)
    r = ass_chain_probe(M, M.element(["y2"]), AB)
    assert r.violations == 0 and r.K


def test_chain_probe_rejects_in_elements():
    M = PresentedModule.free(B)
    with pytest.raises(PreconditionError):
        ass_chain_probe(M, M.element(["y1"]), AB)


NODE = QuotientRing.parse(3, ["x", "y"], ["x*y"]).with_minimal_primes([["x"], ["y"]])


@given(st.integers(0, 100_000))
def test_chain_probe_random_over_node(seed):
    rng = random.Random(seed)
    A = TestElementAssumption(NODE.poly("x+y"), 1, "user-assumed")
    M = random_cyclic_module(rng, NODE)
    z = M.element([rng.choice(["1", "x", "y", "x^2", "y^2"])])
    try:
        r = ass_chain_probe(M, z, A, 9)
    except PreconditionError:
        return  # z not certified outside 0^*
    assert r.violations == 0
