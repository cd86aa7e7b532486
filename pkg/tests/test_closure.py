import pytest

from tightcalc.closure import (FACT_PERSISTENCE, FACT_REGULAR, ClosureContext, TestElementAssumption,
                               frobenius_closure_membership, jacobian_test_element, tc_membership,
                               tc_zero_submodule_approx, unit_test_element)
from tightcalc.errors import AssumptionError, InconsistencyError, PreconditionError
from tightcalc.modules import PresentedModule, QuotientRing

PLANE = QuotientRing.parse(3, ["x", "y"])
B = QuotientRing.parse(3, ["y1", "y2"], ["y1^2", "y1*y2"]).with_minimal_primes([["y1"]])
CE1 = QuotientRing.parse(3, ["y1", "y2", "z"], ["y1*z", "y2*z"]).with_minimal_primes([["z"], ["y1", "y2"]])
CUSP = QuotientRing.parse(5, ["x", "y"], ["x^2-y^3"])


def test_member_rule_first():
    M = PresentedModule.free(PLANE)
    N = M.submodule([["x"], ["y"]])
    v = tc_membership(M.element(["x"]), N, unit_test_element(PLANE), 27)
    assert v.label() == "In(Member)" and v.unconditional


def test_regular_colon_rule_refutes_unit():
    M = PresentedModule.free(PLANE)
    N = M.submodule([["x"], ["y"]])
    v = tc_membership(M.element(["1"]), N, unit_test_element(PLANE), 27)
    assert v.is_out and v.rule == "RegularColonRule" and v.q == 1
    assert v.assumptions == [FACT_REGULAR]


def test_minimal_prime_reduction_refutes_z_class():
    M = PresentedModule.free(CE1)
    N = M.submodule([["z^3-y1^3"]])
    A = TestElementAssumption(CE1.poly("y1+z"), 1, "user-assumed")
    v = tc_membership(M.element(["z"]), N, A, 27)
    assert v.is_out and v.rule == "MinimalPrimeReduction"
    assert FACT_PERSISTENCE in v.assumptions
    assert v.detail.get("prime") == ["y1", "y2"]


def test_frobenius_closure_examples():
    M = PresentedModule.free(B)
    assert frobenius_closure_membership(M.element(["y1"]), M.zero_submodule(), 27) == 3
    F3 = QuotientRing.parse(3, ["x"])
    assert frobenius_closure_membership(PresentedModule.free(F3).basis(0).scale(F3.poly("x")),
                                        PresentedModule.free(F3).zero_submodule(), 27) is None
    R7 = QuotientRing.parse(7, ["x", "y"], ["x^3"])
    M7 = PresentedModule.free(R7)
    assert frobenius_closure_membership(M7.element(["x"]), M7.zero_submodule(), 49) == 7


def test_frobenius_closure_in_is_unconditional():
    B0 = QuotientRing.parse(3, ["y1", "y2"], ["y1^2", "y1*y2"])  # no primes declared: no reduction step
    M = PresentedModule.free(B0)
    v = tc_membership(M.element(["y1"]), M.zero_submodule(), unit_test_element(B0, 3, "user-assumed"), 27)
    assert v.label() == "In(FrobeniusClosure(q=3))" and v.assumptions == []


def test_scan_out_records_the_test_element():
    M = PresentedModule.free(CUSP)
    A = jacobian_test_element(CUSP, "x")
    v = tc_membership(M.element(["1"]), M.zero_submodule(), A, 125)
    assert v.is_out and v.rule == "Scan" and v.assumptions == [A.describe()]
    assert str(A.c) == "x"


def test_unknown_when_bound_exhausted():
    # z^2 lies in (x, y)^* on the Fermat cubic but not in its Frobenius closure when p = 1 mod 3
    R = QuotientRing.parse(7, ["x", "y", "z"], ["x^3+y^3+z^3"])
    M = PresentedModule.free(R)
    N = M.submodule([["x"], ["y"]])
    ctx = ClosureContext(N, jacobian_test_element(R, "x"))
    v = ctx.membership(M.element(["z^2"]), 49)
    assert v.tag == "Unknown" and v.q == 49 and not v.unconditional
    assert ctx.membership(M.element(["z"]), 49).is_out


def test_false_test_element_caught_in_exhaustive_mode():
    # c = 1 with q0 = 1 is not a test element of B: y1 is in the Frobenius closure of 0
    M = PresentedModule.free(B)
    bad = TestElementAssumption(B.poly("1"), 1, "user-assumed")
    ctx = ClosureContext(M.zero_submodule(), bad)
    with pytest.raises(InconsistencyError):
        ctx.membership(M.element(["y1"]), 27, exhaustive=True)
    # the default walk also computes the scan Out and the reduction In here, and refuses too
    with pytest.raises(InconsistencyError):
        ctx.membership(M.element(["y1"]), 27)


def test_frobenius_closure_ranks_before_minimal_prime_reduction():
    M = PresentedModule.free(B)
    A = unit_test_element(B, 3, "user-assumed")
    v = tc_membership(M.element(["y1"]), M.zero_submodule(), A, 27)
    assert v.label() == "In(FrobeniusClosure(q=3))"
    assert v.unconditional


def test_test_element_validation():
    with pytest.raises(AssumptionError):
        TestElementAssumption(CE1.poly("z"), 1, "user-assumed").validate(CE1)
    with pytest.raises(AssumptionError):
        TestElementAssumption(CE1.poly("1"), 2, "user-assumed")
    with pytest.raises(AssumptionError):
        TestElementAssumption(CE1.poly("y1+z"), 1, "regular-ring")
    with pytest.raises(AssumptionError):
        TestElementAssumption(CE1.poly("1"), 1, "folklore")
    with pytest.raises(PreconditionError):
        jacobian_test_element(CE1, "z")


def test_zero_closure_approximations():
    R = QuotientRing.parse(5, ["x", "y"])
    ap = tc_zero_submodule_approx(PresentedModule.free(R, 2), unit_test_element(R), 25)
    assert ap.inner.is_zero() and all(v.is_out for _, v in ap.table)
    apB = tc_zero_submodule_approx(PresentedModule.free(B), unit_test_element(B, 3, "user-assumed"), 27)
    assert apB.inner.contains(apB.inner.module.element(["y1"]))
    apC = tc_zero_submodule_approx(PresentedModule.free(CUSP), jacobian_test_element(CUSP, "x"), 125)
    assert apC.inner.is_zero()
    one = [v for z, v in apC.table if z.coords[0] == CUSP.poly("1")]
    assert one and one[0].is_out


def test_rank_two_minimal_prime_reduction():
    M = PresentedModule.free(CE1, 2)
    N = M.submodule([["z", "0"]])
    A = TestElementAssumption(CE1.poly("y1+z"), 1, "user-assumed")
    v = tc_membership(M.element(["0", "z"]), N, A, 27)
    assert v.is_out
