import copy

import pytest

from tightcalc.certify import (ClaimChecker, check_all, colon_claim, equality_claim, fedder_claim,
                               frobenius_claim, iter_claims, linear_claim, log_p, membership_claim,
                               minimal_primes_claim)
from tightcalc.certify import test_element_claim as element_claim
from tightcalc.frobenius import frobenius_module
from tightcalc.modules import PresentedModule, QuotientRing
from tightcalc.report import check_report

PLANE = QuotientRing.parse(3, ["x", "y"])
CE1 = QuotientRing.parse(3, ["y1", "y2", "z"], ["y1*z", "y2*z"]).with_minimal_primes([["z"], ["y1", "y2"]])


def ok(claim):
    good, msg = ClaimChecker().check(claim)
    return good, msg


def test_log_p():
    assert log_p(1, 3) == 0 and log_p(27, 3) == 3
    with pytest.raises(ValueError):
        log_p(12, 3)


def test_membership_true_and_false():
    M = PresentedModule.free(PLANE)
    c = membership_claim(M, [["x"], ["y"]], M.element(["x*y"]), True, q=9)
    assert ok(c)[0]
    c2 = membership_claim(M, [["x"], ["y"]], M.element(["1"]), False, q=3)
    assert ok(c2)[0]
    flipped = dict(c2, expect=True)
    good, msg = ok(flipped)
    assert not good and "expected True" in msg


def test_membership_with_multiplier_and_extra():
    M = PresentedModule.free(PLANE)
    # x * 1^[3] lies in (y)^[3] + (x) F(M)
    c = membership_claim(M, [["y"]], M.element(["1"]), True, mult="x", q=3, extra=["x"])
    assert ok(c)[0]
    assert not ok(dict(c, extra=[]))[0]


def test_frobenius_presentation_tamper():
    M = PresentedModule.cyclic(CE1, ["y1", "z^2"])
    c = frobenius_claim(M, 1, frobenius_module(M, 1))
    assert ok(c)[0]
    bad = copy.deepcopy(c)
    bad["result"]["relations"][0][0] = "y1^2"
    assert not ok(bad)[0]


def test_colon_generators():
    M = PresentedModule.free(CE1)
    c = colon_claim(M, CE1.poly("z"), [M.element(["y1"]), M.element(["y2"])])
    assert ok(c)[0]
    assert not ok(dict(c, gens=[["y1"]]))[0]


def test_equality_claim():
    M = PresentedModule.free(PLANE)
    c = equality_claim(M, [["x"], ["y"]], [["x+y"], ["x-y"]])
    assert ok(c)[0]
    assert not ok(dict(c, right=[["x+y"]]))[0]


def test_minimal_primes_claim():
    c = minimal_primes_claim(CE1)
    assert ok(c)[0]
    assert not ok(dict(c, primes=[["z"]], flags=c["flags"][:1]))[0]


def test_linear_ideal_claim():
    assert ok(linear_claim(PLANE.describe(), ["x+y", "y"]))[0]
    assert not ok(linear_claim(PLANE.describe(), ["x^2"]))[0]


def test_test_element_claim():
    assert ok(element_claim(CE1, CE1.poly("y1+z")))[0]
    good, msg = ok(element_claim(CE1, CE1.poly("z")))
    assert not good and "minimal prime" in msg


def test_fedder_claim():
    F5 = QuotientRing.parse(5, ["x", "y"])
    # the node is F-pure, the cusp is not
    assert ok(fedder_claim(F5.sig, F5.poly("x*y"), True))[0]
    assert ok(fedder_claim(F5.sig, F5.poly("x^2-y^3"), False))[0]
    assert not ok(fedder_claim(F5.sig, F5.poly("x^2-y^3"), True))[0]


def test_unknown_kind_rejected():
    good, msg = ok({"claim": "nonsense"})
    assert not good and "unknown" in msg


def test_iter_and_check_all_dedup():
    M = PresentedModule.free(PLANE)
    c = membership_claim(M, [["x"]], M.element(["x"]), True)
    n, fails = check_all({"a": [c, {"b": c}], "c": 3})
    assert n == 1 and fails == []
    assert len(list(iter_claims([c, c]))) == 2


def test_check_report_reports_task_index():
    M = PresentedModule.free(PLANE)
    good = membership_claim(M, [["x"]], M.element(["x"]), True)
    bad = dict(good, expect=False)
    report = {"tasks": [{"name": "one", "result": {"c": [good]}}, {"name": "two", "result": [bad]}]}
    n, fails = check_report(report)
    assert n == 2 and len(fails) == 1 and fails[0].startswith("/tasks/1 (two)")


def test_malformed_claim_is_a_failure_not_a_crash():
    n, fails = check_report({"tasks": [{"name": "x", "result": {"claim": "membership", "q": 1}}]})
    assert n == 1 and "malformed" in fails[0]
