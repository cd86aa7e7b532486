"""Acceptance criteria 1-9, one PASS/FAIL line each (see also the terminal summary)."""

import json
import time

from tightcalc.base_change import colon_flatness_probe, extend_ring, verify_base_change_formula
from tightcalc.closure import TestElementAssumption, jacobian_test_element, unit_test_element
from tightcalc.koszul import koszul_criterion_crosscheck
from tightcalc.modules import PresentedModule, QuotientRing
from tightcalc.phantom import ass_chain_probe, phantom_sequence_check
from tightcalc.report import check_report, to_json_text
from tightcalc.scenarios import (Bounds, chain_probe_instances, flatness_instances, koszul_instances,
                                 run_builtin)

RESULTS = {}
_REPORTS = {}


def report(key, name, **kw):
    if key not in _REPORTS:
        t0 = time.perf_counter()
        rep = run_builtin(name, bounds=Bounds(), **kw)
        _REPORTS[key] = (rep, time.perf_counter() - t0)
    return _REPORTS[key]


def task(rep, name):
    hits = [t for t in rep["tasks"] if t["name"] == name]
    assert len(hits) == 1, name
    return hits[0]


def verdict(n, checks, elapsed):
    failed = [label for label, ok in checks if not ok]
    line = f"criterion {n}: {'PASS' if not failed else 'FAIL'} ({elapsed:.2f}s)"
    if failed:
        line += " - " + "; ".join(failed)
    RESULTS[n] = line
    print(line)
    assert not failed, line


def level_rules(evidence):
    return {v["rule"] for lv in evidence["levels"] for v in lv["verdicts"]}


def test_criterion_1_counterexample1_n2_p3():
    rep, dt = report("ce1-2-3", "counterexample1", n=2, p=3)
    overR = task(rep, "phantom depth of R/I over R")["result"]
    overI = task(rep, "phantom depth of R/I over R/I")["result"]
    mh_m = task(rep, "minheight(m)")["result"]["value"]
    mh_mI = task(rep, "minheight(m/I)")["result"]["value"]
    checks = [
        ("depth over R is 0", overR["lower_bound"] == 0),
        ("tail over R certified", overR["tail_status"] == "certified-depth-0"),
        ("every pool candidate a certified zerodivisor",
         len(overR["tail"]) == len(overR["pool"]) and all(v["tag"] == "CertifiedZerodivisor" for v in overR["tail"])),
        ("depth over R/I is 1 via [y2]", overI["lower_bound"] == 1 and overI["sequence"] == ["y2"]),
        ("y2 carries Frobenius-closure certificates",
         all(level_rules(ev) == {"FrobeniusClosure"} for ev in overI["sequence_evidence"])),
        ("tail over R/I certified", overI["tail_status"] == "certified-depth-0"),
        ("minheight(m) = 1 and depth = 1 - 1", mh_m == 1 and overR["lower_bound"] == mh_m - 1),
        ("minheight(m/I) = n - 1 = 1", mh_mI == 1 and overI["lower_bound"] == mh_mI),
        ("report verified", rep["status"] == "verified"),
        ("under 30 s", dt < 30),
    ]
    verdict(1, checks, dt)


def test_criterion_2_counterexample1_n3_p2():
    rep, dt = report("ce1-3-2", "counterexample1", n=3, p=2)
    overR = task(rep, "phantom depth of R/I over R")["result"]
    overI = task(rep, "phantom depth of R/I over R/I")["result"]
    checks = [
        ("depth over R/I is 2", overI["lower_bound"] == 2 and overI["tail_status"] == "certified-depth-0"),
        ("depth over R is 0", overR["lower_bound"] == 0 and overR["tail_status"] == "certified-depth-0"),
        ("minheight(m/I) = 2", task(rep, "minheight(m/I)")["result"]["value"] == 2),
        ("under 2 min", dt < 120),
    ]
    verdict(2, checks, dt)


def test_criterion_3_counterexample2_p7():
    rep, dt = report("ce2-7", "counterexample2", p=7)
    R = QuotientRing.parse(7, ["x", "y", "u", "v"], ["x^3*y^3+u^3+v^3"])
    declared = [jacobian_test_element(R, "u").describe()]
    checks = []
    for a in "xyuv":
        t = task(rep, f"{a} phantom zerodivisor on R/I over R")
        r = t["result"]
        checks.append((f"{a} certified zerodivisor", r["tag"] == "CertifiedZerodivisor"))
        checks.append((f"{a} within e <= 3, q <= 343", r["e"] <= 3 and r["witness_verdict"]["q"] <= 343))
        checks.append((f"{a} assumptions exactly as declared", bool(declared) and t["assumptions"] == declared))
    ppd = task(rep, "ppd of R/I over itself >= 1 via y")
    checks.append(("ppd via y unconditional", ppd["result"]["evidence"] == ["regular"] and ppd["assumptions"] == []))
    checks.append(("minheight(m/I) = 1", task(rep, "minheight(m/I)")["result"]["value"] == 1))
    checks.append(("under 5 min", dt < 300))
    verdict(3, checks, dt)


def test_criterion_4_base_change_formula():
    t0 = time.perf_counter()
    R = QuotientRing.parse(5, ["x", "y"], ["x^2-y^3"])
    X = extend_ring(R, "polynomial", ["t"])
    rep1 = verify_base_change_formula(R, PresentedModule.free(R), X, jacobian_test_element(R, "x"))
    t1 = time.perf_counter() - t0
    R3 = QuotientRing.parse(3, ["x"]).with_minimal_primes([[]])
    X3 = extend_ring(R3, "hypersurface-fiber", ["t1", "t2"], "t1*t2", [["t1"], ["t2"]])
    AS = TestElementAssumption(X3.total.poly("t1+t2"), 1, "user-assumed")
    rep2 = verify_base_change_formula(R3, PresentedModule.free(R3), X3, unit_test_element(R3), A_total=AS)
    t2 = time.perf_counter() - t0 - t1
    demo, ddt = report("bc-5", "basechange-demo", p=5)
    checks = [
        ("cusp: EQUAL-CERTIFIED", rep1.verdict == "EQUAL-CERTIFIED"),
        ("cusp: 1 + 1 = 2", (rep1.base_depth.lower_bound, rep1.fiber_depth, rep1.total_depth.lower_bound) == (1, 1, 2)),
        ("node fiber: EQUAL-CERTIFIED", rep2.verdict == "EQUAL-CERTIFIED"),
        ("node fiber: fiber_depth 1", rep2.fiber_depth == 1),
        ("demo report agrees", task(demo, "cusp, M = R, S = R[t]")["result"]["equation"] == "1 + 1 = 2"
         and task(demo, "regular base F_3[x], fiber F_3[t1,t2]/(t1*t2)")["status"] == "verified"),
        ("under 1 min each", t1 < 60 and t2 < 60),
    ]
    verdict(4, checks, t1 + t2)


def test_criterion_5_koszul_crosscheck():
    t0 = time.perf_counter()
    kinds = set()
    checks = []
    inst = koszul_instances()
    checks.append(("at least 10 sequences", len(inst) >= 10))
    for label, xs, M, A in inst:
        Q = M.ring.p ** 3
        r = koszul_criterion_crosscheck(xs, M, A, 2, Q)
        checks.append((f"{label} {xs}: no certified disagreement", r.agreement))
        if r.condition1 == "refuted":
            kinds.add("refuted")
            checks.append((f"{label} {xs}: shared witness", r.shared_witness is not None))
        else:
            ev = [v.evidence for v in phantom_sequence_check(xs, M, A, 2, Q)]
            kinds.add("regular" if all(e == "regular" for e in ev) else "phantom")
    checks.append(("mix of regular, phantom-not-regular and refuted", kinds == {"regular", "phantom", "refuted"}))
    verdict(5, checks, time.perf_counter() - t0)


def test_criterion_6_associated_prime_chain():
    t0 = time.perf_counter()
    inst = chain_probe_instances(0)
    checks = [("at least 10 instances", len(inst) >= 10)]
    for label, M, z, A in inst:
        r = ass_chain_probe(M, z, A, M.ring.p ** 2)
        st = [d["status"] for d in r.forward + r.backward]
        checks.append((f"{label} {z.text()}: zero violations", r.violations == 0))
        checks.append((f"{label} {z.text()}: every generator certified", all(s == "certified" for s in st)))
    verdict(6, checks, time.perf_counter() - t0)


def test_criterion_7_colon_flatness():
    t0 = time.perf_counter()
    inst = flatness_instances(0)
    labels = [i[0] for i in inst]
    checks = [("at least 10 random instances plus counterexample 1",
               len(inst) >= 11 and labels[-1] == "counterexample1")]
    for label, M, X, a, e in inst:
        checks.append((f"{label} a={a} e={e}: equal", colon_flatness_probe(M, X, a, e).equal))
    verdict(7, checks, time.perf_counter() - t0)


def test_criterion_8_kernel_property_suites():
    import test_properties as tp
    t0 = time.perf_counter()
    suites = [tp.test_groebner_spairs_reduce_to_zero, tp.test_normal_form_idempotent,
              tp.test_bracket_power_independent_of_generators, tp.test_colon_commutes_with_frobenius_in_polynomial_ring,
              tp.test_frobenius_composition, tp.test_frobenius_commutes_with_base_change]
    checks = [("at least 25 seeds", len(tp.SEEDS) >= 25)]
    for fn in suites:
        bad = []
        for seed in tp.SEEDS:
            try:
                fn(seed)
            except AssertionError:
                bad.append(seed)
        checks.append((f"{fn.__name__}: zero violations (failed seeds {bad})", not bad))
    dt = time.perf_counter() - t0
    checks.append(("under 5 min", dt < 300))
    verdict(8, checks, dt)


def test_criterion_9_report_audit():
    t0 = time.perf_counter()
    checks = []
    for key, name, kw in (("ce1-2-3", "counterexample1", {"n": 2, "p": 3}),
                          ("ce1-3-2", "counterexample1", {"n": 3, "p": 2}),
                          ("ce2-7", "counterexample2", {"p": 7}), ("bc-5", "basechange-demo", {"p": 5})):
        rep, _ = report(key, name, **kw)
        # audit the serialized form, as check-report would read it
        n, failures = check_report(json.loads(to_json_text(rep)))
        checks.append((f"{key}: {n} claims, all accepted {failures[:2]}", n > 0 and not failures))
    verdict(9, checks, time.perf_counter() - t0)
