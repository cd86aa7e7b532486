"""Scenario files, task execution and the built-in verification suites.

A scenario declares one base ring, optional certified minimal primes and
test element, named module presentations and a list of tasks.  A task may
move to a quotient of the base ring with an ``over`` block carrying its own
relations, minimal primes and test element.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import jsonschema

from . import certify
from ._version import __version__
from .base_change import (ColonFlatnessReport, cmfi_probe, colon_flatness_probe, extend_ring,
                          verify_base_change_formula)
from .closure import (ClosureContext, TestElementAssumption, jacobian_test_element, unit_test_element)
from .errors import BudgetExceeded, CertificationError, InputError, ParseError, TightCalcError
from .groebner import Ideal
from .koszul import koszul_criterion_crosscheck
from .modules import PresentedModule, QuotientRing
from .phantom import (ass_chain_probe, minheight, phantom_depth, phantom_regular, phantom_sequence_check)
from .poly import Polynomial

PRESENTATION_NOTE = ("presentations are used as given and never minimized; Frobenius powers do not "
                     "depend on the chosen presentation")

_poly_list = {"type": "array", "items": {"type": "string"}}
_test_element = {
    "type": "object",
    "required": ["c", "q0", "provenance"],
    "properties": {"c": {"type": "string"}, "q0": {"type": "integer", "minimum": 1},
                   "provenance": {"type": "string"}, "note": {"type": "string"}},
    "additionalProperties": False,
}
_bounds = {
    "type": "object",
    "properties": {"E": {"type": "integer", "minimum": 0}, "Q": {"type": "integer", "minimum": 1}},
    "additionalProperties": False,
}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["ring", "tasks"],
    "properties": {
        "name": {"type": "string"},
        "ring": {
            "type": "object",
            "required": ["p", "vars"],
            "properties": {"p": {"type": "integer", "minimum": 2},
                           "vars": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                           "relations": _poly_list,
                           "order": {"enum": ["grevlex", "grlex", "lex"]}},
            "additionalProperties": False,
        },
        "minimal_primes": {"type": "array", "items": _poly_list},
        "test_element": _test_element,
        "modules": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["rank"],
                "properties": {"rank": {"type": "integer", "minimum": 0},
                               "relations": {"type": "array", "items": _poly_list}},
                "additionalProperties": False,
            },
        },
        "tasks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ["tc_membership", "phantom_regular", "phantom_sequence", "phantom_depth",
                                      "minheight", "minimal_primes", "koszul_crosscheck"]},
                    "name": {"type": "string"},
                    "module": {"type": "string"},
                    "element": _poly_list,
                    "submodule": {"type": "array", "items": _poly_list},
                    "x": {"type": "string"},
                    "sequence": _poly_list,
                    "pool": _poly_list,
                    "over": {
                        "type": "object",
                        "properties": {"relations": _poly_list,
                                       "minimal_primes": {"type": "array", "items": _poly_list},
                                       "test_element": _test_element},
                        "additionalProperties": False,
                    },
                    "bounds": _bounds,
                    "expect": {},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def validate_scenario(data) -> None:
    """Structural validation; raises InputError at the first offending path."""
    v = jsonschema.Draft7Validator(SCENARIO_SCHEMA)
    errors = sorted(v.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        e = errors[0]
        raise InputError(_pointer(e.absolute_path), e.message)


# ---------------------------------------------------------------------------
# bounds and task records


@dataclass(frozen=True)
class Bounds:
    E: int = 3
    Q: Optional[int] = None
    pool_size: int = 16
    seed: int = 0

    def q(self, p: int) -> int:
        return self.Q if self.Q is not None else p ** 3

    def override(self, d: Optional[dict]) -> "Bounds":
        if not d:
            return self
        return Bounds(d.get("E", self.E), d.get("Q", self.Q), self.pool_size, self.seed)

    def to_json(self) -> dict:
        return {"E": self.E, "Q": self.Q if self.Q is not None else "p^3", "pool_size": self.pool_size,
                "seed": self.seed}


@dataclass
class Outcome:
    ok: Optional[bool]  # True verified, False mismatch, None bounded
    summary: str
    result: Any
    assumptions: List[str]


def _status(ok: Optional[bool]) -> str:
    return {True: "verified", False: "mismatch", None: "bounded"}[ok]


class ReportBuilder:
    def __init__(self, scenario: str, params: dict, bounds: Bounds):
        self.scenario = scenario
        self.params = params
        self.bounds = bounds
        self.tasks: List[dict] = []
        self._t0 = time.perf_counter()

    def run(self, name: str, kind: str, fn: Callable[[], Outcome], expect=None) -> dict:
        t = time.perf_counter()
        try:
            out = fn()
        except BudgetExceeded as exc:
            out = Outcome(None, f"budget exhausted: {exc}", {"budget_exhausted": str(exc)}, [])
        rec = {"name": name, "kind": kind, "status": _status(out.ok), "summary": out.summary,
               "expect": expect, "result": out.result, "assumptions": out.assumptions,
               "wall_time_s": round(time.perf_counter() - t, 6)}
        self.tasks.append(rec)
        return rec

    def report(self) -> dict:
        statuses = [t["status"] for t in self.tasks]
        if "mismatch" in statuses:
            overall, code = "mismatch", 1
        elif "bounded" in statuses:
            overall, code = "bounded", 2
        else:
            overall, code = "verified", 0
        return {"tool": "tightcalc", "version": __version__, "scenario": self.scenario, "params": self.params,
                "seed": self.bounds.seed, "bounds": self.bounds.to_json(), "notes": [PRESENTATION_NOTE],
                "tasks": self.tasks, "status": overall, "exit_code": code,
                "wall_time_s": round(time.perf_counter() - self._t0, 6)}


def _merge(*lists) -> List[str]:
    out: List[str] = []
    for xs in lists:
        for a in xs:
            if a not in out:
                out.append(a)
    return out


def _compare(expect, got: dict) -> Optional[bool]:
    """``expect`` is a dict of keys that must match ``got`` exactly."""
    if expect is None:
        return True
    if isinstance(expect, dict):
        return all(got.get(k) == v for k, v in expect.items())
    return got.get("value") == expect


# ---------------------------------------------------------------------------
# task kinds


def depth_outcome(d, expect=None) -> Outcome:
    js = d.to_json()
    got = {"lower_bound": d.lower_bound, "tail_status": d.tail_status, "sequence": d.elements}
    if expect is None:
        ok = True if d.tail_status == "certified-depth-0" else None
    else:
        ok = _compare(expect, got)
        if ok and d.tail_status != "certified-depth-0" and "tail_status" not in expect:
            ok = None
    return Outcome(ok, f"phantom depth >= {d.lower_bound} via {d.elements} ({d.tail_status})", js, d.assumptions)


def regular_outcome(v, expect=None) -> Outcome:
    js = v.to_json()
    got = {"tag": v.tag, "evidence": v.evidence}
    if v.refuted:
        got["e"] = v.e
    ok = _compare(expect, got) if expect is not None else (True if v.evidence != "not-refuted" else None)
    s = f"{v.x}: {v.tag}" + (f" at e={v.e} ({v.witness_verdict.label()})" if v.refuted else f" ({v.evidence})")
    return Outcome(ok, s, js, v.assumptions)


def sequence_outcome(vs, expect=None) -> Outcome:
    ev = [v.evidence for v in vs]
    js = {"verdicts": [v.to_json() for v in vs], "evidence": ev}
    got = {"evidence": ev}
    ok = _compare(expect, got) if expect is not None else (None if "not-refuted" in ev else True)
    return Outcome(ok, f"{[str(v.x) for v in vs]}: {ev}", js, _merge(*[v.assumptions for v in vs]))


def minheight_outcome(R: QuotientRing, expect=None) -> Outcome:
    h = minheight(R)
    js = {"value": h, "primes": [[str(g) for g in P.gens] for P in R.minimal_primes.primes],
          "claims": [certify.minimal_primes_claim(R)]}
    ok = True if expect is None else h == expect
    return Outcome(ok, f"minheight = {h}", js, R.minimal_primes.assumptions())


def primes_outcome(R: QuotientRing, expect=None) -> Outcome:
    cert = R.minimal_primes
    primes = [[str(g) for g in P.gens] for P in cert.primes]
    js = {"primes": primes, "flags": list(cert.flags), "checks": list(cert.checks),
          "claims": [certify.minimal_primes_claim(R)]}
    ok = True if expect is None else (len(primes) == expect if isinstance(expect, int) else primes == expect)
    return Outcome(ok, f"{len(primes)} minimal primes certified ({', '.join(cert.flags)})", js, cert.assumptions())


def membership_outcome(v, expect=None) -> Outcome:
    js = v.to_json()
    if expect is None:
        ok = None if v.tag == "Unknown" else True
    else:
        ok = v.tag == expect
    return Outcome(ok, v.label(), js, list(v.assumptions))


def koszul_outcome(rep, expect=None) -> Outcome:
    js = rep.to_json()
    got = {"condition1": rep.condition1, "condition2": rep.condition2_status, "agreement": rep.agreement,
           "shared_witness": rep.shared_witness is not None}
    ok = rep.agreement and (rep.refuted_position is None or rep.shared_witness is not None)
    if ok and expect is not None:
        ok = _compare(expect, got)
    s = (f"{rep.xs}: (1) {rep.condition1}, (2) {rep.condition2_status}, agreement={rep.agreement}"
         + (", shared witness at e=%d" % rep.shared_witness["e"] if rep.shared_witness else ""))
    assumptions = _merge(*[d.get("assumptions", ()) for h in rep.condition2 for d in h.to_json()["cycles"]])
    return Outcome(ok, s, js, assumptions)


# ---------------------------------------------------------------------------
# scenario files


class Scenario:
    """A validated scenario with its rings and modules built."""

    def __init__(self, data: dict):
        validate_scenario(data)
        self.data = data
        self.name = data.get("name", "scenario")
        r = data["ring"]
        try:
            base = QuotientRing.parse(r["p"], r["vars"], (), r.get("order", "grevlex"))
        except TightCalcError as exc:
            raise InputError("/ring", str(exc)) from exc
        except ValueError as exc:
            raise InputError("/ring", str(exc)) from exc
        rels = [self._poly(base, s, f"/ring/relations/{i}") for i, s in enumerate(r.get("relations", ()))]
        self.ring = self._ring(base, rels, data.get("minimal_primes"), "/minimal_primes", "/ring/relations")
        self.test_element = self._test_element(self.ring, data.get("test_element"), "/test_element")
        self.modules = data.get("modules", {})
        for name, m in self.modules.items():
            self.module(name, self.ring, f"/modules/{name}")
        self._mod_cache: Dict[Tuple[int, str], PresentedModule] = {}

    @staticmethod
    def _poly(R: QuotientRing, s: str, ptr: str) -> Polynomial:
        try:
            return R.poly(s)
        except ParseError as exc:
            raise InputError(ptr, f"parse error: {exc}") from exc
        except TightCalcError as exc:
            raise InputError(ptr, str(exc)) from exc

    def _ring(self, base: QuotientRing, extra: Sequence[Polynomial], primes, ptr: str, rel_ptr: str) -> QuotientRing:
        try:
            R = base.quotient(extra) if extra else base
        except ValueError as exc:
            raise InputError(rel_ptr, str(exc)) from exc
        if primes is None:
            return R
        cands = [[self._poly(R, s, f"{ptr}/{i}/{j}") for j, s in enumerate(P)] for i, P in enumerate(primes)]
        try:
            return R.with_minimal_primes(cands)
        except CertificationError as exc:
            raise InputError(ptr, f"minimal primes rejected: {exc}") from exc

    def _test_element(self, R: QuotientRing, d, ptr: str) -> Optional[TestElementAssumption]:
        if d is None:
            return None
        c = self._poly(R, d["c"], ptr + "/c")
        try:
            A = TestElementAssumption(c, d["q0"], d["provenance"], d.get("note", ""))
            A.validate(R)
        except TightCalcError as exc:
            raise InputError(ptr, str(exc)) from exc
        return A

    def module(self, name: str, R: QuotientRing, ptr: str) -> PresentedModule:
        if name not in self.modules:
            raise InputError(ptr, f"unknown module {name!r}")
        m = self.modules[name]
        rank = m["rank"]
        cols = []
        for i, col in enumerate(m.get("relations", ())):
            if len(col) != rank:
                raise InputError(f"/modules/{name}/relations/{i}", f"expected {rank} entries, found {len(col)}")
            cols.append([self._poly(R, s, f"/modules/{name}/relations/{i}/{j}") for j, s in enumerate(col)])
        return PresentedModule(R, rank, cols, name=name)

    def context(self, task: dict, ptr: str) -> Tuple[QuotientRing, Optional[TestElementAssumption]]:
        over = task.get("over")
        if not over:
            return self.ring, self.test_element
        R = self.ring
        base = QuotientRing(R.sig, R.defining.gens)
        extra = [self._poly(base, s, f"{ptr}/over/relations/{i}") for i, s in enumerate(over.get("relations", ()))]
        R2 = self._ring(base, extra, over.get("minimal_primes"), ptr + "/over/minimal_primes",
                        ptr + "/over/relations")
        A = self._test_element(R2, over.get("test_element"), ptr + "/over/test_element") \
            if "test_element" in over else None
        return R2, A

    def run(self, bounds: Bounds, params: Optional[dict] = None) -> dict:
        B = ReportBuilder(self.name, params or {}, bounds)
        for i, task in enumerate(self.data["tasks"]):
            ptr = f"/tasks/{i}"
            name = task.get("name", f"task-{i}")
            fn = self._task_fn(task, ptr, bounds.override(task.get("bounds")))
            B.run(name, task["kind"], fn, task.get("expect"))
        return B.report()

    def _need(self, task: dict, key: str, ptr: str):
        if key not in task:
            raise InputError(ptr, f"task kind {task['kind']!r} requires {key!r}")
        return task[key]

    def _task_fn(self, task: dict, ptr: str, b: Bounds) -> Callable[[], Outcome]:
        kind = task["kind"]
        R, A = self.context(task, ptr)
        expect = task.get("expect")
        Q = b.q(R.p)
        if kind in ("minheight", "minimal_primes"):
            if R.minimal_primes is None:
                raise InputError(ptr, "minimal primes must be declared for this task")
            return (lambda: minheight_outcome(R, expect)) if kind == "minheight" else (lambda: primes_outcome(R, expect))
        M = self.module(self._need(task, "module", ptr), R, ptr + "/module")
        if A is None:
            raise InputError(ptr, "no test element declared for this ring")
        if kind == "tc_membership":
            el = self._need(task, "element", ptr)
            z = M.element([self._poly(R, s, f"{ptr}/element/{j}") for j, s in enumerate(el)])
            gens = [M.element([self._poly(R, s, f"{ptr}/submodule/{i}/{j}") for j, s in enumerate(g)])
                    for i, g in enumerate(task.get("submodule", ()))]
            N = M.submodule(gens)
            return lambda: membership_outcome(ClosureContext(N, A).membership(z, Q), expect)
        if kind == "phantom_regular":
            x = self._poly(R, self._need(task, "x", ptr), ptr + "/x")
            return lambda: regular_outcome(phantom_regular(x, M, A, b.E, Q), expect)
        if kind in ("phantom_sequence", "koszul_crosscheck"):
            seq = [self._poly(R, s, f"{ptr}/sequence/{j}") for j, s in enumerate(self._need(task, "sequence", ptr))]
            if kind == "phantom_sequence":
                return lambda: sequence_outcome(phantom_sequence_check(seq, M, A, b.E, Q), expect)
            return lambda: koszul_outcome(koszul_criterion_crosscheck(seq, M, A, b.E, Q), expect)
        if kind == "phantom_depth":
            pool = [self._poly(R, s, f"{ptr}/pool/{j}") for j, s in enumerate(task["pool"])] \
                if "pool" in task else None
            return lambda: depth_outcome(phantom_depth(M, A, pool, b.E, Q, b.pool_size, b.seed), expect)
        raise InputError(ptr + "/kind", f"unsupported task kind {kind!r}")


def load_scenario(path: str) -> Scenario:
    import json
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError("", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return Scenario(data)


# ---------------------------------------------------------------------------
# built-ins


def counterexample1_scenario(n: int = 2, p: int = 3) -> dict:
    """``R = F_p[y1..yn, z]/(y_i z)`` with ``I = (z - y1)``, as scenario data."""
    if n < 2:
        raise InputError("/params/n", "n must be at least 2")
    ys = [f"y{i}" for i in range(1, n + 1)]
    over = {"relations": ["z-y1"], "minimal_primes": [["y1", "z"]],
            "test_element": {"c": "1", "q0": p, "provenance": "user-assumed",
                             "note": "nilpotents square to zero and the reduced ring is regular"}}
    tail_seq = ys[1:]
    return {
        "name": "counterexample1",
        "ring": {"p": p, "vars": ys + ["z"], "relations": [f"{y}*z" for y in ys]},
        "minimal_primes": [["z"], ys],
        "test_element": {"c": "y1+z", "q0": 1, "provenance": "user-assumed",
                         "note": "conductor element outside both minimal primes; the normalization is regular"},
        "modules": {"R": {"rank": 1, "relations": []},
                    "R/I": {"rank": 1, "relations": [["z-y1"]]}},
        "tasks": [
            {"name": "minimal primes of R", "kind": "minimal_primes", "expect": [["z"], ys]},
            {"name": "minheight(m)", "kind": "minheight", "expect": 1},
            {"name": "z-y1 regular on R", "kind": "phantom_regular", "module": "R", "x": "z-y1",
             "expect": {"evidence": "regular"}},
            {"name": "phantom depth of R/I over R", "kind": "phantom_depth", "module": "R/I",
             "expect": {"lower_bound": 0, "tail_status": "certified-depth-0"}},
            {"name": "minheight(m/I)", "kind": "minheight", "over": over, "expect": n - 1},
            {"name": "phantom depth of R/I over R/I", "kind": "phantom_depth", "module": "R/I", "over": over,
             "expect": {"lower_bound": n - 1, "tail_status": "certified-depth-0"}},
            {"name": "Koszul crosscheck over R/I", "kind": "koszul_crosscheck", "module": "R/I", "over": over,
             "sequence": tail_seq, "bounds": {"E": 1},
             "expect": {"condition1": "certified", "agreement": True}},
            {"name": "Koszul crosscheck over R", "kind": "koszul_crosscheck", "module": "R/I",
             "sequence": ["y2"], "bounds": {"E": 1},
             "expect": {"condition1": "refuted", "agreement": True, "shared_witness": True}},
        ],
    }


def counterexample1(n: int = 2, p: int = 3, bounds: Bounds = Bounds()) -> dict:
    data = counterexample1_scenario(n, p)
    return Scenario(data).run(bounds, {"n": n, "p": p})


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def _ce2_rings(p: int):
    R = QuotientRing.parse(p, ["x", "y", "u", "v"], ["x^3*y^3+u^3+v^3"], name="R")
    A = jacobian_test_element(R, "u")
    I = [R.poly(g) for g in ("u", "v", "x^3")]
    M = PresentedModule.cyclic(R, I)
    Rq = R.quotient(I, name="R/I").with_minimal_primes([["x", "u", "v"]])
    Aq = unit_test_element(Rq, p, "user-assumed", "nilpotents have index 3 <= p and the reduced ring is regular")
    return R, A, I, M, Rq, Aq


def colon_replay(R: QuotientRing, A: TestElementAssumption, I: Sequence[Polynomial], qs: Sequence[int],
                 max_deg: int = 6) -> dict:
    """Derive ``z = x^i y^j`` with ``c (a z)^q ∈ I^{[q]}`` for every variable ``a`` and every ``q`` in ``qs``
    while ``c^2 z^{q}`` lies outside ``I^{[q]}`` at the first ``q``, and record the memberships as claims.

    If ``a`` were phantom regular on ``R/I`` the first set would force
    ``c^2 z^q ∈ I^{[q]}`` for all ``q``; the recorded non-membership shows
    this fails, so no variable is phantom regular.
    """
    M = PresentedModule.cyclic(R, I)
    F = PresentedModule.free(R)
    c = A.c
    p = R.p
    q1 = qs[0]
    cands = sorted(((i, j) for i in range(3) for j in range(max_deg + 1)), key=lambda t: (t[0] + t[1], t))
    for i, j in cands:
        z = R.poly(f"x^{i}*y^{j}")
        bad = False
        claims = []
        for q in qs:
            e = certify.log_p(q, p)
            Iq = Ideal(R.sig, [g.frobenius(e) for g in I]) + R.defining
            for a in R.variables:
                if not Iq.contains(c * (a * z).frobenius(e)):
                    bad = True
                    break
                claims.append(certify.membership_claim(F, [[g] for g in I], F.element([a * z]), True, mult=c, q=q,
                                                       note="c (a z)^q in I^[q]"))
            if bad:
                break
        if bad:
            continue
        e1 = certify.log_p(q1, p)
        Iq = Ideal(R.sig, [g.frobenius(e1) for g in I]) + R.defining
        if Iq.contains(c * c * z.frobenius(e1)):
            continue
        claims.append(certify.membership_claim(F, [[g] for g in I], F.element([z]), False, mult=c * c, q=q1,
                                               note="c^2 z^q not in I^[q]"))
        return {"z": str(z), "qs": list(qs), "premise": "c (a z)^q in I^[q] for a in {x, y, u, v}",
                "conclusion_fails_at": q1, "claims": claims, "module": M.describe()}
    raise CertificationError("no monomial witness found for the colon replay")


def counterexample2(p: int = 7, bounds: Bounds = Bounds()) -> dict:
    if not _is_prime(p):
        raise InputError("/params/p", f"{p} is not prime")
    if p == 3:
        raise InputError("/params/p", "the construction needs p != 3")
    B = ReportBuilder("counterexample2", {"p": p}, bounds)
    R, A, I, M, Rq, Aq = _ce2_rings(p)
    E, Q = bounds.E, bounds.q(p)

    def shadow():
        J = Ideal(R.sig, I) + R.defining
        gb = sorted(str(g) for g in J.gb)
        want = sorted(str(R.poly(g)) for g in ("u", "v", "x^3"))
        claims = [certify.equality_claim(PresentedModule.free(QuotientRing(R.sig)), [[str(g)] for g in J.gens],
                                         [[g] for g in want], note="I + (f) = (u, v, x^3) in the polynomial ring")]
        return Outcome(gb == want, f"reduced basis of I + (f): {gb}", {"reduced_basis": gb, "claims": claims}, [])

    B.run("isomorphism shadow: R/I = F_p[x,y]/(x^3)", "groebner", shadow)
    B.run("minheight(m/I)", "minheight", lambda: minheight_outcome(Rq, 1), expect=1)
    for a in ("x", "y", "u", "v"):
        exp = {"tag": "CertifiedZerodivisor"}

        def zd(a=a):
            out = regular_outcome(phantom_regular(a, M, A, E, Q), exp)
            r = out.result
            if out.ok and not (r["e"] <= E and r["witness_verdict"]["q"] <= Q and out.assumptions == [A.describe()]):
                out.ok = False
                out.summary += " (witness outside bounds or unexpected assumptions)"
            return out

        B.run(f"{a} phantom zerodivisor on R/I over R", "phantom_regular", zd, exp)
    exp = {"evidence": ["regular"]}
    B.run("ppd of R/I over itself >= 1 via y", "phantom_sequence",
          lambda: sequence_outcome(phantom_sequence_check(["y"], PresentedModule.free(Rq), Aq, E, Q), exp), exp)
    qs = [q for q in (p, p * p) if q <= Q] or [p]

    def replay():
        d = colon_replay(R, A, I, qs)
        return Outcome(True, f"z = {d['z']}: premise holds for q in {qs}, c^2 z^{d['conclusion_fails_at']} "
                             f"not in I^[q]", d, [A.describe()])

    B.run("colon replay with derived witness", "colon_replay", replay)
    return B.report()


def basechange_demo(p: int = 5, bounds: Bounds = Bounds()) -> dict:
    if not _is_prime(p) or p in (2, 3):
        raise InputError("/params/p", "the cusp demo needs a prime p > 3")
    B = ReportBuilder("basechange-demo", {"p": p}, bounds)
    E, Q = bounds.E, bounds.Q

    def formula(R, M, X, A, expect, A_total=None):
        rep = verify_base_change_formula(R, M, X, A, E=E, Q=Q, pool_size=bounds.pool_size, seed=bounds.seed,
                                         A_total=A_total)
        js = rep.to_json()
        js["extension"] = X.to_json()
        got = {"verdict": rep.verdict, "equation": js["equation"], "fiber_depth": rep.fiber_depth}
        ok = _compare(expect, got)
        assumptions = _merge(rep.base_depth.assumptions, rep.total_depth.assumptions)
        return Outcome(ok, f"{rep.verdict}: {js['equation']}", js, assumptions)

    R = QuotientRing.parse(p, ["x", "y"], ["x^2-y^3"], name="R")
    A = jacobian_test_element(R, "x")
    X = extend_ring(R, "polynomial", ["t"])
    e1 = {"verdict": "EQUAL-CERTIFIED", "equation": "1 + 1 = 2"}
    B.run("cusp, M = R, S = R[t]", "base_change", lambda: formula(R, PresentedModule.free(R), X, A, e1), e1)
    e2 = {"verdict": "EQUAL-CERTIFIED", "equation": "0 + 1 = 1"}
    B.run("cusp, M = R/(x), S = R[t]", "base_change",
          lambda: formula(R, PresentedModule.cyclic(R, ["x"]), X, A, e2), e2)
    R3 = QuotientRing.parse(3, ["x"], name="F_3[x]").with_minimal_primes([[]])
    e3 = {"verdict": "EQUAL-CERTIFIED", "fiber_depth": 1, "equation": "1 + 1 = 2"}

    def node():
        X3 = extend_ring(R3, "hypersurface-fiber", ["t1", "t2"], "t1*t2", [["t1"], ["t2"]])
        # the image of 1 is no test element here: the node is not weakly F-regular.
        # its test ideal is the conductor (t1, t2)
        AS = TestElementAssumption(X3.total.poly("t1+t2"), 1, "user-assumed", "generator of the conductor of the node")
        return formula(R3, PresentedModule.free(R3), X3, unit_test_element(R3), e3, AS)

    B.run("regular base F_3[x], fiber F_3[t1,t2]/(t1*t2)", "base_change", node, e3)

    def refusal():
        try:
            extend_ring(QuotientRing.parse(2, ["x"]), "hypersurface-fiber", ["t"], "t^3")
        except CertificationError as exc:
            from .poly import RingSignature, parse_poly
            sig = RingSignature(2, ("t",))
            return Outcome(True, f"refused: {exc}", {"refused": True,
                                                      "claims": [certify.fedder_claim(sig, parse_poly("t^3", sig), False)]}, [])
        return Outcome(False, "extension with fiber t^3 over F_2 was accepted", {"refused": False}, [])

    B.run("fiber F_2[t]/(t^3) refused by the Fedder check", "fedder", refusal, {"refused": True})

    def cmfi():
        N = PresentedModule.cyclic(R, ["x"])
        r = cmfi_probe(X, N, N.basis(0), ["t"], "1+t", A, Q)
        return Outcome(r.status == "certified-out", f"b u in (S/tS) (x) N: {r.status}", r.to_json(),
                       _merge(r.verdict.assumptions, r.base_verdict.assumptions))

    B.run("fiber-element probe on R/(x), z = t, b = 1+t", "cmfi", cmfi, {"status": "certified-out"})
    return B.report()


# --- lemma probes ------------------------------------------------------------


def probe_rings() -> List[Tuple[str, QuotientRing, TestElementAssumption]]:
    """Small rings with declared test elements used by the randomized probes."""
    out = []
    R = QuotientRing.parse(3, ["y1", "y2", "z"], ["y1*z", "y2*z"]).with_minimal_primes([["z"], ["y1", "y2"]])
    out.append(("two components", R, TestElementAssumption(R.poly("y1+z"), 1, "user-assumed")))
    R = QuotientRing.parse(5, ["x", "y"], ["x^2-y^3"])
    out.append(("cusp", R, jacobian_test_element(R, "x")))
    R = QuotientRing.parse(3, ["y1", "y2"], ["y1^2", "y1*y2"]).with_minimal_primes([["y1"]])
    out.append(("embedded point", R, unit_test_element(R, 3, "user-assumed")))
    R = QuotientRing.parse(2, ["x", "y"], ["x*y"]).with_minimal_primes([["x"], ["y"]])
    out.append(("node", R, TestElementAssumption(R.poly("x+y"), 1, "user-assumed")))
    R = QuotientRing.parse(7, ["x", "y"])
    out.append(("plane", R, unit_test_element(R)))
    return out


def _random_monomial(rng: random.Random, R: QuotientRing, lo: int, hi: int) -> Polynomial:
    d = rng.randint(lo, hi)
    f = Polynomial.constant(R.sig, 1)
    for _ in range(d):
        f = f * rng.choice(R.variables)
    return f


def random_cyclic_module(rng: random.Random, R: QuotientRing) -> PresentedModule:
    k = rng.randint(0, 2)
    gens = [_random_monomial(rng, R, 1, 3) for _ in range(k)]
    M = PresentedModule.cyclic(R, gens)
    return M if not M.is_zero_module() else PresentedModule.free(R)


def chain_probe_instances(seed: int = 0, count: int = 12, Q: Optional[int] = None):
    """``(label, M, z, A)`` with ``z`` Out-certified in ``M``."""
    rng = random.Random(seed)
    rings = probe_rings()
    found = []
    tries = 0
    while len(found) < count and tries < 40 * count:
        tries += 1
        label, R, A = rings[len(found) % len(rings)] if tries <= count else rng.choice(rings)
        M = random_cyclic_module(rng, R)
        z = M.element([_random_monomial(rng, R, 0, 2)])
        if z.is_zero():
            continue
        v = ClosureContext(M.zero_submodule(), A).membership(z, Q if Q is not None else R.p ** 2)
        if v.is_out:
            found.append((label, M, z, A))
    return found


def flatness_instances(seed: int = 0, count: int = 10):
    """``(label, M, X, a, e)`` random instances followed by the two-component instance."""
    rng = random.Random(seed + 1)
    rings = probe_rings()
    exts = {}
    out = []
    while len(out) < count:
        label, R, A = rng.choice(rings)
        kind = rng.choice(["polynomial", "hypersurface-fiber"])
        key = (label, kind)
        if key not in exts:
            exts[key] = extend_ring(R, "polynomial", ["t"]) if kind == "polynomial" else \
                extend_ring(R, "hypersurface-fiber", ["t1", "t2"], "t1*t2", [["t1"], ["t2"]])
        M = random_cyclic_module(rng, R)
        a = _random_monomial(rng, R, 1, 2)
        if rng.random() < 0.5:
            a = a + rng.choice(R.variables)
        if not R.reduce(a):
            continue
        out.append((f"{label}/{kind}", M, exts[key], a, rng.randint(0, 1)))
    R = rings[0][1]
    X = extend_ring(R, "polynomial", ["t"])
    out.append(("counterexample1", PresentedModule.cyclic(R, ["z-y1"]), X, R.poly("y1"), 1))
    return out


def koszul_instances():
    """Sequences mixing regular, phantom-but-not-regular and refuted cases."""
    B = QuotientRing.parse(3, ["y1", "y2"], ["y1^2", "y1*y2"]).with_minimal_primes([["y1"]])
    AB = unit_test_element(B, 3, "user-assumed")
    S = QuotientRing.parse(5, ["x", "y", "t"], ["x^2-y^3"])
    AS = jacobian_test_element(S, "x")
    P = QuotientRing.parse(3, ["x", "y"])
    AP = unit_test_element(P)
    C = QuotientRing.parse(3, ["y1", "y2", "z"], ["y1*z", "y2*z"]).with_minimal_primes([["z"], ["y1", "y2"]])
    AC = TestElementAssumption(C.poly("y1+z"), 1, "user-assumed")
    MC = PresentedModule.cyclic(C, ["z-y1"])
    out = []
    for xs in (["y1"], ["y2"], ["y2", "y1"], ["y1", "y2"], ["y2", "y1+y2"]):
        out.append(("embedded point", xs, PresentedModule.free(B), AB))
    for xs in (["x"], ["t"], ["x", "t"], ["x", "y"]):
        out.append(("cusp[t]", xs, PresentedModule.free(S), AS))
    for xs in (["x", "y"], ["x", "x"]):
        out.append(("plane", xs, PresentedModule.free(P), AP))
    out.append(("two components, R/I", ["y1"], MC, AC))
    return out


def lemma_probes(seed: int = 0, bounds: Bounds = Bounds()) -> dict:
    B = ReportBuilder("lemma-probes", {"seed": seed}, bounds)

    for label, xs, M, A in koszul_instances():
        R = M.ring
        B.run(f"Koszul crosscheck {label} {xs}", "koszul_crosscheck",
              lambda xs=xs, M=M, A=A, R=R: koszul_outcome(
                  koszul_criterion_crosscheck(xs, M, A, min(bounds.E, 2), bounds.q(R.p))))

    for k, (label, M, z, A) in enumerate(chain_probe_instances(seed)):
        def chain(M=M, z=z, A=A):
            r = ass_chain_probe(M, z, A, bounds.Q if bounds.Q is not None else M.ring.p ** 2)
            return Outcome(r.violations == 0, f"{r.violations} violations; K = {r.K}, K' = {r.K1}", r.to_json(),
                           [A.describe()])

        B.run(f"associated-prime chain probe {k} ({label}, z = {z.text()})", "ass_chain_probe", chain)

    for k, (label, M, X, a, e) in enumerate(flatness_instances(seed)):
        def flat(M=M, X=X, a=a, e=e):
            r: ColonFlatnessReport = colon_flatness_probe(M, X, a, e)
            return Outcome(r.equal, f"colon along {a} at e={e}: {'equal' if r.equal else 'DIFFERENT'}",
                           r.to_json(), [])

        B.run(f"colon-flatness probe {k} ({label})", "colon_flatness", flat)
    return B.report()


BUILTINS = ("counterexample1", "counterexample2", "basechange-demo", "lemma-probes")


def run_builtin(name: str, n: Optional[int] = None, p: Optional[int] = None, bounds: Bounds = Bounds()) -> dict:
    if name == "counterexample1":
        return counterexample1(n if n is not None else 2, p if p is not None else 3, bounds)
    if name == "counterexample2":
        return counterexample2(p if p is not None else 7, bounds)
    if name == "basechange-demo":
        return basechange_demo(p if p is not None else 5, bounds)
    if name == "lemma-probes":
        return lemma_probes(bounds.seed, bounds)
    raise InputError("/builtin", f"unknown built-in {name!r}; choose from {', '.join(BUILTINS)}")
