"""Phantom regular elements and sequences, phantom depth, minheight, and the lemma probes."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence

from . import certify
from .closure import (ClosureContext, ClosureVerdict, TestElementAssumption, tc_zero_submodule_approx)
from .errors import CertificationError, PreconditionError
from .frobenius import bracket_submodule, frobenius_element, frobenius_module
from .groebner import krull_dimension
from .modules import (ModuleElement, PresentedModule, QuotientRing, annihilator_ideal,
                      colon_annihilator, quotient_by_elements)
from .poly import Polynomial

AVOIDANCE = "modeling assumption: the module satisfies avoidance (graded avatar of a complete local ring)"


@dataclass
class LevelEvidence:
    e: int
    status: str  # zero | certified | unknown | refuted
    generators: List[List[str]] = field(default_factory=list)
    verdicts: List[dict] = field(default_factory=list)
    claims: List[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"e": self.e, "status": self.status, "generators": self.generators,
                "verdicts": self.verdicts, "claims": self.claims}


@dataclass
class PhantomRegVerdict:
    """CertifiedZerodivisor (with ``e`` and witness) or NotRefuted (with the bounds)."""

    x: Polynomial
    tag: str
    E: int
    Q: int
    levels: List[LevelEvidence] = field(default_factory=list)
    e: Optional[int] = None
    witness: Optional[ModuleElement] = None
    witness_verdict: Optional[ClosureVerdict] = None

    @property
    def refuted(self) -> bool:
        return self.tag == "CertifiedZerodivisor"

    @property
    def evidence(self) -> str:
        """regular (exact zero colons) / frobenius-closure (all In) / not-refuted / refuted."""
        if self.refuted:
            return "refuted"
        st = {lv.status for lv in self.levels}
        if st == {"zero"}:
            return "regular"
        if st <= {"zero", "certified"}:
            return "certified"
        return "not-refuted"

    @property
    def assumptions(self) -> List[str]:
        out = []
        vs = [self.witness_verdict] if self.witness_verdict else []
        for lv in self.levels:
            for d in lv.verdicts:
                for a in d.get("assumptions", ()):
                    if a not in out:
                        out.append(a)
        for v in vs:
            for a in v.assumptions:
                if a not in out:
                    out.append(a)
        return out

    def to_json(self) -> dict:
        d = {"x": str(self.x), "tag": self.tag, "evidence": self.evidence, "bounds": {"E": self.E, "Q": self.Q}}
        if self.refuted:
            d["e"] = self.e
            d["witness"] = self.witness.text()
            d["witness_verdict"] = self.witness_verdict.to_json()
        d["levels"] = [lv.to_json() for lv in self.levels]
        d["assumptions"] = self.assumptions
        return d

    def __repr__(self):
        if self.refuted:
            return f"CertifiedZerodivisor({self.x}, e={self.e}, w={self.witness!r}, {self.witness_verdict.label()})"
        return f"NotRefuted({self.x}, {self.evidence}, E={self.E}, Q={self.Q})"


def _check_in_maximal(x: Polynomial, M: PresentedModule) -> None:
    R = M.ring
    if not R.maximal_ideal.contains(x):
        raise PreconditionError(f"{x} is not in the maximal ideal")
    if quotient_by_elements(M, [x]).is_zero_module():
        raise PreconditionError(f"{x} M = M")


class _Contexts:
    """One ClosureContext per Frobenius level of one module, shared across elements."""

    def __init__(self, M: PresentedModule, A: TestElementAssumption):
        self.M = M
        self.A = A
        self._ctx: Dict[int, ClosureContext] = {}
        A.validate(M.ring)

    def at(self, e: int) -> ClosureContext:
        if e not in self._ctx:
            FM = frobenius_module(self.M, e)
            self._ctx[e] = ClosureContext(FM.zero_submodule(), self.A, validate=False)
        return self._ctx[e]


def phantom_regular(x, M: PresentedModule, A: TestElementAssumption, E: int = 3, Q: Optional[int] = None,
                    _ctxs: Optional[_Contexts] = None) -> PhantomRegVerdict:
    """Search ``e ≤ E`` for a generator of ``0 :_{F^e(M)} x^q`` outside ``0^*``."""
    R = M.ring
    x = R.poly(x)
    Q = Q if Q is not None else R.p ** 3
    _check_in_maximal(x, M)
    ctxs = _ctxs if _ctxs is not None and _ctxs.M is M else _Contexts(M, A)
    verdict = PhantomRegVerdict(x, "NotRefuted", E, Q)
    for e in range(E + 1):
        ctx = ctxs.at(e)
        FM = ctx.M
        xq = x.frobenius(e)
        C = colon_annihilator(FM.zero_submodule(), xq)
        lv = LevelEvidence(e, "zero", [g.text() for g in C.gens])
        lv.claims.append(certify.colon_claim(FM, xq, C.gens))
        if e:
            lv.claims.append(certify.frobenius_claim(M, e, FM))
        verdict.levels.append(lv)
        if not C.gens:
            continue
        vs = ctx.batch(C.gens, Q)
        for g, v in zip(C.gens, vs):
            if v is not None:
                lv.verdicts.append({"element": g.text(), **v.to_json()})
            if v is not None and v.is_out:
                lv.status = "refuted"
                lv.claims.append(certify.membership_claim(FM, [], g, True, mult=xq,
                                                          note="x^q annihilates the witness"))
                verdict.tag = "CertifiedZerodivisor"
                verdict.e = e
                verdict.witness = g
                verdict.witness_verdict = v
                return verdict
        lv.status = "certified" if all(v is not None and v.is_in for v in vs) else "unknown"
    return verdict


def phantom_sequence_check(xs: Sequence, M: PresentedModule, A: TestElementAssumption, E: int = 3,
                           Q: Optional[int] = None) -> List[PhantomRegVerdict]:
    out = []
    cur = M
    for x in xs:
        x = M.ring.poly(x)
        v = phantom_regular(x, cur, A, E, Q)
        out.append(v)
        if v.refuted:
            break
        cur = quotient_by_elements(cur, [x])
    return out


# ---------------------------------------------------------------------------


def default_pool(R: QuotientRing, size: int = 16, seed: int = 0, supplied: Sequence = ()) -> List[Polynomial]:
    """Generators of the maximal ideal, supplied elements, ±1 linear forms in ≤ 2 variables, then seeded random forms."""
    xs = R.variables
    out: List[Polynomial] = []

    def push(f):
        f = R.reduce(R.poly(f))
        if f and len(out) < size and not any(f == g or f == -g for g in out):
            out.append(f)

    for x in xs:
        push(x)
    for f in supplied:
        push(f)
    signs = [1] if R.p == 2 else [1, -1]
    for i, j in combinations(range(len(xs)), 2):
        for s in signs:
            push(xs[i] + xs[j] * s)
    rng = random.Random(seed)
    tries = 0
    while len(out) < size and tries < 50 * size:
        tries += 1
        coeffs = [rng.randrange(R.p) for _ in xs]
        f = Polynomial.zero(R.sig)
        for c, x in zip(coeffs, xs):
            f = f + x * c
        push(f)
    return out


@dataclass
class DepthReport:
    sequence: List[PhantomRegVerdict]
    tail: List[PhantomRegVerdict]
    tail_status: str  # certified-depth-0 | bounded
    assumptions: List[str]
    pool: List[str]

    @property
    def lower_bound(self) -> int:
        return len(self.sequence)

    @property
    def elements(self) -> List[str]:
        return [str(v.x) for v in self.sequence]

    def to_json(self) -> dict:
        return {"lower_bound": self.lower_bound, "sequence": self.elements,
                "sequence_evidence": [v.to_json() for v in self.sequence],
                "tail_status": self.tail_status, "tail": [v.to_json() for v in self.tail],
                "pool": self.pool, "assumptions": self.assumptions}


def phantom_depth(M: PresentedModule, A: TestElementAssumption, pool: Optional[Sequence] = None, E: int = 3,
                  Q: Optional[int] = None, pool_size: int = 16, seed: int = 0) -> DepthReport:
    """Greedy search: extend by the first pool element that is not refuted on the current quotient."""
    if M.is_zero_module():
        raise PreconditionError("phantom depth of the zero module")
    R = M.ring
    pool = [R.poly(f) for f in pool] if pool is not None else default_pool(R, pool_size, seed)
    seq: List[PhantomRegVerdict] = []
    cur = M
    while True:
        ctxs = _Contexts(cur, A)
        tail = []
        chosen = None
        for f in pool:
            if quotient_by_elements(cur, [f]).is_zero_module():
                continue
            v = phantom_regular(f, cur, A, E, Q, _ctxs=ctxs)
            if v.refuted:
                tail.append(v)
            else:
                chosen = v
                break
        if chosen is None:
            status = "certified-depth-0" if tail and len(tail) == len(pool) else "bounded"
            break
        seq.append(chosen)
        cur = quotient_by_elements(cur, [chosen.x])
        if cur.is_zero_module():
            tail, status = [], "bounded"
            break
    assumptions = []
    for v in seq + tail:
        for a in v.assumptions:
            if a not in assumptions:
                assumptions.append(a)
    assumptions.append(AVOIDANCE)
    return DepthReport(seq, tail, status, assumptions, [str(f) for f in pool])


def minheight(R: QuotientRing) -> int:
    """Minimum over the certified minimal primes of ``dim F_p[x]/p``."""
    if R.minimal_primes is None:
        raise CertificationError("minheight needs certified minimal primes")
    return min(krull_dimension(P) for P in R.minimal_primes.primes)


# ---------------------------------------------------------------------------


@dataclass
class LemmaWitness:
    e: int
    z: ModuleElement
    z_verdict: ClosureVerdict
    xz_verdict: ClosureVerdict
    lifted: Optional[PhantomRegVerdict] = None

    def to_json(self) -> dict:
        d = {"e": self.e, "z": self.z.text(), "z_verdict": self.z_verdict.to_json(),
             "xz_verdict": self.xz_verdict.to_json()}
        if self.lifted is not None:
            d["lifted"] = self.lifted.to_json()
        return d


def phantom_zerodivisor_witness(x, M: PresentedModule, A: TestElementAssumption, E: int = 3,
                                Q: Optional[int] = None) -> Optional[LemmaWitness]:
    """Find ``e`` and ``z ∈ F^e(M)`` with ``x z ∈ 0^*`` (In) and ``z ∉ 0^*`` (Out).

    Walks ``w, x w, x^2 w, ...`` down from ``x^q w = 0`` for each generator ``w``
    of the colon, taking the last element still certified outside ``0^*``.
    """
    R = M.ring
    x = R.poly(x)
    Q = Q if Q is not None else R.p ** 3
    ctxs = _Contexts(M, A)
    for e in range(E + 1):
        ctx = ctxs.at(e)
        FM = ctx.M
        q = R.p ** e
        C = colon_annihilator(FM.zero_submodule(), x.frobenius(e))
        for w in C.gens:
            chain = [w]
            for _ in range(q - 1):
                chain.append(chain[-1].scale(x))
            after = ctx.membership(chain[-1].scale(x), Q)  # x^q w = 0: Member
            for z in reversed(chain):
                v = ctx.membership(z, Q)
                if v.is_out:
                    return LemmaWitness(e, z, v, after)
                if not v.is_in:
                    break
                after = v
    return None


def lift_lemma_witness(x, M: PresentedModule, A: TestElementAssumption, W: LemmaWitness, Q: Optional[int] = None,
                       max_e: int = 6) -> Optional[PhantomRegVerdict]:
    """The converse construction: from ``x z ∈ 0^*`` build ``w = c z^{q'}`` with ``x^{q q'} w = 0``.

    Needs ``c (x z)^{q'} = 0`` in ``F^{e+e'}(M)``; found by the Frobenius
    closure or scan certificate of ``x z``.
    """
    R = M.ring
    x = R.poly(x)
    Q = Q if Q is not None else R.p ** 3
    v = W.xz_verdict
    if not v.is_in:
        return None
    q1 = v.q if v.rule == "FrobeniusClosure" else 1
    e1 = 0
    while R.p ** e1 < q1:
        e1 += 1
    if W.e + e1 > max_e:
        return None
    e_tot = W.e + e1
    Ft = frobenius_module(M, e_tot)
    if not frobenius_element(W.z.scale(x), e1, Ft).is_zero():
        return None
    w = frobenius_element(W.z, e1, Ft)
    xqq = x.frobenius(e_tot)
    if not w.scale(xqq).is_zero():
        return None
    ctx = ClosureContext(Ft.zero_submodule(), A, validate=False)
    wv = ctx.membership(w, Q)
    if not wv.is_out:
        return None
    out = PhantomRegVerdict(x, "CertifiedZerodivisor", e_tot, Q)
    out.e = e_tot
    out.witness = w
    out.witness_verdict = wv
    lv = LevelEvidence(e_tot, "refuted", [w.text()], [{"element": w.text(), **wv.to_json()}],
                       [certify.frobenius_claim(M, e_tot, Ft),
                        certify.membership_claim(Ft, [], w, True, mult=xqq, note="x^q annihilates the witness")])
    out.levels.append(lv)
    return out


@dataclass
class ChainProbe:
    K: List[str]
    K1: List[str]
    forward: List[dict]
    backward: List[dict]
    violations: int

    def to_json(self) -> dict:
        return {"K": self.K, "K_F1": self.K1, "bracket_into": self.forward, "into_K": self.backward,
                "violations": self.violations}


def ass_chain_probe(M: PresentedModule, z: ModuleElement, A: TestElementAssumption, Q: Optional[int] = None,
                    E: int = 1) -> ChainProbe:
    """Check ``K^{[p]} ⊆ K'`` and ``K' ⊆ K`` generator by generator, where
    ``K = Z : z`` and ``K' = Z' : z^p`` for inner approximations ``Z, Z'`` of
    ``0^*_M`` and ``0^*_{F^1(M)}``.  A violation is an Out verdict.
    """
    R = M.ring
    Q = Q if Q is not None else R.p ** 3
    ctx0 = ClosureContext(M.zero_submodule(), A)
    zv = ctx0.membership(z, Q)
    if not zv.is_out:
        raise PreconditionError(f"{z} has no Out-certificate ({zv.label()})")
    F1 = frobenius_module(M, 1)
    ctx1 = ClosureContext(F1.zero_submodule(), A, validate=False)
    inner0 = tc_zero_submodule_approx(M, A, Q, E).inner
    inner1 = tc_zero_submodule_approx(F1, A, Q, E).inner
    zp = frobenius_element(z, 1, F1)
    K = [g for g in annihilator_ideal(inner0, z) if R.reduce(g)]
    K1 = [g for g in annihilator_ideal(inner1, zp) if R.reduce(g)]
    bad = 0
    fwd = []
    inner1_p = bracket_submodule(inner0, 1, F1) + inner1
    for a in K:
        t = zp.scale(a.frobenius(1))
        if inner1_p.contains(t):
            fwd.append({"a": str(a), "status": "certified"})
            continue
        v = ctx1.membership(t, Q)
        bad += v.is_out
        fwd.append({"a": str(a), "status": "violation" if v.is_out else ("certified" if v.is_in else "unknown"),
                    "verdict": v.to_json()})
    back = []
    for b in K1:
        t = z.scale(b)
        if inner0.contains(t):
            back.append({"b": str(b), "status": "certified"})
            continue
        v = ctx0.membership(t, Q)
        bad += v.is_out
        back.append({"b": str(b), "status": "violation" if v.is_out else ("certified" if v.is_in else "unknown"),
                     "verdict": v.to_json()})
    return ChainProbe([str(a) for a in K], [str(b) for b in K1], fwd, back, bad)
