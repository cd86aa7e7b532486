"""Flat extensions with fiber-only relations and the phantom-depth base-change formula."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from . import certify
from .closure import ClosureContext, ClosureVerdict, TestElementAssumption
from .errors import CertificationError, InconsistencyError, PreconditionError, SignatureMismatch
from .frobenius import frobenius_module
from .groebner import Ideal, certify_minimal_primes, embed
from .modules import (ModuleElement, PresentedModule, QuotientRing, Submodule, colon_annihilator, map_element,
                      map_poly, quotient_by_elements, submodule_equal, tensor_extend)
from .phantom import DepthReport, phantom_depth, phantom_sequence_check
from .poly import Polynomial, RingSignature, parse_poly

SHARED_TEST_ELEMENT = "assumption: the image of the base test element is a test element of the extension with the same q0"


def fedder_fpure_check(g: Polynomial, p: Optional[int] = None) -> bool:
    """Fedder's criterion for a hypersurface: ``g^{p-1} ∉ (t_1^p, ..., t_k^p)``."""
    sig = g.sig
    p = p or sig.p
    if p != sig.p:
        raise SignatureMismatch("characteristic mismatch")
    if not g or g.is_constant():
        raise PreconditionError("Fedder check needs a nonzero non-unit")
    frob = Ideal(sig, [Polynomial.var(sig, v).frobenius(1) for v in sig.vars])
    return not frob.contains(g ** (p - 1))


@dataclass
class FlatExtension:
    base: QuotientRing
    total: QuotientRing
    kind: str
    new_vars: List[str]
    fiber_relation: Optional[Polynomial]
    fiber_depth: int
    fedder: Optional[bool] = None
    claims: List[dict] = field(default_factory=list)
    fiber_seq: List[str] = field(default_factory=list)

    def fiber_description(self) -> dict:
        rel = [str(self.fiber_relation)] if self.fiber_relation is not None else []
        return {"p": self.base.p, "vars": list(self.new_vars), "relations": rel}

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.describe(), "total": self.total.describe(),
                "fiber": self.fiber_description(), "fiber_depth": self.fiber_depth, "fedder": self.fedder,
                "fiber_sequence": list(self.fiber_seq),
                "claims": self.claims}

    def map_poly(self, f: Polynomial) -> Polynomial:
        return map_poly(f, self.total)

    def extend_module(self, M: PresentedModule) -> PresentedModule:
        return tensor_extend(M, self.total)

    def test_element(self, A: TestElementAssumption) -> TestElementAssumption:
        return TestElementAssumption(self.map_poly(A.c), A.q0, A.provenance,
                                     (A.note + "; " if A.note else "") + "image in the extension")

    def fiber_sequence(self) -> List[Polynomial]:
        """A maximal regular sequence on the fiber, read in ``S``."""
        return [self.total.poly(f) for f in self.fiber_seq]


def fiber_regular_sequence(fiber: QuotientRing, length: int) -> List[Polynomial]:
    """Greedy regular sequence of linear forms, each checked by exact colon vanishing."""
    from .phantom import default_pool
    cur = PresentedModule.free(fiber)
    seq: List[Polynomial] = []
    pool = default_pool(fiber, size=64)
    while len(seq) < length:
        for f in pool:
            if quotient_by_elements(cur, [f]).is_zero_module():
                continue
            if not colon_annihilator(cur.zero_submodule(), f).gens:
                seq.append(f)
                cur = quotient_by_elements(cur, [f])
                break
        else:
            raise CertificationError(f"no regular sequence of length {length} found on the fiber")
    return seq


def extend_ring(R: QuotientRing, kind: str, new_vars: Sequence[str] = ("t",), relation: Optional[str] = None,
                fiber_primes: Sequence[Sequence[str]] = ()) -> FlatExtension:
    """``S = R[t̄]`` (polynomial kind) or ``R[t̄]/(g(t̄))`` (hypersurface-fiber kind).

    Fiber-only relations make ``S`` free over ``R``.  Hypersurface fibers
    must pass the Fedder check.  Minimal primes of ``S`` are ``P + Q`` for
    certified base primes ``P`` and supplied fiber primes ``Q``, and are
    re-certified in ``S``.
    """
    if kind not in ("polynomial", "hypersurface-fiber"):
        raise ValueError(f"unknown extension kind {kind!r}")
    new_vars = list(new_vars)
    if not new_vars:
        raise ValueError("no new variables")
    if any(v in R.sig.vars for v in new_vars):
        raise SignatureMismatch("new variables clash with base variables")
    big = R.sig.extend(new_vars)
    fib_sig = RingSignature(R.p, tuple(new_vars), R.sig.order)
    rels = [embed(g, big) for g in R.defining.gens]
    claims = []
    g = None
    fedder = None
    if kind == "hypersurface-fiber":
        if relation is None:
            raise ValueError("hypersurface fiber needs a relation")
        try:
            g = parse_poly(relation, fib_sig)
        except Exception as exc:
            raise SignatureMismatch(f"fiber relation must involve only the new variables: {exc}") from exc
        fedder = fedder_fpure_check(g)
        claims.append(certify.fedder_claim(fib_sig, g, fedder))
        if not fedder:
            raise CertificationError(f"fiber F_{R.p}[{','.join(new_vars)}]/({g}) fails the Fedder check; "
                                     "extension refused as not certifiably F-injective")
        rels.append(embed(g, big))
        fiber_depth = len(new_vars) - 1
    else:
        fiber_depth = len(new_vars)
    fiber = QuotientRing(fib_sig, [g] if g is not None else [])
    fseq = [str(f) for f in fiber_regular_sequence(fiber, fiber_depth)]
    S = QuotientRing(big, rels, name=f"{R.name}[{','.join(new_vars)}]" if R.name else "")
    if R.minimal_primes is not None:
        fps = [list(Q) for Q in fiber_primes] or ([[]] if kind == "polynomial" else [])
        if not fps:
            raise PreconditionError("fiber minimal primes required to transport certified primes")
        cands = []
        for P in R.minimal_primes.primes:
            for Qg in fps:
                cands.append(Ideal(big, [embed(h, big) for h in P.gens] + [embed(parse_poly(t, fib_sig), big) for t in Qg]))
        cert = certify_minimal_primes(S.defining, cands)
        S = QuotientRing(big, rels, cert, S.name)
        claims.append(certify.minimal_primes_claim(S))
    return FlatExtension(R, S, kind, new_vars, g, fiber_depth, fedder, claims, fseq)


@dataclass
class FormulaReport:
    base_depth: DepthReport
    total_depth: DepthReport
    fiber_depth: int
    verdict: str
    transfer: List[dict]

    @property
    def left(self) -> int:
        return self.base_depth.lower_bound + self.fiber_depth

    @property
    def right(self) -> int:
        return self.total_depth.lower_bound

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "left": self.left, "right": self.right,
                "equation": f"{self.base_depth.lower_bound} + {self.fiber_depth} = {self.right}",
                "fiber_depth": self.fiber_depth, "base": self.base_depth.to_json(),
                "total": self.total_depth.to_json(), "transfer_checks": self.transfer}


def verify_base_change_formula(R: QuotientRing, M: PresentedModule, X: FlatExtension, A: TestElementAssumption,
                               pools=(None, None), E: int = 3, Q: Optional[int] = None, pool_size: int = 16,
                               seed: int = 0, A_total: Optional[TestElementAssumption] = None) -> FormulaReport:
    """``ppd_R M + depth S/mS`` against ``ppd_S (S ⊗ M)``, both as certified lower bounds."""
    if M.ring is not R or X.base is not R:
        raise SignatureMismatch("module, ring and extension do not match")
    AS = A_total or X.test_element(A)
    left = phantom_depth(M, A, pools[0], E, Q, pool_size, seed)
    Mp = X.extend_module(M)
    right = phantom_depth(Mp, AS, pools[1], E, Q, pool_size, seed)
    if A_total is None:
        right.assumptions.append(SHARED_TEST_ELEMENT)
    # one-sided check: the base sequence followed by the fiber sequence stays phantom-regular over S
    seq = [X.map_poly(v.x) for v in left.sequence] + X.fiber_sequence()
    transfer = []
    if seq:
        vs = phantom_sequence_check(seq, Mp, AS, E, Q)
        transfer = [{"x": str(v.x), "evidence": v.evidence} for v in vs]
        if any(v.refuted for v in vs):
            raise InconsistencyError("a base phantom sequence extended by the fiber sequence was refuted over S")
    lhs = left.lower_bound + X.fiber_depth
    rhs = right.lower_bound
    both = left.tail_status == "certified-depth-0" and right.tail_status == "certified-depth-0"
    if lhs == rhs:
        verdict = "EQUAL-CERTIFIED" if both else "EQUAL-BOUNDED"
    else:
        verdict = "MISMATCH"
        if both:
            raise InconsistencyError(f"base-change formula fails with certified tails: {lhs} != {rhs}")
    return FormulaReport(left, right, X.fiber_depth, verdict, transfer)


@dataclass
class ColonFlatnessReport:
    equal: bool
    left: List[List[str]]
    right: List[List[str]]
    claims: List[dict]

    def to_json(self) -> dict:
        return {"equal": self.equal, "lhs": self.left, "rhs": self.right, "claims": self.claims}


def colon_flatness_probe(M: PresentedModule, X: FlatExtension, a, e: int) -> ColonFlatnessReport:
    """``0 :_{F^e_S(S⊗M)} φ(a)^q`` against ``S ⊗ (0 :_{F^e_R(M)} a^q)`` inside ``F^e_S(S⊗M)``."""
    R = M.ring
    a = R.poly(a)
    if not R.maximal_ideal.contains(a):
        raise PreconditionError(f"{a} is not in the maximal ideal")
    FR = frobenius_module(M, e)
    FS = frobenius_module(X.extend_module(M), e)
    aq = a.frobenius(e)
    lhs = colon_annihilator(FS.zero_submodule(), X.map_poly(aq))
    base = colon_annihilator(FR.zero_submodule(), aq)
    rhs = Submodule(FS, [map_element(g, FS) for g in base.gens])
    eq = submodule_equal(lhs, rhs)
    claims = [certify.colon_claim(FS, X.map_poly(aq), lhs.gens), certify.equality_claim(FS, lhs.gens, rhs.gens)]
    return ColonFlatnessReport(eq, lhs.text(), rhs.text(), claims if eq else [])


@dataclass
class CmfiReport:
    status: str  # certified-out | unknown
    verdict: ClosureVerdict
    base_verdict: ClosureVerdict

    def to_json(self) -> dict:
        return {"status": self.status, "verdict": self.verdict.to_json(), "base_verdict": self.base_verdict.to_json()}


def cmfi_probe(X: FlatExtension, N: PresentedModule, u: ModuleElement, zs: Sequence, b, A: TestElementAssumption,
               Q: Optional[int] = None, A_total: Optional[TestElementAssumption] = None) -> CmfiReport:
    """For ``u ∉ 0^*_N`` try to certify ``b u ∉ 0^*`` in ``(S/z̄S) ⊗ N``; an In certificate is a violation."""
    R = X.base
    S = X.total
    Q = Q if Q is not None else R.p ** 3
    bv = ClosureContext(N.zero_submodule(), A).membership(u, Q)
    if not bv.is_out:
        raise PreconditionError(f"u-precondition: {u} has no Out-certificate ({bv.label()})")
    b = S.poly(b)
    zs = [S.poly(z) for z in zs]
    fiber_max = Ideal(S.sig, [map_poly(x, S) for x in R.variables] + zs) + S.defining
    if fiber_max.contains(b):
        raise PreconditionError(f"b-precondition: the image of {b} in S/(m, z)S is zero")
    Np = X.extend_module(N)
    target = quotient_by_elements(Np, zs) if zs else Np
    w = map_element(u, target).scale(b)
    AS = A_total or X.test_element(A)
    v = ClosureContext(target.zero_submodule(), AS, validate=False).membership(w, Q)
    if v.is_in:
        raise InconsistencyError(f"b u certified inside 0^* over the extension ({v.label()})")
    return CmfiReport("certified-out" if v.is_out else "unknown", v, bv)
