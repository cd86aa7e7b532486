"""Bounded tight-closure membership with certificates.

Refutation is finitely certifiable (one ``q`` with ``c z^q ∉ N^{[q]}``),
confirmation in general is not, so answers are three-valued.  Out verdicts
are sound relative to a declared test element; In verdicts from membership
or Frobenius closure are unconditional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import certify, groebner
from .errors import AssumptionError, InconsistencyError, PreconditionError
from .frobenius import bracket_submodule, frobenius_element, frobenius_module
from .modules import ModuleElement, PresentedModule, QuotientRing, Submodule, colon_annihilator
from .poly import Polynomial

PROVENANCES = ("regular-ring", "jacobian-hypersurface", "user-assumed")

FACT_REGULAR = "standard fact: every submodule of a finitely generated module over a regular ring is tightly closed"
FACT_PERSISTENCE = "standard fact: tight closure persists along R -> R/p"
FACT_MINPRIMES = "standard fact: tight closure is detected modulo the minimal primes"


def is_power_of(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


@dataclass(frozen=True)
class TestElementAssumption:
    """A declared ``q0``-weak test element ``c``; an axiom, never computed."""

    c: Polynomial
    q0: int
    provenance: str
    note: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise AssumptionError(f"unknown provenance {self.provenance!r}")
        if not is_power_of(self.q0, self.c.sig.p):
            raise AssumptionError(f"q0 = {self.q0} is not a power of {self.c.sig.p}")
        if self.provenance == "regular-ring" and (self.c != Polynomial.constant(self.c.sig, 1) or self.q0 != 1):
            raise AssumptionError("regular-ring provenance requires c = 1 and q0 = 1")

    def describe(self) -> str:
        s = f"test element c = {self.c}, q0 = {self.q0} ({self.provenance})"
        return s + (f": {self.note}" if self.note else "")

    def to_json(self) -> dict:
        return {"c": str(self.c), "q0": self.q0, "provenance": self.provenance, "note": self.note}

    def validate(self, R: QuotientRing) -> None:
        """``c`` must lie in ``R°``: outside every certified minimal prime, or a nonzerodivisor."""
        if self.c.sig != R.sig:
            raise AssumptionError("test element from a different ring")
        if R.minimal_primes is not None:
            for i, P in enumerate(R.minimal_primes.primes):
                if P.contains(self.c):
                    raise AssumptionError(f"test element {self.c} lies in minimal prime {i}")
            return
        if not R.reduce(self.c):
            raise AssumptionError("test element is zero in the ring")
        if R.defining.gens:
            if groebner.radical_membership(self.c, R.defining):
                raise AssumptionError("test element is nilpotent")
            if not groebner.colon_ideal(R.defining, self.c).same_ideal(R.defining):
                raise AssumptionError("test element is a zerodivisor and no minimal primes were certified")

    def mapped(self, c: Polynomial, note: str = "") -> "TestElementAssumption":
        return TestElementAssumption(c, self.q0, "user-assumed", note or f"image of {self.describe()}")


def unit_test_element(R: QuotientRing, q0: int = 1, provenance: str = "regular-ring", note: str = "") -> TestElementAssumption:
    return TestElementAssumption(Polynomial.constant(R.sig, 1), q0, provenance, note)


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    sig = f.sig
    i = sig.index(var)
    p = sig.p
    terms = []
    for m, c in f.terms:
        e = list(m)
        if e[i] == 0 or (e[i] * c) % p == 0:
            continue
        coeff = e[i] * c % p
        e[i] -= 1
        terms.append((e, coeff))
    return Polynomial.from_terms(sig, terms)


def jacobian_test_element(R: QuotientRing, var: str, note: str = "") -> TestElementAssumption:
    """``c = ∂f/∂var`` (made monic) for a hypersurface ``R = F_p[x]/(f)``."""
    if len(R.defining.gens) != 1:
        raise PreconditionError("Jacobian test element requires a hypersurface")
    d = partial_derivative(R.defining.gens[0], var)
    if not d:
        raise AssumptionError(f"partial derivative by {var} vanishes")
    return TestElementAssumption(d.monic(), 1, "jacobian-hypersurface", note or f"monic partial derivative by {var}")


# ---------------------------------------------------------------------------


@dataclass
class ClosureVerdict:
    """``tag`` ∈ In/Out/Unknown.

    In carries ``rule`` ∈ Member, FrobeniusClosure, RegularColonRule,
    MinimalPrimeReduction.  Out carries the witness power ``q`` and the
    rule that produced it (Scan, RegularColonRule, MinimalPrimeReduction).
    Unknown carries the exhausted bound ``q``.
    """

    tag: str
    rule: str
    q: int
    assumptions: List[str] = field(default_factory=list)
    claims: List[dict] = field(default_factory=list)
    detail: Dict = field(default_factory=dict)

    @property
    def is_in(self) -> bool:
        return self.tag == "In"

    @property
    def is_out(self) -> bool:
        return self.tag == "Out"

    @property
    def unconditional(self) -> bool:
        return self.tag != "Unknown" and not self.assumptions

    def label(self) -> str:
        if self.tag == "Unknown":
            return f"Unknown(Q={self.q})"
        if self.rule == "FrobeniusClosure":
            return f"In(FrobeniusClosure(q={self.q}))"
        if self.tag == "In":
            return f"In({self.rule})"
        return f"Out(q={self.q}, {self.rule})"

    def to_json(self) -> dict:
        d = {"tag": self.tag, "rule": self.rule, "q": self.q, "assumptions": list(self.assumptions)}
        if self.detail:
            d["detail"] = self.detail
        d["claims"] = self.claims
        return d

    def __repr__(self):
        return self.label()


def _in(rule, q, claims, assumptions=()) -> ClosureVerdict:
    return ClosureVerdict("In", rule, q, list(assumptions), claims)


def frobenius_closure_membership(z: ModuleElement, N: Submodule, Q: int) -> Optional[int]:
    """Smallest ``q ≤ Q`` with ``z^q ∈ N^{[q]}_{F^e(M)}``, or ``None``."""
    M = N.module
    p = M.ring.p
    q, e = 1, 0
    while q <= Q:
        FM = frobenius_module(M, e)
        if bracket_submodule(N, e, FM).contains(frobenius_element(z, e, FM)):
            return q
        q *= p
        e += 1
    return None


class ClosureContext:
    """Caches ``N^{[q]}`` data for repeated queries against one ``(M, N, A)``."""

    def __init__(self, N: Submodule, A: TestElementAssumption, validate: bool = True):
        self.N = N
        self.M = N.module
        self.A = A
        R = self.M.ring
        if A.c.sig != R.sig:
            raise AssumptionError("test element from a different ring")
        if validate:
            A.validate(R)
        self._levels: Dict[int, Tuple[PresentedModule, Submodule]] = {}
        self._prime_subs: Dict[int, Submodule] = {}

    def level(self, e: int):
        if e not in self._levels:
            FM = frobenius_module(self.M, e)
            self._levels[e] = (FM, bracket_submodule(self.N, e, FM))
        return self._levels[e]

    def test_assumption(self) -> str:
        return self.A.describe()

    # exact rules -----------------------------------------------------------

    def member(self, z: ModuleElement) -> Optional[ClosureVerdict]:
        if self.N.contains(z):
            return _in("Member", 1, [certify.membership_claim(self.M, self.N.gens, z, True)])
        return None

    def regular_colon_rule(self, z: ModuleElement) -> Optional[ClosureVerdict]:
        R = self.M.ring
        if not R.is_linear_quotient():
            return None
        claims = [certify.linear_claim(certify.ring_json(R), R.defining.gens or ["0"]) if R.defining.gens else None,
                  certify.membership_claim(self.M, self.N.gens, z, False)]
        claims = [c for c in claims if c is not None]
        return ClosureVerdict("Out", "RegularColonRule", 1, [FACT_REGULAR], claims)

    def minimal_prime_reduction(self, z: ModuleElement) -> Optional[ClosureVerdict]:
        R = self.M.ring
        cert = R.minimal_primes
        if cert is None:
            return None
        base = [certify.minimal_primes_claim(R)]
        results = []
        for i, (P, flag) in enumerate(zip(cert.primes, cert.flags)):
            sub = self._prime_sub(i)
            inside = sub.contains(z)
            results.append((i, P, flag, inside))
            if flag == "structural" and not inside:
                claims = base + [
                    certify.linear_claim(certify.ring_json(R), P.gens),
                    certify.membership_claim(self.M, self.N.gens, z, False, extra=P.gens,
                                             note=f"image modulo minimal prime {i}"),
                ]
                v = ClosureVerdict("Out", "MinimalPrimeReduction", 1, [FACT_PERSISTENCE, FACT_REGULAR], claims,
                                   {"prime": [str(g) for g in P.gens]})
                return v
        if all(flag == "structural" and inside for _, _, flag, inside in results):
            claims = base + [certify.linear_claim(certify.ring_json(R), P.gens) for P in cert.primes]
            claims += [certify.membership_claim(self.M, self.N.gens, z, True, extra=P.gens,
                                                note=f"image modulo minimal prime {i}")
                       for i, P in enumerate(cert.primes)]
            return _in("MinimalPrimeReduction", 1, claims, [FACT_MINPRIMES, FACT_REGULAR])
        return None

    def _prime_sub(self, i: int) -> Submodule:
        if i not in self._prime_subs:
            P = self.M.ring.minimal_primes.primes[i]
            gens = list(self.N.gens)
            for a in P.gens:
                gens.extend(self.M.basis(j).scale(a) for j in range(self.M.rank))
            self._prime_subs[i] = Submodule(self.M, gens)
        return self._prime_subs[i]

    # q-scan ----------------------------------------------------------------

    def frobenius_step(self, z: ModuleElement, e: int) -> Optional[ClosureVerdict]:
        FM, Nq = self.level(e)
        zq = frobenius_element(z, e, FM)
        q = self.M.ring.p ** e
        if Nq.contains(zq):
            claims = [certify.membership_claim(self.M, self.N.gens, z, True, q=q)]
            return _in("FrobeniusClosure", q, claims)
        return None

    def scan_step(self, z: ModuleElement, e: int) -> Optional[ClosureVerdict]:
        q = self.M.ring.p ** e
        if q < self.A.q0:
            return None
        FM, Nq = self.level(e)
        w = frobenius_element(z, e, FM).scale(self.A.c)
        if Nq.contains(w):
            return None
        claims = [certify.membership_claim(self.M, self.N.gens, z, False, mult=self.A.c, q=q)]
        return ClosureVerdict("Out", "Scan", q, [self.test_assumption()], claims)

    def membership(self, z: ModuleElement, Q: int, exhaustive: bool = False) -> ClosureVerdict:
        """Member, FrobeniusClosure, RegularColonRule, MinimalPrimeReduction, then the scan.

        FC and the scan walk the same levels together.  A scan Out at ``q``
        means ``z`` is outside the closure under the declared test element,
        so no later level can put ``z`` in the Frobenius closure; the walk
        stops there.  Exhaustive mode runs every rule and every level and
        raises on any In/Out clash.
        """
        p = self.M.ring.p
        if Q < self.A.q0 or not is_power_of(Q, p):
            raise PreconditionError(f"bound Q = {Q} must be a power of {p} and at least q0 = {self.A.q0}")
        if z.module is not self.M:
            raise PreconditionError("element of a different module")
        member = self.member(z)
        if member and not exhaustive:
            return member
        # over a regular ring Frobenius is flat, so z^q in N^[q] iff z in N
        linear = self.M.ring.is_linear_quotient()
        rcr = self.regular_colon_rule(z) if linear and member is None else None
        if rcr and not exhaustive:
            return rcr
        fc = out = None
        q, e = 1, 0
        while q <= Q:
            if fc is None and not linear:
                fc = self.frobenius_step(z, e)
            if out is None:
                out = self.scan_step(z, e)
            if fc and out:
                raise InconsistencyError(f"element {z} certified both {fc.label()} and {out.label()}")
            if not exhaustive and (fc or out):
                break
            q *= p
            e += 1
        if fc and not exhaustive:
            return fc
        mpr = self.minimal_prime_reduction(z)
        found = [v for v in (member, fc, rcr, mpr, out) if v is not None]
        ins = [v for v in found if v.is_in]
        outs = [v for v in found if v.is_out]
        if ins and outs:
            raise InconsistencyError(f"element {z} certified both {ins[0].label()} and {outs[0].label()}")
        return found[0] if found else ClosureVerdict("Unknown", "", Q)

    def batch(self, zs: Sequence[ModuleElement], Q: int, stop_on_out: bool = True) -> List[Optional[ClosureVerdict]]:
        """Verdicts for several elements.

        With ``stop_on_out``, work stops at the first Out; elements not yet
        decided are left as ``None``.
        """
        out: List[Optional[ClosureVerdict]] = [None] * len(zs)
        for i, z in enumerate(zs):
            out[i] = self.membership(z, Q)
            if out[i].is_out and stop_on_out:
                return out
        return out


def tc_membership(z: ModuleElement, N: Submodule, A: TestElementAssumption, Q: int,
                  exhaustive: bool = False) -> ClosureVerdict:
    """Is ``z ∈ N^*_M``?  In, Out (with witness ``q``) or Unknown at bound ``Q``."""
    return ClosureContext(N, A).membership(z, Q, exhaustive)


# ---------------------------------------------------------------------------


def candidate_pool(M: PresentedModule, E: int = 1) -> List[ModuleElement]:
    """Basis vectors, generators of ``0 :_M x^{p^e}`` for each variable and ``e ≤ E``, and nilpotent multiples."""
    R = M.ring
    seen = []
    zero = M.zero_submodule()

    def push(z):
        if not z.is_zero() and z not in seen:
            seen.append(z)

    for i in range(M.rank):
        push(M.basis(i))
    for x in R.variables:
        for e in range(E + 1):
            for g in colon_annihilator(zero, x.frobenius(e)).gens:
                push(g)
        if R.defining.gens and groebner.radical_membership(x, R.defining):
            for i in range(M.rank):
                push(M.basis(i).scale(x))
    return seen


@dataclass
class ZeroClosureApprox:
    module: PresentedModule
    inner: Submodule
    table: List[Tuple[ModuleElement, ClosureVerdict]]

    def to_json(self) -> dict:
        return {"inner": self.inner.text(),
                "candidates": [{"element": z.text(), "verdict": v.to_json()} for z, v in self.table]}


def tc_zero_submodule_approx(M: PresentedModule, A: TestElementAssumption, Q: int, E: int = 1) -> ZeroClosureApprox:
    """Inner approximation of ``0^*_M`` from In-certified pool candidates, with the full verdict table."""
    ctx = ClosureContext(M.zero_submodule(), A)
    table = []
    inner = []
    for z in candidate_pool(M, E):
        v = ctx.membership(z, Q)
        table.append((z, v))
        if v.is_in:
            inner.append(z)
    return ZeroClosureApprox(M, Submodule(M, inner), table)
