"""Self-contained, re-checkable claims.

Every In/Out verdict and every depth certificate is backed by a list of
claims.  A claim carries the ring and module as text, so ``check_claim`` can
rebuild everything and decide it by direct normal-form computation without
running any search.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import groebner
from .errors import CertificationError, TightCalcError
from .frobenius import bracket_submodule, frobenius_element, frobenius_module
from .groebner import Ideal, is_linear_ideal, radical_membership
from .modules import ModuleElement, PresentedModule, QuotientRing, Submodule, colon_annihilator
from .poly import Polynomial, RingSignature, parse_poly


def ring_json(R: QuotientRing) -> dict:
    return R.describe()


def module_json(M: PresentedModule) -> dict:
    return M.describe()


def _texts(xs) -> List:
    out = []
    for x in xs:
        if isinstance(x, ModuleElement):
            out.append(x.text())
        elif isinstance(x, Polynomial):
            out.append(str(x))
        elif isinstance(x, (list, tuple)):
            out.append(_texts(x))
        else:
            out.append(x)
    return out


def log_p(q: int, p: int) -> int:
    e = 0
    while q > 1:
        if q % p:
            raise ValueError(f"{q} is not a power of {p}")
        q //= p
        e += 1
    return e


def membership_claim(M: PresentedModule, gens: Sequence, z, expect: bool, mult=None, q: int = 1,
                     extra: Sequence = (), note: str = "") -> dict:
    """``mult · z^{[q]} ∈ (gens)^{[q]} + extra · F^e(M)`` holds iff ``expect``."""
    c = {
        "claim": "membership",
        "ring": ring_json(M.ring),
        "module": module_json(M),
        "sub": _texts(gens),
        "element": z.text() if isinstance(z, ModuleElement) else list(z),
        "q": q,
        "mult": str(mult) if mult is not None else "1",
        "expect": expect,
    }
    if extra:
        c["extra"] = _texts(extra)
    if note:
        c["note"] = note
    return c


def frobenius_claim(M: PresentedModule, e: int, FM: PresentedModule) -> dict:
    return {"claim": "frobenius-presentation", "ring": ring_json(M.ring), "module": module_json(M),
            "e": e, "result": module_json(FM)}


def colon_claim(M: PresentedModule, f: Polynomial, gens: Sequence[ModuleElement], base: Sequence = ()) -> dict:
    """``gens`` generate ``(base :_M f)``."""
    return {"claim": "colon-generators", "ring": ring_json(M.ring), "module": module_json(M),
            "f": str(f), "base": _texts(base), "gens": _texts(gens)}


def minimal_primes_claim(R: QuotientRing) -> dict:
    cert = R.minimal_primes
    return {"claim": "minimal-primes", "ring": ring_json(R),
            "primes": [[str(g) for g in P.gens] for P in cert.primes],
            "flags": list(cert.flags)}


def linear_claim(ring_desc: dict, gens: Sequence) -> dict:
    """The ideal generated by ``gens`` has a linear reduced basis (hence a regular quotient)."""
    return {"claim": "linear-ideal", "ring": ring_desc, "gens": _texts(gens)}


def test_element_claim(R: QuotientRing, c: Polynomial) -> dict:
    return {"claim": "test-element-in-R0", "ring": ring_json(R), "c": str(c),
            "primes": ([[str(g) for g in P.gens] for P in R.minimal_primes.primes]
                       if R.minimal_primes is not None else None)}


def fedder_claim(sig: RingSignature, g: Polynomial, expect: bool) -> dict:
    return {"claim": "fedder", "p": sig.p, "vars": list(sig.vars), "g": str(g), "expect": expect}


def equality_claim(M: PresentedModule, A: Sequence, B: Sequence, note: str = "") -> dict:
    """Two generator lists span the same submodule of ``M``."""
    c = {"claim": "submodule-equality", "ring": ring_json(M.ring), "module": module_json(M),
         "left": _texts(A), "right": _texts(B)}
    if note:
        c["note"] = note
    return c


# ---------------------------------------------------------------------------
# verification


class ClaimChecker:
    """Rebuilds rings and modules from text (cached) and decides claims."""

    def __init__(self):
        self._rings: Dict[str, QuotientRing] = {}
        self._mods: Dict[Tuple[str, str], PresentedModule] = {}

    def ring(self, desc: dict) -> QuotientRing:
        key = json.dumps(desc, sort_keys=True)
        R = self._rings.get(key)
        if R is None:
            R = QuotientRing.parse(desc["p"], desc["vars"], desc.get("relations", ()), desc.get("order", "grevlex"))
            self._rings[key] = R
        return R

    def module(self, R: QuotientRing, rdesc: dict, mdesc: dict) -> PresentedModule:
        key = (json.dumps(rdesc, sort_keys=True), json.dumps(mdesc, sort_keys=True))
        M = self._mods.get(key)
        if M is None:
            M = PresentedModule(R, mdesc["rank"], [[R.poly(t) for t in col] for col in mdesc["relations"]])
            self._mods[key] = M
        return M

    def check(self, claim: dict) -> Tuple[bool, str]:
        kind = claim.get("claim")
        fn = getattr(self, "_check_" + str(kind).replace("-", "_"), None)
        if fn is None:
            return False, f"unknown claim kind {kind!r}"
        try:
            return fn(claim)
        except TightCalcError as exc:
            return False, f"{kind}: {exc}"

    def _ctx(self, claim):
        R = self.ring(claim["ring"])
        return R, self.module(R, claim["ring"], claim["module"])

    def _check_membership(self, c):
        R, M = self._ctx(c)
        q = c["q"]
        e = log_p(q, R.p)
        FM = frobenius_module(M, e)
        N = Submodule(M, [M.element(g) for g in c["sub"]])
        Nq = bracket_submodule(N, e, FM)
        gens = list(Nq.gens)
        for a in c.get("extra", ()):
            a = R.poly(a)
            gens.extend(FM.basis(i).scale(a) for i in range(FM.rank))
        target = Submodule(FM, gens)
        w = frobenius_element(M.element(c["element"]), e, FM).scale(R.poly(c["mult"]))
        got = target.contains(w)
        ok = got == c["expect"]
        return ok, "" if ok else f"membership expected {c['expect']}, found {got}"

    def _check_frobenius_presentation(self, c):
        R, M = self._ctx(c)
        FM = frobenius_module(M, c["e"])
        ok = module_json(FM) == c["result"]
        return ok, "" if ok else "Frobenius presentation differs"

    def _check_colon_generators(self, c):
        R, M = self._ctx(c)
        base = Submodule(M, [M.element(g) for g in c["base"]])
        C = colon_annihilator(base, R.poly(c["f"]))
        G = Submodule(M, [M.element(g) for g in c["gens"]])
        ok = C.issubset(G) and G.issubset(C)
        return ok, "" if ok else "recorded generators do not span the colon"

    def _check_submodule_equality(self, c):
        R, M = self._ctx(c)
        A = Submodule(M, [M.element(g) for g in c["left"]])
        B = Submodule(M, [M.element(g) for g in c["right"]])
        ok = A.issubset(B) and B.issubset(A)
        return ok, "" if ok else "submodules differ"

    def _check_minimal_primes(self, c):
        R = self.ring(c["ring"])
        try:
            cert = groebner.certify_minimal_primes(
                R.defining, [Ideal(R.sig, [R.poly(g) for g in P]) for P in c["primes"]])
        except CertificationError as exc:
            return False, str(exc)
        ok = cert.flags == c["flags"]
        return ok, "" if ok else "primality flags differ"

    def _check_linear_ideal(self, c):
        R = self.ring(c["ring"])
        I = Ideal(R.sig, [R.poly(g) for g in c["gens"]])
        ok = is_linear_ideal(I)
        return ok, "" if ok else "ideal is not generated by linear forms"

    def _check_test_element_in_R0(self, c):
        R = self.ring(c["ring"])
        f = R.poly(c["c"])
        if c["primes"] is None:
            ok = not radical_membership(f, R.defining) and groebner.colon_ideal(R.defining, f).same_ideal(R.defining) \
                if R.defining.gens else bool(f)
            return ok, "" if ok else "c is a zerodivisor"
        for P in c["primes"]:
            if Ideal(R.sig, [R.poly(g) for g in P]).contains(f):
                return False, "c lies in a minimal prime"
        return True, ""

    def _check_fedder(self, c):
        from .base_change import fedder_fpure_check
        sig = RingSignature(c["p"], tuple(c["vars"]))
        got = fedder_fpure_check(parse_poly(c["g"], sig), c["p"])
        ok = got == c["expect"]
        return ok, "" if ok else "Fedder criterion result differs"


def iter_claims(obj) -> Iterable[dict]:
    """All claim dicts nested anywhere inside a JSON-like structure."""
    if isinstance(obj, dict):
        if "claim" in obj and isinstance(obj.get("claim"), str):
            yield obj
            return
        for v in obj.values():
            yield from iter_claims(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from iter_claims(v)


def check_all(obj, checker: Optional[ClaimChecker] = None) -> Tuple[int, List[str]]:
    checker = checker or ClaimChecker()
    seen = set()
    count = 0
    failures = []
    for claim in iter_claims(obj):
        key = json.dumps(claim, sort_keys=True)
        if key in seen:
            continue
        seen.add(key)
        count += 1
        ok, msg = checker.check(claim)
        if not ok:
            failures.append(f"{claim['claim']}: {msg}")
    return count, failures
