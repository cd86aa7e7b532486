"""Ideal arithmetic in ``F_p[x]``: Groebner bases, colon, intersection, radicals, dimension."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, List, Optional, Sequence

from . import kernel
from .errors import CertificationError, SignatureMismatch
from .poly import Polynomial, RingSignature, TermDict

PAIR_LIMIT = kernel.DEFAULT_PAIR_LIMIT


def set_pair_limit(n: int) -> None:
    global PAIR_LIMIT
    PAIR_LIMIT = n


class Ideal:
    """Ideal of ``F_p[sig.vars]`` given by generators; the reduced basis is cached."""

    def __init__(self, sig: RingSignature, gens: Iterable[Polynomial] = ()):
        self.sig = sig
        gens = list(gens)
        for g in gens:
            if g.sig != sig:
                raise SignatureMismatch("generator from a different ring")
        self.gens: List[Polynomial] = [g for g in gens if g]
        self._gb: Optional[List[Polynomial]] = None
        self._red: Optional[kernel.Reducer] = None

    @classmethod
    def from_gb(cls, sig: RingSignature, gb: Sequence[Polynomial]) -> "Ideal":
        I = cls(sig, gb)
        I._gb = list(gb)
        return I

    @property
    def gb(self) -> List[Polynomial]:
        if self._gb is None:
            dicts = kernel.buchberger([g._d for g in self.gens], self.sig.mo, self.sig.p,
                                      pair_limit=PAIR_LIMIT, rank_one=True)
            self._gb = [Polynomial(self.sig, d) for d in dicts]
        return self._gb

    def reducer(self) -> kernel.Reducer:
        if self._red is None:
            self._red = kernel.Reducer(self.sig.mo, [g._d for g in self.gb])
        return self._red

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.sig != self.sig:
            raise SignatureMismatch("element from a different ring")
        return Polynomial(self.sig, kernel.reduce_full(f._d, self.reducer(), self.sig.p))

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.gb)

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def same_ideal(self, other: "Ideal") -> bool:
        return self.sig == other.sig and self.gb == other.gb

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.sig != self.sig:
            raise SignatureMismatch("ideals in different rings")
        return Ideal(self.sig, self.gens + other.gens)

    def lead_keys(self):
        return [g.lead_key() for g in self.gb]

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.gens) + ")"


def groebner_basis(I: Ideal) -> Ideal:
    I.gb
    return I


def normal_form(f: Polynomial, I: Ideal) -> Polynomial:
    return I.reduce(f)


def verify_groebner(I: Ideal) -> bool:
    """S-pair criterion plus reduction of every input generator to zero."""
    G = [g._d for g in I.gb]
    if not kernel.is_groebner(G, I.sig.mo, I.sig.p):
        return False
    red = kernel.Reducer(I.sig.mo, G)
    return all(not kernel.reduce_full(g._d, red, I.sig.p) for g in I.gens)


# ---------------------------------------------------------------------------
# syzygy-based operations on rank-1 data


def _syzygy_dicts(vectors: Sequence[TermDict], extra: Sequence[TermDict], rank: int,
                  sig: RingSignature) -> List[TermDict]:
    """Generators of ``{a : sum a_i v_i in <extra>}`` for vectors in ``P^rank``.

    Runs Buchberger on ``(v_i | e_i)`` and ``(w | 0)`` in ``P^(rank+m)`` with
    position-over-term, which eliminates the first ``rank`` components.
    """
    rows = []
    one = sig.mo.one()
    for i, v in enumerate(vectors):
        row = dict(v)
        row[(rank + i,) + one[1:]] = 1
        rows.append(row)
    rows.extend(dict(w) for w in extra if w)
    G = kernel.buchberger(rows, sig.mo, sig.p, pair_limit=PAIR_LIMIT, rank_one=False)
    out = []
    for g in G:
        if min(g)[0] >= rank:
            out.append({(k[0] - rank,) + k[1:]: c for k, c in g.items()})
    return out


def colon_ideal(I: Ideal, f: Polynomial) -> Ideal:
    """``(I : f)`` via syzygies of ``f`` against the generators of ``I``."""
    if not f:
        raise ValueError("colon by the zero polynomial")
    if f.sig != I.sig:
        raise SignatureMismatch("element from a different ring")
    syz = _syzygy_dicts([f._d], [g._d for g in I.gb], 1, I.sig)
    return Ideal(I.sig, [Polynomial(I.sig, d) for d in syz])


def intersect_ideals(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` as the syzygies of ``(1, 1)`` modulo ``I ⊕ J``."""
    if I.sig != J.sig:
        raise SignatureMismatch("ideals in different rings")
    sig = I.sig
    one = sig.mo.one()
    v = {one: 1, (1,) + one[1:]: 1}
    extra = [dict(g._d) for g in I.gb]
    extra += [{(1,) + k[1:]: c for k, c in g._d.items()} for g in J.gb]
    syz = _syzygy_dicts([v], extra, 2, sig)
    return Ideal(sig, [Polynomial(sig, d) for d in syz])


def bracket_power_ideal(I: Ideal, e: int) -> Ideal:
    """Ideal generated by the ``q``-th powers of the listed generators."""
    if e < 0:
        raise ValueError("negative Frobenius exponent")
    return Ideal(I.sig, [g.frobenius(e) for g in I.gens])


def radical_membership(f: Polynomial, I: Ideal) -> bool:
    """Rabinowitsch: ``f`` is in the radical iff ``1 ∈ I + (1 - t f)``."""
    sig = I.sig
    t, k = "t", 0
    while t in sig.vars:
        k += 1
        t = f"t{k}x"
    big = sig.extend([t])
    tv = Polynomial.var(big, t)
    gens = [embed(g, big) for g in I.gens] + [Polynomial.constant(big, 1) - tv * embed(f, big)]
    return Ideal(big, gens).is_unit()


def embed(f: Polynomial, big: RingSignature) -> Polynomial:
    """Map a polynomial into a signature whose variables contain all of ``f``'s."""
    if f.sig == big:
        return f
    small = f.sig
    if small.p != big.p:
        raise SignatureMismatch("different characteristics")
    idx = [big.index(v) for v in small.vars]
    mo_s, mo_b = small.mo, big.mo
    out = {}
    for k, c in f._d.items():
        e = [0] * big.n
        for i, x in zip(idx, mo_s.exps(k)):
            e[i] = x
        out[mo_b.key(e, k[0])] = c
    return Polynomial(big, out)


def restrict(f: Polynomial, small: RingSignature) -> Polynomial:
    """Inverse of ``embed`` for polynomials that only involve ``small``'s variables."""
    big = f.sig
    idx = [big.index(v) for v in small.vars]
    out = {}
    for k, c in f._d.items():
        e = big.mo.exps(k)
        if any(x for i, x in enumerate(e) if i not in idx):
            raise SignatureMismatch("polynomial uses variables outside the target ring")
        out[small.mo.key([e[i] for i in idx], k[0])] = c
    return Polynomial(small, out)


def krull_dimension(Q: Ideal) -> int:
    """``dim F_p[x]/Q``: largest variable set independent modulo the lead ideal."""
    if Q.is_unit():
        return -1
    sig = Q.sig
    n = sig.n
    supports = []
    for g in Q.gb:
        m = g.lead_monomial()
        supports.append(frozenset(i for i, e in enumerate(m) if e))
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            Sset = frozenset(S)
            if not any(sup <= Sset for sup in supports):
                return size
    return 0


def is_linear_ideal(I: Ideal) -> bool:
    """All reduced-basis elements have degree ≤ 1 (the quotient is a polynomial ring)."""
    return not I.is_unit() and all(g.total_degree() <= 1 for g in I.gb)


# ---------------------------------------------------------------------------


@dataclass
class CertifiedMinimalPrimes:
    """Minimal primes of ``ideal`` with the evidence used to accept them."""

    ideal: Ideal
    primes: List[Ideal]
    flags: List[str]
    checks: List[str] = field(default_factory=list)

    @property
    def all_structural(self) -> bool:
        return all(f == "structural" for f in self.flags)

    def assumptions(self) -> List[str]:
        return [f"prime candidate {i} ({', '.join(map(str, P.gens))}) asserted prime"
                for i, (P, f) in enumerate(zip(self.primes, self.flags)) if f != "structural"]


def certify_minimal_primes(I: Ideal, candidates: Sequence[Ideal]) -> CertifiedMinimalPrimes:
    """Accept ``candidates`` as the minimal primes of ``I`` or name the failed check.

    Checks: ``I ⊆ p_i``; the candidates are pairwise incomparable; every
    generator of ``∩ p_i`` lies in ``√I``.  Candidates whose reduced basis is
    linear are flagged structural (linear quotients are polynomial rings,
    hence domains); others are recorded as asserted primes.
    """
    if not candidates:
        raise CertificationError("no candidate primes supplied")
    checks = []
    for i, P in enumerate(candidates):
        if P.sig != I.sig:
            raise CertificationError(f"candidate {i} lives in a different ring")
        if P.is_unit():
            raise CertificationError(f"candidate {i} is the unit ideal")
        for g in I.gens:
            if not P.contains(g):
                raise CertificationError(f"generator {g} of the ideal is not in candidate {i}")
    checks.append("ideal ⊆ every candidate")
    for i, j in combinations(range(len(candidates)), 2):
        if candidates[i].issubset(candidates[j]) or candidates[j].issubset(candidates[i]):
            raise CertificationError(f"candidates {i} and {j} are comparable; minimal primes are irredundant")
    checks.append("candidates pairwise incomparable")
    inter = candidates[0]
    for P in candidates[1:]:
        inter = intersect_ideals(inter, P)
    for g in inter.gb:
        if not radical_membership(g, I):
            raise CertificationError(f"generator {g} of the intersection is not in the radical of the ideal")
    checks.append("intersection of candidates ⊆ radical of ideal")
    flags = ["structural" if is_linear_ideal(P) else "asserted" for P in candidates]
    return CertifiedMinimalPrimes(I, list(candidates), flags, checks)
