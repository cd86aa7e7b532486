"""Buchberger kernel on term dicts keyed by position-over-term order keys.

Ideals are rank-1 submodules (every key has position 0), so a single
implementation serves both.  All routines take the ``MonomialOrder`` and the
characteristic explicitly and never look at variable names.
"""

from __future__ import annotations

import heapq
from operator import add, sub
from typing import List, Optional, Sequence

from .errors import BudgetExceeded
from .poly import Key, MonomialOrder, TermDict

DEFAULT_PAIR_LIMIT = 200_000


def monic(f: TermDict, p: int) -> TermDict:
    lc = f[min(f)]
    if lc == 1:
        return f
    inv = pow(lc, -1, p)
    return {k: c * inv % p for k, c in f.items()}


class Reducer:
    """Indexed list of monic divisors, looked up by leading key."""

    def __init__(self, mo: MonomialOrder, polys: Sequence[TermDict] = ()):
        self.mo = mo
        self.by_pos: dict = {}
        self.polys: List[TermDict] = []
        for f in polys:
            self.add(f)

    def add(self, f: TermDict) -> None:
        lk = min(f)
        tail = [(k, c) for k, c in f.items() if k != lk]
        self.by_pos.setdefault(lk[0], []).append((lk, tail))
        self.polys.append(f)

    def find(self, m: Key):
        divides = self.mo.divides
        for lk, tail in self.by_pos.get(m[0], ()):
            if divides(lk, m):
                return lk, tail
        return None


def reduce_full(h: TermDict, red: Reducer, p: int) -> TermDict:
    """Remainder of full multivariate division of ``h`` by monic divisors."""
    if not h or not red.polys:
        return dict(h)
    h = dict(h)
    heap = list(h)
    heapq.heapify(heap)
    rem: TermDict = {}
    pop, push, get = heapq.heappop, heapq.heappush, h.get
    find = red.find
    while heap:
        m = pop(heap)
        c = get(m)
        if c is None:
            continue
        del h[m]
        hit = find(m)
        if hit is None:
            rem[m] = c
            continue
        lk, tail = hit
        shift = tuple(map(sub, m, lk))
        for k, ck in tail:
            nk = tuple(map(add, k, shift))
            v = get(nk)
            if v is None:
                h[nk] = (-c * ck) % p
                push(heap, nk)
            else:
                v = (v - c * ck) % p
                if v:
                    h[nk] = v
                else:
                    del h[nk]
    return rem


def reduce_top(h: TermDict, red: Reducer, p: int) -> TermDict:
    """Reduce only until the leading term is irreducible."""
    h = dict(h)
    find = red.find
    get = h.get
    while h:
        m = min(h)
        hit = find(m)
        if hit is None:
            return h
        c = h.pop(m)
        lk, tail = hit
        shift = tuple(map(sub, m, lk))
        for k, ck in tail:
            nk = tuple(map(add, k, shift))
            v = ((get(nk) or 0) - c * ck) % p
            if v:
                h[nk] = v
            else:
                h.pop(nk, None)
    return h


def _spoly(f: TermDict, g: TermDict, lf: Key, lg: Key, lcm: Key, p: int) -> TermDict:
    sf = tuple(map(sub, lcm, lf))
    sg = tuple(map(sub, lcm, lg))
    out: TermDict = {}
    for k, c in f.items():
        if k != lf:
            out[tuple(map(add, k, sf))] = c
    for k, c in g.items():
        if k == lg:
            continue
        nk = tuple(map(add, k, sg))
        v = (out.get(nk, 0) - c) % p
        if v:
            out[nk] = v
        else:
            out.pop(nk, None)
    return out


def interreduce(G: List[TermDict], mo: MonomialOrder, p: int) -> List[TermDict]:
    """Reduced basis from a Groebner basis: drop redundant leads, tail-reduce, sort."""
    G = [monic(g, p) for g in G if g]
    G.sort(key=min)
    leads = [min(g) for g in G]
    keep = []
    for i, g in enumerate(G):
        li = leads[i]
        if any(j != i and mo.divides(leads[j], li) and (leads[j] != li or j < i) for j in range(len(G))):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = Reducer(mo, keep[:i] + keep[i + 1:])
        lk = min(g)
        tail = {k: c for k, c in g.items() if k != lk}
        r = reduce_full(tail, others, p) if tail else {}
        r[lk] = 1
        out.append(r)
    out.sort(key=min)
    return out


def _sugar(f: TermDict, mo: MonomialOrder) -> int:
    return max(mo.degree(k) for k in f)


def buchberger(gens: Sequence[TermDict], mo: MonomialOrder, p: int,
               pair_limit: int = DEFAULT_PAIR_LIMIT, rank_one: Optional[bool] = None) -> List[TermDict]:
    """Reduced Groebner basis via Buchberger with sugar selection.

    The product criterion is used only for ideals (it is false for modules);
    the Gebauer-Moeller chain criterion is used throughout.
    """
    work = [monic(dict(g), p) for g in gens if g]
    if not work:
        return []
    if rank_one is None:
        rank_one = all(k[0] == 0 for g in work for k in g)
    # start from an interreduced input to keep the basis small
    work.sort(key=lambda f: (_sugar(f, mo), min(f)))
    G: List[TermDict] = []
    leads: List[Key] = []
    sugars: List[int] = []
    live: List[bool] = []
    pairs: list = []  # heap of (sugar, lcm, i, j)
    red = Reducer(mo)
    examined = 0

    def insert(h: TermDict, sugar: int) -> None:
        lh = min(h)
        t = len(G)
        # Gebauer-Moeller update
        cand = []
        for i in range(t):
            if live[i] and leads[i][0] == lh[0]:
                lcm = mo.lcm(leads[i], lh)
                cand.append((i, lcm))
        # criterion M / F: drop candidate pairs whose lcm is divisible by another candidate's lcm
        kept = []
        for idx, (i, lcm) in enumerate(cand):
            dominated = False
            for jdx, (j, lcm2) in enumerate(cand):
                if jdx == idx:
                    continue
                if mo.divides(lcm2, lcm) and (lcm2 != lcm or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                kept.append((i, lcm))
        new_pairs = []
        for i, lcm in kept:
            if rank_one and mo.coprime(leads[i], lh):
                continue
            si = sugars[i] + mo.degree(lcm) - mo.degree(leads[i])
            sh = sugar + mo.degree(lcm) - mo.degree(lh)
            new_pairs.append((max(si, sh), lcm, i, t))
        # criterion B: old pairs (i,j) with lh | lcm(i,j) and lcm(i,h), lcm(j,h) both != lcm(i,j)
        if pairs:
            filtered = []
            for pr in pairs:
                _, lcm, i, j = pr
                if mo.divides(lh, lcm):
                    lih = mo.lcm(leads[i], lh)
                    ljh = mo.lcm(leads[j], lh)
                    if lih != lcm and ljh != lcm:
                        continue
                filtered.append(pr)
            if len(filtered) != len(pairs):
                pairs[:] = filtered
                heapq.heapify(pairs)
        for pr in new_pairs:
            heapq.heappush(pairs, pr)
        G.append(h)
        leads.append(lh)
        sugars.append(sugar)
        live.append(True)
        for i in range(t):
            if live[i] and mo.divides(lh, leads[i]):
                live[i] = False
        red.add(h)

    for f in work:
        h = reduce_top(f, red, p) if red.polys else f
        if h:
            insert(monic(h, p), _sugar(f, mo))
    while pairs:
        examined += 1
        if examined > pair_limit:
            raise BudgetExceeded(f"Groebner pair limit {pair_limit} exceeded")
        sugar, lcm, i, j = heapq.heappop(pairs)
        s = _spoly(G[i], G[j], leads[i], leads[j], lcm, p)
        if not s:
            continue
        h = reduce_top(s, red, p)
        if h:
            insert(monic(h, p), sugar)
    return interreduce([g for g, ok in zip(G, live) if ok], mo, p)


def is_groebner(G: Sequence[TermDict], mo: MonomialOrder, p: int) -> bool:
    """Independent check: every S-polynomial reduces to zero."""
    red = Reducer(mo, [monic(g, p) for g in G])
    Gm = red.polys
    for a in range(len(Gm)):
        for b in range(a + 1, len(Gm)):
            la, lb = min(Gm[a]), min(Gm[b])
            if la[0] != lb[0]:
                continue
            s = _spoly(Gm[a], Gm[b], la, lb, mo.lcm(la, lb), p)
            if s and reduce_full(s, red, p):
                return False
    return True
