"""Koszul complexes on presented modules and phantomness of their homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .closure import ClosureContext, ClosureVerdict, TestElementAssumption
from .errors import InconsistencyError
from .frobenius import frobenius_module
from .modules import ModuleElement, PresentedModule, Submodule, _shift_pos
from .phantom import phantom_sequence_check
from .poly import Polynomial, t_add, t_mul


class KoszulComplex:
    """``K(x; M)``: ``C_i = Λ^i ⊗ M`` with lexicographic exterior basis.

    ``d(e_S ⊗ m) = Σ_j (-1)^j x_{s_j} e_{S∖s_j} ⊗ m`` for ``S = (s_0 < s_1 < ...)``.
    """

    def __init__(self, xs: Sequence[Polynomial], M: PresentedModule):
        if not xs:
            raise ValueError("empty sequence")
        self.xs = [M.ring.poly(x) for x in xs]
        self.M = M
        k = len(self.xs)
        self.length = k
        self.subsets = [list(combinations(range(k), i)) for i in range(k + 1)]
        self.chains = [self._chain_module(i) for i in range(k + 1)]
        for i in range(2, k + 1):
            self._assert_dd(i)

    def _chain_module(self, i: int) -> PresentedModule:
        M = self.M
        r = M.rank
        rels = []
        for b in range(len(self.subsets[i])):
            for col in M.relations:
                full = [Polynomial.zero(M.sig)] * (r * len(self.subsets[i]))
                full[b * r:(b + 1) * r] = list(col)
                rels.append(full)
        return PresentedModule(M.ring, r * len(self.subsets[i]), rels)

    def rank(self, i: int) -> int:
        if i < 0 or i > self.length:
            return 0
        return self.chains[i].rank

    def image_vec(self, i: int, v: dict) -> dict:
        """``d_i`` applied to a vector of ``C_i`` (term dict), as a vector of ``C_{i-1}``."""
        r = self.M.rank
        p = self.M.sig.p
        index = {S: b for b, S in enumerate(self.subsets[i - 1])}
        out: dict = {}
        for key, c in v.items():
            b, a = divmod(key[0], r)
            S = self.subsets[i][b]
            for j, s in enumerate(S):
                T = S[:j] + S[j + 1:]
                sign = c if j % 2 == 0 else (p - c) % p
                term = {(index[T] * r + a,) + key[1:]: sign}
                out = t_add(out, t_mul(self.xs[s]._d, term, p), p)
        return out

    def differential_columns(self, i: int) -> List[dict]:
        """Images of the ambient basis of ``C_i`` under ``d_i``."""
        one = self.M.sig.mo.one()
        return [self.image_vec(i, {(n,) + one[1:]: 1}) for n in range(self.rank(i))]

    def apply(self, i: int, z: ModuleElement) -> ModuleElement:
        return self.chains[i - 1].from_vec(self.image_vec(i, z.vec))

    def _assert_dd(self, i: int) -> None:
        target = self.chains[i - 2]
        for col in self.differential_columns(i):
            if target.reduce_vec(self.image_vec(i - 1, col)):
                raise InconsistencyError(f"d_{i - 1} ∘ d_{i} ≠ 0")

    def cycles(self, i: int) -> Submodule:
        if i < 0 or i > self.length:
            raise IndexError("homological index out of range")
        C = self.chains[i]
        if i == 0:
            return Submodule(C, [C.basis(n) for n in range(C.rank)])
        from .groebner import _syzygy_dicts
        target = self.chains[i - 1]
        syz = _syzygy_dicts(self.differential_columns(i), target.all_relation_vecs(), target.rank, C.sig)
        return Submodule(C, [C.from_vec(s) for s in syz])

    def boundaries(self, i: int) -> Submodule:
        if i < 0 or i > self.length:
            raise IndexError("homological index out of range")
        C = self.chains[i]
        if i == self.length:
            return C.zero_submodule()
        return Submodule(C, [C.from_vec(v) for v in self.differential_columns(i + 1)])


def koszul_complex_build(xs: Sequence, M: PresentedModule) -> KoszulComplex:
    return KoszulComplex([M.ring.poly(x) for x in xs], M)


def koszul_homology_generators(K: KoszulComplex, i: int) -> Tuple[Submodule, Submodule]:
    return K.cycles(i), K.boundaries(i)


@dataclass
class HomologyVerdict:
    i: int
    status: str  # phantom-certified | not-phantom-certified | unknown
    verdicts: List[Tuple[ModuleElement, ClosureVerdict]] = field(default_factory=list)

    def witness(self) -> Optional[Tuple[ModuleElement, ClosureVerdict]]:
        for z, v in self.verdicts:
            if v.is_out:
                return z, v
        return None

    def to_json(self) -> dict:
        return {"i": self.i, "status": self.status,
                "cycles": [{"element": z.text(), **v.to_json()} for z, v in self.verdicts]}


def phantom_homology_verdict(K: KoszulComplex, i: int, A: TestElementAssumption, Q: int,
                             extra: Sequence[ModuleElement] = ()) -> HomologyVerdict:
    """Is ``Z_i ⊆ (B_i)^*_{C_i}``?  ``extra`` cycles are tried first (e.g. a known witness)."""
    Z, B = koszul_homology_generators(K, i)
    ctx = ClosureContext(B, A, validate=False)
    zs = list(extra) + [g for g in Z.gens if g not in extra]
    vs = ctx.batch(zs, Q, stop_on_out=True)
    pairs = [(z, v) for z, v in zip(zs, vs) if v is not None]
    if any(v.is_out for _, v in pairs):
        status = "not-phantom-certified"
    elif len(pairs) == len(zs) and all(v.is_in for _, v in pairs):
        status = "phantom-certified"
    else:
        status = "unknown"
    return HomologyVerdict(i, status, pairs)


@dataclass
class CrosscheckReport:
    xs: List[str]
    condition1: str  # refuted | certified | not-refuted
    condition2: List[HomologyVerdict]
    condition3: List[List[HomologyVerdict]]
    refuted_position: Optional[int]
    shared_witness: Optional[dict]
    agreement: bool

    @property
    def condition2_status(self) -> str:
        st = [h.status for h in self.condition2]
        if "not-phantom-certified" in st:
            return "refuted"
        return "certified" if all(s == "phantom-certified" for s in st) else "unknown"

    def to_json(self) -> dict:
        return {"sequence": self.xs, "condition1": self.condition1, "condition2": self.condition2_status,
                "H1": [h.to_json() for h in self.condition2],
                "Hj": [[h.to_json() for h in row] for row in self.condition3],
                "refuted_position": self.refuted_position, "shared_witness": self.shared_witness,
                "agreement": self.agreement}


def lift_colon_witness(K: KoszulComplex, i: int, w: ModuleElement) -> Optional[ModuleElement]:
    """Cycle ``w̃ e_i - Σ_{j<i} a_j e_j`` of ``K_1`` from ``w`` with ``x_i w ∈ (x_1..x_{i-1})`` modulo the presentation."""
    from .modules import lift_to_generators
    FM = K.M
    r = FM.rank
    wt = FM.from_vec(dict(w.vec))
    gens, owners = [], []
    for j in range(i):
        for a in range(r):
            g = FM.basis(a).scale(K.xs[j])
            if not g.is_zero():
                gens.append(g)
                owners.append((j, a))
    coeffs = lift_to_generators(wt.scale(K.xs[i]), Submodule(FM, gens)) if gens else []
    if coeffs is None:
        return None
    C1 = K.chains[1]
    p = FM.sig.p
    vec = _shift_pos(wt.vec, i * r)
    for (j, a), c in zip(owners, coeffs):
        if c:
            vec = t_add(vec, {(j * r + a,) + k[1:]: (p - v) % p for k, v in c._d.items()}, p)
    z = C1.from_vec(vec)
    return z if K.apply(1, z).is_zero() else None


def shared_witness_search(xs: Sequence[Polynomial], M: PresentedModule, i: int, A: TestElementAssumption,
                          E: int, Q: int) -> Optional[dict]:
    """A level ``e`` where ``x_i`` has an Out-certified colon witness whose lifted cycle is Out in ``H_1``."""
    from .modules import colon_annihilator, quotient_by_elements
    for e in range(E + 1):
        FM = frobenius_module(M, e)
        xq = [x.frobenius(e) for x in xs]
        Mi = quotient_by_elements(FM, xq[:i]) if i else FM
        ctx = ClosureContext(Mi.zero_submodule(), A, validate=False)
        C = colon_annihilator(Mi.zero_submodule(), xq[i])
        K = KoszulComplex(xq, FM)
        kctx = ClosureContext(K.boundaries(1), A, validate=False)
        for w, v in zip(C.gens, ctx.batch(C.gens, Q, stop_on_out=False)):
            if v is None or not v.is_out:
                continue
            z = lift_colon_witness(K, i, w)
            if z is None:
                continue
            hv = kctx.membership(z, Q)
            if hv.is_out:
                return {"e": e, "position": i, "colon_witness": w.text(), "colon_verdict": v.to_json(),
                        "cycle": z.text(), "cycle_verdict": hv.to_json()}
    return None


def koszul_criterion_crosscheck(xs: Sequence, M: PresentedModule, A: TestElementAssumption, E: int = 2,
                                Q: Optional[int] = None, all_j: bool = True) -> CrosscheckReport:
    """Evaluate (1) phantom regularity, (2) phantomness of ``H_1(x^{[q]}; F^e(M))`` and
    (3) of all ``H_j`` for ``e ≤ E``.

    The equivalence is a statement over all ``e``; refutations of (1) and
    (2) need not occur at the same level.  A disagreement in the certified
    direction is one side refuted while the other is certified at every
    level ``e ≤ E``.  For a single element ``H_1`` is the colon itself, so a
    level-wise mismatch there is a genuine contradiction and raises.
    """
    R = M.ring
    Q = Q if Q is not None else R.p ** 3
    xs = [R.poly(x) for x in xs]
    seq = phantom_sequence_check(xs, M, A, E, Q)
    refuted = next((i for i, v in enumerate(seq) if v.refuted), None)
    if refuted is not None:
        c1 = "refuted"
    elif all(v.evidence in ("regular", "certified") for v in seq):
        c1 = "certified"
    else:
        c1 = "not-refuted"
    H1, Hj = [], []
    for e in range(E + 1):
        FM = frobenius_module(M, e)
        K = KoszulComplex([x.frobenius(e) for x in xs], FM)
        h1 = phantom_homology_verdict(K, 1, A, Q)
        H1.append(h1)
        if all_j:
            Hj.append([h1] + [phantom_homology_verdict(K, j, A, Q) for j in range(2, K.length + 1)])
        if len(xs) == 1 and seq[0].levels[e:e + 1]:
            lv = seq[0].levels[e].status
            if (lv == "refuted" and h1.status == "phantom-certified") or \
                    (lv in ("zero", "certified") and h1.status == "not-phantom-certified"):
                raise InconsistencyError(f"level {e}: colon and H_1 verdicts disagree for {xs[0]}")
    shared = shared_witness_search(xs, M, refuted, A, E, Q) if refuted is not None else None
    rep = CrosscheckReport([str(x) for x in xs], c1, H1, Hj, refuted, shared, True)
    c2 = rep.condition2_status
    if (c1 == "refuted" and c2 == "certified") or (c1 == "certified" and c2 == "refuted"):
        rep.agreement = False
    if all_j and c2 == "certified" and any(h.status == "not-phantom-certified" for row in Hj for h in row):
        rep.agreement = False
    return rep
