"""Finitely presented modules over quotient rings ``R = F_p[x]/J``.

A module is the cokernel of a relation matrix in ``R^r``; all computation
happens in the ambient ``P^r`` (``P = F_p[x]``) with ``J·e_i`` appended to
the relations.  Vectors are term dicts whose key position is the coordinate.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from . import kernel
from .errors import SignatureMismatch
from .groebner import (CertifiedMinimalPrimes, Ideal, _syzygy_dicts, is_linear_ideal)
from . import groebner
from .poly import Polynomial, RingSignature, TermDict, parse_poly, t_add, t_mul

Vec = TermDict


def vec_from_coords(coords: Sequence[Polynomial]) -> Vec:
    out: Vec = {}
    for i, f in enumerate(coords):
        for k, c in f._d.items():
            out[(i,) + k[1:]] = c
    return out


def coords_from_vec(v: Vec, sig: RingSignature, rank: int) -> Tuple[Polynomial, ...]:
    parts: List[dict] = [dict() for _ in range(rank)]
    for k, c in v.items():
        parts[k[0]][(0,) + k[1:]] = c
    return tuple(Polynomial(sig, d) for d in parts)


def _shift_pos(v: Vec, offset: int) -> Vec:
    return {(k[0] + offset,) + k[1:]: c for k, c in v.items()}


class QuotientRing:
    """``F_p[x]/J`` with its irrelevant maximal ideal and optional certified minimal primes."""

    def __init__(self, sig: RingSignature, relations: Iterable[Polynomial] = (),
                 minimal_primes: Optional[CertifiedMinimalPrimes] = None, name: str = ""):
        self.sig = sig
        self.defining = Ideal(sig, relations)
        if self.defining.is_unit():
            raise ValueError("defining ideal is the unit ideal")
        self.minimal_primes = minimal_primes
        if minimal_primes is not None and minimal_primes.ideal.sig != sig:
            raise SignatureMismatch("minimal primes certified for a different ring")
        self.name = name

    @classmethod
    def parse(cls, p: int, vars: Sequence[str], relations: Sequence[str] = (), order: str = "grevlex",
              name: str = "") -> "QuotientRing":
        sig = RingSignature(p, tuple(vars), order)
        return cls(sig, [parse_poly(r, sig) for r in relations], name=name)

    def poly(self, src) -> Polynomial:
        if isinstance(src, Polynomial):
            if src.sig != self.sig:
                raise SignatureMismatch("element from a different ring")
            return src
        if isinstance(src, int):
            return Polynomial.constant(self.sig, src)
        return parse_poly(src, self.sig)

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.defining.reduce(f)

    @property
    def p(self) -> int:
        return self.sig.p

    @property
    def variables(self) -> List[Polynomial]:
        return [Polynomial.var(self.sig, v) for v in self.sig.vars]

    @property
    def maximal_ideal(self) -> Ideal:
        return Ideal(self.sig, self.variables) + self.defining

    def is_polynomial_ring(self) -> bool:
        return not self.defining.gb

    def is_linear_quotient(self) -> bool:
        """Defining ideal generated by linear forms: the ring is a polynomial ring."""
        return not self.defining.gb or is_linear_ideal(self.defining)

    def with_minimal_primes(self, candidates: Sequence[Sequence]) -> "QuotientRing":
        primes = [Ideal(self.sig, [self.poly(g) for g in gens]) for gens in candidates]
        cert = groebner.certify_minimal_primes(self.defining, primes)
        return QuotientRing(self.sig, self.defining.gens, cert, self.name)

    def quotient(self, extra: Iterable[Polynomial], name: str = "") -> "QuotientRing":
        return QuotientRing(self.sig, list(self.defining.gens) + list(extra), name=name)

    def same_ring(self, other: "QuotientRing") -> bool:
        return self is other or (self.sig == other.sig and self.defining.gb == other.defining.gb)

    def describe(self) -> dict:
        return {"p": self.sig.p, "vars": list(self.sig.vars), "order": self.sig.order,
                "relations": [str(g) for g in self.defining.gens]}

    def __repr__(self):
        rel = ", ".join(str(g) for g in self.defining.gens) or "0"
        return f"F_{self.p}[{','.join(self.sig.vars)}]/({rel})"


class PresentedModule:
    """``R^rank`` modulo the span of ``relations`` (coordinate columns)."""

    def __init__(self, ring: QuotientRing, rank: int, relations: Iterable[Sequence[Polynomial]] = (),
                 name: str = ""):
        if rank < 0:
            raise ValueError("negative rank")
        self.ring = ring
        self.rank = rank
        rels = []
        for col in relations:
            col = tuple(ring.poly(c) for c in col)
            if len(col) != rank:
                raise ValueError(f"relation has {len(col)} entries, expected {rank}")
            rels.append(col)
        self.relations: List[Tuple[Polynomial, ...]] = rels
        self.name = name
        self._gb: Optional[List[Vec]] = None
        self._red: Optional[kernel.Reducer] = None

    @classmethod
    def free(cls, ring: QuotientRing, rank: int = 1) -> "PresentedModule":
        return cls(ring, rank)

    @classmethod
    def cyclic(cls, ring: QuotientRing, ideal_gens: Iterable) -> "PresentedModule":
        """``R/I`` as a rank-1 presentation."""
        return cls(ring, 1, [(ring.poly(g),) for g in ideal_gens])

    @property
    def sig(self) -> RingSignature:
        return self.ring.sig

    def relation_vecs(self) -> List[Vec]:
        return [vec_from_coords(col) for col in self.relations]

    def defining_vecs(self) -> List[Vec]:
        out = []
        for g in self.ring.defining.gb:
            for i in range(self.rank):
                out.append(_shift_pos(g._d, i))
        return out

    def all_relation_vecs(self) -> List[Vec]:
        return [v for v in self.relation_vecs() if v] + self.defining_vecs()

    @property
    def gb(self) -> List[Vec]:
        if self._gb is None:
            self._gb = kernel.buchberger(self.all_relation_vecs(), self.sig.mo, self.sig.p,
                                         pair_limit=groebner.PAIR_LIMIT, rank_one=False)
        return self._gb

    def reducer(self) -> kernel.Reducer:
        if self._red is None:
            self._red = kernel.Reducer(self.sig.mo, self.gb)
        return self._red

    def reduce_vec(self, v: Vec) -> Vec:
        return kernel.reduce_full(v, self.reducer(), self.sig.p)

    def element(self, coords) -> "ModuleElement":
        if isinstance(coords, ModuleElement):
            if coords.module is not self:
                raise SignatureMismatch("element of a different module")
            return coords
        coords = tuple(self.ring.poly(c) for c in coords)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates")
        return ModuleElement(self, self.reduce_vec(vec_from_coords(coords)))

    def from_vec(self, v: Vec) -> "ModuleElement":
        return ModuleElement(self, self.reduce_vec(v))

    def basis(self, i: int) -> "ModuleElement":
        one = self.sig.mo.one(i)
        return self.from_vec({one: 1})

    def zero(self) -> "ModuleElement":
        return ModuleElement(self, {})

    def is_zero_module(self) -> bool:
        return all(self.basis(i).is_zero() for i in range(self.rank))

    def zero_submodule(self) -> "Submodule":
        return Submodule(self, [])

    def submodule(self, elements: Iterable) -> "Submodule":
        return Submodule(self, [self.element(e) for e in elements])

    def describe(self) -> dict:
        return {"rank": self.rank, "relations": [[str(c) for c in col] for col in self.relations]}

    def same_presentation(self, other: "PresentedModule") -> bool:
        return self.ring.same_ring(other.ring) and self.rank == other.rank and self.gb == other.gb

    def __repr__(self):
        return f"coker[{self.rank}; {len(self.relations)} relations] over {self.ring!r}"


class ModuleElement:
    """Element of a presented module stored as its normal form."""

    __slots__ = ("module", "vec")

    def __init__(self, module: PresentedModule, vec: Vec):
        self.module = module
        self.vec = vec

    @property
    def coords(self) -> Tuple[Polynomial, ...]:
        return coords_from_vec(self.vec, self.module.sig, self.module.rank)

    def is_zero(self) -> bool:
        return not self.vec

    def _same(self, other: "ModuleElement") -> None:
        if other.module is not self.module:
            raise SignatureMismatch("elements of different modules")

    def __add__(self, other):
        self._same(other)
        return self.module.from_vec(t_add(self.vec, other.vec, self.module.sig.p))

    def __neg__(self):
        p = self.module.sig.p
        return ModuleElement(self.module, {k: p - c for k, c in self.vec.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "ModuleElement":
        f = self.module.ring.poly(f)
        return self.module.from_vec(t_mul(f._d, self.vec, self.module.sig.p))

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return other.module is self.module and self.vec == other.vec

    def __hash__(self):
        return hash(frozenset(self.vec.items()))

    def text(self) -> List[str]:
        return [str(c) for c in self.coords]

    def __repr__(self):
        return "(" + ", ".join(self.text()) + ")"


class Submodule:
    """Submodule of a presented module given by generators."""

    def __init__(self, module: PresentedModule, gens: Iterable[ModuleElement]):
        self.module = module
        self.gens = [g for g in gens if not g.is_zero()]
        for g in self.gens:
            if g.module is not module:
                raise SignatureMismatch("generator of a different module")
        self._gb: Optional[List[Vec]] = None
        self._red: Optional[kernel.Reducer] = None

    @property
    def gb(self) -> List[Vec]:
        if self._gb is None:
            vecs = [g.vec for g in self.gens] + self.module.all_relation_vecs()
            self._gb = kernel.buchberger(vecs, self.module.sig.mo, self.module.sig.p,
                                         pair_limit=groebner.PAIR_LIMIT, rank_one=False)
        return self._gb

    def reducer(self) -> kernel.Reducer:
        if self._red is None:
            self._red = kernel.Reducer(self.module.sig.mo, self.gb)
        return self._red

    def reduce_vec(self, v: Vec) -> Vec:
        return kernel.reduce_full(v, self.reducer(), self.module.sig.p)

    def contains(self, z: ModuleElement) -> bool:
        if z.module is not self.module:
            raise SignatureMismatch("element of a different module")
        if z.is_zero():
            return True
        if not self.gens:
            return False
        return not self.reduce_vec(z.vec)

    __contains__ = contains

    def issubset(self, other: "Submodule") -> bool:
        return all(other.contains(g) for g in self.gens)

    def same_submodule(self, other: "Submodule") -> bool:
        return self.module.same_presentation(other.module) and self.gb == other.gb

    def is_zero(self) -> bool:
        return not self.gens

    def __add__(self, other: "Submodule") -> "Submodule":
        if other.module is not self.module:
            raise SignatureMismatch("submodules of different modules")
        return Submodule(self.module, self.gens + other.gens)

    def text(self) -> List[List[str]]:
        return [g.text() for g in self.gens]

    def __repr__(self):
        return "<" + ", ".join(map(repr, self.gens)) + ">"


# ---------------------------------------------------------------------------
# operations


def submodule_membership(z: ModuleElement, N: Submodule) -> bool:
    return N.contains(z)


def syzygies(vectors: Sequence[Sequence[Polynomial]], ring: QuotientRing,
             relations: Sequence[Sequence[Polynomial]] = ()) -> List[Tuple[Polynomial, ...]]:
    """Generators of ``{a ∈ R^m : Σ a_i v_i ∈ span(relations)}`` for columns ``v_i`` of ``R^r``."""
    if not vectors:
        return []
    r = len(vectors[0])
    if any(len(v) != r for v in vectors):
        raise ValueError("vectors of different lengths")
    tmp = PresentedModule(ring, r, relations)
    vecs = [vec_from_coords([ring.poly(c) for c in v]) for v in vectors]
    syz = _syzygy_dicts(vecs, tmp.all_relation_vecs(), r, ring.sig)
    out = []
    m = len(vectors)
    red = kernel.Reducer(ring.sig.mo, [_shift_pos(g._d, i) for g in ring.defining.gb for i in range(m)])
    for s in syz:
        s = kernel.reduce_full(s, red, ring.p)
        if s:
            out.append(coords_from_vec(s, ring.sig, m))
    return out


def colon_annihilator(N: Submodule, f) -> Submodule:
    """``(N :_M f) = {z ∈ M : f z ∈ N}``."""
    M = N.module
    f = M.ring.poly(f)
    if not f:
        raise ValueError("colon by the zero polynomial")
    r = M.rank
    if not M.ring.reduce(f):
        return Submodule(M, [M.basis(i) for i in range(r)])
    one = M.sig.mo.one()
    vecs = [t_mul(f._d, {(i,) + one[1:]: 1}, M.sig.p) for i in range(r)]
    extra = [g.vec for g in N.gens] + M.all_relation_vecs()
    syz = _syzygy_dicts(vecs, extra, r, M.sig)
    return Submodule(M, [M.from_vec(s) for s in syz])


def annihilator_ideal(N: Submodule, z: ModuleElement) -> List[Polynomial]:
    """Generators (in ``P``) of ``(N :_R z) = {a : a z ∈ N}``; contains ``J``."""
    M = N.module
    extra = [g.vec for g in N.gens] + M.all_relation_vecs()
    if not z.vec:
        return [Polynomial.constant(M.sig, 1)]
    syz = _syzygy_dicts([z.vec], extra, M.rank, M.sig)
    return [Polynomial(M.sig, s) for s in syz]


def lift_to_generators(z: ModuleElement, N: Submodule) -> Optional[List[Polynomial]]:
    """Cofactors ``a`` with ``z = Σ a_k g_k`` modulo relations, or ``None`` if ``z ∉ N``."""
    M = N.module
    r = M.rank
    m = len(N.gens)
    rows = []
    one = M.sig.mo.one()
    for k, g in enumerate(N.gens):
        row = dict(g.vec)
        row[(r + k,) + one[1:]] = 1
        rows.append(row)
    rows.extend(M.all_relation_vecs())
    G = kernel.buchberger(rows, M.sig.mo, M.sig.p, pair_limit=groebner.PAIR_LIMIT, rank_one=False)
    red = kernel.Reducer(M.sig.mo, G)
    nf = kernel.reduce_full(z.vec, red, M.sig.p)
    if any(k[0] < r for k in nf):
        return None
    p = M.sig.p
    tags = coords_from_vec({(k[0] - r,) + k[1:]: (p - c) % p for k, c in nf.items()}, M.sig, m)
    return list(tags)


def quotient_module(M: PresentedModule, N: Submodule) -> PresentedModule:
    """``M/N`` by appending the generators of ``N`` to the relations."""
    if N.module is not M:
        raise SignatureMismatch("submodule of a different module")
    return PresentedModule(M.ring, M.rank, list(M.relations) + [g.coords for g in N.gens])


def quotient_by_elements(M: PresentedModule, xs: Sequence[Polynomial]) -> PresentedModule:
    """``M / (x_1, ..., x_k) M``."""
    gens = []
    for x in xs:
        for i in range(M.rank):
            gens.append(M.basis(i).scale(x))
    return quotient_module(M, Submodule(M, gens))


def tensor_extend(M: PresentedModule, S: QuotientRing, var_map=None) -> PresentedModule:
    """``S ⊗_R M``: the same relation matrix read over ``S``.

    ``var_map`` defaults to the identity on variable names; it may rename
    base variables as a dict ``{base_name: total_name}``.
    """
    R = M.ring
    if R.sig.p != S.sig.p:
        raise SignatureMismatch("different characteristics")
    names = dict(var_map or {})
    target_vars = [names.get(v, v) for v in R.sig.vars]
    if any(v not in S.sig.vars for v in target_vars):
        raise SignatureMismatch("target ring lacks a base variable")
    mapped = _map_poly_factory(R.sig, S.sig, target_vars)
    for g in R.defining.gens:
        if not S.defining.contains(mapped(g)) and S.reduce(mapped(g)):
            raise SignatureMismatch("target ring does not contain the image of the base defining ideal")
    rels = [tuple(mapped(c) for c in col) for col in M.relations]
    return PresentedModule(S, M.rank, rels)


def _map_poly_factory(small: RingSignature, big: RingSignature, targets: Sequence[str]):
    idx = [big.index(v) for v in targets]

    def mapped(f: Polynomial) -> Polynomial:
        out = {}
        for k, c in f._d.items():
            e = [0] * big.n
            for i, x in zip(idx, small.mo.exps(k)):
                e[i] += x
            key = big.mo.key(e, k[0])
            out[key] = (out.get(key, 0) + c) % big.p
        return Polynomial(big, {k: c for k, c in out.items() if c})

    return mapped


def map_element(z: ModuleElement, target: PresentedModule, var_map=None) -> ModuleElement:
    """Image of ``z`` under ``M → S ⊗ M`` (coordinates mapped verbatim)."""
    src = z.module
    names = dict(var_map or {})
    mapped = _map_poly_factory(src.sig, target.sig, [names.get(v, v) for v in src.sig.vars])
    return target.element([mapped(c) for c in z.coords])


def map_poly(f: Polynomial, S: QuotientRing, var_map=None) -> Polynomial:
    names = dict(var_map or {})
    return _map_poly_factory(f.sig, S.sig, [names.get(v, v) for v in f.sig.vars])(f)


def submodule_equal(A: Submodule, B: Submodule) -> bool:
    return A.module is B.module and A.issubset(B) and B.issubset(A)
