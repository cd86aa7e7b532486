"""Frobenius functor on presentations, Frobenius images of elements, bracket powers."""

from __future__ import annotations

from dataclasses import dataclass

from .modules import ModuleElement, PresentedModule, Submodule
from .poly import t_frobenius

E_MAX = 4


@dataclass(frozen=True)
class FrobeniusPower:
    base: PresentedModule
    e: int
    result: PresentedModule

    @property
    def q(self) -> int:
        return self.base.ring.p ** self.e


def _check_e(e: int) -> None:
    if e < 0:
        raise ValueError("negative Frobenius exponent")


def frobenius_module(M: PresentedModule, e: int) -> PresentedModule:
    """``F^e(M)``: entrywise ``q``-th powers of the relation matrix, ring unchanged.

    The defining ideal of the ring is re-appended by ``PresentedModule``
    unpowered, since the functor is taken over ``R``.
    """
    _check_e(e)
    if e == 0:
        return M
    key = ("frob", e)
    cache = M.__dict__.setdefault("_derived", {})
    if key not in cache:
        rels = [tuple(c.frobenius(e) for c in col) for col in M.relations]
        cache[key] = PresentedModule(M.ring, M.rank, rels, name=f"F^{e}({M.name})" if M.name else "")
        cache[key].__dict__["_frob_of"] = (M, e)
    return cache[key]


def frobenius_power(M: PresentedModule, e: int) -> FrobeniusPower:
    return FrobeniusPower(M, e, frobenius_module(M, e))


def frobenius_element(z: ModuleElement, e: int, target: PresentedModule = None) -> ModuleElement:
    """Image of ``z`` in ``F^e(M)``: raise a coordinate lift entrywise, then reduce."""
    _check_e(e)
    M = z.module
    FM = target if target is not None else frobenius_module(M, e)
    if FM.rank != M.rank or not FM.ring.same_ring(M.ring):
        raise ValueError("target is not a Frobenius power of the element's module")
    q = M.ring.p ** e
    return FM.from_vec(t_frobenius(z.vec, q, M.sig.mo.start))


def bracket_submodule(N: Submodule, e: int, target: PresentedModule = None) -> Submodule:
    """``N^{[q]}_M``: the submodule of ``F^e(M)`` generated by Frobenius images of generators."""
    _check_e(e)
    FM = target if target is not None else frobenius_module(N.module, e)
    return Submodule(FM, [frobenius_element(g, e, FM) for g in N.gens])
