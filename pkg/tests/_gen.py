"""Seeded generators and an independent sympy oracle shared by the suites."""

import random

import sympy as sp

from tightcalc.groebner import Ideal
from tightcalc.poly import Polynomial, RingSignature


def rand_poly(rng: random.Random, sig: RingSignature, terms: int = 3, maxdeg: int = 3) -> Polynomial:
    out = []
    for _ in range(terms):
        e = [0] * len(sig.vars)
        for _ in range(rng.randint(0, maxdeg)):
            e[rng.randrange(len(sig.vars))] += 1
        out.append((e, rng.randrange(1, sig.p)))
    return Polynomial.from_terms(sig, out)


def rand_homog_ideal(rng: random.Random, sig: RingSignature, k: int = 2) -> Ideal:
    gens = []
    while len(gens) < k:
        f = rand_poly(rng, sig, rng.randint(1, 3), 3)
        if f and not f.is_constant():
            gens.append(f)
    return Ideal(sig, gens)


def to_sympy(f: Polynomial, syms):
    env = dict(zip(f.sig.vars, syms))
    return sp.sympify(str(f).replace("^", "**"), locals=env) if f else sp.Integer(0)


def sympy_gb(I: Ideal):
    syms = sp.symbols(" ".join(I.sig.vars))
    syms = syms if isinstance(syms, tuple) else (syms,)
    order = {"grevlex": "grevlex", "grlex": "grlex", "lex": "lex"}[I.sig.order]
    G = sp.groebner([to_sympy(g, syms) for g in I.gens], *syms, order=order, modulus=I.sig.p)
    return G, syms


def same_poly(f: Polynomial, expr, syms) -> bool:
    p = f.sig.p
    return sp.Poly(to_sympy(f, syms), *syms, modulus=p) == sp.Poly(expr, *syms, modulus=p)
