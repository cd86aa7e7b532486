"""Sparse multivariate polynomials over a prime field.

Internally a polynomial is a ``dict`` mapping an *order key* to a coefficient in
``[1, p-1]``.  An order key is a flat tuple ``(pos, c_1, ..., c_k)`` whose
plain tuple comparison realises the monomial order with the *leading* monomial
being the *smallest* key, so ``min()`` and ``heapq`` find leading terms at C
speed.  Every coordinate is linear in the exponent vector, so multiplying
monomials is componentwise addition of keys and a Frobenius power scales the
non-position coordinates by ``q``.  ``pos`` is the free-module coordinate
(always 0 for ring elements); comparing it first gives position-over-term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from operator import add, ge, le
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .errors import ExponentOverflow, ParseError, SignatureMismatch

Key = Tuple[int, ...]
TermDict = Dict[Key, int]

EXP_LIMIT = 2**31 - 1
ORDERS = ("grevlex", "grlex", "lex")
_VAR_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class MonomialOrder:
    """Key construction and key-level predicates for one order on ``n`` variables."""

    def __init__(self, name: str, n: int):
        if name not in ORDERS:
            raise ValueError(f"unknown monomial order {name!r}")
        self.name = name
        self.n = n
        # index where exponent coordinates start inside a key
        self.start = 1 if name == "lex" else 2

    def key(self, exps: Sequence[int], pos: int = 0) -> Key:
        if self.name == "grevlex":
            return (pos, -sum(exps)) + tuple(reversed(exps))
        if self.name == "grlex":
            return (pos, -sum(exps)) + tuple(-e for e in exps)
        return (pos,) + tuple(-e for e in exps)

    def exps(self, k: Key) -> Tuple[int, ...]:
        if self.name == "grevlex":
            return tuple(reversed(k[2:]))
        return tuple(-e for e in k[self.start:])

    def divides(self, a: Key, b: Key) -> bool:
        """Whether monomial ``a`` divides ``b`` (same position required)."""
        if a[0] != b[0]:
            return False
        s = self.start
        if self.name == "grevlex":
            return all(map(le, a[s:], b[s:]))
        return all(map(ge, a[s:], b[s:]))

    def lcm(self, a: Key, b: Key) -> Key:
        s = self.start
        if self.name == "grevlex":
            t = tuple(map(max, a[2:], b[2:]))
            return (a[0], -sum(t)) + t
        t = tuple(map(min, a[s:], b[s:]))
        if self.name == "grlex":
            return (a[0], sum(t)) + t
        return (a[0],) + t

    def coprime(self, a: Key, b: Key) -> bool:
        return not any(x and y for x, y in zip(a[self.start:], b[self.start:]))

    def degree(self, k: Key) -> int:
        if self.name == "lex":
            return -sum(k[1:])
        return -k[1]

    def one(self, pos: int = 0) -> Key:
        return self.key((0,) * self.n, pos)


@dataclass(frozen=True)
class RingSignature:
    """Characteristic, ordered variable names and monomial order of a polynomial ring."""

    p: int
    vars: Tuple[str, ...]
    order: str = "grevlex"

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not (2 <= self.p < 2**31) or not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not a prime below 2^31")
        if not self.vars:
            raise ValueError("at least one variable is required")
        for v in self.vars:
            if not isinstance(v, str) or not _VAR_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("variable names must be unique")
        if self.order not in ORDERS:
            raise ValueError(f"unknown monomial order {self.order!r}")

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def mo(self) -> MonomialOrder:
        mo = self.__dict__.get("_mo")
        if mo is None:
            mo = MonomialOrder(self.order, self.n)
            object.__setattr__(self, "_mo", mo)
        return mo

    def index(self, name: str) -> int:
        return self.vars.index(name)

    def extend(self, new_vars: Iterable[str]) -> "RingSignature":
        return RingSignature(self.p, self.vars + tuple(new_vars), self.order)

    def to_json(self) -> dict:
        return {"p": self.p, "vars": list(self.vars), "order": self.order}

    def __getstate__(self):
        return {"p": self.p, "vars": self.vars, "order": self.order}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)


class Monomial(tuple):
    """Exponent vector; product adds exponents componentwise."""

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(self)

    @property
    def degree(self) -> int:
        return sum(self)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(map(add, self, other))

    def divides(self, other: "Monomial") -> bool:
        return all(map(le, self, other))


# ---------------------------------------------------------------------------
# dict-level arithmetic (shared with the Groebner kernel)


def t_add(a: TermDict, b: TermDict, p: int) -> TermDict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, c in b.items():
        v = (out.get(k, 0) + c) % p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def t_scale(a: TermDict, c: int, p: int) -> TermDict:
    c %= p
    if not c:
        return {}
    return {k: v * c % p for k, v in a.items()}


def t_shift(a: TermDict, shift: Key, c: int, p: int) -> TermDict:
    """``c * m * a`` where ``shift`` is the key of the ring monomial ``m``."""
    return {tuple(map(add, k, shift)): v * c % p for k, v in a.items()}


def t_mul(a: TermDict, b: TermDict, p: int) -> TermDict:
    """Product of a ring element ``a`` (pos 0) with ``b`` (any positions)."""
    if len(a) > len(b) and all(k[0] == 0 for k in b):
        a, b = b, a
    out: TermDict = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(map(add, ka, kb))
            out[k] = (get(k, 0) + ca * cb) % p
    return {k: v for k, v in out.items() if v}


def t_frobenius(a: TermDict, q: int, start: int) -> TermDict:
    """Entrywise ``q``-th power; exact in characteristic p since ``c^q = c`` in F_p."""
    if q == 1:
        return dict(a)
    out = {}
    for k, c in a.items():
        nk = (k[0],) + tuple(q * x for x in k[1:])
        if any(abs(x) > EXP_LIMIT for x in nk[start:]):
            raise ExponentOverflow(f"exponent exceeds 2^31-1 when raising to the power {q}")
        out[nk] = c
    return out


def check_exponents(a: TermDict, start: int) -> None:
    for k in a:
        if any(abs(x) > EXP_LIMIT for x in k[start:]):
            raise ExponentOverflow("exponent exceeds 2^31-1")


# ---------------------------------------------------------------------------


class Polynomial:
    """Immutable element of ``F_p[vars]``; terms are kept canonical (nonzero, sorted)."""

    __slots__ = ("sig", "_d", "_terms", "_hash")

    def __init__(self, sig: RingSignature, data: TermDict | None = None):
        self.sig = sig
        self._d = data if data is not None else {}
        self._terms = None
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def from_terms(cls, sig: RingSignature, terms: Iterable[Tuple[Sequence[int], int]]) -> "Polynomial":
        mo = sig.mo
        acc: TermDict = {}
        for exps, c in terms:
            if len(exps) != sig.n:
                raise ValueError("exponent vector has wrong length")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            k = mo.key(tuple(exps))
            acc[k] = (acc.get(k, 0) + c) % sig.p
        data = {k: v for k, v in acc.items() if v}
        check_exponents(data, mo.start)
        return cls(sig, data)

    @classmethod
    def constant(cls, sig: RingSignature, c: int) -> "Polynomial":
        c %= sig.p
        return cls(sig, {sig.mo.one(): c} if c else {})

    @classmethod
    def var(cls, sig: RingSignature, name: str) -> "Polynomial":
        e = [0] * sig.n
        e[sig.index(name)] = 1
        return cls(sig, {sig.mo.key(e): 1})

    @classmethod
    def zero(cls, sig: RingSignature) -> "Polynomial":
        return cls(sig, {})

    # inspection -----------------------------------------------------------
    @property
    def terms(self) -> List[Tuple[Monomial, int]]:
        if self._terms is None:
            mo = self.sig.mo
            self._terms = [(Monomial(mo.exps(k)), self._d[k]) for k in sorted(self._d)]
        return self._terms

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def lead_key(self) -> Key:
        return min(self._d)

    def lead_monomial(self) -> Monomial:
        return Monomial(self.sig.mo.exps(self.lead_key()))

    def lead_coeff(self) -> int:
        return self._d[self.lead_key()]

    def total_degree(self) -> int:
        if not self._d:
            return -1
        mo = self.sig.mo
        return max(mo.degree(k) for k in self._d)

    def is_constant(self) -> bool:
        one = self.sig.mo.one()
        return all(k == one for k in self._d)

    def variables(self) -> set:
        used = set()
        for m, _ in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return {self.sig.vars[i] for i in used}

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if other.sig != self.sig:
            raise SignatureMismatch("polynomials live in different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial.constant(self.sig, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.sig, t_add(self._d, other._d, self.sig.p))

    __radd__ = __add__

    def __neg__(self):
        p = self.sig.p
        return Polynomial(self.sig, {k: p - c for k, c in self._d.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(self.sig, t_scale(self._d, other, self.sig.p))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        data = t_mul(self._d, other._d, self.sig.p)
        check_exponents(data, self.sig.mo.start)
        return Polynomial(self.sig, data)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        """Power by binary exponentiation (ordinary ring multiplication)."""
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.sig, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, e: int) -> "Polynomial":
        return frobenius_pow_poly(self, e)

    def monic(self) -> "Polynomial":
        if not self._d:
            return self
        inv = pow(self.lead_coeff(), -1, self.sig.p)
        return self * inv

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.sig, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.sig == other.sig and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.sig, frozenset(self._d.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.sig != b.sig:
        raise SignatureMismatch("polynomials live in different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def frobenius_pow_poly(f: Polynomial, e: int) -> Polynomial:
    """``f^(p^e)``.

    Over ``F_p`` the freshman's dream is an identity and ``c^q = c``, so the
    power is obtained by scaling every exponent vector by ``q``.
    """
    if e < 0:
        raise ValueError("negative Frobenius exponent")
    q = f.sig.p ** e
    return Polynomial(f.sig, t_frobenius(f._d, q, f.sig.mo.start))


# ---------------------------------------------------------------------------
# text grammar


def _format_monomial(sig: RingSignature, m: Sequence[int]) -> str:
    parts = []
    for name, e in zip(sig.vars, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    if not f._d:
        return "0"
    out = []
    for m, c in f.terms:
        mono = _format_monomial(f.sig, m)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


class _Parser:
    def __init__(self, src: str, sig: RingSignature):
        self.src = src
        self.sig = sig
        self.i = 0
        self.index = {v: k for k, v in enumerate(sig.vars)}

    def skip(self):
        src = self.src
        while self.i < len(src) and src[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.src[self.i] if self.i < len(self.src) else ""

    def uint(self, reduce: bool) -> int:
        self.skip()
        start = self.i
        p = self.sig.p
        val = 0
        while self.i < len(self.src) and self.src[self.i].isdigit():
            d = ord(self.src[self.i]) - 48
            val = (val * 10 + d) % p if reduce else val * 10 + d
            if not reduce and val > EXP_LIMIT:
                raise ParseError("exponent exceeds 2^31-1", start)
            self.i += 1
        if self.i == start:
            raise ParseError("expected an unsigned integer", start)
        return val

    def factor(self, exps: List[int]) -> None:
        self.skip()
        start = self.i
        src = self.src
        if not (self.i < len(src) and src[self.i].isascii() and src[self.i].isalpha()):
            raise ParseError("expected a variable", start)
        while self.i < len(src) and src[self.i].isascii() and src[self.i].isalnum():
            self.i += 1
        name = src[start:self.i]
        if name not in self.index:
            raise ParseError(f"unknown variable {name!r}", start)
        e = 1
        if self.peek() == "^":
            self.i += 1
            e = self.uint(reduce=False)
        exps[self.index[name]] += e
        if exps[self.index[name]] > EXP_LIMIT:
            raise ParseError("exponent exceeds 2^31-1", start)

    def term(self) -> Tuple[List[int], int]:
        exps = [0] * self.sig.n
        coeff = 1
        c = self.peek()
        if not c:
            raise ParseError("expected a term", self.i)
        seen = False
        if c.isdigit():
            coeff = self.uint(reduce=True)
            seen = True
        while True:
            c = self.peek()
            if c == "*":
                star = self.i
                self.i += 1
                nxt = self.peek()
                if not (nxt.isascii() and nxt.isalpha()):
                    raise ParseError("expected a variable after '*'", star + 1 if not nxt else self.i)
                self.factor(exps)
                seen = True
            elif c and c.isascii() and c.isalpha():
                self.factor(exps)
                seen = True
            else:
                break
        if not seen:
            raise ParseError("expected a term", self.i)
        return exps, coeff

    def parse(self) -> Polynomial:
        terms = []
        sign = 1
        if self.peek() == "-":
            self.i += 1
            sign = -1
        exps, c = self.term()
        terms.append((exps, sign * c))
        while True:
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                raise ParseError(f"unexpected character {ch!r}", self.i)
            self.i += 1
            sign = 1 if ch == "+" else -1
            exps, c = self.term()
            terms.append((exps, sign * c))
        return Polynomial.from_terms(self.sig, terms)


def parse_poly(src: str, sig: RingSignature) -> Polynomial:
    """Parse polynomial text (``3*x^2*y - y + 1``) into canonical form."""
    try:
        src.encode("ascii")
    except UnicodeEncodeError as exc:
        raise ParseError("non-ASCII input", exc.start) from None
    return _Parser(src, sig).parse()


def iter_vars(sig: RingSignature) -> Iterator[Polynomial]:
    for name in sig.vars:
        yield Polynomial.var(sig, name)
