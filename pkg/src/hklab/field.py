"""Arithmetic in binary fields GF(2^N).

Elements are stored as ints: bit i is the coefficient of x^i in the
polynomial basis of the context. ``FieldContext`` does the arithmetic on
raw ints (the hot paths use it directly); ``FieldElement`` wraps an int
together with its context for user-facing code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

from sympy import factorint


# ---------------------------------------------------------------------------
# GF(2)[x] helpers on ints
# ---------------------------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    if a < b:
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def is_irreducible(modulus: int) -> bool:
    """Rabin's test for a GF(2)[x] polynomial given as an int."""
    n = modulus.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if not (modulus & 1):
        return False
    # x^(2^n) == x mod f
    x = 0b10
    p = x
    powers = {}
    for k in range(1, n + 1):
        p = _mulmod(p, p, modulus)
        powers[k] = p
    if powers[n] != poly_mod(x, modulus):
        return False
    for prime in factorint(n):
        k = n // prime
        if poly_gcd(modulus, powers[k] ^ x) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(n: int) -> int:
    """Lexicographically smallest irreducible of degree n (as an int)."""
    if n < 1:
        raise ValueError("degree must be positive")
    if n == 1:
        # x + 1: constant term must be 1 by the context invariant
        return 0b11
    start = (1 << n) | 1
    for cand in range(start, 1 << (n + 1), 2):
        if is_irreducible(cand):
            return cand
    raise AssertionError("unreachable: irreducibles exist in every degree")


# ---------------------------------------------------------------------------
# Contexts
# ---------------------------------------------------------------------------

_TABLE_LIMIT = 16


@dataclass(frozen=True)
class FieldContext:
    """The field GF(2^degree) = GF(2)[x]/(modulus).

    Immutable; safe to share between workers. Small fields (degree <= 16)
    carry exp/log tables so that ``mul`` is two lookups.
    """

    degree: int
    modulus: int
    _exp: Optional[Tuple[int, ...]] = field(default=None, repr=False, compare=False)
    _log: Optional[Tuple[int, ...]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if self.modulus.bit_length() - 1 != self.degree:
            raise ValueError("modulus degree does not match context degree")
        if not (self.modulus & 1):
            raise ValueError("modulus constant term must be 1")
        if not is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#x} is not irreducible")
        if self.degree <= _TABLE_LIMIT and self._exp is None:
            exp, log = _build_tables(self.degree, self.modulus)
            object.__setattr__(self, "_exp", exp)
            object.__setattr__(self, "_log", log)

    @property
    def order(self) -> int:
        return 1 << self.degree

    # raw int arithmetic -------------------------------------------------

    def reduce(self, a: int) -> int:
        return poly_mod(a, self.modulus)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return poly_mod(clmul(a, b), self.modulus)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if a == 0:
            return 1 if k == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * k) % (self.order - 1)]
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.sqr(a)
            k >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^%d)" % self.degree)
        if self._exp is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def frobenius(self, a: int, times: int = 1) -> int:
        for _ in range(times % self.degree):
            a = self.sqr(a)
        return a

    def trace(self, a: int) -> int:
        """Absolute trace to GF(2) (returns 0 or 1)."""
        t, b = 0, a
        for _ in range(self.degree):
            t ^= b
            b = self.sqr(b)
        assert t in (0, 1)
        return t

    # element-level API --------------------------------------------------

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """The class of x (reduced, so x+1 = 1 in GF(2) when degree is 1)."""
        return FieldElement(self, self.reduce(0b10))

    def elements(self):
        for v in range(self.order):
            yield FieldElement(self, v)

    def tables(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        if self._exp is None:
            raise ValueError("no tables for GF(2^%d)" % self.degree)
        return self._exp, self._log


def _primitive_element(n: int, modulus: int) -> int:
    order = (1 << n) - 1
    if order == 1:
        return 1
    primes = list(factorint(order))
    for g in range(2, 1 << n):
        if all(_powmod(g, order // p, modulus) != 1 for p in primes):
            return g
    raise AssertionError("no primitive element found")


def _powmod(a: int, k: int, m: int) -> int:
    r = 1
    while k:
        if k & 1:
            r = _mulmod(r, a, m)
        a = _mulmod(a, a, m)
        k >>= 1
    return r


def _build_tables(n: int, modulus: int):
    order = (1 << n) - 1
    g = _primitive_element(n, modulus)
    # exp has length 2*order so log[a]+log[b] needs no reduction
    exp = [0] * (2 * order + 1)
    log = [0] * (1 << n)
    v = 1
    for i in range(order):
        exp[i] = v
        log[v] = i
        v = _mulmod(v, g, modulus)
    for i in range(order, 2 * order + 1):
        exp[i] = exp[i - order]
    return tuple(exp), tuple(log)


@lru_cache(maxsize=None)
def build_field(n: int) -> FieldContext:
    """GF(2^n) with the lexicographically smallest irreducible modulus."""
    return FieldContext(n, smallest_irreducible(n))


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

_SERIAL_RE = re.compile(r"^gf2\^(\d+):0x([0-9a-f]+)$")


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldContext
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.order:
            raise ValueError(f"{self.value:#x} is not reduced in GF(2^{self.ctx.degree})")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ValueError("elements live in different fields")
            return other.value
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.value ^ o)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FieldElement(self.ctx, self.ctx.inv(o))

    def __pow__(self, k: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, k))

    def __neg__(self):
        return self

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def inv(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def frobenius(self, times: int = 1) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.frobenius(self.value, times))

    def trace(self) -> int:
        return self.ctx.trace(self.value)

    def serialize(self) -> str:
        return f"gf2^{self.ctx.degree}:{self.value:#x}"

    def __str__(self):
        return self.serialize()

    def __repr__(self):
        return f"FieldElement({self.serialize()})"

    @classmethod
    def parse(cls, text: str) -> "FieldElement":
        m = _SERIAL_RE.match(text.strip().lower())
        if not m:
            raise ValueError(f"cannot parse field element {text!r}")
        ctx = build_field(int(m.group(1)))
        return cls(ctx, int(m.group(2), 16))


def arith(a: FieldElement, b: Optional[FieldElement], op: str, k: int = 0) -> FieldElement:
    """Dispatch one of add/mul/inv/pow/frobenius by name."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        return a ** k
    if op == "frobenius":
        return a.frobenius()
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Degrees, subfields and embeddings
# ---------------------------------------------------------------------------

def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def element_degree(beta: FieldElement) -> int:
    """[GF(2)(beta) : GF(2)], the least m | N with beta^(2^m) = beta."""
    ctx = beta.ctx
    for m in _divisors(ctx.degree):
        if ctx.frobenius(beta.value, m) == beta.value:
            return m
    raise AssertionError("unreachable")


def minimal_polynomial(beta: FieldElement) -> int:
    """Minimal polynomial of beta over GF(2), as a GF(2)[x] int."""
    ctx = beta.ctx
    m = element_degree(beta)
    # coefficients in ctx, low degree first; start from the constant 1
    coeffs = [1]
    conj = beta.value
    for _ in range(m):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] ^= c
            nxt[i] ^= ctx.mul(c, conj)
        coeffs = nxt
        conj = ctx.sqr(conj)
    out = 0
    for i, c in enumerate(coeffs):
        if c not in (0, 1):
            raise AssertionError("minimal polynomial not over GF(2)")
        out |= c << i
    return out


def _subfield_generator(ctx: FieldContext, m: int) -> int:
    """An element generating the multiplicative group of GF(2^m) inside ctx."""
    if ctx.degree % m:
        raise ValueError(f"{m} does not divide {ctx.degree}")
    sub_order = (1 << m) - 1
    if sub_order == 1:
        return 1
    cofactor = (ctx.order - 1) // sub_order
    primes = list(factorint(sub_order))
    for g in range(2, ctx.order):
        h = ctx.pow(g, cofactor)
        if all(ctx.pow(h, sub_order // p) != 1 for p in primes):
            return h
    raise AssertionError("no subfield generator found")


def subfield_elements(ctx: FieldContext, m: int) -> List[int]:
    """All elements of the unique subfield GF(2^m) of ctx, as ints."""
    h = _subfield_generator(ctx, m)
    out = [0]
    v = 1
    for _ in range((1 << m) - 1):
        out.append(v)
        v = ctx.mul(v, h)
    return out


def _eval_f2_poly(ctx: FieldContext, poly: int, v: int) -> int:
    acc = 0
    for i in range(poly.bit_length() - 1, -1, -1):
        acc = ctx.mul(acc, v) ^ ((poly >> i) & 1)
    return acc


@lru_cache(maxsize=None)
def _embedding_root(src: FieldContext, target: FieldContext) -> int:
    """A root in target of src's modulus; x -> root defines src -> target."""
    for v in subfield_elements(target, src.degree):
        if _eval_f2_poly(target, src.modulus, v) == 0:
            return v
    raise AssertionError("no root of the source modulus")


def embed(beta: FieldElement, target: FieldContext) -> FieldElement:
    """Image of beta under a fixed field embedding into target.

    When beta's context embeds whole (its degree divides the target's) the
    map sends x to a fixed root of the source modulus, so it is a ring
    homomorphism. Otherwise beta is first moved into GF(2^m_beta) through
    ``subfield_isomorphism``, which is also consistent across elements.
    """
    src = beta.ctx
    if target.degree % src.degree:
        m = element_degree(beta)
        if target.degree % m:
            raise ValueError(f"GF(2^{target.degree}) does not contain a degree-{m} element")
        beta = FieldElement(build_field(m), subfield_isomorphism(src, m)[beta.value])
        src = beta.ctx
    if src == target:
        return FieldElement(target, beta.value)
    r = _embedding_root(src, target)
    acc, power = 0, 1
    for i in range(src.degree):
        if (beta.value >> i) & 1:
            acc ^= power
        power = target.mul(power, r)
    return FieldElement(target, acc)


def to_minimal_field(beta: FieldElement) -> FieldElement:
    """Re-embed beta into GF(2^m_beta) built by ``build_field``."""
    m = element_degree(beta)
    if beta.ctx.degree == m:
        return beta
    return embed(beta, build_field(m))


def degree_representatives(ctx: FieldContext, m: int, orbits_only: bool = True) -> List[FieldElement]:
    """Nonzero elements of exact degree m, optionally one per Frobenius orbit.

    The orbit representative is the conjugate with the smallest int value.
    """
    if ctx.degree % m:
        raise ValueError(f"{m} does not divide the context degree {ctx.degree}")
    out = []
    seen = set()
    for v in sorted(subfield_elements(ctx, m)):
        if v == 0 or v in seen:
            continue
        e = FieldElement(ctx, v)
        if element_degree(e) != m:
            continue
        if orbits_only:
            orbit = {ctx.frobenius(v, i) for i in range(m)}
            seen |= orbit
            if v != min(orbit):
                continue
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# Artin-Schreier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarProfile:
    alpha: FieldElement
    m_alpha: int
    m_lambda: int
    case_equal: bool
    lam: FieldElement
    alpha_image: FieldElement  # alpha inside the field holding lam


def solve_artin_schreier(alpha: FieldElement) -> Optional[FieldElement]:
    """A root of L^2 + L = alpha inside alpha's own field, or None.

    Solves the GF(2)-linear system for L -> L^2 + L by elimination on the
    coordinate bit-vectors.
    """
    ctx = alpha.ctx
    n = ctx.degree
    # column i = image of basis vector x^i
    cols = [ctx.sqr(1 << i) ^ (1 << i) for i in range(n)]
    # rows of the augmented system: each row is (mask over unknowns, rhs bit)
    rows = []
    for r in range(n):
        mask = 0
        for i, c in enumerate(cols):
            if (c >> r) & 1:
                mask |= 1 << i
        rows.append([mask, (alpha.value >> r) & 1])
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((k for k in range(rank, n) if (rows[k][0] >> col) & 1), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for k in range(n):
            if k != rank and (rows[k][0] >> col) & 1:
                rows[k][0] ^= rows[rank][0]
                rows[k][1] ^= rows[rank][1]
        pivots.append(col)
        rank += 1
    if any(rows[k][1] for k in range(rank, n)):
        return None
    lam = 0
    for k, col in enumerate(pivots):
        if rows[k][1]:
            lam |= 1 << col
    return FieldElement(ctx, lam)


def artin_schreier(alpha: FieldElement) -> ScalarProfile:
    """Solve lambda^2 + lambda = alpha and classify the scalar."""
    if not alpha:
        raise ValueError("alpha must be nonzero")
    m_alpha = element_degree(alpha)
    lam = solve_artin_schreier(alpha)
    image = alpha
    if lam is None:
        # the root lives in the quadratic extension of GF(2^m_alpha)
        ext = build_field(2 * m_alpha)
        image = embed(alpha, ext)
        lam = solve_artin_schreier(image)
        assert lam is not None
    m_lambda = element_degree(lam)
    return ScalarProfile(
        alpha=alpha,
        m_alpha=m_alpha,
        m_lambda=m_lambda,
        case_equal=(m_lambda == m_alpha),
        lam=lam,
        alpha_image=image,
    )


def absolute_trace(beta: FieldElement) -> int:
    """Trace from GF(2^m_beta) down to GF(2)."""
    return to_minimal_field(beta).trace()


@lru_cache(maxsize=None)
def subfield_isomorphism(ctx: FieldContext, m: int) -> dict:
    """Field isomorphism from the GF(2^m) inside ctx onto ``build_field(m)``.

    Returned as a dict on int values. A generator h of the subfield's unit
    group is sent to a root r of its minimal polynomial; h^i maps to r^i.
    """
    small = build_field(m)
    h = _subfield_generator(ctx, m)
    mp = minimal_polynomial(FieldElement(ctx, h))
    root = None
    for v in range(1, small.order):
        if _eval_f2_poly(small, mp, v) == 0:
            root = v
            break
    assert root is not None
    iso = {0: 0}
    a, b = 1, 1
    for _ in range((1 << m) - 1):
        iso[a] = b
        a = ctx.mul(a, h)
        b = small.mul(b, root)
    return iso
