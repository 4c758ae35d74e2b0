"""Sparse multivariate polynomials over GF(2^N) with box truncation.

The box of level n is the monomial ideal (x_1^q, ..., x_d^q), q = 2^n.
Everything the Hilbert-Kunz code needs depends only on a polynomial modulo
that ideal, so products and powers can drop monomials leaving the box as
they are produced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .field import FieldContext, FieldElement, build_field

Exps = Tuple[int, ...]

VARIABLES = {3: ("x", "y", "z"), 5: ("x", "y", "z", "u", "v")}


def variable_names(nvars: int) -> Tuple[str, ...]:
    return VARIABLES.get(nvars, tuple(f"x{i}" for i in range(nvars)))


@dataclass(frozen=True)
class Box:
    n: int
    nvars: int

    @property
    def q(self) -> int:
        return 1 << self.n

    def contains(self, e: Exps) -> bool:
        q = self.q
        return all(k < q for k in e)


class MultiPoly:
    """Polynomial as a dict {exponent tuple: nonzero coefficient int}."""

    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldContext, nvars: int, terms: Optional[Dict[Exps, int]] = None):
        self.ctx = ctx
        self.nvars = nvars
        self.terms: Dict[Exps, int] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, ctx: FieldContext, nvars: int, c: int = 1) -> "MultiPoly":
        return cls(ctx, nvars, {(0,) * nvars: c})

    def copy(self) -> "MultiPoly":
        p = MultiPoly(self.ctx, self.nvars)
        p.terms = dict(self.terms)
        return p

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx.degree, self.nvars, frozenset(self.terms.items())))

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars or self.ctx != other.ctx:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) ^ c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = MultiPoly(self.ctx, self.nvars)
        p.terms = out
        return p

    __sub__ = __add__

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        return multiply(self, other)

    def scale(self, c: int) -> "MultiPoly":
        mul = self.ctx.mul
        return MultiPoly(self.ctx, self.nvars, {e: mul(v, c) for e, v in self.terms.items()})

    def degree(self, weights: Optional[Sequence[int]] = None) -> int:
        w = weights or (1,) * self.nvars
        return max(sum(a * b for a, b in zip(e, w)) for e in self.terms) if self.terms else -1

    def is_homogeneous(self, weights: Sequence[int], modulus: int = 0) -> bool:
        """Homogeneous for the Z-grading (modulus 0) or Z/modulus-grading given by weights."""
        degs = set()
        for e in self.terms:
            d = sum(a * b for a, b in zip(e, weights))
            degs.add(d % modulus if modulus else d)
        return len(degs) <= 1

    def truncate(self, box: Box) -> "MultiPoly":
        q = box.q
        p = MultiPoly(self.ctx, self.nvars)
        p.terms = {e: c for e, c in self.terms.items() if max(e, default=0) < q}
        return p

    def coefficient_field_degree(self) -> int:
        """Degree over GF(2) of the field generated by the coefficients."""
        from .field import element_degree
        from math import lcm

        m = 1
        for c in set(self.terms.values()):
            m = lcm(m, element_degree(FieldElement(self.ctx, c)))
        return m

    def map_coefficients(self, ctx: FieldContext, fn) -> "MultiPoly":
        return MultiPoly(ctx, self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def format(self) -> str:
        if not self.terms:
            return "0"
        names = variable_names(self.nvars)
        parts = []
        for e, c in self.sorted_terms():
            factors = [f"{c:#x}"]
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"MultiPoly(gf2^{self.ctx.degree}, {self.format()})"


_TERM_RE = re.compile(r"^(0x[0-9a-fA-F]+)((?:\*[a-z][a-z0-9]*(?:\^\d+)?)*)$")


def parse(text: str, ctx: FieldContext, nvars: int) -> MultiPoly:
    """Inverse of ``MultiPoly.format``."""
    text = text.strip()
    names = variable_names(nvars)
    index = {name: i for i, name in enumerate(names)}
    p = MultiPoly(ctx, nvars)
    if text == "0":
        return p
    for raw in text.split("+"):
        tok = raw.replace(" ", "")
        m = _TERM_RE.match(tok)
        if not m:
            raise ValueError(f"cannot parse term {raw!r}")
        c = int(m.group(1), 16)
        if c >= ctx.order:
            raise ValueError(f"coefficient {c:#x} not in GF(2^{ctx.degree})")
        e = [0] * nvars
        for factor in filter(None, m.group(2).split("*")):
            name, _, k = factor.partition("^")
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            e[index[name]] += int(k) if k else 1
        p = p + MultiPoly(ctx, nvars, {tuple(e): c})
    return p


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

def multiply(p: MultiPoly, q: MultiPoly, box: Optional[Box] = None) -> MultiPoly:
    """Product in characteristic 2; monomials outside ``box`` are dropped."""
    p._check(q)
    if len(p) > len(q):
        p, q = q, p
    mul = p.ctx.mul
    lim = box.q if box is not None else None
    acc: Dict[Exps, int] = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            if lim is not None and max(e) >= lim:
                continue
            acc[e] = acc.get(e, 0) ^ mul(c1, c2)
    out = MultiPoly(p.ctx, p.nvars)
    out.terms = {e: c for e, c in acc.items() if c}
    return out


def square(p: MultiPoly, box: Optional[Box] = None) -> MultiPoly:
    """Frobenius: square the coefficients and double the exponents."""
    sqr = p.ctx.sqr
    lim = box.q if box is not None else None
    out = MultiPoly(p.ctx, p.nvars)
    terms = {}
    for e, c in p.terms.items():
        e2 = tuple(2 * k for k in e)
        if lim is not None and max(e2, default=0) >= lim:
            continue
        terms[e2] = sqr(c)
    out.terms = terms
    return out


def power_mod_box(p: MultiPoly, j: int, box: Box) -> MultiPoly:
    """p^j modulo the box ideal, left-to-right binary exponentiation.

    Each step squares the accumulator (cheap in characteristic 2) and
    multiplies by p for a set bit, so only products with the short base
    polynomial are ever formed.
    """
    if j < 0:
        raise ValueError("negative exponent")
    acc = MultiPoly.constant(p.ctx, p.nvars).truncate(box)
    base = p.truncate(box)
    for bit in bin(j)[2:] if j else "":
        acc = square(acc, box)
        if bit == "1":
            acc = multiply(acc, base, box)
    return acc


def power_sequence(p: MultiPoly, jmax: int, box: Box) -> Iterable[MultiPoly]:
    """Yield p^1, ..., p^jmax modulo the box, each from the previous one."""
    base = p.truncate(box)
    acc = base
    for j in range(1, jmax + 1):
        if j > 1:
            acc = multiply(acc, base, box)
        yield acc


# ---------------------------------------------------------------------------
# The quartic family
# ---------------------------------------------------------------------------

def quartic(alpha: FieldElement) -> MultiPoly:
    """alpha*x^2*y^2 + z^4 + x*y*z^2 + x^3*z + y^3*z in (x, y, z)."""
    if not alpha:
        raise ValueError("alpha must be nonzero")
    return MultiPoly(alpha.ctx, 3, {
        (2, 2, 0): alpha.value,
        (0, 0, 4): 1,
        (1, 1, 2): 1,
        (3, 0, 1): 1,
        (0, 3, 1): 1,
    })


def smoothed(alpha: FieldElement) -> MultiPoly:
    """u*v + quartic(alpha) in (x, y, z, u, v)."""
    g = quartic(alpha)
    terms = {e + (0, 0): c for e, c in g.terms.items()}
    terms[(0, 0, 0, 1, 1)] = 1
    return MultiPoly(alpha.ctx, 5, terms)


def construct(alpha: FieldElement, variant: str = "quartic") -> MultiPoly:
    if variant == "quartic":
        return quartic(alpha)
    if variant == "smoothed":
        return smoothed(alpha)
    raise ValueError(f"unknown variant {variant!r}")


def disjoint_sum(alphas: Sequence[FieldElement]) -> MultiPoly:
    """u*v + g_{a_1}(x_1,y_1,z_1) + ... + g_{a_t}(x_t,y_t,z_t).

    Variables are ordered x_1, y_1, z_1, ..., x_t, y_t, z_t, u, v. All
    alphas must share a context.
    """
    t = len(alphas)
    ctx = alphas[0].ctx
    nv = 3 * t + 2
    terms = {}
    for i, a in enumerate(alphas):
        if a.ctx != ctx:
            raise ValueError("alphas must share a field")
        for e, c in quartic(a).terms.items():
            full = [0] * nv
            full[3 * i:3 * i + 3] = e
            terms[tuple(full)] = c
    uv = [0] * nv
    uv[-2] = uv[-1] = 1
    terms[tuple(uv)] = 1
    return MultiPoly(ctx, nv, terms)


__all__ = [
    "Box",
    "MultiPoly",
    "multiply",
    "square",
    "power_mod_box",
    "power_sequence",
    "quartic",
    "smoothed",
    "construct",
    "disjoint_sum",
    "parse",
    "build_field",
]
