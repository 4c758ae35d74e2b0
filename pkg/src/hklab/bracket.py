"""The symbolic dynamical system behind the bracket values <n, j, alpha>.

States are elements a*A_n + b*B_n + c*C + d*D of a free abelian group; two
morphisms sigma_0 and sigma_1 raise the level by one. The bits of j, read
from the most significant end, pick which morphism to apply at each step,
starting from 2C + D at level 0. The bracket is (3a + 5b + d) * 2^c.

Which table of morphisms applies depends only on m_alpha and on whether
the Artin-Schreier root lambda of alpha has the same degree as alpha.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterator, List, Tuple

from .field import FieldElement, artin_schreier

State = Tuple[int, int, int, int]


@dataclass(frozen=True)
class SigmaParams:
    m_alpha: int
    case_equal: bool

    def __post_init__(self):
        if self.m_alpha < 1:
            raise ValueError("m_alpha must be positive")

    @classmethod
    def from_alpha(cls, alpha: FieldElement) -> "SigmaParams":
        prof = artin_schreier(alpha)
        return cls(prof.m_alpha, prof.case_equal)


@dataclass(frozen=True)
class GroupVector:
    a: int
    b: int
    c: int
    d: int
    level: int

    @property
    def key(self) -> State:
        return (self.a, self.b, self.c, self.d)

    def value(self) -> int:
        return bracket_of(self.key)

    def __str__(self):
        parts = []
        for coeff, sym in ((self.a, f"A_{self.level}"), (self.b, f"B_{self.level}"),
                           (self.c, "C"), (self.d, "D")):
            if coeff:
                parts.append(sym if coeff == 1 else f"{coeff}{sym}")
        return " + ".join(parts) or "0"


def bracket_of(key: State) -> int:
    a, b, c, d = key
    return (3 * a + 5 * b + d) << c


INITIAL = GroupVector(0, 0, 2, 1, 0)


def _hits(m: int, k: int, parity: int) -> bool:
    """m | k and k/m has the given parity (0 even, 1 odd)."""
    return k % m == 0 and (k // m) % 2 == parity


def apply_sigma_key(bit: int, key: State, level: int, params: SigmaParams) -> State:
    """sigma_bit on a state at ``level``; the result lives at level + 1."""
    a, b, c, d = key
    m = params.m_alpha
    # the case_equal table swaps the even/odd conditions of the other one
    parity = 1 - bit if params.case_equal else bit
    a_to_b = _hits(m, level + 1, parity)
    b_dies = _hits(m, level, parity)
    na = nb = 0
    nc = c
    if a_to_b:
        nb += a
    else:
        na += a
    if not b_dies:
        na += b
        nc += b
    if bit == 0:
        na += d
    return (na, nb, nc, 0)


def apply_sigma(bit: int, state: GroupVector, params: SigmaParams) -> GroupVector:
    a, b, c, d = apply_sigma_key(bit, state.key, state.level, params)
    return GroupVector(a, b, c, d, state.level + 1)


def state(n: int, j: int, params: SigmaParams) -> GroupVector:
    """f(n, j): apply sigma_b for the n bits of j, most significant first."""
    if not 0 <= j < (1 << n):
        raise ValueError(f"j={j} out of range for level {n}")
    s = INITIAL
    for i in range(n - 1, -1, -1):
        s = apply_sigma((j >> i) & 1, s, params)
    return s


def bracket_value(n: int, j: int, params: SigmaParams) -> int:
    return state(n, j, params).value()


def walk(n: int, params: SigmaParams) -> Iterator[Tuple[int, GroupVector]]:
    """Every (j, f(n, j)) by depth-first traversal of the binary tree."""
    stack = [(0, 0, INITIAL)]
    while stack:
        lvl, j, s = stack.pop()
        if lvl == n:
            yield j, s
            continue
        # push bit 1 first so that j comes out ascending
        stack.append((lvl + 1, 2 * j + 1, apply_sigma(1, s, params)))
        stack.append((lvl + 1, 2 * j, apply_sigma(0, s, params)))


def is_reachable_shape(s: GroupVector) -> bool:
    """Shape constraints every state reached from 2C + D satisfies."""
    return (
        s.a in (0, 1) and s.b in (0, 1) and s.a * s.b == 0
        and s.d in (0, 1) and (s.d == 0 or s.level == 0)
        and 0 <= s.c <= s.level + 2
    )


@dataclass
class SymbolDistribution:
    level: int
    counts: Dict[State, int]

    def total(self) -> int:
        return sum(self.counts.values())

    def a_count(self, t: int) -> int:
        return self.counts.get((1, 0, t, 0), 0)

    def b_count(self, t: int) -> int:
        return self.counts.get((0, 1, t, 0), 0)


def evolve(dist: SymbolDistribution, params: SigmaParams) -> SymbolDistribution:
    nxt: Counter = Counter()
    for key, cnt in dist.counts.items():
        for bit in (0, 1):
            nxt[apply_sigma_key(bit, key, dist.level, params)] += cnt
    return SymbolDistribution(dist.level + 1, dict(nxt))


def level_distributions(n: int, params: SigmaParams) -> List[SymbolDistribution]:
    """Distributions for levels 0..n, evolving the multiset of states."""
    dist = SymbolDistribution(0, {INITIAL.key: 1})
    out = [dist]
    for _ in range(n):
        dist = evolve(dist, params)
        out.append(dist)
    return out


def level_distribution(n: int, params: SigmaParams) -> SymbolDistribution:
    return level_distributions(n, params)[-1]


def enumerate_distribution(n: int, params: SigmaParams) -> SymbolDistribution:
    """Same counts as ``level_distribution`` by walking all 2^n indices."""
    counts: Counter = Counter()
    for _, s in walk(n, params):
        counts[s.key] += 1
    return SymbolDistribution(n, dict(counts))


def count_ab(n: int, t: int, params: SigmaParams) -> Tuple[int, int]:
    d = level_distribution(n, params)
    return d.a_count(t), d.b_count(t)


def bracket_sum(n: int, params: SigmaParams) -> int:
    """Sum of <n, j, alpha> over 0 <= j < 2^n."""
    return sum(cnt * bracket_of(key) for key, cnt in level_distribution(n, params).counts.items())


def closed_form_count(n: int, t: int, m: int, kind: str = "a") -> int:
    """a_{n,t} (or b_{n,t}) in closed form.

    m > 1: write n = m(r-1) + i with 0 < i <= m; then
      a = 2^((m-1)r + 1 - t) C(r-1, t-2)        if i = m,
      a = 2^((m-1)r + i + 2 - t - m) C(r-1, t-2) if i < m,
    and b equals a when m | n, else 0.
    m = 1: a_{n,t} = C(n+1-t, t-2) and b_{n+1,t} = a_{n,t}.
    """
    if t < 2:
        raise ValueError("closed forms need t >= 2")
    if kind not in ("a", "b"):
        raise ValueError(f"kind must be 'a' or 'b', not {kind!r}")
    if n <= 0:
        return 0
    if m == 1:
        if kind == "b":
            return closed_form_count(n - 1, t, 1, "a")
        top = n + 1 - t
        return comb(top, t - 2) if top >= 0 else 0
    r, i = divmod(n - 1, m)
    r, i = r + 1, i + 1
    if kind == "b" and i != m:
        return 0
    binom = comb(r - 1, t - 2)
    if binom == 0:
        return 0
    if i == m:
        return binom << ((m - 1) * r + 1 - t)
    return binom << ((m - 1) * r + i + 2 - t - m)


def min_level_nonzero(t: int, params: SigmaParams, limit: int = 64) -> int:
    """Least n >= 1 with a_{n,t} != 0, by evolving the distribution."""
    dist = SymbolDistribution(0, {INITIAL.key: 1})
    for n in range(1, limit + 1):
        dist = evolve(dist, params)
        if dist.a_count(t):
            return n
    raise ValueError(f"a_(n,{t}) vanishes for all n <= {limit}")
