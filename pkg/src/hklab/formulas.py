"""Closed forms, generating functions and Hilbert-Kunz series, all exact.

Rationals are ``fractions.Fraction``; series are lists of Python ints.
No floating point is used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import List, Sequence, Tuple


def d_seq(n: int, m: int) -> int:
    """Bracket sums for m_alpha = m > 1: 4, then 2^(n+3) if m | n else 3*2^(n+1)."""
    if m < 2:
        raise ValueError("d_seq needs m >= 2; use c_seq for m = 1")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 4
    return 1 << (n + 3) if n % m == 0 else 3 << (n + 1)


def c_seq(n: int) -> int:
    """Bracket sums for alpha = 1: 4, then (22 * 2^n + (-1)^n * 8) / 3."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 4
    num = 22 * (1 << n) + (8 if n % 2 == 0 else -8)
    q, r = divmod(num, 3)
    assert r == 0
    return q


def bracket_sum_formula(n: int, m: int) -> int:
    """d_seq for m > 1, c_seq for m = 1."""
    return c_seq(n) if m == 1 else d_seq(n, m)


def ehk_s(m: int) -> Tuple[Fraction, Fraction]:
    """(e_HK, s) of k[[x,y,z,u,v]]/(uv + g_a) for m_alpha = m."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        e, s = Fraction(767, 476), Fraction(185, 476)
    else:
        den = 7 * (1 << (3 * m + 2)) - 28
        e = Fraction(45 * (1 << (3 * m)) - 38, den)
        s = Fraction(11 * (1 << (3 * m)) - 18, den)
    if e + s != 2:
        raise AssertionError(f"e_HK + s != 2 for m={m}")
    return e, s


def closed_en_G(n: int, m: int) -> int:
    """e_n(uv + g_a) = (45/28) 16^n - (3/7) 2^(n+1), valid for 1 <= n < m."""
    if not 1 <= n < m:
        raise ValueError(f"formula holds only for 1 <= n < m (got n={n}, m={m})")
    v = Fraction(45, 28) * 16 ** n - Fraction(3, 7) * 2 ** (n + 1)
    assert v.denominator == 1
    return v.numerator


def _pole_check(w: Fraction, m: int):
    if abs(w) >= Fraction(1, 2):
        raise ValueError("generating functions are only evaluated for |w| < 1/2")


def gf_eval(w, m: int) -> Fraction:
    """Sum over n of d_n w^n (c_n w^n when m = 1) in closed form."""
    w = Fraction(w)
    _pole_check(w, m)
    if m == 1:
        return -6 + 2 * (w + 5) / ((w + 1) * (1 - 2 * w))
    num = 2 ** (m + 3) * w ** (m + 1) + 2 ** (m + 1) * w ** m - 4 * w - 4
    den = (1 - 2 * w) * (2 ** m * w ** m - 1)
    if den == 0:
        raise ValueError("pole")
    return num / den


def gf_partial(w, m: int, terms: int) -> Fraction:
    """Direct partial sum of the first ``terms`` coefficients."""
    w = Fraction(w)
    total = Fraction(0)
    p = Fraction(1)
    for n in range(terms):
        total += bracket_sum_formula(n, m) * p
        p *= w
    return total


def gf_tail_bound(w, m: int, terms: int) -> Fraction:
    """Upper bound on the omitted tail: coefficients are at most 8*2^n."""
    w = abs(Fraction(w))
    r = 2 * w
    return 8 * r ** terms / (1 - r)


def gf_at_sixteenth(m: int) -> Fraction:
    """Value at w = 1/16 as printed for the two families."""
    if m == 1:
        return Fraction(582, 119)
    return Fraction(17 * 2 ** (3 * m + 1) - 20, 7 * 2 ** (3 * m) - 7)


def iterated_en(m: int, n: int) -> Fraction:
    """e_n(uv + g_a) from e_n / 16^n = 1 + (1/8) sum_{j<n} d_j / 16^j."""
    acc = Fraction(1)
    for j in range(n):
        acc += Fraction(bracket_sum_formula(j, m), 8 * 16 ** j)
    return acc * 16 ** n


# ---------------------------------------------------------------------------
# Hilbert-Kunz series
# ---------------------------------------------------------------------------

@dataclass
class HKSeries:
    """Truncation e_0, ..., e_N of sum e_n(f) w^n for f in ``dim_vars`` variables."""

    dim_vars: int
    coeffs: List[int]

    def __post_init__(self):
        if any(c < 0 for c in self.coeffs):
            raise ValueError("Hilbert-Kunz numbers are nonnegative")
        if self.coeffs and self.coeffs[0] not in (0, 1):
            raise ValueError("e_0 must be 0 or 1")

    def scaled(self) -> List[int]:
        return scaled(self)


def hks_from_values(values: Sequence[int], r: int) -> HKSeries:
    return HKSeries(r, list(values))


def scaled(series: HKSeries) -> List[int]:
    """Coefficients of (1 - 2^(r-1) w) * HKS: e_n - 2^(r-1) e_(n-1)."""
    f = 1 << (series.dim_vars - 1)
    c = series.coeffs
    return [c[0]] + [c[n] - f * c[n - 1] for n in range(1, len(c))] if c else []


def predicted_scaled(m: int, N: int) -> List[int]:
    """1 + 2w sum d_n w^n, coefficients 0..N."""
    return [1] + [2 * bracket_sum_formula(n, m) for n in range(N)]


def hadamard(s1: Sequence[int], s2: Sequence[int]) -> List[int]:
    """Termwise product of two coefficient lists of equal length."""
    if len(s1) != len(s2):
        raise ValueError(f"length mismatch: {len(s1)} vs {len(s2)}")
    return [a * b for a, b in zip(s1, s2)]


def hadamard_all(series: Sequence[Sequence[int]]) -> List[int]:
    out = list(series[0])
    for s in series[1:]:
        out = hadamard(out, s)
    return out


# ---------------------------------------------------------------------------
# Several disjoint quartics
# ---------------------------------------------------------------------------

def _check_ms(ms: Sequence[int]):
    if not ms:
        raise ValueError("need at least one degree")
    if any(m < 2 for m in ms):
        raise ValueError("all degrees must exceed 1")


def pi_coeff(ms: Sequence[int], n: int) -> int:
    """Product of d_(n, a_i), cross-checked against the divisor-count form."""
    _check_ms(ms)
    t = len(ms)
    product = 1
    for m in ms:
        product *= d_seq(n, m)
    if n == 0:
        case = 4 ** t
    else:
        r = sum(1 for m in ms if n % m == 0)
        case = 3 ** (t - r) * 2 ** (t * n + t + 2 * r)
    if product != case:
        raise ArithmeticError(f"pi_{n} mismatch for {list(ms)}: {product} != {case}")
    return product


def multi_scaled(ms: Sequence[int], N: int) -> List[int]:
    """1 + 8^t w + 2^t w sum_{n>=1} pi_n w^n, coefficients 0..N."""
    t = len(ms)
    out = [1]
    if N >= 1:
        out.append(8 ** t)
    for k in range(2, N + 1):
        out.append(2 ** t * pi_coeff(ms, k - 1))
    return out[:N + 1]


def _subsets(ms: Sequence[int]):
    t = len(ms)
    for r in range(1, t + 1):
        for idx in combinations(range(t), r):
            yield r, lcm(*(ms[i] for i in idx))


def multi_param_closed(ms: Sequence[int]) -> Fraction:
    """e_HK as the explicit sum over nonempty index subsets."""
    _check_ms(ms)
    t = len(ms)
    e = Fraction(3, 2) + Fraction(3 ** t, 2 ** (3 * t + 2) - 2 ** (t + 1))
    for r, L in _subsets(ms):
        e += Fraction(3 ** (t - r), 2 ** ((2 * t + 1) * L + t + 1) - 2 ** (t + 1))
    return e


def multi_param_geometric(ms: Sequence[int]) -> Fraction:
    """e_HK by summing the geometric series and evaluating at w = 2^(-3t-1)."""
    _check_ms(ms)
    t = len(ms)
    w = Fraction(1, 2 ** (3 * t + 1))
    v = 1 + 8 ** t * w + 24 ** t * w ** 2 / (1 - 2 ** t * w)
    for r, L in _subsets(ms):
        v += 3 ** (t - r) * 2 ** (t * L + 2 * t) * w ** (L + 1) / (1 - 2 ** (t * L) * w ** L)
    return v


def multi_param(ms: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """(e_HK, s) for u*v + g_(a_1) + ... + g_(a_t) with degrees ms."""
    e = multi_param_closed(ms)
    g = multi_param_geometric(ms)
    if e != g:
        raise ArithmeticError(f"closed form {e} != series value {g}")
    s = 2 - e
    return e, s


def monsky_reference(m_lambda: int) -> Fraction:
    """e_HK(k[[x,y,z]]/(g_a)) = 3 + 4^(-m_lambda)."""
    if m_lambda < 2:
        raise ValueError("m_lambda is at least 2")
    return 3 + Fraction(1, 4 ** m_lambda)


def to_decimal(x: Fraction, digits: int = 12) -> str:
    """Exact rational rounded half-up to ``digits`` decimals."""
    scale = 10 ** digits
    sign = "-" if x < 0 else ""
    q = abs(x) * scale
    v = (q.numerator * 2 + q.denominator) // (2 * q.denominator)
    whole, frac = divmod(v, scale)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"
