"""F-signature of the pair (k[[x,y,z]], g_a^t) at dyadic t = a / 2^c.

For a principal ideal the colon (m^[q] : f^a) is, inside the box quotient,
exactly the kernel of multiplication by f^a. Hence

    length(R / (m^[q] : f^a)) = q^3 - dim ker = rank(M_{f^a}),

and s(R, f^(a/q)) = rank(M_{f^a}) / q^3 with q = 2^c. ``colon_length``
recomputes the same length the long way (explicit kernel basis, checked to
be an ideal) for small c.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .field import FieldElement, artin_schreier, to_minimal_field
from .formulas import to_decimal
from .hk_engine import dense_matrix, hk_power_sequence
from .linalg import nullspace_reference, rank_reference
from .polynomial import Box, power_mod_box, quartic

CSV_COLUMNS = ["m_alpha", "m_lambda", "c", "a", "t_decimal", "s_exact", "s_decimal", "deriv_decimal"]


@dataclass
class PairsSample:
    a: int
    c: int
    t: Fraction
    s_value: Fraction
    deriv_estimate: Optional[Fraction] = None


def pair_signature(alpha: FieldElement, a: int, c: int) -> Fraction:
    if a < 0 or c < 1:
        raise ValueError("need a >= 0 and c >= 1")
    if a == 0:
        return Fraction(1)
    vol = 8 ** c
    e = hk_power_sequence(alpha, c, a)[-1]
    return Fraction(vol - e, vol)


def colon_length(alpha: FieldElement, a: int, c: int) -> int:
    """length(R / (m^[q] : g^a)) from an explicit kernel basis (small c only)."""
    alpha = to_minimal_field(alpha)
    ctx = alpha.ctx
    q = 1 << c
    size = q ** 3
    f = power_mod_box(quartic(alpha), a, Box(c, 3))
    kernel = nullspace_reference(ctx, dense_matrix(f, c).tolist(), size)
    # the colon ideal mod m^[q] must be closed under multiplication by x, y, z
    shifted = []
    for v in kernel:
        for var in range(3):
            stride = q ** var
            w = [0] * size
            for idx, coeff in enumerate(v):
                if coeff and (idx // stride) % q + 1 < q:
                    w[idx + stride] = coeff
            shifted.append(w)
    if kernel and rank_reference(ctx, kernel + shifted) != len(kernel):
        raise AssertionError("kernel of multiplication is not an ideal")
    return size - len(kernel)


def derivative_curve(samples: Sequence[PairsSample]) -> List[Fraction]:
    """Forward differences (s(a+1) - s(a)) * 2^c."""
    out = []
    for cur, nxt in zip(samples, samples[1:]):
        if cur.c != nxt.c or nxt.a != cur.a + 1:
            raise ValueError(f"gap in the sample grid between a={cur.a} and a={nxt.a}")
        out.append((nxt.s_value - cur.s_value) * (1 << cur.c))
    return out


class Curve(list):
    """List of samples; ``truncated`` is set when a budget cut the run short."""

    truncated = False


def sample_curve(alpha: FieldElement, c: int, a_max: Optional[int] = None,
                 max_c: int = 7, time_budget: Optional[float] = None) -> Curve:
    """Samples a = 0..a_max (default 2^(c-1), i.e. t up to 1/2) with derivatives.

    Levels above ``max_c`` are refused outright; a run exceeding
    ``time_budget`` seconds stops early and returns a truncated curve.
    """
    if c < 1:
        raise ValueError("c must be at least 1")
    if c > max_c:
        raise ValueError(f"c={c} exceeds the configured ceiling {max_c}")
    if a_max is None:
        a_max = 1 << (c - 1)
    q = 1 << c
    vol = q ** 3
    start = time.monotonic()
    samples = Curve([PairsSample(0, c, Fraction(0), Fraction(1))])
    for a in range(1, a_max + 1):
        if time_budget is not None and time.monotonic() - start > time_budget:
            samples.truncated = True
            break
        e = hk_power_sequence(alpha, c, a)[-1]
        samples.append(PairsSample(a, c, Fraction(a, q), Fraction(vol - e, vol)))
    for s, d in zip(samples, derivative_curve(samples)):
        s.deriv_estimate = d
    return samples


def curve_csv(alpha: FieldElement, samples: Sequence[PairsSample], digits: int = 6) -> str:
    prof = artin_schreier(alpha)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in samples:
        w.writerow([
            prof.m_alpha, prof.m_lambda, s.c, s.a,
            to_decimal(s.t, digits),
            f"{s.s_value.numerator}/{s.s_value.denominator}",
            to_decimal(s.s_value, digits),
            "" if s.deriv_estimate is None else to_decimal(s.deriv_estimate, digits),
        ])
    return buf.getvalue()
