from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hklab.formulas import (
    HKSeries, c_seq, closed_en_G, d_seq, ehk_s, gf_at_sixteenth, gf_eval, gf_partial,
    gf_tail_bound, hadamard, hadamard_all, hks_from_values, iterated_en, monsky_reference,
    multi_param, multi_param_closed, multi_param_geometric, multi_scaled, pi_coeff,
    predicted_scaled, scaled, to_decimal,
)


def test_d_seq_values():
    assert d_seq(0, 3) == 4
    assert [d_seq(n, 3) for n in (1, 2, 3)] == [12, 24, 64]
    for m in range(2, 7):
        for r in range(1, 6):
            assert d_seq(m * r, m) == 2 ** (m * r + 3)
    with pytest.raises(ValueError):
        d_seq(1, 1)


def test_c_seq_values():
    assert [c_seq(n) for n in range(4)] == [4, 12, 32, 56]
    for n in range(1, 60):
        assert c_seq(n + 2) == c_seq(n + 1) + 2 * c_seq(n)


def test_ehk_values():
    assert ehk_s(1) == (Fraction(767, 476), Fraction(185, 476))
    assert ehk_s(2) == (Fraction(29, 18), Fraction(7, 18))
    prev = ehk_s(2)
    for m in range(3, 21):
        e, s = ehk_s(m)
        assert e + s == 2
        # the F-signatures form an increasing chain, so e_HK falls
        assert e < prev[0] and s > prev[1]
        prev = (e, s)


def test_closed_en():
    assert closed_en_G(1, 2) == 24
    assert closed_en_G(2, 3) == 408
    assert closed_en_G(3, 4) == 6576
    with pytest.raises(ValueError):
        closed_en_G(2, 2)
    for m in range(2, 9):
        for n in range(1, m):
            assert iterated_en(m, n) == closed_en_G(n, m)


def test_gf_values():
    assert gf_eval(Fraction(1, 16), 1) == Fraction(582, 119)
    assert gf_eval(Fraction(1, 16), 2) == Fraction(44, 9)
    assert 1 + Fraction(1, 8) * gf_eval(Fraction(1, 16), 2) == Fraction(29, 18)
    for m in range(1, 13):
        assert gf_eval(Fraction(1, 16), m) == gf_at_sixteenth(m)
    with pytest.raises(ValueError):
        gf_eval(Fraction(1, 2), 3)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_gf_taylor_coefficients(m):
    """sympy's expansion of the closed form reproduces the sequence."""
    w = sympy.symbols("w")
    if m == 1:
        expr = -6 + 2 * (w + 5) / ((w + 1) * (1 - 2 * w))
    else:
        expr = ((2 ** (m + 3) * w ** (m + 1) + 2 ** (m + 1) * w ** m - 4 * w - 4)
                / ((1 - 2 * w) * (2 ** m * w ** m - 1)))
    poly = sympy.series(expr, w, 0, 16).removeO()
    coeffs = [poly.coeff(w, n) for n in range(16)]
    assert coeffs == [c_seq(n) if m == 1 else d_seq(n, m) for n in range(16)]


@pytest.mark.parametrize("m", range(1, 13))
def test_gf_partial_sums(m):
    for w in (Fraction(1, 16), Fraction(1, 5), Fraction(-1, 7)):
        diff = abs(gf_eval(w, m) - gf_partial(w, m, 60))
        assert diff <= gf_tail_bound(w, m, 60)
        assert diff < Fraction(1, 2 ** 50)


def test_scaled_series():
    s = hks_from_values([1, 24, 408, 6592], 5)
    assert scaled(s) == [1, 8, 24, 64]
    assert s.scaled() == predicted_scaled(2, 3)
    with pytest.raises(ValueError):
        HKSeries(3, [2, 1])


def test_hadamard_examples():
    assert hadamard([1, 2, 4], [1, 3, 5]) == [1, 6, 20]
    with pytest.raises(ValueError):
        hadamard([1], [1, 2])


lists = st.integers(1, 8).flatmap(lambda n: st.tuples(*[st.lists(st.integers(-99, 99), min_size=n, max_size=n)] * 3))


@settings(max_examples=100)
@given(lists)
def test_hadamard_algebra(triple):
    a, b, c = triple
    assert hadamard(a, b) == hadamard(b, a)
    assert hadamard(hadamard(a, b), c) == hadamard(a, hadamard(b, c)) == hadamard_all([a, b, c])


def test_hadamard_of_two_quartics():
    N = 3
    got = hadamard(predicted_scaled(2, N), predicted_scaled(3, N))
    # scaled series of u*v + g_a + g_b: 1 + 64w + 4w * sum pi_n w^n
    assert got == [1 * 1, 8 * 8, 4 * pi_coeff([2, 3], 1), 4 * pi_coeff([2, 3], 2)]
    assert got == multi_scaled([2, 3], N)


def test_pi_coeff():
    assert pi_coeff([2, 3], 1) == 144
    assert pi_coeff([2, 3], 6) == 2 ** 18
    assert pi_coeff([4, 5, 6], 0) == 4 ** 3
    for ms in ([2], [2, 3], [3, 3, 4], [2, 4, 5, 6]):
        for n in range(61):
            pi_coeff(ms, n)


def test_multi_param():
    assert multi_param([2, 2]) == (Fraction(3145, 2046), Fraction(947, 2046))
    assert multi_param_closed([2, 2]) == Fraction(381, 248) + Fraction(7, 8184)
    for m in range(2, 9):
        assert multi_param([m]) == ehk_s(m)
    e22, e23, e33 = (multi_param(ms)[0] for ms in ([2, 2], [2, 3], [3, 3]))
    assert min(e22, e33) < e23 < max(e22, e33)
    with pytest.raises(ValueError):
        multi_param([1, 2])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=4))
def test_multi_param_forms_agree(ms):
    assert multi_param_closed(ms) == multi_param_geometric(ms)
    e, s = multi_param(ms)
    assert e + s == 2


def test_monsky():
    assert monsky_reference(2) == Fraction(49, 16)
    assert monsky_reference(3) == Fraction(193, 64)
    vals = [monsky_reference(k) for k in range(2, 12)]
    assert all(a > b > 3 for a, b in zip(vals, vals[1:]))


def test_decimal_rounding():
    assert to_decimal(Fraction(193, 64), 5) == "3.01563"
    assert to_decimal(Fraction(-11, 4), 2) == "-2.75"
    assert to_decimal(Fraction(2, 3), 0) == "1"
