import pytest
from hypothesis import given, settings, strategies as st

from hklab.bracket import (
    INITIAL, GroupVector, SigmaParams, apply_sigma, bracket_sum, bracket_value,
    closed_form_count, count_ab, enumerate_distribution, is_reachable_shape,
    level_distribution, level_distributions, min_level_nonzero, state, walk,
)
from hklab.formulas import bracket_sum_formula

PARAMS = [SigmaParams(m, ce) for m in range(1, 6) for ce in (False, True)]


def test_initial_state_steps():
    for p in PARAMS:
        assert apply_sigma(0, INITIAL, p).key == (1, 0, 2, 0)
        assert apply_sigma(1, INITIAL, p).key == (0, 0, 2, 0)
        assert str(state(0, 0, p)) == "2C + D"
        assert str(state(1, 0, p)) == "A_1 + 2C"
        assert str(state(1, 1, p)) == "2C"
        assert bracket_value(0, 0, p) == 4
        assert bracket_value(1, 0, p) == 12
        assert bracket_value(1, 1, p) == 0


def test_table_rows():
    a1 = GroupVector(1, 0, 0, 0, 1)
    p2 = SigmaParams(2, False)
    assert apply_sigma(0, a1, p2).key == (1, 0, 0, 0)
    assert apply_sigma(1, a1, p2).key == (0, 1, 0, 0)
    p1 = SigmaParams(1, False)
    assert apply_sigma(0, a1, p1).key == (0, 1, 0, 0)
    assert apply_sigma(1, a1, p1).key == (1, 0, 0, 0)


def test_level_two_states():
    p = SigmaParams(2, False)
    assert str(state(2, 0, p)) == "A_2 + 2C"
    assert str(state(2, 1, p)) == "B_2 + 2C"
    assert bracket_value(2, 1, p) == 20
    d = level_distribution(2, p)
    assert d.a_count(2) == 1 and d.b_count(2) == 1


def test_state_range():
    with pytest.raises(ValueError):
        state(2, 4, SigmaParams(2, False))


def test_level_one_distribution():
    d = level_distribution(1, SigmaParams(3, True))
    assert d.counts == {(1, 0, 2, 0): 1, (0, 0, 2, 0): 1}


@pytest.mark.parametrize("p", PARAMS, ids=str)
def test_distribution_equals_enumeration(p):
    for n, dist in enumerate(level_distributions(12, p)):
        assert dist.total() == 1 << n
        assert dist.counts == enumerate_distribution(n, p).counts


@pytest.mark.parametrize("p", PARAMS, ids=str)
def test_reachable_shapes_and_upper_half(p):
    for n in range(0, 11):
        for j, s in walk(n, p):
            assert is_reachable_shape(s)
            if n and j >= 1 << (n - 1):
                assert s.value() == 0


@pytest.mark.parametrize("m", range(1, 7))
def test_closed_forms_match_counts(m):
    dists = level_distributions(30, SigmaParams(m, False))
    for n in range(1, 31):
        for t in range(2, 13):
            assert closed_form_count(n, t, m, "a") == dists[n].a_count(t), (n, t)
            assert closed_form_count(n, t, m, "b") == dists[n].b_count(t), (n, t)


def test_named_closed_forms():
    assert count_ab(4, 2, SigmaParams(2, False))[0] == 2
    assert count_ab(1, 2, SigmaParams(1, False)) == (1, 0)
    for m in range(2, 6):
        p = SigmaParams(m, False)
        for t in range(2, 6):
            assert count_ab(m * (t - 1), t, p)[0] == 2 ** ((m - 2) * (t - 1))
        for r in range(1, 5):
            assert count_ab(m * r, 2, p)[0] == 2 ** ((m - 1) * r - 1)
        for n in range(1, 13):
            if n % m:
                assert all(count_ab(n, t, p)[1] == 0 for t in range(2, 10))
    for t in range(2, 9):
        assert min_level_nonzero(t, SigmaParams(1, False)) == max(1, 2 * t - 3)


@pytest.mark.parametrize("m", range(2, 7))
def test_case_flag_irrelevant_for_counts(m):
    for a, b in zip(level_distributions(16, SigmaParams(m, False)),
                    level_distributions(16, SigmaParams(m, True))):
        assert a.counts == b.counts


def test_recurrences():
    for m in range(2, 6):
        ds = level_distributions(24, SigmaParams(m, False))
        for n in range(1, 24):
            for t in range(2, 12):
                a, a_left = ds[n].a_count(t), ds[n].a_count(t - 1)
                if (n + 1) % m == 0:
                    want = a
                elif n % m == 0:
                    want = 2 * a + a_left
                else:
                    want = 2 * a
                assert ds[n + 1].a_count(t) == want, (m, n, t)
                assert ds[n].b_count(t) == (a if n % m == 0 else 0)
    ds = level_distributions(24, SigmaParams(1, False))
    for n in range(1, 23):
        for t in range(3, 12):
            assert ds[n + 1].a_count(t) == ds[n].a_count(t) + ds[n - 1].a_count(t - 1)
            assert ds[n + 1].b_count(t) == ds[n].a_count(t)


def test_bracket_sums():
    assert bracket_sum(0, SigmaParams(2, False)) == 4
    assert bracket_sum(2, SigmaParams(2, False)) == 32
    assert bracket_sum(2, SigmaParams(1, False)) == 32
    for p in PARAMS:
        for n in range(31):
            assert bracket_sum(n, p) == bracket_sum_formula(n, p.m_alpha), (p, n)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.booleans(), st.integers(0, 16), st.data())
def test_state_is_composition_of_sigmas(m, ce, n, data):
    p = SigmaParams(m, ce)
    j = data.draw(st.integers(0, (1 << n) - 1))
    s = state(n, j, p)
    if n:
        assert apply_sigma(j & 1, state(n - 1, j >> 1, p), p) == s
    assert s.level == n and is_reachable_shape(s)
