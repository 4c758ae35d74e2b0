import json
from fractions import Fraction

import pytest

from hklab.field import FieldElement, absolute_trace, build_field, degree_representatives
from hklab.harness import (
    bracket_sum_matches_formula, predicted_en, reconcile, representatives, sweep,
    verify_lemmas, verify_point, workers_from_env,
)
from hklab.hk_engine import hk_power

from conftest import rep


def test_plateau_point():
    for m in (1, 2, 3):
        r = verify_point(rep(m), 1, 1)
        assert r.lhs == 0 and r.rhs == 0 and r.passed


def test_level_two_point():
    a = rep(2)
    r = verify_point(a, 2, 1)
    assert r.lhs == 20
    assert hk_power(a, 3, 2) == 352 and hk_power(a, 3, 4) == 512
    assert hk_power(a, 3, 3) == 452
    assert r.rhs == 452 - Fraction(352 + 512, 2) and r.passed


def test_extended_point():
    a = rep(2)
    with pytest.raises(ValueError):
        verify_point(a, 1, 0)
    r = verify_point(a, 1, 0, extended=True)
    assert r.lhs == 12 and r.rhs == 44 - Fraction(0 + 64, 2) and r.passed


def test_sweep_three():
    res = sweep(3, 3)
    assert res.all_passed and not res.truncated
    classes = res.summary()["classes"]
    assert "m=3,equal" in classes and "m=3,unequal" in classes


def test_sweep_all_elements():
    res = sweep(2, 2, orbits_only=False)
    assert len(res.alphas) == 3
    assert res.summary()["points"] == 3 * (1 + 3)
    assert res.all_passed


def test_sweep_deterministic_across_workers():
    one = [r.to_json() for r in sweep(2, 3, workers=1).reports]
    two = [r.to_json() for r in sweep(2, 3, workers=2).reports]
    assert one == two
    assert "elapsed" not in json.loads(one[0])


def test_time_budget_truncates():
    res = sweep(4, 4, time_budget=0.0)
    assert res.truncated and len(res.reports) < 182


def test_outcome_depends_on_profile_only():
    ctx = build_field(4)
    reps = degree_representatives(ctx, 4)
    by_trace = {}
    for a in reps:
        by_trace.setdefault(absolute_trace(a), []).append(a)
    for group in by_trace.values():
        if len(group) < 2:
            continue
        a, b = group[:2]
        for n in (1, 2, 3):
            for j in range(1, 1 << n):
                ra, rb = verify_point(a, n, j), verify_point(b, n, j)
                assert (ra.lhs, ra.rhs) == (rb.lhs, rb.rhs)


def test_predicted_en():
    assert predicted_en(rep(2), 2) == 408
    assert predicted_en(rep(2), 3) == 6592
    assert predicted_en(rep(2), 4) == 16 * 6592 + 2 * 48
    assert predicted_en(rep(1), 2) == 16 * 24 + 2 * 12
    assert predicted_en(rep(3), 3) == 6576


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_reconcile(m):
    rep_ = reconcile(rep(m), 3)
    assert rep_.passed
    if m >= 3:
        assert any("closed_form" in row for row in rep_.rows)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_lemmas(m):
    rep_ = verify_lemmas(rep(m), 3)
    assert rep_.passed
    items = {c["item"] for c in rep_.checks}
    assert items == {1, 2, 3, 4}
    first = next(c for c in rep_.checks if c["item"] == 1 and c["n"] == 1)
    assert first["detail"] == {"direct": 24, "sum": 24}


def test_representatives_cover_degrees():
    reps = representatives(4)
    assert [len([a for a in reps if a.ctx.degree == m]) for m in range(1, 5)] == [1, 1, 2, 3]


def test_bracket_formula_check():
    assert bracket_sum_matches_formula(3, True, 20)
    assert bracket_sum_matches_formula(1, False, 20)


def test_workers_env(monkeypatch):
    monkeypatch.setenv("HKLAB_WORKERS", "3")
    assert workers_from_env() == 3
    monkeypatch.setenv("HKLAB_WORKERS", "x")
    assert workers_from_env(2) == 2
