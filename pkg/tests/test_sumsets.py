"""Descendant sets, partner sets, progressions, and digit arithmetic."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ranklab import (
    BudgetExceeded,
    DigitAlphabet,
    HorizonExceeded,
    LevelRef,
    ParamOutOfRange,
    PreconditionViolated,
    admissible_alphabets,
    ap_search,
    coverage_checks,
    descendant_contains,
    descendant_decompose,
    descendant_heights,
    descendant_set,
    difference_multiset,
    gamma_search,
    gap_count,
    partner_set,
    partner_shift,
    sumset_membership,
    truncated_sumset,
)

# ---------------------------------------------------------------------------
# descendant sets and the greedy decomposition


def test_descendant_set_carries_measure(chacon):
    ds = descendant_set(chacon, LevelRef(1, 0), 3)
    assert ds.heights == descendant_heights(chacon, LevelRef(1, 0), 3)
    assert ds.count == 9
    assert ds.level_width == Fraction(1, 27)
    assert ds.measure == Fraction(1, 3)
    assert ds.top == 118


def test_descendant_set_respects_budget(chacon, monkeypatch):
    monkeypatch.setenv("RANKLAB_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        descendant_set(chacon, LevelRef(0, 0), 6)


def test_decompose_matches_enumeration(chacon):
    lvl = LevelRef(1, 0)
    members = set(descendant_heights(chacon, lvl, 3))
    top = chacon.height(3) - 1
    for value in range(0, top + 1):
        offs = descendant_decompose(chacon, lvl, 3, value)
        if value in members:
            assert offs is not None
            assert sum(offs) == value
            # Each chosen offset is a real height-set element of its stage.
            for stage, off in enumerate(offs, start=lvl.stage):
                assert off in chacon.height_set(stage)
        else:
            assert offs is None
        assert descendant_contains(chacon, lvl, 3, value) == (value in members)


@settings(deadline=None, max_examples=50)
@given(data=st.data())
def test_decompose_roundtrip_property(data, tq41):
    j = data.draw(st.integers(min_value=1, max_value=4))
    lvl = LevelRef(0, 0)
    members = descendant_heights(tq41, lvl, j)
    value = data.draw(st.sampled_from(members))
    offs = descendant_decompose(tq41, lvl, j, value)
    assert offs is not None and sum(offs) == value


# ---------------------------------------------------------------------------
# difference multisets


def test_difference_multiset_symmetry(chacon):
    dm = difference_multiset(descendant_heights(chacon, LevelRef(1, 0), 2))
    assert dm.size == 3
    assert dm.count(0) == 3
    assert dm.count(9) == dm.count(-9) == 1
    assert dm.count(17) == dm.count(-17) == 1
    assert dm.count(8) == 1
    assert dm.positive_values() == (8, 9, 17)


def test_difference_multiset_empty_rejected():
    with pytest.raises(ParamOutOfRange):
        difference_multiset([])


# ---------------------------------------------------------------------------
# partner sets


def test_partner_sets_chacon_stage1(chacon):
    heights = chacon.height_set(1)  # (0, 9, 17)
    s8 = partner_set(heights, 8)
    assert s8.members == (17,)
    assert s8.delta == Fraction(1, 3)
    s9 = partner_set(heights, 9)
    assert s9.members == (9,)
    upper = partner_set(heights, 8, side="upper")
    assert upper.members == (9,)


def test_partner_shift_chacon(chacon):
    ps = partner_shift(chacon.height_set(1))
    assert ps is not None
    assert ps.z == 8
    assert ps.at_z.members == (17,)
    assert ps.at_z_plus_1.members == (9,)
    assert ps.delta == Fraction(1, 3)


def test_partner_shift_none_for_dyadic(dyadic):
    # {0, 8}: no z has partners at both z and z+1.
    assert partner_shift(dyadic.height_set(3)) is None


def test_partner_set_validation():
    with pytest.raises(ParamOutOfRange):
        partner_set((0, 5), -1)
    with pytest.raises(ParamOutOfRange):
        partner_set((), 1)
    with pytest.raises(ParamOutOfRange):
        partner_set((0, 5), 1, side="sideways")


# ---------------------------------------------------------------------------
# progression search


def test_ap_search_chacon_frozen(chacon):
    values = descendant_heights(chacon, LevelRef(1, 0), 3)
    res = ap_search(values, 14)
    assert res.longest == 4
    assert res.witness == 17
    assert res.progression == (17, 34, 51, 68)
    # The run at 42 stops after two terms: 42 and 84 appear, 126 does not.
    assert res.runs[42] == 2


def test_ap_search_cap_is_respected():
    res = ap_search(range(32), 5)
    assert res.longest == 5
    assert res.witness == 1
    assert res.progression == (1, 2, 3, 4, 5)


def test_ap_search_brute_force_oracle(chacon):
    values = descendant_heights(chacon, LevelRef(0, 0), 3)
    diffs = {b - a for a, b in itertools.combinations(sorted(values), 2)}
    res = ap_search(values, 20)
    for x, run in res.runs.items():
        expected = 1
        while expected < 20 and (expected + 1) * x in diffs:
            expected += 1
        assert run == expected


# ---------------------------------------------------------------------------
# digit alphabets


def test_alphabet_validation():
    DigitAlphabet(9, (0, 2, 3, 5, 6, 8))
    with pytest.raises(PreconditionViolated):
        DigitAlphabet(9, (2, 3, 5, 6, 8))  # no zero
    with pytest.raises(PreconditionViolated):
        DigitAlphabet(9, (0, 2, 3, 5, 6, 7))  # largest digit not k-1
    with pytest.raises(PreconditionViolated):
        DigitAlphabet(9, (0, 3, 5, 6, 8))  # gap of three


def test_admissible_alphabet_counts():
    # Gap words over {1,2} summing to k-1: Fibonacci numbers.
    fib = [1, 1]
    for _ in range(12):
        fib.append(fib[-1] + fib[-2])
    for k in range(2, 12):
        assert len(admissible_alphabets(k)) == fib[k - 1]


def test_truncated_sumset_small():
    alpha = DigitAlphabet(3, (0, 2))
    # (A - A) = {-2, 0, 2}; with two digits: c0 + 3*c1.
    assert truncated_sumset(alpha, 2) == (-8, -6, -4, -2, 0, 2, 4, 6, 8)


def test_membership_agrees_with_enumeration():
    alpha = DigitAlphabet(9, (0, 2, 3, 5, 6, 8))
    n = 3
    present = set(truncated_sumset(alpha, n))
    cap = 9**n - 1
    for target in range(-cap, cap + 1):
        digits = sumset_membership(alpha, n, target)
        assert (digits is not None) == (target in present)


def test_membership_rejects_bad_digit_count():
    alpha = DigitAlphabet(3, (0, 1, 2))
    with pytest.raises(ParamOutOfRange):
        sumset_membership(alpha, 0, 0)


# ---------------------------------------------------------------------------
# gap counts


def test_gap_count_frozen_oracle():
    alpha = DigitAlphabet(9, (0, 2, 3, 5, 6, 8))
    gc = gap_count(alpha, 3)
    assert gc.g == 1
    assert gc.unit_gaps == (7,)
    assert gc.recursion == (1, 4, 13)
    assert gc.brute == 13
    assert gc.matches


def test_gap_count_random_alphabets():
    rng = random.Random(20260814)
    pool = [
        a
        for k in range(3, 14)
        for a in admissible_alphabets(k)
        if a.has_unit_diff
    ]
    for alpha in rng.sample(pool, 20):
        for n in range(1, 4):
            gc = gap_count(alpha, n)
            assert gc.matches, (alpha.k, alpha.digits, n)


def test_gap_count_needs_unit_diff():
    with pytest.raises(PreconditionViolated):
        gap_count(DigitAlphabet(3, (0, 2)), 2)


# ---------------------------------------------------------------------------
# coverage checks


def test_coverage_all_alphabets_k_le_11():
    for k in range(2, 12):
        for alpha in admissible_alphabets(k):
            for n in range(1, 4):
                cc = coverage_checks(alpha, n)
                assert cc.passed, (k, alpha.digits, n, cc.failures)
                if alpha.has_unit_diff:
                    assert cc.half_alphabet_ok and cc.half_range_ok
                else:
                    assert cc.half_alphabet_ok is None
                assert cc.parity_ok


def test_coverage_reports_failures_for_bad_input():
    # Not reachable through admissible alphabets; checked directly on the
    # result type by faking a narrow sweep (n=1 only looks at A - A).
    alpha = DigitAlphabet(5, (0, 2, 4))
    cc = coverage_checks(alpha, 1)
    assert cc.half_alphabet_ok is None  # no unit difference to lean on
    assert cc.parity_ok


# ---------------------------------------------------------------------------
# gamma search


def test_gamma_search_frozen(tq41):
    from ranklab import tq_params_of

    params = tq_params_of(tq41)
    assert params is not None
    gw = gamma_search(params.alphabet, (2, 3))
    assert (gw.n, gw.m, gw.gamma) == (1, 1, 1)
    k = params.alphabet.k
    assert sum(c * k**l for l, c in enumerate(gw.zero_digits)) == k**gw.m - 1
    for beta, digits in gw.beta_digits:
        assert sum(c * k**l for l, c in enumerate(digits)) == k**gw.n - gw.gamma * beta


def test_gamma_search_validation(tq41):
    from ranklab import tq_params_of

    alphabet = tq_params_of(tq41).alphabet
    with pytest.raises(ParamOutOfRange):
        gamma_search(alphabet, ())
    with pytest.raises(ParamOutOfRange):
        gamma_search(alphabet, (0,))
    with pytest.raises(HorizonExceeded):
        gamma_search(alphabet, (10**9,), horizon=2)
