"""Columns, heights, levels, descendants, and exact measure brackets."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ranklab import (
    SpecError,
    ColumnStats,
    CutTooSmall,
    LengthMismatch,
    LevelRef,
    NegativeSpacer,
    ParamOutOfRange,
    RankOneSpec,
    StageSpec,
    StageTooLow,
    StageUnavailable,
    check_level,
    column_stats,
    descendant_heights,
    height_set,
    image_of_level,
    intersection_measure,
    level_width,
    validate_spec,
)

# ---------------------------------------------------------------------------
# stage and spec validation


def _one_stage(r, s):
    return validate_spec({"h0": 1, "stages": [{"r": r, "s": s}]})


def test_stage_rejects_single_cut():
    with pytest.raises(CutTooSmall):
        _one_stage(1, [0])


def test_stage_rejects_negative_spacer():
    with pytest.raises(NegativeSpacer):
        _one_stage(3, [0, -1, 0])


def test_stage_rejects_length_mismatch():
    with pytest.raises(LengthMismatch):
        _one_stage(3, [0, 0])


def test_stage_rejects_bools():
    # bool is an int subclass; construction data must be genuine integers.
    with pytest.raises(SpecError):
        _one_stage(True, [0])
    with pytest.raises(SpecError):
        _one_stage(2, [True, 0])


def test_validate_spec_roundtrip():
    spec = validate_spec(
        {"h0": 1, "stages": [{"r": 3, "s": [1, 0, 4]}], "extension": "repeat-last"}
    )
    assert isinstance(spec, RankOneSpec)
    assert spec.height(0) == 1
    assert spec.height(1) == 8


def test_explicit_spec_refuses_stages_beyond_data():
    spec = validate_spec({"h0": 1, "stages": [{"r": 2, "s": [0, 0]}]})
    assert spec.height(1) == 2
    with pytest.raises(StageUnavailable):
        spec.height(2)


# ---------------------------------------------------------------------------
# heights and height sets for the bundled constructions


def test_chacon_heights(chacon):
    assert [chacon.height(n) for n in range(5)] == [1, 8, 50, 302, 1814]


def test_chacon_height_sets(chacon):
    assert height_set(chacon, 0) == (0, 2, 3)
    assert height_set(chacon, 1) == (0, 9, 17)
    assert height_set(chacon, 2) == (0, 51, 101)


def test_tq41_heights_and_sets(tq41):
    # One full-height spacer block plus one top spacer: h' = 5h + 1.
    assert [tq41.height(n) for n in range(5)] == [1, 6, 31, 156, 781]
    for n in range(4):
        h = tq41.height(n)
        assert height_set(tq41, n) == (0, h, 3 * h, 4 * h)


def test_all_but_last_heights_and_sets(all_but_last):
    assert [all_but_last.height(n) for n in range(4)] == [1, 6, 31, 156]
    for n in range(3):
        h = all_but_last.height(n)
        assert height_set(all_but_last, n) == (0, 2 * h, 4 * h)


def test_dyadic_heights(dyadic):
    assert [dyadic.height(n) for n in range(10)] == [2**n for n in range(10)]
    assert height_set(dyadic, 3) == (0, 8)


def test_mixing_window_first_set(mixing_window):
    assert height_set(mixing_window, 0) == (0, 10, 40)
    assert mixing_window.height(1) == 82


@pytest.mark.parametrize(
    "fixture", ["chacon", "tq41", "all_but_last", "dyadic", "mixing_window"]
)
def test_height_set_invariants(fixture, request):
    spec = request.getfixturevalue(fixture)
    for n in range(6):
        offs = height_set(spec, n)
        stage = spec.stage(n)
        h = spec.height(n)
        assert offs[0] == 0
        assert len(offs) == stage.r
        # Consecutive copies are separated by at least a full column height.
        assert all(b - a >= h for a, b in zip(offs, offs[1:]))
        assert offs[-1] == spec.height(n + 1) - h - stage.s[-1]


# ---------------------------------------------------------------------------
# measure bookkeeping


def test_column_stats_mass_accounting(chacon):
    prev: ColumnStats | None = None
    for n in range(7):
        cs = column_stats(chacon, n)
        assert cs.total_measure == cs.height * cs.level_width
        if prev is not None:
            stage = chacon.stage(n - 1)
            spacer_mass = sum(stage.s) * cs.level_width
            # Restacking preserves mass and adds exactly the spacer levels.
            assert cs.total_measure == prev.total_measure + spacer_mass
            assert prev.level_width == cs.level_width * stage.r
        prev = cs


def test_level_width_is_width_of_column(chacon):
    assert level_width(chacon, LevelRef(0, 0)) == 1
    assert level_width(chacon, LevelRef(1, 5)) == Fraction(1, 3)
    assert level_width(chacon, LevelRef(2, 49)) == Fraction(1, 9)


def test_check_level_bounds(chacon):
    check_level(chacon, LevelRef(1, 7))
    with pytest.raises(ParamOutOfRange):
        check_level(chacon, LevelRef(1, 8))
    with pytest.raises(ParamOutOfRange):
        check_level(chacon, LevelRef(0, -1))


# ---------------------------------------------------------------------------
# descendants


def test_chacon_descendants_frozen(chacon):
    assert descendant_heights(chacon, LevelRef(1, 0), 2) == (0, 9, 17)
    assert descendant_heights(chacon, LevelRef(1, 0), 3) == (
        0, 9, 17, 51, 60, 68, 101, 110, 118,
    )
    assert descendant_heights(chacon, LevelRef(0, 0), 2) == (
        0, 2, 3, 9, 11, 12, 17, 19, 20,
    )


def test_descendants_of_self_is_self(chacon):
    lvl = LevelRef(2, 13)
    assert descendant_heights(chacon, lvl, 2) == (13,)


def test_descendants_stage_too_low(chacon):
    with pytest.raises(StageTooLow):
        descendant_heights(chacon, LevelRef(2, 0), 1)


@pytest.mark.parametrize("fixture", ["chacon", "tq41", "all_but_last", "dyadic"])
def test_descendant_counts_and_span(fixture, request):
    spec = request.getfixturevalue(fixture)
    lvl = LevelRef(0, 0)
    expect = 1
    for j in range(5):
        vals = descendant_heights(spec, lvl, j)
        assert len(vals) == expect
        assert vals[0] == 0
        assert vals[-1] <= spec.height(j) - 1
        assert all(b > a for a, b in zip(vals, vals[1:]))
        expect *= spec.stage(j).r


@st.composite
def small_specs(draw):
    """Random explicit constructions, three stages deep."""
    h0 = draw(st.integers(min_value=1, max_value=3))
    stages = []
    h = h0
    for _ in range(3):
        r = draw(st.integers(min_value=2, max_value=4))
        s = [draw(st.integers(min_value=0, max_value=6)) for _ in range(r)]
        stages.append({"r": r, "s": s})
        h = r * h + sum(s)
    return validate_spec({"h0": h0, "stages": stages})


@settings(deadline=None, max_examples=60)
@given(spec=small_specs(), data=st.data())
def test_descendant_recursion_property(spec, data):
    # The one-stage recursion D(j+1) = D(j) + H_j, elementwise and collision
    # free, against the direct sumset computed here.
    lvl = LevelRef(0, 0)
    j = data.draw(st.integers(min_value=0, max_value=2))
    vals = set(descendant_heights(spec, lvl, j))
    offs = height_set(spec, j)
    expected = sorted(e + o for e in vals for o in offs)
    got = descendant_heights(spec, lvl, j + 1)
    assert list(got) == expected
    assert len(set(expected)) == len(expected)


# ---------------------------------------------------------------------------
# images and intersection brackets


def test_image_of_level_splits_width(chacon):
    img = image_of_level(chacon, LevelRef(1, 0), 9, 2)
    assert [lv.height for lv in img.resolved] == [9, 18, 26]
    assert img.unresolved == ()
    img = image_of_level(chacon, LevelRef(1, 0), 45, 2)
    assert [lv.height for lv in img.resolved] == [45]
    assert [lv.height for lv in img.unresolved] == [9, 17]


def test_intersection_zero_shift_is_full_measure(chacon):
    lvl = LevelRef(1, 0)
    mi = intersection_measure(chacon, lvl, (0,), 3)
    assert mi.confirmed == level_width(chacon, lvl)
    assert mi.unresolved == 0


def test_intersection_hand_counted(chacon):
    # Descendants of (1,0) in column 2 sit at 0, 9, 17.  Shift 9: height 9
    # confirms (both 9 and 0 are descendants), height 17 fails in range
    # (8 is no descendant), height 0 needs T^-9 below the column.
    mi = intersection_measure(chacon, LevelRef(1, 0), (0, 9), 2)
    assert mi.confirmed == Fraction(1, 9)
    assert mi.unresolved == Fraction(1, 9)
    assert mi.upper == Fraction(2, 9)


def test_intersection_empty_exponents_rejected(chacon):
    with pytest.raises(ParamOutOfRange):
        intersection_measure(chacon, LevelRef(1, 0), (), 2)


def test_intersection_common_shift_invariance(chacon):
    a = intersection_measure(chacon, LevelRef(1, 0), (0, 9), 3)
    b = intersection_measure(chacon, LevelRef(1, 0), (-9, 0), 3)
    assert a == b


@settings(deadline=None, max_examples=40)
@given(spec=small_specs(), m=st.integers(min_value=-30, max_value=30))
def test_intersection_bracket_sane(spec, m):
    lvl = LevelRef(0, 0)
    mi = intersection_measure(spec, lvl, (0, m), 3)
    width = level_width(spec, lvl)
    assert 0 <= mi.confirmed <= mi.upper <= width
    if m == 0:
        assert mi.confirmed == width and mi.unresolved == 0
