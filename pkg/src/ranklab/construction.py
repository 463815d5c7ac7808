"""Columns built by cutting and stacking, with exact rational measure.

A construction starts from column 0: ``h0`` unit-width levels stacked over a
base interval.  Stage ``n`` cuts column ``n`` into ``r_n >= 2`` subcolumns of
equal width, adds ``s[n][j] >= 0`` spacer levels on top of subcolumn ``j``,
and stacks the subcolumns left to right, so

    h_{n+1} = r_n * h_n + sum(s[n]).

Inside column ``n+1`` the ``r_n`` copies of column ``n`` sit at offsets

    H_n = { j*h_n + s[n][0] + ... + s[n][j-1] : 0 <= j < r_n },

the *height set* of the stage.  Consecutive offsets differ by at least
``h_n``, ``min H_n = 0``, and ``max H_n = h_{n+1} - h_n - s[n][r_n-1]``.

All bookkeeping is exact: a stage-``n`` level is ``1/(r_0*...*r_{n-1})`` wide,
widths and measures are ``fractions.Fraction`` values, and set arithmetic on
heights is plain integer arithmetic.  Shift arithmetic that would leave the
column at a finite stage is reported as *unresolved* mass rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    CutTooSmall,
    LengthMismatch,
    NegativeSpacer,
    ParamOutOfRange,
    SpecError,
    StageTooLow,
    StageUnavailable,
)

__all__ = [
    "StageSpec",
    "FamilyTag",
    "RankOneSpec",
    "LevelRef",
    "ColumnStats",
    "MeasureInterval",
    "ImageOfLevel",
    "validate_spec",
    "height_set",
    "column_stats",
    "level_width",
    "check_level",
    "descendant_heights",
    "image_of_level",
    "intersection_measure",
]

# Rule used to extend a construction beyond its explicit stage prefix:
# maps (stage index, current height) to the stage description.
StageRule = Callable[[int, int], "StageSpec"]

EXTENSION_ERROR = "error"
EXTENSION_REPEAT = "repeat-last"
EXTENSION_RULE = "rule"


@dataclass(frozen=True)
class StageSpec:
    """One cutting step: ``r`` cuts and a spacer count per subcolumn.

    ``s[j]`` spacers go on top of subcolumn ``j``; ``s[r-1]`` is the rightmost
    (top-of-column) spacer count.
    """

    r: int
    s: tuple[int, ...]


def _checked_stage(raw: object, index: int) -> StageSpec:
    """Validate and normalize one stage description."""
    if isinstance(raw, StageSpec):
        r, s = raw.r, raw.s
    elif isinstance(raw, Mapping):
        extra = set(raw) - {"r", "s"}
        if extra:
            raise SpecError(f"stage {index}: unknown fields {sorted(extra)}")
        r, s = raw.get("r"), raw.get("s", ())
    else:
        raise SpecError(f"stage {index}: expected a StageSpec or mapping, got {type(raw).__name__}")
    if not isinstance(r, int) or isinstance(r, bool):
        raise SpecError(f"stage {index}: cut count must be an integer")
    if r < 2:
        raise CutTooSmall(f"stage {index}: cut count {r} < 2")
    if not isinstance(s, (list, tuple)):
        raise SpecError(f"stage {index}: spacer vector must be a sequence")
    spacers = []
    for j, v in enumerate(s):
        if not isinstance(v, int) or isinstance(v, bool):
            raise SpecError(f"stage {index}: spacer s[{j}] must be an integer")
        if v < 0:
            raise NegativeSpacer(f"stage {index}: spacer s[{j}] = {v} < 0")
        spacers.append(v)
    if len(spacers) != r:
        raise LengthMismatch(f"stage {index}: {len(spacers)} spacers for {r} cuts")
    return StageSpec(r, tuple(spacers))


@dataclass(frozen=True)
class FamilyTag:
    """Names the closed-form family a spec was generated from, if any.

    ``params`` is a JSON-ready mapping used verbatim for fingerprinting, so
    two specs from the same family with the same parameters hash identically.
    """

    kind: str
    params: tuple[tuple[str, object], ...]

    @classmethod
    def of(cls, kind: str, params: Mapping[str, object]) -> "FamilyTag":
        return cls(kind, tuple(sorted(params.items())))

    def as_dict(self) -> dict[str, object]:
        return dict(self.params)


class RankOneSpec:
    """A validated cutting-and-stacking description.

    Stages are materialized lazily: an explicit prefix is stored, and indexes
    beyond it are produced by the extension rule — ``"error"`` (refuse),
    ``"repeat-last"`` (reuse the final explicit stage verbatim), or a family
    formula supplied as a callable of ``(stage index, current height)``.
    Heights and height sets are cached as stages materialize.
    """

    def __init__(
        self,
        stages: Sequence[StageSpec | Mapping[str, object]] = (),
        h0: int = 1,
        extension: str = EXTENSION_ERROR,
        stage_rule: StageRule | None = None,
        family: FamilyTag | None = None,
    ) -> None:
        if not isinstance(h0, int) or isinstance(h0, bool) or h0 < 1:
            raise ParamOutOfRange(f"h0 must be a positive integer, got {h0!r}")
        explicit = tuple(_checked_stage(st, i) for i, st in enumerate(stages))
        if stage_rule is not None:
            extension = EXTENSION_RULE
        if extension not in (EXTENSION_ERROR, EXTENSION_REPEAT, EXTENSION_RULE):
            raise SpecError(f"unknown extension rule {extension!r}")
        if extension == EXTENSION_REPEAT and not explicit:
            raise SpecError("repeat-last extension needs at least one explicit stage")
        if extension == EXTENSION_RULE and stage_rule is None:
            raise SpecError("rule extension needs a stage_rule callable")
        self._explicit = explicit
        self.h0 = h0
        self.extension = extension
        self._rule = stage_rule
        self.family = family
        self._stages: list[StageSpec] = []
        self._heights: list[int] = [h0]
        self._height_sets: list[tuple[int, ...]] = []
        self._widths: list[Fraction] = [Fraction(1)]

    # -- stage materialization -------------------------------------------

    def explicit_stages(self) -> tuple[StageSpec, ...]:
        return self._explicit

    def _materialize(self, upto: int) -> None:
        """Ensure stages 0..upto (inclusive) exist in the cache."""
        while len(self._stages) <= upto:
            n = len(self._stages)
            h = self._heights[n]
            if n < len(self._explicit):
                st = self._explicit[n]
            elif self.extension == EXTENSION_REPEAT:
                st = self._explicit[-1]
            elif self.extension == EXTENSION_RULE:
                assert self._rule is not None
                st = _checked_stage(self._rule(n, h), n)
            else:
                raise StageUnavailable(
                    f"stage {n} is beyond the {len(self._explicit)}-stage prefix"
                    " and the extension rule is 'error'"
                )
            offsets = [0]
            for j in range(st.r - 1):
                offsets.append(offsets[-1] + h + st.s[j])
            h_next = st.r * h + sum(st.s)
            # Sanity: the defining identities of a height set.
            assert offsets[0] == 0 and len(offsets) == st.r
            assert all(b - a >= h for a, b in zip(offsets, offsets[1:]))
            assert offsets[-1] == h_next - h - st.s[-1]
            self._stages.append(st)
            self._heights.append(h_next)
            self._height_sets.append(tuple(offsets))
            self._widths.append(self._widths[-1] / st.r)

    def stage(self, n: int) -> StageSpec:
        if n < 0:
            raise ParamOutOfRange(f"stage index must be >= 0, got {n}")
        self._materialize(n)
        return self._stages[n]

    def height(self, n: int) -> int:
        """Number of levels in column ``n``."""
        if n < 0:
            raise ParamOutOfRange(f"stage index must be >= 0, got {n}")
        if n > 0:
            self._materialize(n - 1)
        return self._heights[n]

    def heights(self, upto: int) -> tuple[int, ...]:
        """``(h_0, ..., h_upto)``."""
        self.height(upto)
        return tuple(self._heights[: upto + 1])

    def level_width(self, n: int) -> Fraction:
        """Width of one level of column ``n``: 1 / (r_0 * ... * r_{n-1})."""
        if n < 0:
            raise ParamOutOfRange(f"stage index must be >= 0, got {n}")
        if n > 0:
            self._materialize(n - 1)
        return self._widths[n]

    def height_set(self, n: int) -> tuple[int, ...]:
        self.stage(n)
        return self._height_sets[n]


def validate_spec(raw: object) -> RankOneSpec:
    """Re-validate *raw* and return a normalized :class:`RankOneSpec`.

    Accepts an existing spec (rebuilt from its parts, so every structural
    check runs again) or a mapping with keys ``stages``, ``h0``, and
    ``extension``.
    """
    if isinstance(raw, RankOneSpec):
        return RankOneSpec(
            raw.explicit_stages(),
            h0=raw.h0,
            extension=raw.extension if raw.extension != EXTENSION_RULE else EXTENSION_ERROR,
            stage_rule=raw._rule,
            family=raw.family,
        )
    if isinstance(raw, Mapping):
        extra = set(raw) - {"stages", "h0", "extension"}
        if extra:
            raise SpecError(f"unknown spec fields {sorted(extra)}")
        return RankOneSpec(
            raw.get("stages", ()),
            h0=raw.get("h0", 1),
            extension=raw.get("extension", EXTENSION_ERROR),
        )
    raise SpecError(f"cannot validate a {type(raw).__name__} as a construction spec")


def height_set(spec: RankOneSpec, n: int) -> tuple[int, ...]:
    """Offsets of the stage-``n`` column copies inside column ``n+1``."""
    return spec.height_set(n)


@dataclass(frozen=True)
class ColumnStats:
    """Exact per-column bookkeeping."""

    stage: int
    height: int
    level_width: Fraction
    total_measure: Fraction


def column_stats(spec: RankOneSpec, n: int) -> ColumnStats:
    h = spec.height(n)
    w = spec.level_width(n)
    return ColumnStats(stage=n, height=h, level_width=w, total_measure=h * w)


@dataclass(frozen=True)
class LevelRef:
    """One level of one column: ``(stage, height)`` with 0 at the bottom."""

    stage: int
    height: int


def check_level(spec: RankOneSpec, level: LevelRef) -> LevelRef:
    if level.stage < 0:
        raise ParamOutOfRange(f"level stage must be >= 0, got {level.stage}")
    h = spec.height(level.stage)
    if not 0 <= level.height < h:
        raise ParamOutOfRange(
            f"level height {level.height} outside column {level.stage}"
            f" (valid range 0..{h - 1})"
        )
    return level


def level_width(spec: RankOneSpec, level: LevelRef) -> Fraction:
    check_level(spec, level)
    return spec.level_width(level.stage)


def descendant_heights(spec: RankOneSpec, level: LevelRef, j: int) -> tuple[int, ...]:
    """Heights, in column ``j``, of the sublevels a level splits into.

    Stage by stage, a level at height ``e`` of column ``n`` reappears at
    heights ``e + H_n`` in column ``n+1``; iterating gives the elementwise
    sumset ``{e} + H_i + ... + H_{j-1}``.  Offsets never collide (consecutive
    height-set gaps are at least the column height), so the count is exactly
    the product of the cut counts — asserted below.
    """
    check_level(spec, level)
    if j < level.stage:
        raise StageTooLow(f"target stage {j} precedes level stage {level.stage}")
    heights = [level.height]
    for n in range(level.stage, j):
        offs = spec.height_set(n)
        heights = [e + o for e in heights for o in offs]
        heights.sort()
        assert all(b > a for a, b in zip(heights, heights[1:])), "descendants collided"
    assert heights[0] == level.height
    assert heights[-1] <= spec.height(j) - 1
    return tuple(heights)


@dataclass(frozen=True)
class MeasureInterval:
    """An exact two-sided answer: ``confirmed`` mass plus ``unresolved`` mass.

    The true measure lies in ``[confirmed, confirmed + unresolved]``;
    unresolved mass belongs to sublevels whose shift arithmetic leaves the
    column at the evaluation stage and so cannot be decided there.
    """

    confirmed: Fraction
    unresolved: Fraction

    def __post_init__(self) -> None:
        assert self.confirmed >= 0 and self.unresolved >= 0

    @property
    def upper(self) -> Fraction:
        return self.confirmed + self.unresolved


@dataclass(frozen=True)
class ImageOfLevel:
    """Stage-``j`` splitting of ``T^m`` applied to a level.

    ``resolved`` lists the image sublevels (heights shifted by ``m`` inside
    column ``j``); ``unresolved`` lists the *source* sublevels whose shift
    exits the column.  Together they carry exactly the level's width.
    """

    resolved: tuple[LevelRef, ...]
    unresolved: tuple[LevelRef, ...]


def image_of_level(spec: RankOneSpec, level: LevelRef, m: int, j: int) -> ImageOfLevel:
    """Split ``T^m``(level) into stage-``j`` sublevels, exactly where possible.

    Within column ``j`` the transformation moves each level straight up, so a
    sublevel at height ``e`` resolves to height ``e + m`` iff that stays in
    ``[0, h_j - 1]``.
    """
    h_j = spec.height(j)
    resolved = []
    unresolved = []
    for e in descendant_heights(spec, level, j):
        if 0 <= e + m <= h_j - 1:
            resolved.append(LevelRef(j, e + m))
        else:
            unresolved.append(LevelRef(j, e))
    total = (len(resolved) + len(unresolved)) * spec.level_width(j)
    assert total == level_width(spec, level)
    return ImageOfLevel(tuple(resolved), tuple(unresolved))


def intersection_measure(
    spec: RankOneSpec,
    level: LevelRef,
    exponents: Sequence[int],
    j: int,
) -> MeasureInterval:
    """Exact measure bracket for the k-fold intersection of shifted copies.

    Computes ``mu(T^{m_0} L ∩ ... ∩ T^{m_{k-1}} L)`` for the level ``L`` at
    evaluation stage ``j``.  The exponent list is first translated so its
    minimum is 0 (intersections are invariant under a common shift); a
    stage-``j`` sublevel at height ``e`` then

    * counts as *confirmed* when every ``e - m_t`` stays in the column and is
      again a sublevel height,
    * is discarded as soon as one in-range ``e - m_t`` is not a sublevel
      height, and
    * stays *unresolved* when no in-range test fails but some shift exits the
      column (those decisions belong to deeper stages).

    Unresolved mass is at most ``k * max(m) * width_j`` — a per-element count
    bounded by how many sublevels sit within ``max(m)`` of the column ends —
    and shrinks geometrically with ``j``.
    """
    if not exponents:
        raise ParamOutOfRange("need at least one exponent")
    base = min(exponents)
    shifts = [m - base for m in exponents]
    heights = descendant_heights(spec, level, j)
    dset = set(heights)
    h_j = spec.height(j)
    confirmed = 0
    unresolved = 0
    for e in heights:
        out_of_range = False
        failed = False
        for m in shifts:
            t = e - m
            if t < 0 or t > h_j - 1:
                out_of_range = True
            elif t not in dset:
                failed = True
                break
        if failed:
            continue
        if out_of_range:
            unresolved += 1
        else:
            confirmed += 1
    w = spec.level_width(j)
    result = MeasureInterval(confirmed * w, unresolved * w)
    assert result.upper <= level_width(spec, level)
    return result
