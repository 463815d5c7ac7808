"""Integer set combinatorics on top of the column construction.

Everything here is exact set arithmetic over ``int``:

* descendant sets — where the copies of a level land at deeper stages, as
  iterated sumsets of height sets, plus a greedy membership test that avoids
  enumerating the (exponentially large) set;
* difference multisets and partner sets — who can be matched to whom at a
  given shift;
* arithmetic-progression search inside a difference set;
* base-``k`` digit machinery for alphabets with gaps of 1 or 2: membership in
  the truncated signed-digit sumset ``D(n)' = (A-A) + k(A-A) + ... +
  k^{n-1}(A-A)``, the gap-count recursion, coverage checks, and the search
  for a shift ``gamma`` that keeps prescribed multiples representable.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from ._budget import charge
from .construction import LevelRef, RankOneSpec, check_level, descendant_heights
from .errors import (
    HorizonExceeded,
    ParamOutOfRange,
    PreconditionViolated,
)

__all__ = [
    "DescendantSet",
    "descendant_set",
    "descendant_decompose",
    "descendant_contains",
    "DifferenceMultiset",
    "difference_multiset",
    "PartnerSet",
    "partner_set",
    "PartnerShift",
    "partner_shift",
    "APSearchResult",
    "ap_search",
    "DigitAlphabet",
    "admissible_alphabets",
    "truncated_sumset",
    "sumset_membership",
    "GapCount",
    "gap_count",
    "CoverageChecks",
    "coverage_checks",
    "GammaWitness",
    "gamma_search",
]


# ---------------------------------------------------------------------------
# descendant sets


@dataclass(frozen=True)
class DescendantSet:
    """Heights of all stage-``stage`` sublevels of ``base``, sorted."""

    base: LevelRef
    stage: int
    heights: tuple[int, ...]
    level_width: Fraction

    @property
    def count(self) -> int:
        return len(self.heights)

    @property
    def measure(self) -> Fraction:
        return self.count * self.level_width

    @property
    def top(self) -> int:
        return self.heights[-1]


def descendant_set(spec: RankOneSpec, level: LevelRef, j: int) -> DescendantSet:
    """Enumerate D(level, j), charging the enumeration budget for its size."""
    check_level(spec, level)
    if j >= level.stage:
        expected = 1
        for q in range(level.stage, j):
            expected *= spec.stage(q).r
        charge(expected, f"descendant set at stage {j}")
    heights = descendant_heights(spec, level, j)
    return DescendantSet(level, j, heights, spec.level_width(j))


def descendant_decompose(
    spec: RankOneSpec, level: LevelRef, j: int, value: int
) -> tuple[int, ...] | None:
    """Per-stage offsets writing ``value`` as base height + one offset per stage.

    Works top-down without enumerating the descendant set.  After the offsets
    of stages above ``n`` are fixed, the remainder must lie within
    ``base + [0, maxH_i + ... + maxH_{n-1}]``, a window shorter than ``h_n``;
    since consecutive height-set offsets differ by at least ``h_n``, at most
    one choice at stage ``n`` can work, so greedy descent is complete.

    Returns offsets ordered by stage (``level.stage`` first), or ``None`` when
    ``value`` is not a descendant height.
    """
    check_level(spec, level)
    if j < level.stage:
        raise ParamOutOfRange(f"target stage {j} precedes level stage {level.stage}")
    base = level.height
    maxes = [spec.height_set(q)[-1] for q in range(level.stage, j)]
    slack = [0]
    for m in maxes[:-1]:
        slack.append(slack[-1] + m)
    # slack[q - level.stage] = max total offset stages below q can contribute
    rem = value
    chosen: list[int] = []
    for n in range(j - 1, level.stage - 1, -1):
        offsets = spec.height_set(n)
        window = slack[n - level.stage]
        lo = rem - base - window
        hi = rem - base
        i0 = bisect_left(offsets, lo)
        i1 = bisect_right(offsets, hi)
        assert i1 - i0 <= 1, "offset window spans a height-set gap"
        if i1 == i0:
            return None
        x = offsets[i0]
        chosen.append(x)
        rem -= x
    if rem != base:
        return None
    chosen.reverse()
    assert base + sum(chosen) == value
    return tuple(chosen)


def descendant_contains(spec: RankOneSpec, level: LevelRef, j: int, value: int) -> bool:
    return descendant_decompose(spec, level, j, value) is not None


# ---------------------------------------------------------------------------
# difference multisets and partner sets


@dataclass(frozen=True)
class DifferenceMultiset:
    """Counts of ordered differences ``d0 - d1`` over pairs of a finite set."""

    size: int
    counts: Mapping[int, int]

    def __post_init__(self) -> None:
        assert self.counts.get(0, 0) == self.size
        assert sum(self.counts.values()) == self.size * self.size

    def count(self, value: int) -> int:
        return self.counts.get(value, 0)

    def positive_values(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.counts if v > 0))


def difference_multiset(values: Iterable[int]) -> DifferenceMultiset:
    vals = sorted(set(values))
    if not vals:
        raise ParamOutOfRange("difference multiset of an empty set")
    charge(len(vals) ** 2, "difference multiset")
    counts: Counter[int] = Counter()
    for a in vals:
        for b in vals:
            counts[a - b] += 1
    for v in list(counts):
        assert counts[v] == counts[-v]
    return DifferenceMultiset(len(vals), dict(counts))


@dataclass(frozen=True)
class PartnerSet:
    """Elements of a height set with a partner at distance ``z``.

    With the default ``lower`` side, ``members = {x in H : x - z in H}`` — the
    upper endpoints of the pairs.  ``upper`` mirrors this downwards:
    ``{x in H : x + z in H}``.  ``delta`` is the matched proportion of ``H``.
    """

    z: int
    members: tuple[int, ...]
    total: int
    side: str = "lower"

    @property
    def delta(self) -> Fraction:
        return Fraction(len(self.members), self.total)


def partner_set(heights: Sequence[int], z: int, side: str = "lower") -> PartnerSet:
    if z < 0:
        raise ParamOutOfRange(f"shift must be >= 0, got {z}")
    if side not in ("lower", "upper"):
        raise ParamOutOfRange(f"side must be 'lower' or 'upper', got {side!r}")
    hset = set(heights)
    if not hset:
        raise ParamOutOfRange("partner set of an empty height set")
    if side == "lower":
        members = tuple(sorted(x for x in hset if x - z in hset))
        assert all(m - z in hset for m in members)
    else:
        members = tuple(sorted(x for x in hset if x + z in hset))
        assert all(m + z in hset for m in members)
    return PartnerSet(z, members, len(hset), side)


@dataclass(frozen=True)
class PartnerShift:
    """The shift a matching construction pivots on at one stage.

    ``z`` is the least positive shift where the partner sets at ``z`` and
    ``z + 1`` are both nonempty and equally large, so pairs at distance ``z``
    and ``z + 1`` can absorb the same number of coordinates.
    """

    z: int
    at_z: PartnerSet
    at_z_plus_1: PartnerSet

    @property
    def delta(self) -> Fraction:
        return self.at_z.delta


def partner_shift(heights: Sequence[int]) -> PartnerShift | None:
    """Smallest usable shift for ``heights``, or ``None`` when none exists."""
    hset = sorted(set(heights))
    if len(hset) < 2:
        return None
    top = hset[-1] - hset[0]
    for z in range(1, top):
        s0 = partner_set(hset, z)
        if not s0.members:
            continue
        s1 = partner_set(hset, z + 1)
        if s1.members and len(s1.members) == len(s0.members):
            return PartnerShift(z, s0, s1)
    return None


# ---------------------------------------------------------------------------
# arithmetic progressions inside a difference set


@dataclass(frozen=True)
class APSearchResult:
    """Longest run of multiples ``x, 2x, ..., lx`` inside a difference set.

    ``runs`` maps each positive difference ``x`` to the largest ``l`` (capped
    at the search's ``max_len``) with all of ``x..l*x`` present; ``longest``
    is the maximum over ``x`` and ``witness`` the smallest ``x`` attaining it.
    """

    longest: int
    witness: int | None
    progression: tuple[int, ...]
    runs: Mapping[int, int]


def ap_search(values: Iterable[int], max_len: int) -> APSearchResult:
    if max_len < 1:
        raise ParamOutOfRange(f"max_len must be >= 1, got {max_len}")
    vals = sorted(set(values))
    charge(len(vals) ** 2, "difference set for progression search")
    diffs = {b - a for a, b in itertools.combinations(vals, 2)}
    runs: dict[int, int] = {}
    longest = 0
    witness = None
    for x in sorted(diffs):
        length = 1
        while length < max_len and (length + 1) * x in diffs:
            length += 1
        runs[x] = length
        if length > longest:
            longest = length
            witness = x
    progression = tuple(witness * i for i in range(1, longest + 1)) if witness else ()
    return APSearchResult(longest, witness, progression, runs)


# ---------------------------------------------------------------------------
# digit alphabets


@dataclass(frozen=True)
class DigitAlphabet:
    """Digit set for base ``k`` with steps of 1 or 2 between digits.

    Contains 0 and ``k - 1``; consecutive digits differ by 1 or 2.  The gap
    structure is what the coverage and gap-count results below rely on, so it
    is enforced at construction time.
    """

    k: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 2:
            raise ParamOutOfRange(f"base must be an integer >= 2, got {self.k!r}")
        d = self.digits
        if not d or list(d) != sorted(set(d)):
            raise PreconditionViolated("digits must be strictly increasing")
        if d[0] != 0:
            raise PreconditionViolated("digit set must contain 0")
        if d[-1] != self.k - 1:
            raise PreconditionViolated(f"largest digit must be k-1 = {self.k - 1}, got {d[-1]}")
        for a, b in zip(d, d[1:]):
            if not 1 <= b - a <= 2:
                raise PreconditionViolated(
                    f"digit gap {b - a} between {a} and {b}; gaps must be 1 or 2"
                )

    @cached_property
    def diffs(self) -> frozenset[int]:
        """The signed digit set A - A."""
        return frozenset(a - b for a in self.digits for b in self.digits)

    @property
    def has_unit_diff(self) -> bool:
        return 1 in self.diffs

    @property
    def gaps(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.digits, self.digits[1:]))


def admissible_alphabets(k: int) -> tuple[DigitAlphabet, ...]:
    """Every digit alphabet for base ``k``: all gap words over {1, 2}."""
    if k < 2:
        raise ParamOutOfRange(f"base must be >= 2, got {k}")
    out = []
    span = k - 1
    # Compositions of k-1 into parts 1 and 2, generated by the count of 2s.
    for twos in range(span // 2 + 1):
        ones = span - 2 * twos
        for positions in itertools.combinations(range(ones + twos), twos):
            gaps = [1] * (ones + twos)
            for p in positions:
                gaps[p] = 2
            digits = [0]
            for g in gaps:
                digits.append(digits[-1] + g)
            out.append(DigitAlphabet(k, tuple(digits)))
    assert len({a.digits for a in out}) == len(out)
    return tuple(out)


def truncated_sumset(alphabet: DigitAlphabet, n: int) -> tuple[int, ...]:
    """Enumerate ``D(n)' = (A-A) + k(A-A) + ... + k^{n-1}(A-A)``, sorted."""
    if n < 0:
        raise ParamOutOfRange(f"digit count must be >= 0, got {n}")
    charge(alphabet.k**n, "truncated sumset enumeration")
    values = {0}
    scale = 1
    for _ in range(n):
        values = {v + c * scale for v in values for c in alphabet.diffs}
        scale *= alphabet.k
    out = tuple(sorted(values))
    assert not n or (out[0] == -(scale - 1) and out[-1] == scale - 1)
    return out


def sumset_membership(
    alphabet: DigitAlphabet, n: int, target: int
) -> tuple[int, ...] | None:
    """Digits ``(c_0, ..., c_{n-1})`` in A-A with ``sum c_l * k^l = target``.

    Least-significant digit first; at each position the candidates congruent
    to the remainder mod ``k`` are tried largest-first, so the returned
    representation is deterministic.  A remainder too large for the remaining
    positions (``|rem| > k^(n-l) - 1``) is pruned, and failing ``(position,
    remainder)`` states are memoized, which keeps the search polynomial in
    ``n`` instead of enumerating the sumset.

    Returns ``None`` when ``target`` is not in D(n)'.
    """
    if n < 1:
        raise ParamOutOfRange(f"digit count must be >= 1, got {n}")
    k = alphabet.k
    by_residue: dict[int, list[int]] = {}
    for c in alphabet.diffs:
        by_residue.setdefault(c % k, []).append(c)
    for cands in by_residue.values():
        cands.sort(reverse=True)
    caps = [k ** (n - l) - 1 for l in range(n + 1)]
    dead: set[tuple[int, int]] = set()

    def descend(l: int, rem: int) -> tuple[int, ...] | None:
        if l == n:
            return () if rem == 0 else None
        if abs(rem) > caps[l] or (l, rem) in dead:
            return None
        for c in by_residue.get(rem % k, ()):
            tail = descend(l + 1, (rem - c) // k)
            if tail is not None:
                return (c, *tail)
        dead.add((l, rem))
        return None

    digits = descend(0, target)
    if digits is not None:
        assert sum(c * k**l for l, c in enumerate(digits)) == target
        assert all(c in alphabet.diffs for c in digits)
    return digits


# ---------------------------------------------------------------------------
# gap counts and coverage


@dataclass(frozen=True)
class GapCount:
    """Missing-value count of D(n)' by recursion and by brute force.

    ``g`` counts the values in ``[1, k-1]`` outside A-A; ``recursion`` is the
    sequence lambda_1..lambda_n from ``lambda_1 = g``,
    ``lambda_{m+1} = (2g+1) lambda_m + g``; ``brute`` counts the values in
    ``[0, k^n - 1]`` outside D(n)', with the values themselves in
    ``missing``.
    """

    alphabet: DigitAlphabet
    n: int
    g: int
    unit_gaps: tuple[int, ...]
    recursion: tuple[int, ...]
    brute: int
    missing: tuple[int, ...]

    @property
    def matches(self) -> bool:
        return self.recursion[-1] == self.brute


def gap_count(alphabet: DigitAlphabet, n: int) -> GapCount:
    if n < 1:
        raise ParamOutOfRange(f"digit count must be >= 1, got {n}")
    if not alphabet.has_unit_diff:
        raise PreconditionViolated(
            "gap-count recursion needs two digits at distance 1 (1 in A-A)"
        )
    k = alphabet.k
    unit_gaps = tuple(v for v in range(1, k) if v not in alphabet.diffs)
    g = len(unit_gaps)
    recursion = [g]
    for _ in range(n - 1):
        recursion.append((2 * g + 1) * recursion[-1] + g)
    present = set(truncated_sumset(alphabet, n))
    missing = tuple(v for v in range(k**n) if v not in present)
    return GapCount(alphabet, n, g, unit_gaps, tuple(recursion), len(missing), missing)


@dataclass(frozen=True)
class CoverageChecks:
    """Exhaustive verdicts for the three coverage claims about D(n)'.

    * ``half_alphabet_ok`` — A-A contains all of ``[0, ceil(k/2)]`` and every
      value in ``[0, k-1]`` with the parity of ``k - 1``;
    * ``half_range_ok`` — D(n)' contains all of ``[0, ceil(k/2) * k^(n-1)]``;
    * ``parity_ok`` — D(n)' contains every value in ``[0, k^n - 1]`` with the
      parity of ``k - 1``.

    The first two hold only when some digit pair differs by exactly 1; with
    no such pair they are reported as ``None`` (not applicable) rather than
    failures, since e.g. an all-even alphabet generates only even values.
    """

    alphabet: DigitAlphabet
    n: int
    has_unit_diff: bool
    half_alphabet_ok: bool | None
    half_range_ok: bool | None
    parity_ok: bool
    failures: tuple[tuple[str, int], ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def coverage_checks(alphabet: DigitAlphabet, n: int) -> CoverageChecks:
    if n < 1:
        raise ParamOutOfRange(f"digit count must be >= 1, got {n}")
    k = alphabet.k
    half = -(-k // 2)
    parity = (k - 1) % 2
    unit = alphabet.has_unit_diff
    failures: list[tuple[str, int]] = []

    half_alphabet_ok: bool | None = None
    half_range_ok: bool | None = None
    if unit:
        wanted = set(range(half + 1)) | {v for v in range(k) if v % 2 == parity}
        miss = sorted(wanted - alphabet.diffs)
        half_alphabet_ok = not miss
        failures += [("half-alphabet", v) for v in miss]

    present = set(truncated_sumset(alphabet, n))
    if unit:
        miss = [v for v in range(half * k ** (n - 1) + 1) if v not in present]
        half_range_ok = not miss
        failures += [("half-range", v) for v in miss[:8]]

    parity_miss = [v for v in range(parity, k**n, 2) if v not in present]
    failures += [("parity-range", v) for v in parity_miss[:8]]

    return CoverageChecks(
        alphabet,
        n,
        unit,
        half_alphabet_ok,
        half_range_ok,
        not parity_miss,
        tuple(failures),
    )


# ---------------------------------------------------------------------------
# gamma search


@dataclass(frozen=True)
class GammaWitness:
    """A shift ``gamma`` keeping powers of ``k`` representable after scaling.

    Certifies ``k^m - gamma in D(m)'`` and ``k^n - gamma*beta in D(n)'`` for
    every requested multiplier ``beta``, with the digit representations
    recorded (least-significant first).
    """

    alphabet: DigitAlphabet
    n: int
    m: int
    gamma: int
    zero_digits: tuple[int, ...]
    beta_digits: tuple[tuple[int, tuple[int, ...]], ...]

    def digits_for(self, beta: int) -> tuple[int, ...]:
        for b, digits in self.beta_digits:
            if b == beta:
                return digits
        raise ParamOutOfRange(f"multiplier {beta} was not part of the search")


def gamma_search(
    alphabet: DigitAlphabet, multipliers: Iterable[int], horizon: int = 8
) -> GammaWitness:
    """Least ``(n, m, gamma)`` (lexicographically) covering all multipliers.

    Searches ``1 <= n, m <= horizon`` and for each pair all feasible
    ``gamma >= 1`` (beyond the feasible range one side falls outside the
    sumset's span, so the scan is complete).
    """
    betas = sorted(set(multipliers))
    if not betas or any(not isinstance(b, int) or b < 1 for b in betas):
        raise ParamOutOfRange(f"multipliers must be positive integers, got {betas}")
    if alphabet.k < 3:
        raise ParamOutOfRange("gamma search needs base k >= 3")
    if not alphabet.has_unit_diff:
        raise PreconditionViolated("gamma search needs two digits at distance 1")
    if horizon < 1:
        raise ParamOutOfRange(f"horizon must be >= 1, got {horizon}")
    k = alphabet.k
    for n in range(1, horizon + 1):
        for m in range(1, horizon + 1):
            gamma_cap = min(2 * k**m - 1, (2 * k**n - 1) // max(betas))
            for gamma in range(1, gamma_cap + 1):
                zero_digits = sumset_membership(alphabet, m, k**m - gamma)
                if zero_digits is None:
                    continue
                per_beta = []
                for b in betas:
                    digits = sumset_membership(alphabet, n, k**n - gamma * b)
                    if digits is None:
                        break
                    per_beta.append((b, digits))
                else:
                    return GammaWitness(
                        alphabet, n, m, gamma, zero_digits, tuple(per_beta)
                    )
    raise HorizonExceeded(
        f"no gamma witness with n, m <= {horizon} for multipliers {betas}"
    )
