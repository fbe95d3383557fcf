"""Gapped search domains and distributions truncated onto them.

A :class:`TruncationLayout` describes the searchable set: an interval
``[a, b]`` containing the origin minus a family of open "gaps" (deleted
subintervals) on each side of the origin, where the target provably is not.
Deleting the gaps' probability and renormalizing yields a
:class:`TruncatedDistribution` with a piecewise CDF that is flat across
every gap.

Gap lists are ordered *nearest the origin first*: ``left_gaps[0]`` is the
left gap closest to 0, ``right_gaps[0]`` the right gap closest to 0.  Each
gap is an open ``(lower, upper)`` interval; its endpoints still belong to
the searchable set.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

from .distributions import DistributionSpec, cdf, pdf, support
from .errors import DegenerateTruncationError, DomainError, LayoutError

_MIN_NORM = 1e-12
_QUANTILE_XTOL = 1e-12


class Gap(NamedTuple):
    lower: float
    upper: float


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class TruncationClass(Enum):
    """Shape classification of a layout.

    SYMMETRIC: equal gap counts, b == -a, and mirrored gap endpoints.
    COMMENSURATE: equal gap counts without mirror symmetry (a zero-gap
    layout counts as commensurate with zero pairs).
    UNEVEN: unequal gap counts.
    HALF_LINE: gaps only to the right of the origin with a == 0, for
    distributions supported on [0, inf).
    """

    SYMMETRIC = "symmetric"
    COMMENSURATE = "commensurate"
    UNEVEN = "uneven"
    HALF_LINE = "half-line"


@dataclass(frozen=True)
class Segment:
    """One maximal searchable interval, indexed left to right across the domain."""

    index: int
    lower: float
    upper: float
    side: Side

    @property
    def length(self) -> float:
        return self.upper - self.lower


def _as_gaps(raw: Sequence) -> tuple[Gap, ...]:
    return tuple(Gap(float(lo), float(hi)) for lo, hi in raw)


@dataclass(frozen=True)
class TruncationLayout:
    """Endpoints plus ordered deleted subintervals on each side of the origin.

    Half-line layouts use ``a == 0`` and no left gaps.  Validation enforces
    the strict interleaving
    ``a < lower_M < upper_M < ... < lower_1 < upper_1 < 0`` on the left and
    ``0 < lower_1 < upper_1 < ... < lower_N < upper_N < b`` on the right
    (half-line: ``0 <= lower_1``).
    """

    a: float
    b: float
    left_gaps: tuple[Gap, ...] = field(default=())
    right_gaps: tuple[Gap, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "left_gaps", _as_gaps(self.left_gaps))
        object.__setattr__(self, "right_gaps", _as_gaps(self.right_gaps))
        self._validate()

    @property
    def half_line(self) -> bool:
        return self.a == 0.0

    @property
    def n_left(self) -> int:
        return len(self.left_gaps)

    @property
    def n_right(self) -> int:
        return len(self.right_gaps)

    def _validate(self) -> None:
        for name, value in (("a", self.a), ("b", self.b)):
            if not math.isfinite(value):
                raise LayoutError(f"endpoint {name} must be finite, got {value!r}")
        for side, gaps in (("left", self.left_gaps), ("right", self.right_gaps)):
            for j, gap in enumerate(gaps, start=1):
                if not (math.isfinite(gap.lower) and math.isfinite(gap.upper)):
                    raise LayoutError(f"{side} gap {j} has non-finite endpoint {gap}")

        if self.a == 0.0:
            if self.left_gaps:
                raise LayoutError("half-line layout (a == 0) cannot have left gaps")
            if self.right_gaps and not (0.0 <= self.right_gaps[0].lower):
                g = self.right_gaps[0]
                raise LayoutError(
                    f"right gap 1: expected 0 <= lower, got lower={g.lower}")
        else:
            if not self.a < 0.0:
                raise LayoutError(f"expected a < 0 < b, got a={self.a}")
            # left chain, walking outward from the origin
            prev, prev_name = 0.0, "0"
            for j, gap in enumerate(self.left_gaps, start=1):
                if not gap.upper < prev:
                    raise LayoutError(
                        f"left gap {j}: expected upper < {prev_name}, "
                        f"got upper={gap.upper}")
                if not gap.lower < gap.upper:
                    raise LayoutError(
                        f"left gap {j}: expected lower < upper, got {tuple(gap)}")
                prev, prev_name = gap.lower, f"left gap {j} lower={gap.lower}"
            if not self.a < prev:
                raise LayoutError(
                    f"expected a < {prev_name}, got a={self.a}")
            if self.right_gaps and not (0.0 < self.right_gaps[0].lower):
                g = self.right_gaps[0]
                raise LayoutError(
                    f"right gap 1: expected 0 < lower, got lower={g.lower}")

        if not self.b > 0.0:
            raise LayoutError(f"expected b > 0, got b={self.b}")
        # right chain, walking outward from the origin
        prev, prev_name = None, None
        for i, gap in enumerate(self.right_gaps, start=1):
            if prev is not None and not prev < gap.lower:
                raise LayoutError(
                    f"right gap {i}: expected {prev_name} < lower, "
                    f"got lower={gap.lower}")
            if not gap.lower < gap.upper:
                raise LayoutError(
                    f"right gap {i}: expected lower < upper, got {tuple(gap)}")
            prev, prev_name = gap.upper, f"right gap {i} upper={gap.upper}"
        last_right = self.right_gaps[-1].upper if self.right_gaps else 0.0
        if not last_right < self.b:
            raise LayoutError(
                f"expected right gap {len(self.right_gaps)} upper < b, "
                f"got upper={last_right}, b={self.b}")

    def segments(self) -> tuple[Segment, ...]:
        """All searchable segments, indexed left to right."""
        segs: list[Segment] = []
        if not self.half_line:
            # leftmost first: [a, lower_M], gaps walked outside-in
            bounds_left = [self.a]
            for gap in reversed(self.left_gaps):
                bounds_left.extend((gap.lower, gap.upper))
            bounds_left.append(0.0)
            for k in range(0, len(bounds_left), 2):
                segs.append(Segment(len(segs), bounds_left[k], bounds_left[k + 1],
                                    Side.LEFT))
        bounds_right = [0.0]
        for gap in self.right_gaps:
            bounds_right.extend((gap.lower, gap.upper))
        bounds_right.append(self.b)
        for k in range(0, len(bounds_right), 2):
            segs.append(Segment(len(segs), bounds_right[k], bounds_right[k + 1],
                                Side.RIGHT))
        return tuple(segs)


def classify(layout: TruncationLayout) -> TruncationClass:
    """Classify a layout; symmetry comparisons use exact floating equality."""
    if layout.half_line:
        return TruncationClass.HALF_LINE
    if layout.n_left == layout.n_right:
        mirrored = layout.b == -layout.a and all(
            r.lower == -l.upper and r.upper == -l.lower
            for l, r in zip(layout.left_gaps, layout.right_gaps))
        return TruncationClass.SYMMETRIC if mirrored else TruncationClass.COMMENSURATE
    return TruncationClass.UNEVEN


@dataclass(frozen=True)
class TruncatedDistribution:
    """A distribution restricted to a gapped layout and renormalized.

    ``norm`` is the surviving probability mass; ``gap_mass_prefix[k]`` is the
    deleted mass strictly below segment ``k``.  Everything is precomputed at
    construction, so evaluation is cheap and the object is immutable.
    """

    dist: DistributionSpec
    layout: TruncationLayout
    norm: float
    gap_mass_prefix: tuple[float, ...]
    _segments: tuple[Segment, ...]
    _seg_mass: tuple[float, ...]       # normalized, sums to 1
    _cum_mass: tuple[float, ...]       # running sums of _seg_mass
    _F_a: float

    @property
    def segments(self) -> tuple[Segment, ...]:
        return self._segments

    @property
    def n_segments(self) -> int:
        return len(self._segments)


def make_truncated(d: DistributionSpec,
                   layout: TruncationLayout) -> TruncatedDistribution:
    """Restrict ``d`` to ``layout`` and renormalize.

    Distributions supported on [0, inf) require a half-line layout and vice
    versa.  Raises :class:`DegenerateTruncationError` when the surviving
    mass is below 1e-12.
    """
    lo_support, _ = support(d)
    if (lo_support == 0.0) != layout.half_line:
        if layout.half_line:
            raise LayoutError(
                "half-line layout requires a distribution supported on [0, inf)")
        raise LayoutError(
            "distribution supported on [0, inf) requires a half-line layout")

    F = lambda x: cdf(d, x)
    segs = layout.segments()
    F_a = F(layout.a)

    raw_mass = [F(s.upper) - F(s.lower) for s in segs]
    gap_prefix: list[float] = []
    deleted = 0.0
    prev_upper = layout.a
    for s in segs:
        if s.lower > prev_upper:
            deleted += F(s.lower) - F(prev_upper)
        gap_prefix.append(deleted)
        prev_upper = s.upper

    norm = F(layout.b) - F_a - deleted
    if not (norm > _MIN_NORM):
        raise DegenerateTruncationError(
            f"deleted subintervals leave no probability mass (norm={norm:.3e})")

    seg_mass = tuple(max(0.0, m) / norm for m in raw_mass)
    cum: list[float] = []
    running = 0.0
    for m in seg_mass:
        running += m
        cum.append(running)
    return TruncatedDistribution(
        dist=d, layout=layout, norm=norm, gap_mass_prefix=tuple(gap_prefix),
        _segments=segs, _seg_mass=seg_mass, _cum_mass=tuple(cum), _F_a=F_a)


def _locate(t: TruncatedDistribution, x: float) -> tuple[int, bool]:
    """(segment index, inside_gap) for x in [a, b]."""
    segs = t._segments
    # bisect on segment uppers: first segment whose upper >= x
    uppers = [s.upper for s in segs]
    k = bisect_left(uppers, x)
    if k >= len(segs):
        return len(segs) - 1, False
    if x >= segs[k].lower:
        return k, False
    return k - 1, True   # between segment k-1 and k


def truncated_pdf(t: TruncatedDistribution, x: float) -> float:
    """Renormalized density: f(x)/norm on the searchable set, 0 elsewhere."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if x < t.layout.a or x > t.layout.b:
        return 0.0
    _, in_gap = _locate(t, x)
    if in_gap:
        return 0.0
    return pdf(t.dist, x) / t.norm


def truncated_cdf(t: TruncatedDistribution, x: float) -> float:
    """Piecewise CDF: (F(x) - F(a) - deleted mass below x) / norm.

    Constant across each gap, 0 at ``a``, 1 at ``b``; clamps outside [a, b].
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if x <= t.layout.a:
        return 0.0
    if x >= t.layout.b:
        return 1.0
    k, in_gap = _locate(t, x)
    if in_gap:
        return t._cum_mass[k]
    value = (cdf(t.dist, x) - t._F_a - t.gap_mass_prefix[k]) / t.norm
    return min(1.0, max(0.0, value))


def segment_probability(t: TruncatedDistribution, m: int) -> float:
    """Probability that the target lies in segment ``m`` (left-to-right index)."""
    if not 0 <= m < t.n_segments:
        raise IndexError(
            f"segment index {m} out of range 0..{t.n_segments - 1}")
    return t._seg_mass[m]


def quantile(t: TruncatedDistribution, p: float) -> float:
    """Inverse of :func:`truncated_cdf` on the searchable set.

    Bisection within the owning segment to 1e-12.  A ``p`` equal to the
    plateau value across a gap resolves to the left edge of the segment
    after the gap.
    """
    p = float(p)
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    segs = t._segments
    if p == 0.0:
        return segs[0].lower
    if p == 1.0:
        return segs[-1].upper
    cum = t._cum_mass
    k = bisect_left(cum, p)
    if k >= len(segs):
        k = len(segs) - 1
    if p == cum[k]:
        # p sits exactly on the plateau at the top of segment k; resolve to
        # the left edge of the following segment
        return segs[k + 1].lower if k + 1 < len(segs) else segs[k].upper
    seg = segs[k]
    # solve F(x) = target on [lower, upper]; F is the base CDF, monotone
    target = t._F_a + t.gap_mass_prefix[k] + p * t.norm
    lo, hi = seg.lower, seg.upper
    f_lo = cdf(t.dist, lo) - target
    if f_lo >= 0.0:
        return lo
    while hi - lo > _QUANTILE_XTOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if cdf(t.dist, mid) - target < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
