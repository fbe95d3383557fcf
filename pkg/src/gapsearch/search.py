"""Two-searcher sweep model over a gapped domain.

Two searchers leave the origin together, one sweeping left and one right.
Inside searchable segments they move at speed ``v1``; across deleted gaps
they skip at the faster speed ``v2``.  ``elapsed_time`` gives the
deterministic time to finish sweeping up to a given segment;
``expected_time`` weights each swept segment's full length by that
segment's own probability mass and adds the gap-crossing time, which is the
cost functional this model optimizes (it is *not* the mean arrival time at
the target; see the montecarlo module for that diagnostic).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import DistributionSpec, cdf
from .errors import ConfigurationError, DegenerateTruncationError, DomainError, \
    EvaluationError
from .truncation import Side, TruncatedDistribution, TruncationLayout


@dataclass(frozen=True)
class SearchSpeeds:
    """Sweep speed ``v1`` and gap-traversal speed ``v2``; requires v2 > v1 > 0."""

    v1: float
    v2: float

    def __post_init__(self):
        if not (math.isfinite(self.v1) and self.v1 > 0.0):
            raise DomainError(f"v1 must be finite and > 0, got {self.v1}")
        if not (math.isfinite(self.v2) and self.v2 > self.v1):
            raise DomainError(f"v2 must exceed v1, got v1={self.v1}, v2={self.v2}")


@dataclass(frozen=True)
class TimeRow:
    m: int
    tau: float
    expected: float


@dataclass(frozen=True)
class ExpectedTimeTable:
    label: str
    rows: tuple[TimeRow, ...]


def _delta_gate(k: int) -> float:
    # gap-crossing indicator: 0 when at most one segment has been swept
    return 1.0 if k > 1 else 0.0


def row_range(layout: TruncationLayout) -> range:
    """Valid table indices ``m`` for a layout."""
    if layout.half_line:
        return range(1, layout.n_right + 2)
    return range(0, layout.n_left + layout.n_right + 2)


def _left_weight_index(ell: int, n_left: int, n_right: int) -> int:
    # Weight lookup for the ell-th left sweep term (1 = nearest the origin):
    # literal for the first n_right terms and for the outermost boundary
    # term; the terms in between mirror back toward the origin.  Layouts
    # with n_left <= n_right always resolve to the literal index.  This is
    # the exact functional encoded by the reference tables in the tests.
    if ell <= n_right or ell == n_left + 1:
        return ell
    return n_left + 1 - ell


def _sweep_lengths(layout: TruncationLayout) -> tuple[list[float], list[float]]:
    """Segment lengths in sweep order (nearest the origin first) per side."""
    left = []
    if not layout.half_line:
        prev = 0.0
        for gap in layout.left_gaps:
            left.append(prev - gap.upper)
            prev = gap.lower
        left.append(prev - layout.a)
    right = []
    prev = 0.0
    for gap in layout.right_gaps:
        right.append(gap.lower - prev)
        prev = gap.upper
    right.append(layout.b - prev)
    return left, right


def elapsed_time(layout: TruncationLayout, s: SearchSpeeds, m: int) -> float:
    """Deterministic time to finish sweeping segment ``m``.

    Segment lengths are crossed at ``v1`` and every gap between the origin
    and the segment at ``v2``.
    """
    if m not in row_range(layout):
        raise IndexError(f"m={m} outside valid range {row_range(layout)}")
    left_lens, right_lens = _sweep_lengths(layout)
    n_left = layout.n_left
    if (not layout.half_line) and m <= n_left:
        count = n_left + 1 - m
        sweep = sum(left_lens[:count])
        gaps = _delta_gate(count) * sum(
            g.upper - g.lower for g in layout.left_gaps[:n_left - m])
    else:
        r = m if layout.half_line else m - n_left
        sweep = sum(right_lens[:r])
        gaps = _delta_gate(r) * sum(
            g.upper - g.lower for g in layout.right_gaps[:r - 1])
    return sweep / s.v1 + gaps / s.v2


def _expected_core(m: int, n_left: int, n_right: int, half_line: bool,
                   left_lens, left_gap_lens, left_mass,
                   right_lens, right_gap_lens, right_mass,
                   v1: float, v2: float) -> float:
    """Shared expected-time kernel over sweep-order lengths and masses."""
    if (not half_line) and m <= n_left:
        count = n_left + 1 - m
        sweep = sum(
            left_lens[ell - 1] * left_mass[_left_weight_index(ell, n_left, n_right) - 1]
            for ell in range(1, count + 1))
        gaps = _delta_gate(count) * sum(left_gap_lens[:n_left - m])
    else:
        r = m if half_line else m - n_left
        sweep = sum(right_lens[ell - 1] * right_mass[ell - 1]
                    for ell in range(1, r + 1))
        gaps = _delta_gate(r) * sum(right_gap_lens[:r - 1])
    return sweep / v1 + gaps / v2


def _masses_from_truncated(t: TruncatedDistribution) -> tuple[list[float], list[float]]:
    """Normalized segment masses in sweep order per side."""
    n_left = t.layout.n_left
    segs = t.segments
    if t.layout.half_line:
        left = []
        right = [t._seg_mass[k] for k in range(len(segs))]
    else:
        left = [t._seg_mass[n_left - s] for s in range(n_left + 1)]
        right = [t._seg_mass[n_left + 1 + s] for s in range(len(segs) - n_left - 1)]
    return left, right


def expected_time(t: TruncatedDistribution, s: SearchSpeeds, m: int) -> float:
    """Probability-weighted sweep time for table row ``m``.

    Each segment between the origin and segment ``m`` contributes its full
    length over ``v1`` times its own probability; gaps on the way contribute
    their length over ``v2`` whenever more than one segment is swept.
    """
    if m not in row_range(t.layout):
        raise IndexError(f"m={m} outside valid range {row_range(t.layout)}")
    left_lens, right_lens = _sweep_lengths(t.layout)
    left_mass, right_mass = _masses_from_truncated(t)
    return _expected_core(
        m, t.layout.n_left, t.layout.n_right, t.layout.half_line,
        left_lens, [g.upper - g.lower for g in t.layout.left_gaps], left_mass,
        right_lens, [g.upper - g.lower for g in t.layout.right_gaps], right_mass,
        s.v1, s.v2)


def expected_time_table(t: TruncatedDistribution, s: SearchSpeeds,
                        label: str = "") -> ExpectedTimeTable:
    """All rows (m, tau, expected) for the scenario."""
    rows = tuple(
        TimeRow(m, elapsed_time(t.layout, s, m), expected_time(t, s, m))
        for m in row_range(t.layout))
    return ExpectedTimeTable(label=label, rows=rows)


def baseline_expectation(d: DistributionSpec, a: float, b: float,
                         s: SearchSpeeds, side: Side) -> float:
    """Expected sweep time of one whole side with no interior gaps.

    The side's full length over ``v1`` times the side's share of the mass
    restricted to [a, b].
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < 0.0 < b):
        raise DomainError(f"expected a < 0 < b, got a={a}, b={b}")
    F_a, F_0, F_b = cdf(d, a), cdf(d, 0.0), cdf(d, b)
    norm = F_b - F_a
    if not norm > 1e-12:
        raise DegenerateTruncationError(f"no mass inside [{a}, {b}]")
    if side is Side.LEFT:
        return (0.0 - a) / s.v1 * (F_0 - F_a) / norm
    return b / s.v1 * (F_b - F_0) / norm


# ---------------------------------------------------------------------------
# Raw-mesh evaluation: no ordering validation, tolerates zero-width gaps.
# Used by the contour grids and by the mesh optimizer's objective, where
# intermediate mesh vectors may sit on (or, inside difference stencils,
# marginally across) the ordering boundary.
# ---------------------------------------------------------------------------

def _mesh_expected_time(d: DistributionSpec, a: float, b: float,
                        left: list[tuple[float, float]],
                        right: list[tuple[float, float]],
                        v1: float, v2: float, m: int, half_line: bool) -> float:
    n_left, n_right = len(left), len(right)
    F0 = cdf(d, 0.0)
    Fa = F0 if half_line else cdf(d, a)
    Fb = cdf(d, b)
    F_lo_left = [cdf(d, lo) for lo, hi in left]
    F_hi_left = [cdf(d, hi) for lo, hi in left]
    F_lo_right = [cdf(d, lo) for lo, hi in right]
    F_hi_right = [cdf(d, hi) for lo, hi in right]

    deleted = sum(h - l for l, h in zip(F_lo_left, F_hi_left)) \
        + sum(h - l for l, h in zip(F_lo_right, F_hi_right))
    norm = Fb - Fa - deleted
    if not (math.isfinite(norm) and norm > 0.0):
        raise EvaluationError(
            f"mesh leaves non-positive mass (norm={norm!r}) for left={left}, "
            f"right={right}")

    left_mass, left_lens = [], []
    prev_val, prev_pt = F0, 0.0
    for (lo, hi), f_lo, f_hi in zip(left, F_lo_left, F_hi_left):
        left_mass.append((prev_val - f_hi) / norm)
        left_lens.append(prev_pt - hi)
        prev_val, prev_pt = f_lo, lo
    if not half_line:
        left_mass.append((prev_val - Fa) / norm)
        left_lens.append(prev_pt - a)

    right_mass, right_lens = [], []
    prev_val, prev_pt = F0, 0.0
    for (lo, hi), f_lo, f_hi in zip(right, F_lo_right, F_hi_right):
        right_mass.append((f_lo - prev_val) / norm)
        right_lens.append(lo - prev_pt)
        prev_val, prev_pt = f_hi, hi
    right_mass.append((Fb - prev_val) / norm)
    right_lens.append(b - prev_pt)

    return _expected_core(
        m, n_left, n_right, half_line,
        left_lens, [hi - lo for lo, hi in left], left_mass,
        right_lens, [hi - lo for lo, hi in right], right_mass, v1, v2)


@dataclass(frozen=True)
class GridResult:
    """Expected-time surface over two varied gap coordinates.

    ``values[iy, ix]`` is the expectation at (x[ix], y[iy]); infeasible
    nodes (gap lower edge above its upper edge) hold NaN.
    """

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray


def _parse_range(name: str, rng) -> np.ndarray:
    lo, hi, steps = rng
    lo, hi, steps = float(lo), float(hi), int(steps)
    if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise ConfigurationError(f"bad {name}: {rng!r}")
    return np.linspace(lo, hi, steps)


def contour_grid(d: DistributionSpec, base_layout: TruncationLayout,
                 s: SearchSpeeds, target_m: int, vary: Side,
                 x_range, y_range, workers: int = 1) -> GridResult:
    """Expected time over a Cartesian grid of one gap's two edges.

    The varied side must carry exactly one gap.  Grid x is the gap's lower
    edge, grid y its upper edge; nodes with x > y are NaN, the x == y
    diagonal is evaluated as a zero-width gap.  Evaluation is pure and
    partitioned row-wise across ``workers`` threads when ``workers > 1``.
    """
    n_varied = base_layout.n_left if vary is Side.LEFT else base_layout.n_right
    if n_varied != 1:
        raise ConfigurationError(
            f"varied {vary.value} side must have exactly one gap, has {n_varied}")
    if target_m not in row_range(base_layout):
        raise IndexError(f"target_m={target_m} outside {row_range(base_layout)}")
    xs = _parse_range("x_range", x_range)
    ys = _parse_range("y_range", y_range)
    a, b = base_layout.a, base_layout.b
    if vary is Side.LEFT:
        if xs[0] < a or ys[-1] > 0.0:
            raise ConfigurationError(
                f"left-gap ranges must stay inside [{a}, 0]")
    else:
        lo_bound = 0.0
        if xs[0] < lo_bound or ys[-1] > b:
            raise ConfigurationError(
                f"right-gap ranges must stay inside [0, {b}]")

    left = [tuple(g) for g in base_layout.left_gaps]
    right = [tuple(g) for g in base_layout.right_gaps]
    half = base_layout.half_line

    def fill_row(iy: int) -> np.ndarray:
        yv = float(ys[iy])
        row = np.full(len(xs), np.nan)
        for ix, xv in enumerate(xs):
            xv = float(xv)
            if xv > yv:
                continue
            if vary is Side.LEFT:
                row[ix] = _mesh_expected_time(
                    d, a, b, [(xv, yv)], right, s.v1, s.v2, target_m, half)
            else:
                row[ix] = _mesh_expected_time(
                    d, a, b, left, [(xv, yv)], s.v1, s.v2, target_m, half)
        return row

    values = np.empty((len(ys), len(xs)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for iy, row in enumerate(pool.map(fill_row, range(len(ys)))):
                values[iy] = row
    else:
        for iy in range(len(ys)):
            values[iy] = fill_row(iy)
    return GridResult(x=xs, y=ys, values=values)
