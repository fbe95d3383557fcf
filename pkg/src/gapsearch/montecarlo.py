"""Statistical validation of the truncated distributions.

Inverse-transform sampling through the piecewise quantile map, an empirical
(Kolmogorov-style) check of the piecewise CDF, and a simulated mean arrival
time of the searcher at the target.  The arrival-time means are a
diagnostic only: the search model's expected sweep time weights each swept
segment's *full* length by that segment's probability, which is a different
functional from the mean time of arrival at the target, and the two agree
only in degenerate cases.

Sampling uses numpy's PCG64 generator (128-bit state) seeded explicitly,
so a given seed always reproduces the same sample sequence.  The bisection
runs on vectorized base CDFs (scipy.special kernels); the hand-rolled
scalar CDF route in :mod:`gapsearch.truncation` is deliberately *not* used
here, so the distance check below cross-validates the two implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .distributions import Cauchy, DistributionSpec, Gamma, Normal, SkewNormal
from .errors import DomainError
from .search import SearchSpeeds
from .truncation import Side, TruncatedDistribution, truncated_cdf

_BISECT_XTOL = 1e-12


@dataclass(frozen=True)
class SampleReport:
    """Summary statistics of one validation run.

    ``std_error`` is the standard error of the pooled mean arrival time
    (sample standard deviation over sqrt(n)).
    """

    n: int
    seed: int
    sup_cdf_distance: float
    segment_frequencies: tuple[float, ...]
    mean_arrival_left: float
    mean_arrival_right: float
    std_error: float


def _vector_cdf(d: DistributionSpec):
    """Vectorized base CDF over numpy arrays."""
    if isinstance(d, Normal):
        return lambda xs: _sp.ndtr((xs - d.mu) / d.sigma)
    if isinstance(d, Cauchy):
        return lambda xs: np.arctan((xs - d.x_tilde) / d.c) / np.pi + 0.5
    if isinstance(d, SkewNormal):
        def f(xs):
            z = (xs - d.eta) / d.varpi
            return np.clip(_sp.ndtr(z) - 2.0 * _sp.owens_t(z, d.varrho), 0.0, 1.0)
        return f
    if isinstance(d, Gamma):
        return lambda xs: np.where(
            xs > 0.0, _sp.gammainc(d.kappa, np.maximum(xs, 0.0) / d.theta), 0.0)
    raise TypeError(f"unknown distribution spec: {d!r}")


def sample(t: TruncatedDistribution, seed: int, n: int) -> np.ndarray:
    """Draw ``n`` positions by inverse transform; deterministic per seed.

    Each uniform draw picks its segment through the cumulative segment
    masses, then bisects the base CDF inside that segment, so every sample
    lies in the searchable set and never inside a gap.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(n)

    F = _vector_cdf(t.dist)
    segs = t.segments
    lowers = np.array([s.lower for s in segs])
    uppers = np.array([s.upper for s in segs])
    F_low = F(lowers)
    masses = F(uppers) - F_low
    cum = np.cumsum(masses)
    total = cum[-1]

    idx = np.searchsorted(cum, u * total, side="left")
    idx = np.minimum(idx, len(segs) - 1)
    prev = np.concatenate(([0.0], cum[:-1]))
    target = F_low[idx] + (u * total - prev[idx])

    lo = lowers[idx].copy()
    hi = uppers[idx].copy()
    while np.max(hi - lo) > _BISECT_XTOL:
        mid = 0.5 * (lo + hi)
        above = F(mid) >= target
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def empirical_cdf_distance(samples, t: TruncatedDistribution) -> float:
    """Sup distance between the sample empirical CDF and the piecewise CDF."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    if n == 0:
        raise DomainError("samples must be nonempty")
    cdf_vals = np.array([truncated_cdf(t, x) for x in xs])
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - cdf_vals),
                     np.max(cdf_vals - (steps - 1.0 / n))))


def _segment_indices(t: TruncatedDistribution, xs: np.ndarray) -> np.ndarray:
    uppers = np.array([s.upper for s in t.segments])
    idx = np.searchsorted(uppers, xs, side="left")
    return np.minimum(idx, len(uppers) - 1)


def _arrival_offsets(t: TruncatedDistribution):
    """Per-segment offsets for arrival times, walking outward per side.

    Returns (sweep_before, gaps_before, entry_edge, is_left): searchable
    length swept and gap length crossed before entering each segment, plus
    the segment edge nearest the origin.
    """
    segs = t.segments
    sweep_before = np.zeros(len(segs))
    gaps_before = np.zeros(len(segs))
    entry_edge = np.zeros(len(segs))
    is_left = np.array([seg.side is Side.LEFT for seg in segs])
    for side in (Side.LEFT, Side.RIGHT):
        members = [seg for seg in segs if seg.side is side]
        members.sort(key=lambda seg: -seg.upper if side is Side.LEFT else seg.lower)
        swept = 0.0
        crossed_gaps = 0.0
        far_edge = 0.0
        for seg in members:
            near = seg.upper if side is Side.LEFT else seg.lower
            crossed_gaps += abs(near - far_edge)
            sweep_before[seg.index] = swept
            gaps_before[seg.index] = crossed_gaps
            entry_edge[seg.index] = near
            swept += seg.length
            far_edge = seg.lower if side is Side.LEFT else seg.upper
    return sweep_before, gaps_before, entry_edge, is_left


def _arrival_times(t: TruncatedDistribution, s: SearchSpeeds,
                   xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sweep_before, gaps_before, entry_edge, is_left = _arrival_offsets(t)
    idx = _segment_indices(t, xs)
    times = (sweep_before[idx] + np.abs(xs - entry_edge[idx])) / s.v1 \
        + gaps_before[idx] / s.v2
    return times, is_left[idx]


def simulate_arrival(t: TruncatedDistribution, s: SearchSpeeds,
                     samples) -> tuple[float, float]:
    """Side-conditional mean arrival times of the searchers at the target.

    A target at ``x`` is reached after sweeping all same-side segments
    between the origin and ``x`` at ``v1``, crossing the same-side gaps on
    the way at ``v2``, and entering ``x``'s segment up to ``x`` at ``v1``.
    Returns ``(mean_left, mean_right)``; a side with no samples yields NaN.
    """
    xs = np.asarray(samples, dtype=float)
    if xs.size == 0:
        raise DomainError("samples must be nonempty")
    times, left_mask = _arrival_times(t, s, xs)
    mean_left = float(np.mean(times[left_mask])) if left_mask.any() else math.nan
    mean_right = float(np.mean(times[~left_mask])) if (~left_mask).any() else math.nan
    return mean_left, mean_right


def build_report(t: TruncatedDistribution, s: SearchSpeeds,
                 seed: int, n: int) -> SampleReport:
    """Sample, validate, and summarize one scenario."""
    xs = sample(t, seed, n)
    distance = empirical_cdf_distance(xs, t)
    counts = np.bincount(_segment_indices(t, xs), minlength=t.n_segments)
    freqs = tuple(float(c) / n for c in counts)
    mean_left, mean_right = simulate_arrival(t, s, xs)
    times, _ = _arrival_times(t, s, xs)
    std_error = float(np.std(times, ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return SampleReport(n=n, seed=seed, sup_cdf_distance=distance,
                        segment_frequencies=freqs,
                        mean_arrival_left=mean_left, mean_arrival_right=mean_right,
                        std_error=std_error)
