"""Target-location distribution families.

Four families model where the hidden target sits on the line: normal,
Cauchy, skew-normal (all supported on the whole line) and gamma (supported
on the nonnegative half-line).  Each is a frozen parameter record; ``pdf``
and ``cdf`` dispatch on the record type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError
from .special import owen_t, regularized_lower_gamma, std_normal_cdf

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _check_positive(name: str, value: float) -> float:
    value = _check_finite(name, value)
    if value <= 0.0:
        raise DomainError(f"{name} must be > 0, got {value}")
    return value


@dataclass(frozen=True)
class Normal:
    """Normal distribution with mean ``mu`` and standard deviation ``sigma``."""

    mu: float
    sigma: float

    def __post_init__(self):
        _check_finite("mu", self.mu)
        _check_positive("sigma", self.sigma)


@dataclass(frozen=True)
class Cauchy:
    """Cauchy distribution: peak location ``x_tilde``, half-width ``c``."""

    x_tilde: float
    c: float

    def __post_init__(self):
        _check_finite("x_tilde", self.x_tilde)
        _check_positive("c", self.c)


@dataclass(frozen=True)
class SkewNormal:
    """Skew-normal distribution: location ``eta``, scale ``varpi``, shape ``varrho``.

    The density carries the leading factor 2 so it integrates to one and
    stays consistent with the CDF below (without it the "density" would
    carry only half the total mass).
    """

    eta: float
    varpi: float
    varrho: float

    def __post_init__(self):
        _check_finite("eta", self.eta)
        _check_positive("varpi", self.varpi)
        _check_finite("varrho", self.varrho)


@dataclass(frozen=True)
class Gamma:
    """Gamma distribution with shape ``kappa`` and scale ``theta``; support [0, inf)."""

    kappa: float
    theta: float

    def __post_init__(self):
        _check_positive("kappa", self.kappa)
        _check_positive("theta", self.theta)


DistributionSpec = Union[Normal, Cauchy, SkewNormal, Gamma]


def support(d: DistributionSpec) -> tuple[float, float]:
    """Support interval of the distribution."""
    if isinstance(d, Gamma):
        return (0.0, math.inf)
    return (-math.inf, math.inf)


def is_symmetric(d: DistributionSpec) -> bool:
    return isinstance(d, (Normal, Cauchy))


def center(d: DistributionSpec) -> float | None:
    """Symmetry center, or None for the asymmetric families."""
    if isinstance(d, Normal):
        return d.mu
    if isinstance(d, Cauchy):
        return d.x_tilde
    return None


def pdf(d: DistributionSpec, x: float) -> float:
    """Density of ``d`` at ``x``; ``x`` must lie in the support."""
    x = _check_finite("x", x)
    if isinstance(d, Normal):
        t = (x - d.mu) / d.sigma
        return math.exp(-0.5 * t * t) / (d.sigma * _SQRT_2PI)
    if isinstance(d, Cauchy):
        dx = x - d.x_tilde
        return d.c / (math.pi * (d.c * d.c + dx * dx))
    if isinstance(d, SkewNormal):
        z = (x - d.eta) / d.varpi
        return (2.0 / (d.varpi * _SQRT_2PI)) * math.exp(-0.5 * z * z) \
            * std_normal_cdf(d.varrho * z)
    if isinstance(d, Gamma):
        if x < 0.0:
            raise DomainError(f"gamma density undefined for x < 0, got {x}")
        if x == 0.0:
            if d.kappa > 1.0:
                return 0.0
            if d.kappa == 1.0:
                return 1.0 / d.theta
            return math.inf
        logp = (d.kappa - 1.0) * math.log(x) - x / d.theta \
            - math.lgamma(d.kappa) - d.kappa * math.log(d.theta)
        return math.exp(logp)
    raise TypeError(f"unknown distribution spec: {d!r}")


def cdf(d: DistributionSpec, x: float) -> float:
    """Distribution function of ``d`` at ``x``.

    For the gamma family, x < 0 returns 0 rather than raising; that keeps
    piecewise evaluation on half-line layouts branch-free.
    """
    x = _check_finite("x", x)
    if isinstance(d, Normal):
        return std_normal_cdf((x - d.mu) / d.sigma)
    if isinstance(d, Cauchy):
        return math.atan((x - d.x_tilde) / d.c) / math.pi + 0.5
    if isinstance(d, SkewNormal):
        z = (x - d.eta) / d.varpi
        return min(1.0, max(0.0, std_normal_cdf(z) - 2.0 * owen_t(z, d.varrho)))
    if isinstance(d, Gamma):
        if x <= 0.0:
            return 0.0
        return regularized_lower_gamma(d.kappa, x / d.theta)
    raise TypeError(f"unknown distribution spec: {d!r}")
