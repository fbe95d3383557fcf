"""Shared scenario registry: the distribution/layout pairs exercised everywhere.

Reference expected-time and baseline constants live in the test modules
next to the checks that use them.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from gapsearch import Cauchy, Gamma, Normal, SearchSpeeds, SkewNormal, \
    TruncationLayout, make_truncated

SPEEDS = SearchSpeeds(v1=1.0, v2=5.0)

TWO_GAP_LAYOUT = TruncationLayout(
    a=-20.0, b=30.0, left_gaps=[(-6.0, -4.0), (-15.0, -10.0)],
    right_gaps=[(2.0, 7.0), (11.0, 17.0)])

UNEVEN_LAYOUT = TruncationLayout(
    a=-30.0, b=20.0, left_gaps=[(-6.0, -4.0), (-17.0, -13.0), (-23.0, -20.0)],
    right_gaps=[(3.0, 6.0), (13.0, 17.0)])

MIRRORED_LAYOUT = TruncationLayout(
    a=-20.0, b=20.0, left_gaps=[(-8.0, -4.0), (-17.0, -13.0)],
    right_gaps=[(4.0, 8.0), (13.0, 17.0)])

HALFLINE_LAYOUT = TruncationLayout(
    a=0.0, b=30.0, right_gaps=[(2.0, 7.0), (11.0, 17.0)])

NO_GAP_LAYOUT = TruncationLayout(a=-20.0, b=30.0)

WIDE_NORMAL = Normal(mu=0.0, sigma=4.53)
OFFSET_CAUCHY = Cauchy(x_tilde=1.38, c=2.76)
LEFT_SKEW = SkewNormal(eta=-2.3, varpi=1.6, varrho=-3.37)
TARGET_GAMMA = Gamma(kappa=3.15, theta=1.27)
SHIFTED_NORMAL = Normal(mu=2.5, sigma=3.6)
WIDE_CAUCHY = Cauchy(x_tilde=4.6, c=2.5)
RIGHT_SKEW = SkewNormal(eta=-2.13, varpi=2.6, varrho=5.48)
CENTERED_CAUCHY = Cauchy(x_tilde=0.0, c=2.76)

# every distribution/layout pair the invariants run over
SCENARIOS = [
    ("normal-two-gap", WIDE_NORMAL, TWO_GAP_LAYOUT),
    ("cauchy-two-gap", OFFSET_CAUCHY, TWO_GAP_LAYOUT),
    ("skew-two-gap", LEFT_SKEW, TWO_GAP_LAYOUT),
    ("gamma-half-line", TARGET_GAMMA, HALFLINE_LAYOUT),
    ("normal-uneven", SHIFTED_NORMAL, UNEVEN_LAYOUT),
    ("cauchy-uneven", WIDE_CAUCHY, UNEVEN_LAYOUT),
    ("skew-uneven", RIGHT_SKEW, UNEVEN_LAYOUT),
    ("normal-mirrored", WIDE_NORMAL, MIRRORED_LAYOUT),
    ("cauchy-mirrored", CENTERED_CAUCHY, MIRRORED_LAYOUT),
    ("normal-no-gap", WIDE_NORMAL, NO_GAP_LAYOUT),
]


@pytest.fixture(scope="session")
def truncated_scenarios():
    return [(label, make_truncated(d, layout)) for label, d, layout in SCENARIOS]


@pytest.fixture(scope="session")
def speeds():
    return SPEEDS
