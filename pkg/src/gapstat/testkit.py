"""End-to-end uniformity tests: statistic, p-value, decision."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import dist
from .errors import TooFewSamplesError
from .gaps import Pair, SampleSet, max_gap_gonzalez, min_gap_rabin


class Sidedness(str, enum.Enum):
    ONE_SIDED = "one_sided"
    TWO_SIDED = "two_sided"


class Method(str, enum.Enum):
    CHI_SQUARE = "chi_square"
    MAX_GAP = "max_gap"
    MIN_GAP = "min_gap"


class MinGapLaw(str, enum.Enum):
    EXACT = "exact"
    PAPER = "paper"


@dataclass(frozen=True)
class SignificanceConfig:
    alpha: float = 0.05
    sidedness: Sidedness = Sidedness.ONE_SIDED

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        object.__setattr__(self, "sidedness", Sidedness(self.sidedness))


@dataclass(frozen=True)
class TestOutcome:
    method: Method
    statistic: float
    n_gaps_or_df: int
    p_one_sided: float
    p_two_sided: float
    passed: bool
    witness: Optional[Pair] = None

    __test__ = False  # not a pytest class


def two_sided(p: float) -> float:
    return min(1.0, max(0.0, 2.0 * min(p, 1.0 - p)))


def decide(p: float, cfg: SignificanceConfig) -> bool:
    """One-sided: pass iff p >= alpha.  Two-sided: alpha/2 <= p <= 1 - alpha/2."""
    if cfg.sidedness is Sidedness.ONE_SIDED:
        return p >= cfg.alpha
    return cfg.alpha / 2.0 <= p <= 1.0 - cfg.alpha / 2.0


def _outcome(method, statistic, n, p, cfg, witness=None) -> TestOutcome:
    return TestOutcome(method, float(statistic), int(n), p, two_sided(p), decide(p, cfg), witness)


def chi_square_statistic(values: np.ndarray, bins: int) -> int:
    """Sum of (count - 1)**2 over ``bins`` equal bins (expected count 1 each)."""
    idx = np.minimum((values * bins).astype(np.intp), bins - 1)
    counts = np.bincount(idx, minlength=bins).astype(np.int64)
    return int(((counts - 1) ** 2).sum())


def chi_square_uniformity_test(s: SampleSet, cfg: SignificanceConfig = SignificanceConfig()) -> TestOutcome:
    """Pearson test with one bin per observation and N - 1 degrees of freedom."""
    n = s.count
    if n < 2:
        raise TooFewSamplesError(f"chi-square test needs at least 2 observations, got {n}")
    stat = chi_square_statistic(s.values, n)
    df = n - 1
    return _outcome(Method.CHI_SQUARE, stat, df, dist.chi_square_sf(stat, df), cfg)


def max_gap_test(s: SampleSet, cfg: SignificanceConfig = SignificanceConfig()) -> TestOutcome:
    res = max_gap_gonzalez(s)
    p = dist.max_gap_p_value(res.gap, res.n_gaps)
    return _outcome(Method.MAX_GAP, res.gap, res.n_gaps, p, cfg, res.pair)


def min_gap_test(
    s: SampleSet,
    cfg: SignificanceConfig = SignificanceConfig(),
    law: MinGapLaw = MinGapLaw.EXACT,
    rng: Optional[np.random.Generator] = None,
) -> TestOutcome:
    """Lower-tail test: a small p flags a suspiciously small min gap."""
    res = min_gap_rabin(s, rng)
    if MinGapLaw(law) is MinGapLaw.PAPER:
        p = dist.min_gap_cdf_paper(res.gap, res.n_gaps)
    else:
        p = dist.min_gap_cdf_exact(res.gap, res.n_gaps)
    return _outcome(Method.MIN_GAP, res.gap, res.n_gaps, p, cfg, res.pair)


def run_test(method, s: SampleSet, cfg: SignificanceConfig = SignificanceConfig(), **kwargs) -> TestOutcome:
    method = Method(method)
    if method is Method.CHI_SQUARE:
        return chi_square_uniformity_test(s, cfg)
    if method is Method.MAX_GAP:
        return max_gap_test(s, cfg)
    return min_gap_test(s, cfg, **kwargs)
