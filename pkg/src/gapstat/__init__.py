"""Gap-statistic uniformity tests with linear-time gap extraction."""

from .dist import (
    EULER_GAMMA,
    asymptotic_max_gap_cdf,
    chi_square_sf,
    exact_max_gap_cdf,
    expected_max_gap,
    expected_min_gap_exact,
    expected_min_gap_paper,
    max_gap_p_value,
    min_gap_cdf_exact,
    min_gap_cdf_paper,
    regularized_gamma_q,
)
from .gaps import (
    BucketSummary,
    GapResult,
    GapSummary,
    SampleSet,
    gap_summary,
    gaps_oracle,
    max_gap_gonzalez,
    merge_bucket_summaries,
    min_gap_rabin,
    validate_samples,
)
from .testkit import (
    Method,
    MinGapLaw,
    Sidedness,
    SignificanceConfig,
    TestOutcome,
    chi_square_uniformity_test,
    decide,
    max_gap_test,
    min_gap_test,
)

__version__ = "0.1.0"
