import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special, stats

from gapstat import dist
from gapstat.datagen import (
    GeneratorSpec,
    gen_band_excluded,
    gen_regular,
    gen_truncated_normal,
    gen_uniform,
    generate,
    normal_quantile,
)
from gapstat.errors import BandTooWideError
from gapstat.gaps import gaps_oracle
from gapstat.testkit import max_gap_test

from oracles import ks_distance


def test_uniform_deterministic():
    a, b = gen_uniform(1000, 42), gen_uniform(1000, 42)
    assert a.values.tobytes() == b.values.tobytes()
    assert gen_uniform(1000, 43).values.tobytes() != a.values.tobytes()


@pytest.mark.parametrize("seed", range(10))
def test_uniform_mean(seed):
    assert abs(gen_uniform(10_000, seed).values.mean() - 0.5) <= 0.015


def test_uniform_max_gap_within_gumbel_band():
    expected = dist.expected_max_gap(10_001)
    inside = 0
    for seed in range(200):
        g = gaps_oracle(gen_uniform(10_000, seed)).max_gap
        inside += 0.3 * expected <= g <= 3 * expected
    assert inside >= 198


def test_normal_quantile_accuracy():
    p = np.concatenate([
        np.linspace(1e-6, 1 - 1e-6, 20_001),
        10.0 ** -np.linspace(6, 300, 500),
    ])
    ref = special.ndtri(p)
    assert np.max(np.abs(normal_quantile(p) - ref)) <= 1e-9
    assert np.max(np.abs(normal_quantile(1 - p[:20_001]) - special.ndtri(1 - p[:20_001]))) <= 1e-9


def test_truncated_normal_narrow():
    x = gen_truncated_normal(10_000, 0.05, 3).values
    # +-3 sigma holds 99.73% of the mass; +-3.3 sigma holds 99.9%
    inside3 = np.mean((x > 0.35) & (x < 0.65))
    assert abs(inside3 - 0.9973) <= 4 * np.sqrt(0.9973 * 0.0027 / x.size)
    assert np.mean((x > 0.335) & (x < 0.665)) >= 0.999


def test_truncated_normal_matches_its_law():
    sigma = 0.2
    x = gen_truncated_normal(100_000, sigma, 5).values
    law = stats.truncnorm(-0.5 / sigma, 0.5 / sigma, loc=0.5, scale=sigma)
    assert ks_distance(x, law.cdf) <= 0.01


def test_truncated_normal_wide_is_flat():
    # population distance from uniform is ~1e-4 at sigma = 100
    law = stats.truncnorm(-0.005, 0.005, loc=0.5, scale=100)
    grid = np.linspace(0, 1, 1001)
    assert np.max(np.abs(law.cdf(grid) - grid)) <= 1e-3
    x = gen_truncated_normal(100_000, 100.0, 11).values
    assert ks_distance(x, lambda t: t) <= 0.01


def test_truncated_normal_deterministic():
    a = gen_truncated_normal(500, 0.3, 9).values
    assert a.tobytes() == gen_truncated_normal(500, 0.3, 9).values.tobytes()
    assert ((a >= 0) & (a <= 1)).all()


def test_band_zero_width_is_uniform():
    assert gen_band_excluded(5000, 0.0, 0.5, 17).values.tobytes() == gen_uniform(5000, 17).values.tobytes()


def test_band_excluded_one_percent():
    s = gen_band_excluded(10_000, 0.01, 0.5, 1)
    x = s.values
    assert not np.any((x > 0.495) & (x < 0.505))
    assert gaps_oracle(s).max_gap >= 0.01
    assert max_gap_test(s).p_one_sided < 1e-6


@given(
    st.floats(0.0, 0.5),
    st.floats(0.26, 0.74),
    st.integers(0, 2**64 - 1),
)
def test_band_never_intersected(width, center, seed):
    x = gen_band_excluded(300, width, center, seed).values
    lo, hi = center - width / 2, center + width / 2
    assert not np.any((x > lo) & (x < hi))


def test_band_errors():
    with pytest.raises(BandTooWideError):
        gen_band_excluded(10, 1.0, 0.5, 0)
    with pytest.raises(BandTooWideError):
        gen_band_excluded(10, 0.5, 0.1, 0)


def test_regular_k1_is_uniform_stream():
    assert gen_regular(10_000, 1, 77).values.tobytes() == gen_uniform(10_000, 77).values.tobytes()


def test_regular_k1_independent_seeds_indistinguishable():
    a = gen_regular(100_000, 1, 1).values
    b = gen_uniform(100_000, 2).values
    assert stats.ks_2samp(a, b).statistic <= 0.02


def test_regular_k_equals_n():
    n = 1000
    s = gen_regular(n, n, 4)
    counts = np.bincount(np.minimum((s.values * n).astype(int), n - 1), minlength=n)
    assert (counts == 1).all()
    assert gaps_oracle(s).max_gap < 2.0 / n


def test_regular_bins_exact():
    s = gen_regular(10_000, 100, 6)
    counts = np.bincount((s.values * 100).astype(int), minlength=100)
    assert (counts == 100).all()


def test_regular_remainder_round_robin():
    s = gen_regular(10, 4, 0)
    counts = np.bincount((s.values * 4).astype(int), minlength=4)
    assert counts.tolist() == [3, 3, 2, 2]


def test_regular_rejects_bad_k():
    with pytest.raises(ValueError):
        gen_regular(10, 11, 0)


def test_generate_dispatch():
    spec = GeneratorSpec("band_excluded", 100, 5, width=0.1)
    assert generate(spec).values.tobytes() == gen_band_excluded(100, 0.1, 0.5, 5).values.tobytes()
    with pytest.raises(ValueError):
        GeneratorSpec("benford", 10, 0)
