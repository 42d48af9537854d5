import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gapstat.errors import EmptySampleError, GridMismatchError, OutOfRangeError
from gapstat.gaps import (
    bucket_index,
    bucket_summary,
    empty_bucket_summary,
    endpoint_summary,
    gap_summary,
    gaps_oracle,
    max_gap_gonzalez,
    merge_bucket_summaries,
    min_gap_rabin,
    parallel_max_gap,
    scan_max_gap,
    validate_samples,
)

from oracles import brute_min_gap

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
# coarse grids force duplicates, ties and bucket-edge values
grid_value = st.integers(0, 16).map(lambda i: i / 16)
sample_lists = st.one_of(
    st.lists(unit, min_size=1, max_size=60),
    st.lists(grid_value, min_size=1, max_size=40),
    st.lists(st.one_of(unit, grid_value, st.sampled_from([0.0, 1.0, 0.5])), min_size=1, max_size=40),
)


def test_validate_passes_values_through():
    s = validate_samples([0.2, 0.5, 0.9])
    assert s.count == 3
    assert s.values.tolist() == [0.2, 0.5, 0.9]


def test_validate_keeps_order_and_duplicates():
    s = validate_samples([0.9, 0.1, 0.1])
    assert s.values.tolist() == [0.9, 0.1, 0.1]


def test_validate_out_of_range():
    with pytest.raises(OutOfRangeError) as err:
        validate_samples([0.2, 1.5])
    assert (err.value.index, err.value.value) == (1, 1.5)


@pytest.mark.parametrize("bad", [-1e-300, float("nan"), float("inf")])
def test_validate_rejects_non_unit(bad):
    with pytest.raises(OutOfRangeError):
        validate_samples([0.5, bad])


def test_validate_empty():
    with pytest.raises(EmptySampleError):
        validate_samples([])


def test_oracle_hand_example():
    g = gaps_oracle(validate_samples([0.2, 0.5, 0.9]))
    assert g.n_gaps == 4
    assert g.max_gap == 0.9 - 0.5 and g.max_pair == (0.5, 0.9)
    assert g.min_gap == 1.0 - 0.9 and g.min_pair == (0.9, 1.0)


def test_oracle_single_point():
    g = gaps_oracle(validate_samples([0.5]))
    assert (g.max_gap, g.min_gap, g.n_gaps) == (0.5, 0.5, 2)


def test_oracle_duplicates():
    g = gaps_oracle(validate_samples([0.3, 0.3]))
    assert g.min_gap == 0.0 and g.n_gaps == 3


def test_gonzalez_examples():
    assert max_gap_gonzalez(validate_samples([0.2, 0.5, 0.9])).gap == 0.9 - 0.5
    r = max_gap_gonzalez(validate_samples([0.25, 0.25, 0.25]))
    assert r.gap == 0.75 and r.pair == (0.25, 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_gonzalez_matches_oracle_large(seed):
    s = validate_samples(np.random.default_rng(seed).random(10_000))
    o, g = gaps_oracle(s), max_gap_gonzalez(s)
    assert (g.gap, g.pair) == (o.max_gap, o.max_pair)


def test_rabin_examples():
    assert min_gap_rabin(validate_samples([0.2, 0.5, 0.9])).gap == 1.0 - 0.9
    r = min_gap_rabin(validate_samples([0.4, 0.4, 0.8]))
    assert r.gap == 0.0 and r.pair == (0.4, 0.4)


def test_rabin_endpoint_duplicate():
    r = min_gap_rabin(validate_samples([1.0, 0.3]))
    assert r.gap == 0.0 and r.pair == (1.0, 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_rabin_matches_oracle_large(seed):
    s = validate_samples(np.random.default_rng(100 + seed).random(10_000))
    o, r = gaps_oracle(s), min_gap_rabin(s, np.random.default_rng(seed))
    assert (r.gap, r.pair) == (o.min_gap, o.min_pair)


def test_rabin_tiny_gaps():
    # gaps near the subnormal range take the exact-rational cell path
    s = validate_samples([5e-324, 1e-320, 0.5])
    assert min_gap_rabin(s).gap == gaps_oracle(s).min_gap == 5e-324


@given(sample_lists)
def test_fast_routes_equal_oracle(values):
    s = validate_samples(values)
    o = gaps_oracle(s)
    g = max_gap_gonzalez(s)
    r = min_gap_rabin(s)
    assert (g.gap, g.pair) == (o.max_gap, o.max_pair)
    assert (r.gap, r.pair) == (o.min_gap, o.min_pair)
    assert g.n_gaps == r.n_gaps == o.n_gaps == len(values) + 1


@given(st.lists(unit, min_size=1, max_size=25))
def test_oracle_min_is_brute_force(values):
    assert gaps_oracle(validate_samples(values)).min_gap == brute_min_gap(values)


@given(sample_lists, st.integers(0, 2**32 - 1))
def test_rabin_result_independent_of_permutation_seed(values, seed):
    s = validate_samples(values)
    a = min_gap_rabin(s, np.random.default_rng(seed))
    b = min_gap_rabin(s, np.random.default_rng(seed + 1))
    assert a == b


@given(sample_lists)
def test_gap_summary_invariants(values):
    s = validate_samples(values)
    g = gap_summary(s)
    n = g.n_gaps
    assert 0.0 <= g.min_gap <= g.max_gap <= 1.0
    assert n * g.min_gap <= 1.0 + 1e-12
    assert n * g.max_gap >= 1.0 - 1e-12
    pts = np.sort(np.concatenate(([0.0, 1.0], s.values)))
    assert np.diff(pts).size == n
    assert abs(np.diff(pts).sum() - 1.0) < 1e-12


@given(sample_lists)
def test_bucket_summary_invariants(values):
    v = np.asarray(values)
    b = bucket_summary(v, len(values) + 1)
    occ = np.flatnonzero(b.occupied)
    assert (b.lo[occ] <= b.hi[occ]).all()
    assert (bucket_index(b.lo[occ], b.bucket_count) == occ).all()
    assert (bucket_index(b.hi[occ], b.bucket_count) == occ).all()
    assert b.global_min == v.min() and b.global_max == v.max()
    assert b.total == len(values)


def _same(a, b):
    return (
        a.bucket_count == b.bucket_count
        and np.array_equal(a.lo, b.lo)
        and np.array_equal(a.hi, b.hi)
        and np.array_equal(a.count, b.count)
    )


@given(sample_lists, st.data())
def test_merge_is_associative_commutative_with_identity(values, data):
    buckets = len(values) + 1
    labels = data.draw(st.lists(st.integers(0, 2), min_size=len(values), max_size=len(values)))
    parts = [np.asarray([v for v, l in zip(values, labels) if l == k]) for k in range(3)]
    a, b, c = (bucket_summary(p, buckets) for p in parts)
    e = empty_bucket_summary(buckets)
    assert _same(merge_bucket_summaries(a, e), a)
    assert _same(merge_bucket_summaries(a, b), merge_bucket_summaries(b, a))
    left = merge_bucket_summaries(merge_bucket_summaries(a, b), c)
    right = merge_bucket_summaries(a, merge_bucket_summaries(b, c))
    assert _same(left, right)
    whole = bucket_summary(np.asarray(values), buckets)
    assert _same(left, whole)
    s = validate_samples(values)
    assert scan_max_gap(merge_bucket_summaries(left, endpoint_summary(buckets)), s.values) == max_gap_gonzalez(s)


def test_merge_split_example():
    s = validate_samples([0.2, 0.5, 0.9])
    merged = merge_bucket_summaries(bucket_summary([0.9], 4), bucket_summary([0.5, 0.2], 4))
    assert scan_max_gap(merge_bucket_summaries(merged, endpoint_summary(4)), s.values).gap == 0.9 - 0.5


def test_merge_grid_mismatch():
    with pytest.raises(GridMismatchError):
        merge_bucket_summaries(empty_bucket_summary(3), empty_bucket_summary(4))


def test_eight_way_partition_matches_oracle():
    rng = np.random.default_rng(8)
    s = validate_samples(rng.random(10_000))
    labels = rng.integers(0, 8, s.count)
    buckets = s.count + 1
    total = endpoint_summary(buckets)
    for k in range(8):
        total = merge_bucket_summaries(total, bucket_summary(s.values[labels == k], buckets))
    assert scan_max_gap(total, s.values).gap == gaps_oracle(s).max_gap
    assert parallel_max_gap(s, 8) == max_gap_gonzalez(s)


def test_gonzalez_runtime_is_linear():
    rng = np.random.default_rng(0)
    sizes = [100_000, 200_000, 400_000, 800_000]
    samples = [validate_samples(rng.random(n)) for n in sizes]
    max_gap_gonzalez(samples[-1])  # warm up
    # sizes interleaved per round so load spikes hit all of them alike
    times = [[] for _ in sizes]
    for _ in range(15):
        for i, s in enumerate(samples):
            t = time.perf_counter()
            max_gap_gonzalez(s)
            times[i].append(time.perf_counter() - t)
    medians = [float(np.median(sorted(ts)[:8])) for ts in times]
    ratios = [b / a for a, b in zip(medians, medians[1:])]
    assert all(1.6 <= r <= 2.6 for r in ratios), ratios
