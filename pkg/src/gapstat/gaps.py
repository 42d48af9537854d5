"""Max-gap and min-gap extraction on the unit interval.

Every operation works on the *augmented* multiset {0, 1} ∪ values, so a
sample of ``count`` observations induces ``count + 1`` gaps.  The endpoints
are added here and never stored in :class:`SampleSet`.

Three routes are provided:

* :func:`gaps_oracle` sorts and scans; it is the reference.
* :func:`max_gap_gonzalez` finds the max gap in linear time by pigeonhole
  binning (no sort).  Its bin state, :class:`BucketSummary`, merges
  associatively so chunks can be summarized independently and reduced.
* :func:`min_gap_rabin` finds the min gap in expected linear time with a
  randomized incremental grid sieve.

All three agree bit-for-bit: each gap is computed as ``right - left`` on
the same pair of doubles, and ties resolve to the smallest left endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import EmptySampleError, GridMismatchError, OutOfRangeError

_BLOCK = 1 << 14  # values per block in the bucket passes

Pair = Tuple[float, float]


@dataclass(frozen=True)
class SampleSet:
    """Validated observations in [0, 1], kept in input order."""

    values: np.ndarray

    @property
    def count(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_gaps(self) -> int:
        return self.count + 1

    def __len__(self):
        return self.count


def validate_samples(raw: Sequence[float]) -> SampleSet:
    values = np.array(raw, dtype=np.float64).ravel()
    if values.size == 0:
        raise EmptySampleError()
    # NaN fails both comparisons, so it is reported as out of range
    bad = ~((values >= 0.0) & (values <= 1.0))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise OutOfRangeError(i, float(values[i]))
    values.setflags(write=False)
    return SampleSet(values)


@dataclass(frozen=True)
class GapResult:
    """One side (max or min) of a gap extraction."""

    n_gaps: int
    gap: float
    pair: Pair


@dataclass(frozen=True)
class GapSummary:
    n_gaps: int
    max_gap: float
    min_gap: float
    max_pair: Pair
    min_pair: Pair


def _augmented(s: SampleSet) -> np.ndarray:
    return np.concatenate(([0.0], s.values, [1.0]))


def gaps_oracle(s: SampleSet) -> GapSummary:
    """Sort-based reference for both extremes."""
    pts = np.sort(_augmented(s))
    d = pts[1:] - pts[:-1]
    i_max = int(np.argmax(d))
    i_min = int(np.argmin(d))
    return GapSummary(
        n_gaps=s.n_gaps,
        max_gap=float(d[i_max]),
        min_gap=float(d[i_min]),
        max_pair=(float(pts[i_max]), float(pts[i_max + 1])),
        min_pair=(float(pts[i_min]), float(pts[i_min + 1])),
    )


# ---------------------------------------------------------------------------
# Gonzalez pigeonhole binning


@dataclass(frozen=True)
class BucketSummary:
    """Per-bucket extrema over an equal-width grid on [0, 1].

    Unoccupied buckets hold ``lo = +inf`` and ``hi = -inf`` so that merging
    is a plain elementwise min/max.  ``count`` is carried so buckets holding
    exactly two points expose their inner gap as ``hi - lo``.
    """

    bucket_count: int
    lo: np.ndarray
    hi: np.ndarray
    count: np.ndarray

    @property
    def occupied(self) -> np.ndarray:
        return self.count > 0

    @property
    def global_min(self) -> float:
        return float(self.lo.min())

    @property
    def global_max(self) -> float:
        return float(self.hi.max())

    @property
    def total(self) -> int:
        return int(self.count.sum())


def bucket_index(values: np.ndarray, bucket_count: int) -> np.ndarray:
    """Bucket of each value; 1.0 is clamped into the last bucket."""
    idx = (np.asarray(values, dtype=np.float64) * bucket_count).astype(np.intp)
    return np.minimum(idx, bucket_count - 1)


def empty_bucket_summary(bucket_count: int) -> BucketSummary:
    return BucketSummary(
        bucket_count,
        np.full(bucket_count, np.inf),
        np.full(bucket_count, -np.inf),
        np.zeros(bucket_count, dtype=np.int64),
    )


def bucket_summary(values, bucket_count: int) -> BucketSummary:
    """Summarize a chunk of values over a grid of ``bucket_count`` buckets."""
    if bucket_count < 1:
        raise ValueError("bucket_count must be at least 1")
    v = np.asarray(values, dtype=np.float64).ravel()
    out = empty_bucket_summary(bucket_count)
    _accumulate(out, v)
    return out


def _accumulate(summary: BucketSummary, v: np.ndarray) -> None:
    """Fold ``v`` into ``summary`` in place.

    Works through ``v`` in fixed-size blocks so temporaries are reused
    rather than freshly allocated at full length; at large sizes the page
    faults of fresh allocations otherwise cost more than the arithmetic.
    """
    b = summary.bucket_count
    m = min(v.size, _BLOCK)
    scaled = np.empty(m)
    idx = np.empty(m, dtype=np.intp)
    for start in range(0, v.size, _BLOCK):
        part = v[start:start + _BLOCK]
        k = part.size
        np.multiply(part, b, out=scaled[:k])
        np.copyto(idx[:k], scaled[:k], casting="unsafe")
        np.minimum(idx[:k], b - 1, out=idx[:k])
        np.minimum.at(summary.lo, idx[:k], part)
        np.maximum.at(summary.hi, idx[:k], part)
        np.add.at(summary.count, idx[:k], 1)


def endpoint_summary(bucket_count: int) -> BucketSummary:
    """Summary holding just the augmentation endpoints 0 and 1."""
    return bucket_summary([0.0, 1.0], bucket_count)


def merge_bucket_summaries(a: BucketSummary, b: BucketSummary) -> BucketSummary:
    if a.bucket_count != b.bucket_count:
        raise GridMismatchError(a.bucket_count, b.bucket_count)
    return BucketSummary(
        a.bucket_count,
        np.minimum(a.lo, b.lo),
        np.maximum(a.hi, b.hi),
        a.count + b.count,
    )


def _pick(gaps, lefts, rights, largest: bool) -> Tuple[float, Pair]:
    """Extreme gap; ties go to the smallest left, then smallest right."""
    target = gaps.max() if largest else gaps.min()
    hit = np.flatnonzero(gaps == target)
    if hit.size > 1:
        hit = hit[np.lexsort((rights[hit], lefts[hit]))]
    i = hit[0]
    return float(gaps[i]), (float(lefts[i]), float(rights[i]))


def scan_max_gap(summary: BucketSummary, values: Optional[np.ndarray] = None) -> GapResult:
    """Scan phase: largest gap of the points summarized (endpoints included).

    Candidates are gaps between consecutive occupied buckets plus the inner
    gap of any bucket holding exactly two points.  A bucket with three or
    more points only matters if its spread reaches the best candidate,
    which the pigeonhole bound rules out outside of rounding at bucket
    edges; ``values`` is used to resolve that case exactly.

    The grid is walked block by block.  Lefts increase along the walk, so
    keeping only strict improvements keeps the smallest-left winner.
    """
    total = 0
    occupied = 0
    prev_hi = first_lo = None
    cross = (-1.0, 0.0, 0.0)
    two = (-1.0, 0.0, 0.0)
    crowded = -np.inf
    for start in range(0, summary.bucket_count, _BLOCK):
        stop = start + _BLOCK
        cnt = summary.count[start:stop]
        occ = np.flatnonzero(cnt)
        if not occ.size:
            continue
        lo, hi, c = summary.lo[start:stop][occ], summary.hi[start:stop][occ], cnt[occ]
        total += int(c.sum())
        occupied += occ.size
        if prev_hi is None:
            first_lo = lo[0]
        elif lo[0] - prev_hi > cross[0]:
            cross = (lo[0] - prev_hi, prev_hi, lo[0])
        if occ.size > 1:
            d = lo[1:] - hi[:-1]
            i = int(np.argmax(d))
            if d[i] > cross[0]:
                cross = (d[i], hi[i], lo[i + 1])
        prev_hi = hi[-1]
        spread = hi - lo
        pair_spread = np.where(c == 2, spread, -1.0)
        j = int(np.argmax(pair_spread))
        if pair_spread[j] > two[0]:
            two = (pair_spread[j], lo[j], hi[j])
        if c.max() >= 3:
            crowded = max(crowded, float(spread[c >= 3].max()))

    n_gaps = total - 1
    if occupied == 1:
        # a single occupied bucket: all points coincide
        return GapResult(n_gaps, 0.0, (float(first_lo), float(first_lo)))

    cands = [cross] + ([two] if two[0] >= 0.0 else [])
    best = max(g for g, _, _ in cands)
    if crowded >= best:
        if values is None:
            raise ValueError("crowded buckets need the raw values to resolve")
        cands.extend(_crowded_gaps(summary, values, best))

    gaps, lefts, rights = (np.asarray(col, dtype=np.float64) for col in zip(*cands))
    gap, pair = _pick(gaps, lefts, rights, largest=True)
    return GapResult(n_gaps, gap, pair)


def _crowded_gaps(summary: BucketSummary, values: np.ndarray, best: float):
    """Exact inner gaps of buckets with 3+ points whose spread reaches ``best``."""
    heavy = np.flatnonzero((summary.count >= 3) & (summary.hi - summary.lo >= best))
    pts = np.concatenate(([0.0], np.asarray(values, dtype=np.float64), [1.0]))
    idx = bucket_index(pts, summary.bucket_count)
    flag = np.zeros(summary.bucket_count, dtype=bool)
    flag[heavy] = True
    sel = flag[idx]
    p, b = pts[sel], idx[sel]
    order = np.lexsort((p, b))
    p, b = p[order], b[order]
    same = b[1:] == b[:-1]
    return zip((p[1:] - p[:-1])[same], p[:-1][same], p[1:][same])


def max_gap_gonzalez(s: SampleSet) -> GapResult:
    """Linear-time max gap over M = count + 2 points in M - 1 buckets."""
    summary = bucket_summary(s.values, s.count + 1)
    # the endpoints 0 and 1 go straight into the first and last buckets
    summary.lo[0] = 0.0
    summary.hi[0] = max(summary.hi[0], 0.0)
    summary.lo[-1] = min(summary.lo[-1], 1.0)
    summary.hi[-1] = 1.0
    summary.count[0] += 1
    summary.count[-1] += 1
    return scan_max_gap(summary, s.values)


def parallel_max_gap(s: SampleSet, chunks: int) -> GapResult:
    """Max gap via independent chunk summaries reduced with the merge."""
    buckets = s.count + 1
    parts = np.array_split(s.values, max(1, chunks))
    total = endpoint_summary(buckets)
    for part in parts:
        total = merge_bucket_summaries(total, bucket_summary(part, buckets))
    return scan_max_gap(total, s.values)


# ---------------------------------------------------------------------------
# Rabin-style randomized closest pair in one dimension

_TINY_CELL = 1e-290


def _cell(x: float, delta: float) -> int:
    if delta >= _TINY_CELL:
        return math.floor(x / delta)
    # x / delta would overflow; exact rational floor instead
    return int(Fraction(x) // Fraction(delta))


def _build_grid(points, delta):
    grid = {}
    for p in points:
        grid.setdefault(_cell(p, delta), []).append(p)
    return grid


def min_gap_rabin(s: SampleSet, rng: Optional[np.random.Generator] = None) -> GapResult:
    """Exact min gap in expected linear time.

    Points are inserted in random order into a grid of cell width equal to
    the best distance so far.  A closer pair can only sit in the same or a
    neighbouring cell; probing two cells each way absorbs rounding in the
    cell index.  On improvement the grid is rebuilt at the new width.
    ``rng`` only drives the insertion order, never the answer.
    """
    pts = _augmented(s).tolist()
    n_gaps = s.n_gaps

    seen = set()
    dup = None
    for p in pts:
        if p in seen and (dup is None or p < dup):
            dup = p
        seen.add(p)
    if dup is not None:
        return GapResult(n_gaps, 0.0, (dup, dup))

    if rng is None:
        rng = np.random.default_rng(0x5EED)
    order = [pts[i] for i in rng.permutation(len(pts))]

    a, b = order[0], order[1]
    delta = b - a if b > a else a - b
    grid = _build_grid(order[:2], delta)
    get = grid.get
    for i in range(2, len(order)):
        x = order[i]
        c = math.floor(x / delta) if delta >= _TINY_CELL else _cell(x, delta)
        best = delta
        for cc in (c - 2, c - 1, c, c + 1, c + 2):
            members = get(cc)
            if members:
                for y in members:
                    d = x - y if x > y else y - x
                    if d < best:
                        best = d
        if best < delta:
            delta = best
            grid = _build_grid(order[: i + 1], delta)
            get = grid.get
        else:
            members = get(c)
            if members:
                members.append(x)
            else:
                grid[c] = [x]

    # witness: smallest (left, right) pair realizing delta
    pair = None
    for cell, members in grid.items():
        for x in members:
            for cc in range(cell - 2, cell + 3):
                for y in grid.get(cc, ()):
                    if y > x and y - x == delta and (pair is None or (x, y) < pair):
                        pair = (x, y)
    return GapResult(n_gaps, delta, pair)


def gap_summary(s: SampleSet, rng: Optional[np.random.Generator] = None) -> GapSummary:
    """Both extremes via the fast routes."""
    hi = max_gap_gonzalez(s)
    lo = min_gap_rabin(s, rng)
    return GapSummary(s.n_gaps, hi.gap, lo.gap, hi.pair, lo.pair)
