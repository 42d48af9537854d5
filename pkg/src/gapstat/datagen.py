"""Seeded generators for the four experimental data regimes.

Every generator is a pure function of its arguments: the same parameters
and seed give bit-identical output on any platform, because all randomness
comes from :class:`gapstat.rng.SplitMix64`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BandTooWideError
from .gaps import SampleSet, validate_samples
from .rng import SplitMix64

KINDS = ("uniform", "truncated_normal", "band_excluded", "regular")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int
    sigma: Optional[float] = None
    width: Optional[float] = None
    center: float = 0.5
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")


def generate(spec: GeneratorSpec) -> SampleSet:
    if spec.kind == "uniform":
        return gen_uniform(spec.n, spec.seed)
    if spec.kind == "truncated_normal":
        return gen_truncated_normal(spec.n, spec.sigma, spec.seed)
    if spec.kind == "band_excluded":
        return gen_band_excluded(spec.n, spec.width, spec.center, spec.seed)
    return gen_regular(spec.n, spec.k, spec.seed)


def gen_uniform(n: int, seed: int) -> SampleSet:
    return validate_samples(SplitMix64(seed).random(n))


# -- standard normal quantile (Wichura, AS 241, PPND16) ----------------------

_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def _poly(coef, r):
    out = np.full_like(r, coef[-1])
    for c in coef[-2::-1]:
        out = out * r + c
    return out


def normal_quantile(p) -> np.ndarray:
    """Inverse standard normal CDF for p in (0, 1)."""
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    if central.any():
        qc = q[central]
        r = 0.180625 - qc * qc
        out[central] = qc * _poly(_A, r) / _poly(_B, r)

    tail = ~central
    if tail.any():
        r = np.sqrt(-np.log(np.minimum(p[tail], 1.0 - p[tail])))
        x = np.empty_like(r)
        near = r <= 5.0
        rn = r[near] - 1.6
        x[near] = _poly(_C, rn) / _poly(_D, rn)
        rf = r[~near] - 5.0
        x[~near] = _poly(_E, rf) / _poly(_F, rf)
        out[tail] = np.where(q[tail] < 0.0, -x, x)
    return out


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def gen_truncated_normal(n: int, sigma: float, seed: int) -> SampleSet:
    """Normal(0.5, sigma) conditioned on (0, 1), by inverse-CDF sampling.

    The law is symmetric about 0.5, so a random sign is applied to a
    half-normal draw taken from lower-tail probabilities, where the
    truncation point keeps full relative precision.
    """
    if sigma is None or not sigma > 0.0:
        raise ValueError("sigma must be positive")
    stream = SplitMix64(seed)
    u = stream.random(n)
    sign = np.where(stream.random(n) < 0.5, -1.0, 1.0)
    bound = 0.5 / sigma
    lo = _normal_cdf(-bound)
    q = lo + u * (0.5 - lo)
    # q == 0.5 maps to z = 0; q must stay positive for the quantile
    q = np.maximum(q, np.nextafter(0.0, 1.0))
    z = -normal_quantile(q)
    x = np.clip(0.5 + sign * sigma * z, 0.0, 1.0)
    return validate_samples(x)


def gen_band_excluded(n: int, width: float, center: float = 0.5, seed: int = 0) -> SampleSet:
    """Uniform on (0, 1) minus the open band (center - width/2, center + width/2).

    Draws landing in the band are redrawn from the continuing stream, which
    leaves the output exactly uniform on the complement.
    """
    if not 0.0 <= width < 1.0:
        raise BandTooWideError(f"band width must lie in [0, 1), got {width!r}")
    lo, hi = center - width / 2.0, center + width / 2.0
    if lo < 0.0 or hi > 1.0:
        raise BandTooWideError(f"band ({lo}, {hi}) does not fit inside (0, 1)")
    stream = SplitMix64(seed)
    x = stream.random(n)
    if width > 0.0:
        bad = np.flatnonzero((x > lo) & (x < hi))
        while bad.size:
            x[bad] = stream.random(bad.size)
            bad = bad[(x[bad] > lo) & (x[bad] < hi)]
    return validate_samples(x)


def gen_regular(n: int, k: int, seed: int) -> SampleSet:
    """Stratified sample: n // k uniform draws in each of k equal bins.

    The first ``n % k`` bins get one extra draw.  Output is ordered bin by
    bin; with k = 1 it is bit-identical to :func:`gen_uniform`.
    """
    if k is None or not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k!r}, n={n}")
    per_bin = np.full(k, n // k, dtype=np.int64)
    per_bin[: n % k] += 1
    bins = np.repeat(np.arange(k, dtype=np.float64), per_bin)
    x = (bins + SplitMix64(seed).random(n)) / k
    # rounding can push (i + u) / k onto the next bin edge
    edge = (bins + 1.0) / k
    x = np.where(x >= edge, np.nextafter(edge, 0.0), x)
    return validate_samples(x)
