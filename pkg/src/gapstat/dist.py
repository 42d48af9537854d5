"""Null distributions of the gap statistics and the chi-square survival function.

``N`` throughout is the number of gaps, i.e. one more than the number of
observations.  Every returned probability is clamped to [0, 1].

Two min-gap laws are exposed.  ``min_gap_cdf_paper`` and
``expected_min_gap_paper`` are the published Poisson-tail form and its mean,
kept verbatim for reproduction studies.  They are *not* usable as a test
law: the CDF is about one half at x = 0, and the mean exceeds the expected
max gap.  ``min_gap_cdf_exact`` is the exact law of the smallest of N
uniform spacings and is what the min-gap test uses by default.
"""

from __future__ import annotations

import math

EULER_GAMMA = 0.5772156649015329
EXACT_CUTOFF = 64

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _clamp(p: float) -> float:
    return 0.0 if p < 0.0 else 1.0 if p > 1.0 else p


def _check_n(n: int) -> int:
    if n < 1 or int(n) != n:
        raise ValueError(f"gap count must be a natural number >= 1, got {n!r}")
    return int(n)


# ---------------------------------------------------------------------------
# max gap


def exact_max_gap_cdf(x: float, n: int, cutoff: int | None = EXACT_CUTOFF) -> float:
    """P(max of N uniform spacings <= x), by inclusion-exclusion.

    The alternating sum cancels catastrophically in floating point, so it
    is accumulated without error: ``x`` is an exact dyadic rational m/d and
    each term is an integer multiple of 1/d**(N-1).  The single final
    division is correctly rounded.  Pass ``cutoff=None`` to lift the size
    guard (cost grows roughly as N**2 bits).
    """
    from .errors import CutoffExceededError

    n = _check_n(n)
    if cutoff is not None and n > cutoff:
        raise CutoffExceededError(n, cutoff)
    if x >= 1.0:
        return 1.0
    if x * n <= 1.0:
        # N gaps summing to 1 cannot all be shorter than 1/N
        return 0.0
    num, den = float(x).as_integer_ratio()
    total = 0
    for nu in range(n + 1):
        base = den - nu * num
        if base <= 0:
            break
        term = math.comb(n, nu) * base ** (n - 1)
        total += -term if nu & 1 else term
    return _clamp(total / den ** (n - 1))


def asymptotic_max_gap_cdf(x: float, n: int) -> float:
    n = _check_n(n)
    return _clamp(math.exp(-math.exp(math.log(n) - n * x)))


def expected_max_gap(n: int) -> float:
    """Large-N mean of the max gap, (gamma + ln N) / N.

    Asymptotic only: at N = 1 it returns gamma although the max gap is
    identically 1.
    """
    n = _check_n(n)
    return (EULER_GAMMA + math.log(n)) / n


def max_gap_p_value(s: float, n: int) -> float:
    """Upper-tail p-value of an observed max gap under the Gumbel law."""
    n = _check_n(n)
    return _clamp(-math.expm1(-math.exp(math.log(n) - n * s)))


# ---------------------------------------------------------------------------
# min gap


def min_gap_cdf_paper(x: float, n: int) -> float:
    """Published Poisson-tail form: exp(-lam) * sum_{v<N} lam**v / v!.

    With lam = N exp(-N x).  The finite Poisson sum is Q(N, lam).
    """
    n = _check_n(n)
    lam = math.exp(math.log(n) - n * x)
    return regularized_gamma_q(n, lam)


def expected_min_gap_paper(n: int) -> float:
    """Published mean, (gamma + ln N + H_{N-1}) / N, evaluated as printed."""
    n = _check_n(n)
    harmonic = math.fsum(1.0 / i for i in range(1, n))
    return (EULER_GAMMA + math.log(n) + harmonic) / n


def min_gap_cdf_exact(x: float, n: int) -> float:
    """P(min of N uniform spacings <= x) = 1 - (1 - N x)_+^(N-1)."""
    n = _check_n(n)
    if x <= 0.0:
        return 0.0
    if x * n >= 1.0:
        return 1.0
    return _clamp(-math.expm1((n - 1) * math.log1p(-n * x)))


def expected_min_gap_exact(n: int) -> float:
    """Exact mean of the min of N uniform spacings, 1 / N**2."""
    n = _check_n(n)
    return 1.0 / (n * n)


# ---------------------------------------------------------------------------
# incomplete gamma


def _log1pmx(t: float) -> float:
    """log(1 + t) - t without cancellation near t = 0."""
    if abs(t) > 0.5:
        return math.log1p(t) - t
    # -t^2/2 + t^3/3 - ...
    total = 0.0
    power = t
    k = 2
    while True:
        power *= -t
        term = power / k
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
        k += 1


def _stirling_error(a: float) -> float:
    """lgamma(a) - ((a - 1/2) ln a - a + ln sqrt(2 pi))."""
    if a < 15.0:
        return math.lgamma(a) - ((a - 0.5) * math.log(a) - a + _LN_SQRT_2PI)
    a2 = a * a
    return (1.0 / 12 - (1.0 / 360 - (1.0 / 1260 - (1.0 / 1680 - 1.0 / (1188 * a2)) / a2) / a2) / a2) / a


def _gamma_prefactor(a: float, x: float) -> float:
    """x**a e**-x / Gamma(a), stable for large a near x = a."""
    t = (x - a) / a
    if t < -0.5:
        log_ratio = math.log(x) - math.log(a) - t
    else:
        log_ratio = _log1pmx(t)
    return math.exp(a * log_ratio - _stirling_error(a)) * math.sqrt(a / (2.0 * math.pi))


_EPS = 1e-16
_TINY = 1e-300


def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = Gamma(a, x) / Gamma(a).

    Power series for P when x < a + 1, modified Lentz continued fraction
    for Q otherwise.
    """
    if a <= 0.0:
        raise ValueError("a must be positive")
    if x < 0.0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    pre = _gamma_prefactor(a, x)
    if pre == 0.0:
        return 1.0 if x < a else 0.0
    max_iter = 1000 + int(20 * math.sqrt(a))

    if x < a + 1.0:
        ap = a
        term = total = 1.0 / a
        for _ in range(max_iter):
            ap += 1.0
            term *= x / ap
            total += term
            if term < total * _EPS:
                break
        else:
            raise ArithmeticError(f"series for P({a}, {x}) did not converge")
        return _clamp(1.0 - pre * total)

    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError(f"continued fraction for Q({a}, {x}) did not converge")
    return _clamp(pre * h)


def chi_square_sf(stat: float, df: int) -> float:
    """Survival function of the chi-square law with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError("df must be at least 1")
    if stat < 0.0:
        raise ValueError("statistic must be non-negative")
    return regularized_gamma_q(df / 2.0, stat / 2.0)
