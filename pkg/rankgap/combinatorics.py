"""Exact counting: extended binomial coefficients, partial sums and entropy."""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from numbers import Rational

from .exceptions import InvalidParameterError

_LOGGER: logging.Logger = logging.getLogger(__package__)


def binom(a: int, k: int) -> int:
    """Return C(a, k), taken as 0 outside 0 <= k <= a."""
    if a < 0 or k < 0 or k > a:
        return 0
    return math.comb(a, k)


def _check_counts(n: int, b: int, d: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"container count n must be >= 1, got {n}")
    if b < 0:
        raise InvalidParameterError(f"ball count b must be >= 0, got {b}")
    if d < 0:
        raise InvalidParameterError(f"capacity d must be >= 0, got {d}")


def ext_binom(n: int, b: int, d: int) -> int:
    """Count the ways to put b balls into n containers holding at most d each.

    Inclusion-exclusion over the set of containers forced to overflow:
    sum_i (-1)^i C(n, i) C(b + n - 1 - i(d + 1), n - 1).
    """
    _check_counts(n, b, d)
    if b == 0:
        return 1
    if b > n * d:
        return 0
    total = 0
    for i in range(min(n, b // (d + 1)) + 1):
        term = binom(n, i) * binom(b + n - 1 - i * (d + 1), n - 1)
        total += -term if i % 2 else term
    return total


def ext_binom_row(n: int, d: int) -> list[int]:
    """Return the coefficient row of (1 + x + ... + x^d)^n."""
    _check_counts(n, 0, d)
    row = [1]
    for _ in range(n):
        # Convolution with d + 1 ones is a sliding window sum.
        widened = [0] * (len(row) + d)
        window = 0
        for b in range(len(widened)):
            if b < len(row):
                window += row[b]
            if b - d - 1 >= 0:
                window -= row[b - d - 1]
            widened[b] = window
        row = widened
    return row


def partial_sum_ext_binom(n: int, B: int, d: int) -> int:
    """Return sum_{b=0}^{B} ext_binom(n, b, d)."""
    _check_counts(n, B, d)
    top = min(B, n * d)
    return sum(ext_binom(n, b, d) for b in range(top + 1))


def binary_entropy(q: float) -> float:
    """Binary entropy H(q) in bits; H(0) = H(1) = 0."""
    if q < 0 or q > 1:
        raise InvalidParameterError(f"q must lie in [0, 1], got {q}")
    if q in (0, 1):
        return 0.0
    return -q * math.log2(q) - (1 - q) * math.log2(1 - q)


def entropy_bound(n: int, m: int) -> Fraction:
    """Return 2^(H(m/n) n) exactly, as n^n / (m^m (n - m)^(n - m))."""
    if not 0 < m < n:
        raise InvalidParameterError(f"need 0 < m < n, got m={m}, n={n}")
    return Fraction(n**n, m**m * (n - m) ** (n - m))


def entropy_gap(n: int, m: int) -> Fraction:
    """Return 2^(H(m/n) n) - sum_{b<=m} C(n, b), exactly."""
    return entropy_bound(n, m) - partial_sum_ext_binom(n, m, 1)


def _as_fraction(value: Rational | float | str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError) as err:
        raise InvalidParameterError(f"not a rational number: {value!r}") from err


def ratio_tail(q: Rational | float | str, d: int, n: int) -> Fraction:
    """Fraction of (d+1)^n placements using at most floor(q n d) balls.

    Floats are read through their decimal representation, so 0.4 means 2/5.
    """
    q = _as_fraction(str(q) if isinstance(q, float) else q)
    if q < 0 or q >= Fraction(1, 2):
        raise InvalidParameterError(f"q must lie in [0, 1/2), got {q}")
    if d < 1:
        raise InvalidParameterError(f"d must be >= 1, got {d}")
    _check_counts(n, 0, d)
    top = math.floor(q * n * d)
    row = ext_binom_row(n, d)
    return Fraction(sum(row[: top + 1]), (d + 1) ** n)


def empirical_h(n: int, rho: Rational | float | str, d: int) -> float:
    """Finite-n estimate (1/n) ln ext_binom(n, round(rho n), d)."""
    rho = _as_fraction(str(rho) if isinstance(rho, float) else rho)
    if d < 1:
        raise InvalidParameterError(f"d must be >= 1, got {d}")
    if rho < 0 or rho > d:
        raise InvalidParameterError(f"rho must lie in [0, {d}], got {rho}")
    _check_counts(n, 0, d)
    # round() on a Fraction breaks ties to even
    balls = round(rho * n)
    count = ext_binom(n, balls, d)
    _LOGGER.debug("ext_binom(%s, %s, %s) has %s digits", n, balls, d, len(str(count)))
    return math.log(count) / n
