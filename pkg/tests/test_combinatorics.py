"""Test exact counting."""

import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest

from rankgap.combinatorics import (
    binary_entropy,
    binom,
    empirical_h,
    entropy_bound,
    entropy_gap,
    ext_binom,
    ext_binom_row,
    partial_sum_ext_binom,
    ratio_tail,
)
from rankgap.exceptions import InvalidParameterError


def _enumerate(n, d):
    """Brute-force placement counts by total ball number."""
    return Counter(sum(t) for t in itertools.product(range(d + 1), repeat=n))


@pytest.mark.parametrize(
    "n,b,d,expected", [(3, 3, 2, 7), (5, 0, 3, 1), (4, 2, 1, 6), (2, 5, 2, 0)]
)
def test_ext_binom_examples(n, b, d, expected):
    """Known small counts."""
    assert ext_binom(n, b, d) == expected


def test_ext_binom_matches_enumeration():
    """Inclusion-exclusion agrees with enumeration for n <= 6, d <= 4."""
    for n in range(1, 7):
        for d in range(0, 5):
            counts = _enumerate(n, d)
            for b in range(n * d + 1):
                assert ext_binom(n, b, d) == counts[b], (n, b, d)


def test_ext_binom_row_sum_and_symmetry():
    """Rows sum to (d+1)^n and are palindromic."""
    for n in range(1, 13):
        for d in range(0, 6):
            row = [ext_binom(n, b, d) for b in range(n * d + 1)]
            assert sum(row) == (d + 1) ** n
            assert row == row[::-1]


def test_ext_binom_row_matches_pointwise():
    """The convolution row equals the inclusion-exclusion values."""
    for n in range(1, 8):
        for d in range(0, 5):
            assert ext_binom_row(n, d) == [ext_binom(n, b, d) for b in range(n * d + 1)]


def test_d_one_is_binomial():
    """Capacity one reduces to ordinary binomials."""
    for n in range(1, 31):
        for b in range(n + 1):
            assert ext_binom(n, b, 1) == math.comb(n, b)


def test_binom_outside_range_is_zero():
    """C(a, k) vanishes outside 0 <= k <= a."""
    assert binom(-1, 0) == 0
    assert binom(3, -1) == 0
    assert binom(3, 4) == 0
    assert binom(4, 2) == 6


def test_ext_binom_rejects_bad_arguments():
    """n = 0 and negative counts are rejected."""
    with pytest.raises(InvalidParameterError):
        ext_binom(0, 1, 1)
    with pytest.raises(InvalidParameterError):
        ext_binom(2, -1, 1)
    with pytest.raises(ValueError):
        ext_binom(2, 1, -1)


@pytest.mark.parametrize("n,B,d,expected", [(2, 4, 2, 9), (2, 1, 1, 3), (1, 0, 5, 1)])
def test_partial_sum(n, B, d, expected):
    """Partial sums of a row."""
    assert partial_sum_ext_binom(n, B, d) == expected


def test_partial_sum_past_the_row():
    """Summing beyond n*d gives the full row sum."""
    assert partial_sum_ext_binom(3, 100, 2) == 27


def test_binary_entropy():
    """Maximum, a known value, symmetry and the boundary convention."""
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.25) == pytest.approx(0.811278, abs=1e-6)
    assert binary_entropy(0.75) == pytest.approx(binary_entropy(0.25))
    assert binary_entropy(0) == 0.0
    assert binary_entropy(1) == 0.0
    with pytest.raises(InvalidParameterError):
        binary_entropy(1.5)


def test_entropy_bound_is_exact():
    """2^(H(1/2) 2) = 4 and 2^(H(1/4) 4) = 256/27."""
    assert entropy_bound(2, 1) == 4
    assert entropy_bound(4, 1) == Fraction(256, 27)
    assert entropy_bound(4, 1) == pytest.approx(2 ** (binary_entropy(0.25) * 4))


def test_entropy_inequality():
    """sum_{b<=m} C(n,b) <= 2^(H(m/n) n) for m < n/2, n <= 60."""
    for n in range(2, 61):
        for m in range(1, (n + 1) // 2):
            if 2 * m >= n:
                continue
            assert entropy_gap(n, m) >= 0, (n, m)


def test_entropy_bound_rejects_degenerate_m():
    """m must lie strictly between 0 and n."""
    with pytest.raises(InvalidParameterError):
        entropy_bound(5, 0)
    with pytest.raises(InvalidParameterError):
        entropy_bound(5, 5)


def test_ratio_tail_examples():
    """Exact tail ratios, with 0.4 read as 2/5."""
    assert ratio_tail(0, 2, 3) == Fraction(1, 27)
    assert ratio_tail(0.4, 1, 5) == Fraction(1, 2)
    assert ratio_tail(Fraction(2, 5), 1, 5) == Fraction(16, 32)
    assert ratio_tail("2/5", 1, 400) < ratio_tail("2/5", 1, 100)


@pytest.mark.parametrize("q", [Fraction(1, 4), Fraction(2, 5)])
@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("big_n", [25, 50, 100])
def test_ratio_tail_decays(q, d, big_n):
    """Quadrupling n strictly shrinks the tail."""
    assert ratio_tail(q, d, 4 * big_n) < ratio_tail(q, d, big_n)


def test_ratio_tail_small_at_400():
    """The d=1 tail at n=400 is already below 1/100."""
    assert ratio_tail(Fraction(2, 5), 1, 400) < Fraction(1, 100)


def test_ratio_tail_rejects_half():
    """q >= 1/2 is outside the decay regime."""
    with pytest.raises(InvalidParameterError):
        ratio_tail(Fraction(1, 2), 1, 10)
    with pytest.raises(InvalidParameterError):
        ratio_tail(0.25, 0, 10)


def test_empirical_h():
    """Finite-n estimates stay below ln(d+1) and approach it at rho = d/2."""
    assert empirical_h(100, 1, 2) < math.log(3)
    assert abs(empirical_h(200, 1, 2) - math.log(3)) < 0.05
    assert empirical_h(50, 0, 3) == 0.0
    with pytest.raises(InvalidParameterError):
        empirical_h(10, 4, 3)
