"""Test the rank bounds and tables."""

from fractions import Fraction

import pytest

from rankgap.algebra import nilradical_power_dim
from rankgap.bounds import (
    SOURCE_ALDER_STRASSEN,
    SOURCE_ALDER_STRASSEN_INDUCTION,
    SOURCE_BLASER,
    SOURCE_BLASER_INDUCTION,
    SOURCE_CONCISENESS,
    TABLE1_D,
    TABLE2_N,
    BoundReport,
    algebra_report,
    alder_strassen,
    blaser_bound,
    blaser_generic,
    border_rank_algebra,
    certify_border_rank,
    chen_bound,
    cube_rank_argument,
    induction_combiner,
    known_algebra_rank,
    known_exact_rank,
    lehmkuhl_lickteig_upper,
    rank_upper,
    ratio_report,
    table1,
    table2,
    wstate_bound,
    wstate_rank_upper,
    wstate_report,
)
from rankgap.exceptions import BudgetExceededError, InvalidParameterError

from .const import CONCISE_CASES


def _brute_force_blaser(d, n):
    """Scan m using nilradical dimensions directly."""
    dim = d**n
    return max(
        blaser_generic(
            dim, nilradical_power_dim(d, n, 2 * m - 1), nilradical_power_dim(d, n, m)
        )
        for m in range(1, n * (d - 1) + 2)
    )


def test_blaser_generic_examples():
    """The A_(2,2) example and two formula checks."""
    assert blaser_generic(4, 3, 3) == 7
    assert blaser_generic(27, 0, 0) == 27
    assert blaser_generic(9, 3, 5) == 16
    with pytest.raises(InvalidParameterError):
        blaser_generic(4, 3, 2)


def test_blaser_bound_examples():
    """Published values and the smallest maximizer."""
    assert blaser_bound(2, 2) == (7, 1)
    assert blaser_bound(4, 3).value == 142
    assert blaser_bound(6, 6).value == 121971
    with pytest.raises(InvalidParameterError):
        blaser_bound(1, 3)


def test_blaser_bound_matches_brute_force():
    """Prefix sums and nilradical dimensions agree on the maximum."""
    for d in range(2, 6):
        for n in range(1, 6):
            assert blaser_bound(d, n).value == _brute_force_blaser(d, n), (d, n)


def test_blaser_bound_asymptotic_sanity():
    """(3 * 2^n - value) / 2^n shrinks as n doubles."""
    gaps = [
        Fraction(3 * 2**n - blaser_bound(2, n).value, 2**n) for n in (10, 20, 40, 80)
    ]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_alder_strassen():
    """2 dim A - t with argument checks."""
    assert alder_strassen(2, 1) == 3
    assert alder_strassen(8, 1) == 15
    assert alder_strassen(5, 1) == 9
    with pytest.raises(InvalidParameterError):
        alder_strassen(2, 5)
    with pytest.raises(InvalidParameterError):
        alder_strassen(2, 0)


def test_border_rank_algebra():
    """d^n, optionally certified by exact flattening ranks."""
    assert border_rank_algebra(2, 3, certify=True) == 8
    assert border_rank_algebra(5, 1) == 5
    assert border_rank_algebra(3, 2, certify=True) == 9


@pytest.mark.parametrize("d,n", CONCISE_CASES)
def test_certify_border_rank(d, n):
    """All three flattening ranks equal d^n."""
    assert certify_border_rank(d, n) == (d**n,) * 3


def test_certify_border_rank_budget(tight_budgets):
    """The rank-check budget is enforced."""
    with pytest.raises(BudgetExceededError):
        certify_border_rank(3, 2, tight_budgets)


def test_rank_upper():
    """(nd + 1) d^n."""
    assert rank_upper(2, 1) == 6
    assert rank_upper(2, 3) == 56
    assert rank_upper(3, 2) == 63


def test_induction_combiner():
    """Lifting W_3 bounds to higher order."""
    assert induction_combiner(3, 3, 1) == 3
    assert induction_combiner(7, 4, 2) == 10
    assert induction_combiner(15, 5, 3) == 29
    with pytest.raises(InvalidParameterError):
        induction_combiner(3, 2, 1)


def test_wstate_bound_examples():
    """Published Table 2 cells."""
    assert wstate_bound(3, 5) == 68
    assert wstate_bound(7, 4) == 93
    assert wstate_bound(10, 10) == 9705


def test_wstate_bound_cross_check():
    """Direct formula and induction route agree for k <= 12, n <= 20."""
    for n in range(1, 21):
        base = blaser_bound(2, n).value
        assert wstate_bound(3, n) == base
        for k in range(3, 13):
            assert wstate_bound(k, n) == base + (k - 3) * (2**n - 1)


def test_chen_bound_and_upper():
    """The earlier bound is the induction of the Alder-Strassen bound."""
    for k in range(3, 8):
        for n in range(1, 6):
            assert chen_bound(k, n) == induction_combiner(alder_strassen(2**n, 1), k, n)
            assert chen_bound(k, n) <= wstate_bound(k, n) <= wstate_rank_upper(k, n)


def test_known_exact_ranks():
    """Known values, including the cube."""
    assert known_exact_rank(3, 1) == 3
    assert known_exact_rank(3, 2) == 7
    assert known_exact_rank(3, 3) == 16
    assert known_exact_rank(6, 1) == 6
    assert known_exact_rank(5, 2) == 13
    assert known_exact_rank(4, 3) is None
    assert known_algebra_rank(4, 1) == 7
    assert known_algebra_rank(2, 3) == 16
    assert known_algebra_rank(3, 2) is None


def test_ratio_report():
    """Exact ratios over 2^n."""
    ratio, report = ratio_report(3, 10)
    assert ratio == Fraction(2544, 1024)
    assert report.ratio_lb == ratio
    assert ratio_report(3, 1)[0] == Fraction(3, 2)
    assert ratio_report(10, 10)[0] == Fraction(9705, 1024)


@pytest.mark.parametrize("k", range(3, 11))
def test_ratio_at_n_ten_is_close_to_k(k):
    """The ratio at n = 10 is already within 0.6 of k."""
    ratio, _ = ratio_report(k, 10)
    assert ratio >= k - Fraction(3, 5)


def test_lehmkuhl_lickteig_upper(tight_budgets):
    """2 * 9^((n-1) B) + 1 with a digit budget."""
    assert lehmkuhl_lickteig_upper(1, 5) == 3
    assert lehmkuhl_lickteig_upper(2, 1) == 19
    assert lehmkuhl_lickteig_upper(2, 2) == 163
    with pytest.raises(BudgetExceededError):
        lehmkuhl_lickteig_upper(3, 64, tight_budgets)


def test_algebra_report():
    """A_(2,2): Blaser wins with 7, border rank 4."""
    report = algebra_report(2, 2, certify=True)
    assert isinstance(report, BoundReport)
    assert report.instance == "algebra(d=2,n=2)"
    assert report.best_lb == 7
    assert report.best_source == SOURCE_BLASER
    assert report.blaser_m == 1
    assert report.alder_strassen_lb == 7
    assert report.border_rank == 4
    assert report.rank_ub == 20
    assert report.ratio_lb == Fraction(7, 4)
    assert report.known_exact == 7
    assert report.flattening_ranks == (4, 4, 4)


def test_algebra_report_prefers_alder_strassen_when_larger():
    """For n = 1 the two bounds tie and Blaser is listed first."""
    report = algebra_report(5, 1)
    assert report.best_lb == 9
    assert report.best_source == SOURCE_BLASER
    report = algebra_report(3, 2)
    assert report.best_lb == max(report.blaser_lb, report.alder_strassen_lb)
    if report.alder_strassen_lb > report.blaser_lb:
        assert report.best_source == SOURCE_ALDER_STRASSEN


def test_report_invariants():
    """border <= best <= upper and ratio >= 1 everywhere in the tables."""
    for d in range(2, 7):
        for n in range(1, 7):
            report = algebra_report(d, n)
            assert report.border_rank <= report.best_lb <= report.rank_ub
            assert report.ratio_lb >= 1
    for k in range(3, 11):
        for n in range(1, 11):
            report = wstate_report(k, n)
            assert report.border_rank <= report.best_lb <= report.rank_ub
            assert report.ratio_lb >= 1


def test_wstate_report_cube():
    """The cube keeps the formula value 15 and annotates 16."""
    report = wstate_report(3, 3)
    assert report.instance == "wstate(k=3,n=3)"
    assert report.best_lb == 15
    assert report.known_exact == 16
    assert report.best_source == SOURCE_BLASER_INDUCTION
    assert report.induction_lb == chen_bound(3, 3) == 15
    assert report.alder_strassen_lb is None


def test_wstate_report_names_lifted_sources():
    """Lifted bounds never claim the plain algebra provenance."""
    for k in range(3, 11):
        for n in range(1, 11):
            report = wstate_report(k, n)
            assert report.best_source in (
                SOURCE_BLASER_INDUCTION,
                SOURCE_ALDER_STRASSEN_INDUCTION,
                SOURCE_CONCISENESS,
            )
            lifted = induction_combiner(alder_strassen(2**n, 1), k, n)
            assert report.induction_lb == lifted


def test_algebra_report_has_no_lifted_bound():
    """The induction step only applies to W-state reports."""
    report = algebra_report(3, 2)
    assert report.induction_lb is None
    assert report.alder_strassen_lb == alder_strassen(9, 1)


def test_table1_values():
    """Columns and cells of the first table."""
    table = table1()
    assert table.column(2) == (3, 7, 15, 33, 68, 141)
    assert table.cell(3, 4) == 142
    assert table.cell(6, 6) == 121971
    assert table.col_keys == TABLE1_D
    assert table.is_sharp(1, 5)
    assert table.is_sharp(2, 2)
    assert not table.is_sharp(2, 3)


def test_table2_values():
    """Rows, cells and sharpness of the second table."""
    table = table2()
    assert table.row(3) == (3, 7, 15, 33, 68, 141, 297, 601, 1230, 2544)
    assert table.cell(3, 5) == 68
    assert table.cell(7, 4) == 93
    assert table.cell(10, 10) == 9705
    assert table.col_keys == TABLE2_N
    assert table.is_sharp(8, 2)
    assert not table.is_sharp(8, 3)


def test_tables_agree():
    """The d = 2 column of table 1 is the k = 3 row of table 2 up to n = 6."""
    assert table1().column(2) == table2().row(3)[:6]


def test_cube_rank_argument():
    """15 from Alder-Strassen, lifted to 16 by the syzygy."""
    argument = cube_rank_argument()
    assert argument.alder_strassen_lb == 15
    assert argument.generators == 3
    assert argument.relations_match
    assert argument.syzygy_valid
    assert argument.minimal_rank_excluded
    assert argument.lower_bound == 16
