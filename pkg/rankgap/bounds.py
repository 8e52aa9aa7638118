"""Rank and border rank bounds for A_(d,n) and W_k^(x)n."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import NamedTuple

from .algebra import MonomialAlgebra, cotangent_dim, structure_tensor
from .combinatorics import ext_binom_row
from .config import DEFAULT_BUDGETS, Budgets
from .exceptions import BudgetExceededError, CertificationError, InvalidParameterError
from .polyring import derive_relations, verify_syzygy
from .tensor import flattening_ranks

_LOGGER: logging.Logger = logging.getLogger(__package__)

KIND_ALGEBRA = "algebra"
KIND_WSTATE = "wstate"

SOURCE_BLASER = "blaser"
SOURCE_ALDER_STRASSEN = "alder_strassen"
SOURCE_BLASER_INDUCTION = "blaser_induction"
SOURCE_ALDER_STRASSEN_INDUCTION = "alder_strassen_induction"
SOURCE_CONCISENESS = "conciseness"

# Exact ranks established outside the bound formulas.
KNOWN_WSTATE_RANKS = {(3, 1): 3, (3, 2): 7, (3, 3): 16}


def _check_d(d: int) -> None:
    if d < 2:
        raise InvalidParameterError(f"d must be >= 2, got {d}")


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")


def _check_k(k: int) -> None:
    if k < 3:
        raise InvalidParameterError(f"k must be >= 3, got {k}")


def blaser_generic(dim_a: int, dim_n_2m_1: int, dim_n_m: int) -> int:
    """dim A - dim N^(2m-1) + 2 dim N^m."""
    if not 0 <= dim_n_2m_1 <= dim_n_m <= dim_a:
        raise InvalidParameterError(
            "need 0 <= dim N^(2m-1) <= dim N^m <= dim A, got "
            f"{dim_n_2m_1}, {dim_n_m}, {dim_a}"
        )
    return dim_a - dim_n_2m_1 + 2 * dim_n_m


class BlaserBound(NamedTuple):
    value: int
    best_m: int


def blaser_bound(d: int, n: int) -> BlaserBound:
    """Maximise 2d^n + S(2m-2) - 2 S(m-1) over m in [1, n(d-1)+1].

    S(t) is the number of monomials of degree <= t. Ties go to the
    smallest m.
    """
    _check_d(d)
    _check_n(n)
    prefix = list(accumulate(ext_binom_row(n, d - 1)))
    top = len(prefix) - 1

    def partial(t: int) -> int:
        return prefix[min(t, top)]

    best = BlaserBound(-1, 0)
    for m in range(1, n * (d - 1) + 2):
        value = 2 * d**n + partial(2 * m - 2) - 2 * partial(m - 1)
        if value > best.value:
            best = BlaserBound(value, m)
    _LOGGER.debug("Blaser bound for A_(%s,%s): %s at m=%s", d, n, *best)
    return best


def alder_strassen(dim_a: int, t: int) -> int:
    """2 dim A - t for an algebra with t maximal two-sided ideals."""
    if dim_a < 1:
        raise InvalidParameterError(f"dim A must be >= 1, got {dim_a}")
    if t < 1:
        raise InvalidParameterError(f"t must be >= 1, got {t}")
    if t > 2 * dim_a:
        raise InvalidParameterError(f"t={t} exceeds 2 dim A = {2 * dim_a}")
    return 2 * dim_a - t


def certify_border_rank(
    d: int, n: int, budgets: Budgets = DEFAULT_BUDGETS
) -> tuple[int, ...]:
    """Exact flattening ranks of A_(d,n); raise unless all equal d^n."""
    _check_d(d)
    _check_n(n)
    alg = MonomialAlgebra(d, n)
    if alg.dim > budgets.rank_check_dim:
        raise BudgetExceededError(
            f"rank check of A_({d},{n}) needs dimension {alg.dim}, "
            f"above the configured budget {budgets.rank_check_dim}"
        )
    ranks = flattening_ranks(structure_tensor(alg, budgets))
    if any(rank != alg.dim for rank in ranks):
        raise CertificationError(
            f"flattening ranks {ranks} of A_({d},{n}) fall short of {alg.dim}"
        )
    _LOGGER.info("A_(%s,%s) is concise: flattening ranks %s", d, n, ranks)
    return ranks


def border_rank_algebra(
    d: int, n: int, certify: bool = False, budgets: Budgets = DEFAULT_BUDGETS
) -> int:
    """d^n; with certify, also check the conciseness lower bound exactly."""
    _check_d(d)
    _check_n(n)
    if certify:
        certify_border_rank(d, n, budgets)
    return d**n


def rank_upper(d: int, n: int) -> int:
    """(nd + 1) d^n."""
    _check_d(d)
    _check_n(n)
    return (n * d + 1) * d**n


def induction_combiner(lb3: int, k: int, n: int) -> int:
    """Lift a bound for W_3^(x)n to W_k^(x)n: lb3 + (k-3)(2^n - 1)."""
    _check_k(k)
    _check_n(n)
    return lb3 + (k - 3) * (2**n - 1)


def _wstate_bound_direct(k: int, n: int) -> int:
    best = max(
        sum(math.comb(n, b) for b in range(min(2 * m - 2, n) + 1))
        - 2 * sum(math.comb(n, b) for b in range(min(m - 1, n) + 1))
        for m in range(1, n + 2)
    )
    return (k - 1) * 2**n + best - (k - 3)


def wstate_bound(k: int, n: int) -> int:
    """Lower bound for rank(W_k^(x)n), checked against the induction route."""
    _check_k(k)
    _check_n(n)
    direct = _wstate_bound_direct(k, n)
    combined = induction_combiner(blaser_bound(2, n).value, k, n)
    if direct != combined:
        raise CertificationError(
            f"W-state bound mismatch at k={k}, n={n}: {direct} != {combined}"
        )
    return direct


def chen_bound(k: int, n: int) -> int:
    """(k-1) 2^n - k + 2, from 2^(n+1) - 1 and the induction step."""
    _check_k(k)
    _check_n(n)
    return (k - 1) * 2**n - k + 2


def wstate_rank_upper(k: int, n: int) -> int:
    """(n(k-1) + 1) 2^n."""
    _check_k(k)
    _check_n(n)
    return (n * (k - 1) + 1) * 2**n


def known_exact_rank(k: int, n: int) -> int | None:
    """Exact rank of W_k^(x)n where it is known, else None."""
    _check_k(k)
    _check_n(n)
    if (k, n) in KNOWN_WSTATE_RANKS:
        return KNOWN_WSTATE_RANKS[(k, n)]
    if n <= 2:
        return wstate_bound(k, n)
    return None


def known_algebra_rank(d: int, n: int) -> int | None:
    """Exact rank of A_(d,n) where it is known, else None."""
    _check_d(d)
    _check_n(n)
    if n == 1:
        # C[x]/(x^d) is simply generated, hence of minimal rank
        return 2 * d - 1
    if d == 2:
        return KNOWN_WSTATE_RANKS.get((3, n))
    return None


def lehmkuhl_lickteig_upper(
    n: int, border_rank: int, budgets: Budgets = DEFAULT_BUDGETS
) -> int:
    """2 * 9^((n-1) B) + 1, refused when 9^((n-1) B) has too many digits."""
    _check_n(n)
    if border_rank < 1:
        raise InvalidParameterError(f"border rank must be >= 1, got {border_rank}")
    exponent = (n - 1) * border_rank
    digits = math.floor(exponent * math.log10(9)) + 1
    if digits > budgets.exponent_digits:
        raise BudgetExceededError(
            f"9^{exponent} has about {digits} digits, "
            f"above the budget of {budgets.exponent_digits}"
        )
    return 2 * 9**exponent + 1


@dataclass(frozen=True)
class BoundReport:
    """All bounds for one instance, with provenance.

    W-state reports carry the A_(2,n) bounds lifted to order k by the induction
    step: blaser_lb holds the lifted Blaser bound, induction_lb the lifted
    Alder-Strassen bound, and alder_strassen_lb is None.
    """

    kind: str
    params: tuple[tuple[str, int], ...]
    dim: int
    blaser_lb: int
    blaser_m: int
    alder_strassen_lb: int | None
    border_rank: int
    rank_ub: int
    best_lb: int
    best_source: str
    ratio_lb: Fraction
    known_exact: int | None = None
    induction_lb: int | None = None
    border_certified: bool = False
    flattening_ranks: tuple[int, ...] = field(default=())

    @property
    def instance(self) -> str:
        return f"{self.kind}({','.join(f'{k}={v}' for k, v in self.params)})"


def _best(bounds: dict[str, int]) -> tuple[int, str]:
    """Largest bound; ties keep the first listed source."""
    source = max(bounds, key=lambda name: bounds[name])
    return bounds[source], source


def _check_report(report: BoundReport) -> BoundReport:
    if not report.border_rank <= report.best_lb <= report.rank_ub:
        raise CertificationError(
            f"inconsistent bounds for {report.instance}: border rank "
            f"{report.border_rank}, lower {report.best_lb}, upper {report.rank_ub}"
        )
    return report


def algebra_report(
    d: int, n: int, certify: bool = False, budgets: Budgets = DEFAULT_BUDGETS
) -> BoundReport:
    """Bounds for A_(d,n); the algebra is local, so t = 1."""
    _check_d(d)
    _check_n(n)
    ranks = certify_border_rank(d, n, budgets) if certify else ()
    border = border_rank_algebra(d, n)
    blaser = blaser_bound(d, n)
    local = alder_strassen(d**n, 1)
    best, source = _best(
        {
            SOURCE_BLASER: blaser.value,
            SOURCE_ALDER_STRASSEN: local,
            SOURCE_CONCISENESS: border,
        }
    )
    return _check_report(
        BoundReport(
            kind=KIND_ALGEBRA,
            params=(("d", d), ("n", n)),
            dim=d**n,
            blaser_lb=blaser.value,
            blaser_m=blaser.best_m,
            alder_strassen_lb=local,
            border_rank=border,
            rank_ub=rank_upper(d, n),
            best_lb=best,
            best_source=source,
            ratio_lb=Fraction(best, border),
            known_exact=known_algebra_rank(d, n),
            border_certified=certify,
            flattening_ranks=ranks,
        )
    )


def wstate_report(k: int, n: int) -> BoundReport:
    """Bounds for W_k^(x)n; border rank 2^n, A_(2,n) bounds lifted to order k."""
    _check_k(k)
    _check_n(n)
    border = 2**n
    blaser = blaser_bound(2, n)
    bounds = {
        SOURCE_BLASER_INDUCTION: wstate_bound(k, n),
        SOURCE_ALDER_STRASSEN_INDUCTION: chen_bound(k, n),
        SOURCE_CONCISENESS: border,
    }
    best, source = _best(bounds)
    return _check_report(
        BoundReport(
            kind=KIND_WSTATE,
            params=(("k", k), ("n", n)),
            dim=border,
            blaser_lb=bounds[SOURCE_BLASER_INDUCTION],
            blaser_m=blaser.best_m,
            alder_strassen_lb=None,
            border_rank=border,
            rank_ub=wstate_rank_upper(k, n),
            best_lb=best,
            best_source=source,
            ratio_lb=Fraction(best, border),
            known_exact=known_exact_rank(k, n),
            induction_lb=bounds[SOURCE_ALDER_STRASSEN_INDUCTION],
        )
    )


def ratio_report(k: int, n: int) -> tuple[Fraction, BoundReport]:
    """rank/border rank lower bound for W_k^(x)n as an exact rational."""
    report = wstate_report(k, n)
    return Fraction(wstate_bound(k, n), 2**n), report


TABLE1_D = tuple(range(2, 7))
TABLE1_N = tuple(range(1, 7))
TABLE2_K = tuple(range(3, 11))
TABLE2_N = tuple(range(1, 11))


@dataclass(frozen=True)
class BoundTable:
    """A grid of exact bounds with the cells known to be sharp."""

    title: str
    row_label: str
    col_label: str
    row_keys: tuple[int, ...]
    col_keys: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]
    sharp: frozenset[tuple[int, int]]

    def cell(self, row: int, col: int) -> int:
        return self.values[self.row_keys.index(row)][self.col_keys.index(col)]

    def row(self, key: int) -> tuple[int, ...]:
        return self.values[self.row_keys.index(key)]

    def column(self, key: int) -> tuple[int, ...]:
        j = self.col_keys.index(key)
        return tuple(row[j] for row in self.values)

    def is_sharp(self, row: int, col: int) -> bool:
        return (row, col) in self.sharp


def table1() -> BoundTable:
    """Lower bounds for rank(A_(d,n)); rows n, columns d."""
    return BoundTable(
        title="Lower bounds for rank(A_(d,n))",
        row_label="n",
        col_label="d",
        row_keys=TABLE1_N,
        col_keys=TABLE1_D,
        values=tuple(
            tuple(blaser_bound(d, n).value for d in TABLE1_D) for n in TABLE1_N
        ),
        sharp=frozenset({(1, d) for d in TABLE1_D} | {(2, 2)}),
    )


def table2() -> BoundTable:
    """Lower bounds for rank(W_k^(x)n); rows k, columns n."""
    return BoundTable(
        title="Lower bounds for rank(W_k^(x)n)",
        row_label="k",
        col_label="n",
        row_keys=TABLE2_K,
        col_keys=TABLE2_N,
        values=tuple(
            tuple(wstate_bound(k, n) for n in TABLE2_N) for k in TABLE2_K
        ),
        sharp=frozenset((k, n) for k in TABLE2_K for n in TABLE2_N if n <= 2),
    )


@dataclass(frozen=True)
class CubeRankArgument:
    """The exact-rank-16 argument for W^(x)3 = A_(2,3)."""

    alder_strassen_lb: int
    generators: int
    relations_match: bool
    syzygy_valid: bool

    @property
    def minimal_rank_excluded(self) -> bool:
        return self.relations_match and self.syzygy_valid

    @property
    def lower_bound(self) -> int:
        if self.minimal_rank_excluded:
            return self.alder_strassen_lb + 1
        return self.alder_strassen_lb


def cube_rank_argument() -> CubeRankArgument:
    """Rule out minimal rank for A_(2,3), lifting 15 to 16.

    Minimal rank would make A_(2,3) a generalised null algebra on
    dim N/N^2 = 3 generators with pairwise zero products; those products
    force f_i = g_i = 0, and the syzygy puts -A_11 det A in their ideal.
    """
    _, relations_match = derive_relations()
    certificate = verify_syzygy()
    argument = CubeRankArgument(
        alder_strassen_lb=alder_strassen(2**3, 1),
        generators=cotangent_dim(2, 3),
        relations_match=relations_match,
        syzygy_valid=certificate.valid,
    )
    _LOGGER.info("Cube argument lower bound: %s", argument.lower_bound)
    return argument
