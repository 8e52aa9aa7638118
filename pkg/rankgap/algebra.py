"""The truncated polynomial algebra A_(d,n) = C[x_1..x_n]/(x_1^d..x_n^d)."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import reduce
from typing import Any, Final, TypeVar

from .combinatorics import ext_binom
from .config import DEFAULT_BUDGETS, Budgets
from .exceptions import BudgetExceededError, InvalidParameterError
from .tensor import (
    DenseTensor,
    ExactMatrix,
    apply_mode_map,
    kron_matrix,
    kron_power,
    wstate,
)

_LOGGER: logging.Logger = logging.getLogger(__package__)

R = TypeVar("R")


class _Zero:
    """Product that falls outside the basis (some exponent reaches d)."""

    _instance: _Zero | None = None

    def __new__(cls) -> _Zero:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO"

    def __bool__(self) -> bool:
        return False


ZERO: Final = _Zero()


def _check_dn(d: int, n: int) -> None:
    if d < 2:
        raise InvalidParameterError(f"A_(d,n) needs d >= 2, got d={d}")
    if n < 1:
        raise InvalidParameterError(f"A_(d,n) needs n >= 1, got n={n}")


@dataclass(frozen=True)
class MonomialAlgebra:
    """A_(d,n) with the monomial basis in big-endian mixed radix order.

    The exponent vector (a_1, ..., a_n) has index sum_i a_i d^(n-i), so
    index 0 is the unit and x_1 is the most significant digit.
    """

    d: int
    n: int

    def __post_init__(self) -> None:
        _check_dn(self.d, self.n)

    @property
    def dim(self) -> int:
        return self.d**self.n

    def _check_index(self, index: int) -> None:
        if not 0 <= index < self.dim:
            raise InvalidParameterError(
                f"basis index {index} outside [0, {self.dim}) for A_({self.d},{self.n})"
            )

    def decode(self, index: int) -> tuple[int, ...]:
        """Exponent vector of a basis index."""
        self._check_index(index)
        exponents = []
        for _ in range(self.n):
            index, digit = divmod(index, self.d)
            exponents.append(digit)
        return tuple(reversed(exponents))

    def encode(self, exponents: Sequence[int]) -> int:
        """Basis index of an exponent vector."""
        if len(exponents) != self.n or any(
            not 0 <= a < self.d for a in exponents
        ):
            raise InvalidParameterError(
                f"exponents {tuple(exponents)} outside {{0..{self.d - 1}}}^{self.n}"
            )
        index = 0
        for a in exponents:
            index = index * self.d + a
        return index

    def variable(self, i: int) -> int:
        """Basis index of x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise InvalidParameterError(f"variable index {i} outside [1, {self.n}]")
        return self.encode(tuple(1 if t == i - 1 else 0 for t in range(self.n)))

    def degree(self, index: int) -> int:
        return sum(self.decode(index))

    def multiply_basis(self, i: int, j: int) -> int | _Zero:
        """Product of two basis monomials, or ZERO when an exponent overflows."""
        a = self.decode(i)
        b = self.decode(j)
        exponents = tuple(x + y for x, y in zip(a, b))
        if any(e > self.d - 1 for e in exponents):
            return ZERO
        return self.encode(exponents)

    def multiply(
        self, u: Mapping[int, R], v: Mapping[int, R], zero: R | int = 0
    ) -> dict[int, R]:
        """Product of general elements given as {basis index: coefficient}.

        Coefficients may live in any commutative ring supporting + and *.
        """
        product: dict[int, Any] = {}
        for i, cu in u.items():
            for j, cv in v.items():
                k = self.multiply_basis(i, j)
                if k is ZERO:
                    continue
                product[k] = product.get(k, zero) + cu * cv
        return product


def _check_budget(dim: int, budget: int, what: str) -> None:
    if dim > budget:
        raise BudgetExceededError(
            f"{what} needs dimension {dim}, above the configured budget {budget}"
        )


def structure_tensor(
    alg: MonomialAlgebra, budgets: Budgets = DEFAULT_BUDGETS
) -> DenseTensor:
    """T[i][j][k] = 1 iff e_i e_j = e_k."""
    _check_budget(alg.dim, budgets.structure_dim, "structure tensor")
    _LOGGER.debug("Building structure tensor of A_(%s,%s)", alg.d, alg.n)
    return DenseTensor.from_nonzeros(
        (alg.dim,) * 3,
        (
            ((i, j, k), 1)
            for i in range(alg.dim)
            for j in range(alg.dim)
            if (k := alg.multiply_basis(i, j)) is not ZERO
        ),
        max_entries=None,
    )


def nilradical_power_dim(d: int, n: int, m: int) -> int:
    """dim N^m, where N^m is spanned by the monomials of degree >= m."""
    _check_dn(d, n)
    if m < 0:
        raise InvalidParameterError(f"power m must be >= 0, got {m}")
    if m > n * (d - 1):
        return 0
    return d**n - sum(ext_binom(n, b, d - 1) for b in range(m))


@dataclass(frozen=True)
class NilpotentProfile:
    """dim N^m for m = 0 .. n(d-1)+1."""

    d: int
    n: int
    dims: tuple[int, ...]

    @property
    def nilpotency_index(self) -> int:
        """Smallest m with N^m = 0."""
        return self.dims.index(0)


def nilpotent_profile(d: int, n: int) -> NilpotentProfile:
    return NilpotentProfile(
        d, n, tuple(nilradical_power_dim(d, n, m) for m in range(n * (d - 1) + 2))
    )


def cotangent_dim(d: int, n: int) -> int:
    """dim N/N^2, the minimal number of algebra generators."""
    return nilradical_power_dim(d, n, 1) - nilradical_power_dim(d, n, 2)


SWAP: Final = ExactMatrix.from_rows([[0, 1], [1, 0]])


def reversal_map(n: int) -> ExactMatrix:
    """SWAP^(x)n, the permutation k -> 2^n - 1 - k."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    return reduce(kron_matrix, [SWAP] * n)


@dataclass(frozen=True)
class BasisEquivalence:
    """Result of comparing the mapped A_(2,n) tensor with W_3^(x)n."""

    n: int
    mapped: DenseTensor
    wstate_power: DenseTensor
    equal: bool


def wstate_basis_equivalence(
    n: int, budgets: Budgets = DEFAULT_BUDGETS
) -> BasisEquivalence:
    """Apply SWAP^(x)n on the third leg of A_(2,n) and compare with W_3^(x)n."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    alg = MonomialAlgebra(2, n)
    _check_budget(alg.dim, budgets.structure_dim, "basis equivalence")
    mapped = apply_mode_map(structure_tensor(alg, budgets), 3, reversal_map(n))
    target = kron_power(wstate(3), n)
    equal = mapped == target
    _LOGGER.debug("A_(2,%s) equals W_3^%s after the swap: %s", n, n, equal)
    return BasisEquivalence(n, mapped, target, equal)
