"""Exact dense tensors over the rationals."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import NamedTuple

import numpy as np

from .const import DEFAULT_DENSE_ENTRIES
from .exceptions import BudgetExceededError, InvalidParameterError

_LOGGER: logging.Logger = logging.getLogger(__package__)

ZERO = Fraction(0)
ONE = Fraction(1)


def _prod(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b, values, 1)


def _strides(shape: Sequence[int]) -> tuple[int, ...]:
    """Row-major strides, last index fastest."""
    strides = [1] * len(shape)
    for axis in range(len(shape) - 2, -1, -1):
        strides[axis] = strides[axis + 1] * shape[axis + 1]
    return tuple(strides)


def check_dense_size(shape: Sequence[int], max_entries: int | None) -> int:
    """Entry count of a dense tensor of this shape; raises when above max_entries."""
    total = _prod(shape)
    if max_entries is not None and total > max_entries:
        raise BudgetExceededError(
            f"dense tensor of shape {tuple(shape)} has {total} entries, "
            f"above the configured budget {max_entries}"
        )
    return total


@dataclass(frozen=True)
class DenseTensor:
    """Order-k tensor with exact rational entries in row-major order."""

    shape: tuple[int, ...]
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.shape) < 1:
            raise InvalidParameterError("a tensor needs at least one mode")
        if any(dim < 1 for dim in self.shape):
            raise InvalidParameterError(f"every dimension must be >= 1: {self.shape}")
        if len(self.entries) != _prod(self.shape):
            raise InvalidParameterError(
                f"{len(self.entries)} entries do not fill shape {self.shape}"
            )

    @classmethod
    def from_entries(
        cls, shape: Sequence[int], entries: Iterable[int | Fraction | str]
    ) -> DenseTensor:
        """Build a tensor, converting entries to Fraction."""
        return cls(tuple(shape), tuple(Fraction(x) for x in entries))

    @classmethod
    def zeros(
        cls, shape: Sequence[int], max_entries: int | None = DEFAULT_DENSE_ENTRIES
    ) -> DenseTensor:
        return cls(tuple(shape), (ZERO,) * check_dense_size(shape, max_entries))

    @classmethod
    def from_nonzeros(
        cls,
        shape: Sequence[int],
        nonzeros: Iterable[tuple[Sequence[int], int | Fraction]],
        max_entries: int | None = DEFAULT_DENSE_ENTRIES,
    ) -> DenseTensor:
        """Build a tensor from (multi-index, value) pairs; repeats accumulate.

        The entry count is checked against max_entries before anything is allocated.
        """
        shape = tuple(shape)
        strides = _strides(shape)
        entries = [ZERO] * check_dense_size(shape, max_entries)
        for index, value in nonzeros:
            if len(index) != len(shape) or any(
                not 0 <= i < dim for i, dim in zip(index, shape)
            ):
                raise InvalidParameterError(f"index {tuple(index)} outside {shape}")
            flat = sum(i * s for i, s in zip(index, strides))
            entries[flat] += Fraction(value)
        return cls(shape, tuple(entries))

    @property
    def order(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return len(self.entries)

    def flat_index(self, index: Sequence[int]) -> int:
        return sum(i * s for i, s in zip(index, _strides(self.shape)))

    def __getitem__(self, index: Sequence[int]) -> Fraction:
        return self.entries[self.flat_index(index)]

    def indices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*map(range, self.shape))

    def nonzeros(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        """Yield (multi-index, value) for every nonzero entry, row-major."""
        for index, value in zip(self.indices(), self.entries):
            if value:
                yield index, value

    def nnz(self) -> int:
        return sum(1 for value in self.entries if value)

    def to_numpy(self, dtype: type = complex) -> np.ndarray:
        """Convert to a floating point array (exact for small integer entries)."""
        real = np.array([float(x) for x in self.entries], dtype=float)
        return real.astype(dtype).reshape(self.shape)


@dataclass(frozen=True)
class ExactMatrix:
    """Matrix with exact rational entries in row-major order."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise InvalidParameterError(
                f"matrix dimensions must be positive: {self.rows}x{self.cols}"
            )
        if len(self.entries) != self.rows * self.cols:
            raise InvalidParameterError(
                f"{len(self.entries)} entries do not fill {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | Fraction | str]]) -> ExactMatrix:
        if not rows or len({len(row) for row in rows}) != 1:
            raise InvalidParameterError("rows must be non-empty and of equal length")
        return cls(
            len(rows), len(rows[0]), tuple(Fraction(x) for row in rows for x in row)
        )

    @classmethod
    def identity(cls, size: int) -> ExactMatrix:
        return cls(
            size,
            size,
            tuple(ONE if i == j else ZERO for i in range(size) for j in range(size)),
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls(rows, cols, (ZERO,) * (rows * cols))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]


def wstate(k: int, max_entries: int | None = DEFAULT_DENSE_ENTRIES) -> DenseTensor:
    """The generalised W-state e1 e0 ... e0 + ... + e0 ... e0 e1 in (C^2)^k."""
    if k < 2:
        raise InvalidParameterError(f"W-state order must be >= 2, got {k}")
    return DenseTensor.from_nonzeros(
        (2,) * k,
        ((tuple(1 if axis == pos else 0 for axis in range(k)), 1) for pos in range(k)),
        max_entries,
    )


def unit_tensor(shape: Sequence[int], index: Sequence[int]) -> DenseTensor:
    """The basis tensor with a single 1 at the given index."""
    return DenseTensor.from_nonzeros(shape, [(index, 1)])


def kronecker(
    s: DenseTensor, t: DenseTensor, max_entries: int | None = DEFAULT_DENSE_ENTRIES
) -> DenseTensor:
    """Mode-wise Kronecker product; the left factor is the high-order digit."""
    if s.order != t.order:
        raise InvalidParameterError(
            f"order mismatch in Kronecker product: {s.order} vs {t.order}"
        )
    shape = tuple(a * b for a, b in zip(s.shape, t.shape))
    right = list(t.nonzeros())
    return DenseTensor.from_nonzeros(
        shape,
        (
            (tuple(a * dim + b for a, b, dim in zip(left_index, index, t.shape)),
             left_value * value)
            for left_index, left_value in s.nonzeros()
            for index, value in right
        ),
        max_entries,
    )


def kron_power(
    t: DenseTensor, n: int, max_entries: int | None = DEFAULT_DENSE_ENTRIES
) -> DenseTensor:
    """n-fold Kronecker product of t with itself."""
    if n < 1:
        raise InvalidParameterError(f"Kronecker power must be >= 1, got {n}")
    result = t
    for _ in range(n - 1):
        result = kronecker(result, t, max_entries)
    return result


def _check_mode(t: DenseTensor, mode: int) -> None:
    if not 1 <= mode <= t.order:
        raise InvalidParameterError(f"mode must lie in [1, {t.order}], got {mode}")


def flattening(t: DenseTensor, mode: int) -> ExactMatrix:
    """Unfold along a 1-based mode; remaining modes fuse in ascending order."""
    _check_mode(t, mode)
    axis = mode - 1
    rest = t.shape[:axis] + t.shape[axis + 1 :]
    cols = _prod(rest)
    rest_strides = _strides(rest)
    entries = [ZERO] * (t.shape[axis] * cols)
    for index, value in t.nonzeros():
        other = index[:axis] + index[axis + 1 :]
        col = sum(i * s for i, s in zip(other, rest_strides))
        entries[index[axis] * cols + col] = value
    return ExactMatrix(t.shape[axis], cols, tuple(entries))


def _integer_row(row: Iterable[Fraction]) -> dict[int, int]:
    """Scale a rational row to a primitive sparse integer row."""
    nonzero = {col: Fraction(value) for col, value in enumerate(row) if value}
    if not nonzero:
        return {}
    scale = math.lcm(*(value.denominator for value in nonzero.values()))
    return _primitive({col: int(value * scale) for col, value in nonzero.items()})


def _primitive(row: dict[int, int]) -> dict[int, int]:
    content = math.gcd(*row.values())
    if content > 1:
        return {col: value // content for col, value in row.items()}
    return row


def exact_rank(m: ExactMatrix) -> int:
    """Rank over Q by fraction-free elimination.

    Rows are kept as primitive sparse integer vectors; each elimination step
    combines two rows with integer multipliers and divides out the content,
    so no Fraction arithmetic happens inside the loop. Pivots are the first
    nonzero entry in column order.
    """
    rows = [row for row in (_integer_row(m.row(i)) for i in range(m.rows)) if row]
    rank = 0
    for col in range(m.cols):
        pivot_at = next((i for i in range(rank, len(rows)) if col in rows[i]), None)
        if pivot_at is None:
            continue
        rows[rank], rows[pivot_at] = rows[pivot_at], rows[rank]
        pivot_row = rows[rank]
        pivot = pivot_row[col]
        survivors = rows[: rank + 1]
        for row in rows[rank + 1 :]:
            factor = row.get(col)
            if factor is None:
                survivors.append(row)
                continue
            combined = {c: pivot * v for c, v in row.items()}
            for c, v in pivot_row.items():
                value = combined.get(c, 0) - factor * v
                if value:
                    combined[c] = value
                else:
                    combined.pop(c, None)
            if combined:
                survivors.append(_primitive(combined))
        rows = survivors
        rank += 1
        if rank == len(rows):
            break
    return rank


class Conciseness(NamedTuple):
    """Per-mode conciseness flags and the overall verdict."""

    modes: tuple[bool, ...]
    concise: bool
    ranks: tuple[int, ...]


def flattening_ranks(t: DenseTensor) -> tuple[int, ...]:
    return tuple(exact_rank(flattening(t, mode)) for mode in range(1, t.order + 1))


def is_concise(t: DenseTensor) -> Conciseness:
    """Mode i is concise iff its flattening has full row rank."""
    ranks = flattening_ranks(t)
    modes = tuple(rank == dim for rank, dim in zip(ranks, t.shape))
    _LOGGER.debug("Flattening ranks %s for shape %s", ranks, t.shape)
    return Conciseness(modes, all(modes), ranks)


def apply_mode_map(t: DenseTensor, mode: int, m: ExactMatrix) -> DenseTensor:
    """Contract m against a 1-based mode: new[.., r, ..] = sum_c m[r, c] t[.., c, ..]."""
    _check_mode(t, mode)
    axis = mode - 1
    if m.cols != t.shape[axis]:
        raise InvalidParameterError(
            f"map has {m.cols} columns but mode {mode} has dimension {t.shape[axis]}"
        )
    columns: list[list[tuple[int, Fraction]]] = [[] for _ in range(m.cols)]
    for r in range(m.rows):
        for c in range(m.cols):
            if m[r, c]:
                columns[c].append((r, m[r, c]))
    shape = t.shape[:axis] + (m.rows,) + t.shape[axis + 1 :]
    return DenseTensor.from_nonzeros(
        shape,
        (
            (index[:axis] + (r,) + index[axis + 1 :], coeff * value)
            for index, value in t.nonzeros()
            for r, coeff in columns[index[axis]]
        ),
    )


def kron_matrix(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product of matrices, left factor high-order."""
    return ExactMatrix(
        a.rows * b.rows,
        a.cols * b.cols,
        tuple(
            a[i // b.rows, j // b.cols] * b[i % b.rows, j % b.cols]
            for i in range(a.rows * b.rows)
            for j in range(a.cols * b.cols)
        ),
    )
