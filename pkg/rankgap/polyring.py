"""Sparse multivariate polynomials over Q and the W-cube syzygy certificate."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .algebra import MonomialAlgebra
from .exceptions import InvalidParameterError

_LOGGER: logging.Logger = logging.getLogger(__package__)

Scalar = Union[int, Fraction]
Monomial = tuple[int, ...]

# Row-major: A11, A12, A13, A21, ..., A33
MATRIX_VARIABLES = tuple(f"A{i}{j}" for i in range(1, 4) for j in range(1, 4))
MATRIX_ARITY = len(MATRIX_VARIABLES)


class Polynomial:
    """Polynomial in a fixed number of variables, stored as {multidegree: coeff}.

    Zero coefficients are never stored, so equality is map equality.
    """

    __slots__ = ("_arity", "_terms", "names")

    def __init__(
        self,
        arity: int,
        terms: Mapping[Monomial, Scalar] | None = None,
        names: Sequence[str] | None = None,
    ) -> None:
        if arity < 1:
            raise InvalidParameterError(f"arity must be >= 1, got {arity}")
        self._arity = arity
        clean: dict[Monomial, Fraction] = {}
        for monomial, coeff in (terms or {}).items():
            monomial = tuple(monomial)
            if len(monomial) != arity or any(e < 0 for e in monomial):
                raise InvalidParameterError(
                    f"multidegree {monomial} does not fit arity {arity}"
                )
            if coeff:
                clean[monomial] = Fraction(coeff)
        self._terms = clean
        self.names = tuple(names) if names else tuple(f"x{i + 1}" for i in range(arity))

    @classmethod
    def zero(cls, arity: int, names: Sequence[str] | None = None) -> Polynomial:
        return cls(arity, {}, names)

    @classmethod
    def constant(
        cls, arity: int, value: Scalar, names: Sequence[str] | None = None
    ) -> Polynomial:
        return cls(arity, {(0,) * arity: value}, names)

    @classmethod
    def variable(
        cls, arity: int, i: int, names: Sequence[str] | None = None
    ) -> Polynomial:
        """The 0-based i-th variable."""
        if not 0 <= i < arity:
            raise InvalidParameterError(f"variable {i} outside arity {arity}")
        return cls(arity, {tuple(int(t == i) for t in range(arity)): 1}, names)

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def _coerce(self, other: Any) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.arity != self.arity:
                raise InvalidParameterError(
                    f"arity mismatch: {self.arity} vs {other.arity}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.arity, other, self.names)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.arity == other.arity and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.arity, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self._terms.items())))

    def __add__(self, other: Any) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for monomial, coeff in other._terms.items():
            terms[monomial] = terms.get(monomial, 0) + coeff
        return Polynomial(self.arity, terms, self.names)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(
            self.arity, {m: -c for m, c in self._terms.items()}, self.names
        )

    def __sub__(self, other: Any) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Any) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                monomial = tuple(a + b for a, b in zip(m1, m2))
                terms[monomial] = terms.get(monomial, 0) + c1 * c2
        return Polynomial(self.arity, terms, self.names)

    __rmul__ = __mul__

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        """Substitute exact values for all variables."""
        if len(point) != self.arity:
            raise InvalidParameterError(
                f"point has {len(point)} coordinates, arity is {self.arity}"
            )
        total = Fraction(0)
        for monomial, coeff in self._terms.items():
            value = coeff
            for x, e in zip(point, monomial):
                if e:
                    value *= Fraction(x) ** e
            total += value
        return total

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms by descending total degree, then descending lex order."""
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for monomial, coeff in self.sorted_terms():
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.names, monomial)
                if e
            ]
            magnitude = abs(coeff)
            if factors and magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude), *factors])
            pieces.append(("- " if coeff < 0 else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def neg(p: Polynomial) -> Polynomial:
    return -p


def scale(p: Polynomial, c: Scalar) -> Polynomial:
    return p * Polynomial.constant(p.arity, c, p.names)


def entry(i: int, j: int) -> Polynomial:
    """The matrix variable A_ij (1-based)."""
    if not (1 <= i <= 3 and 1 <= j <= 3):
        raise InvalidParameterError(f"A_{i}{j} is not a 3x3 entry")
    return Polynomial.variable(MATRIX_ARITY, 3 * (i - 1) + (j - 1), MATRIX_VARIABLES)


def _permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for a, b in itertools.combinations(range(len(perm)), 2) if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1


def det3_generic() -> Polynomial:
    """Leibniz expansion of det(A_ij)."""
    total = Polynomial.zero(MATRIX_ARITY, MATRIX_VARIABLES)
    for perm in itertools.permutations(range(1, 4)):
        term = Polynomial.constant(MATRIX_ARITY, _permutation_sign(perm), MATRIX_VARIABLES)
        for row, col in enumerate(perm, start=1):
            term = term * entry(row, col)
        total = total + term
    return total


RelationPolys = tuple[
    Polynomial, Polynomial, Polynomial, Polynomial, Polynomial, Polynomial
]
RELATION_NAMES = ("f1", "f2", "f3", "g1", "g2", "g3")


def relation_polys() -> RelationPolys:
    """f_1..f_3 (from x_1 x_2) and g_1..g_3 (from x_1 x_3)."""
    a = entry
    return (
        a(1, 1) * a(2, 2) + a(1, 2) * a(2, 1),
        a(1, 1) * a(2, 3) + a(1, 3) * a(2, 1),
        a(1, 2) * a(2, 3) + a(1, 3) * a(2, 2),
        a(1, 1) * a(3, 2) + a(1, 2) * a(3, 1),
        a(1, 1) * a(3, 3) + a(1, 3) * a(3, 1),
        a(1, 2) * a(3, 3) + a(1, 3) * a(3, 2),
    )


def derive_relations() -> tuple[RelationPolys, bool]:
    """Expand x_1 x_2 and x_1 x_3 in C[x,y,z]/(x^2,y^2,z^2).

    x_i = A_i1 x + A_i2 y + A_i3 z; the N^2 parts of the generators only
    reach N^3 and are left out. Returns the xy, xz, yz coefficients of both
    products and whether they equal relation_polys().
    """
    alg = MonomialAlgebra(2, 3)
    generators = [alg.variable(j) for j in range(1, 4)]
    zero = Polynomial.zero(MATRIX_ARITY, MATRIX_VARIABLES)

    def element(i: int) -> dict[int, Polynomial]:
        return {generators[j - 1]: entry(i, j) for j in range(1, 4)}

    targets = [alg.encode(e) for e in ((1, 1, 0), (1, 0, 1), (0, 1, 1))]
    derived: list[Polynomial] = []
    for partner in (2, 3):
        product = alg.multiply(element(1), element(partner), zero=zero)
        derived.extend(product.get(target, zero) for target in targets)
    relations = tuple(derived)
    match = relations == relation_polys()
    _LOGGER.debug("Derived relations match the displayed ones: %s", match)
    return relations, match  # type: ignore[return-value]


SYZYGY_MULTIPLIERS: RelationPolys = (
    entry(1, 3) * entry(3, 1) - entry(1, 1) * entry(3, 3),
    -3 * entry(1, 2) * entry(3, 1) - entry(1, 1) * entry(3, 2),
    Polynomial.zero(MATRIX_ARITY, MATRIX_VARIABLES),
    2 * entry(1, 1) * entry(2, 3),
    2 * entry(1, 2) * entry(2, 1),
    Polynomial.zero(MATRIX_ARITY, MATRIX_VARIABLES),
)


@dataclass(frozen=True)
class SyzygyCertificate:
    """sum_i c_i r_i = -A_11 det A, valid iff the residual vanishes."""

    multipliers: tuple[Polynomial, ...]
    relations: tuple[Polynomial, ...]
    target: Polynomial
    residual: Polynomial

    @property
    def valid(self) -> bool:
        return self.residual.is_zero()

    def render(self) -> str:
        lines = ["Syzygy certificate: -A11*det(A) = sum of multiplier * relation"]
        for name, multiplier, relation in zip(
            RELATION_NAMES, self.multipliers, self.relations
        ):
            lines.append(f"  {name} = {relation}")
            lines.append(f"    multiplier: {multiplier}")
        lines.append(f"  target: {self.target}")
        if self.valid:
            lines.append("RESIDUAL = 0")
        else:
            lines.append(f"RESIDUAL = {self.residual}")
            lines.extend(
                f"  offending term: {coeff} * {monomial}"
                for monomial, coeff in self.residual.sorted_terms()
            )
        return "\n".join(lines)


def verify_syzygy(
    multipliers: Iterable[Polynomial] = SYZYGY_MULTIPLIERS,
) -> SyzygyCertificate:
    """Check sum_i c_i r_i + A_11 det A == 0 symbolically."""
    multipliers = tuple(multipliers)
    if len(multipliers) != len(RELATION_NAMES):
        raise InvalidParameterError(
            f"expected {len(RELATION_NAMES)} multipliers, got {len(multipliers)}"
        )
    relations = relation_polys()
    target = -(entry(1, 1) * det3_generic())
    combination = Polynomial.zero(MATRIX_ARITY, MATRIX_VARIABLES)
    for multiplier, relation in zip(multipliers, relations):
        combination = combination + multiplier * relation
    residual = combination - target
    if residual.is_zero():
        _LOGGER.info("Syzygy verified: residual is zero")
    else:
        _LOGGER.error("Syzygy residual is nonzero: %s", residual)
    return SyzygyCertificate(multipliers, relations, target, residual)
