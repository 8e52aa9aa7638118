"""Text documents for exact tensors.

Dense form::

    {"shape": [2, 2], "entries": ["0", "1", "1/2", "0"]}

Sparse form::

    {"shape": [2, 2], "format": "sparse", "nonzeros": [[[0, 1], "1"], [[1, 0], "1/2"]]}

Entries are exact rationals written as integer strings or "p/q".
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

import voluptuous as vol

from .config import DEFAULT_BUDGETS, Budgets
from .exceptions import InvalidParameterError, TensorFormatError
from .tensor import DenseTensor, check_dense_size

_LOGGER: logging.Logger = logging.getLogger(__package__)

FORMAT_DENSE = "dense"
FORMAT_SPARSE = "sparse"


def _rational(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise vol.Invalid(f"expected an integer or 'p/q' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as err:
        raise vol.Invalid(f"not an exact rational: {value!r}") from err


_SHAPE = vol.All([vol.All(int, vol.Range(min=1))], vol.Length(min=1))

DENSE_SCHEMA = vol.Schema(
    {
        vol.Required("shape"): _SHAPE,
        vol.Optional("format", default=FORMAT_DENSE): FORMAT_DENSE,
        vol.Required("entries"): [_rational],
    }
)

SPARSE_SCHEMA = vol.Schema(
    {
        vol.Required("shape"): _SHAPE,
        vol.Required("format"): FORMAT_SPARSE,
        vol.Required("nonzeros"): [vol.ExactSequence([[int], _rational])],
    }
)


def format_rational(value: Fraction) -> str:
    """Integer string when integral, else 'p/q'."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_document(tensor: DenseTensor, sparse: bool = False) -> dict[str, Any]:
    if sparse:
        return {
            "shape": list(tensor.shape),
            "format": FORMAT_SPARSE,
            "nonzeros": [
                [list(index), format_rational(value)]
                for index, value in tensor.nonzeros()
            ],
        }
    return {
        "shape": list(tensor.shape),
        "entries": [format_rational(value) for value in tensor.entries],
    }


def from_document(document: Any, budgets: Budgets = DEFAULT_BUDGETS) -> DenseTensor:
    """Parse either document form.

    The declared shape is checked against the dense-entry budget before any
    entries are allocated; a violation raises BudgetExceededError unchanged.
    """
    if not isinstance(document, dict):
        raise TensorFormatError("tensor document must be a JSON object")
    try:
        if document.get("format") == FORMAT_SPARSE:
            data = SPARSE_SCHEMA(document)
            check_dense_size(data["shape"], budgets.dense_entries)
            return DenseTensor.from_nonzeros(
                data["shape"],
                ((index, value) for index, value in data["nonzeros"]),
                budgets.dense_entries,
            )
        data = DENSE_SCHEMA(document)
        check_dense_size(data["shape"], budgets.dense_entries)
        return DenseTensor(tuple(data["shape"]), tuple(data["entries"]))
    except (vol.Invalid, InvalidParameterError) as err:
        raise TensorFormatError(f"malformed tensor document: {err}") from err


def dumps(tensor: DenseTensor, sparse: bool = False) -> str:
    return json.dumps(to_document(tensor, sparse=sparse), separators=(",", ":")) + "\n"


def loads(text: str, budgets: Budgets = DEFAULT_BUDGETS) -> DenseTensor:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise TensorFormatError(f"tensor document is not valid JSON: {err}") from err
    return from_document(document, budgets)


def write_tensor(tensor: DenseTensor, path: str | Path, sparse: bool = False) -> None:
    _LOGGER.debug("Writing tensor of shape %s to %s", tensor.shape, path)
    Path(path).write_text(dumps(tensor, sparse=sparse), encoding="utf-8")


def read_tensor(path: str | Path, budgets: Budgets = DEFAULT_BUDGETS) -> DenseTensor:
    _LOGGER.debug("Reading tensor from %s", path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise TensorFormatError(f"cannot read tensor file {path}: {err}") from err
    except UnicodeDecodeError as err:
        raise TensorFormatError(f"tensor file {path} is not UTF-8 text: {err}") from err
    return loads(text, budgets)
