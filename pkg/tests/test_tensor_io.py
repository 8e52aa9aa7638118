"""Test tensor documents."""

import json
from fractions import Fraction

import pytest

from rankgap.config import Budgets
from rankgap.exceptions import BudgetExceededError, TensorFormatError
from rankgap.tensor import DenseTensor, kron_power, wstate
from rankgap.tensor_io import (
    dumps,
    format_rational,
    from_document,
    loads,
    read_tensor,
    to_document,
    write_tensor,
)


def test_format_rational():
    """Integers stay integers, everything else is p/q."""
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-2, 6)) == "-1/3"


def test_dense_document(small_matrix_tensor):
    """Dense documents list every entry in row-major order."""
    document = to_document(small_matrix_tensor)
    assert document == {"shape": [2, 3], "entries": ["1", "1/2", "0", "0", "3", "-2/3"]}
    assert from_document(document) == small_matrix_tensor


def test_sparse_document(w3):
    """Sparse documents carry only the nonzero entries."""
    document = to_document(w3, sparse=True)
    assert document["format"] == "sparse"
    assert document["nonzeros"] == [[[0, 0, 1], "1"], [[0, 1, 0], "1"], [[1, 0, 0], "1"]]
    assert from_document(document) == w3


def test_file_round_trip(tmp_path):
    """Files written in either form read back bit-exactly."""
    t = kron_power(wstate(3), 2)
    for sparse in (False, True):
        path = tmp_path / f"w.{sparse}.json"
        write_tensor(t, path, sparse=sparse)
        assert read_tensor(path) == t
        assert path.read_text(encoding="utf-8").endswith("\n")


def test_integer_entries_are_accepted():
    """Plain JSON integers are valid entries."""
    t = loads('{"shape": [2], "entries": [1, "2/4"]}')
    assert t.entries == (Fraction(1), Fraction(1, 2))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"shape": [2], "entries": ["1"]}',
        '{"shape": [2], "entries": ["1", "x"]}',
        '{"shape": [2], "entries": ["1", 0.5]}',
        '{"shape": [0], "entries": []}',
        '{"shape": [2], "format": "sparse", "nonzeros": [[[3], "1"]]}',
        '{"shape": [2], "format": "sparse", "nonzeros": [[[0], "1/0"]]}',
    ],
)
def test_malformed_documents(text):
    """Every malformed document raises TensorFormatError."""
    with pytest.raises(TensorFormatError):
        loads(text)


def test_missing_file(tmp_path):
    """Unreadable paths are format errors, not OSErrors."""
    with pytest.raises(TensorFormatError):
        read_tensor(tmp_path / "missing.json")


def test_non_utf8_file(tmp_path):
    """Undecodable bytes are a format error, not a crash."""
    path = tmp_path / "bad.json"
    path.write_bytes(b"\xff\xfe{}")
    with pytest.raises(TensorFormatError):
        read_tensor(path)


@pytest.mark.parametrize(
    "document",
    [
        {
            "shape": [100000, 100000, 100000],
            "format": "sparse",
            "nonzeros": [[[0, 0, 0], "1"]],
        },
        {"shape": [100000, 100000, 100000], "entries": ["1"]},
    ],
)
def test_oversized_shapes_exceed_the_budget(tmp_path, document):
    """The declared shape is checked before dense storage is allocated."""
    path = tmp_path / "huge.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(BudgetExceededError, match="budget"):
        read_tensor(path)


def test_dense_budget_is_configurable(w3):
    """A lower dense-entry budget refuses tensors the default accepts."""
    text = dumps(kron_power(w3, 2), sparse=True)
    assert loads(text).shape == (4, 4, 4)
    with pytest.raises(BudgetExceededError):
        loads(text, Budgets(dense_entries=63))


def test_dumps_is_compact(w3):
    """Dense dumps are single-line JSON."""
    text = dumps(w3)
    assert text.count("\n") == 1
    assert json.loads(text)["shape"] == [2, 2, 2]
    assert isinstance(from_document(json.loads(text)), DenseTensor)
