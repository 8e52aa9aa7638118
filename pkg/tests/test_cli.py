"""Test the command line front end."""

import io
import json

import pytest

from rankgap.cli import build_parser, main
from rankgap.const import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, ENV_SIZE_BUDGET
from rankgap.tensor import kron_power, wstate
from rankgap.tensor_io import read_tensor, write_tensor

from .const import TABLE1_CSV, TABLE2_CSV


def run(*argv):
    """Run the CLI and return (exit code, stdout, stderr)."""
    stdout = io.StringIO()
    stderr = io.StringIO()
    code = main(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def test_extbinom():
    """C(3, 3; 2) = 7."""
    assert run("extbinom", "3", "3", "2") == (EXIT_OK, "7\n", "")


def test_bound_wstate():
    """The cube keeps the formula value and annotates the exact rank."""
    code, out, _ = run("bound", "wstate", "--k", "3", "--n", "3")
    assert code == EXIT_OK
    assert "Best lower bound: 15" in out.splitlines()
    assert "known exact: 16" in out.splitlines()


def test_bound_algebra_certified():
    """Certification adds the exact flattening ranks."""
    code, out, _ = run("bound", "algebra", "--d", "2", "--n", "2", "--certify-border")
    assert code == EXIT_OK
    assert "Flattening ranks: 4 4 4" in out
    assert "Border rank certified: yes" in out


def test_bound_rejects_bad_parameters():
    """d = 1 is a usage error with a one-line message."""
    code, out, err = run("bound", "algebra", "--d", "1", "--n", "2")
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("rankgap: error: ")
    assert err.count("\n") == 1


@pytest.mark.parametrize("number,golden", [("1", TABLE1_CSV), ("2", TABLE2_CSV)])
def test_table_csv(number, golden):
    """CSV tables match the golden files byte for byte."""
    code, out, _ = run("table", number, "--format", "csv")
    assert code == EXIT_OK
    assert out == golden.read_text(encoding="utf-8")


def test_table_out_file(tmp_path):
    """--out writes the same bytes to a file."""
    path = tmp_path / "table2.csv"
    code, out, _ = run("table", "2", "--format", "csv", "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert path.read_bytes() == TABLE2_CSV.read_bytes()


def test_verify_syzygy():
    """The certificate ends with a zero residual."""
    code, out, _ = run("verify", "syzygy")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "RESIDUAL = 0"


def test_verify_cube():
    """The lower bound 16 is reported."""
    code, out, _ = run("verify", "cube", "--format", "structured")
    assert code == EXIT_OK
    records = json.loads(out)["records"]
    assert {"check": "rank lower bound", "value": "16"} in records


def test_verify_wstate_basis():
    """A_(2,3) with the third leg reversed is W_3^(x)3."""
    code, out, _ = run("verify", "wstate-basis", "--n", "3", "--format", "csv")
    assert code == EXIT_OK
    assert out == "n,equal\n3,yes\n"


def test_verify_degeneration():
    """Slope one for the rank-2 family."""
    code, out, _ = run("verify", "degeneration", "--k", "3")
    assert code == EXIT_OK
    assert "log-log slope: 1.0" in out
    code, _, _ = run("verify", "degeneration", "--k", "3", "--eps", "0.1,oops")
    assert code == EXIT_USAGE


def test_tensor_round_trip_through_rank_flatten(tmp_path):
    """A tensor written with --out feeds rank-flatten."""
    path = tmp_path / "w2.json"
    code, _, _ = run("tensor", "wstate", "--k", "3", "--power", "2", "--out", str(path))
    assert code == EXIT_OK
    assert read_tensor(path) == kron_power(wstate(3), 2)

    code, out, _ = run("tensor", "rank-flatten", "--in", str(path), "--format", "csv")
    assert code == EXIT_OK
    assert out == "mode,dim,rank,concise\n1,4,4,yes\n2,4,4,yes\n3,4,4,yes\n"


def test_tensor_algebra_budget():
    """Structure tensors above the budget exit with code 3."""
    code, _, err = run("tensor", "algebra", "--d", "2", "--n", "4", "--budget", "8")
    assert code == EXIT_BUDGET
    assert "budget" in err
    code, out, _ = run("tensor", "algebra", "--d", "2", "--n", "1", "--sparse")
    assert code == EXIT_OK
    assert json.loads(out)["format"] == "sparse"


def test_budget_from_environment(monkeypatch):
    """RANKGAP_SIZE_BUDGET lowers the structure budget."""
    monkeypatch.setenv(ENV_SIZE_BUDGET, "4")
    code, _, _ = run("tensor", "algebra", "--d", "2", "--n", "3")
    assert code == EXIT_BUDGET


def test_malformed_tensor_file(tmp_path):
    """Unreadable input is a usage error."""
    path = tmp_path / "bad.json"
    path.write_text('{"shape": [2], "entries": ["1"]}', encoding="utf-8")
    code, _, err = run("tensor", "rank-flatten", "--in", str(path))
    assert code == EXIT_USAGE
    assert "rankgap: error:" in err


def test_oversized_wstate_exits_with_budget_code():
    """W_40 would need 2^40 dense entries and is refused up front."""
    code, out, err = run("tensor", "wstate", "--k", "40")
    assert code == EXIT_BUDGET
    assert out == ""
    assert "budget" in err
    assert run("tensor", "wstate", "--k", "3", "--power", "9")[0] == EXIT_BUDGET


def test_oversized_sparse_file_exits_with_budget_code(tmp_path):
    """A tiny sparse file declaring a huge shape is a budget violation."""
    path = tmp_path / "huge.json"
    path.write_text(
        json.dumps(
            {
                "shape": [100000, 100000, 100000],
                "format": "sparse",
                "nonzeros": [[[0, 0, 0], "1"]],
            }
        ),
        encoding="utf-8",
    )
    code, _, err = run("tensor", "rank-flatten", "--in", str(path))
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_undecodable_inputs_are_usage_errors(tmp_path, w3):
    """Non-UTF-8 bytes and non-string factors exit with code 2."""
    garbage = tmp_path / "garbage.json"
    garbage.write_bytes(b"\xff\xfe{}")
    assert run("tensor", "rank-flatten", "--in", str(garbage))[0] == EXIT_USAGE

    tensor_path = tmp_path / "w3.json"
    write_tensor(w3, tensor_path)
    for name, content in [
        ("bytes.json", b"\xff\xfe{}"),
        (
            "numbers.json",
            b'{"shape": [2, 2, 2], "rank": 1, "seed": 0, "residual": "0", '
            b'"factors": [[[1], [0]], [[1], [0]], [[1], [0]]]}',
        ),
    ]:
        saved = tmp_path / name
        saved.write_bytes(content)
        code, _, err = run(
            "verify", "decomposition", "--in", str(tensor_path),
            "--decomposition", str(saved),
        )
        assert code == EXIT_USAGE
        assert err.startswith("rankgap: error: ")


def test_usage_errors():
    """argparse failures map to exit code 2."""
    assert run("table", "3")[0] == EXIT_USAGE
    assert run("bound")[0] == EXIT_USAGE
    assert run("--version")[0] == EXIT_OK


def test_decompose_and_verify_stored_file(tmp_path, rank_one):
    """A saved decomposition verifies without rerunning ALS."""
    tensor_path = tmp_path / "e000.json"
    saved = tmp_path / "cpd.json"
    write_tensor(rank_one, tensor_path)
    code, out, _ = run(
        "decompose", "--in", str(tensor_path), "--rank", "1",
        "--restarts", "1", "--max-iters", "50", "--save", str(saved),
    )
    assert code == EXIT_OK
    assert "numerical evidence only" in out
    code, _, _ = run(
        "verify", "decomposition", "--in", str(tensor_path),
        "--decomposition", str(saved),
    )
    assert code == EXIT_OK


def test_certify_upper_failure_exit_code(tmp_path, w3):
    """Missing the threshold is a verification failure."""
    path = tmp_path / "w3.json"
    write_tensor(w3, path)
    code, out, _ = run(
        "verify", "certify-upper", "--in", str(path), "--rank", "1",
        "--restarts", "2", "--max-iters", "30",
    )
    assert code == 1
    assert "no" in out.split()


def test_parser_command_names():
    """Nested subcommands record their action."""
    args = build_parser().parse_args(["verify", "syzygy"])
    assert (args.command, args.action) == ("verify", "syzygy")
