"""Command line front end for rankgap."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass
from typing import Any, TextIO

import voluptuous as vol

from . import bounds, cpd, report, tensor_io
from .algebra import MonomialAlgebra, structure_tensor, wstate_basis_equivalence
from .combinatorics import ext_binom
from .config import AlsConfig, RunConfig, color_enabled, load_budgets
from .const import (
    CONF_BUDGETS,
    CONF_COLOR,
    CONF_COMMAND,
    CONF_FORMAT,
    CONF_LINESEARCH,
    CONF_MAX_ITERS,
    CONF_OUTPUT,
    CONF_REBALANCE,
    CONF_RESTARTS,
    CONF_SEED,
    CONF_STRUCTURE_DIM,
    DEFAULT_MAX_ITERS,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    EXIT_BUDGET,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    FORMAT_TEXT,
    FORMATS,
    NAME,
    NUMERICAL_NOTE,
    STARTUP_MESSAGE,
    VERSION,
)
from .exceptions import (
    BudgetExceededError,
    CertificationError,
    InvalidParameterError,
    TensorFormatError,
)
from .polyring import verify_syzygy
from .tensor import check_dense_size, is_concise, kron_power, wstate

_LOGGER: logging.Logger = logging.getLogger(__package__)

# argparse keys that are not subcommand parameters
_GLOBAL_KEYS = {"handler", "verbose", "format", "out", "seed", "budget"}


@dataclass(frozen=True)
class CommandResult:
    """Rendered output and whether every requested verification passed."""

    text: str
    ok: bool = True


Handler = Callable[[RunConfig], CommandResult]


def _als_config(config: RunConfig) -> AlsConfig:
    params = config.params
    return AlsConfig.from_dict(
        {
            CONF_MAX_ITERS: params["max_iters"],
            CONF_RESTARTS: params["restarts"],
            CONF_SEED: config.seed,
            CONF_REBALANCE: not params["no_rebalance"],
            CONF_LINESEARCH: params["linesearch"],
        }
    )


def _check_dims(shape: Sequence[int], budget: int, what: str) -> None:
    if max(shape) > budget:
        raise BudgetExceededError(
            f"{what} has a mode of dimension {max(shape)}, above the budget {budget}"
        )


def cmd_extbinom(config: RunConfig) -> CommandResult:
    n, b, d = (config.params[key] for key in ("n", "b", "d"))
    value = ext_binom(n, b, d)
    if config.format == FORMAT_TEXT:
        return CommandResult(f"{value}\n")
    return CommandResult(
        report.render_records(
            "Extended binomial coefficient", ["n", "b", "d", "count"],
            [[n, b, d, value]], config.format,
        )
    )


def cmd_bound_algebra(config: RunConfig) -> CommandResult:
    params = config.params
    result = bounds.algebra_report(
        params["d"], params["n"], certify=params["certify_border"], budgets=config.budgets
    )
    return CommandResult(report.render_report(result, config.format))


def cmd_bound_wstate(config: RunConfig) -> CommandResult:
    _, result = bounds.ratio_report(config.params["k"], config.params["n"])
    return CommandResult(report.render_report(result, config.format))


def cmd_table(config: RunConfig) -> CommandResult:
    table = bounds.table1() if config.params["number"] == 1 else bounds.table2()
    return CommandResult(report.render_table(table, config.format, config.color))


def cmd_tensor_wstate(config: RunConfig) -> CommandResult:
    k, power = config.params["k"], config.params["power"]
    if power < 1:
        raise InvalidParameterError(f"power must be >= 1, got {power}")
    _check_dims((2**power,), config.budgets.structure_dim, "W-state power")
    dense = config.budgets.dense_entries
    check_dense_size((2**power,) * k, dense)
    t = kron_power(wstate(k, dense), power, dense)
    return CommandResult(tensor_io.dumps(t, sparse=config.params["sparse"]))


def cmd_tensor_algebra(config: RunConfig) -> CommandResult:
    alg = MonomialAlgebra(config.params["d"], config.params["n"])
    t = structure_tensor(alg, config.budgets)
    return CommandResult(tensor_io.dumps(t, sparse=config.params["sparse"]))


def cmd_rank_flatten(config: RunConfig) -> CommandResult:
    t = tensor_io.read_tensor(config.params["input"], config.budgets)
    _check_dims(t.shape, config.budgets.rank_check_dim, "tensor")
    verdict = is_concise(t)
    rows = [
        [mode, dim, rank, concise]
        for mode, (dim, rank, concise) in enumerate(
            zip(t.shape, verdict.ranks, verdict.modes), start=1
        )
    ]
    text = report.render_records(
        "Flattening ranks", ["mode", "dim", "rank", "concise"], rows, config.format
    )
    if config.format == FORMAT_TEXT:
        text += f"concise: {report.format_value(verdict.concise)}\n"
    return CommandResult(text)


def cmd_verify_syzygy(config: RunConfig) -> CommandResult:
    certificate = verify_syzygy()
    if config.format == FORMAT_TEXT:
        return CommandResult(certificate.render() + "\n", certificate.valid)
    return CommandResult(
        report.render_records(
            "Syzygy certificate", ["valid", "residual"],
            [[certificate.valid, str(certificate.residual)]], config.format,
        ),
        certificate.valid,
    )


def cmd_verify_wstate_basis(config: RunConfig) -> CommandResult:
    n = config.params["n"]
    result = wstate_basis_equivalence(n, config.budgets)
    return CommandResult(
        report.render_records(
            "A_(2,n) against W_3^(x)n after SWAP on mode 3",
            ["n", "equal"], [[n, result.equal]], config.format,
        ),
        result.equal,
    )


def _parse_eps(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise InvalidParameterError(f"cannot parse eps list {text!r}") from err


def cmd_verify_degeneration(config: RunConfig) -> CommandResult:
    witness = cpd.degeneration_witness(
        config.params["k"], _parse_eps(config.params["eps"])
    )
    rows: list[list[Any]] = [[eps, res] for eps, res in witness.points]
    ok = True
    text = report.render_records(
        f"Rank-2 witness for W_{witness.k} ({NUMERICAL_NOTE})",
        ["eps", "residual"], rows, config.format,
    )
    if len(witness.points) > 1:
        slope = witness.slope()
        ok = abs(slope - 1.0) <= 0.1
        if config.format == FORMAT_TEXT:
            text += f"log-log slope: {slope:.4f}\n"
    return CommandResult(text, ok)


def cmd_verify_cube(config: RunConfig) -> CommandResult:
    argument = bounds.cube_rank_argument()
    rows = [
        ["Alder-Strassen bound", argument.alder_strassen_lb],
        ["generators", argument.generators],
        ["relations match", argument.relations_match],
        ["syzygy residual zero", argument.syzygy_valid],
        ["minimal rank excluded", argument.minimal_rank_excluded],
        ["rank lower bound", argument.lower_bound],
    ]
    return CommandResult(
        report.render_records(
            "Rank of W^(x)3", ["check", "value"], rows, config.format
        ),
        argument.minimal_rank_excluded,
    )


def cmd_verify_certify_upper(config: RunConfig) -> CommandResult:
    t = tensor_io.read_tensor(config.params["input"], config.budgets)
    check = cpd.certify_upper(
        t, config.params["rank"], config.params["threshold"], _als_config(config)
    )
    rows = [
        [check.rank, check.threshold, check.residual, check.decomposition.seed, check.passed]
    ]
    text = report.render_records(
        f"Rank upper bound search ({check.note})",
        ["rank", "threshold", "residual", "seed", "passed"], rows, config.format,
    )
    return CommandResult(text, check.passed)


def cmd_verify_decomposition(config: RunConfig) -> CommandResult:
    t = tensor_io.read_tensor(config.params["input"], config.budgets)
    value = cpd.verify_decomposition_file(t, config.params["decomposition"])
    passed = value < config.params["threshold"]
    text = report.render_records(
        f"Stored decomposition ({NUMERICAL_NOTE})",
        ["residual", "threshold", "passed"],
        [[value, config.params["threshold"], passed]], config.format,
    )
    return CommandResult(text, passed)


def _trace_rows(decomposition: cpd.CPDecomposition) -> list[list[Any]]:
    total = len(decomposition.residual_trace)
    step = max(1, total // 20)
    sweeps = sorted(set(range(0, total, step)) | {total - 1})
    return [
        [i + 1, decomposition.residual_trace[i], decomposition.norm_trace[i]]
        for i in sweeps
    ]


def cmd_decompose(config: RunConfig) -> CommandResult:
    params = config.params
    t = tensor_io.read_tensor(params["input"], config.budgets)
    als = _als_config(config)
    if params["probe_divergence"]:
        decomposition = cpd.divergence_probe(t, params["rank"], als)
    else:
        decomposition = cpd.als_decompose(t, params["rank"], als)
    if params["save"]:
        cpd.write_decomposition(decomposition, params["save"])
    text = report.render_records(
        f"Rank-{decomposition.rank} ALS ({NUMERICAL_NOTE})",
        ["rank", "seed", "iterations", "residual", "max_column_norm", "aborted"],
        [[
            decomposition.rank,
            decomposition.seed,
            decomposition.iterations,
            decomposition.residual,
            decomposition.max_column_norm,
            len(decomposition.aborted),
        ]],
        config.format,
    )
    if params["probe_divergence"]:
        text += report.render_records(
            "Per-sweep trace", ["sweep", "residual", "max_column_norm"],
            _trace_rows(decomposition), config.format,
        )
    return CommandResult(text)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("--format", choices=FORMATS, default=FORMAT_TEXT)
    common.add_argument("--out", default=None, help="write output to FILE")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument(
        "--budget", type=int, default=None, help="structure tensor dimension budget"
    )
    return common


def _als_parser() -> argparse.ArgumentParser:
    als = argparse.ArgumentParser(add_help=False)
    als.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    als.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    als.add_argument("--no-rebalance", action="store_true")
    als.add_argument("--linesearch", action="store_true")
    return als


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    als = _als_parser()
    parser = argparse.ArgumentParser(
        prog=NAME,
        description="Rank and border rank bounds for A_(d,n) and W-state powers.",
    )
    parser.add_argument("--version", action="version", version=f"{NAME} {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    def leaf(
        group: Any, name: str, handler: Handler, *parents: argparse.ArgumentParser
    ) -> argparse.ArgumentParser:
        sub = group.add_parser(name, parents=[common, *parents])
        sub.set_defaults(handler=handler)
        return sub

    sub = leaf(commands, "extbinom", cmd_extbinom)
    for key in ("n", "b", "d"):
        sub.add_argument(key, type=int)

    bound = commands.add_parser("bound").add_subparsers(dest="action", required=True)
    sub = leaf(bound, "algebra", cmd_bound_algebra)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--certify-border", action="store_true")
    sub = leaf(bound, "wstate", cmd_bound_wstate)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)

    sub = leaf(commands, "table", cmd_table)
    sub.add_argument("number", type=int, choices=(1, 2))

    tensor = commands.add_parser("tensor").add_subparsers(dest="action", required=True)
    sub = leaf(tensor, "wstate", cmd_tensor_wstate)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--power", type=int, default=1)
    sub.add_argument("--sparse", action="store_true")
    sub = leaf(tensor, "algebra", cmd_tensor_algebra)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--sparse", action="store_true")
    sub = leaf(tensor, "rank-flatten", cmd_rank_flatten)
    sub.add_argument("--in", dest="input", required=True)

    verify = commands.add_parser("verify").add_subparsers(dest="action", required=True)
    leaf(verify, "syzygy", cmd_verify_syzygy)
    leaf(verify, "cube", cmd_verify_cube)
    sub = leaf(verify, "wstate-basis", cmd_verify_wstate_basis)
    sub.add_argument("--n", type=int, required=True)
    sub = leaf(verify, "degeneration", cmd_verify_degeneration)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--eps", default="1e-1,1e-2,1e-3")
    sub = leaf(verify, "certify-upper", cmd_verify_certify_upper, als)
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--rank", type=int, required=True)
    sub.add_argument("--threshold", type=float, default=1e-8)
    sub = leaf(verify, "decomposition", cmd_verify_decomposition)
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--decomposition", required=True)
    sub.add_argument("--threshold", type=float, default=1e-8)

    sub = leaf(commands, "decompose", cmd_decompose, als)
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--rank", type=int, required=True)
    sub.add_argument("--probe-divergence", action="store_true")
    sub.add_argument("--save", default=None, help="write the decomposition to FILE")
    return parser


def _command_name(args: argparse.Namespace) -> str:
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def _run_config(args: argparse.Namespace) -> RunConfig:
    budgets = load_budgets({CONF_STRUCTURE_DIM: args.budget})
    params = {
        key: value for key, value in vars(args).items() if key not in _GLOBAL_KEYS
    }
    params.pop(CONF_COMMAND, None)
    return RunConfig.from_dict(
        {
            **params,
            CONF_COMMAND: _command_name(args),
            CONF_FORMAT: args.format,
            CONF_OUTPUT: args.out,
            CONF_SEED: args.seed,
            CONF_COLOR: color_enabled(),
            CONF_BUDGETS: asdict(budgets),
        }
    )


def _emit(text: str, output: str | None, stdout: TextIO) -> None:
    if output is None:
        stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    _LOGGER.debug("Wrote output to %s", output)


def _fail(message: str, code: int, stderr: TextIO) -> int:
    stderr.write(f"{NAME}: error: {' '.join(message.split())}\n")
    return code


def main(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Run one command and return its exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code in (None, 0) else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=stderr,
    )
    _LOGGER.debug(STARTUP_MESSAGE)

    try:
        config = _run_config(args)
        result = args.handler(config)
        _emit(result.text, config.output, stdout)
    except (InvalidParameterError, TensorFormatError, vol.Invalid) as err:
        return _fail(str(err), EXIT_USAGE, stderr)
    except BudgetExceededError as err:
        return _fail(str(err), EXIT_BUDGET, stderr)
    except CertificationError as err:
        return _fail(str(err), EXIT_VERIFICATION_FAILED, stderr)
    except OSError as err:
        return _fail(f"cannot write output: {err}", EXIT_USAGE, stderr)

    if not result.ok:
        _LOGGER.warning("Verification failed for %s", config.command)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK
