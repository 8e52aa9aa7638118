"""Numerical CP decompositions by alternating least squares over C.

Everything here is floating point evidence for rank upper bounds and never
an exact certificate; lower bounds come from the bounds module only.
"""

from __future__ import annotations

import json
import logging
import math
import re
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np
import voluptuous as vol

from .config import AlsConfig
from .const import LINESEARCH_POWER, LINESEARCH_WARMUP, LSTSQ_RCOND, NUMERICAL_NOTE
from .exceptions import CertificationError, InvalidParameterError, TensorFormatError
from .tensor import DenseTensor, wstate

_LOGGER: logging.Logger = logging.getLogger(__package__)


@dataclass(frozen=True, eq=False)
class CPDecomposition:
    """r simple tensors approximating a target, with how they were found."""

    shape: tuple[int, ...]
    rank: int
    factors: tuple[np.ndarray, ...]
    residual: float
    max_column_norm: float
    iterations: int
    seed: int
    residual_trace: tuple[float, ...] = ()
    norm_trace: tuple[float, ...] = ()
    aborted: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.residual < 0:
            raise InvalidParameterError(f"residual must be >= 0, got {self.residual}")
        if len(self.factors) != len(self.shape):
            raise InvalidParameterError(
                f"{len(self.factors)} factors for a tensor of order {len(self.shape)}"
            )
        for dim, factor in zip(self.shape, self.factors):
            if factor.shape != (dim, self.rank):
                raise InvalidParameterError(
                    f"factor of shape {factor.shape} does not match ({dim}, {self.rank})"
                )

    @property
    def order(self) -> int:
        return len(self.shape)

    def reconstruct(self) -> np.ndarray:
        return reconstruct(self.factors, self.shape)


def khatri_rao(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Column-wise Kronecker product, first matrix as the high-order digit."""
    result = matrices[0]
    for matrix in matrices[1:]:
        result = (result[:, None, :] * matrix[None, :, :]).reshape(
            -1, matrix.shape[1]
        )
    return result


def unfold(array: np.ndarray, axis: int) -> np.ndarray:
    """Mode-axis unfolding; remaining axes fuse in ascending order."""
    return np.moveaxis(array, axis, 0).reshape(array.shape[axis], -1)


def reconstruct(factors: Sequence[np.ndarray], shape: Sequence[int]) -> np.ndarray:
    """Sum of the r simple tensors given by the factor columns."""
    if len(factors) == 1:
        return factors[0].sum(axis=1).reshape(tuple(shape))
    return (factors[0] @ khatri_rao(factors[1:]).T).reshape(tuple(shape))


def component_norms(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Norm of each rank-one term, the product of its column norms."""
    return np.prod([np.linalg.norm(factor, axis=0) for factor in factors], axis=0)


def _relative_residual(target: np.ndarray, approx: np.ndarray) -> float:
    scale = float(np.linalg.norm(target))
    error = float(np.linalg.norm(target - approx))
    return error / scale if scale else error


def residual(t: DenseTensor, decomposition: CPDecomposition) -> float:
    """Relative Frobenius distance between t and the decomposition."""
    if tuple(t.shape) != tuple(decomposition.shape):
        raise InvalidParameterError(
            f"tensor shape {t.shape} does not match decomposition shape "
            f"{decomposition.shape}"
        )
    return _relative_residual(t.to_numpy(), decomposition.reconstruct())


def _random_factors(
    shape: Sequence[int], rank: int, seed: int
) -> list[np.ndarray]:
    """Standard complex Gaussian entries from a counter-based generator."""
    rng = np.random.Generator(np.random.Philox(seed))
    return [
        (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank)))
        / math.sqrt(2)
        for dim in shape
    ]


def _rebalance(factors: list[np.ndarray]) -> None:
    """Give every factor column of a term the same norm, in place."""
    norms = np.array([np.linalg.norm(factor, axis=0) for factor in factors])
    alive = np.all(norms > 0, axis=0)
    if not alive.any():
        return
    geometric = np.exp(np.mean(np.log(norms[:, alive]), axis=0))
    for factor, column_norms in zip(factors, norms):
        factor[:, alive] *= geometric / column_norms[alive]


@dataclass
class _Run:
    factors: list[np.ndarray]
    residuals: list[float] = field(default_factory=list)
    norms: list[float] = field(default_factory=list)

    @property
    def residual(self) -> float:
        return self.residuals[-1] if self.residuals else math.inf


def _sweep(target: np.ndarray, factors: list[np.ndarray]) -> None:
    """One round-robin pass of exact least squares updates."""
    for axis in range(len(factors)):
        others = [factors[j] for j in range(len(factors)) if j != axis]
        design = khatri_rao(others) if others else np.ones((1, factors[axis].shape[1]))
        solution, *_ = np.linalg.lstsq(design, unfold(target, axis).T, rcond=LSTSQ_RCOND)
        factors[axis] = solution.T


def _extrapolate(
    target: np.ndarray,
    factors: list[np.ndarray],
    previous: list[np.ndarray],
    sweep: int,
    current: float,
) -> float:
    """Step to previous + jump * (factors - previous) if that lowers the residual."""
    jump = sweep ** (1.0 / LINESEARCH_POWER)
    trial = [old + jump * (new - old) for old, new in zip(previous, factors)]
    if not all(np.all(np.isfinite(factor)) for factor in trial):
        return current
    trial_residual = _relative_residual(target, reconstruct(trial, target.shape))
    if not trial_residual < current:
        return current
    _LOGGER.debug(
        "Line search at sweep %s: residual %.3e -> %.3e", sweep, current, trial_residual
    )
    factors[:] = trial
    return trial_residual


def _als_run(
    target: np.ndarray, rank: int, cfg: AlsConfig, seed: int
) -> _Run:
    run = _Run(_random_factors(target.shape, rank, seed))
    previous: list[np.ndarray] = []
    for sweep in range(cfg.max_iters):
        extrapolate = cfg.linesearch and sweep % 2 == 0
        if extrapolate:
            previous = [factor.copy() for factor in run.factors]
        _sweep(target, run.factors)
        if cfg.rebalance:
            _rebalance(run.factors)
        if not all(np.all(np.isfinite(factor)) for factor in run.factors):
            raise FloatingPointError("non-finite factor entries")
        current = _relative_residual(target, reconstruct(run.factors, target.shape))
        if extrapolate and sweep > LINESEARCH_WARMUP:
            current = _extrapolate(target, run.factors, previous, sweep, current)
        run.residuals.append(current)
        run.norms.append(float(component_norms(run.factors).max()))
        if not math.isfinite(run.residual):
            raise FloatingPointError("non-finite residual")
        window = cfg.stall_window
        if (
            len(run.residuals) > window
            and run.residuals[-1 - window] - run.residuals[-1] < cfg.tol
        ):
            break
    return run


def _check_rank(rank: int) -> None:
    if rank < 1:
        raise InvalidParameterError(f"rank must be >= 1, got {rank}")


def _finish(
    shape: tuple[int, ...], rank: int, run: _Run, seed: int, aborted: list[int]
) -> CPDecomposition:
    return CPDecomposition(
        shape=shape,
        rank=rank,
        factors=tuple(run.factors),
        residual=run.residual,
        max_column_norm=run.norms[-1],
        iterations=len(run.residuals),
        seed=seed,
        residual_trace=tuple(run.residuals),
        norm_trace=tuple(run.norms),
        aborted=tuple(aborted),
    )


def als_decompose(
    t: DenseTensor, r: int, cfg: AlsConfig | None = None
) -> CPDecomposition:
    """Best of cfg.restarts seeded ALS runs; restart i uses seed cfg.seed + i.

    Runs are ranked by (residual, restart index). A restart reaching
    cfg.target ends the search; restarts that blow up are logged and skipped.
    """
    _check_rank(r)
    cfg = cfg or AlsConfig()
    target = t.to_numpy()
    best: tuple[float, int, _Run] | None = None
    aborted: list[int] = []
    for index in range(cfg.restarts):
        seed = cfg.seed + index
        try:
            run = _als_run(target, r, cfg, seed)
        except (FloatingPointError, np.linalg.LinAlgError) as err:
            _LOGGER.error("ALS restart with seed %s aborted: %s", seed, err)
            aborted.append(seed)
            continue
        _LOGGER.debug(
            "ALS seed %s: residual %.3e after %s sweeps",
            seed,
            run.residual,
            len(run.residuals),
        )
        if best is None or (run.residual, index) < best[:2]:
            best = (run.residual, index, run)
        if run.residual <= cfg.target:
            break
    if best is None:
        raise CertificationError(f"all {cfg.restarts} ALS restarts were aborted")
    _, index, run = best
    _LOGGER.info(
        "Best rank-%s residual %.3e (seed %s)", r, run.residual, cfg.seed + index
    )
    return _finish(t.shape, r, run, cfg.seed + index, aborted)


def divergence_probe(
    t: DenseTensor, r: int, cfg: AlsConfig | None = None
) -> CPDecomposition:
    """A single ALS run without rebalancing, keeping per-sweep traces.

    Below the rank but at the border rank the residual keeps falling while
    the term norms grow without settling.
    """
    _check_rank(r)
    cfg = replace(cfg or AlsConfig(), rebalance=False)
    run = _als_run(t.to_numpy(), r, cfg, cfg.seed)
    return _finish(t.shape, r, run, cfg.seed, [])


@dataclass(frozen=True)
class UpperBoundCheck:
    """Outcome of a numerical search for a rank-r decomposition."""

    rank: int
    threshold: float
    decomposition: CPDecomposition
    note: str = NUMERICAL_NOTE

    @property
    def residual(self) -> float:
        return self.decomposition.residual

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold


def certify_upper(
    t: DenseTensor, r: int, threshold: float, cfg: AlsConfig | None = None
) -> UpperBoundCheck:
    """Pass iff ALS gets below threshold; the best residual is kept either way."""
    cfg = cfg or AlsConfig()
    cfg = replace(cfg, target=max(cfg.target, threshold))
    check = UpperBoundCheck(r, threshold, als_decompose(t, r, cfg))
    _LOGGER.info(
        "Rank <= %s %s: residual %.3e against %.1e (%s)",
        r,
        "passed" if check.passed else "failed",
        check.residual,
        threshold,
        NUMERICAL_NOTE,
    )
    return check


@dataclass(frozen=True)
class DegenerationWitness:
    """(eps, residual) pairs for the rank-2 family converging to W_k."""

    k: int
    points: tuple[tuple[float, float], ...]

    def slope(self) -> float:
        """Least squares slope of log residual against log eps."""
        if len(self.points) < 2:
            raise InvalidParameterError("the slope needs at least two eps values")
        eps, res = zip(*self.points)
        return float(np.polyfit(np.log(eps), np.log(res), 1)[0])


def witness_factors(k: int, eps: float) -> tuple[np.ndarray, ...]:
    """Rank-2 factors of ((e0 + eps e1)^(x)k - e0^(x)k) / eps."""
    if k < 2:
        raise InvalidParameterError(f"k must be >= 2, got {k}")
    if not eps > 0:
        raise InvalidParameterError(f"eps must be > 0, got {eps}")
    shifted = np.array([1.0, eps], dtype=complex)
    base = np.array([1.0, 0.0], dtype=complex)
    first = np.column_stack([shifted / eps, -base / eps])
    rest = np.column_stack([shifted, base])
    return (first,) + tuple(rest.copy() for _ in range(k - 1))


def degeneration_witness(k: int, eps_list: Sequence[float]) -> DegenerationWitness:
    """Relative distance from the rank-2 witness to W_k for each eps."""
    if k < 3:
        raise InvalidParameterError(f"k must be >= 3, got {k}")
    if not eps_list:
        raise InvalidParameterError("eps_list must not be empty")
    target = wstate(k).to_numpy()
    points = []
    for eps in eps_list:
        approx = reconstruct(witness_factors(k, eps), target.shape)
        points.append((float(eps), _relative_residual(target, approx)))
    _LOGGER.debug("Degeneration witness for W_%s: %s", k, points)
    return DegenerationWitness(k, tuple(points))


_COMPLEX_RE = re.compile(r"^\(([^,()]+),([^,()]+)\)$")


def format_complex(z: complex) -> str:
    return f"({z.real:.17g},{z.imag:.17g})"


def parse_complex(text: Any) -> complex:
    if not isinstance(text, str):
        raise vol.Invalid(f"expected a '(re,im)' string, got {text!r}")
    match = _COMPLEX_RE.match(text.strip())
    if match is None:
        raise vol.Invalid(f"expected '(re,im)', got {text!r}")
    try:
        return complex(float(match.group(1)), float(match.group(2)))
    except ValueError as err:
        raise vol.Invalid(f"not a complex pair: {text!r}") from err


DECOMPOSITION_SCHEMA = vol.Schema(
    {
        vol.Required("shape"): vol.All([vol.All(int, vol.Range(min=1))], vol.Length(min=1)),
        vol.Required("rank"): vol.All(int, vol.Range(min=1)),
        vol.Required("seed"): vol.All(int, vol.Range(min=0)),
        vol.Required("residual"): vol.All(vol.Coerce(float), vol.Range(min=0.0)),
        vol.Optional("iterations", default=0): vol.All(int, vol.Range(min=0)),
        vol.Optional("max_column_norm", default=0.0): vol.Coerce(float),
        vol.Optional("note", default=NUMERICAL_NOTE): str,
        vol.Required("factors"): [[[parse_complex]]],
    }
)


def decomposition_document(decomposition: CPDecomposition) -> dict[str, Any]:
    return {
        "shape": list(decomposition.shape),
        "rank": decomposition.rank,
        "seed": decomposition.seed,
        "residual": format(decomposition.residual, ".17g"),
        "iterations": decomposition.iterations,
        "max_column_norm": format(decomposition.max_column_norm, ".17g"),
        "note": NUMERICAL_NOTE,
        "factors": [
            [[format_complex(z) for z in row] for row in factor]
            for factor in decomposition.factors
        ],
    }


def write_decomposition(decomposition: CPDecomposition, path: str | Path) -> None:
    _LOGGER.debug("Writing rank-%s decomposition to %s", decomposition.rank, path)
    Path(path).write_text(
        json.dumps(decomposition_document(decomposition), indent=1) + "\n",
        encoding="utf-8",
    )


def read_decomposition(path: str | Path) -> CPDecomposition:
    _LOGGER.debug("Reading decomposition from %s", path)
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
        data = DECOMPOSITION_SCHEMA(document)
        factors = tuple(np.array(rows, dtype=complex) for rows in data["factors"])
        return CPDecomposition(
            shape=tuple(data["shape"]),
            rank=data["rank"],
            factors=factors,
            residual=data["residual"],
            max_column_norm=data["max_column_norm"],
            iterations=data["iterations"],
            seed=data["seed"],
        )
    except OSError as err:
        raise TensorFormatError(f"cannot read decomposition {path}: {err}") from err
    except UnicodeDecodeError as err:
        raise TensorFormatError(
            f"decomposition {path} is not UTF-8 text: {err}"
        ) from err
    except (ValueError, vol.Invalid) as err:
        raise TensorFormatError(f"malformed decomposition {path}: {err}") from err


def verify_decomposition_file(t: DenseTensor, path: str | Path) -> float:
    """Recompute the residual of a stored decomposition without running ALS."""
    return residual(t, read_decomposition(path))
