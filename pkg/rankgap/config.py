"""Configuration schemas for rankgap."""

from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

import voluptuous as vol

from .const import (
    CONF_BUDGETS,
    CONF_COLOR,
    CONF_COMMAND,
    CONF_DENSE_ENTRIES,
    CONF_EXPONENT_DIGITS,
    CONF_FORMAT,
    CONF_LINESEARCH,
    CONF_MAX_ITERS,
    CONF_OUTPUT,
    CONF_RANK_CHECK_DIM,
    CONF_REBALANCE,
    CONF_RESTARTS,
    CONF_SEED,
    CONF_STALL_WINDOW,
    CONF_STRUCTURE_DIM,
    CONF_TARGET,
    CONF_TOL,
    DEFAULT_DENSE_ENTRIES,
    DEFAULT_EXPONENT_DIGITS,
    DEFAULT_MAX_ITERS,
    DEFAULT_RANK_CHECK_DIM,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_STALL_WINDOW,
    DEFAULT_STRUCTURE_DIM,
    DEFAULT_TOL,
    ENV_COLOR,
    ENV_NO_COLOR,
    ENV_SIZE_BUDGET,
    FORMAT_TEXT,
    FORMATS,
)

_LOGGER: logging.Logger = logging.getLogger(__package__)

_POSITIVE_INT = vol.All(vol.Coerce(int), vol.Range(min=1))
_NONNEG_INT = vol.All(vol.Coerce(int), vol.Range(min=0))
_NONNEG_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0.0))

ALS_CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_MAX_ITERS, default=DEFAULT_MAX_ITERS): _POSITIVE_INT,
        vol.Optional(CONF_TOL, default=DEFAULT_TOL): _NONNEG_FLOAT,
        vol.Optional(CONF_RESTARTS, default=DEFAULT_RESTARTS): _POSITIVE_INT,
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): _NONNEG_INT,
        vol.Optional(CONF_REBALANCE, default=True): bool,
        vol.Optional(CONF_TARGET, default=0.0): _NONNEG_FLOAT,
        vol.Optional(CONF_STALL_WINDOW, default=DEFAULT_STALL_WINDOW): _POSITIVE_INT,
        vol.Optional(CONF_LINESEARCH, default=False): bool,
    }
)

BUDGET_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_STRUCTURE_DIM, default=DEFAULT_STRUCTURE_DIM): _POSITIVE_INT,
        vol.Optional(CONF_RANK_CHECK_DIM, default=DEFAULT_RANK_CHECK_DIM): _POSITIVE_INT,
        vol.Optional(
            CONF_EXPONENT_DIGITS, default=DEFAULT_EXPONENT_DIGITS
        ): _POSITIVE_INT,
        vol.Optional(CONF_DENSE_ENTRIES, default=DEFAULT_DENSE_ENTRIES): _POSITIVE_INT,
    }
)

RUN_CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_COMMAND): vol.All(str, vol.Length(min=1)),
        vol.Optional(CONF_FORMAT, default=FORMAT_TEXT): vol.In(FORMATS),
        vol.Optional(CONF_OUTPUT, default=None): vol.Any(None, str),
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): _NONNEG_INT,
        vol.Optional(CONF_COLOR, default=False): bool,
        vol.Optional(CONF_BUDGETS, default=dict): BUDGET_SCHEMA,
    },
    extra=vol.ALLOW_EXTRA,
)


@dataclass(frozen=True)
class AlsConfig:
    """Validated settings of an alternating least squares search."""

    max_iters: int = DEFAULT_MAX_ITERS
    tol: float = DEFAULT_TOL
    restarts: int = DEFAULT_RESTARTS
    seed: int = DEFAULT_SEED
    rebalance: bool = True
    target: float = 0.0
    stall_window: int = DEFAULT_STALL_WINDOW
    linesearch: bool = False

    @classmethod
    def from_dict(cls, data: Mapping[str, Any] | None = None) -> AlsConfig:
        """Build from a raw mapping, filling defaults."""
        return cls(**ALS_CONFIG_SCHEMA(dict(data or {})))


@dataclass(frozen=True)
class Budgets:
    """Size guards for dense exact computations."""

    structure_dim: int = DEFAULT_STRUCTURE_DIM
    rank_check_dim: int = DEFAULT_RANK_CHECK_DIM
    exponent_digits: int = DEFAULT_EXPONENT_DIGITS
    dense_entries: int = DEFAULT_DENSE_ENTRIES

    @classmethod
    def from_dict(cls, data: Mapping[str, Any] | None = None) -> Budgets:
        """Build from a raw mapping, filling defaults."""
        return cls(**BUDGET_SCHEMA(dict(data or {})))


def load_budgets(
    overrides: Mapping[str, Any] | None = None,
    environ: Mapping[str, str] | None = None,
) -> Budgets:
    """Resolve budgets from defaults, the environment and explicit overrides."""
    environ = os.environ if environ is None else environ
    data: dict[str, Any] = {}

    env_value = environ.get(ENV_SIZE_BUDGET)
    if env_value:
        _LOGGER.debug("Structure budget from %s: %s", ENV_SIZE_BUDGET, env_value)
        data[CONF_STRUCTURE_DIM] = env_value

    data.update({key: value for key, value in (overrides or {}).items() if value})
    return Budgets.from_dict(data)


def color_enabled(environ: Mapping[str, str] | None = None) -> bool:
    """Return whether colored text output was requested."""
    environ = os.environ if environ is None else environ
    if environ.get(ENV_NO_COLOR):
        return False
    return environ.get(ENV_COLOR, "").lower() in ("1", "true", "yes", "on")


DEFAULT_BUDGETS = Budgets()


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines one CLI run."""

    command: str
    format: str = FORMAT_TEXT
    output: str | None = None
    seed: int = DEFAULT_SEED
    color: bool = False
    budgets: Budgets = field(default_factory=Budgets)
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> RunConfig:
        """Validate a raw mapping and split out subcommand parameters."""
        validated = RUN_CONFIG_SCHEMA(dict(data))
        known = {
            CONF_COMMAND,
            CONF_FORMAT,
            CONF_OUTPUT,
            CONF_SEED,
            CONF_COLOR,
            CONF_BUDGETS,
        }
        return cls(
            command=validated[CONF_COMMAND],
            format=validated[CONF_FORMAT],
            output=validated[CONF_OUTPUT],
            seed=validated[CONF_SEED],
            color=validated[CONF_COLOR],
            budgets=Budgets(**validated[CONF_BUDGETS]),
            params={k: v for k, v in validated.items() if k not in known},
        )
