"""Global fixtures for rankgap tests."""

import pytest

from rankgap.config import AlsConfig, Budgets
from rankgap.tensor import DenseTensor, kron_power, unit_tensor, wstate

from .const import SEARCH_ALS_CONFIG


@pytest.fixture
def w3():
    """The order-3 W-state."""
    return wstate(3)


@pytest.fixture
def w3_squared():
    """W_3 (x) W_3, shape 4x4x4."""
    return kron_power(wstate(3), 2)


@pytest.fixture
def rank_one():
    """e0 (x) e0 (x) e0 in (C^2)^3."""
    return unit_tensor((2, 2, 2), (0, 0, 0))


@pytest.fixture
def small_matrix_tensor():
    """A 2x3 order-2 tensor with rational entries."""
    return DenseTensor.from_entries((2, 3), [1, "1/2", 0, 0, 3, "-2/3"])


@pytest.fixture
def als_config():
    """ALS settings of the full-length searches."""
    return AlsConfig.from_dict(SEARCH_ALS_CONFIG)


@pytest.fixture
def tight_budgets():
    """Budgets that refuse anything above dimension 8."""
    return Budgets(structure_dim=8, rank_check_dim=8, exponent_digits=10)


@pytest.fixture(autouse=True)
def no_size_budget_env(monkeypatch):
    """Remove environment overrides so every run uses the defaults."""
    monkeypatch.delenv("RANKGAP_SIZE_BUDGET", raising=False)
    monkeypatch.delenv("RANKGAP_COLOR", raising=False)
    monkeypatch.delenv("NO_COLOR", raising=False)
