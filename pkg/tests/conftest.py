"""Shared fixtures: scaled-down scenarios keep the unit suite fast."""

import pytest

from macaoi.presets import make_baseline_config


@pytest.fixture
def small_config():
    """Factory for the baseline physics at unit-test horizons."""

    def make(horizon=20_000, warmup=2_000, **overrides):
        return make_baseline_config(horizon=horizon, warmup=warmup, **overrides)

    return make
