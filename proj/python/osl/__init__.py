"""Python access to the odor source localization simulator."""

import json

from ._core import (
    ConfigError,
    canonical_config,
    config_hash,
    default_config,
    diffusion_ratio,
    encounter_rate,
    max_step,
    movement_energy,
    payload_values,
    variants,
)
from . import _core


def _overrides(values):
    return {str(k): str(v) for k, v in (values or {}).items()}


def run(config="", seed=None, **overrides):
    """Run one episode. Keyword arguments override configuration keys."""
    return _core.run(config, _overrides(overrides), seed)


def monte_carlo(config="", runs=200, seed=None, workers=1, **overrides):
    """Run a seeded batch and return the summary as a dict."""
    text = _core.monte_carlo(config, _overrides(overrides), runs, seed, workers)
    return json.loads(text)


__all__ = [
    "ConfigError",
    "canonical_config",
    "config_hash",
    "default_config",
    "diffusion_ratio",
    "encounter_rate",
    "max_step",
    "monte_carlo",
    "movement_energy",
    "payload_values",
    "run",
    "variants",
]
