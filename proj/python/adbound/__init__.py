"""Bounds on belief, MPE and MAX-CSP queries by width-limited elimination."""

import json

from ._adbound import (
    ConfigError,
    Error,
    InputError,
    InternalError,
    Model,
    ResourceError,
    ad_bound,
    brute_force,
    conditional_bounds,
    exact,
    mb_bound,
)
from ._adbound import _run_benchmark


def run_benchmark(config_text):
    """Run a benchmark described by key=value text.

    Returns the formatted table and the list of per-trial and aggregate records.
    """
    table, lines = _run_benchmark(config_text)
    return table, [json.loads(line) for line in lines.splitlines() if line]


__all__ = [
    "ConfigError",
    "Error",
    "InputError",
    "InternalError",
    "Model",
    "ResourceError",
    "ad_bound",
    "brute_force",
    "conditional_bounds",
    "exact",
    "mb_bound",
    "run_benchmark",
]
