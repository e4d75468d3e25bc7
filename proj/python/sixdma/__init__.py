# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the sixdma core."""

import json as _json

from ._core import (
    Error,
    dbm_to_watts,
    linear_to_db,
    mmse_weights,
    rotation_matrix,
    sinr,
    steering_vector,
    wave_vector,
)
from . import _core

__all__ = [
    "Error",
    "dbm_to_watts",
    "linear_to_db",
    "layout",
    "mmse_weights",
    "rotation_matrix",
    "selftest",
    "sinr",
    "solve",
    "steering_vector",
    "sweep",
    "wave_vector",
]


def layout(q=4, cell_radius=100.0, bs_height=30.0):
    """BS layout as a list of dicts (index, x, y, z, aq, ar)."""
    return _json.loads(_core.layout_json(q, cell_radius, bs_height))


def solve(scenario=None, solver=None, seed=1):
    """Draws the scenario for `seed` and returns the solve result as a dict."""
    return _json.loads(_core.solve_json(_json.dumps(scenario or {}), _json.dumps(solver or {}), seed))


def sweep(spec):
    """Runs a sweep described by a dict (same keys as the CLI config file); returns the summary."""
    return _json.loads(_core.sweep_json(_json.dumps(spec)))


def selftest(seed=7, trials=6):
    """List of (name, passed, detail)."""
    return _core.selftest(seed, trials)
