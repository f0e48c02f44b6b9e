"""Memristive spiking neural network simulator."""

import json as _json

from ._core import (
    Config,
    ConfigError,
    SimulationFault,
    __version__,
    bridge_weight,
    calibration,
    epochs_to_stability,
    experiments,
    pattern_learning,
    stdp_window,
    switch_rate,
)
from ._core import run_experiment as _run_experiment


def run_experiment(name, out_dir, config=None, plots=False):
    """Run one experiment into out_dir; returns (csv paths, results dict)."""
    files, results = _run_experiment(name, str(out_dir), config if config is not None else Config(), plots)
    return files, _json.loads(results)


__all__ = [
    "Config",
    "ConfigError",
    "SimulationFault",
    "__version__",
    "bridge_weight",
    "calibration",
    "epochs_to_stability",
    "experiments",
    "pattern_learning",
    "run_experiment",
    "stdp_window",
    "switch_rate",
]
