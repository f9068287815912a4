"""Python bindings for the mcvqc multi-chip VQC simulator."""

import json as _json

from ._mcvqc import (
    Circuit,
    Error,
    entangling_capability,
    expectation,
    fold_global,
    gradient,
    gradient_variance,
    hardware_efficient_chip,
    meyer_wallach,
    mitigated_expectation,
    qcnn_chip,
    qcnn_param_count,
    state,
    zne_estimate,
)
from . import _mcvqc

__all__ = [
    "Circuit",
    "Error",
    "entangling_capability",
    "expectation",
    "fold_global",
    "gradient",
    "gradient_variance",
    "hardware_efficient_chip",
    "inspect",
    "meyer_wallach",
    "mitigated_expectation",
    "predict",
    "qcnn_chip",
    "qcnn_param_count",
    "state",
    "train",
    "zne_estimate",
]


def train(config):
    """Train from a config dict (same schema as the CLI JSON). Returns the run summary."""
    return _json.loads(_mcvqc._train(_json.dumps(config)))


def inspect(checkpoint_path):
    """Load a checkpoint and return its contents as a dict."""
    return _json.loads(_mcvqc._inspect(str(checkpoint_path)))


def predict(checkpoint_path, x):
    """Restore a model from a checkpoint and run one ideal forward pass."""
    return _mcvqc._predict(str(checkpoint_path), list(x))
