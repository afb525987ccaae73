# SPDX-License-Identifier: Apache-2.0
"""Transmit beamforming for integrated sensing and wireless power transfer."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DimensionError,
    Error,
    NotPsdError,
    RecoveryError,
    SolverError,
    hermitian_sqrt,
    mrt_recover,
    project_psd,
    psd_factor,
    qr,
    rank1_reconstruct,
    steering_vector,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "Error",
    "NotPsdError",
    "RecoveryError",
    "SolverError",
    "beampattern",
    "channels",
    "default_config",
    "design",
    "hermitian_sqrt",
    "mrt_recover",
    "objective",
    "power_targets",
    "project_psd",
    "psd_factor",
    "qr",
    "rank1_reconstruct",
    "steering_vector",
]


def _config_text(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def default_config():
    """Default scenario as a dict."""
    return _json.loads(_core.default_config())


def channels(config=None):
    return _core.channels(_config_text(config))


def power_targets(config=None):
    """Per-user power targets P* (W), the maximizing covariance and the solver report."""
    return _core.power_targets(_config_text(config))


def design(config=None, method="optimal", rho=0.5):
    """Run one design; returns a dict with R, W, metrics, solver report and targets."""
    return _core.design(_config_text(config), method, rho)


def beampattern(R, config=None):
    """Angles (deg) and a^H R a over the scenario grid."""
    return _core.beampattern(R, _config_text(config))


def objective(R, rho, config, targets):
    return _core.objective(R, rho, _config_text(config), targets)
