"""Quadrature error estimates for layer potentials on spherical-topology surfaces."""

from ._layerr import (
    ConfigError,
    ErrorEstimator,
    LayerrError,
    PotentialEvaluator,
    Surface,
    axisym_phi_root,
    circle_root,
    est_gl,
    est_tz,
    preset_config,
    preset_names,
    rule,
    run_config,
    sphere_simplified,
    sphere_theta_root,
)

__all__ = [
    "ConfigError",
    "ErrorEstimator",
    "LayerrError",
    "PotentialEvaluator",
    "Surface",
    "axisym_phi_root",
    "circle_root",
    "est_gl",
    "est_tz",
    "preset_config",
    "preset_names",
    "rule",
    "run_config",
    "sphere_simplified",
    "sphere_theta_root",
]
