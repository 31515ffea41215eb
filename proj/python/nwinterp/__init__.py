"""Interpolating Nadaraya-Watson estimator with singular kernels."""

from ._core import (
    Interpolator,
    Kernel,
    NwinterpError,
    bandwidth_for_rate,
    fit_power_law,
    sample_scenario,
    true_regression,
    __version__,
)

__all__ = [
    "Interpolator",
    "Kernel",
    "NwinterpError",
    "bandwidth_for_rate",
    "fit_power_law",
    "sample_scenario",
    "true_regression",
    "__version__",
]
