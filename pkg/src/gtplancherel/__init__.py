"""Correlation kernels, limit shapes and scaling limits for Plancherel measures of U(∞)."""

from .combinatorics import Signature, UsageError, Window
from .kernel import KernelSettings, SpacetimePoint, corr_det, kernel_K, kernel_K_delta
from .quadrature import NumericalFailure, QuadratureSettings
from .shape import ProportionalParams, classify_region, q_real_roots
from .weights import PlancherelParams, plancherel_weight

__all__ = [
    "KernelSettings",
    "NumericalFailure",
    "PlancherelParams",
    "ProportionalParams",
    "QuadratureSettings",
    "Signature",
    "SpacetimePoint",
    "UsageError",
    "Window",
    "classify_region",
    "corr_det",
    "kernel_K",
    "kernel_K_delta",
    "plancherel_weight",
    "q_real_roots",
]
