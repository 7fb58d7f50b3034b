"""Registry of stability estimates and tools to test them numerically."""

from .registry import COVERAGE, OUT_OF_SCOPE, REGISTRY, EstimateSpec, get, self_test
from .engine import (
    DataItem, SweepResult, evaluate_estimate, evaluate_terms, fit_exponent,
    golden_sweep, golden_value, mode_datum, ray_grid, source_datum, sweep,
)

__all__ = [
    "COVERAGE", "OUT_OF_SCOPE", "REGISTRY", "EstimateSpec", "get", "self_test",
    "DataItem", "SweepResult", "evaluate_estimate", "evaluate_terms", "fit_exponent",
    "golden_sweep", "golden_value", "mode_datum", "ray_grid", "source_datum", "sweep",
]
from .probes import bootstrap_sequence, obstruction_probe, sharpness_probe  # noqa: E402

__all__ += ["bootstrap_sequence", "obstruction_probe", "sharpness_probe"]
