"""Clad geometry and quality benchmarks (python front end to the C++ core)."""

from ._cladbench import (
    CladError,
    Model,
    accuracy,
    complexity,
    compute_dilution,
    confusion_matrix,
    feature_matrix,
    kinds,
    linear_mass_density,
    load_dataset,
    mae,
    r2_score,
    random_search,
    roc_auc,
    synthesize,
    volumetric_energy_density,
)

__all__ = [
    "CladError",
    "Model",
    "accuracy",
    "complexity",
    "compute_dilution",
    "confusion_matrix",
    "feature_matrix",
    "kinds",
    "linear_mass_density",
    "load_dataset",
    "mae",
    "r2_score",
    "random_search",
    "roc_auc",
    "synthesize",
    "volumetric_energy_density",
]
__version__ = "0.1.0"
