"""Smoothed quantile estimators between the empirical quantile and the mean.

Quick start::

    from smoothq import Laplace, Sample, SmoothingParams, estimate, efficiency_report
    s = Laplace().sample(1000, seed=1)
    estimate(s, SmoothingParams(z=0.5, h=1.0))
    efficiency_report(Laplace(), 0.25).h_star
"""

from .errors import DomainError
from .distributions import AsymmetricLaplace, Laplace, Normal
from .estimator import Sample, SmoothingParams, estimate, estimate_path, objective, score
from .asymptotics import (
    INFINITE,
    ZERO,
    EfficiencyCase,
    EfficiencyReport,
    VarianceCoefficients,
    classify,
    coefficients,
    dv_dh,
    efficiency_condition,
    efficiency_report,
    h_star,
    population_minimizer,
    sigma2,
    v,
    z_of_tau,
)
from .simulation import SimulationConfig, SimulationReport, consistency_sweep, run, variance_surface

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "Normal",
    "Laplace",
    "AsymmetricLaplace",
    "Sample",
    "SmoothingParams",
    "objective",
    "score",
    "estimate",
    "estimate_path",
    "population_minimizer",
    "z_of_tau",
    "coefficients",
    "sigma2",
    "v",
    "dv_dh",
    "classify",
    "h_star",
    "efficiency_report",
    "efficiency_condition",
    "EfficiencyCase",
    "EfficiencyReport",
    "VarianceCoefficients",
    "INFINITE",
    "ZERO",
    "SimulationConfig",
    "SimulationReport",
    "run",
    "consistency_sweep",
    "variance_surface",
]
