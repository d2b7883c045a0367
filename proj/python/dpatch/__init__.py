"""Patch dynamics with a double patch for the modified Burgers equation."""

from ._core import (
    ConfigError,
    ConvergenceReport,
    DomainError,
    ErrorReport,
    FineGridSolution,
    Layout,
    MacroTrajectory,
    NumericalError,
    Problem,
    QuadratureOracle,
    TrustedSolution,
    archetype,
    archetype_layout,
    archetypes,
    brute_force_solve,
    convergence_study,
    default_dt,
    max_error,
    run_cli,
    simulate,
    smooth_convergence_problem,
    uniform_layout,
)

__all__ = [
    "ConfigError",
    "ConvergenceReport",
    "DomainError",
    "ErrorReport",
    "FineGridSolution",
    "Layout",
    "MacroTrajectory",
    "NumericalError",
    "Problem",
    "QuadratureOracle",
    "TrustedSolution",
    "archetype",
    "archetype_layout",
    "archetypes",
    "brute_force_solve",
    "convergence_study",
    "default_dt",
    "max_error",
    "run_cli",
    "simulate",
    "smooth_convergence_problem",
    "uniform_layout",
]
