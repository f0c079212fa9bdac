"""Finite-difference simulator for parabolic-elliptic chemotaxis with a
nonlocal logistic reaction, plus the bracketing-ODE verification harness."""

from .comparison import (
    ComparisonState,
    Equilibrium,
    comparison_rhs,
    equilibrium,
    estimate_rate,
    integrate_comparison,
    make_initial,
)
from .dynamics import (
    BlowUp,
    Completed,
    NumericalControls,
    Params,
    RunRecord,
    SimState,
    SolverFailed,
    run_simulation,
)
from .elliptic import DiffusionSolver, HelmholtzSolver, SolverFailure, chemoattractant
from .grid import Field, Grid, laplacian_neumann, lk_norm, make_grid, mean_integral
from .reaction import ReactionParams, nonlocal_factor, reaction_term
from .regimes import RegimeReport, classify, sweep

__all__ = [
    "BlowUp", "Completed", "ComparisonState", "DiffusionSolver", "Equilibrium",
    "Field", "Grid", "HelmholtzSolver", "NumericalControls", "Params",
    "ReactionParams", "RegimeReport", "RunRecord", "SimState", "SolverFailed",
    "SolverFailure", "chemoattractant", "classify", "comparison_rhs",
    "equilibrium", "estimate_rate", "integrate_comparison", "laplacian_neumann",
    "lk_norm", "make_grid", "make_initial", "mean_integral", "nonlocal_factor",
    "reaction_term", "run_simulation", "sweep",
]
