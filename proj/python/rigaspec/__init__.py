"""Spectra of refined isogeometric discretizations."""

from ._core import (
    BlockLayout,
    BoundaryCondition,
    Operator,
    Quadrature,
    RigaspecError,
    assemble,
    count_branches,
    count_outliers,
    error_budget,
    exact_eigenvalue,
    fea_layout,
    iga_layout,
    optimal_tau,
    outlier_census,
    refined_errors,
    riga_layout,
    run_command,
    solve,
    stopping_bands,
)

__all__ = [
    "BlockLayout",
    "BoundaryCondition",
    "Operator",
    "Quadrature",
    "RigaspecError",
    "assemble",
    "count_branches",
    "count_outliers",
    "error_budget",
    "exact_eigenvalue",
    "fea_layout",
    "iga_layout",
    "optimal_tau",
    "outlier_census",
    "refined_errors",
    "riga_layout",
    "run_command",
    "solve",
    "stopping_bands",
]
