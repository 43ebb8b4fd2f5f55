from ._minmix import (
    TensorGrid,
    dof_counts,
    ellipticity_constant,
    infsup_constant,
    run_study,
    run_verification,
    solve_problem,
    system_matrices,
)

__all__ = [
    "TensorGrid",
    "dof_counts",
    "ellipticity_constant",
    "infsup_constant",
    "run_study",
    "run_verification",
    "solve_problem",
    "system_matrices",
]
