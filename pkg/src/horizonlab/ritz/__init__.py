from .hamiltonian import (
    HamiltonianKind, ModelHamiltonian, assembly_charge, build_matrix, q2_matrix,
    separable_spectrum,
)
from .jacobi import Eigensystem, eigensolve
from .study import (
    RitzResult, ConvergenceStudy, ritz_solve, convergence_study,
    variational_upper_bound_check, write_convergence, write_summary,
)
