"""PT-symmetric two-level systems coupled to a truncated bosonic mode.

Submodules
----------
linalg
    Dense complex matrix kernel (Kronecker products, exponentials, roots).
pt
    The PT-symmetric Hamiltonian, its metric and pseudo-adjoints.
dynamics
    System-bath models and the two equivalent reduced-dynamics routes.
measures
    Trace distance, BLP functional, fidelity and concurrence for
    generalized density matrices.
cli
    CSV scenario runner.
"""

from .dynamics import (
    BathSpec,
    CompositeModel,
    Trajectory,
    bosonic_ops,
    build_single_hermitian_model,
    build_single_pt_model,
    build_two_hermitian_model,
    build_two_pt_model,
    evolve_pseudo,
    evolve_rotated,
    improper_rho_trace,
    thermal_state,
    time_grid,
)
from .kernels import BACKEND
from .measures import blp_functional, pseudo_concurrence, pseudo_fidelity, pseudo_trace_distance
from .pt import (
    Metric,
    PTEigensystem,
    PTParams,
    build_metric,
    build_pt_hamiltonian,
    cpt_inner_product,
    elevated_ladder_ops,
    generalized_pauli,
    hermitian_equivalent,
    pseudo_adjoint,
    pseudo_ground_excited,
    pseudo_ladder_ops,
    pt_eigensystem,
)

__version__ = "0.1.0"
