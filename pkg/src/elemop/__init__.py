"""Spectral laboratory for elementary operators ``X -> sum_j A_j X B_j``."""

__version__ = "0.1.0"

from .errors import (
    CapacityError, ConfigError, ConvergenceError, DimensionError, ElemopError,
    PreconditionError,
)
from .spectrum import DEFAULT_TOL, SpectrumSet, Tolerance, hausdorff, multiset_distance
from .linalg import (
    Check, as_cmatrix, commute, eig, herm_eig, is_hermitian, is_normal, is_psd, kron,
    op_norm, unvec, vec,
)
from .elementary import Classification, CoefficientFamily, ElementaryOperator, classify
from .theorems import (
    JointSpectrum, check_inclusion, eigenvalue_membership, fiber_spectrum,
    joint_diagonalize, luders_check, make_intertwined_instance, product_spectrum,
)
