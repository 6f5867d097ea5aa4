"""Entanglement and phase-measurement performance of the damped NOON state."""

from .core import (
    DampedNoonCoefficients,
    DampingParams,
    FockDensityMatrix,
    characteristic_function,
    displacement_matrix_element,
    evolve_coefficients,
    to_matrix,
)
from .measures import (
    SeparableEdgeState,
    UnsupportedCaseError,
    binary_entropy,
    coherent_information,
    distillable_entanglement_dephasing,
    eof_upper_bound,
    extremal_separable_state,
    relative_entropy_of_entanglement,
)

__version__ = "0.1.0"
