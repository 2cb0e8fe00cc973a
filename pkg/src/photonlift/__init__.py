"""Fock-state evolution through lossless linear-optical multiports.

An m x m scattering matrix S is lifted to the unitary it induces on the
n-photon Fock space via matrix permanents.  The package also classifies
which (m, n) admit every Fock-space unitary and searches numerically for the
closest reachable states and operators when they do not.
"""

from .circuit import (
    BeamSplitter,
    Circuit,
    PhaseShifter,
    beam_splitter,
    compose,
    haar_random_unitary,
    phase_shifter,
    reck_decompose,
)
from .errors import CapacityError, ConvergenceError, ShapeError, ValidationError
from .fock import FockBasis, StateVector, coherent_amplitudes, dimension, enumerate_basis
from .lift import (
    LiftedUnitary,
    evolve_via_operators,
    lift,
    lifted_from_order,
    output_distribution,
    transition_amplitude,
)
from .permanent import naive_permanent, permanent, repeat_submatrix, ryser_permanent
from .universality import (
    OptimizerConfig,
    SearchResult,
    UniversalityClass,
    UniversalityTag,
    classify,
    closest_lifted_unitary,
    max_state_overlap,
    necessary_condition,
)

__all__ = [
    "BeamSplitter",
    "CapacityError",
    "Circuit",
    "ConvergenceError",
    "FockBasis",
    "LiftedUnitary",
    "OptimizerConfig",
    "PhaseShifter",
    "SearchResult",
    "ShapeError",
    "StateVector",
    "UniversalityClass",
    "UniversalityTag",
    "ValidationError",
    "beam_splitter",
    "classify",
    "closest_lifted_unitary",
    "coherent_amplitudes",
    "compose",
    "dimension",
    "enumerate_basis",
    "evolve_via_operators",
    "haar_random_unitary",
    "lift",
    "lifted_from_order",
    "naive_permanent",
    "necessary_condition",
    "output_distribution",
    "permanent",
    "phase_shifter",
    "reck_decompose",
    "repeat_submatrix",
    "ryser_permanent",
    "transition_amplitude",
]
