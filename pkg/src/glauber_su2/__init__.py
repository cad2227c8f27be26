"""Exact time evolution of an oscillator coupled to a Glauber amplifier.

Each fixed-excitation subspace of the two-mode models maps onto a spin-N/2
problem; the spin-1/2 amplitudes (a, b) determine every block propagator.
"""

__version__ = "0.1.0"

from .scenario import LMSZ, Constant, Rabi, Scenario, Tabulated, scenario_from_dict
from .su2 import AmplitudePair, SpinPropagator, solve_constant, solve_lmsz, solve_numeric, solve_rabi, spin_propagator
from .oscillators import ModelKind, SubspaceState, block_evolution
from .observables import NoonSpec, energy_trace, expectation, noon_state, transition_probability

__all__ = [
    "__version__",
    "Scenario", "Constant", "Rabi", "LMSZ", "Tabulated", "scenario_from_dict",
    "AmplitudePair", "SpinPropagator", "solve_numeric", "solve_constant", "solve_rabi", "solve_lmsz",
    "spin_propagator", "ModelKind", "SubspaceState", "block_evolution",
    "NoonSpec", "noon_state", "expectation", "energy_trace", "transition_probability",
]
