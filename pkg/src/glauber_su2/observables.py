"""Expectation values, energy traces and transition probabilities.

Everything here goes through the dense matrix pathway: operators are
assembled from boson ladder actions on the N-excitation subspace, states are
evolved with the block propagator, and the result is a plain contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .oscillators import (
    ModelKind,
    SubspaceState,
    block_evolution,
    pair_solver,
    subspace_hamiltonian,
    subspace_operator,
)
from .scenario import Scenario

__all__ = [
    "NoonSpec",
    "ObservableTrace",
    "OPERATORS",
    "noon_state",
    "uniform_state",
    "operator_matrix",
    "expectation",
    "expectation_trace",
    "energy_trace",
    "transition_probability",
    "transition_trace",
]

OPERATORS = ("Sz", "a_bdag", "adag_b", "Sz^2", "a_bdag^2", "adag_b^2", "H")


@dataclass(frozen=True)
class NoonSpec:
    """cos(theta)|N,0> + e^{i phi} sin(theta)|0,N>."""

    N: int
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")


def noon_state(spec: NoonSpec) -> SubspaceState:
    N = spec.N
    v = np.zeros(N + 1, dtype=complex)
    v[SubspaceState.index_of(N, N)] += math.cos(spec.theta)
    v[SubspaceState.index_of(N, 0)] += np.exp(1j * spec.phi) * math.sin(spec.theta)
    return SubspaceState(N, v)


def uniform_state(N: int) -> SubspaceState:
    """Equal-weight superposition of all |n, N-n>."""
    return SubspaceState(N, np.full(N + 1, 1.0 / math.sqrt(N + 1), dtype=complex))


@dataclass(frozen=True)
class ObservableTrace:
    label: str
    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values)
        if t.ndim != 1 or v.shape != t.shape:
            raise ValueError("times and values must be 1-D arrays of equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def samples(self) -> list[tuple[float, complex]]:
        return list(zip(self.times.tolist(), self.values.tolist()))

    def __len__(self):
        return self.times.size


def operator_matrix(op: str, N: int, kind: ModelKind | None = None, params=None) -> np.ndarray:
    """Matrix of ``op`` on the N subspace; ``H`` needs ``kind`` and (Omega, omega)."""
    if op == "H":
        if kind is None or params is None:
            raise ValueError("operator 'H' needs the model kind and (Omega, omega)")
        return subspace_hamiltonian(kind, N, *params)
    if op not in OPERATORS:
        raise ValueError(f"unknown operator {op!r}; expected one of {OPERATORS}")
    return subspace_operator(op, N)


def _expect(m: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.vdot(v, m @ v))


def expectation(kind: ModelKind, s: Scenario, state0: SubspaceState, op: str, t: float, pair=None) -> complex:
    """<psi(t)| op |psi(t)> with psi(t) = V_N(t) psi(0).

    ``H`` is the instantaneous Hamiltonian H(t) of the chosen model.
    """
    kind = ModelKind.parse(kind)
    if op not in OPERATORS:
        raise ValueError(f"unknown operator {op!r}; expected one of {OPERATORS}")
    v = block_evolution(kind, s, state0.N, t, pair).apply(state0).amplitudes
    params = s.evaluate(t) if op == "H" else None
    return _expect(operator_matrix(op, state0.N, kind, params), v)


def expectation_trace(
    kind: ModelKind, s: Scenario, state0: SubspaceState, op: str, grid, label: str | None = None
) -> ObservableTrace:
    kind = ModelKind.parse(kind)
    if op not in OPERATORS:
        raise ValueError(f"unknown operator {op!r}; expected one of {OPERATORS}")
    times = np.asarray(grid, dtype=float)
    if times.size == 0:
        raise ValueError("empty time grid")
    solver = pair_solver(kind, s)
    static = None if op == "H" else operator_matrix(op, state0.N)
    vals = np.empty(times.size, dtype=complex)
    for i, t in enumerate(times):
        v = block_evolution(kind, s, state0.N, t, solver(t)).apply(state0).amplitudes
        m = static if static is not None else operator_matrix("H", state0.N, kind, s.evaluate(t))
        vals[i] = _expect(m, v)
    return ObservableTrace(label or f"<{op}>", times, vals, {"model": kind.value})


def energy_trace(kind: ModelKind, s: Scenario, spec: NoonSpec | SubspaceState, grid) -> ObservableTrace:
    """Real mean energy <H(t)> along the grid for a NOON (or any subspace) initial state."""
    state0 = noon_state(spec) if isinstance(spec, NoonSpec) else spec
    tr = expectation_trace(kind, s, state0, "H", grid, label="E")
    return ObservableTrace(tr.label, tr.times, tr.values.real.copy(), tr.meta)


def transition_probability(kind: ModelKind, s: Scenario, N: int, t: float, pair=None) -> float:
    """|<0,N| V_N(t) |N,0>|^2."""
    V = block_evolution(kind, s, N, t, pair).matrix
    return float(abs(V[SubspaceState.index_of(N, 0), SubspaceState.index_of(N, N)]) ** 2)


def transition_trace(kind: ModelKind, s: Scenario, N: int, grid) -> ObservableTrace:
    kind = ModelKind.parse(kind)
    times = np.asarray(grid, dtype=float)
    solver = pair_solver(kind, s)
    vals = np.array([transition_probability(kind, s, N, t, solver(t)) for t in times])
    return ObservableTrace("P", times, vals, {"model": kind.value, "N": N})
