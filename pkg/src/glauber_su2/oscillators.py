"""Two-mode bosonic models reduced to spin problems on fixed-N subspaces.

Amplifier:  H  = (Omega/2)(A^dag A - B^dag B) + omega A^dag B + omega* B^dag A
Standard:   H' = (Omega/2)(A^dag A + B^dag B) + omega A^dag B + omega* B^dag A

Both conserve N = A^dag A + B^dag B.  On the N-excitation subspace with
basis |n, N-n>, n = N, N-1, ..., 0, the map S+ = A^dag B, S- = B^dag A,
Sz = (A^dag A - B^dag B)/2 turns the amplifier into a spin-N/2 problem
(m = n - N/2); the standard model adds the scalar (N/2) Omega, which only
contributes a global phase per block.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .scenario import LMSZ, Constant, Rabi, Scenario, Tabulated
from .su2 import (
    AmplitudePair,
    LMSZPropagator,
    NumericSolution,
    solve_constant,
    solve_numeric,
    spin_propagator,
)
from .su2 import _rabi_pair

__all__ = [
    "ModelKind",
    "SubspaceState",
    "BlockEvolution",
    "EffectiveParams",
    "TransverseOnly",
    "spin_hamiltonian_params",
    "pair_solver",
    "numeric_pair_solver",
    "amplitude_pair",
    "standard_scenario_pair",
    "block_evolution",
    "evolve",
    "fock_ladders",
    "two_mode_hamiltonian",
    "subspace_lattice_indices",
    "subspace_operator",
    "subspace_hamiltonian",
    "hermite_functions",
    "coordinate_kernel",
    "MAX_KERNEL_N",
]


class ModelKind(enum.Enum):
    AMPLIFIER = "amplifier"
    STANDARD = "standard"

    @classmethod
    def parse(cls, value) -> "ModelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown model {value!r}; expected 'amplifier' or 'standard'") from None


@dataclass(frozen=True)
class SubspaceState:
    """Amplitudes over |n, N-n>, n = N, ..., 0."""

    N: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if self.N < 0:
            raise ValueError("N must be >= 0")
        if amps.shape != (self.N + 1,):
            raise ValueError(f"expected {self.N + 1} amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state is not normalised (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @staticmethod
    def index_of(N: int, n: int) -> int:
        """Position of |n, N-n> in the amplitude vector (m = n - N/2)."""
        if not 0 <= n <= N:
            raise ValueError("need 0 <= n <= N")
        return N - n

    @classmethod
    def basis(cls, N: int, n: int) -> "SubspaceState":
        v = np.zeros(N + 1, dtype=complex)
        v[cls.index_of(N, n)] = 1.0
        return cls(N, v)


@dataclass(frozen=True)
class BlockEvolution:
    """V_N = phase * U_{N/2} on the N-excitation subspace."""

    N: int
    spin_block: np.ndarray
    phase: complex = 1.0 + 0j

    @property
    def matrix(self) -> np.ndarray:
        return self.phase * self.spin_block

    def apply(self, state: SubspaceState) -> SubspaceState:
        if state.N != self.N:
            raise ValueError(f"state lives in N = {state.N}, block is N = {self.N}")
        return SubspaceState(self.N, self.matrix @ state.amplitudes)

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.N + 1))))


@dataclass(frozen=True)
class EffectiveParams:
    """Spin-1/2 parameters plus the per-excitation scalar rate (Omega/2 for Standard)."""

    Omega: float
    omega: complex
    scalar_rate: float = 0.0


def spin_hamiltonian_params(kind: ModelKind, Omega: float, omega: complex) -> EffectiveParams:
    kind = ModelKind.parse(kind)
    if kind is ModelKind.AMPLIFIER:
        return EffectiveParams(float(Omega), complex(omega), 0.0)
    return EffectiveParams(0.0, complex(omega), 0.5 * float(Omega))


class TransverseOnly:
    """View of a scenario with Omega switched off (drives the Standard-model pair)."""

    def __init__(self, base: Scenario):
        self.base = base

    def evaluate(self, t):
        _, w = self.base.evaluate(t)
        return 0.0, w

    def breakpoints(self, t0, t1):
        return self.base.breakpoints(t0, t1)

    @property
    def start_time(self):
        return self.base.start_time


def _end_time(s: Scenario) -> float | None:
    return getattr(s, "end_time", None)


@lru_cache(maxsize=32)
def _numeric_solution(kind: ModelKind, s: Scenario, t0: float, t1: float, tol: float) -> NumericSolution:
    target = s if kind is ModelKind.AMPLIFIER else TransverseOnly(s)
    return solve_numeric(target, t0, t1, tol, method="DOP853")


def numeric_pair_solver(
    kind: ModelKind, s: Scenario, t_end: float | None = None, tol: float = 1e-12
) -> Callable[[float], AmplitudePair]:
    """Pair at time t from direct integration of the (a, b) system."""
    kind = ModelKind.parse(kind)
    t0 = s.start_time
    t1 = t_end if t_end is not None else _end_time(s)
    if t1 is None:
        raise ValueError("t_end is required for scenarios without a natural end")
    sol = _numeric_solution(kind, s, float(t0), float(t1), float(tol))

    def at(t: float) -> AmplitudePair:
        if t == t0:
            return AmplitudePair(1 + 0j, 0j, t)
        return sol(t)

    return at


def pair_solver(kind: ModelKind, s: Scenario, tol: float = 1e-12) -> Callable[[float], AmplitudePair]:
    """Pair at time t, in closed form where one exists.

    Tabulated scenarios fall back to the numeric route over their full grid.
    """
    kind = ModelKind.parse(kind)
    amp = kind is ModelKind.AMPLIFIER
    if isinstance(s, Constant):
        Om = s.Omega0 if amp else 0.0
        return lambda t: solve_constant(Om, s.omega0, t - s.start_time)
    if isinstance(s, Rabi):
        Om = s.Omega0 if amp else 0.0
        return lambda t: _rabi_pair(Om, s.omega0, s.nu0, t)
    if isinstance(s, LMSZ):
        t0 = s.start_time
        if amp:
            prop = LMSZPropagator(s.gamma, s.omega0, s.tau_i)
            root = math.sqrt(s.gamma)
            return lambda t: _retime(prop(root * t), t)
        return lambda t: _retime(solve_constant(0.0, s.omega0, t - t0), t)
    if isinstance(s, Tabulated):
        return numeric_pair_solver(kind, s, s.end_time, tol)
    raise TypeError(f"unsupported scenario {type(s).__name__}")


def _retime(p: AmplitudePair, t: float) -> AmplitudePair:
    return AmplitudePair(p.a, p.b, t)


def amplitude_pair(kind: ModelKind, s: Scenario, t: float) -> AmplitudePair:
    return pair_solver(kind, s)(t)


def standard_scenario_pair(s: Scenario, t: float) -> AmplitudePair:
    """The Omega-independent pair of the Standard model."""
    return pair_solver(ModelKind.STANDARD, s)(t)


def block_evolution(
    kind: ModelKind, s: Scenario, N: int, t: float, pair: AmplitudePair | None = None
) -> BlockEvolution:
    """V_N(t); for Standard it carries exp(-i (N/2) int Omega dt) from the start time."""
    kind = ModelKind.parse(kind)
    if N < 1:
        raise ValueError("N must be >= 1")
    if pair is None:
        pair = amplitude_pair(kind, s, t)
    block = spin_propagator(N / 2, pair).matrix
    phase = 1.0 + 0j
    if kind is ModelKind.STANDARD:
        phase = complex(np.exp(-0.5j * N * s.omega_integral(t)))
    return BlockEvolution(N, block, phase)


def evolve(kind: ModelKind, s: Scenario, state0: SubspaceState, t: float, pair=None) -> SubspaceState:
    return block_evolution(kind, s, state0.N, t, pair).apply(state0)


# ---------------------------------------------------------------------------
# boson operators


@lru_cache(maxsize=16)
def fock_ladders(nmax: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilators (A, B) on the truncated lattice n1, n2 <= nmax.

    Lattice index of |n1, n2> is n1 * (nmax + 1) + n2.
    """
    d = nmax + 1
    low = np.diag(np.sqrt(np.arange(1, d)), k=1)  # single-mode annihilator
    eye = np.eye(d)
    A = np.kron(low, eye)
    B = np.kron(eye, low)
    A.setflags(write=False)
    B.setflags(write=False)
    return A, B


def two_mode_hamiltonian(kind: ModelKind, Omega: float, omega: complex, nmax: int) -> np.ndarray:
    """Model Hamiltonian on the truncated two-mode Fock lattice."""
    kind = ModelKind.parse(kind)
    A, B = fock_ladders(nmax)
    Ad, Bd = A.T, B.T
    sign = -1.0 if kind is ModelKind.AMPLIFIER else 1.0
    return (
        0.5 * Omega * (Ad @ A + sign * (Bd @ B))
        + omega * (Ad @ B)
        + np.conj(omega) * (Bd @ A)
    )


def subspace_lattice_indices(N: int, nmax: int) -> list[int]:
    """Lattice indices of |n, N-n>, n = N, ..., 0."""
    if N > nmax:
        raise ValueError("N exceeds the lattice cutoff")
    return [n * (nmax + 1) + (N - n) for n in range(N, -1, -1)]


_OPERATOR_BUILDERS = {
    "Sz": lambda A, B: 0.5 * (A.T @ A - B.T @ B),
    "a_bdag": lambda A, B: A @ B.T,
    "adag_b": lambda A, B: A.T @ B,
}


def subspace_operator(name: str, N: int) -> np.ndarray:
    """Restriction to the N subspace of Sz, A B^dag, A^dag B or their squares.

    Squares are spelled ``Sz^2``, ``a_bdag^2``, ``adag_b^2``.  Built from the
    ladder operators, so it does not share code with the spin matrices.
    """
    base, _, power = name.partition("^")
    if base not in _OPERATOR_BUILDERS or power not in ("", "2"):
        raise ValueError(f"unknown operator {name!r}")
    A, B = fock_ladders(N)
    op = _OPERATOR_BUILDERS[base](A, B)
    if power == "2":
        op = op @ op
    idx = subspace_lattice_indices(N, N)
    return op[np.ix_(idx, idx)].astype(complex)


def subspace_hamiltonian(kind: ModelKind, N: int, Omega: float, omega: complex) -> np.ndarray:
    idx = subspace_lattice_indices(N, N)
    return two_mode_hamiltonian(kind, Omega, omega, N)[np.ix_(idx, idx)].astype(complex)


# ---------------------------------------------------------------------------
# coordinate representation

MAX_KERNEL_N = 60


def hermite_functions(nmax: int, x, x0: float = 1.0) -> np.ndarray:
    """psi_0..psi_nmax at x, rows indexed by n.

    psi_n(x) = (2^n n! sqrt(pi) x0)^{-1/2} H_n(x/x0) exp(-x^2 / 2 x0^2), via
    psi_{n+1} = sqrt(2/(n+1)) (x/x0) psi_n - sqrt(n/(n+1)) psi_{n-1}.
    """
    if x0 <= 0:
        raise ValueError("x0 must be > 0")
    xi = np.asarray(x, dtype=float) / x0
    out = np.empty((nmax + 1,) + xi.shape)
    out[0] = np.pi**-0.25 / math.sqrt(x0) * np.exp(-0.5 * xi * xi)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(1, nmax):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * xi * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def coordinate_kernel(
    kind: ModelKind,
    s: Scenario,
    N: int,
    t: float,
    x1p: float,
    x2p: float,
    x1: float,
    x2: float,
    x01: float = 1.0,
    x02: float = 1.0,
    block: BlockEvolution | None = None,
) -> complex:
    """<x1', x2'| V_N(t) P_N |x1, x2> for one excitation subspace."""
    if not 0 <= N <= MAX_KERNEL_N:
        raise ValueError(f"N must lie in [0, {MAX_KERNEL_N}]")
    if x01 <= 0 or x02 <= 0:
        raise ValueError("length scales must be > 0")
    if block is None:
        block = block_evolution(kind, s, N, t) if N >= 1 else BlockEvolution(0, np.eye(1, dtype=complex))
    n = np.arange(N, -1, -1)
    f1p = hermite_functions(N, x1p, x01)[n]
    f2p = hermite_functions(N, x2p, x02)[N - n]
    f1 = hermite_functions(N, x1, x01)[n]
    f2 = hermite_functions(N, x2, x02)[N - n]
    left = f1p * f2p
    right = f1 * f2
    return complex(left @ block.matrix @ right)
