"""Spin-1/2 amplitudes (a, b) and the spin-s propagators built from them.

The 2x2 propagator of H = omega S+ + omega* S- + Omega Sz is

    U_1/2 = [[a, b], [-b*, a*]],

with (a, b) solving

    a' = -i (Omega/2) a + i omega b*,
    b' = -i omega a* - i (Omega/2) b,     a(t0) = 1, b(t0) = 0.

Every higher spin propagator is a polynomial in a, a*, b, b*
(``spin_propagator``).
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from .scenario import Scenario
from .specfun import gamma_complex, pcf_d

__all__ = [
    "AmplitudePair",
    "SpinPropagator",
    "NumericSolution",
    "StiffnessError",
    "ParameterError",
    "solve_numeric",
    "solve_constant",
    "solve_rabi",
    "solve_lmsz",
    "LMSZPropagator",
    "spin_propagator",
    "spin_matrices",
    "spin_hamiltonian",
    "two_s_of",
]


class StiffnessError(RuntimeError):
    """The adaptive integrator could not make progress."""


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class AmplitudePair:
    a: complex
    b: complex
    t: float = 0.0

    @property
    def norm_defect(self) -> float:
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0)

    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]], dtype=complex)

    @classmethod
    def from_matrix(cls, u: np.ndarray, t: float = 0.0) -> "AmplitudePair":
        return cls(complex(u[0, 0]), complex(u[0, 1]), t)


# ---------------------------------------------------------------------------
# numeric route


def _rhs(params):
    def f(t, y):
        Om, w = params(t)
        a = complex(y[0], y[1])
        b = complex(y[2], y[3])
        da = -0.5j * Om * a + 1j * w * b.conjugate()
        db = -1j * w * a.conjugate() - 0.5j * Om * b
        return [da.real, da.imag, db.real, db.imag]

    return f


class NumericSolution:
    """Dense-output solution of the (a, b) system, piecewise over smooth segments."""

    def __init__(self, t_start: float, t_end: float, segments, nfev: int):
        self.t_start = t_start
        self.t_end = t_end
        self._segments = segments  # list of (t0, t1, OdeSolution)
        self._starts = [seg[0] for seg in segments]
        self.nfev = nfev

    def _raw(self, t: float) -> np.ndarray:
        if not (self.t_start <= t <= self.t_end):
            raise ValueError(f"t = {t} outside solved interval [{self.t_start}, {self.t_end}]")
        i = max(0, bisect.bisect_right(self._starts, t) - 1)
        return self._segments[i][2](t)

    def __call__(self, t: float) -> AmplitudePair:
        y = self._raw(t)
        return AmplitudePair(complex(y[0], y[1]), complex(y[2], y[3]), float(t))

    def sample(self, times) -> tuple[np.ndarray, np.ndarray]:
        """Arrays (a, b) on the given times."""
        ys = np.array([self._raw(float(t)) for t in np.atleast_1d(times)])
        return ys[:, 0] + 1j * ys[:, 1], ys[:, 2] + 1j * ys[:, 3]

    def max_norm_defect(self, times) -> float:
        a, b = self.sample(times)
        return float(np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1.0)))


def solve_numeric(
    s: Scenario,
    t_start: float,
    t_end: float,
    tol: float = 1e-12,
    *,
    method: str = "RK45",
) -> NumericSolution:
    """Integrate the (a, b) system with an embedded adaptive Runge-Kutta pair.

    ``s`` only needs ``evaluate(t) -> (Omega, omega)``; an optional
    ``breakpoints(t0, t1)`` splits the integration where the parameters have
    kinks.  The norm |a|^2 + |b|^2 is not enforced.
    """
    if not t_end > t_start:
        raise ValueError("t_end must exceed t_start")
    if not 1e-13 <= tol <= 1e-4:
        raise ValueError("tol must lie in [1e-13, 1e-4]")
    knots = [t_start]
    if hasattr(s, "breakpoints"):
        knots += list(s.breakpoints(t_start, t_end))
    knots.append(t_end)
    f = _rhs(s.evaluate)
    y = np.array([1.0, 0.0, 0.0, 0.0])
    segments = []
    nfev = 0
    for t0, t1 in zip(knots, knots[1:]):
        sol = solve_ivp(f, (t0, t1), y, method=method, rtol=tol, atol=tol, dense_output=True)
        if sol.status != 0:
            raise StiffnessError(f"integration failed on [{t0}, {t1}]: {sol.message}")
        nfev += sol.nfev
        segments.append((t0, t1, sol.sol))
        y = sol.y[:, -1]
    return NumericSolution(t_start, t_end, segments, nfev)


# ---------------------------------------------------------------------------
# closed forms


def _sinc_t(mu: float, t: float) -> float:
    """sin(mu t) / mu, continuous at mu = 0."""
    x = mu * t
    if abs(x) < 1e-8:
        return t * (1.0 - x * x / 6.0)
    return math.sin(x) / mu


def solve_constant(Omega0: float, omega0: complex, t: float) -> AmplitudePair:
    """Time-independent parameters, elapsed time t.

    a = cos(nu t) - i (Omega0 / 2 nu) sin(nu t),  b = -i (omega0 / nu) sin(nu t),
    nu = sqrt(Omega0^2/4 + |omega0|^2).
    """
    nu = math.sqrt(0.25 * Omega0 * Omega0 + abs(omega0) ** 2)
    st = _sinc_t(nu, t)
    a = complex(math.cos(nu * t), -0.5 * Omega0 * st)
    b = -1j * omega0 * st
    return AmplitudePair(a, b, t)


def solve_rabi(Omega0: float, omega0: float, t: float, nu0: float | None = None) -> AmplitudePair:
    """Exact solution for omega(t) = omega0 exp(-i nu0 t) at constant Omega0.

    In the frame rotating with the drive the problem has constant parameters
    with detuning Omega0 - nu0.  ``nu0`` defaults to the resonance
    nu0 = Omega0, where a = cos(k tau') e^{-i tau'/2},
    b = -i sin(k tau') e^{-i tau'/2} with tau' = nu0 t and k = omega0/Omega0.
    """
    if Omega0 == 0:
        raise ParameterError("Omega0 must be nonzero (k = omega0/Omega0 undefined)")
    if nu0 is None:
        nu0 = Omega0
    return _rabi_pair(Omega0, omega0, nu0, t)


def _rabi_pair(Omega0: float, omega0: float, nu0: float, t: float) -> AmplitudePair:
    rot = solve_constant(Omega0 - nu0, omega0, t)
    phase = cmath.exp(-0.5j * nu0 * t)
    return AmplitudePair(rot.a * phase, rot.b * phase, t)


class LMSZPropagator:
    """Closed-form (a, b) for the linear sweep on a finite window.

    With tau = sqrt(gamma) t and g^2 = omega0^2 / gamma = chi / 2, the first
    column (a, -b*) obeys a Weber equation.  For c = e^{-i pi/4} and
    nu = -1 + i g^2, starting from (1, 0) at tau_i:

      a(tau) = G [D_{nu+1}(-c tau_i) D_nu(c tau) + D_{nu+1}(c tau_i) D_nu(-c tau)]
      b(tau) = conj( (i c / g) G [D_{nu+1}(-c tau_i) D_{nu+1}(c tau)
                                  - D_{nu+1}(c tau_i) D_{nu+1}(-c tau)] )

    where G = Gamma(1 - i g^2) / sqrt(2 pi).
    """

    def __init__(self, gamma: float, omega0: float, tau_i: float):
        if not gamma > 0:
            raise ParameterError("gamma must be > 0")
        if omega0 < 0:
            raise ParameterError("omega0 must be >= 0")
        self.gamma = gamma
        self.omega0 = omega0
        self.tau_i = tau_i
        self.g2 = omega0 * omega0 / gamma
        self.chi = 2.0 * self.g2
        if self.g2 > 0:
            c = cmath.exp(-0.25j * math.pi)
            self._c = c
            self._nu = -1.0 + 1j * self.g2
            self._G = gamma_complex(1.0 - 1j * self.g2) / math.sqrt(2.0 * math.pi)
            self._p = pcf_d(self._nu + 1.0, -c * tau_i)
            self._q = pcf_d(self._nu + 1.0, c * tau_i)

    def __call__(self, tau: float) -> AmplitudePair:
        if tau < self.tau_i:
            raise ParameterError("tau must not precede tau_i")
        t = tau / math.sqrt(self.gamma)
        if self.g2 == 0:
            return AmplitudePair(cmath.exp(-0.25j * (tau * tau - self.tau_i**2)), 0j, t)
        if tau == self.tau_i:
            return AmplitudePair(1 + 0j, 0j, t)
        c, nu = self._c, self._nu
        zp, zm = c * tau, -c * tau
        a = self._G * (self._p * pcf_d(nu, zp) + self._q * pcf_d(nu, zm))
        v = (-1j * c / math.sqrt(self.g2)) * self._G * (
            self._p * pcf_d(nu + 1.0, zp) - self._q * pcf_d(nu + 1.0, zm)
        )
        return AmplitudePair(a, -v.conjugate(), t)


def solve_lmsz(gamma: float, omega0: float, tau_i: float, tau: float) -> AmplitudePair:
    """(a, b) at dimensionless time tau for a sweep started at tau_i."""
    return LMSZPropagator(gamma, omega0, tau_i)(tau)


# ---------------------------------------------------------------------------
# spin-s group elements


def two_s_of(s) -> int:
    """2s as an int, for s given as int, float, or Fraction."""
    two_s = round(2 * float(s))
    if two_s < 0 or abs(2 * float(s) - two_s) > 1e-12:
        raise ValueError(f"s = {s} is not a nonnegative half-integer")
    return two_s


@lru_cache(maxsize=None)
def _group_terms(two_s: int):
    """Coefficient table: for each (row, col) a list of (C, pa, pa*, pb, pb*)."""
    exact = two_s <= 20
    table = []
    for i in range(two_s + 1):
        for j in range(two_s + 1):
            # s + m = two_s - i, s - m = i (likewise for m' and j)
            spm, smm = two_s - i, i
            spm_, smm_ = two_s - j, j
            mu_lo = max(0, i - j)  # m' - m = i - j
            mu_hi = min(spm_, smm)
            terms = []
            for mu in range(mu_lo, mu_hi + 1):
                pa = spm_ - mu
                pac = smm - mu
                pb = j - i + mu  # m - m' + mu
                pbc = mu
                assert min(pa, pac, pb, pbc) >= 0
                sign = -1.0 if mu % 2 else 1.0
                if exact:
                    num = (
                        math.factorial(spm) * math.factorial(smm)
                        * math.factorial(spm_) * math.factorial(smm_)
                    )
                    den = (
                        math.factorial(mu) * math.factorial(pa)
                        * math.factorial(pac) * math.factorial(pb)
                    )
                    coeff = sign * math.sqrt(Fraction(num, den * den))
                else:
                    lg = math.lgamma
                    log_c = 0.5 * (lg(spm + 1) + lg(smm + 1) + lg(spm_ + 1) + lg(smm_ + 1)) - (
                        lg(mu + 1) + lg(pa + 1) + lg(pac + 1) + lg(pb + 1)
                    )
                    coeff = sign * math.exp(log_c)
                terms.append((coeff, pa, pac, pb, pbc))
            table.append((i, j, terms))
    return table


@dataclass(frozen=True)
class SpinPropagator:
    """(2s+1)x(2s+1) propagator in the basis m = s, s-1, ..., -s."""

    two_s: int
    matrix: np.ndarray

    @property
    def s(self) -> Fraction:
        return Fraction(self.two_s, 2)

    def unitarity_defect(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def spin_propagator(s, p: AmplitudePair) -> SpinPropagator:
    """Build U_s from the spin-1/2 amplitudes.

    U^{m,m'} = sum_mu C a^{s+m'-mu} (a*)^{s-m-mu} b^{m-m'+mu} (b*)^mu, with mu
    running over max(0, m'-m) <= mu <= min(s+m', s-m).
    """
    two_s = two_s_of(s)
    a, b = complex(p.a), complex(p.b)
    n = two_s + 1
    pow_a = [a**k for k in range(n)]
    pow_ac = [x.conjugate() for x in pow_a]
    pow_b = [b**k for k in range(n)]
    pow_bc = [x.conjugate() for x in pow_b]
    u = np.zeros((n, n), dtype=complex)
    for i, j, terms in _group_terms(two_s):
        acc = 0j
        for coeff, pa, pac, pb, pbc in terms:
            acc += coeff * pow_a[pa] * pow_ac[pac] * pow_b[pb] * pow_bc[pbc]
        u[i, j] = acc
    return SpinPropagator(two_s, u)


def spin_matrices(s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Sz, S+, S-) in the basis m = s, ..., -s."""
    two_s = two_s_of(s)
    sv = two_s / 2.0
    m = sv - np.arange(two_s + 1)
    sz = np.diag(m).astype(complex)
    sp = np.zeros((two_s + 1, two_s + 1), dtype=complex)
    for i in range(1, two_s + 1):
        # <m+1|S+|m>, with m = m[i] and m+1 = m[i-1]
        sp[i - 1, i] = math.sqrt(sv * (sv + 1) - m[i] * (m[i] + 1))
    return sz, sp, sp.conj().T


def spin_hamiltonian(s, Omega: float, omega: complex) -> np.ndarray:
    """omega S+ + omega* S- + Omega Sz."""
    sz, sp, sm = spin_matrices(s)
    return omega * sp + np.conj(omega) * sm + Omega * sz
