"""Time dependence of the longitudinal parameter Omega(t) and the coupling omega(t).

Units have hbar = 1, so energies and angular frequencies share units.  Each
scenario also knows its own start time (where the evolution is initialised
with a = 1, b = 0) and the closed-form integral of Omega from that start.
"""

from __future__ import annotations

import math
from dataclasses import MISSING, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

__all__ = [
    "Scenario",
    "Constant",
    "Rabi",
    "LMSZ",
    "Tabulated",
    "ScenarioError",
    "UnsupportedVariantError",
    "evaluate",
    "dimensionless_time",
    "scenario_from_dict",
]


class ScenarioError(ValueError):
    """Invalid scenario parameters or an out-of-range evaluation.

    ``problems`` holds (field, message) pairs when raised from validation.
    """

    def __init__(self, message: str, problems: Sequence[tuple[str, str]] = ()):
        super().__init__(message)
        self.problems = list(problems)


class UnsupportedVariantError(TypeError):
    pass


def _finite(name: str, value: float, problems: list) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        problems.append((name, f"must be a finite real number, got {value!r}"))


class Scenario:
    """Base class; concrete variants are frozen dataclasses."""

    kind: str = ""

    def __post_init__(self) -> None:
        problems = self.problems()
        if problems:
            text = "; ".join(f"{k}: {m}" for k, m in problems)
            raise ScenarioError(f"invalid {type(self).__name__} scenario: {text}", problems)

    def problems(self) -> list[tuple[str, str]]:
        return []

    def evaluate(self, t: float) -> tuple[float, complex]:
        raise NotImplementedError

    @property
    def start_time(self) -> float:
        return 0.0

    def omega_integral(self, t: float) -> float:
        """Integral of Omega(t') from the start time to t."""
        raise NotImplementedError

    def dimensionless_time(self, t: float) -> float:
        raise UnsupportedVariantError(f"{type(self).__name__} has no dimensionless time")

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        """Interior points where the parameters are not smooth."""
        return []

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Scenario):
    Omega0: float
    omega0: float
    kind = "constant"

    def problems(self):
        out: list[tuple[str, str]] = []
        _finite("Omega0", self.Omega0, out)
        _finite("omega0", self.omega0, out)
        if not out and self.omega0 < 0:
            out.append(("omega0", "must be >= 0"))
        return out

    def evaluate(self, t):
        return float(self.Omega0), complex(self.omega0)

    def omega_integral(self, t):
        return self.Omega0 * (t - self.start_time)

    def to_dict(self):
        return {"type": self.kind, "Omega0": self.Omega0, "omega0": self.omega0}


@dataclass(frozen=True)
class Rabi(Scenario):
    """Constant Omega0 with the rotating-wave coupling omega0 * exp(-i nu0 t).

    Resonance is not imposed; for the Hamiltonians used here the drive is
    resonant when nu0 == Omega0.
    """

    Omega0: float
    omega0: float
    nu0: float
    kind = "rabi"

    def problems(self):
        out: list[tuple[str, str]] = []
        _finite("Omega0", self.Omega0, out)
        _finite("omega0", self.omega0, out)
        _finite("nu0", self.nu0, out)
        if not out and self.omega0 < 0:
            out.append(("omega0", "must be >= 0"))
        return out

    def evaluate(self, t):
        return float(self.Omega0), self.omega0 * complex(math.cos(self.nu0 * t), -math.sin(self.nu0 * t))

    def omega_integral(self, t):
        return self.Omega0 * (t - self.start_time)

    def dimensionless_time(self, t):
        return self.nu0 * t

    def to_dict(self):
        return {"type": self.kind, "Omega0": self.Omega0, "omega0": self.omega0, "nu0": self.nu0}


@dataclass(frozen=True)
class LMSZ(Scenario):
    """Linear sweep Omega(t) = gamma t with constant real coupling omega0.

    The evolution window is [tau_i, tau_f] in the dimensionless time
    tau = sqrt(gamma) t.
    """

    gamma: float
    omega0: float
    tau_i: float = -20.0
    tau_f: float = 20.0
    kind = "lmsz"

    def problems(self):
        out: list[tuple[str, str]] = []
        for name in ("gamma", "omega0", "tau_i", "tau_f"):
            _finite(name, getattr(self, name), out)
        if out:
            return out
        if self.gamma <= 0:
            out.append(("gamma", "must be > 0"))
        if self.omega0 < 0:
            out.append(("omega0", "must be >= 0"))
        if not self.tau_i < self.tau_f:
            out.append(("tau_f", "must exceed tau_i"))
        return out

    @property
    def chi(self) -> float:
        """Sweep-strength parameter 2 omega0^2 / gamma."""
        return 2.0 * self.omega0**2 / self.gamma

    @property
    def start_time(self):
        return self.tau_i / math.sqrt(self.gamma)

    @property
    def end_time(self) -> float:
        return self.tau_f / math.sqrt(self.gamma)

    def evaluate(self, t):
        return self.gamma * t, complex(self.omega0)

    def omega_integral(self, t):
        t0 = self.start_time
        return 0.5 * self.gamma * (t * t - t0 * t0)

    def dimensionless_time(self, t):
        return math.sqrt(self.gamma) * t

    def to_dict(self):
        return {
            "type": self.kind,
            "gamma": self.gamma,
            "omega0": self.omega0,
            "tau_i": self.tau_i,
            "tau_f": self.tau_f,
        }


@dataclass(frozen=True)
class Tabulated(Scenario):
    """Sampled parameters, linearly interpolated between samples."""

    times: tuple
    Omega: tuple
    omega_re: tuple
    omega_im: tuple
    _arrays: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    kind = "tabulated"

    def __post_init__(self):
        for name in ("times", "Omega", "omega_re", "omega_im"):
            object.__setattr__(self, name, tuple(float(v) for v in np.ravel(getattr(self, name))))
        super().__post_init__()
        for name in ("times", "Omega", "omega_re", "omega_im"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            self._arrays[name] = arr

    def problems(self):
        out: list[tuple[str, str]] = []
        n = len(self.times)
        if n < 2:
            out.append(("times", "need at least 2 samples"))
        for name in ("Omega", "omega_re", "omega_im"):
            if len(getattr(self, name)) != n:
                out.append((name, f"length {len(getattr(self, name))} does not match times ({n})"))
        for name in ("times", "Omega", "omega_re", "omega_im"):
            if not all(math.isfinite(v) for v in getattr(self, name)):
                out.append((name, "contains non-finite values"))
        if n >= 2 and any(b <= a for a, b in zip(self.times, self.times[1:])):
            out.append(("times", "must be strictly increasing"))
        return out

    @classmethod
    def from_functions(
        cls,
        times: Sequence[float],
        Omega: Callable[[float], float],
        omega: Callable[[float], complex],
    ) -> "Tabulated":
        """Sample callables on a grid, e.g. a pre-rotating-wave drive."""
        ts = [float(t) for t in times]
        w = [complex(omega(t)) for t in ts]
        return cls(ts, [float(Omega(t)) for t in ts], [c.real for c in w], [c.imag for c in w])

    @property
    def start_time(self):
        return self.times[0]

    @property
    def end_time(self) -> float:
        return self.times[-1]

    def _check_range(self, t: float) -> None:
        if not (self.times[0] <= t <= self.times[-1]):
            raise ScenarioError(f"t = {t} outside tabulated range [{self.times[0]}, {self.times[-1]}]")

    def evaluate(self, t):
        self._check_range(t)
        ts = self._arrays["times"]
        Om = float(np.interp(t, ts, self._arrays["Omega"]))
        re = float(np.interp(t, ts, self._arrays["omega_re"]))
        im = float(np.interp(t, ts, self._arrays["omega_im"]))
        return Om, complex(re, im)

    def omega_integral(self, t):
        # exact integral of the piecewise-linear interpolant
        self._check_range(t)
        ts = self._arrays["times"]
        Om = self._arrays["Omega"]
        k = int(np.searchsorted(ts, t, side="right"))
        full = float(np.sum(0.5 * (Om[1:k] + Om[: k - 1]) * np.diff(ts[:k])))
        if k < len(ts):
            t_last = ts[k - 1]
            om_t = float(np.interp(t, ts, Om))
            full += 0.5 * (Om[k - 1] + om_t) * (t - t_last)
        return full

    def breakpoints(self, t0, t1):
        return [t for t in self.times if t0 < t < t1]

    def to_dict(self):
        return {
            "type": self.kind,
            "times": list(self.times),
            "Omega": list(self.Omega),
            "omega_re": list(self.omega_re),
            "omega_im": list(self.omega_im),
        }


def evaluate(s: Scenario, t: float) -> tuple[float, complex]:
    """(Omega(t), omega(t)) for scenario ``s``."""
    return s.evaluate(t)


def dimensionless_time(s: Scenario, t: float) -> float:
    """nu0 t for Rabi, sqrt(gamma) t for LMSZ."""
    return s.dimensionless_time(t)


_VARIANTS = {cls.kind: cls for cls in (Constant, Rabi, LMSZ, Tabulated)}


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    """Build a scenario from the tagged layout ``{"type": ..., <fields>}``."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be an object", [("", "must be an object")])
    kind = data.get("type")
    if kind not in _VARIANTS:
        raise ScenarioError(
            f"unknown scenario type {kind!r}",
            [("type", f"must be one of {sorted(_VARIANTS)}")],
        )
    cls = _VARIANTS[kind]
    names = [f.name for f in cls.__dataclass_fields__.values() if f.init]
    required = [
        f.name
        for f in cls.__dataclass_fields__.values()
        if f.init and f.default is MISSING and f.default_factory is MISSING
    ]
    missing = [n for n in required if n not in data]
    unknown = [k for k in data if k != "type" and k not in names]
    problems = [(n, "missing") for n in missing] + [(k, "unknown field") for k in unknown]
    if problems:
        raise ScenarioError(f"bad {kind} scenario", problems)
    return cls(**{k: v for k, v in data.items() if k != "type"})
