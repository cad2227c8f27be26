"""Alternative closed-form expressions, kept as written for cross-checking.

None of these feed the solvers.  Several are known to disagree with the
matrix pathway (non-unitary pairs, wrong phases or slopes); ``audit``
quantifies each disagreement and ``write_report`` stores the result.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .observables import NoonSpec, energy_trace, expectation, noon_state, transition_probability
from .oscillators import ModelKind, numeric_pair_solver, pair_solver
from .scenario import LMSZ, Constant, Rabi
from .specfun import gamma_complex, pcf_d
from .su2 import AmplitudePair

__all__ = [
    "printed_rabi_pair",
    "printed_rabi_energy",
    "printed_lmsz_pair",
    "printed_standard_constant_pair",
    "printed_standard_rabi_pair",
    "printed_standard_lmsz_pair",
    "printed_standard_rabi_energy",
    "printed_standard_lmsz_energy",
    "printed_noon_sz",
    "printed_noon_a_bdag",
    "printed_noon_energy",
    "printed_nonlinear_sz2",
    "printed_nonlinear_a_bdag2",
    "printed_transition",
    "AuditEntry",
    "audit",
    "write_report",
]


# ---------------------------------------------------------------------------
# spin-1/2 pairs


def printed_rabi_pair(Omega0: float, omega0: float, nu0: float, t: float) -> AmplitudePair:
    """a = cos(k tau') e^{-i tau'}, b = -i sin(k tau') e^{-i tau'}, tau' = nu0 t, k = omega0/Omega0."""
    tp = nu0 * t
    k = omega0 / Omega0
    ph = cmath.exp(-1j * tp)
    return AmplitudePair(math.cos(k * tp) * ph, -1j * math.sin(k * tp) * ph, t)


def printed_rabi_energy(Omega0: float, omega0: float, nu0: float, t: float) -> float:
    """omega0 cos(k tau') for the amplifier started in NOON(1, pi/4, 0)."""
    return omega0 * math.cos(omega0 / Omega0 * nu0 * t)


def printed_lmsz_pair(gamma: float, omega0: float, tau_i: float, tau: float) -> AmplitudePair:
    """Parabolic-cylinder expression with orders i chi, -1 + i chi, chi = 2 omega0^2/gamma."""
    chi = 2.0 * omega0**2 / gamma
    em = cmath.exp(-0.25j * math.pi)
    e3 = cmath.exp(0.75j * math.pi)
    r2 = math.sqrt(2.0)
    g = gamma_complex(1.0 - 1j * chi)
    d1 = pcf_d(1j * chi, r2 * em * tau) * pcf_d(-1.0 + 1j * chi, r2 * e3 * tau_i)
    d2 = pcf_d(1j * chi, r2 * e3 * tau) * pcf_d(-1.0 + 1j * chi, r2 * em * tau_i)
    a = g / math.sqrt(2.0 * math.pi) * (d1 + d2)
    b = g / math.sqrt(2.0 * math.pi * chi) * cmath.exp(0.25j * math.pi) * (-d1 + d2)
    return AmplitudePair(a, b, tau / math.sqrt(gamma))


def printed_standard_constant_pair(omega0: float, t: float) -> AmplitudePair:
    return AmplitudePair(complex(math.cos(omega0 * t)), -1j * math.sin(omega0 * t), t)


def _nu_r(omega0: float, nu0: float) -> float:
    return math.sqrt(nu0 * nu0 + omega0 * omega0)


def printed_standard_rabi_pair(omega0: float, nu0: float, t: float) -> AmplitudePair:
    """a = cos(nu_R t), b = -i (omega0/nu_R) sin(nu_R t), nu_R = sqrt(nu0^2 + omega0^2)."""
    nr = _nu_r(omega0, nu0)
    return AmplitudePair(complex(math.cos(nr * t)), -1j * omega0 / nr * math.sin(nr * t), t)


def printed_standard_lmsz_pair(gamma: float, omega0: float, tau: float) -> AmplitudePair:
    """a = cos(sqrt(chi/2) tau), b = -i sin(sqrt(chi/2) tau)."""
    x = math.sqrt(omega0**2 / gamma) * tau
    return AmplitudePair(complex(math.cos(x)), -1j * math.sin(x), tau / math.sqrt(gamma))


# ---------------------------------------------------------------------------
# energies and moments


def printed_standard_rabi_energy(Omega0: float, omega0: float, nu0: float, t: float, squared: bool = False) -> float:
    """Omega0/2 + omega0 cos(nu0 t)[cos^2(nu_R t) + (omega0/nu_R)^2 sin(nu_R t)].

    ``squared=True`` uses sin^2 in the last term instead.
    """
    nr = _nu_r(omega0, nu0)
    s = math.sin(nr * t)
    if squared:
        s = s * s
    return 0.5 * Omega0 + omega0 * math.cos(nu0 * t) * (math.cos(nr * t) ** 2 + (omega0 / nr) ** 2 * s)


def printed_standard_lmsz_energy(gamma: float, omega0: float, tau: float) -> float:
    """sqrt(gamma) tau + omega0."""
    return math.sqrt(gamma) * tau + omega0


def printed_noon_sz(spec: NoonSpec, a: complex, b: complex) -> float:
    """(N/2)(|a|^2 - |b|^2) cos 2theta + Re[a b* e^{-i phi}] sin 2theta delta_{1N}."""
    N, th, ph = spec.N, spec.theta, spec.phi
    val = 0.5 * N * (abs(a) ** 2 - abs(b) ** 2) * math.cos(2 * th)
    if N == 1:
        val += (a * b.conjugate() * cmath.exp(-1j * ph)).real * math.sin(2 * th)
    return val


def printed_noon_a_bdag(spec: NoonSpec, a: complex, b: complex) -> complex:
    """-N a b cos 2theta + ((a^2 e^{-i phi} - b^2 e^{i phi})/2) sin 2theta delta_{1N}."""
    N, th, ph = spec.N, spec.theta, spec.phi
    val = -N * a * b * math.cos(2 * th)
    if N == 1:
        val += 0.5 * (a * a * cmath.exp(-1j * ph) - b * b * cmath.exp(1j * ph)) * math.sin(2 * th)
    return val


def printed_noon_energy(Omega: float, omega: complex, phi: float, a: complex, b: complex) -> float:
    """Omega Re[a b* e^{-i phi}] + Re[omega* (a^2 e^{-i phi} - b^2 e^{i phi})] for NOON(1, pi/4, phi)."""
    e = cmath.exp(-1j * phi)
    return (Omega * (a * b.conjugate() * e).real
            + (complex(omega).conjugate() * (a * a * e - b * b / e)).real)


def printed_nonlinear_sz2(spec: NoonSpec, a: complex, b: complex) -> float:
    """|a|^4 + |b|^4 + 2 Re[(a b*)^2 e^{-i phi}] sin 2theta  (N = 2)."""
    th, ph = spec.theta, spec.phi
    ab = a * b.conjugate()
    return abs(a) ** 4 + abs(b) ** 4 + 2.0 * (ab * ab * cmath.exp(-1j * ph)).real * math.sin(2 * th)


def printed_nonlinear_a_bdag2(spec: NoonSpec, a: complex, b: complex) -> complex:
    """((a^4 e^{-i phi} + b^4 e^{i phi}) cos theta sin theta + a^2 b^2) / 2  (N = 2)."""
    th, ph = spec.theta, spec.phi
    return 0.5 * ((a**4 * cmath.exp(-1j * ph) + b**4 * cmath.exp(1j * ph)) * math.cos(th) * math.sin(th)
                  + a * a * b * b)


def printed_transition(kind: ModelKind, scenario, N: int, t: float) -> float:
    """Reference P(|N0> -> |0N>) closed forms, per model and scenario."""
    kind = ModelKind.parse(kind)
    amp = kind is ModelKind.AMPLIFIER
    if isinstance(scenario, Constant):
        if amp:
            nu = math.sqrt(0.25 * scenario.Omega0**2 + scenario.omega0**2)
            return (scenario.omega0 / nu * math.sin(nu * t)) ** (2 * N)
        return math.sin(scenario.omega0 * t) ** (2 * N)
    if isinstance(scenario, Rabi):
        if amp:
            k = scenario.omega0 / scenario.Omega0
            return math.sin(k * scenario.nu0 * t) ** (2 * N)
        nr = _nu_r(scenario.omega0, scenario.nu0)
        return (scenario.omega0 / nr * math.sin(nr * t)) ** (2 * N)
    if isinstance(scenario, LMSZ) and not amp:
        tau = math.sqrt(scenario.gamma) * t
        return math.sin(math.sqrt(0.5 * scenario.chi) * tau) ** (2 * N)
    raise ValueError("no reference closed form for this model/scenario")


# ---------------------------------------------------------------------------
# audit


@dataclass
class AuditEntry:
    name: str
    description: str
    max_abs_deviation: float
    reference: str
    note: str = ""

    @property
    def agrees(self) -> bool:
        return self.max_abs_deviation <= 1e-8


def _pair_dev(p: AmplitudePair, q: AmplitudePair) -> float:
    return max(abs(p.a - q.a), abs(p.b - q.b))


def audit(n_points: int = 101) -> list[AuditEntry]:
    """Compare every reference form with the numerically exact pathway."""
    out: list[AuditEntry] = []
    amp, std = ModelKind.AMPLIFIER, ModelKind.STANDARD
    noon1 = NoonSpec(1, math.pi / 4, 0.0)

    # Rabi, amplifier: both readings of the resonance condition
    for label, nu0 in (("nu0 = Omega0/2", 0.5), ("nu0 = Omega0", 1.0)):
        s = Rabi(1.0, 0.1, nu0)
        ts = np.linspace(0.0, 40 * math.pi / nu0, n_points)
        exact = pair_solver(amp, s)
        dev = max(_pair_dev(printed_rabi_pair(1.0, 0.1, nu0, t), exact(t)) for t in ts)
        out.append(AuditEntry(
            f"rabi_pair[{label}]", "a = cos(k tau') e^{-i tau'}, b = -i sin(k tau') e^{-i tau'}",
            dev, "exact rotating-frame pair, checked against RK",
            "only exact for omega = (omega0/2) e^{-i Omega0 t}" if nu0 == 1.0 else ""))
        e = energy_trace(amp, s, noon1, ts)
        dev = float(np.max(np.abs(e.values - [printed_rabi_energy(1.0, 0.1, nu0, t) for t in ts])))
        out.append(AuditEntry(
            f"rabi_energy[{label}]", "<H> = omega0 cos(k tau') for NOON(1, pi/4, 0)", dev,
            "matrix pathway", "at exact resonance <H> = omega0 for all t"))

    # LMSZ, amplifier: reference parabolic-cylinder expression
    s = LMSZ(1.0, 1.0, -10.0, 10.0)
    oracle = numeric_pair_solver(amp, s)
    taus = np.linspace(-10.0, 10.0, n_points)
    dev = 0.0
    norm = 0.0
    for tau in taus:
        p = printed_lmsz_pair(1.0, 1.0, -10.0, tau)
        dev = max(dev, _pair_dev(p, oracle(tau)))
        norm = max(norm, p.norm_defect)
    p0 = printed_lmsz_pair(1.0, 1.0, -10.0, -10.0)
    out.append(AuditEntry(
        "lmsz_pair", "parabolic-cylinder pair with orders i chi, -1 + i chi", dev,
        "RK integration (DOP853, tol 1e-12)",
        f"max norm defect {norm:.3g}; at tau_i: |a - 1| = {abs(p0.a - 1):.3g}, |b| = {abs(p0.b):.3g}"))

    # Standard model pairs
    s = Constant(1.0, 0.1)
    ts = np.linspace(0.0, 50.0, n_points)
    ex = pair_solver(std, s)
    dev = max(_pair_dev(printed_standard_constant_pair(0.1, t), ex(t)) for t in ts)
    out.append(AuditEntry("standard_constant_pair", "a = cos(omega0 t), b = -i sin(omega0 t)", dev,
                          "closed form with Omega = 0"))
    s = Rabi(1.0, 0.05, 0.5)
    ts = np.linspace(0.0, 80 * math.pi, n_points)
    ex = pair_solver(std, s)
    dev = max(_pair_dev(printed_standard_rabi_pair(0.05, 0.5, t), ex(t)) for t in ts)
    norm = max(printed_standard_rabi_pair(0.05, 0.5, t).norm_defect for t in ts)
    out.append(AuditEntry("standard_rabi_pair", "a = cos(nu_R t), b = -i (omega0/nu_R) sin(nu_R t)", dev,
                          "exact rotating-frame pair with Omega = 0", f"max norm defect {norm:.3g}"))
    e = energy_trace(std, s, noon1, ts)
    for squared in (False, True):
        ref = [printed_standard_rabi_energy(1.0, 0.05, 0.5, t, squared) for t in ts]
        dev = float(np.max(np.abs(e.values - ref)))
        out.append(AuditEntry(
            "standard_rabi_energy" + ("[sin^2 reading]" if squared else ""),
            "Omega0/2 + omega0 cos(nu0 t)[cos^2(nu_R t) + (omega0/nu_R)^2 sin(nu_R t)]", dev,
            "matrix pathway"))
    s = LMSZ(1.0, 1.0, -10.0, 10.0)
    taus = np.linspace(-10.0, 10.0, n_points)
    ex = pair_solver(std, s)
    dev = max(_pair_dev(printed_standard_lmsz_pair(1.0, 1.0, tau), ex(tau)) for tau in taus)
    out.append(AuditEntry("standard_lmsz_pair", "a = cos(sqrt(chi/2) tau), b = -i sin(sqrt(chi/2) tau)", dev,
                          "closed form started at tau_i", "matches after the shift tau -> tau - tau_i"))
    e = energy_trace(std, s, noon1, taus)
    dev = float(np.max(np.abs(e.values - [printed_standard_lmsz_energy(1.0, 1.0, x) for x in taus])))
    dev_half = float(np.max(np.abs(e.values - (0.5 * taus + 1.0))))
    out.append(AuditEntry("standard_lmsz_energy", "<H> = sqrt(gamma) tau + omega0", dev, "matrix pathway",
                          f"deviation from sqrt(gamma) tau / 2 + omega0: {dev_half:.3g}"))

    # NOON moments under the constant scenario
    s = Constant(1.0, 0.1)
    ts = np.linspace(0.0, 30.0, 31)
    ex = pair_solver(amp, s)
    for N in (1, 2, 3):
        spec = NoonSpec(N, 0.4, 0.7)
        st = noon_state(spec)
        d_sz = d_ab = 0.0
        for t in ts:
            p = ex(t)
            d_sz = max(d_sz, abs(expectation(amp, s, st, "Sz", t, p) - printed_noon_sz(spec, p.a, p.b)))
            d_ab = max(d_ab, abs(expectation(amp, s, st, "a_bdag", t, p) - printed_noon_a_bdag(spec, p.a, p.b)))
        out.append(AuditEntry(f"noon_sz[N={N}]", "(N/2)(|a|^2-|b|^2) cos 2theta + Re[a b* e^{-i phi}] sin 2theta d_1N",
                              d_sz, "matrix pathway"))
        out.append(AuditEntry(f"noon_a_bdag[N={N}]", "-N a b cos 2theta + (a^2 e^{-i phi} - b^2 e^{i phi})/2 sin 2theta d_1N",
                              d_ab, "matrix pathway"))
    st = noon_state(NoonSpec(1, math.pi / 4, 0.7))
    dev = 0.0
    for t in ts:
        p = ex(t)
        Om, w = s.evaluate(t)
        dev = max(dev, abs(expectation(amp, s, st, "H", t, p).real - printed_noon_energy(Om, w, 0.7, p.a, p.b)))
    out.append(AuditEntry("noon_energy[N=1]", "Omega Re[a b* e^{-i phi}] + Re[omega* (a^2 e^{-i phi} - b^2 e^{i phi})]",
                          dev, "matrix pathway"))
    for theta in (math.pi / 4, 0.4):
        spec = NoonSpec(2, theta, 0.7)
        st = noon_state(spec)
        d_sz2 = d_ab2 = 0.0
        for t in ts:
            p = ex(t)
            d_sz2 = max(d_sz2, abs(expectation(amp, s, st, "Sz^2", t, p) - printed_nonlinear_sz2(spec, p.a, p.b)))
            d_ab2 = max(d_ab2, abs(expectation(amp, s, st, "a_bdag^2", t, p) - printed_nonlinear_a_bdag2(spec, p.a, p.b)))
        out.append(AuditEntry(f"nonlinear_sz2[theta={theta:.4g}]", "|a|^4 + |b|^4 + 2 Re[(a b*)^2 e^{-i phi}] sin 2theta",
                              d_sz2, "matrix pathway"))
        out.append(AuditEntry(f"nonlinear_a_bdag2[theta={theta:.4g}]",
                              "((a^4 e^{-i phi} + b^4 e^{i phi}) cos theta sin theta + a^2 b^2)/2", d_ab2, "matrix pathway"))

    # transition probabilities
    cases = [
        (amp, Constant(1.0, 0.1), np.linspace(0, 40, n_points)),
        (std, Constant(1.0, 0.1), np.linspace(0, 40, n_points)),
        (amp, Rabi(1.0, 0.1, 1.0), np.linspace(0, 40 * math.pi, n_points)),
        (amp, Rabi(1.0, 0.1, 0.5), np.linspace(0, 80 * math.pi, n_points)),
        (std, Rabi(1.0, 0.05, 0.5), np.linspace(0, 80 * math.pi, n_points)),
        (std, LMSZ(1.0, 1.0, -10.0, 10.0), np.linspace(-10, 10, n_points)),
    ]
    for kind, s, ts in cases:
        ex = pair_solver(kind, s)
        for N in (1, 2):
            dev = max(abs(transition_probability(kind, s, N, t, ex(t)) - printed_transition(kind, s, N, t)) for t in ts)
            out.append(AuditEntry(f"transition[{kind.value},{s.kind},{_params(s)},N={N}]",
                                  "reference P(N0 -> 0N) closed form", dev, "matrix pathway"))
    return out


def _params(s) -> str:
    return ",".join(f"{k}={v:g}" for k, v in s.to_dict().items() if k != "type")


def write_report(directory, entries: list[AuditEntry] | None = None) -> tuple[Path, Path]:
    """Write ``formula_audit.json`` and ``formula_audit.md`` into ``directory``."""
    entries = audit() if entries is None else entries
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    rows = [dict(asdict(e), agrees=e.agrees) for e in entries]
    jpath = d / "formula_audit.json"
    jpath.write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
    lines = [
        "# Reference closed forms vs the matrix pathway",
        "",
        "| name | max abs deviation | agrees (<= 1e-8) | reference | note |",
        "|---|---|---|---|---|",
    ]
    for e in entries:
        lines.append(f"| {e.name} | {e.max_abs_deviation:.3e} | {'yes' if e.agrees else 'no'} | {e.reference} | {e.note} |")
    mpath = d / "formula_audit.md"
    mpath.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return jpath, mpath
