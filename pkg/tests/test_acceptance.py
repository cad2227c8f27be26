"""Acceptance criteria 1-10.

Each criterion is evaluated once (cached) by a ``criterion_N`` function that
returns (passed, detail).  The tests assert on the verdict; a one-line
PASS/FAIL summary per criterion is printed at the end of the pytest run (see
``conftest.py``) and when the module is executed directly.
"""

import math
import os
import tempfile
import time
from functools import cache
from pathlib import Path

import numpy as np
from scipy.linalg import expm

from conftest import random_tabulated
from glauber_su2.cli import OUTPUT_DIR_ENV, PRESETS, main
from glauber_su2.closed_forms import audit, write_report
from glauber_su2.observables import NoonSpec, energy_trace, transition_probability, transition_trace, uniform_state
from glauber_su2.oscillators import ModelKind, pair_solver
from glauber_su2.scenario import LMSZ, Constant, Rabi
from glauber_su2.su2 import (
    AmplitudePair,
    solve_constant,
    solve_numeric,
    solve_rabi,
    spin_hamiltonian,
    spin_propagator,
)

AMP, STD = ModelKind.AMPLIFIER, ModelKind.STANDARD
ROOT = Path(__file__).resolve().parents[1]
GOLDEN = Path(__file__).parent / "golden"
REPORT_DIR = ROOT / "reports"
NOON1 = NoonSpec(1, math.pi / 4, 0.0)

RESULTS: dict[int, tuple[bool, str]] = {}


def _record(n: int, passed: bool, detail: str) -> tuple[bool, str]:
    RESULTS[n] = (bool(passed), detail)
    return RESULTS[n]


def summary_lines() -> list[str]:
    return [f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


def _lmsz_chi(chi: float, tau_i: float, tau_f: float) -> LMSZ:
    return LMSZ(1.0, math.sqrt(chi / 2.0), tau_i, tau_f)


def _sign_changes(x: np.ndarray) -> int:
    d = np.sign(np.diff(x))
    d = d[d != 0]
    return int(np.count_nonzero(d[1:] != d[:-1]))


@cache
def criterion_1():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst, worst_lmsz = 0.0, 0.0
    cases = [(Constant(1.0, 0.1), np.linspace(0, 50, 500)), (Rabi(1.0, 0.1, 0.5), np.linspace(0, 80 * math.pi, 500))]
    cases += [(random_tabulated(rng), np.linspace(0, 6, 500)) for _ in range(3)]
    for s, ts in cases:
        solver = pair_solver(AMP, s)
        worst = max(worst, max(solver(t).norm_defect for t in ts))
    for chi in (0.5, 1.0, 2.0):
        s = _lmsz_chi(chi, -20.0, 20.0)
        solver = pair_solver(AMP, s)
        worst_lmsz = max(worst_lmsz, max(solver(t).norm_defect for t in np.linspace(-20, 20, 500)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and worst_lmsz <= 1e-6 and dt < 10
    return _record(1, ok, f"unitarity: max defect {worst:.2e} (LMSZ analytic {worst_lmsz:.2e}); {dt:.1f} s")


@cache
def criterion_2():
    t0 = time.perf_counter()
    err_cr, err_l = 0.0, 0.0
    closed = [
        (Constant(1.0, 0.1), lambda t: solve_constant(1.0, 0.1, t), (0.0, 50.0)),
        (Rabi(1.0, 0.1, 1.0), lambda t: solve_rabi(1.0, 0.1, t), (0.0, 40 * math.pi)),
        (Rabi(1.0, 0.1, 0.5), lambda t: solve_rabi(1.0, 0.1, t, nu0=0.5), (0.0, 80 * math.pi)),
    ]
    for s, f, (a, b) in closed:
        sol = solve_numeric(s, a, b, 1e-12)
        for t in np.linspace(a, b, 200):
            p, q = sol(t), f(t)
            err_cr = max(err_cr, abs(p.a - q.a), abs(p.b - q.b))
    for chi in (0.5, 1.0, 2.0):
        s = _lmsz_chi(chi, -10.0, 10.0)
        sol = solve_numeric(s, s.start_time, s.end_time, 1e-12)
        exact = pair_solver(AMP, s)
        for t in np.linspace(-10, 10, 200):
            p, q = sol(t), exact(t)
            err_l = max(err_l, abs(p.a - q.a), abs(p.b - q.b))
    dt = time.perf_counter() - t0
    ok = err_cr <= 1e-8 and err_l <= 1e-6 and dt < 30
    return _record(2, ok, f"analytic vs RK: Constant/Rabi {err_cr:.2e}, LMSZ {err_l:.2e}; {dt:.1f} s")


@cache
def criterion_3():
    frob = 0.0
    for two_s in range(1, 6):
        s = two_s / 2
        for Om, w, t in ((1.0, 0.1, 2.0), (-0.4, 0.9, 3.3), (2.0, 0.25, 7.5)):
            U = spin_propagator(s, solve_constant(Om, w, t)).matrix
            frob = max(frob, float(np.linalg.norm(U - expm(-1j * t * spin_hamiltonian(s, Om, w)))))
    rng = np.random.default_rng(3)
    unit = 0.0
    for two_s in range(1, 21):
        for _ in range(100):
            v = rng.standard_normal(4)
            v /= np.linalg.norm(v)
            U = spin_propagator(two_s / 2, AmplitudePair(complex(v[0], v[1]), complex(v[2], v[3])))
            unit = max(unit, U.unitarity_defect())
    ok = frob <= 1e-8 and unit <= 1e-9
    return _record(3, ok, f"group element vs expm: Frobenius {frob:.2e}; unitarity up to s=10: {unit:.2e}")


@cache
def criterion_4():
    k, w0 = 0.1, 0.1
    devs = {}
    for nu0 in (0.5, 1.0):
        s = Rabi(1.0, w0, nu0)
        taus = np.linspace(0, 40 * math.pi, 801)
        e = energy_trace(AMP, s, NOON1, taus / nu0).values
        devs[nu0] = float(np.max(np.abs(e - w0 * np.cos(k * taus))))
    ok = devs[0.5] <= 1e-9
    return _record(4, ok, f"Rabi energy vs omega0 cos(k tau'): max dev {devs[0.5]:.3g} "
                          f"(nu0 = Omega0/2), {devs[1.0]:.3g} (nu0 = Omega0); tol 1e-9")


@cache
def criterion_5():
    rng = np.random.default_rng(5)
    worst = 0.0
    for N in range(2, 7):
        for _ in range(10):
            s = random_tabulated(rng)
            spec = NoonSpec(N, math.pi / 4, rng.uniform(0, 2 * math.pi))
            worst = max(worst, float(np.max(np.abs(energy_trace(AMP, s, spec, np.linspace(0, 6, 100)).values))))
    counter = float(np.max(np.abs(energy_trace(AMP, Constant(1.0, 0.1), uniform_state(2), np.linspace(0, 50, 100)).values)))
    ok = worst <= 1e-9 and counter > 1e-6
    return _record(5, ok, f"zero energy: max |<H>| {worst:.2e}; counterexample max |<H>| {counter:.3g}")


@cache
def criterion_6():
    rng = np.random.default_rng(6)
    scenarios = [(Constant(1.0, 0.1), (0.0, 60.0)), (Rabi(1.0, 0.1, 0.5), (0.0, 80 * math.pi)),
                 (Rabi(1.0, 0.1, 1.0), (0.0, 40 * math.pi)), (LMSZ(1.0, 1.0, -20.0, 20.0), (-20.0, 20.0))]
    scenarios += [(random_tabulated(rng), (0.0, 6.0)) for _ in range(2)]
    ident = 0.0
    for kind in (AMP, STD):
        for s, (a, b) in scenarios:
            solver = pair_solver(kind, s)
            for t in np.linspace(a, b, 25):
                p = solver(t)
                for N in range(1, 9):
                    ident = max(ident, abs(transition_probability(kind, s, N, t, p) - abs(p.b) ** (2 * N)))
    Om, w0 = 1.0, 0.1
    nu = math.sqrt(Om**2 / 4 + w0**2)
    s = Constant(Om, w0)
    ts = np.union1d(np.linspace(0, 60, 301), [math.pi / (2 * nu), math.pi / (2 * w0)])
    closed = 0.0
    amp_max, std_max = {}, {}
    for N in range(1, 9):
        pa = np.array([transition_probability(AMP, s, N, t) for t in ts])
        ps = np.array([transition_probability(STD, s, N, t) for t in ts])
        closed = max(closed, float(np.max(np.abs(pa - (w0 / nu) ** (2 * N) * np.sin(nu * ts) ** (2 * N)))))
        amp_max[N], std_max[N] = pa.max(), ps.max()
    amp_ok = all(abs(amp_max[N] - (w0 / nu) ** (2 * N)) <= 1e-10 and amp_max[N] < 1 for N in amp_max)
    std_ok = all(abs(std_max[N] - 1) <= 1e-10 for N in std_max)
    ok = ident <= 1e-10 and closed <= 1e-10 and amp_ok and std_ok
    return _record(6, ok, f"|<0N|V|N0>|^2 = |b|^2N: {ident:.2e}; Constant-Amplifier closed form {closed:.2e}; "
                          f"Standard max {std_max[1]:.12f}, Amplifier max (N=1) {amp_max[1]:.6f}")


@cache
def criterion_7():
    chi = 2.0
    s = _lmsz_chi(chi, -20.0, 20.0)
    taus = np.linspace(-20, 20, 401)
    p_std = transition_trace(STD, s, 1, taus).values
    sinus = float(np.max(np.abs(p_std - np.sin(math.sqrt(chi / 2) * (taus - s.tau_i)) ** 2)))
    p_amp = transition_trace(AMP, s, 1, taus).values
    rk = solve_numeric(s, s.start_time, s.end_time, 1e-12)(s.end_time)
    sat = abs(p_amp[-1] - abs(rk.b) ** 2)
    tail = p_amp[taus >= 5.0]
    monotone = bool(np.all(np.diff(tail) >= -1e-12))
    no_full = float(tail.min()) > 0.5
    ok = sinus <= 1e-8 and sat <= 1e-4 and monotone and no_full
    return _record(7, ok, f"Standard sinusoid dev {sinus:.2e}; Amplifier end vs RK {sat:.2e}; "
                          f"monotone past tau=5: {monotone} ({_sign_changes(tail)} slope sign changes, "
                          f"ringing {np.ptp(tail[len(tail) // 2:]):.3f}); min P past tau=5 {tail.min():.3f}")


@cache
def criterion_8():
    s = LMSZ(1.0, 1.0, -20.0, 20.0)
    taus = np.linspace(-10, 10, 201)
    e_std = energy_trace(STD, s, NOON1, taus).values
    lin = float(np.max(np.abs(e_std - (math.sqrt(s.gamma) * taus + s.omega0))))
    half = float(np.max(np.abs(e_std - (0.5 * math.sqrt(s.gamma) * taus + s.omega0))))
    grid = np.linspace(-20, 20, 401)
    e_amp = energy_trace(AMP, s, NOON1, grid).values
    asym = float(np.max(np.abs(e_amp - e_amp[::-1])))
    scale = float(np.max(np.abs(e_amp)))
    ok = lin <= 1e-6 and asym <= 1e-6 * scale
    return _record(8, ok, f"Standard E vs sqrt(gamma) tau + omega0: {lin:.3g} (vs slope 1/2: {half:.1e}); "
                          f"Amplifier max|E(tau)-E(-tau)| {asym:.3g} (max|E| {scale:.3g}, tol {1e-6 * scale:.2e})")


@cache
def criterion_9():
    entries = audit()
    jpath, mpath = write_report(REPORT_DIR, entries)
    names = {e.name for e in entries}
    required = ("rabi_pair", "rabi_energy", "standard_rabi_energy", "nonlinear_sz2", "nonlinear_a_bdag2", "lmsz_pair")
    covered = all(any(n.startswith(r) for n in names) for r in required)
    report_ok = jpath.exists() and mpath.exists() and covered
    upstream = [n for n, f in enumerate(CRITERIA[:8], 1) if not f()[0]]
    deviating = sum(not e.agrees for e in entries)
    ok = report_ok and not upstream
    blocked = f"; blocked by criteria {upstream}" if upstream else ""
    return _record(9, ok, f"report {mpath.relative_to(ROOT)} ({len(entries)} entries, {deviating} deviating "
                          f"printed forms){blocked}")


@cache
def criterion_10():
    mismatched = []
    with tempfile.TemporaryDirectory() as tmp:
        old = os.environ.get(OUTPUT_DIR_ENV)
        os.environ[OUTPUT_DIR_ENV] = tmp
        try:
            for name in sorted(PRESETS):
                if main(["run", "--preset", name]) != 0:
                    mismatched.append(name)
                    continue
                if (Path(tmp) / f"{name}.csv").read_bytes() != (GOLDEN / f"{name}.csv").read_bytes():
                    mismatched.append(name)
        finally:
            if old is None:
                os.environ.pop(OUTPUT_DIR_ENV, None)
            else:
                os.environ[OUTPUT_DIR_ENV] = old
    # golden content against the traces the criteria themselves compute
    g2a = np.loadtxt(GOLDEN / "fig2a.csv", delimiter=",", skiprows=1)
    e2a = energy_trace(AMP, Rabi(1.0, 0.1, 0.5), NOON1, g2a[:, 0]).values
    g3a = np.loadtxt(GOLDEN / "fig3a.csv", delimiter=",", skiprows=1)
    s = LMSZ(1.0, 1.0, -20.0, 20.0)
    rk = abs(solve_numeric(s, s.start_time, s.end_time, 1e-12)(s.end_time).b) ** 2
    g2d = np.loadtxt(GOLDEN / "fig2d.csv", delimiter=",", skiprows=1)
    cross = max(float(np.max(np.abs(g2a[:, 1] - e2a))), abs(g3a[-1, 1] - rk),
                float(np.max(np.abs(g2d[:, 1] - (0.5 * g2d[:, 0] + 1.0)))))
    ok = not mismatched and cross <= 1e-4
    return _record(10, ok, f"{len(PRESETS) - len(mismatched)}/{len(PRESETS)} presets byte-identical to golden"
                           f"{' (mismatch: ' + ', '.join(mismatched) + ')' if mismatched else ''}; "
                           f"golden vs oracle traces {cross:.1e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _check(n):
    ok, detail = CRITERIA[n - 1]()
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_unitarity():
    _check(1)


def test_criterion_02_oracle_equivalence():
    _check(2)


def test_criterion_03_group_element():
    _check(3)


def test_criterion_04_rabi_energy():
    _check(4)


def test_criterion_05_zero_energy():
    _check(5)


def test_criterion_06_transition_identity():
    _check(6)


def test_criterion_07_lmsz_contrast():
    _check(7)


def test_criterion_08_lmsz_energy():
    _check(8)


def test_criterion_09_formula_report():
    _check(9)


def test_criterion_10_figure_regression():
    _check(10)


if __name__ == "__main__":
    for f in CRITERIA:
        f()
    print("\n".join(summary_lines()))
