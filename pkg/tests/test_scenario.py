import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glauber_su2.scenario import (
    LMSZ,
    Constant,
    Rabi,
    ScenarioError,
    Tabulated,
    UnsupportedVariantError,
    dimensionless_time,
    evaluate,
    scenario_from_dict,
)

_real = st.floats(min_value=-50, max_value=50, allow_nan=False)
_pos = st.floats(min_value=1e-3, max_value=20, allow_nan=False)


def test_constant_evaluate():
    assert evaluate(Constant(1.0, 0.1), 7.0) == (1.0, 0.1 + 0j)


def test_rabi_evaluate_at_zero():
    assert evaluate(Rabi(1.0, 0.1, 0.5), 0.0) == (1.0, 0.1 + 0j)


def test_lmsz_evaluate():
    assert evaluate(LMSZ(1.0, 1.0), -3.0) == (-3.0, 1.0 + 0j)


def test_tabulated_interpolates_linearly():
    s = Tabulated([0.0, 1.0, 3.0], [0.0, 2.0, -2.0], [1.0, 1.0, 0.0], [0.0, -1.0, 1.0])
    Om, w = s.evaluate(2.0)
    assert Om == pytest.approx(0.0)
    assert w == pytest.approx(0.5 + 0j)
    assert s.evaluate(0.5) == pytest.approx((1.0, 1.0 - 0.5j))


def test_tabulated_out_of_range():
    s = Tabulated([0.0, 1.0], [0.0, 0.0], [1.0, 1.0], [0.0, 0.0])
    with pytest.raises(ScenarioError):
        s.evaluate(1.5)
    with pytest.raises(ScenarioError):
        s.omega_integral(-0.1)


def test_dimensionless_time_examples():
    assert dimensionless_time(Rabi(1.0, 0.1, 0.5), 4.0) == 2.0
    assert dimensionless_time(LMSZ(4.0, 1.0), 3.0) == 6.0
    assert dimensionless_time(LMSZ(1.0, 1.0), 0.0) == 0.0


@pytest.mark.parametrize("s", [Constant(1.0, 0.1), Tabulated([0.0, 1.0], [0.0, 0.0], [1.0, 1.0], [0.0, 0.0])])
def test_dimensionless_time_unsupported(s):
    with pytest.raises(UnsupportedVariantError):
        dimensionless_time(s, 1.0)


@pytest.mark.parametrize(
    "factory, field",
    [
        (lambda: Constant(1.0, -0.1), "omega0"),
        (lambda: Rabi(1.0, -1.0, 0.5), "omega0"),
        (lambda: LMSZ(-1.0, 1.0), "gamma"),
        (lambda: LMSZ(1.0, 1.0, 5.0, 5.0), "tau_f"),
        (lambda: Tabulated([0.0], [0.0], [0.0], [0.0]), "times"),
        (lambda: Tabulated([0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]), "times"),
        (lambda: Tabulated([0.0, 1.0], [0.0], [0.0, 0.0], [0.0, 0.0]), "Omega"),
        (lambda: Constant(float("nan"), 0.1), "Omega0"),
    ],
)
def test_invalid_scenarios(factory, field):
    with pytest.raises(ScenarioError) as info:
        factory()
    assert field in [p[0] for p in info.value.problems]


def test_start_times_and_integrals():
    s = LMSZ(4.0, 1.0, -10.0, 10.0)
    assert s.start_time == -5.0
    assert s.omega_integral(s.start_time) == 0.0
    assert s.omega_integral(5.0) == pytest.approx(0.0)
    assert s.omega_integral(0.0) == pytest.approx(-50.0)
    assert Rabi(2.0, 0.1, 1.0).omega_integral(3.0) == 6.0
    assert s.chi == pytest.approx(0.5)


def test_tabulated_integral_is_exact_for_piecewise_linear():
    s = Tabulated([0.0, 1.0, 2.0, 4.0], [1.0, 3.0, -1.0, 1.0], [0.0] * 4, [0.0] * 4)
    assert s.omega_integral(4.0) == pytest.approx(2.0 + 1.0 + 0.0)
    assert s.omega_integral(1.5) == pytest.approx(2.0 + 0.5 * (3.0 + 1.0) * 0.5)
    assert s.breakpoints(0.0, 4.0) == [1.0, 2.0]


def test_from_functions_samples_pre_rwa_drive():
    ts = np.linspace(0, 2, 5)
    s = Tabulated.from_functions(ts, lambda t: 1.0, lambda t: 0.1 * math.cos(0.5 * t))
    assert s.evaluate(2.0)[1] == pytest.approx(0.1 * math.cos(1.0))


@pytest.mark.parametrize(
    "s",
    [Constant(1.0, 0.1), Rabi(1.0, 0.1, 0.5), LMSZ(2.0, 0.5, -8.0, 3.0),
     Tabulated([0.0, 1.0], [0.5, 0.25], [1.0, 0.0], [0.0, 2.0])],
)
def test_dict_round_trip(s):
    assert scenario_from_dict(s.to_dict()) == s


@pytest.mark.parametrize(
    "data",
    [{"type": "warp"}, {"type": "constant", "Omega0": 1.0}, {"type": "rabi", "Omega0": 1, "omega0": 0.1, "nu0": 1, "x": 2}, [1]],
)
def test_bad_dicts(data):
    with pytest.raises(ScenarioError):
        scenario_from_dict(data)


@settings(max_examples=100, deadline=None)
@given(_real, _pos, _real, _real)
def test_evaluate_is_pure(Om, w, nu, t):
    for s in (Constant(Om, w), Rabi(Om, w, nu)):
        assert evaluate(s, t) == evaluate(s, t)


@settings(max_examples=100, deadline=None)
@given(_real, _pos, _real, _real)
def test_rabi_coupling_modulus_constant(Om, w, nu, t):
    assert abs(evaluate(Rabi(Om, w, nu), t)[1]) == pytest.approx(w, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(_pos, _pos, _real)
def test_lmsz_omega_is_odd(g, w, t):
    s = LMSZ(g, w)
    assert evaluate(s, -t)[0] == -evaluate(s, t)[0]
