import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp

from cpbfridge import drive as drv
from cpbfridge import otto
from cpbfridge.errors import NotConverged
from cpbfridge.qubit import ResonatorParams
from cpbfridge.units import H, KB_OVER_H

RES_C = ResonatorParams(4.718e9, 2.0, 140e6, role="cold")
# frozen with mpmath (30 digits), independent of the package
RATIO_4718_300MK = 0.47012297918154709
GAMMA_DOWN_COLD_AT_RESONANCE = 2125917053.1162532
IDEAL_COLD_HEAT = 3.1958138730348606e-25


def bath(t=0.3, g=76e6, s=1.0, res=RES_C):
    return otto.BathParams(t, res, g, s)


def test_bath_invariants():
    with pytest.raises(ValueError):
        bath(t=-0.1)
    with pytest.raises(ValueError):
        bath(s=0.0)
    with pytest.raises(ValueError):
        bath(s=1.2)


def test_filter_is_one_at_resonance():
    assert otto.lorentzian_filter(RES_C, RES_C.f_r) == 1.0
    assert otto.lorentzian_filter(RES_C, 6e9) < 1.0


def test_rate_down_value():
    assert otto.transition_rate_down(bath(), 4.718e9) == pytest.approx(GAMMA_DOWN_COLD_AT_RESONANCE, rel=1e-12)


def test_rate_down_spec_normalization():
    """With g-hat = 2 pi g / omega_Q the prefactor reduces to g / 2 (Hz times rad)."""
    got = otto.transition_rate_down(bath(), 4.718e9, "qubit_frequency")
    x = 4.718e9 / (KB_OVER_H * 0.3)
    assert got == pytest.approx(76e6 / 2 / -math.expm1(-x), rel=1e-12)


def test_zero_temperature_limit():
    b = bath(t=1e-3)
    bare = 2 * math.pi * 76e6 / 1e9 / (4 * math.pi) * 2 * math.pi * 4.718e9
    assert otto.transition_rate_down(b, 4.718e9) == pytest.approx(bare, rel=1e-12)
    assert otto.transition_rate_up(b, 4.718e9) < 1e-60


def test_detailed_balance_values():
    b = bath()
    r = otto.transition_rate_up(b, 4.718e9) / otto.transition_rate_down(b, 4.718e9)
    assert r == pytest.approx(RATIO_4718_300MK, rel=1e-12)
    f = math.log(2) * KB_OVER_H * 0.3
    assert otto.transition_rate_up(b, f) / otto.transition_rate_down(b, f) == pytest.approx(0.5, rel=1e-12)
    hot = bath(t=1e6)
    assert otto.transition_rate_up(hot, 5e9) / otto.transition_rate_down(hot, 5e9) == pytest.approx(1.0, abs=1e-6)


@given(st.floats(min_value=3.5e9, max_value=30e9), st.floats(min_value=0.01, max_value=5.0))
def test_detailed_balance_property(f, t):
    b = bath(t=t)
    down, up = otto.transition_rate_down(b, f), otto.transition_rate_up(b, f)
    assert down >= 0 and up >= 0
    assert up == pytest.approx(down * math.exp(-f / (KB_OVER_H * t)), rel=1e-12)


@given(st.floats(min_value=0.05, max_value=1.0))
def test_rates_scale_with_square_of_poisoning_factor(s):
    for norm in otto.NORMALIZATIONS:
        a = otto.transition_rate_down(bath(s=1.0), 5e9, norm)
        b = otto.transition_rate_down(bath(s=s), 5e9, norm)
        assert b == pytest.approx(s * s * a, rel=1e-12)


def test_heat_current_signs():
    b = bath()
    f = 5e9
    down, up = otto.transition_rate_down(b, f), otto.transition_rate_up(b, f)
    z_eq = -(down - up) / (down + up)
    assert otto.heat_current(b, f, z_eq) == pytest.approx(0.0, abs=1e-30)
    assert otto.heat_current(b, f, -1.0) == pytest.approx(H * f * up, rel=1e-12)
    assert otto.heat_current(b, f, -1.0) > 0


def test_bloch_rhs_static_fixed_point(otto_cfg):
    t = 0.0  # dq/dt = 0 at the hot endpoint
    fq = drv.qubit_frequency_of_t(otto_cfg.qubit, otto_cfg.drive, t)
    r = otto.rate_set(otto_cfg.cold, otto_cfg.hot, fq)
    z_eq = otto.equilibrium_inversion(r)
    np.testing.assert_allclose(otto.bloch_rhs([0, 0, z_eq], t, otto_cfg), 0.0, atol=1e-3)
    d = otto.bloch_rhs([1.0, 0.0, z_eq], t, otto_cfg)
    g = r.up + r.down
    assert d[0] == pytest.approx(-0.5 * g, rel=1e-12)
    assert d[1] == pytest.approx(2 * math.pi * fq, rel=1e-12)


def test_static_drive_has_no_heat_flow():
    cfg = otto.OttoConfig.device_defaults(10e6)
    ng = cfg.drive.ng_c
    cfg = replace(cfg, drive=replace(cfg.drive, ng_h=ng + 1e-12))
    res = otto.find_steady_cycle(cfg)
    assert res.converged
    scale = 1e-16  # typical heat-current size in W
    assert abs(res.q_dot_cold_avg) < 1e-6 * scale
    assert abs(res.q_dot_hot_avg) < 1e-6 * scale
    assert abs(res.work_avg) < 1e-6 * scale


def test_step_halving(otto_cfg):
    a = otto.find_steady_cycle(otto_cfg)
    b = otto.find_steady_cycle(replace(otto_cfg, max_phase_step=0.05))
    assert abs(b.q_dot_cold_avg / a.q_dot_cold_avg - 1) < 1e-4


def test_step_count_rule(otto_cfg):
    n = otto.steps_per_period(otto_cfg)
    f_max = 8.001e9
    assert 2 * math.pi * f_max * otto_cfg.drive.period / n <= 0.1
    with pytest.raises(Exception):
        otto.steps_per_period(replace(otto_cfg, max_steps_per_period=1000))


def test_bloch_norm_bounded():
    for f in (2e9, 300e6, 10e6):
        res = otto.find_steady_cycle(otto.OttoConfig.device_defaults(f), initial=(1.0, 0.0, 0.0))
        assert res.max_bloch_norm <= 1 + 1e-9


@pytest.mark.parametrize("f_drive", [10e6, 1e9])
def test_steady_state_independent_of_start(f_drive):
    cfg = otto.OttoConfig.device_defaults(f_drive)
    a = otto.find_steady_cycle(cfg, initial=(0, 0, 1))
    b = otto.find_steady_cycle(cfg, initial=(0, 0, -1))
    np.testing.assert_allclose(a.boundary_state, b.boundary_state, atol=1e-8)
    assert a.converged and b.converged


def test_not_converged_reporting(otto_cfg):
    cfg = replace(otto_cfg, max_cycles=1)
    with pytest.warns(RuntimeWarning):
        res = otto.find_steady_cycle(cfg)
    assert not res.converged and res.cycles_to_converge == 1
    with pytest.raises(NotConverged) as info:
        otto.find_steady_cycle(cfg, raise_on_failure=True)
    assert info.value.result is not None and not info.value.result.converged


@pytest.mark.parametrize("f_drive", [5e6, 200e6, 2e9])
def test_thermodynamic_audits(f_drive):
    cfg = otto.OttoConfig.device_defaults(f_drive)
    res = otto.find_steady_cycle(cfg)
    assert res.first_law_residual <= 1e-3
    slack = 1e-3 * abs(res.q_dot_cold_avg) / 0.3
    assert res.q_dot_cold_avg / 0.3 + res.q_dot_hot_avg / 0.3 <= slack
    assert res.entropy_rate >= -slack


def test_work_is_energy_balance_of_an_independent_integration(otto_cfg):
    """Work from the kernel equals the cycle integral of the Tr(rho dH/dt) power, computed with scipy."""
    res = otto.find_steady_cycle(otto_cfg)
    q, p = otto_cfg.qubit, otto_cfg.drive

    def rhs(t, y):
        d = otto.bloch_rhs(y[:3], t, otto_cfg)
        fq = drv.qubit_frequency_of_t(q, p, t)
        dt = 1e-4 * p.period
        fdot = (drv.qubit_frequency_of_t(q, p, t + dt) - drv.qubit_frequency_of_t(q, p, t - dt)) / (2 * dt)
        k = drv.mixing_angle_rate(q, p, t)
        power = 0.5 * H * fdot * y[2] + 0.5 * H * fq * k * y[0]
        return np.r_[d, power]

    sol = solve_ivp(rhs, (0, p.period), np.r_[res.boundary_state, 0.0], method="DOP853", rtol=1e-11, atol=1e-14)
    assert sol.y[3, -1] * p.f_drive == pytest.approx(res.work_avg, rel=1e-5)


def test_cooling_condition():
    assert otto.cooling_condition(4.718e9, 8.001e9, 0.3, 0.3)
    assert not otto.cooling_condition(4.0, 8.0, 1.0, 2.0)
    assert not otto.cooling_condition(4.718e9, 8.001e9, 0.3, 0.6)
    with pytest.raises(ValueError):
        otto.cooling_condition(0, 1, 1, 1)


def test_ideal_otto_heat():
    assert otto.ideal_otto_cold_heat(4.718e9, 8.001e9, 0.3, 0.3) == pytest.approx(IDEAL_COLD_HEAT, rel=1e-12)


def test_no_cooling_outside_window():
    cfg = otto.OttoConfig.device_defaults(1e6, t_hot=0.6)
    assert otto.rate_equation_cycle(cfg).heat_cold <= 0
    assert otto.find_steady_cycle(cfg).q_dot_cold_avg <= 0


def test_rate_oracle_matches_implicit_solver():
    """Exponential-step oracle against scipy's Radau on the same rate equation."""
    cfg = otto.OttoConfig.device_defaults(100e6)
    q, p, f = cfg.qubit, cfg.drive, 100e6

    def rhs(u, y):
        fq = drv.qubit_frequency_of_t(q, p, u / f)
        r = otto.rate_set(cfg.cold, cfg.hot, fq)
        return np.array([r.up * (1 - y[0]) - r.down * y[0],
                         fq * (r.gamma_c_up * (1 - y[0]) - r.gamma_c_down * y[0])]) / f

    def jac(u, y):
        fq = drv.qubit_frequency_of_t(q, p, u / f)
        r = otto.rate_set(cfg.cold, cfg.hot, fq)
        return np.array([[-(r.up + r.down), 0.0], [-fq * (r.gamma_c_up + r.gamma_c_down), 0.0]]) / f

    oracle = otto.rate_equation_cycle(cfg)
    sol = solve_ivp(rhs, (0, 1), [oracle.p_boundary, 0.0], method="Radau", jac=jac, rtol=1e-11, atol=1e-13)
    assert sol.y[0, -1] == pytest.approx(oracle.p_boundary, rel=1e-8)
    assert sol.y[1, -1] * H == pytest.approx(oracle.heat_cold, rel=1e-7)


def test_bloch_approaches_rate_equation_when_slow():
    errs = []
    for f in (100e6, 10e6):
        cfg = otto.OttoConfig.device_defaults(f)
        bloch = otto.find_steady_cycle(cfg).heat_cold_per_cycle
        rate = otto.rate_equation_cycle(cfg).heat_cold
        errs.append(abs(bloch / rate - 1))
    assert max(errs) < 0.05
    assert errs[1] <= errs[0]


def test_sweep_grid_validation_and_failure_rows(otto_cfg):
    with pytest.raises(ValueError):
        otto.sweep_drive_frequency([1e6, 3e6, 2e6], otto_cfg)
    cfg = replace(otto_cfg, max_steps_per_period=100_000)
    rows = otto.sweep_drive_frequency([1e6, 1e9], cfg)
    assert len(rows) == 2
    assert rows[0].error is not None and math.isnan(rows[0].q_dot_cold_avg)
    assert rows[1].error is None and rows[1].converged


def test_sweep_threads_deterministic():
    cfg = otto.OttoConfig.device_defaults(1e9)
    grid = np.geomspace(1e8, 2e9, 5)
    a = otto.sweep_drive_frequency(grid, cfg, threads=1)
    b = otto.sweep_drive_frequency(grid, cfg, threads=3)
    assert [r.q_dot_cold_avg for r in a] == [r.q_dot_cold_avg for r in b]


def test_peak_cooling_scales_with_square_of_poisoning_factor():
    grid = otto.default_drive_grid(60)
    peaks = []
    for s in (1.0, 0.8):
        cfg = otto.OttoConfig.device_defaults(grid[0], scale_cold=s, scale_hot=s)
        peaks.append(max(r.q_dot_cold_avg for r in otto.sweep_drive_frequency(grid, cfg)))
    assert peaks[1] / peaks[0] == pytest.approx(0.64, rel=0.15)
