# pylint: disable=redefined-outer-name,invalid-name
import math
import numpy as np
import pytest
from radialwave import exceptions
from radialwave.core import DataSpec, GaussianFamily, ReducedState, build_grid, \
                            synthesize_data
from radialwave.solver import CoefficientProfile, Trajectory, ACCUMULATORS, evolve_window
from radialwave.functionals import energy
from radialwave.transform import chart_forward, chart_inverse, phi_weight, \
                                 morawetz_weight, s_coth_s, s0, exterior_region, \
                                 omega_region, k_region, HyperboloidalChart, \
                                 push_forward, recover_v, commutator_residual, \
                                 transformed_energy, transformed_budgets, \
                                 change_of_variables_check, lemma_witness

T0 = -math.sqrt(2.0) - 1.0

@pytest.fixture(scope='module')
def chart():
    return HyperboloidalChart(T0, 1.0, -1.0, 1.0, 16, 8)

@pytest.fixture(scope='module')
def physical(chart):
    t_first, t_last = chart.time_window()
    grid = build_grid(16.0, 512)
    state0 = synthesize_data(DataSpec(GaussianFamily(1.0, 1.0, 0.0)), grid)
    return evolve_window(state0, CoefficientProfile(3.0), t_first, math.ceil(t_last))

@pytest.fixture(scope='module')
def vtraj(physical, chart):
    return push_forward(physical, chart)

@pytest.fixture(scope='module')
def quartic(chart):
    t_first, t_last = chart.time_window()
    grid = build_grid(16.0, 512)
    state0 = synthesize_data(DataSpec(GaussianFamily(1.0, 1.0, 0.0)), grid)
    physical = evolve_window(state0, CoefficientProfile(4.0), t_first, math.ceil(t_last))
    return push_forward(physical, chart)

def _free_wave(r, t):
    return np.exp(-(r - t) ** 2) - np.exp(-(r + t) ** 2)

def _free_wave_dr(r, t):
    return -2.0 * (r - t) * np.exp(-(r - t) ** 2) + 2.0 * (r + t) * np.exp(-(r + t) ** 2)

def _free_wave_dt(r, t):
    return 2.0 * (r - t) * np.exp(-(r - t) ** 2) + 2.0 * (r + t) * np.exp(-(r + t) ** 2)

@pytest.fixture(scope='module')
def free_wave():
    # w = g(r-t) - g(-r-t) solves the linear equation exactly
    grid = build_grid(8.0, 256)
    states = [ReducedState(grid, n * grid.dr, _free_wave(grid.r, n * grid.dr),
                           _free_wave_dt(grid.r, n * grid.dr))
              for n in range(-66, 59)]
    return Trajectory(grid, grid.dr, 1, states)

def test_chart_round_trip():
    s, tau = np.meshgrid(np.linspace(0.0, 3.0, 31), np.linspace(-1.0, 1.0, 21))
    r, t = chart_forward(s, tau, T0)
    back_s, back_tau = chart_inverse(r, t, T0)
    assert np.max(np.abs(back_s - s)) < 1e-10
    assert np.max(np.abs(back_tau - tau)) < 1e-10
    gap = (t - T0) ** 2 - r * r
    assert np.max(np.abs(gap - np.exp(2.0 * tau)) / ((t - T0) ** 2 + r * r)) < 1e-14

def test_chart_scalars():
    r, t = chart_forward(0.0, 0.0, T0)
    assert isinstance(r, float)
    assert r == 0.0
    assert t == T0 + 1.0
    s, tau = chart_inverse(0.0, T0 + 1.0, T0)
    assert s == 0.0
    assert tau == 0.0
    with pytest.raises(exceptions.InvalidArgumentError):
        chart_forward(-1.0, 0.0, T0)

def test_chart_inverse_outside_cone():
    with pytest.raises(exceptions.OutsideConeError) as ex:
        chart_inverse(np.array([0.5, 3.0]), np.array([0.0, 0.0]), T0)
    assert ex.value.r == 3.0
    assert ex.value.t0 == T0
    with pytest.raises(exceptions.OutsideConeError):
        chart_inverse(1.0, T0 + 1.0, T0)

def test_phi_weight():
    assert phi_weight(0.0, 4.0) == 1.0
    assert isinstance(phi_weight(0.5, 4.0), float)
    s = np.linspace(0.0, 40.0, 4001)
    phi = phi_weight(s, 4.0)
    assert np.all((phi > 0) & (phi <= 1.0))
    assert np.all(np.isfinite(phi))
    assert phi_weight(1.0, 3.0) == pytest.approx((1.0 / math.sinh(1.0)) ** 2, rel=1e-14)
    below = phi_weight(1e-4 * (1.0 - 1e-9), 4.5)
    above = phi_weight(1e-4 * (1.0 + 1e-9), 4.5)
    assert below == pytest.approx(above, rel=1e-12, abs=0)
    with pytest.raises(exceptions.InvalidArgumentError):
        phi_weight(-0.1, 4.0)

def test_s_coth_s():
    assert s_coth_s(np.array([0.0]))[0] == 1.0
    assert s_coth_s(np.array([2.0]))[0] == pytest.approx(2.0 / math.tanh(2.0), rel=1e-14)

def test_morawetz_weight():
    s = np.linspace(0.1, 5.0, 50)
    weight = morawetz_weight(s, 4.0)
    closed = 3.0 * s ** 3 * np.cosh(s) / np.sinh(s) ** 4
    assert np.allclose(weight, closed, rtol=1e-12, atol=0)
    assert np.all(weight > 0)
    with pytest.raises(exceptions.InvalidArgumentError):
        morawetz_weight(0.0, 4.0)

def test_split_radius():
    assert s0(0.0, T0) == pytest.approx(math.acosh(-T0))
    with pytest.raises(exceptions.InvalidArgumentError):
        s0(2.0, T0)

def test_regions():
    r = np.array([3.0, 1.0, 3.0])
    t = np.array([1.0, 1.0, -1.0])
    assert list(exterior_region(1.0)(r, t)) == [True, False, False]
    assert list(omega_region(T0)(np.array([0.0, 5.0]), np.array([0.0, 0.0]))) == [True, False]
    inside = k_region(T0)(np.array([0.0, 0.0]), np.array([T0 + 0.5, T0 + 2.0]))
    assert list(inside) == [True, False]

def test_chart_grid(chart):
    assert chart.ds == 1.0 / 16
    assert chart.dtau == 0.25
    assert chart.tau_grid[4] == 0.0
    assert chart.grid().J == 16
    t_first, t_last = chart.time_window()
    assert t_first == pytest.approx(T0 + math.exp(-1.0))
    assert t_last == pytest.approx(T0 + math.e * math.cosh(1.0))
    R, T = chart.nodes()
    assert R.shape == (9, 17)
    assert np.max(R) == pytest.approx(chart.r_reach)
    assert chart.to_dict()['s_J'] == 16

def test_chart_validation():
    with pytest.raises(exceptions.InvalidArgumentError):
        HyperboloidalChart(-0.5, 1.0, -1.0, 1.0, 16, 8)
    with pytest.raises(exceptions.InvalidArgumentError):
        HyperboloidalChart(T0, 1.0, 1.0, -1.0, 16, 8)
    with pytest.raises(exceptions.InvalidArgumentError):
        HyperboloidalChart(T0, 1.0, -1.0, 1.0, 4, 8)
    with pytest.raises(exceptions.InvalidArgumentError):
        HyperboloidalChart(T0, 3.0, -1.0, 1.0, 16, 8, r_max=10.0)

def test_push_forward(vtraj, chart):
    assert len(vtraj) == chart.tau_J + 1
    assert np.allclose(vtraj.times, chart.tau_grid)
    assert vtraj.grid == chart.grid()
    assert vtraj.profile.kind == 'hyperbolic'
    assert vtraj.profile.kappa == 0.0
    assert vtraj.diagnostics['method'] == 'linear'
    for state in vtraj.snapshots:
        assert state.w[0] == 0.0
        assert state.wdot[0] == 0.0
    for name in ACCUMULATORS:
        assert len(vtraj.accumulators[name]) == len(vtraj)
    assert np.all(np.isfinite(recover_v(vtraj.snapshots[4])))

def test_push_forward_matches_field(physical, chart):
    # s*v at a node equals w at its image, so both interpolations agree closely
    cubic = push_forward(physical, chart, method='cubic')
    linear = push_forward(physical, chart)
    scale = np.max(np.abs(cubic.levels()))
    assert np.max(np.abs(cubic.levels() - linear.levels())) < 1e-2 * scale

def test_push_forward_coverage(physical, chart):
    short = physical.upto(0.0)
    with pytest.raises(exceptions.CoverageError) as ex:
        push_forward(short, chart)
    assert ex.value.nodes
    with pytest.raises(exceptions.InvalidArgumentError):
        push_forward(physical, chart, method='quintic')

def test_commutator_t3():
    def field(r, t):
        return np.exp(-r * r - t * t)
    residual = commutator_residual(field, 'T3', 0.01)
    assert residual.max_norm <= 1e-8
    with pytest.raises(exceptions.InvalidArgumentError):
        commutator_residual(field, 'T5', 0.01)

def test_commutator_t4_order():
    def field(r, t):
        return np.exp(-(r - 5.0) ** 2 - (t + 5.0) ** 2)
    coarse = commutator_residual(field, 'T4', 0.02).max_norm
    fine = commutator_residual(field, 'T4', 0.01).max_norm
    assert 3.0 <= coarse / fine <= 5.0

def test_change_of_variables():
    def density(r, t):
        return np.exp(-(r * r + (t - T0 - 2.0) ** 2) / 4.0)
    check = change_of_variables_check(density, T0, 2.0, 1.0, 1024)
    assert check.physical > 0
    assert check.relative <= 1e-2

def test_transformed_energy(vtraj):
    state = vtraj.at(0.0)
    split = transformed_energy(state, 3.0, T0)
    assert split.s0 == pytest.approx(math.acosh(-T0))
    assert split.energy == pytest.approx(energy(state, CoefficientProfile.transformed(3.0)))
    assert split.interior >= 0 and split.exterior >= 0
    assert split.interior + split.exterior <= split.energy * (1.0 + 1e-12)

def test_transformed_budgets(vtraj):
    budgets = transformed_budgets(vtraj, 3.0)
    assert sorted(budgets) == ['I2', 'I_prime', 'morawetz']
    assert budgets['I2'].passed
    assert budgets['I2'].details['pointwise']
    assert budgets['I_prime'].passed
    assert budgets['morawetz'].value >= 0
    with pytest.raises(exceptions.InvalidArgumentError):
        transformed_budgets(vtraj, 3.0, with_dissipation=True)

def test_lemma_witness(vtraj):
    witness = lemma_witness(vtraj, 3.0, T0)
    assert -1.0 <= witness.tau <= 0.0
    assert len(witness.series) == 5
    assert witness.energy == min(e.energy for e in witness.series)
    with pytest.raises(exceptions.InvalidArgumentError):
        lemma_witness(vtraj, 3.0, T0, (5.0, 6.0))

@pytest.mark.parametrize('method,level_tol,velocity_tol', [
    ('linear', 2e-3, 5e-2),
    ('cubic', 1e-4, 1e-2),
])
def test_push_forward_free_wave(free_wave, chart, method, level_tol, velocity_tol):
    R, T = chart.nodes()
    S, TAU = np.meshgrid(chart.s_grid, chart.tau_grid)
    exact = _free_wave(R, T)
    exact_tau = np.exp(TAU) * (np.sinh(S) * _free_wave_dr(R, T) +
                               np.cosh(S) * _free_wave_dt(R, T))
    vtraj = push_forward(free_wave, chart, method, p=3.0)
    assert np.max(np.abs(vtraj.levels() - exact)) < level_tol
    assert np.max(np.abs(vtraj.velocities() - exact_tau)) < velocity_tol

def test_transformed_budgets_quartic(quartic):
    budgets = transformed_budgets(quartic, 4.0)
    assert sorted(budgets) == ['I2', 'I_prime', 'dissipation', 'morawetz']
    e0 = energy(quartic.at(0.0), CoefficientProfile.transformed(4.0))
    dissipation = budgets['dissipation']
    assert dissipation.bound == pytest.approx(5.0 * e0)
    assert 0 < dissipation.value <= dissipation.bound
    assert dissipation.passed
    assert budgets['I_prime'].passed
    assert budgets['I2'].passed
    assert budgets['I2'].details['pointwise']
