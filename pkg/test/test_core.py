# pylint: disable=redefined-outer-name,invalid-name
import math
import numpy as np
import pytest
from radialwave import exceptions
from radialwave.core import Parameters, ReducedState, DataSpec, ZeroFamily, \
                            GaussianFamily, TailFamily, DerivativeFamily, \
                            build_grid, synthesize_data, zero_state, u_from_w, \
                            recover_u, gradient_term, energy_norm, support_radius, \
                            odd_extension, smooth_cutoff, family_from_dict, \
                            weighted_data_norm, pointwise_tail_check

def test_parameters_defaults():
    params = Parameters(3, 0.5)
    assert params.delta == 0.1
    assert params.t0 == -math.sqrt(2.0) - 1.0
    assert params.A == 1.0
    assert params.kappa == 0.0
    assert Parameters(3, 0.1).delta == 0.05
    assert Parameters(4, 0.5, R=3.0).t0 == -math.sqrt(10.0) - 1.0

@pytest.mark.parametrize('fields', [
    {'p': 5, 'epsilon': 0.5},
    {'p': 2.5, 'epsilon': 0.5},
    {'p': 3, 'epsilon': 0},
    {'p': 3, 'epsilon': 0.5, 'delta': 0.5},
    {'p': 3, 'epsilon': 0.5, 'delta': 0.2},
    {'p': 3, 'epsilon': 0.5, 'kappa': -1},
    {'p': 3, 'epsilon': 0.5, 'R': 0.5},
    {'p': 3, 'epsilon': 0.5, 't0': -0.5},
    {'p': 3, 'epsilon': 0.5, 'B1': 0},
])
def test_parameters_invalid(fields):
    with pytest.raises(exceptions.InvalidArgumentError):
        Parameters(**fields)

def test_parameters_replace():
    params = Parameters(3, 0.5)
    moved = params.replace(R=3.0, t0=None)
    assert moved.R == 3.0
    assert moved.t0 == -math.sqrt(10.0) - 1.0
    assert params.replace(delta=None, epsilon=0.1).delta == 0.05

def test_build_grid():
    grid = build_grid(10.0, 100)
    assert grid.dr == 0.1
    assert grid.J == 100
    assert len(grid.r) == 101
    assert grid.r[0] == 0.0
    assert grid.r_max == pytest.approx(10.0)
    with pytest.raises(ValueError):
        grid.r[3] = 1.0
    assert build_grid(10.0, 100) == grid
    for r_max, J in ((0.0, 100), (10.0, 4), (10.0, 10.5)):
        with pytest.raises(exceptions.InvalidArgumentError):
            build_grid(r_max, J)

def test_state_checks(small_grid):
    n = small_grid.J + 1
    w = np.zeros(n)
    w[0] = 1.0
    with pytest.raises(exceptions.InvalidArgumentError):
        ReducedState(small_grid, 0.0, w, np.zeros(n))
    with pytest.raises(exceptions.InvalidArgumentError):
        ReducedState(small_grid, 0.0, np.zeros(n - 1), np.zeros(n - 1))
    state = zero_state(small_grid)
    with pytest.raises(ValueError):
        state.w[1] = 1.0

def test_u_from_w_origin():
    grid = build_grid(1.0, 16)
    r = grid.r
    u = 1.0 - r * r
    assert np.allclose(u_from_w(r * u, r), u, rtol=0, atol=1e-14)

def test_recover_u(gaussian_state):
    r = gaussian_state.grid.r
    assert np.allclose(recover_u(gaussian_state), np.exp(-r * r), atol=1e-6)

def test_gradient_term(gaussian_state):
    g = gradient_term(gaussian_state)
    r = gaussian_state.grid.r
    assert g[0] == 0.0
    # r u_r for u = exp(-r^2)
    assert np.max(np.abs(g - (-2.0 * r * r * np.exp(-r * r)))) < 1e-3

def test_energy_norm(small_grid, gaussian_state):
    assert energy_norm(zero_state(small_grid)) == 0.0
    # ||grad u||^2 = 4 pi int 4 r^4 e^{-2r^2} dr = 3 pi^(3/2) / (2 sqrt 2)
    exact = math.sqrt(3.0 * math.pi ** 1.5 / (2.0 * math.sqrt(2.0)))
    assert energy_norm(gaussian_state) == pytest.approx(exact, rel=1e-3)
    assert energy_norm(gaussian_state.scaled(2.0)) == pytest.approx(
        2.0 * energy_norm(gaussian_state))

def test_support_radius(small_grid, gaussian_state):
    assert support_radius(zero_state(small_grid)) == 0.0
    assert 5.0 < support_radius(gaussian_state) < 6.0

def test_odd_extension():
    out = odd_extension([0.0, 1.0, 2.0, 3.0], 2, 1)
    assert list(out) == [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 0.0]
    assert odd_extension([[0.0, 1.0], [0.0, 2.0]], 1, 0).tolist() == [[-1.0, 0.0, 1.0],
                                                                       [-2.0, 0.0, 2.0]]

def test_smooth_cutoff():
    chi, dchi = smooth_cutoff([0.0, 0.5, 1.0, 2.0, 3.0])
    assert list(chi) == [1.0, 1.0, 1.0, 0.0, 0.0]
    assert list(dchi) == [0.0, 0.0, 0.0, 0.0, 0.0]
    chi, dchi = smooth_cutoff(np.linspace(1.01, 1.99, 50))
    assert np.all((chi > 0) & (chi < 1))
    assert np.all(np.diff(chi) < 0)
    assert np.all(dchi < 0)

def test_family_validation():
    with pytest.raises(exceptions.InvalidArgumentError):
        GaussianFamily(1.0, 1.0, 0.0).validate(build_grid(4.0, 64))
    with pytest.raises(exceptions.InvalidArgumentError):
        TailFamily(0.5, 0.0, 1.0, 2.0).validate(build_grid(40.0, 64))
    with pytest.raises(exceptions.InvalidArgumentError):
        TailFamily(0.5, 0.5, 1.0, 25.0).validate(build_grid(40.0, 64))
    with pytest.raises(exceptions.InvalidArgumentError):
        DataSpec(DerivativeFamily())
    with pytest.raises(exceptions.InvalidArgumentError):
        family_from_dict({'family': 'square'})

def test_family_dicts():
    spec = DataSpec.from_dict({'position': {'family': 'tail', 'epsilon': 0.5, 'eta': 0.5,
                                            'amplitude': 2.0, 'cutoff': 10.0},
                               'velocity': {'family': 'derivative'}})
    assert isinstance(spec.position, TailFamily)
    assert spec.position.exponent == 2.0
    assert spec.support_radius() == 20.0
    assert spec.to_dict()['velocity'] == {'family': 'derivative'}
    assert isinstance(DataSpec.from_dict({}).position, ZeroFamily)

def test_synthesize_data(small_grid):
    spec = DataSpec(GaussianFamily(2.0, 1.0, 0.0), DerivativeFamily())
    state = synthesize_data(spec, small_grid)
    r = small_grid.r
    assert state.t == 0.0
    assert state.w[0] == 0.0 and state.wdot[0] == 0.0
    assert np.allclose(state.w, 2.0 * r * np.exp(-r * r))
    assert np.allclose(state.wdot, -4.0 * r * r * np.exp(-r * r))

def test_tail_derivative():
    family = TailFamily(0.5, 0.5, 1.0, 4.0)
    r = np.linspace(0.5, 9.5, 2001)
    numeric = np.gradient(family(r), r, edge_order=2)
    assert np.max(np.abs(numeric - family.derivative(r))) < 1e-4

def test_weighted_data_norm(small_grid, gaussian_state):
    norm = weighted_data_norm(gaussian_state, small_grid, 0.5)
    assert norm.norm_mu > 0
    assert norm.norm_r ** 2 <= norm.norm_mu ** 2 / (4.0 * math.pi)
    later = ReducedState(small_grid, 1.0, gaussian_state.w, gaussian_state.wdot)
    with pytest.raises(exceptions.InvalidArgumentError):
        weighted_data_norm(later, small_grid, 0.5)
    with pytest.raises(exceptions.InvalidArgumentError):
        weighted_data_norm(gaussian_state, build_grid(16.0, 512), 0.5)

def test_pointwise_tail_check():
    grid = build_grid(40.0, 1024)
    state = synthesize_data(DataSpec(TailFamily(0.5, 0.5, 1.0, 10.0)), grid)
    check = pointwise_tail_check(state, 1.0, 0.5)
    assert check.passed
    assert check.ratio <= 1.0
    check = pointwise_tail_check(state, 1e-3, 0.5)
    assert not check.passed
    assert check.ratio > 100

def test_pointwise_tail_check_later_state():
    grid = build_grid(40.0, 1024)
    state = synthesize_data(DataSpec(TailFamily(0.5, 0.5, 1.0, 10.0)), grid)
    later = ReducedState(grid, 1.0, state.w, state.wdot)
    check = pointwise_tail_check(later, 1.0, 0.5)
    assert not check.passed
    assert math.isinf(check.ratio)

def test_weighted_data_norm_scaling(small_grid, gaussian_state):
    norm = weighted_data_norm(gaussian_state, small_grid, 0.5)
    doubled = weighted_data_norm(gaussian_state.scaled(2.0), small_grid, 0.5)
    assert doubled.norm_mu == pytest.approx(2.0 * norm.norm_mu, rel=1e-12)
    assert doubled.norm_mu ** 2 == pytest.approx(4.0 * norm.norm_mu ** 2, rel=1e-12)
    assert doubled.norm_r == pytest.approx(2.0 * norm.norm_r, rel=1e-12)

def test_weighted_data_norm_refinement(gaussian_spec):
    norms = []
    for J in (512, 1024, 2048):
        grid = build_grid(16.0, J)
        norms.append(weighted_data_norm(synthesize_data(gaussian_spec, grid), grid, 0.5).norm_mu)
    ratio = abs(norms[0] - norms[1]) / abs(norms[1] - norms[2])
    assert 3.0 <= ratio <= 5.0

def test_cutoff_radius():
    assert DataSpec(TailFamily(0.5, 0.5, 1.0, 10.0)).cutoff_radius() == 10.0
    assert DataSpec(GaussianFamily(1.0, 1.0, 0.0)).cutoff_radius() == 1.0
    assert DataSpec(GaussianFamily(1.0, 0.5, 2.0)).cutoff_radius() == 2.5
    assert DataSpec.from_dict({}).cutoff_radius() == 0.0
