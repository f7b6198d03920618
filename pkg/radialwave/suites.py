"""
Named verification suites. Each suite runs pinned experiments and returns
a list of :class:`Check` verdicts.
"""

# pylint: disable=invalid-name

import collections
import logging
import math
import numpy as np
from radialwave import exceptions
from radialwave import functionals
from radialwave import transform
from radialwave.core import DataSpec, GaussianFamily, DerivativeFamily, TailFamily, \
                            Parameters, build_grid, synthesize_data, energy_norm
from radialwave.solver import CoefficientProfile, dalembert_free, evolve_leapfrog, \
                              evolve_window, picard_solve, pde_residual, \
                              continuous_dependence

_logger = logging.getLogger(__name__)

class Check(object):
    """
    Verdict of one property check.
    """
    def __init__(self, name, passed, **details):
        self.name = name
        self.passed = bool(passed)
        self.details = details

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed, 'details': self.details}

    def __repr__(self):
        return 'Check(%r, %r)' % (self.name, self.passed)

def _ratio_ok(coarse, fine, lo=3.5, hi=4.5):
    ratio = coarse / fine if fine > 0 else float('inf')
    return ratio, lo <= ratio <= hi

def _gaussian(grid):
    return synthesize_data(DataSpec(GaussianFamily(1.0, 1.0, 0.0)), grid)

def _window_radius(T, margin=2.0):
    return GaussianFamily().support_radius() + T + margin

def _evolve(p, kind, kappa, T, J, progress=None, stride=1, r_max=None):
    grid = build_grid(r_max or _window_radius(T), J)
    profile = CoefficientProfile(p, kappa, kind)
    return evolve_leapfrog(_gaussian(grid), profile, T, stride=stride, progress=progress), profile

def radial_gaussian(r, t):
    return np.exp(-r * r - t * t)

def bump(r, t):
    return np.exp(-(r - 5.0) ** 2 - (t + 5.0) ** 2)

def change_density(t0):
    def density(r, t):
        return np.exp(-(r * r + (t - t0 - 2.0) ** 2) / 4.0)
    return density

def identities(progress=None):
    """
    Commuting identities of the transformation, the change of variables,
    and the closed-form Morawetz weight.
    """
    # pylint: disable=unused-argument
    checks = []
    t3 = transform.commutator_residual(radial_gaussian, 'T3', 0.01)
    checks.append(Check('commutator_T3', t3.max_norm <= 1e-8, residual=t3.max_norm))

    coarse = transform.commutator_residual(bump, 'T4', 0.01).max_norm
    fine = transform.commutator_residual(bump, 'T4', 0.005).max_norm
    ratio, ok = _ratio_ok(coarse, fine)
    checks.append(Check('commutator_T4_order', ok, coarse=coarse, fine=fine, ratio=ratio))

    t0 = -math.sqrt(2.0) - 1.0
    cov = transform.change_of_variables_check(change_density(t0), t0, 2.0, 1.0, 2048)
    checks.append(Check('change_of_variables', cov.relative <= 1e-3,
                        physical=cov.physical, transformed=cov.transformed,
                        relative=cov.relative))

    gaps = []
    for J in (256, 512):
        grid = build_grid(4.0, J)
        # pylint: disable=protected-access
        gaps.append(functionals._closed_form_gap(CoefficientProfile(4.0, 1.0, 'hyperbolic'),
                                                 grid))
    ratio, ok = _ratio_ok(gaps[0], gaps[1], 3.0, 5.0)
    checks.append(Check('morawetz_weight_closed_form', ok, gaps=gaps, ratio=ratio))
    return checks

def backends(progress=None):
    """
    Exactness of the lattice scheme, agreement of the two backends and
    linear dependence on the data.
    """
    checks = []
    grid = build_grid(_window_radius(10.0) + 2.0, 2048)
    state0 = _gaussian(grid)
    free = CoefficientProfile(3.0, kind='free')
    traj = evolve_leapfrog(state0, free, 10.0, progress=progress)
    last = traj.snapshots[-1]
    exact = dalembert_free(state0, last.t)
    scale = np.max(np.abs(exact.w))
    err = float(np.max(np.abs(last.w - exact.w)) / scale)
    checks.append(Check('linear_exactness', err <= 1e-12, relative=err))

    profile = CoefficientProfile(3.0)
    for J in (512, 1024):
        grid = build_grid(10.0, J)
        state0 = _gaussian(grid)
        leap = evolve_leapfrog(state0, profile, 0.5).levels()
        pic = picard_solve(state0, profile, 0.5, iters=8)
        gap = float(np.max(np.abs(pic.levels() - leap)))
        bound = 10.0 * grid.dr ** 2
        checks.append(Check('backend_agreement_J%d' % J,
                            gap <= bound and pic.diagnostics['gap'] < 1e-8,
                            gap=gap, bound=bound, picard_gap=pic.diagnostics['gap']))

    grid = build_grid(_window_radius(5.0) + 4.0, 1024)
    dep = continuous_dependence(DataSpec(GaussianFamily(1.0, 1.0, 0.0)), grid, profile, 5.0)
    checks.append(Check('continuous_dependence', dep.passed, ratios=dep.ratios))
    return checks

def monotonicity(progress=None):
    """
    Energy conservation at second order without damping, monotone decay
    and the dissipation identity with damping.
    """
    checks = []
    drifts = []
    for J in (2048, 4096):
        traj, profile = _evolve(3.0, 'unit', 0.0, 10.0, J, progress, stride=16,
                                r_max=40.0)
        drifts.append(functionals.conservation_check(traj, profile).value)
    ratio, ok = _ratio_ok(drifts[0], drifts[1])
    checks.append(Check('energy_drift_order', ok, drifts=drifts, ratio=ratio))
    checks.append(Check('energy_drift', drifts[1] <= 1e-4, drift=drifts[1]))

    traj, profile = _evolve(4.0, 'hyperbolic', 1.0, 20.0, 8192, progress, stride=32)
    mono = functionals.monotonicity_check(traj, profile)
    checks.append(Check('energy_monotone', mono.passed, rise=mono.value, bound=mono.bound))
    diss = functionals.dissipation_check(traj, profile)
    e0 = diss.details['energy0']
    checks.append(Check('dissipation_identity', diss.details['defect'] <= 1e-3 * e0,
                        defect=diss.details['defect'], energy0=e0))
    checks.append(Check('dissipation_bound', diss.passed, value=diss.value, bound=diss.bound))
    return checks

def morawetz(progress=None):
    """
    Morawetz budgets saturate and stay below the envelope.
    """
    checks = []
    horizons = [5.0, 10.0, 20.0, 40.0]
    for p in (3.0, 4.0):
        for kind, kappa in (('unit', 0.0), ('hyperbolic', p - 3.0)):
            traj, profile = _evolve(p, kind, kappa, 40.0, 2048, progress, stride=8,
                                    r_max=51.2)
            budget = functionals.morawetz_budget(traj, profile)
            series = traj.accumulators['morawetz']
            values = [float(series[traj.index(T)]) for T in horizons]
            increments = np.diff(values)
            monotone = bool(np.all(np.diff(series) >= -1e-14))
            shrinking = all(b <= a / 2.0 for a, b in zip(increments[:-1], increments[1:]))
            checks.append(Check('morawetz_%s_p%g' % (kind, p),
                                monotone and shrinking and budget.passed,
                                values=values, bound=budget.bound))
    return checks

def _transform_run(J, s_J, progress=None):
    params = Parameters(3.0, 0.5)
    chart = transform.HyperboloidalChart(params.t0, 2.0, -1.0, 1.0, s_J, s_J)
    t_first, t_last = chart.time_window()
    grid = build_grid(_window_radius(t_last - t_first) + 2.0, J)
    profile = CoefficientProfile(3.0)
    traj = evolve_window(_gaussian(grid), profile, t_first, math.ceil(t_last) + 0.5,
                         progress=progress)
    return transform.push_forward(traj, chart, method='cubic'), chart

def transform_suite(progress=None):
    """
    Fidelity of the pushed-forward solution and the transformed integrals.
    """
    checks = []
    residuals = []
    witnesses = []
    for J, s_J in ((2048, 64), (4096, 128)):
        vtraj, chart = _transform_run(J, s_J, progress)
        residuals.append(float(np.max(pde_residual(vtraj,
                                                   CoefficientProfile.transformed(3.0)).max_norm)))
        witnesses.append(transform.lemma_witness(vtraj, 3.0, chart.t0).energy)
        if J == 4096:
            budgets = transform.transformed_budgets(vtraj, 3.0)
            for name, entry in sorted(budgets.items()):
                passed = entry.passed and entry.details.get('pointwise', True)
                checks.append(Check('transformed_' + name, passed,
                                    value=entry.value, bound=entry.bound))
    ratio = residuals[0] / residuals[1] if residuals[1] > 0 else float('inf')
    checks.append(Check('cp2_residual_order', ratio >= 3.5, residuals=residuals, ratio=ratio))
    change = abs(witnesses[1] - witnesses[0]) / witnesses[1]
    checks.append(Check('transformed_energy_uniform', change <= 0.05,
                        energies=witnesses, change=change))
    return checks

def scattering(progress=None):
    """
    Cauchy defects of the free pullback decay and the scattering size
    saturates.
    """
    checks = []
    traj, profile = _evolve(3.0, 'unit', 0.0, 40.0, 4096, progress, stride=16, r_max=51.2)
    e0 = functionals.energy(traj.snapshots[0], profile)
    early = functionals.scattering_pullback(traj, 10.0, 20.0).defect
    late = functionals.scattering_pullback(traj, 20.0, 40.0).defect
    checks.append(Check('defect_decreasing', early > late, early=early, late=late))
    checks.append(Check('defect_small', late <= 1e-2 * math.sqrt(e0),
                        late=late, bound=1e-2 * math.sqrt(e0)))
    size = traj.accumulators['spacetime']
    at20 = float(size[traj.index(20.0)])
    at40 = float(size[-1])
    checks.append(Check('scattering_size_saturates', at40 - at20 <= 0.1 * at20,
                        I20=at20, I40=at40))
    chain = functionals.scattering_chain_check(traj, 20.0, 40.0)
    checks.append(Check('duhamel_chain', chain.passed, defect=chain.value, bound=chain.bound))

    free = CoefficientProfile(3.0, kind='free')
    grid = build_grid(40.0, 2048)
    linear = evolve_leapfrog(_gaussian(grid), free, 20.0, stride=8)
    norm0 = energy_norm(linear.snapshots[0])
    defect = functionals.scattering_pullback(linear, 10.0, 20.0).defect
    checks.append(Check('linear_defect', defect <= 1e-12 * norm0, defect=defect))
    return checks

def decay(progress=None):
    """
    Exterior decay with constants calibrated on the first unit of time.
    """
    T = 40.0
    cutoff = 25.0
    grid = build_grid(100.0, 8192)
    spec = DataSpec(TailFamily(0.5, 0.5, 1.0, cutoff), DerivativeFamily())
    params = Parameters(3.0, 0.5)
    traj = evolve_leapfrog(synthesize_data(spec, grid), CoefficientProfile(3.0), T,
                           stride=16, progress=progress)
    calibration = functionals.calibrate_exterior(traj, params, spec)
    table = functionals.exterior_decay_report(traj, calibration.params, spec, calibration.C)
    return [Check('exterior_decay', table.passed, es1_max=table.es1_max,
                  characteristic_max=table.characteristic_max,
                  B1=calibration.params.B1, R=calibration.params.R, C=calibration.C)]

SUITES = collections.OrderedDict([
    ('identities', identities),
    ('backends', backends),
    ('monotonicity', monotonicity),
    ('morawetz', morawetz),
    ('transform', transform_suite),
    ('scattering', scattering),
    ('decay', decay),
])

def run_suite(name, progress=None):
    """
    Run suite ``name`` (or every suite for ``all``).

    :rtype: list
    """
    if name == 'all':
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise exceptions.UnknownSuiteError(name)
    checks = []
    for n in names:
        _logger.info('running suite %s', n)
        for check in SUITES[n](progress):
            check.name = '%s.%s' % (n, check.name)
            _logger.info('%s: %s', check.name, 'pass' if check.passed else 'FAIL')
            checks.append(check)
    return checks
