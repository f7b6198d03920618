"""
Scalar and space-time functionals of computed solutions: energies, the
Morawetz functional and budget, mixed space-time norms, scattering
defects and exterior decay tables, collected into a
:class:`DiagnosticReport`.
"""

# pylint: disable=invalid-name,too-many-arguments,too-many-locals

import collections
import logging
import math
import numpy as np
from scipy.integrate import trapezoid
from radialwave import exceptions
from radialwave.core import recover_u, gradient_term, energy_norm, u_from_w, \
                            weighted_data_norm, pointwise_tail_check, ReducedState
from radialwave.solver import CoefficientProfile, dalembert_free, pde_residual, \
                              _Accumulator
from radialwave import transform

_logger = logging.getLogger(__name__)

HARDY_ENVELOPE = 4.0
MORAWETZ_ENVELOPE = 100.0

class BudgetEntry(object):
    """
    An accumulated quantity with the bound it is claimed to obey.
    ``passed`` is ``value <= bound``.
    """
    def __init__(self, name, value, bound, details=None):
        self.name = name
        self.value = float(value)
        self.bound = float(bound)
        self.details = dict(details or {})

    @property
    def passed(self):
        return self.value <= self.bound

    def to_dict(self):
        d = {'value': self.value, 'bound': self.bound, 'passed': self.passed}
        if self.details:
            d['details'] = self.details
        return d

    def __str__(self):
        return '%s: %.6g <= %.6g %s' % (self.name, self.value, self.bound,
                                        'pass' if self.passed else 'FAIL')

    def __repr__(self):
        return 'BudgetEntry(%r, %r, %r)' % (self.name, self.value, self.bound)

def _profile_of(traj, profile):
    if profile is not None:
        return profile
    if traj.profile is None:
        raise exceptions.InvalidArgumentError('a coefficient profile is required')
    return traj.profile

def energy(state, profile):
    """
    ``E = int [|grad u|**2/2 + u_t**2/2 + e**(-kappa t) phi |u|**(p+1)/(p+1)] dx``
    for radial ``u``, computed from ``w = r u``:
    ``r**2 |u_r|**2 = (w_r - u)**2`` and ``r**2 u_t**2 = wdot**2``.

    :param state: Slice to measure
    :type state: radialwave.core.ReducedState

    :param profile: Coefficient profile of the potential term
    :type profile: radialwave.solver.CoefficientProfile

    :rtype: float
    """
    r = state.grid.r
    u = recover_u(state)
    g = gradient_term(state, u)
    p = profile.p
    potential = profile.damping(state.t) * profile.phi(r) * r * r * \
        np.abs(u) ** (p + 1.0) / (p + 1.0)
    density = 0.5 * g * g + 0.5 * state.wdot * state.wdot + potential
    return float(4.0 * math.pi * trapezoid(density, dx=state.grid.dr))

def energy_series(traj, profile=None):
    """
    ``(times, energies)`` over the stored snapshots.
    """
    profile = _profile_of(traj, profile)
    values = np.array([energy(s, profile) for s in traj.snapshots])
    for t, e in zip(traj.times, values):
        _logger.debug('energy at t=%g: %.17g', t, e)
    return traj.times, values

def conservation_check(traj, profile=None, tol=1e-4):
    """
    Largest relative energy drift ``max |E(t) - E(t0)|/E(t0)`` (absolute
    when ``E(t0) = 0``), bounded by ``tol``.

    :rtype: BudgetEntry
    """
    _, values = energy_series(traj, profile)
    e0 = values[0]
    drift = float(np.max(np.abs(values - e0)))
    if e0 > 0:
        drift /= e0
    entry = BudgetEntry('conservation', drift, tol, {'energy0': float(e0),
                                                     'final': float(values[-1])})
    _logger.info('%s', entry)
    return entry

def monotonicity_check(traj, profile=None, tol=1e-6):
    """
    Largest energy increase between consecutive snapshots, bounded by
    ``tol * E(t0)``.

    :rtype: BudgetEntry
    """
    _, values = energy_series(traj, profile)
    rises = np.diff(values)
    rise = float(max(0.0, np.max(rises))) if rises.size else 0.0
    entry = BudgetEntry('monotonicity', rise, tol * values[0],
                        {'energy0': float(values[0]), 'final': float(values[-1])})
    _logger.info('%s', entry)
    return entry

def morawetz_functional(state):
    """
    ``M = int u_t (u_r + u/r) dx``. Since ``r (u_r + u/r) = w_r``, this is
    ``4 pi int wdot * w_r dr``.

    :rtype: float
    """
    wr = np.gradient(state.w, state.grid.dr, edge_order=2)
    return float(4.0 * math.pi * trapezoid(state.wdot * wr, dx=state.grid.dr))

def morawetz_series(traj):
    return traj.times, np.array([morawetz_functional(s) for s in traj.snapshots])

def hardy_check(traj, profile=None, envelope=HARDY_ENVELOPE):
    """
    Largest ratio ``|M(t)|/E(t)`` over snapshots with positive energy,
    bounded by ``envelope``.

    :rtype: BudgetEntry
    """
    _, energies = energy_series(traj, profile)
    _, moments = morawetz_series(traj)
    positive = energies > 0
    ratio = float(np.max(np.abs(moments[positive]) / energies[positive])) \
        if positive.any() else 0.0
    return BudgetEntry('hardy', ratio, envelope)

def _accumulated(traj, profile, name):
    """
    Running values of accumulator ``name``. Reuses the per-step values
    recorded during evolution when the profile matches, otherwise integrates
    over the stored snapshots.
    """
    if traj.profile is not None and traj.profile.to_dict() == profile.to_dict() \
            and profile.kind != 'custom' and name in traj.accumulators:
        return traj.accumulators[name]
    acc = _Accumulator(traj.grid, profile)
    values = []
    for s in traj.snapshots:
        acc.add(s.t, s.w)
        values.append(acc.totals()[name])
    return np.array(values)

def dissipation_check(traj, profile=None):
    """
    Dissipated potential ``D = int int e**(-kappa t) phi |u|**(p+1) dx dt``
    with the bound ``(p+1)/kappa * E(t0)``. ``details['defect']`` is the
    discrepancy of the energy identity
    ``E(t0) - E(t) = kappa/(p+1) * D``.

    :rtype: BudgetEntry
    """
    profile = _profile_of(traj, profile)
    if profile.kappa <= 0:
        raise exceptions.InvalidArgumentError(
            'dissipation needs kappa > 0; use conservation_check instead')
    p = profile.p
    accumulated = float(_accumulated(traj, profile, 'dissipation')[-1])
    e0 = energy(traj.snapshots[0], profile)
    e1 = energy(traj.snapshots[-1], profile)
    defect = abs(e0 - e1 - profile.kappa / (p + 1.0) * accumulated)
    entry = BudgetEntry('dissipation', accumulated, (p + 1.0) / profile.kappa * e0,
                        {'defect': defect, 'energy0': e0, 'final': e1})
    _logger.info('%s (identity defect %.3e)', entry, defect)
    return entry

def _closed_form_gap(profile, grid):
    s = grid.r[1:]
    phi = transform.phi_weight(grid.r, profile.p)
    dphi = np.gradient(phi, grid.dr, edge_order=2)[1:]
    direct = ((profile.p - 1.0) * phi[1:] - s * dphi) / s
    return float(np.max(np.abs(direct - transform.morawetz_weight(s, profile.p))))

def morawetz_budget(traj, profile=None, envelope=MORAWETZ_ENVELOPE):
    """
    ``int int e**(-kappa t) ((p-1) phi - r phi')/r |u|**(p+1) dx dt`` with
    the bound ``envelope * E(t0)``. ``details['series']`` holds the running
    value at every snapshot. For the hyperbolic profile
    ``details['closed_form_gap']`` compares the finite-difference weight
    with ``(p-1) s**(p-1) cosh s/sinh(s)**p``.

    Raises :class:`radialwave.exceptions.InvalidProfileError` if the weight
    is negative anywhere on the grid.

    :rtype: BudgetEntry
    """
    profile = _profile_of(traj, profile)
    profile.check_morawetz(traj.grid.r)
    series = _accumulated(traj, profile, 'morawetz')
    e0 = energy(traj.snapshots[0], profile)
    details = {'series': [float(v) for v in series], 'energy0': e0}
    if profile.kind == 'hyperbolic':
        details['closed_form_gap'] = _closed_form_gap(profile, traj.grid)
    entry = BudgetEntry('morawetz', float(series[-1]), envelope * e0, details)
    _logger.info('%s', entry)
    return entry

def _mask_and_weight(traj, weight, region):
    r = traj.grid.r[None, :]
    t = traj.times[:, None]
    factor = np.ones((len(traj), len(traj.grid.r)))
    if weight is not None:
        if isinstance(weight, CoefficientProfile):
            factor = factor * weight.phi(r) * weight.damping(t)
        else:
            factor = factor * weight(r, t)
    if region is not None:
        factor = factor * region(r, t)
    return factor

def _time_integral(values, traj):
    if len(traj) < 2:
        return 0.0
    return float(trapezoid(values, dx=traj.spacing))

def mixed_norm(traj, q_t, q_x, weight=None, region=None):
    """
    ``(int (int |u|**q_x weight dx)**(q_t/q_x) dt)**(1/q_t)`` over the
    stored snapshots, optionally restricted to ``region``.

    :param weight: Spatial weight: a
        :class:`radialwave.solver.CoefficientProfile` (weight
        ``phi e**(-kappa t)``) or a function of ``(r, t)``
    :param region: Predicate of ``(r, t)`` arrays, e.g.
        :func:`radialwave.transform.exterior_region`

    :rtype: float
    """
    if q_t < 1 or q_x < 1:
        raise exceptions.InvalidArgumentError('mixed norm exponents must be >= 1')
    U = np.abs(u_from_w(traj.levels(), traj.grid.r))
    factor = _mask_and_weight(traj, weight, region)
    r2 = traj.grid.r ** 2
    inner = 4.0 * math.pi * trapezoid(U ** q_x * factor * r2, dx=traj.grid.dr, axis=1)
    return _time_integral(inner ** (q_t / q_x), traj) ** (1.0 / q_t)

def spacetime_integral(traj, exponent, weight=None, region=None):
    """
    ``int int |u|**exponent weight dx dt``; ``exponent = 2(p-1)`` gives the
    scattering size ``I`` and restricting to ``r > t + R`` gives ``I_1``.
    """
    return mixed_norm(traj, exponent, exponent, weight, region) ** exponent

def _difference(a, b):
    return ReducedState(a.grid, a.t, a.w - b.w, a.wdot - b.wdot)

ScatteringDefect = collections.namedtuple('ScatteringDefect',
                                          ['t1', 't2', 'defect', 'profile'])

def scattering_pullback(traj, t1, t2):
    """
    Energy-norm distance between ``U(t1)`` and the free evolution of
    ``U(t2)`` back to ``t1``; it vanishes exactly for free solutions and
    decays in ``t1`` for scattering ones. ``profile`` is the free
    pullback of the latest stored state to ``t = 0``, the candidate
    asymptotic free data.

    :rtype: ScatteringDefect
    """
    if not t1 < t2:
        raise exceptions.InvalidArgumentError('scattering defect needs t1 < t2')
    first = traj.at(t1)
    second = traj.at(t2)
    pulled = dalembert_free(second, first.t, reverse=True)
    defect = energy_norm(_difference(pulled, first))
    latest = traj.snapshots[-1]
    if latest.t >= 0:
        asymptotic = dalembert_free(latest, 0.0, reverse=True)
    else:
        asymptotic = dalembert_free(latest, 0.0)
    _logger.info('scattering defect(%g, %g) = %.6e', first.t, second.t, defect)
    return ScatteringDefect(first.t, second.t, defect, asymptotic)

def scattering_chain_check(traj, t1, t2, tol=0.05):
    """
    The defect of :func:`scattering_pullback` is bounded by the source norm
    ``int_{t1}^{t2} ||G||_{L^2} dt``, up to a relative discretization
    allowance ``tol``.

    :rtype: BudgetEntry
    """
    defect = scattering_pullback(traj, t1, t2).defect
    source = traj.accumulators['source']
    budget = float(source[traj.index(t2)] - source[traj.index(t1)])
    return BudgetEntry('scattering_chain', defect, budget * (1.0 + tol) + 1e-12,
                       {'t1': t1, 't2': t2, 'source_norm': budget})

def _exterior_nodes(traj, R, t_last=None):
    for n, state in enumerate(traj.snapshots):
        if state.t < 0 or (t_last is not None and state.t > t_last + 1e-12):
            continue
        # strict up to roundoff: the node on r = t + R sees the light cone
        outside = state.grid.r > state.t + R + 1e-9 * max(1.0, state.t + R)
        if outside.any():
            yield n, state, outside

def _derivatives(state):
    return np.gradient(state.w, state.grid.dr, edge_order=2), state.wdot

def _flux_profile(spec, s, delta, C):
    """
    ``f(s) = s |u_1(s)| + s |u_0'(s)| + C s**(-1-delta)``.
    """
    return s * np.abs(spec.u1(s)) + s * np.abs(spec.position.derivative(s)) + \
        C * s ** (-1.0 - delta)

def _characteristic_ratios(state, outside, spec, delta, C):
    wr, wt = _derivatives(state)
    r = state.grid.r[outside]
    plus = np.abs(wt + wr)[outside] / _flux_profile(spec, r + state.t, delta, C)
    minus = np.abs(wt - wr)[outside] / _flux_profile(spec, r - state.t, delta, C)
    return max(float(np.max(plus)), float(np.max(minus)))

DecayTable = collections.namedtuple(
    'DecayTable', ['rows', 'es1_max', 'characteristic_max', 'passed'])

def exterior_decay_report(traj, params, spec=None, C=0.0, tol=1e-2):
    """
    Ratios over the stored nodes with ``r > t + R`` and ``t >= 0``:

    - ``|w| (r-t)**delta / B1`` (pointwise decay ``|u| <= B1 r**-1 (r-t)**-delta``)
    - ``|w_t + w_r| / f(r+t)`` and ``|w_t - w_r| / f(r-t)`` with
      ``f(s) = s |u_1(s)| + s |u_0'(s)| + C s**(-1-delta)`` (only when the
      data ``spec`` is given)

    Each row is ``(t, es1, characteristic)`` holding the largest ratio of the
    snapshot. Passes when every ratio is at most ``1 + tol``.

    :rtype: DecayTable
    """
    rows = []
    for _, state, outside in _exterior_nodes(traj, params.R):
        r = state.grid.r[outside]
        es1 = float(np.max(np.abs(state.w[outside]) * (r - state.t) ** params.delta)) / \
            params.B1
        flux = _characteristic_ratios(state, outside, spec, params.delta, C) \
            if spec is not None else 0.0
        rows.append((state.t, es1, flux))
    es1_max = max([row[1] for row in rows] or [0.0])
    flux_max = max([row[2] for row in rows] or [0.0])
    passed = es1_max <= 1.0 + tol and flux_max <= 1.0 + tol
    _logger.info('exterior decay: es1 %.4g characteristic %.4g over %d snapshots',
                 es1_max, flux_max, len(rows))
    return DecayTable(rows, es1_max, flux_max, passed)

def _power_of_two(x, smallest=-20):
    """
    Smallest ``2**k >= x`` with ``k >= smallest``.
    """
    if x <= 2.0 ** smallest:
        return 2.0 ** smallest
    return 2.0 ** max(smallest, int(math.ceil(math.log(x, 2) - 1e-12)))

Calibration = collections.namedtuple('Calibration', ['params', 'C'])

def calibrate_exterior(traj, params, spec, slab=1.0):
    """
    Fix the exterior constants on ``t in [0, slab]``: ``R = max(1, 2 *
    cutoff radius of the data)``, ``B1`` the smallest power of two with
    ``|w| (r-t)**delta <= B1`` there, and ``C`` the smallest power of two
    with ``|w_t +- w_r| <= f(r +- t)``. ``t0`` is re-derived from the new
    ``R``.

    :rtype: Calibration
    """
    R = max(1.0, 2.0 * spec.cutoff_radius())
    delta = params.delta
    es1 = 0.0
    excess = 0.0
    for _, state, outside in _exterior_nodes(traj, R, slab):
        r = state.grid.r[outside]
        es1 = max(es1, float(np.max(np.abs(state.w[outside]) * (r - state.t) ** delta)))
        wr, wt = _derivatives(state)
        for sign in (1.0, -1.0):
            s = r + sign * state.t
            free = _flux_profile(spec, s, delta, 0.0)
            local = np.abs(wt + sign * wr)[outside]
            excess = max(excess, float(np.max((local - free) * s ** (1.0 + delta))))
    B1 = _power_of_two(es1)
    C = _power_of_two(excess)
    calibrated = params.replace(B1=B1, R=R, t0=None)
    _logger.info('exterior calibration: R=%g B1=%g C=%g', R, B1, C)
    return Calibration(calibrated, C)

class DiagnosticReport(object):
    """
    Everything measured on one run: time series, budgets with their bounds,
    named norms, scattering defects and the exterior decay table.
    """
    # pylint: disable=too-many-instance-attributes
    def __init__(self):
        self.energy_series = ([], [])
        self.morawetz_series = ([], [])
        self.series = collections.OrderedDict()
        self.budgets = collections.OrderedDict()
        self.norms = collections.OrderedDict()
        self.defects = []
        self.decay = None
        self.info = collections.OrderedDict()

    def add_series(self, name, times, values):
        self.series[name] = ([float(t) for t in times], [float(v) for v in values])

    def add_budget(self, entry):
        self.budgets[entry.name] = entry

    @property
    def passed(self):
        """bool: every budget and the decay table pass"""
        return all(b.passed for b in self.budgets.values()) and \
            (self.decay is None or self.decay.passed)

    def failures(self):
        names = [name for name, b in self.budgets.items() if not b.passed]
        if self.decay is not None and not self.decay.passed:
            names.append('decay')
        return names

    def to_dict(self):
        d = {
            'passed': self.passed,
            'budgets': dict((k, v.to_dict()) for k, v in self.budgets.items()),
            'norms': dict(self.norms),
            'defects': [{'t1': x.t1, 't2': x.t2, 'defect': x.defect} for x in self.defects],
            'info': dict(self.info),
        }
        if self.decay is not None:
            d['decay'] = {'es1_max': self.decay.es1_max,
                          'characteristic_max': self.decay.characteristic_max,
                          'passed': self.decay.passed}
        return d

def _scattering_pairs(traj):
    t_end = traj.times[-1]
    pairs = []
    for a, b in ((0.25, 0.5), (0.5, 1.0)):
        i = int(np.argmin(np.abs(traj.times - a * t_end)))
        j = int(np.argmin(np.abs(traj.times - b * t_end)))
        if traj.times[i] >= 0 and i < j:
            pairs.append((float(traj.times[i]), float(traj.times[j])))
    return pairs

def build_report(traj, profile, params, spec, analyses, data=None, vtraj=None,
                 chart=None):
    """
    Run the named analyses on a trajectory.

    :param traj: Physical trajectory
    :type traj: radialwave.solver.Trajectory

    :param profile: Coefficient profile it was evolved with
    :type profile: radialwave.solver.CoefficientProfile

    :param params: Experiment constants
    :type params: radialwave.core.Parameters

    :param spec: Initial data description
    :type spec: radialwave.core.DataSpec

    :param analyses: Names among ``energy``, ``data_norm``, ``tail_check``,
        ``dissipation``, ``morawetz``, ``mixed_norm``, ``scattering``,
        ``decay``, ``residual``, ``transform``
    :type analyses: list

    :param data: The ``t = 0`` state (for data norms); defaults to the snapshot at 0
    :type data: radialwave.core.ReducedState

    :param vtraj: Transformed trajectory (for ``transform``)
    :type vtraj: radialwave.solver.Trajectory

    :param chart: Chart of ``vtraj``
    :type chart: radialwave.transform.HyperboloidalChart

    :rtype: DiagnosticReport
    """
    # pylint: disable=too-many-branches,too-many-statements
    report = DiagnosticReport()
    report.info['profile'] = profile.to_dict()
    report.info['parameters'] = dict(params._asdict())
    p = profile.p
    if data is None and ('data_norm' in analyses or 'tail_check' in analyses):
        data = traj.at(0.0)

    if 'energy' in analyses:
        times, values = energy_series(traj, profile)
        report.energy_series = (list(times), list(values))
        report.add_series('energy', times, values)
        mtimes, moments = morawetz_series(traj)
        report.morawetz_series = (list(mtimes), list(moments))
        report.add_series('morawetz_functional', mtimes, moments)
        if profile.kappa == 0:
            report.add_budget(conservation_check(traj, profile))
        else:
            report.add_budget(monotonicity_check(traj, profile))
        report.add_budget(hardy_check(traj, profile))
        report.info['energy0'] = float(values[0])
        report.info['energy_final'] = float(values[-1])

    if 'data_norm' in analyses:
        norm = weighted_data_norm(data, data.grid, params.epsilon)
        report.norms['norm_mu'] = norm.norm_mu
        report.norms['norm_r'] = norm.norm_r
        report.add_budget(BudgetEntry('remark_norm', norm.norm_r ** 2,
                                      norm.norm_mu ** 2 / (4.0 * math.pi) * (1.0 + 1e-9)))

    if 'tail_check' in analyses:
        tail = pointwise_tail_check(data, params.A, params.epsilon)
        report.add_budget(BudgetEntry('tail_check', tail.ratio, 1.0 + 1e-9))

    if 'dissipation' in analyses:
        if profile.kappa > 0:
            report.add_budget(dissipation_check(traj, profile))
            report.add_series('dissipation', traj.times, _accumulated(traj, profile,
                                                                      'dissipation'))
        else:
            _logger.info('dissipation skipped: kappa = 0')

    if 'morawetz' in analyses:
        report.add_budget(morawetz_budget(traj, profile))
        report.add_series('morawetz_budget', traj.times,
                          _accumulated(traj, profile, 'morawetz'))

    if 'mixed_norm' in analyses:
        q = 2.0 * (p - 1.0)
        report.norms['I'] = spacetime_integral(traj, q)
        report.norms['I1'] = spacetime_integral(traj, q,
                                                region=transform.exterior_region(params.R))
        report.norms['I_omega'] = spacetime_integral(traj, q,
                                                     region=transform.omega_region(params.t0))
        report.add_series('spacetime', traj.times, _accumulated(traj, profile, 'spacetime'))

    if 'scattering' in analyses:
        for t1, t2 in _scattering_pairs(traj):
            report.defects.append(scattering_pullback(traj, t1, t2))
            report.add_budget(scattering_chain_check(traj, t1, t2))
        if report.defects:
            report.add_series('scattering_defect', [d.t2 for d in report.defects],
                              [d.defect for d in report.defects])

    if 'decay' in analyses:
        calibration = calibrate_exterior(traj, params, spec)
        report.info['calibrated'] = dict(calibration.params._asdict())
        report.info['C'] = calibration.C
        report.decay = exterior_decay_report(traj, calibration.params, spec, calibration.C)
        report.add_series('decay_es1', [row[0] for row in report.decay.rows],
                          [row[1] for row in report.decay.rows])

    if 'residual' in analyses and len(traj) >= 3:
        residual = pde_residual(traj, profile)
        report.norms['residual_max'] = float(np.max(residual.max_norm))
        report.add_series('residual', residual.times, residual.max_norm)

    if 'transform' in analyses and vtraj is not None:
        budgets = transform.transformed_budgets(vtraj, p)
        for name, entry in budgets.items():
            entry.name = 'transformed_' + name
            report.add_budget(entry)
        witness = transform.lemma_witness(vtraj, p, chart.t0)
        report.info['witness_tau'] = witness.tau
        report.info['witness_energy'] = witness.energy
        report.add_series('transformed_energy', [e.tau for e in witness.series],
                          [e.energy for e in witness.series])
    return report
