"""
Hyperboloidal transformation of radial solutions.

The chart

    (r, t) = (e**tau * sinh s, t0 + e**tau * cosh s)

flattens the hyperboloids ``(t - t0)**2 - r**2 = e**(2*tau)`` to constant
``tau``. On reduced fields it acts as ``s*v(s, tau) = w(r, t)``, and
``(d_tau**2 - d_s**2) (s*v) = e**(2*tau) * ((d_t**2 - d_r**2) w)`` at the
image point. A solution of the undamped equation with unit coefficient
becomes a solution of the equation with ``kappa = p - 3`` and hyperbolic
coefficient ``(s/sinh s)**(p-1)``.
"""

# pylint: disable=invalid-name,too-many-arguments,too-many-locals

import collections
import logging
import math
import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator
from radialwave import exceptions
from radialwave.core import RadialGrid, ReducedState, gradient_term, recover_u, \
                            u_from_w
from radialwave.solver import CoefficientProfile, Trajectory, ACCUMULATORS, \
                              _Accumulator

_logger = logging.getLogger(__name__)

SERIES_THRESHOLD = 1e-4

def chart_forward(s, tau, t0):
    """
    Map ``(s, tau)`` to ``(r, t) = (e**tau sinh s, t0 + e**tau cosh s)``.

    :rtype: tuple
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise exceptions.InvalidArgumentError('hyperbolic radius must be non-negative')
    scale = np.exp(np.asarray(tau, dtype=float))
    r = scale * np.sinh(s)
    t = t0 + scale * np.cosh(s)
    if r.ndim == 0:
        return float(r), float(t)
    return r, t

def chart_inverse(r, t, t0):
    """
    Inverse of :func:`chart_forward` on the interior of the forward cone,
    ``t - t0 > r >= 0``:
    ``tau = log((t - t0)**2 - r**2)/2``, ``s = asinh(r e**-tau)``.

    Raises :class:`radialwave.exceptions.OutsideConeError` for the first
    point outside the cone.

    :rtype: tuple
    """
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    x = t - t0
    outside = np.broadcast_to(~(x > r) | (r < 0), np.broadcast(r, t).shape)
    if np.any(outside):
        idx = np.unravel_index(np.argmax(outside), outside.shape)
        rb, tb = np.broadcast_arrays(r, t)
        raise exceptions.OutsideConeError(float(rb[idx]), float(tb[idx]), t0)
    # (x - r)(x + r) keeps accuracy near the cone
    tau = 0.5 * (np.log(x - r) + np.log(x + r))
    s = np.arcsinh(r * np.exp(-tau))
    if s.ndim == 0:
        return float(s), float(tau)
    return s, tau

def _s_over_sinh(s):
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    small = s < SERIES_THRESHOLD
    ss = s[small] * s[small]
    out[small] = 1.0 - ss / 6.0 + 7.0 * ss * ss / 360.0
    big = s[~small]
    # 2s e^{-s} / (1 - e^{-2s}) stays finite for large s
    out[~small] = 2.0 * big * np.exp(-big) / -np.expm1(-2.0 * big)
    return out

def s_coth_s(s):
    """
    ``s*coth(s)``, equal to 1 at the origin.
    """
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    small = s < SERIES_THRESHOLD
    ss = s[small] * s[small]
    out[small] = 1.0 + ss / 3.0 - ss * ss / 45.0
    big = s[~small]
    e2 = np.exp(-2.0 * big)
    out[~small] = big * (1.0 + e2) / -np.expm1(-2.0 * big)
    return out

def phi_weight(s, p):
    """
    Coefficient ``(s/sinh s)**(p-1)`` of the transformed nonlinearity.
    Values lie in ``(0, 1]``, with 1 only at ``s = 0``; below ``s = 1e-4``
    ``s/sinh s`` is taken from its series.

    :param s: Hyperbolic radius, non-negative
    :type s: float or numpy.ndarray

    :param p: Nonlinearity exponent
    :type p: float
    """
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s < 0):
        raise exceptions.InvalidArgumentError('hyperbolic radius must be non-negative')
    out = _s_over_sinh(s) ** (p - 1.0)
    return float(out[0]) if scalar else out

def morawetz_weight(s, p):
    """
    ``((p-1) phi - s phi')/s`` for ``phi = phi_weight``, in closed form
    ``(p-1) s**(p-1) cosh s / sinh(s)**p = (p-1) phi(s) coth(s)``.
    Defined for ``s > 0``.
    """
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s <= 0):
        raise exceptions.InvalidArgumentError('morawetz weight needs s > 0')
    out = (p - 1.0) * phi_weight(s, p) * s_coth_s(s) / s
    return float(out[0]) if scalar else out

def s0(tau, t0):
    """
    Radius ``acosh(-t0 e**-tau)`` where the hyperboloid of ``tau`` crosses
    ``t = 0``.
    """
    x = -t0 * math.exp(-tau)
    if x < 1:
        raise exceptions.InvalidArgumentError(
            'split radius undefined: -t0*exp(-tau) = %r < 1 (tau=%r, t0=%r)' % (x, tau, t0))
    return math.acosh(x)

def exterior_region(R):
    """
    Predicate of ``{r > t + R, t >= 0}``.
    """
    def region(r, t):
        return (r > t + R) & (t >= 0)
    return region

def omega_region(t0):
    """
    Predicate of ``{r**2 < (t - t0)**2 - 1, t > t0}``, the image of ``tau > 0``.
    """
    def region(r, t):
        return (r * r < (t - t0) ** 2 - 1.0) & (t > t0)
    return region

def k_region(t0):
    """
    Predicate of ``{e**-2 <= (t - t0)**2 - r**2 <= 1, t0 < t <= 0}``.
    """
    def region(r, t):
        gap = (t - t0) ** 2 - r * r
        return (gap >= math.exp(-2.0)) & (gap <= 1.0) & (t > t0) & (t <= 0)
    return region

class HyperboloidalChart(object):
    """
    Uniform ``(s, tau)`` node grid on ``[0, s_max] x [tau_min, tau_max]``
    anchored at ``t0``.
    """
    # pylint: disable=too-many-instance-attributes
    def __init__(self, t0, s_max, tau_min, tau_max, s_J, tau_J, r_max=None):
        """
        :param t0: Anchor time, below -1
        :type t0: float

        :param s_max: Largest hyperbolic radius
        :type s_max: float

        :param tau_min: First slow time
        :type tau_min: float

        :param tau_max: Last slow time
        :type tau_max: float

        :param s_J: Number of ``s`` intervals, at least 8
        :type s_J: int

        :param tau_J: Number of ``tau`` intervals
        :type tau_J: int

        :param r_max: When given, the chart image must stay within ``r <= r_max``
        :type r_max: float
        """
        if not t0 < -1:
            raise exceptions.InvalidArgumentError('t0 must be below -1')
        if not s_max > 0 or not tau_max > tau_min:
            raise exceptions.InvalidArgumentError('chart ranges must be non-empty')
        if int(s_J) != s_J or s_J < 8 or int(tau_J) != tau_J or tau_J < 2:
            raise exceptions.InvalidArgumentError('chart needs s_J >= 8 and tau_J >= 2')
        self.t0 = float(t0)
        self.s_max = float(s_max)
        self.tau_min = float(tau_min)
        self.tau_max = float(tau_max)
        self.s_J = int(s_J)
        self.tau_J = int(tau_J)
        self.s_grid = np.linspace(0.0, self.s_max, self.s_J + 1)
        self.tau_grid = np.linspace(self.tau_min, self.tau_max, self.tau_J + 1)
        self.s_grid.setflags(write=False)
        self.tau_grid.setflags(write=False)
        if r_max is not None and self.r_reach > r_max:
            raise exceptions.InvalidArgumentError(
                'chart reaches r=%r beyond r_max=%r' % (self.r_reach, r_max))

    @property
    def ds(self):
        return self.s_max / self.s_J

    @property
    def dtau(self):
        return (self.tau_max - self.tau_min) / self.tau_J

    @property
    def r_reach(self):
        """float: largest radius of the image"""
        return math.exp(self.tau_max) * math.sinh(self.s_max)

    def time_window(self):
        """
        ``(t_first, t_last)`` spanned by the image.
        """
        return (self.t0 + math.exp(self.tau_min),
                self.t0 + math.exp(self.tau_max) * math.cosh(self.s_max))

    def nodes(self):
        """
        Image ``(r, t)`` of every node, arrays of shape ``(tau_J+1, s_J+1)``.
        """
        S, TAU = np.meshgrid(self.s_grid, self.tau_grid)
        return chart_forward(S, TAU, self.t0)

    def grid(self):
        return RadialGrid(self.ds, self.s_J)

    def to_dict(self):
        return {'t0': self.t0, 's_max': self.s_max, 'tau_min': self.tau_min,
                'tau_max': self.tau_max, 's_J': self.s_J, 'tau_J': self.tau_J}

    def __repr__(self):
        return 'HyperboloidalChart(t0=%r, s=[0, %r]/%d, tau=[%r, %r]/%d)' % (
            self.t0, self.s_max, self.s_J, self.tau_min, self.tau_max, self.tau_J)

def _interpolator(times, r, values, method):
    if method == 'cubic':
        spline = RectBivariateSpline(times, r, values, kx=3, ky=3)
        return spline.ev
    interp = RegularGridInterpolator((times, r), values, method='linear')
    def evaluate(t, rr):
        points = np.stack([np.ravel(t), np.ravel(rr)], axis=-1)
        return interp(points).reshape(np.shape(t))
    return evaluate

def push_forward(traj, chart, method='linear', p=None):
    """
    Pull a physical trajectory back onto the chart nodes:
    ``s*v = w(T(s, tau))`` and
    ``(s*v)_tau = e**tau sinh s * w_r + e**tau cosh s * w_t``,
    with ``w``, ``w_r`` and ``w_t`` interpolated from the stored
    ``(r, t)`` lattice.

    The result is an ordinary :class:`radialwave.solver.Trajectory` on the
    ``s`` grid whose snapshot times are the ``tau`` nodes and whose
    accumulators use the transformed coefficient profile.

    :param traj: Physical trajectory covering the chart image
    :type traj: radialwave.solver.Trajectory

    :param chart: Node grid
    :type chart: HyperboloidalChart

    :param method: ``linear`` (bilinear) or ``cubic`` (bicubic splines). The
        bilinear error is O(dr**2) but not smooth between nodes, so the
        transformed PDE residual only converges under refinement with ``cubic``.
    :type method: str

    :param p: Nonlinearity exponent; taken from ``traj.profile`` when omitted
    :type p: float

    :rtype: radialwave.solver.Trajectory
    """
    if method not in ('cubic', 'linear'):
        raise exceptions.InvalidArgumentError('unknown interpolation method %s' % method)
    if p is None:
        if traj.profile is None:
            raise exceptions.InvalidArgumentError('p is needed for an unprofiled trajectory')
        p = traj.profile.p
    if method == 'cubic' and len(traj) < 4:
        raise exceptions.InvalidArgumentError('cubic interpolation needs 4 snapshots')
    times = traj.times
    r = traj.grid.r
    R, T = chart.nodes()
    slack = 1e-9 * max(1.0, abs(times[-1]))
    outside = (R > r[-1] + slack) | (T < times[0] - slack) | (T > times[-1] + slack)
    if np.any(outside):
        rows, cols = np.nonzero(outside)
        nodes = [(float(chart.s_grid[j]), float(chart.tau_grid[i]))
                 for i, j in zip(rows, cols)]
        raise exceptions.CoverageError(nodes)
    R = np.clip(R, 0.0, r[-1])
    T = np.clip(T, times[0], times[-1])

    W = traj.levels()
    Wt = traj.velocities()
    Wr = np.gradient(W, traj.grid.dr, axis=1, edge_order=2)
    sv = _interpolator(times, r, W, method)(T, R)
    wr = _interpolator(times, r, Wr, method)(T, R)
    wt = _interpolator(times, r, Wt, method)(T, R)
    S, TAU = np.meshgrid(chart.s_grid, chart.tau_grid)
    scale = np.exp(TAU)
    sv_tau = scale * np.sinh(S) * wr + scale * np.cosh(S) * wt
    sv[:, 0] = 0.0
    sv_tau[:, 0] = 0.0

    grid = chart.grid()
    profile = CoefficientProfile.transformed(p)
    acc = _Accumulator(grid, profile)
    snapshots = []
    totals = []
    for i, tau in enumerate(chart.tau_grid):
        acc.add(tau, sv[i])
        snapshots.append(ReducedState(grid, tau, sv[i], sv_tau[i]))
        totals.append(acc.totals())
    _logger.info('push_forward: %r via %s interpolation', chart, method)
    return Trajectory(grid, chart.dtau, 1, snapshots,
                      dict((name, [tot[name] for tot in totals]) for name in ACCUMULATORS),
                      profile, {'chart': chart.to_dict(), 'method': method})

def recover_v(vstate):
    """
    ``v = (s*v)/s`` with even extrapolation at ``s = 0``.
    """
    return recover_u(vstate)

ResidualNorms = collections.namedtuple('ResidualNorms', ['max_norm', 'l2_norm'])

def _second_differences(F, h):
    ftt = (F[2:, 1:-1] - 2.0 * F[1:-1, 1:-1] + F[:-2, 1:-1]) / (h * h)
    fxx = (F[1:-1, 2:] - 2.0 * F[1:-1, 1:-1] + F[1:-1, :-2]) / (h * h)
    return ftt - fxx

def _norms(res, h):
    return ResidualNorms(float(np.max(np.abs(res))) if res.size else 0.0,
                         float(math.sqrt(np.sum(res * res) * h * h)))

def commutator_residual(field, which, h, t0=-12.0, x_range=None, y_range=None):
    """
    Check a commuting identity of the transformation by finite differences
    of a smooth closed-form test field, both sides with step ``h``.

    - ``T3``: ``(d_t**2 - d_r**2)(r*u) = r*(d_t**2 - d_r**2 - (2/r) d_r) u``
      on ``(r, t)``; ``field(r, t)`` is ``u``. The discrete identity is exact,
      so only roundoff remains.
    - ``T4``: ``(d_tau**2 - d_s**2) W = e**(2*tau) ((d_t**2 - d_r**2) w)(T(s, tau))``
      with ``W(s, tau) = w(T(s, tau))``; ``field(r, t)`` is ``w``. The
      residual is second order in ``h``.

    :param field: Test field, vectorized function of ``(r, t)``
    :type field: function(numpy.ndarray, numpy.ndarray)

    :param which: ``T3`` or ``T4``
    :type which: str

    :param h: Finite-difference step
    :type h: float

    :param t0: Anchor time of the ``T4`` chart
    :type t0: float

    :param x_range: Spatial range (``r`` for T3, ``s`` for T4)
    :type x_range: tuple

    :param y_range: Time range (``t`` for T3, ``tau`` for T4)
    :type y_range: tuple

    :rtype: ResidualNorms
    """
    if which == 'T3':
        x_range = x_range or (0.5, 3.0)
        y_range = y_range or (-1.0, 1.0)
    elif which == 'T4':
        x_range = x_range or (0.4, 1.4)
        y_range = y_range or (1.2, 2.0)
    else:
        raise exceptions.InvalidArgumentError('unknown commutator %s' % which)
    nx = int(round((x_range[1] - x_range[0]) / h))
    ny = int(round((y_range[1] - y_range[0]) / h))
    x = x_range[0] + h * np.arange(nx + 1)
    y = y_range[0] + h * np.arange(ny + 1)
    X, Y = np.meshgrid(x, y)

    if which == 'T3':
        u = field(X, Y)
        lhs = _second_differences(X * u, h)
        ur = (u[1:-1, 2:] - u[1:-1, :-2]) / (2.0 * h)
        rhs = X[1:-1, 1:-1] * (_second_differences(u, h) - 2.0 * ur / X[1:-1, 1:-1])
    else:
        r, t = chart_forward(X, Y, t0)
        lhs = _second_differences(field(r, t), h)
        rr = r[1:-1, 1:-1]
        tt = t[1:-1, 1:-1]
        wtt = (field(rr, tt + h) - 2.0 * field(rr, tt) + field(rr, tt - h)) / (h * h)
        wrr = (field(rr + h, tt) - 2.0 * field(rr, tt) + field(rr - h, tt)) / (h * h)
        rhs = np.exp(2.0 * Y[1:-1, 1:-1]) * (wtt - wrr)
    return _norms(lhs - rhs, h)

TransformedEnergy = collections.namedtuple('TransformedEnergy',
                                           ['tau', 'energy', 'interior', 'exterior', 's0'])

def transformed_energy(vstate, p, t0):
    """
    Energy of a transformed slice at ``tau = vstate.t``,

        E(tau) = int [|grad v|**2/2 + v_tau**2/2
                      + e**(-(p-3) tau) (s/sinh s)**(p-1) |v|**(p+1)/(p+1)] dy

    together with its kinetic and gradient part split at
    ``s0(tau) = acosh(-t0 e**-tau)``: ``interior`` integrates ``s < s0``,
    ``exterior`` integrates ``s > s0``.

    :rtype: TransformedEnergy
    """
    from radialwave.functionals import energy
    split = s0(vstate.t, t0)
    total = energy(vstate, CoefficientProfile.transformed(p))
    s = vstate.grid.r
    g = gradient_term(vstate)
    density = 0.5 * (g * g + vstate.wdot * vstate.wdot)
    ds = vstate.grid.dr
    inside = s < split
    interior = 4.0 * math.pi * trapezoid(np.where(inside, density, 0.0), dx=ds)
    exterior = 4.0 * math.pi * trapezoid(np.where(inside, 0.0, density), dx=ds)
    return TransformedEnergy(vstate.t, total, interior, exterior, split)

def transformed_budgets(vtraj, p, with_dissipation=None, envelope=100.0):
    """
    Space-time integrals of a transformed trajectory over ``tau >= 0``
    (``tau = 0`` must be a stored node):

    - ``morawetz``: ``int int e**(-(p-3)tau) ((p-1) s**(p-1) cosh s/sinh(s)**p) |v|**(p+1)``,
      bounded by ``envelope * E(0)``
    - ``dissipation`` (``p > 3``): ``int int e**(-(p-3)tau) phi |v|**(p+1)``,
      bounded by ``(p+1)/(p-3) * E(0)``
    - ``I_prime``: ``int int e**(-(p-3)tau) phi |v|**(2(p-1))``, bounded by
      interpolating the ``|v|**(p+1)`` and ``|v|**(p+3)`` integrals (Hoelder)
    - ``I2``: ``int int e**(-2(p-3)tau) (s/sinh s)**(2p-4) |v|**(2(p-1))``,
      bounded by ``I_prime``; ``details['pointwise']`` records whether the
      integrand of ``I2`` is below that of ``I_prime`` at every node.

    :param with_dissipation: Include the dissipation entry; defaults to ``p > 3``
    :type with_dissipation: bool

    :rtype: dict
    """
    from radialwave.functionals import BudgetEntry, energy
    if with_dissipation is None:
        with_dissipation = p > 3
    if with_dissipation and not p > 3:
        raise exceptions.InvalidArgumentError(
            'the (p+1)/(p-3) dissipation bound needs p > 3, got p=%r' % p)
    taus = vtraj.times
    start = vtraj.index(0.0)
    profile = CoefficientProfile.transformed(p)
    e0 = energy(vtraj.snapshots[start], profile)
    grid = vtraj.grid
    s = grid.r
    phi = phi_weight(s, p)
    numerator = profile.numerator(s)
    fourpi = 4.0 * math.pi
    kept = vtraj.snapshots[start:]
    t = taus[start:]
    V = np.abs(u_from_w(np.array([st.w for st in kept]), s))
    decay = np.exp(-(p - 3.0) * t)[:, None]
    s2 = s * s

    def integral(density):
        return float(trapezoid(fourpi * trapezoid(density, dx=grid.dr, axis=1), t)) \
            if len(t) > 1 else 0.0

    q = 2.0 * (p - 1.0)
    prime_density = decay * phi * V ** q * s2
    i2_density = decay * decay * phi ** ((2.0 * p - 4.0) / (p - 1.0)) * V ** q * s2
    low = integral(decay * phi * V ** (p + 1.0) * s2)
    high = integral(decay * phi * V ** (p + 3.0) * s2)
    theta = (5.0 - p) / 2.0
    i_prime = integral(prime_density)
    i2 = integral(i2_density)
    pointwise = bool(np.all(i2_density <= prime_density * (1.0 + 1e-12)))

    entries = {
        'morawetz': BudgetEntry('morawetz', integral(decay * numerator * V ** (p + 1.0) * s),
                                envelope * e0),
        'I_prime': BudgetEntry('I_prime', i_prime,
                               (low ** theta) * (high ** (1.0 - theta)) * (1.0 + 1e-9),
                               {'p_plus_1': low, 'p_plus_3': high}),
        'I2': BudgetEntry('I2', i2, i_prime * (1.0 + 1e-12), {'pointwise': pointwise}),
    }
    if with_dissipation:
        entries['dissipation'] = BudgetEntry('dissipation', low, (p + 1.0) / (p - 3.0) * e0)
    for entry in entries.values():
        _logger.info('transformed budget %s', entry)
    return entries

CoordinateCheck = collections.namedtuple('CoordinateCheck',
                                         ['physical', 'transformed', 'relative'])

def change_of_variables_check(density, t0, s_max, tau_max, J):
    """
    Integrate a non-negative density ``g(r, t)`` over the image of
    ``(0, tau_max] x [0, s_max]`` both ways:

    - physically, ``int int g 4 pi r**2 dr dt`` over
      ``{1 < (t-t0)**2 - r**2 <= e**(2 tau_max), r <= tanh(s_max) (t-t0)}``
    - on the chart, ``int int g(T(s, tau)) 4 pi e**(4 tau) sinh(s)**2 ds dtau``

    each with ``J`` trapezoid intervals per direction.

    :rtype: CoordinateCheck
    """
    fourpi = 4.0 * math.pi
    s = np.linspace(0.0, s_max, J + 1)
    tau = np.linspace(0.0, tau_max, J + 1)
    S, TAU = np.meshgrid(s, tau)
    r, t = chart_forward(S, TAU, t0)
    chart_side = fourpi * trapezoid(
        trapezoid(density(r, t) * np.exp(4.0 * TAU) * np.sinh(S) ** 2, s, axis=1), tau)

    x = np.linspace(1.0, math.exp(tau_max) * math.cosh(s_max), J + 1)
    lo = np.sqrt(np.maximum(0.0, x * x - math.exp(2.0 * tau_max)))
    hi = np.minimum(np.sqrt(x * x - 1.0), math.tanh(s_max) * x)
    hi = np.maximum(hi, lo)
    frac = np.linspace(0.0, 1.0, J + 1)
    rr = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    tt = (t0 + x)[:, None] * np.ones_like(frac)[None, :]
    inner = trapezoid(density(rr, tt) * rr * rr, frac, axis=1) * (hi - lo)
    physical = fourpi * trapezoid(inner, x)
    relative = abs(physical - chart_side) / max(abs(physical), 1e-300)
    _logger.info('change of variables: physical %.12g chart %.12g (rel %.3e)',
                 physical, chart_side, relative)
    return CoordinateCheck(float(physical), float(chart_side), float(relative))

Witness = collections.namedtuple('Witness', ['tau', 'energy', 'series'])

def lemma_witness(vtraj, p, t0, tau_range=(-1.0, 0.0)):
    """
    Slow time in ``tau_range`` with the smallest transformed energy, and
    the energies of every stored slice in the range.

    :rtype: Witness
    """
    lo, hi = tau_range
    slack = 1e-9
    series = [transformed_energy(st, p, t0) for st in vtraj.snapshots
              if lo - slack <= st.t <= hi + slack]
    if not series:
        raise exceptions.InvalidArgumentError('no transformed slice in %r' % (tau_range,))
    best = min(series, key=lambda e: e.energy)
    return Witness(best.tau, best.energy, series)
