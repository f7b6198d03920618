"""
Grids, parameters, field states and initial data for the reduced radial
problem.

A radial solution ``u(r, t)`` of the 3D wave equation is carried as the
reduced field ``w = r*u`` on a uniform grid ``r_j = j*dr``. The reduction
turns the radial 3D wave operator into the 1D operator ``d_tt - d_rr`` with
``w(0, t) = 0``.
"""

# pylint: disable=invalid-name

import collections
import logging
import math
import numpy as np
from scipy.integrate import trapezoid
from radialwave import exceptions

_logger = logging.getLogger(__name__)

MIN_INTERVALS = 8
NEGLIGIBLE = 1e-12
_GAUSSIAN_REACH = math.sqrt(math.log(1.0 / NEGLIGIBLE))

def _readonly(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr

_ParametersBase = collections.namedtuple(
    '_ParametersBase', ['p', 'epsilon', 'A', 'kappa', 'delta', 'B1', 'R', 't0'])

class Parameters(_ParametersBase):
    """
    Physical and analytic constants governing one experiment.

    ``delta`` and ``t0`` are derived from ``(epsilon, R)`` when not given:
    ``delta = min(epsilon/2, 1/10)`` and ``t0 = -sqrt(R**2 + 1) - 1``.

    Raises :class:`radialwave.exceptions.InvalidArgumentError` unless
    ``3 <= p < 5``, ``epsilon > 0``, ``kappa >= 0``,
    ``0 < delta < epsilon``, ``delta <= 1/10``, ``R >= 1``, ``t0 < -1`` and
    ``A, B1 > 0``.
    """
    __slots__ = ()

    # pylint: disable=too-many-arguments
    def __new__(cls, p, epsilon, A=1.0, kappa=0.0, delta=None, B1=1.0, R=1.0,
                t0=None):
        if delta is None:
            delta = min(epsilon / 2.0, 0.1)
        if t0 is None:
            t0 = -math.sqrt(R * R + 1.0) - 1.0
        checks = [(3 <= p < 5, 'p must lie in [3, 5)'),
                  (epsilon > 0, 'epsilon must be positive'),
                  (A > 0, 'A must be positive'),
                  (kappa >= 0, 'kappa must be non-negative'),
                  (0 < delta < epsilon and delta <= 0.1,
                   'delta must satisfy 0 < delta < epsilon, delta <= 1/10'),
                  (B1 > 0, 'B1 must be positive'),
                  (R >= 1, 'R must be at least 1'),
                  (t0 < -1, 't0 must be below -1')]
        for ok, message in checks:
            if not ok:
                raise exceptions.InvalidArgumentError(message)
        return super(Parameters, cls).__new__(
            cls, float(p), float(epsilon), float(A), float(kappa), float(delta),
            float(B1), float(R), float(t0))

    def replace(self, **kwargs):
        """
        Return a copy with some fields replaced. Passing ``delta=None`` or
        ``t0=None`` re-derives them from the new ``epsilon`` / ``R``.
        """
        fields = self._asdict()
        fields.update(kwargs)
        return Parameters(**fields)

class RadialGrid(object):
    """
    Uniform radial grid ``r_j = j*dr`` for ``j = 0..J``.
    """
    def __init__(self, dr, J):
        """
        :param dr: Grid spacing
        :type dr: float

        :param J: Number of intervals
        :type J: int
        """
        self._dr = float(dr)
        self._J = int(J)
        self._r = _readonly(np.arange(self._J + 1) * self._dr)

    @property
    def dr(self):
        """float: grid spacing"""
        return self._dr

    @property
    def J(self):
        """int: number of intervals"""
        return self._J

    @property
    def r(self):
        """numpy.ndarray: read-only grid points"""
        return self._r

    @property
    def r_max(self):
        """float: outermost grid point"""
        return self._J * self._dr

    def __eq__(self, other):
        return isinstance(other, RadialGrid) and \
            self._J == other.J and self._dr == other.dr

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._dr, self._J))

    def __repr__(self):
        return 'RadialGrid(dr=%r, J=%d)' % (self._dr, self._J)

def build_grid(r_max, J):
    """
    Build a uniform grid on ``[0, r_max]`` with ``J`` intervals.

    :param r_max: Outer radius, must be positive
    :type r_max: float

    :param J: Number of intervals, at least 8
    :type J: int

    :rtype: RadialGrid
    """
    if not r_max > 0:
        raise exceptions.InvalidArgumentError('r_max must be positive, got %r' % r_max)
    if int(J) != J or J < MIN_INTERVALS:
        raise exceptions.InvalidArgumentError(
            'J must be an integer >= %d, got %r' % (MIN_INTERVALS, J))
    return RadialGrid(float(r_max) / J, int(J))

class ReducedState(object):
    """
    A time slice of the reduced field ``w = r*u`` and of ``dw/dt`` on a
    radial grid. Arrays are copied and made read-only.
    """
    def __init__(self, grid, t, w, wdot):
        """
        :param grid: Grid the values live on
        :type grid: RadialGrid

        :param t: Time stamp
        :type t: float

        :param w: Values ``w_j``, length ``J+1``, ``w_0 == 0``
        :type w: array-like

        :param wdot: Values of ``dw/dt`` at ``r_j``, length ``J+1``
        :type wdot: array-like
        """
        w = _readonly(w)
        wdot = _readonly(wdot)
        if w.shape != (grid.J + 1,) or wdot.shape != (grid.J + 1,):
            raise exceptions.InvalidArgumentError(
                'state arrays must have length %d' % (grid.J + 1))
        if w[0] != 0 or wdot[0] != 0:
            raise exceptions.InvalidArgumentError('w and wdot must vanish at r = 0')
        self._grid = grid
        self._t = float(t)
        self._w = w
        self._wdot = wdot

    @property
    def grid(self):
        """RadialGrid: grid of the slice"""
        return self._grid

    @property
    def t(self):
        """float: time stamp"""
        return self._t

    @property
    def w(self):
        """numpy.ndarray: reduced field"""
        return self._w

    @property
    def wdot(self):
        """numpy.ndarray: time derivative of the reduced field"""
        return self._wdot

    def scaled(self, factor):
        """
        Return the state with both arrays multiplied by ``factor``.
        """
        return ReducedState(self._grid, self._t, self._w * factor, self._wdot * factor)

    def __repr__(self):
        return 'ReducedState(t=%r, %r)' % (self._t, self._grid)

def zero_state(grid, t=0.0):
    """
    All-zero state on ``grid``.
    """
    return ReducedState(grid, t, np.zeros(grid.J + 1), np.zeros(grid.J + 1))

def u_from_w(w, r):
    """
    ``u = w/r`` along the last axis of ``w``. At the origin ``u`` is even in
    ``r``, so it is extrapolated quadratically: ``u_0 = (4*u_1 - u_2)/3``.
    """
    w = np.asarray(w, dtype=float)
    u = np.empty_like(w)
    u[..., 1:] = w[..., 1:] / r[1:]
    u[..., 0] = (4.0 * u[..., 1] - u[..., 2]) / 3.0
    return u

def recover_u(state):
    """
    Recover ``u`` from a state (see :func:`u_from_w`).

    :rtype: numpy.ndarray
    """
    return u_from_w(state.w, state.grid.r)

def radial_derivative(values, grid):
    """
    Second-order centered differences, one-sided second order at both ends.
    """
    return np.gradient(values, grid.dr, edge_order=2)

def gradient_term(state, u=None):
    """
    ``r*du/dr`` computed as ``dw/dr - u``, which avoids dividing by ``r``.
    It vanishes at the origin.
    """
    if u is None:
        u = recover_u(state)
    g = radial_derivative(state.w, state.grid) - u
    g[0] = 0.0
    return g

def energy_norm(state):
    """
    Discrete Hdot^1 x L^2 norm of ``(u, u_t)``:
    ``(4*pi * int ((dw/dr - u)**2 + wdot**2) dr)**(1/2)``.
    """
    g = gradient_term(state)
    return math.sqrt(4.0 * math.pi *
                     trapezoid(g * g + state.wdot * state.wdot, dx=state.grid.dr))

def support_radius(state, tol=NEGLIGIBLE):
    """
    Largest grid radius where ``|w|`` exceeds ``tol`` (0 for a negligible field).
    """
    idx = np.nonzero(np.abs(state.w) > tol)[0]
    return float(state.grid.r[idx[-1]]) if idx.size else 0.0

def odd_extension(values, left, right):
    """
    Extend ``values`` (last axis indexed by ``j = 0..J``) oddly through
    ``r = 0`` by ``left`` points and by zeros past ``r_max`` by ``right``
    points. Index ``j`` of the input lands at ``j + left`` of the output.
    """
    values = np.asarray(values, dtype=float)
    J = values.shape[-1] - 1
    shape = values.shape[:-1] + (left + J + 1 + right,)
    out = np.zeros(shape)
    out[..., left:left + J + 1] = values
    mirrored = min(left, J)
    if mirrored:
        out[..., left - mirrored:left] = -values[..., mirrored:0:-1]
    return out

def _psi(y):
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = np.exp(-1.0 / y[pos])
    return out

def _dpsi(y):
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = np.exp(-1.0 / y[pos]) / (y[pos] * y[pos])
    return out

def smooth_cutoff(x):
    """
    C-infinity cutoff equal to 1 on ``x <= 1`` and 0 on ``x >= 2``, with its
    derivative.
    """
    x = np.asarray(x, dtype=float)
    a = _psi(2.0 - x)
    b = _psi(x - 1.0)
    total = a + b
    chi = a / total
    dchi = (-_dpsi(2.0 - x) * b - a * _dpsi(x - 1.0)) / (total * total)
    return chi, dchi

class ZeroFamily(object):
    """
    Identically zero profile.
    """
    name = 'zero'
    amplitude = 0.0

    def __call__(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def derivative(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def support_radius(self):
        return 0.0

    def core_radius(self):
        return 0.0

    def cutoff_radius(self):
        return 0.0

    def validate(self, grid):
        pass

    def to_dict(self):
        return {'family': self.name}

class GaussianFamily(object):
    """
    ``a * exp(-((r - r_c)/sigma)**2)``.
    """
    name = 'gaussian'

    def __init__(self, amplitude=1.0, width=1.0, center=0.0):
        self.amplitude = float(amplitude)
        self.width = float(width)
        self.center = float(center)

    def __call__(self, r):
        x = (np.asarray(r, dtype=float) - self.center) / self.width
        return self.amplitude * np.exp(-x * x)

    def derivative(self, r):
        x = (np.asarray(r, dtype=float) - self.center) / self.width
        return -2.0 * x / self.width * self.amplitude * np.exp(-x * x)

    def support_radius(self):
        """
        Radius past which ``|u| < 1e-12 * amplitude``.
        """
        return self.center + self.width * _GAUSSIAN_REACH

    def core_radius(self):
        return self.center + self.width

    def cutoff_radius(self):
        """
        Radius where the profile has fallen to ``1/e`` of its peak, the
        gaussian counterpart of a tail cutoff.
        """
        return self.center + self.width

    def validate(self, grid):
        if self.width <= 0:
            raise exceptions.InvalidArgumentError('gaussian width must be positive')
        if self.support_radius() > grid.r_max:
            raise exceptions.InvalidArgumentError(
                'gaussian is not negligible at r_max=%r (needs %r)' %
                (grid.r_max, self.support_radius()))

    def to_dict(self):
        return {'family': self.name, 'amplitude': self.amplitude,
                'width': self.width, 'center': self.center}

class TailFamily(object):
    """
    Algebraic tail ``a * (1+r)**(-1-epsilon-eta)`` switched off smoothly
    between ``cutoff`` and ``2*cutoff``. The margin ``eta > 0`` keeps the
    weighted data norm finite.
    """
    name = 'tail'

    def __init__(self, epsilon=0.5, eta=0.5, amplitude=1.0, cutoff=10.0):
        self.epsilon = float(epsilon)
        self.eta = float(eta)
        self.amplitude = float(amplitude)
        self.cutoff = float(cutoff)

    @property
    def exponent(self):
        """float: decay exponent ``1 + epsilon + eta``"""
        return 1.0 + self.epsilon + self.eta

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        chi, _ = smooth_cutoff(r / self.cutoff)
        return self.amplitude * (1.0 + r) ** -self.exponent * chi

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        chi, dchi = smooth_cutoff(r / self.cutoff)
        power = self.amplitude * (1.0 + r) ** -self.exponent
        return power * (dchi / self.cutoff - self.exponent * chi / (1.0 + r))

    def support_radius(self):
        return 2.0 * self.cutoff

    def core_radius(self):
        return 1.0

    def cutoff_radius(self):
        return self.cutoff

    def validate(self, grid):
        if self.eta <= 0:
            raise exceptions.InvalidArgumentError(
                'tail margin eta must be positive (got %r); '
                'the weighted norm would be infinite' % self.eta)
        if self.epsilon <= 0 or self.cutoff <= 0:
            raise exceptions.InvalidArgumentError('tail epsilon and cutoff must be positive')
        if self.cutoff > grid.r_max / 2.0:
            raise exceptions.InvalidArgumentError(
                'tail cutoff %r exceeds r_max/2 = %r' % (self.cutoff, grid.r_max / 2.0))

    def to_dict(self):
        return {'family': self.name, 'epsilon': self.epsilon, 'eta': self.eta,
                'amplitude': self.amplitude, 'cutoff': self.cutoff}

class DerivativeFamily(object):
    """
    Velocity profile ``u_1 = du_0/dr`` of the position profile it is paired
    with. Only valid as a velocity.
    """
    name = 'derivative'

    def to_dict(self):
        return {'family': self.name}

_FAMILIES = {'zero': ZeroFamily, 'gaussian': GaussianFamily, 'tail': TailFamily,
             'derivative': DerivativeFamily}

def family_from_dict(d):
    """
    Build a profile family from its config dictionary (``{"family": name, ...}``).
    """
    d = dict(d)
    name = d.pop('family')
    try:
        cls = _FAMILIES[name]
    except KeyError:
        raise exceptions.InvalidArgumentError('unknown data family %s' % name)
    return cls(**d)

class DataSpec(object):
    """
    Initial data ``(u_0, u_1)`` described by a position family and a velocity
    family.
    """
    def __init__(self, position=None, velocity=None):
        """
        :param position: Family for ``u_0``; zero when omitted
        :param velocity: Family for ``u_1``; zero when omitted.
            :class:`DerivativeFamily` gives ``u_1 = du_0/dr``.
        """
        self.position = position if position is not None else ZeroFamily()
        self.velocity = velocity if velocity is not None else ZeroFamily()
        if isinstance(self.position, DerivativeFamily):
            raise exceptions.InvalidArgumentError('derivative family is velocity-only')

    @classmethod
    def from_dict(cls, d):
        return cls(family_from_dict(d['position']) if 'position' in d else None,
                   family_from_dict(d['velocity']) if 'velocity' in d else None)

    def to_dict(self):
        return {'position': self.position.to_dict(),
                'velocity': self.velocity.to_dict()}

    @property
    def amplitude(self):
        """float: largest family amplitude"""
        return max(self.position.amplitude,
                   getattr(self.velocity, 'amplitude', self.position.amplitude))

    def _velocity_families(self):
        if isinstance(self.velocity, DerivativeFamily):
            return [self.position]
        return [self.position, self.velocity]

    def support_radius(self):
        """
        Radius past which the data are negligible.
        """
        return max(f.support_radius() for f in self._velocity_families())

    def core_radius(self):
        """
        Radius of the bulk of the data.
        """
        return max(f.core_radius() for f in self._velocity_families())

    def cutoff_radius(self):
        """
        Radius where the data start to be switched off; twice this radius
        places the exterior region.
        """
        return max(f.cutoff_radius() for f in self._velocity_families())

    def validate(self, grid):
        for f in self._velocity_families():
            f.validate(grid)

    def u0(self, r):
        return self.position(r)

    def u1(self, r):
        if isinstance(self.velocity, DerivativeFamily):
            return self.position.derivative(r)
        return self.velocity(r)

def synthesize_data(spec, grid):
    """
    Sample initial data on ``grid``: ``w_j = r_j*u_0(r_j)``,
    ``wdot_j = r_j*u_1(r_j)`` at ``t = 0``.

    :param spec: Data description
    :type spec: DataSpec

    :param grid: Target grid
    :type grid: RadialGrid

    :rtype: ReducedState
    """
    spec.validate(grid)
    r = grid.r
    w = r * spec.u0(r)
    wdot = r * spec.u1(r)
    w[0] = 0.0
    wdot[0] = 0.0
    return ReducedState(grid, 0.0, w, wdot)

WeightedNorm = collections.namedtuple('WeightedNorm', ['norm_mu', 'norm_r'])

def weighted_data_norm(state, grid, epsilon):
    """
    Weighted norms of the data ``(du_0/dr, u_1)``:

    - ``norm_mu**2 = 4*pi * int (|u_0'|**2 + |u_1|**2) r**2 (1+r)**(1+2*eps) dr``
    - ``norm_r**2 = int (|u_0'|**2 + |u_1|**2) r**(3+2*eps) dr``

    The measures compare pointwise, so ``norm_r**2 <= norm_mu**2/(4*pi)``.

    :rtype: WeightedNorm
    """
    if state.t != 0:
        raise exceptions.InvalidArgumentError('data norms need the state at t = 0')
    if state.grid != grid:
        raise exceptions.InvalidArgumentError('state does not live on the given grid')
    r = grid.r
    g = gradient_term(state)
    density = g * g + state.wdot * state.wdot
    norm_mu = math.sqrt(4.0 * math.pi *
                        trapezoid(density * (1.0 + r) ** (1.0 + 2.0 * epsilon), dx=grid.dr))
    norm_r = math.sqrt(trapezoid(density * r ** (1.0 + 2.0 * epsilon), dx=grid.dr))
    return WeightedNorm(norm_mu, norm_r)

TailCheck = collections.namedtuple('TailCheck', ['ratio', 'passed'])

def pointwise_tail_check(state, A, epsilon, tol=1e-9):
    """
    Check ``|u_0(r)| <= A * r**(-1-epsilon)`` on the grid points with
    ``r >= 1``.

    The bound concerns the data, so a state at ``t != 0`` fails the check
    with an infinite ratio.

    :returns: the largest ratio ``|u_0| r**(1+eps) / A`` and whether it is
        at most ``1 + tol``
    :rtype: TailCheck
    """
    if state.t != 0:
        _logger.warning('tail check given a state at t=%r instead of the data', state.t)
        return TailCheck(float('inf'), False)
    r = state.grid.r
    outer = r >= 1.0
    if not outer.any():
        return TailCheck(0.0, True)
    u = recover_u(state)
    ratio = float(np.max(np.abs(u[outer]) * r[outer] ** (1.0 + epsilon)) / A)
    return TailCheck(ratio, ratio <= 1.0 + tol)
