"""
Evolution of the reduced equation

    w_tt - w_rr = -r * phi(r) * exp(-kappa*t) * |w/r|**(p-1) * (w/r),   w(0, t) = 0

with two independent backends: a leapfrog scheme at unit Courant number and
Picard iteration of the Duhamel formula built on the exact 1D (d'Alembert)
propagator.
"""

# pylint: disable=invalid-name,too-many-arguments,too-many-locals

import collections
import logging
import math
import numpy as np
from scipy.integrate import trapezoid, cumulative_trapezoid
from radialwave import exceptions
from radialwave.core import ReducedState, DataSpec, GaussianFamily, \
                            u_from_w, odd_extension, energy_norm, \
                            synthesize_data

_logger = logging.getLogger(__name__)

BLOWUP_THRESHOLD = 1e12

_KINDS = ('unit', 'hyperbolic', 'free', 'custom')

class CoefficientProfile(object):
    """
    The coefficient ``phi`` and damping exponent ``kappa`` of the
    nonlinearity ``G(x, t, v) = -phi(x) exp(-kappa*t) |v|**(p-1) v``.

    Kinds:

    - ``unit``: ``phi = 1``
    - ``hyperbolic``: ``phi(s) = (s/sinh s)**(p-1)``
    - ``free``: ``phi = 0`` (linear wave equation)
    - ``custom``: user supplied ``phi`` and, optionally, its derivative
    """
    def __init__(self, p, kappa=0.0, kind='unit', phi=None, dphi=None):
        """
        :param p: Nonlinearity exponent
        :type p: float

        :param kappa: Damping exponent, non-negative
        :type kappa: float

        :param kind: One of ``unit``, ``hyperbolic``, ``free``, ``custom``
        :type kind: str

        :param phi: For ``custom`` profiles, function of ``r`` with values in [0, 1]
        :type phi: function(numpy.ndarray)

        :param dphi: For ``custom`` profiles, derivative of ``phi``. Estimated by
            finite differences when omitted.
        :type dphi: function(numpy.ndarray)
        """
        if kind not in _KINDS:
            raise exceptions.InvalidArgumentError('unknown profile kind %s' % kind)
        if kappa < 0:
            raise exceptions.InvalidArgumentError('kappa must be non-negative')
        if not 1 < p:
            raise exceptions.InvalidArgumentError('p must exceed 1')
        if (kind == 'custom') != (phi is not None):
            raise exceptions.InvalidArgumentError('phi is required exactly for custom profiles')
        self.p = float(p)
        self.kappa = float(kappa)
        self.kind = kind
        self._phi = phi
        self._dphi = dphi

    @classmethod
    def transformed(cls, p):
        """
        Profile of the equation satisfied by the hyperboloidal transform of a
        solution with ``phi = 1``, ``kappa = 0``: hyperbolic ``phi`` and
        ``kappa = p - 3``.
        """
        return cls(p, kappa=p - 3.0, kind='hyperbolic')

    def phi(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == 'unit':
            return np.ones_like(r)
        if self.kind == 'free':
            return np.zeros_like(r)
        if self.kind == 'hyperbolic':
            from radialwave.transform import phi_weight
            return phi_weight(r, self.p)
        return np.asarray(self._phi(r), dtype=float) * np.ones_like(r)

    def numerator(self, r):
        """
        Morawetz numerator ``(p-1)*phi(r) - r*phi'(r)``.
        """
        r = np.asarray(r, dtype=float)
        if self.kind == 'hyperbolic':
            from radialwave.transform import phi_weight, s_coth_s
            return (self.p - 1.0) * phi_weight(r, self.p) * s_coth_s(r)
        if self.kind in ('unit', 'free'):
            return (self.p - 1.0) * self.phi(r)
        if self._dphi is not None:
            dphi = np.asarray(self._dphi(r), dtype=float)
        else:
            dphi = np.gradient(self.phi(r), r, edge_order=2)
        return (self.p - 1.0) * self.phi(r) - r * dphi

    def check_morawetz(self, r):
        """
        Raise :class:`radialwave.exceptions.InvalidProfileError` if the
        Morawetz numerator is negative anywhere on ``r``.
        """
        numerator = self.numerator(r)
        bad = np.nonzero(numerator < 0)[0]
        if bad.size:
            raise exceptions.InvalidProfileError(float(r[bad[0]]), float(numerator[bad[0]]))

    def damping(self, t):
        return np.exp(-self.kappa * np.asarray(t, dtype=float))

    def nonlinearity(self, u, r, t, phi=None):
        """
        ``G = -phi(r) exp(-kappa*t) sign(u)|u|**p`` (``u`` along the last axis).
        """
        if phi is None:
            phi = self.phi(r)
        return -phi * self.damping(t) * np.sign(u) * np.abs(u) ** self.p

    def source(self, u, r, t, phi=None):
        """
        Source of the reduced equation, ``r*G``; zero at the origin.
        """
        return r * self.nonlinearity(u, r, t, phi)

    def to_dict(self):
        return {'p': self.p, 'kappa': self.kappa, 'kind': self.kind}

    def __repr__(self):
        return 'CoefficientProfile(p=%r, kappa=%r, kind=%r)' % (self.p, self.kappa, self.kind)

ACCUMULATORS = ('dissipation', 'morawetz', 'spacetime', 'source')

class _Accumulator(object):
    """
    Running space-time integrals, trapezoid in time:

    - ``dissipation``: int int exp(-kappa t) phi |u|**(p+1) dx dt
    - ``morawetz``: int int exp(-kappa t) ((p-1)phi - r phi')/r |u|**(p+1) dx dt
    - ``spacetime``: int int |u|**(2(p-1)) dx dt
    - ``source``: int ||G||_{L^2_x} dt
    """
    def __init__(self, grid, profile):
        self._r = grid.r
        self._dr = grid.dr
        self._profile = profile
        self._phi = profile.phi(grid.r)
        self._numerator = profile.numerator(grid.r)
        self._totals = dict.fromkeys(ACCUMULATORS, 0.0)
        self._last = None

    def densities(self, t, w):
        p = self._profile.p
        r = self._r
        au = np.abs(u_from_w(w, r))
        decay = math.exp(-self._profile.kappa * t)
        r2 = r * r
        pw = au ** (p + 1.0)
        g = decay * self._phi * au ** p
        fourpi = 4.0 * math.pi
        return {
            'dissipation': fourpi * trapezoid(decay * self._phi * pw * r2, dx=self._dr),
            'morawetz': fourpi * trapezoid(decay * self._numerator * pw * r, dx=self._dr),
            'spacetime': fourpi * trapezoid(au ** (2.0 * (p - 1.0)) * r2, dx=self._dr),
            'source': math.sqrt(fourpi * trapezoid(g * g * r2, dx=self._dr))
        }

    def add(self, t, w):
        current = self.densities(t, w)
        if self._last is not None:
            t_last, last = self._last
            half = 0.5 * (t - t_last)
            for name in ACCUMULATORS:
                self._totals[name] += half * (current[name] + last[name])
        self._last = (t, current)

    def totals(self):
        return dict(self._totals)

class Trajectory(object):
    """
    A strided sequence of states with running space-time integrals recorded
    at every stored snapshot.
    """
    # pylint: disable=too-many-instance-attributes
    def __init__(self, grid, dt, stride, snapshots, accumulators=None,
                 profile=None, diagnostics=None):
        """
        :param grid: Grid shared by all snapshots
        :type grid: radialwave.core.RadialGrid

        :param dt: Time step of the evolution
        :type dt: float

        :param stride: Steps between stored snapshots
        :type stride: int

        :param snapshots: States with uniformly spaced, increasing times
        :type snapshots: list

        :param accumulators: Name to per-snapshot running values
        :type accumulators: dict

        :param profile: Coefficient profile the trajectory was evolved with
        :type profile: CoefficientProfile

        :param diagnostics: Backend-specific extras (e.g. Picard gaps)
        :type diagnostics: dict
        """
        snapshots = tuple(snapshots)
        if not snapshots:
            raise exceptions.InvalidArgumentError('a trajectory needs at least one snapshot')
        times = np.array([s.t for s in snapshots])
        spacing = stride * dt
        if len(times) > 1:
            steps = np.diff(times)
            if np.any(steps <= 0) or np.max(np.abs(steps - spacing)) > 1e-9 * max(1.0, spacing):
                raise exceptions.InvalidArgumentError(
                    'snapshot times must increase uniformly by stride*dt')
        self._grid = grid
        self._dt = float(dt)
        self._stride = int(stride)
        self._snapshots = snapshots
        self._times = times
        self._times.setflags(write=False)
        self._accumulators = {}
        for name, values in (accumulators or {}).items():
            arr = np.array(values, dtype=float)
            arr.setflags(write=False)
            self._accumulators[name] = arr
        self.profile = profile
        self.diagnostics = dict(diagnostics or {})

    @property
    def grid(self):
        return self._grid

    @property
    def dt(self):
        return self._dt

    @property
    def stride(self):
        return self._stride

    @property
    def spacing(self):
        """float: time between stored snapshots"""
        return self._stride * self._dt

    @property
    def snapshots(self):
        return self._snapshots

    @property
    def times(self):
        return self._times

    @property
    def accumulators(self):
        return dict(self._accumulators)

    def __len__(self):
        return len(self._snapshots)

    def index(self, t):
        """
        Index of the snapshot stored at time ``t``.
        """
        idx = int(np.argmin(np.abs(self._times - t)))
        if abs(self._times[idx] - t) > 1e-9 * max(1.0, abs(t)):
            raise exceptions.InvalidArgumentError('no snapshot stored at t=%r' % t)
        return idx

    def at(self, t):
        return self._snapshots[self.index(t)]

    def accumulated(self, name, t=None):
        """
        Value of accumulator ``name`` at snapshot time ``t`` (default: last).
        """
        values = self._accumulators[name]
        return float(values[-1] if t is None else values[self.index(t)])

    def levels(self):
        """
        Stacked ``w`` values, shape ``(snapshots, J+1)``.
        """
        return np.array([s.w for s in self._snapshots])

    def velocities(self):
        return np.array([s.wdot for s in self._snapshots])

    def upto(self, t):
        """
        Trajectory truncated to snapshots with time at most ``t``.
        """
        keep = int(np.searchsorted(self._times, t + 1e-9 * max(1.0, abs(t)), side='right'))
        if keep == 0:
            raise exceptions.InvalidArgumentError('no snapshot at or before t=%r' % t)
        return Trajectory(self._grid, self._dt, self._stride, self._snapshots[:keep],
                          dict((k, v[:keep]) for k, v in self._accumulators.items()),
                          self.profile, self.diagnostics)

def _check_duration(T, stride):
    if not T > 0:
        raise exceptions.InvalidArgumentError('duration must be positive, got %r' % T)
    if int(stride) != stride or stride < 1:
        raise exceptions.InvalidArgumentError('stride must be a positive integer')

def _steps(T, dt, stride):
    # rounded up to a whole number of strides so the final level is stored
    blocks = int(math.ceil(T / (stride * dt) - 1e-9))
    return max(blocks, 1) * stride

def _blown_up(w):
    return not np.all(np.isfinite(w)) or np.max(np.abs(w)) > BLOWUP_THRESHOLD

def _lattice_position(w, wdot, k, dr):
    """
    Free lattice evolution by ``k`` steps of ``dt = dr`` (``k`` may be
    negative): ``w(r, t+k dt) = (w~(r-k dr) + w~(r+k dr))/2 +- (1/2) int w~_1``
    with the velocity integral taken as midpoints over panels of width
    ``2 dr``, which is exactly what the leapfrog recursion propagates.
    """
    m = abs(k)
    J = len(w) - 1
    if m == 0:
        return np.array(w, dtype=float)
    pad = m + 1
    ext_w = odd_extension(w, pad, pad)
    ext_v = odd_extension(wdot, pad, pad)
    prefix = np.zeros(len(ext_v) + 2)
    prefix[2::2] = np.cumsum(ext_v[0::2])
    prefix[3::2] = np.cumsum(ext_v[1::2])
    j = np.arange(J + 1) + pad
    first = j - m + 1
    last = j + m - 1
    integral = dr * (prefix[last + 2] - prefix[first])
    pos = 0.5 * (ext_w[j - m] + ext_w[j + m]) + math.copysign(1.0, k) * integral
    pos[0] = 0.0
    return pos

def _continuous_free(w, wdot, delta, dr):
    pad = int(math.ceil(delta / dr)) + 2
    J = len(w) - 1
    ext_w = odd_extension(w, pad, pad)
    ext_v = odd_extension(wdot, pad, pad)
    x = (np.arange(len(ext_w)) - pad) * dr
    r = np.arange(J + 1) * dr
    antiderivative = cumulative_trapezoid(ext_v, dx=dr, initial=0.0)
    ext_wr = np.gradient(ext_w, dr, edge_order=2)
    lo = r - delta
    hi = r + delta
    pos = 0.5 * (np.interp(lo, x, ext_w) + np.interp(hi, x, ext_w)) + \
          0.5 * (np.interp(hi, x, antiderivative) - np.interp(lo, x, antiderivative))
    vel = 0.5 * (np.interp(hi, x, ext_wr) - np.interp(lo, x, ext_wr)) + \
          0.5 * (np.interp(hi, x, ext_v) + np.interp(lo, x, ext_v))
    pos[0] = 0.0
    vel[0] = 0.0
    return pos, vel

def dalembert_free(state0, t, reverse=False):
    """
    Exact free evolution of ``w_tt = w_rr`` with odd reflection at ``r = 0``:

        w(r, t) = (w~0(r-D) + w~0(r+D))/2 + (1/2) int_{r-D}^{r+D} w~1,  D = t - t0

    Points past ``r_max`` see zero data, which is exact while the light cone
    of the data stays inside the grid.

    When ``D`` is a whole number of grid steps the evaluation is done on the
    lattice (velocity as the centered difference of neighbouring levels), so
    it coincides with :func:`evolve_leapfrog` run without a source.
    Otherwise the data are interpolated linearly.

    :param state0: State at time ``t0``
    :type state0: radialwave.core.ReducedState

    :param t: Target time; must not precede ``state0.t`` unless ``reverse``
    :type t: float

    :param reverse: Evolve backward in time instead, ``t <= state0.t``
    :type reverse: bool

    :rtype: radialwave.core.ReducedState
    """
    grid = state0.grid
    if reverse:
        if t > state0.t:
            raise exceptions.InvalidArgumentError(
                'reverse free evolution needs t <= %r, got %r' % (state0.t, t))
        flipped = ReducedState(grid, -state0.t, state0.w, -state0.wdot)
        out = dalembert_free(flipped, -t)
        return ReducedState(grid, t, out.w, -out.wdot)
    if t < state0.t:
        raise exceptions.InvalidArgumentError(
            'free evolution runs forward: t=%r precedes t0=%r' % (t, state0.t))
    delta = t - state0.t
    dr = grid.dr
    steps = delta / dr
    n = int(round(steps))
    if abs(steps - n) <= 1e-9 * max(1.0, steps):
        pos = _lattice_position(state0.w, state0.wdot, n, dr)
        ahead = _lattice_position(state0.w, state0.wdot, n + 1, dr)
        behind = _lattice_position(state0.w, state0.wdot, n - 1, dr)
        vel = (ahead - behind) / (2.0 * dr)
        vel[0] = 0.0
    else:
        pos, vel = _continuous_free(state0.w, state0.wdot, delta, dr)
    return ReducedState(grid, t, pos, vel)

def _report(progress, label, done, total):
    if progress:
        progress(label, done, total)

def evolve_leapfrog(state0, profile, T, stride=1, progress=None):
    """
    Evolve with the three-level scheme at unit Courant number ``dt = dr``:

        w[n+1, j] = w[n, j+1] + w[n, j-1] - w[n-1, j] + dt**2 * S[n, j]

    The first step is the Taylor start
    ``w[1] = (w[0, j+1] + w[0, j-1])/2 + dt*wdot + dt**2/2 * S[0]``,
    ``w = 0`` is imposed at the origin and ``w[n+1, J] = w[n, J-1]`` lets
    outgoing waves leave. Stored velocities are centered time differences.

    The number of steps is ``T/dt`` rounded up to a whole number of strides.

    :param state0: Initial state
    :type state0: radialwave.core.ReducedState

    :param profile: Coefficient profile of the nonlinearity
    :type profile: CoefficientProfile

    :param T: Duration
    :type T: float

    :param stride: Steps between stored snapshots
    :type stride: int

    :param progress: Optional function called with a label, the number of steps done and the total.
    :type progress: function(label, done, total)

    :rtype: Trajectory
    """
    _check_duration(T, stride)
    grid = state0.grid
    r = grid.r
    dt = grid.dr
    dt2 = dt * dt
    nsteps = _steps(T, dt, stride)
    phi = profile.phi(r)
    _logger.info('leapfrog: %d steps of dt=%g from t=%g (%r)', nsteps, dt, state0.t, profile)

    def source(w, t):
        return profile.source(u_from_w(w, r), r, t, phi)

    acc = _Accumulator(grid, profile)
    acc.add(state0.t, state0.w)
    snapshots = [state0]
    totals = [acc.totals()]

    prev = np.array(state0.w)
    cur = np.empty_like(prev)
    cur[1:-1] = 0.5 * (prev[2:] + prev[:-2]) + dt * state0.wdot[1:-1] + \
                0.5 * dt2 * source(prev, state0.t)[1:-1]
    cur[0] = 0.0
    cur[-1] = prev[-2]
    if _blown_up(cur):
        raise exceptions.NumericalBlowupError(1, state0.t + dt)

    every = max(1, nsteps // 100)
    for n in range(1, nsteps + 1):
        t = state0.t + n * dt
        nxt = np.empty_like(cur)
        nxt[1:-1] = cur[2:] + cur[:-2] - prev[1:-1] + dt2 * source(cur, t)[1:-1]
        nxt[0] = 0.0
        nxt[-1] = cur[-2]
        if _blown_up(nxt):
            raise exceptions.NumericalBlowupError(n + 1, t + dt)
        acc.add(t, cur)
        if n % stride == 0:
            wdot = (nxt - prev) / (2.0 * dt)
            wdot[0] = 0.0
            snapshots.append(ReducedState(grid, t, cur, wdot))
            totals.append(acc.totals())
        if n % every == 0 or n == nsteps:
            _report(progress, 'leapfrog', n, nsteps)
        prev, cur = cur, nxt

    _logger.info('leapfrog: reached t=%g, %d snapshots', snapshots[-1].t, len(snapshots))
    return Trajectory(grid, dt, stride, snapshots,
                      dict((name, [tot[name] for tot in totals]) for name in ACCUMULATORS),
                      profile, {'backend': 'leapfrog', 'steps': nsteps})

def rewind(state0, profile, duration):
    """
    Evolve backward by ``duration``. The equation is time reversible only
    without damping, so ``profile.kappa`` must be 0.

    :rtype: radialwave.core.ReducedState
    """
    if profile.kappa != 0:
        raise exceptions.InvalidArgumentError('backward evolution needs kappa = 0')
    grid = state0.grid
    flipped = ReducedState(grid, -state0.t, state0.w, -state0.wdot)
    steps = _steps(duration, grid.dr, 1)
    traj = evolve_leapfrog(flipped, profile, duration, stride=steps)
    last = traj.snapshots[-1]
    return ReducedState(grid, -last.t, last.w, -last.wdot)

def evolve_window(state0, profile, t_first, t_last, stride=1, progress=None):
    """
    Leapfrog trajectory covering ``[t_first, t_last]``. When ``t_first``
    precedes the data, the data are first rewound by a whole number of
    steps, so the lattice still passes through ``state0.t``.

    :rtype: Trajectory
    """
    start = state0
    if t_first < state0.t:
        dr = state0.grid.dr
        back = math.ceil((state0.t - t_first) / dr - 1e-9) * dr
        start = rewind(state0, profile, back)
    return evolve_leapfrog(start, profile, t_last - start.t, stride=stride, progress=progress)

def _duhamel(S, dt):
    """
    ``D(r, t_n) = (1/2) int_0^{t_n} int_{r-(t_n-s)}^{r+(t_n-s)} S~(r', s) dr' ds``
    on the lattice ``dt = dr``: trapezoid in ``s``, exact lattice lookups of
    the cumulative trapezoid antiderivative of the odd extension in ``r'``.
    """
    nlev, width = S.shape
    N = nlev - 1
    pad = N + 1
    ext = odd_extension(S, pad, pad)
    F = cumulative_trapezoid(ext, dx=dt, axis=1, initial=0.0)
    D = np.zeros_like(S)
    j = np.arange(width) + pad
    for m in range(N):
        k = np.arange(1, N - m + 1)[:, None]
        weight = 0.5 * dt if m == 0 else dt
        D[m + 1:] += 0.5 * weight * (F[m, j + k] - F[m, j - k])
    D[:, 0] = 0.0
    return D

def _diverging(gaps):
    if not np.isfinite(gaps[-1]) or gaps[-1] > BLOWUP_THRESHOLD:
        return True
    return len(gaps) >= 4 and gaps[-1] > gaps[-2] > gaps[-3] > gaps[-4]

def picard_solve(state0, profile, T, iters=8, stride=1, progress=None):
    """
    Solve by Picard iteration of the integral equation

        w_{k+1}(t) = S_L(t) w(0) + Duhamel[source(w_k)](t),   w_0 = 0

    with the free part and the Duhamel kernel given by the exact 1D formula.
    The gap ``max |w_{k+1} - w_k|`` over all space-time nodes of each
    iteration is kept in ``diagnostics['gaps']``; ``diagnostics['gap']`` is
    the last one.

    Raises :class:`radialwave.exceptions.NoContractionError` when the gap
    grows three iterations in a row (the interval is too long for the data).

    :rtype: Trajectory
    """
    _check_duration(T, stride)
    if int(iters) != iters or iters < 1:
        raise exceptions.InvalidArgumentError('iters must be a positive integer')
    grid = state0.grid
    r = grid.r
    dt = grid.dr
    N = _steps(T, dt, stride)
    times = state0.t + np.arange(N + 1) * dt
    phi = profile.phi(r)
    free = np.array([_lattice_position(state0.w, state0.wdot, n, dt) for n in range(N + 1)])
    _logger.info('picard: %d levels of dt=%g, %d iterations', N + 1, dt, iters)

    W = np.zeros_like(free)
    gaps = []
    for it in range(int(iters)):
        S = profile.source(u_from_w(W, r), r, times[:, None], phi)
        nxt = free + _duhamel(S, dt)
        with np.errstate(invalid='ignore', over='ignore'):
            gap = float(np.max(np.abs(nxt - W)))
        gaps.append(gap if np.isfinite(gap) else float('inf'))
        W = nxt
        _logger.info('picard: iteration %d gap %.3e', it + 1, gaps[-1])
        _report(progress, 'picard', it + 1, int(iters))
        if _diverging(gaps):
            raise exceptions.NoContractionError(gaps)
        if gap == 0:
            break

    if N >= 2:
        Wdot = np.gradient(W, dt, axis=0, edge_order=2)
    else:
        Wdot = np.gradient(W, dt, axis=0, edge_order=1)
    Wdot[0] = state0.wdot
    Wdot[:, 0] = 0.0

    acc = _Accumulator(grid, profile)
    snapshots = []
    totals = []
    for n in range(N + 1):
        acc.add(times[n], W[n])
        if n % stride == 0:
            snapshots.append(ReducedState(grid, times[n], W[n], Wdot[n]))
            totals.append(acc.totals())
    return Trajectory(grid, dt, stride, snapshots,
                      dict((name, [tot[name] for tot in totals]) for name in ACCUMULATORS),
                      profile, {'backend': 'picard', 'gaps': gaps, 'gap': gaps[-1]})

ResidualSeries = collections.namedtuple('ResidualSeries', ['times', 'max_norm', 'l2_norm'])

def pde_residual(traj, profile):
    """
    Discrete residual ``(d_tt - d_rr) w - source`` at the interior grid
    points of every interior snapshot, using the snapshot spacing as time step.

    :returns: per-snapshot max and L^2 norms
    :rtype: ResidualSeries
    """
    if len(traj) < 3:
        raise exceptions.InvalidArgumentError('residual needs at least 3 snapshots')
    grid = traj.grid
    r = grid.r
    h = traj.spacing
    dr = grid.dr
    W = traj.levels()
    phi = profile.phi(r)
    times = traj.times[1:-1]
    wtt = (W[2:] - 2.0 * W[1:-1] + W[:-2]) / (h * h)
    wrr = (W[1:-1, 2:] - 2.0 * W[1:-1, 1:-1] + W[1:-1, :-2]) / (dr * dr)
    S = profile.source(u_from_w(W[1:-1], r), r, times[:, None], phi)
    res = wtt[:, 1:-1] - wrr - S[:, 1:-1]
    max_norm = np.max(np.abs(res), axis=1)
    l2_norm = np.sqrt(trapezoid(res * res, dx=dr, axis=1))
    return ResidualSeries(times, max_norm, l2_norm)

DependenceReport = collections.namedtuple(
    'DependenceReport', ['etas', 'differences', 'ratios', 'passed'])

def continuous_dependence(spec, grid, profile, T, etas=(1e-2, 1e-3, 1e-4),
                          perturbation=None):
    """
    Perturb the data by ``eta`` times a fixed profile and compare the
    solutions at time ``T`` in the energy norm. The differences should scale
    linearly in ``eta``: passes when the largest ``difference/eta`` is at
    most twice the smallest.

    :param perturbation: Direction of the perturbation; a unit Gaussian when omitted
    :type perturbation: radialwave.core.DataSpec

    :rtype: DependenceReport
    """
    if perturbation is None:
        perturbation = DataSpec(GaussianFamily(1.0, 1.0, spec.core_radius()))
    base = synthesize_data(spec, grid)
    direction = synthesize_data(perturbation, grid)
    steps = _steps(T, grid.dr, 1)

    def final(state):
        return evolve_leapfrog(state, profile, T, stride=steps).snapshots[-1]

    reference = final(base)
    differences = []
    for eta in etas:
        moved = final(ReducedState(grid, 0.0, base.w + eta * direction.w,
                                   base.wdot + eta * direction.wdot))
        gap = ReducedState(grid, moved.t, moved.w - reference.w, moved.wdot - reference.wdot)
        differences.append(energy_norm(gap))
    ratios = [d / eta for d, eta in zip(differences, etas)]
    passed = min(ratios) > 0 and max(ratios) <= 2.0 * min(ratios)
    _logger.info('continuous dependence: ratios %s', ratios)
    return DependenceReport(list(etas), differences, ratios, passed)
