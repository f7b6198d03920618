"""
Module containing exceptions thrown by :mod:`radialwave`.
"""

class RadialWaveError(Exception):
    """
    Base exception class for all radialwave errors
    """
    pass

class InvalidArgumentError(RadialWaveError):
    """
    An operation was called with arguments outside its preconditions.
    """
    def __init__(self, message):
        """
        :param message: What was wrong with the arguments
        :type message: str
        """
        super(InvalidArgumentError, self).__init__(message)
        self.message = message

    def __str__(self):
        return 'invalid argument: %s' % self.message

class NumericalBlowupError(RadialWaveError):
    """
    The evolved field became non-finite or exceeded the blow-up threshold.
    The nonlinearity is defocusing, so this signals a bug or a CFL violation
    rather than a property of the equation.
    """
    def __init__(self, step, time):
        """
        :param step: Index of the time step at which the field blew up
        :type step: int

        :param time: Time stamp of that step
        :type time: float
        """
        super(NumericalBlowupError, self).__init__()
        self.step = step
        self.time = time

    def __str__(self):
        return 'numerical blow-up at step %d (t=%r)' % (self.step, self.time)

class NoContractionError(RadialWaveError):
    """
    Picard iteration stopped contracting; the time interval is too long for
    the size of the data.
    """
    def __init__(self, gaps):
        """
        :param gaps: Sup-norm gaps between successive iterates so far
        :type gaps: list
        """
        super(NoContractionError, self).__init__()
        self.gaps = list(gaps)

    def __str__(self):
        return 'picard iteration does not contract (gaps %s)' % \
            ', '.join('%.3e' % g for g in self.gaps)

class InvalidProfileError(RadialWaveError):
    """
    The coefficient profile violates (p-1)*phi - r*phi' >= 0, so no
    Morawetz budget exists for it.
    """
    def __init__(self, radius, value):
        super(InvalidProfileError, self).__init__()
        self.radius = radius
        self.value = value

    def __str__(self):
        return 'morawetz weight negative (%r) at r=%r' % (self.value, self.radius)

class OutsideConeError(RadialWaveError):
    """
    A point handed to the hyperboloidal chart lies outside the forward cone
    t - t0 > r.
    """
    def __init__(self, r, t, t0):
        super(OutsideConeError, self).__init__()
        self.r = r
        self.t = t
        self.t0 = t0

    def __str__(self):
        return '(r=%r, t=%r) is outside the cone t - t0 > r (t0=%r)' % \
            (self.r, self.t, self.t0)

class CoverageError(RadialWaveError):
    """
    The image of a chart leaves the stored space-time window of a trajectory.
    """
    def __init__(self, nodes):
        """
        :param nodes: Offending ``(s, tau)`` chart nodes
        :type nodes: list
        """
        super(CoverageError, self).__init__()
        self.nodes = list(nodes)

    def __str__(self):
        shown = ', '.join('(%.4g, %.4g)' % n for n in self.nodes[:5])
        more = '' if len(self.nodes) <= 5 else ' and %d more' % (len(self.nodes) - 5)
        return 'chart nodes outside the stored window: %s%s' % (shown, more)

class ConfigError(RadialWaveError):
    """
    A run configuration is malformed or violates a cross-field rule.
    """
    def __init__(self, path, message):
        """
        :param path: Dotted path of the offending field, e.g. ``grid.r_max``
        :type path: str

        :param message: Description of the violation
        :type message: str
        """
        super(ConfigError, self).__init__()
        self.path = path
        self.message = message

    def __str__(self):
        return '%s: %s' % (self.path or '<root>', self.message)

class UnknownSuiteError(RadialWaveError):
    """
    A verification suite name isn't known.
    """
    def __init__(self, suite):
        super(UnknownSuiteError, self).__init__()
        self.suite = suite

    def __str__(self):
        return 'unknown suite %s' % self.suite

class SweepCapError(RadialWaveError):
    """
    A sweep expands to more points than the configured cap.
    """
    def __init__(self, size, cap):
        super(SweepCapError, self).__init__()
        self.size = size
        self.cap = cap

    def __str__(self):
        return 'sweep has %d points, cap is %d' % (self.size, self.cap)
