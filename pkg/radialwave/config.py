"""
Run configuration: a single JSON document validated against a schema,
then checked for the rules that tie fields together.
"""

# pylint: disable=invalid-name

import copy
import json
import logging
import math
import jsonschema
from radialwave import exceptions
from radialwave.core import Parameters, DataSpec, build_grid
from radialwave.solver import CoefficientProfile
from radialwave.transform import HyperboloidalChart

_logger = logging.getLogger(__name__)

ANALYSES = ['energy', 'data_norm', 'tail_check', 'dissipation', 'morawetz',
            'mixed_norm', 'scattering', 'decay', 'residual', 'transform']

FORMATS = ['csv', 'json']

WINDOW_MARGIN = 2.0

_number = {'type': 'number'}
_count = {'type': 'integer', 'minimum': 1}

_family = {
    'oneOf': [
        {'type': 'object', 'additionalProperties': False, 'required': ['family'],
         'properties': {'family': {'const': 'zero'}}},
        {'type': 'object', 'additionalProperties': False, 'required': ['family'],
         'properties': {'family': {'const': 'gaussian'}, 'amplitude': _number,
                        'width': {'type': 'number', 'exclusiveMinimum': 0},
                        'center': _number}},
        {'type': 'object', 'additionalProperties': False, 'required': ['family'],
         'properties': {'family': {'const': 'tail'}, 'amplitude': _number,
                        'epsilon': {'type': 'number', 'exclusiveMinimum': 0},
                        'eta': _number,
                        'cutoff': {'type': 'number', 'exclusiveMinimum': 0}}},
        {'type': 'object', 'additionalProperties': False, 'required': ['family'],
         'properties': {'family': {'const': 'derivative'}}},
    ]
}

SCHEMA = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'type': 'object',
    'additionalProperties': False,
    'required': ['parameters', 'grid', 'time'],
    'properties': {
        'parameters': {
            'type': 'object', 'additionalProperties': False,
            'required': ['p', 'epsilon'],
            'properties': dict((k, _number) for k in
                               ['p', 'epsilon', 'A', 'kappa', 'delta', 'B1', 'R', 't0'])
        },
        'profile': {'enum': ['unit', 'hyperbolic']},
        'grid': {
            'type': 'object', 'additionalProperties': False,
            'required': ['r_max', 'J'],
            'properties': {'r_max': {'type': 'number', 'exclusiveMinimum': 0},
                           'J': {'type': 'integer', 'minimum': 8}}
        },
        'time': {
            'type': 'object', 'additionalProperties': False,
            'required': ['T'],
            'properties': {'T': {'type': 'number', 'exclusiveMinimum': 0},
                           'stride': _count}
        },
        'data': {
            'type': 'object', 'additionalProperties': False,
            'properties': {'position': _family, 'velocity': _family}
        },
        'backend': {
            'type': 'object', 'additionalProperties': False,
            'required': ['name'],
            'properties': {'name': {'enum': ['leapfrog', 'picard']},
                           'iters': _count}
        },
        'analyses': {'type': 'array', 'items': {'enum': ANALYSES}, 'uniqueItems': True},
        'transform': {
            'type': 'object', 'additionalProperties': False,
            'properties': {'s_max': {'type': 'number', 'exclusiveMinimum': 0},
                           'tau_min': _number, 'tau_max': _number,
                           's_J': {'type': 'integer', 'minimum': 8},
                           'tau_J': {'type': 'integer', 'minimum': 2},
                           'method': {'enum': ['linear', 'cubic']}}
        },
        'output': {
            'type': 'object', 'additionalProperties': False,
            'properties': {'directory': {'type': 'string'},
                           'formats': {'type': 'array', 'items': {'enum': FORMATS},
                                       'uniqueItems': True}}
        },
        'seed': {'type': 'integer'}
    }
}

_TRANSFORM_DEFAULTS = {'s_max': 2.0, 'tau_min': -1.0, 'tau_max': 1.0, 's_J': 64, 'tau_J': 64,
                       'method': 'linear'}

def _path(error):
    parts = [str(p) for p in error.absolute_path]
    if error.validator == 'additionalProperties':
        extra = [k for k in error.instance if k not in error.schema.get('properties', {})]
        parts.extend(sorted(extra)[:1])
    elif error.validator == 'required':
        missing = [k for k in error.validator_value if k not in error.instance]
        parts.extend(missing[:1])
    return '.'.join(parts) or '<document>'

def validate_document(document):
    """
    Check ``document`` against :data:`SCHEMA`.

    Raises :class:`radialwave.exceptions.ConfigError` naming the dotted
    path of the first offending field.
    """
    validator = jsonschema.Draft7Validator(SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(document))
    if error is not None:
        raise exceptions.ConfigError(_path(error), error.message)

class RunConfig(object):
    """
    A validated run configuration.
    """
    # pylint: disable=too-many-instance-attributes
    def __init__(self, document):
        """
        :param document: Parsed JSON run configuration
        :type document: dict
        """
        validate_document(document)
        self.document = copy.deepcopy(document)
        grid_doc = document['grid']
        self.grid = build_grid(grid_doc['r_max'], grid_doc['J'])
        self.T = float(document['time']['T'])
        self.stride = int(document['time'].get('stride', 1))

        try:
            self.data = DataSpec.from_dict(document.get('data', {}))
            self.data.validate(self.grid)
        except exceptions.InvalidArgumentError as ex:
            raise exceptions.ConfigError('data', ex.message)

        fields = dict(document['parameters'])
        if 'R' not in fields:
            fields['R'] = max(1.0, 2.0 * self.data.cutoff_radius())
        try:
            self.params = Parameters(**fields)
        except exceptions.InvalidArgumentError as ex:
            raise exceptions.ConfigError('parameters', ex.message)

        kind = document.get('profile', 'unit')
        kappa = self.params.kappa
        try:
            self.profile = CoefficientProfile(self.params.p, kappa, kind)
            self.profile.check_morawetz(self.grid.r)
        except exceptions.RadialWaveError as ex:
            raise exceptions.ConfigError('profile', str(ex))

        backend = document.get('backend', {'name': 'leapfrog'})
        self.backend = backend['name']
        self.iters = int(backend.get('iters', 8))

        self.analyses = list(document.get('analyses', ['energy']))
        output = document.get('output', {})
        self.directory = output.get('directory', 'radialwave-out')
        self.formats = list(output.get('formats', FORMATS))
        self.seed = document.get('seed')

        self.chart = None
        self.interpolation = _TRANSFORM_DEFAULTS['method']
        if 'transform' in document or 'transform' in self.analyses:
            self.chart = self._chart(document.get('transform', {}))
        self._check_window()

    def _chart(self, request):
        if self.stride != 1:
            raise exceptions.ConfigError('time.stride',
                                         'a chart request needs stride 1, got %d' % self.stride)
        if self.backend != 'leapfrog':
            raise exceptions.ConfigError('backend.name', 'a chart request needs leapfrog')
        fields = dict(_TRANSFORM_DEFAULTS)
        fields.update(request)
        self.interpolation = fields['method']
        try:
            chart = HyperboloidalChart(self.params.t0, fields['s_max'], fields['tau_min'],
                                       fields['tau_max'], fields['s_J'], fields['tau_J'],
                                       r_max=self.grid.r_max)
        except exceptions.InvalidArgumentError as ex:
            raise exceptions.ConfigError('transform', ex.message)
        if not chart.tau_min <= 0 <= chart.tau_max:
            raise exceptions.ConfigError('transform.tau_min', 'tau range must contain 0')
        zero = -chart.tau_min / chart.dtau
        if abs(zero - round(zero)) > 1e-9:
            raise exceptions.ConfigError('transform.tau_J', 'tau = 0 must be a chart node')
        t_last = chart.time_window()[1]
        if t_last > self.T:
            raise exceptions.ConfigError(
                'time.T', 'chart reaches t=%r beyond T=%r' % (t_last, self.T))
        return chart

    @property
    def t_first(self):
        """float: earliest time the run must cover"""
        if self.chart is None:
            return 0.0
        return min(0.0, self.chart.time_window()[0])

    def _check_window(self):
        need = self.data.support_radius() + self.T + abs(self.t_first) + WINDOW_MARGIN
        if self.grid.r_max < need:
            raise exceptions.ConfigError(
                'grid.r_max',
                'window rule: r_max=%r must be at least data support + T + %g%s = %r' %
                (self.grid.r_max, WINDOW_MARGIN,
                 ' + |t_first|' if self.t_first < 0 else '', need))

    def derive(self, **overrides):
        """
        Copy of the configuration with dotted-path fields replaced, e.g.
        ``derive(**{'parameters.p': 4})``.
        """
        document = copy.deepcopy(self.document)
        for dotted, value in overrides.items():
            keys = dotted.split('.')
            node = document
            for key in keys[:-1]:
                node = node.setdefault(key, {})
            node[keys[-1]] = value
        return RunConfig(document)

    def to_dict(self):
        return copy.deepcopy(self.document)

def load_config(filename):
    """
    Read and validate a run configuration file.

    :rtype: RunConfig
    """
    try:
        with open(filename, 'rb') as f:
            document = json.loads(f.read().decode('utf-8'))
    except (IOError, OSError) as ex:
        raise exceptions.ConfigError('<file>', 'cannot read %s: %s' % (filename, ex))
    except ValueError as ex:
        raise exceptions.ConfigError('<document>', 'invalid JSON: %s' % ex)
    _logger.info('loaded run configuration %s', filename)
    return RunConfig(document)

def parse_axis(text):
    """
    Parse a sweep axis ``name=v1,v2,...``. Numeric axes (``p``,
    ``epsilon``) give floats; ``family`` gives names.

    :rtype: tuple
    """
    if '=' not in text:
        raise exceptions.ConfigError('axis', 'expected name=v1,v2,... got %r' % text)
    name, values = text.split('=', 1)
    name = name.strip()
    items = [v.strip() for v in values.split(',') if v.strip()]
    if not items:
        raise exceptions.ConfigError('axis.' + name, 'no values')
    if name in ('p', 'epsilon'):
        try:
            parsed = [float(v) for v in items]
        except ValueError:
            raise exceptions.ConfigError('axis.' + name, 'values must be numbers')
        if not all(math.isfinite(v) for v in parsed):
            raise exceptions.ConfigError('axis.' + name, 'values must be finite')
        return name, parsed
    if name == 'family':
        unknown = [v for v in items if v not in ('gaussian', 'tail', 'zero')]
        if unknown:
            raise exceptions.ConfigError('axis.family', 'unknown family %s' % unknown[0])
        return name, items
    raise exceptions.ConfigError('axis', 'unknown sweep axis %s' % name)
