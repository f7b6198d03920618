# pylint: disable=redefined-outer-name,invalid-name
import os
import math
import pytest
from radialwave import exceptions
from radialwave.config import RunConfig, load_config, parse_axis, validate_document

def _error(document):
    with pytest.raises(exceptions.ConfigError) as ex:
        RunConfig(document)
    return ex.value

def test_defaults(make_document):
    config = RunConfig(make_document())
    assert config.T == 2.0
    assert config.stride == 4
    assert config.grid.J == 256
    assert config.params.R == 2.0
    assert config.params.delta == 0.1
    assert config.profile.kind == 'unit'
    assert config.backend == 'leapfrog'
    assert config.iters == 8
    assert config.analyses == ['energy']
    assert config.formats == ['csv', 'json']
    assert config.directory == 'radialwave-out'
    assert config.chart is None
    assert config.t_first == 0.0
    assert config.to_dict() == make_document()

def test_sample_config(p3_config):
    config = load_config(p3_config)
    assert config.params.p == 3.0
    assert config.grid.r_max == 40.0
    assert config.stride == 16
    assert 'scattering' in config.analyses

def test_unknown_key(make_document):
    document = make_document(grid={'r_max': 16, 'J': 256, 'bogus': 1})
    assert _error(document).path == 'grid.bogus'
    assert _error(make_document(colour='blue')).path == 'colour'

def test_missing_field(make_document):
    assert _error(make_document(parameters={'p': 3})).path == 'parameters.epsilon'

def test_wrong_type(make_document):
    assert _error(make_document(grid={'r_max': 16, 'J': 'many'})).path == 'grid.J'
    with pytest.raises(exceptions.ConfigError):
        validate_document(make_document(profile='cubic'))

def test_window_rule(make_document):
    error = _error(make_document(grid={'r_max': 8, 'J': 256}))
    assert error.path == 'grid.r_max'
    assert 'window rule' in error.message

def test_data_too_wide(make_document):
    assert _error(make_document(grid={'r_max': 4, 'J': 64})).path == 'data'

def test_bad_parameters(make_document):
    assert _error(make_document(parameters={'p': 5, 'epsilon': 0.5})).path == 'parameters'
    assert _error(make_document(parameters={'p': 3, 'epsilon': 0.5,
                                            'delta': 0.3})).path == 'parameters'

def test_zero_data(make_document):
    config = RunConfig(make_document(data={}, grid={'r_max': 4, 'J': 64}))
    assert config.data.support_radius() == 0.0
    assert config.params.R == 1.0

def _chart_document(make_document, **transform):
    return make_document(grid={'r_max': 20, 'J': 1024}, time={'T': 8, 'stride': 1},
                         transform=transform)

def test_chart(make_document):
    config = RunConfig(_chart_document(make_document))
    t0 = -math.sqrt(5.0) - 1.0
    assert config.params.t0 == t0
    assert config.chart.t0 == t0
    assert config.chart.tau_J == 64
    assert config.t_first == pytest.approx(t0 + math.exp(-1.0))
    analysed = RunConfig(make_document(grid={'r_max': 20, 'J': 1024},
                                       time={'T': 8, 'stride': 1},
                                       analyses=['energy', 'transform']))
    assert analysed.chart is not None

def test_chart_rules(make_document):
    document = _chart_document(make_document)
    document['time']['stride'] = 2
    assert _error(document).path == 'time.stride'
    document = _chart_document(make_document)
    document['backend'] = {'name': 'picard'}
    assert _error(document).path == 'backend.name'
    assert _error(_chart_document(make_document, tau_J=3)).path == 'transform.tau_J'
    assert _error(_chart_document(make_document, tau_min=0.5)).path == 'transform.tau_min'
    document = _chart_document(make_document)
    document['time']['T'] = 4
    assert _error(document).path == 'time.T'
    document = _chart_document(make_document)
    document['grid']['r_max'] = 12
    assert _error(document).path in ('transform', 'grid.r_max')

def test_derive(make_document):
    config = RunConfig(make_document())
    moved = config.derive(**{'parameters.p': 4.0, 'seed': 7})
    assert moved.params.p == 4.0
    assert moved.seed == 7
    assert config.params.p == 3.0
    assert config.seed is None
    with pytest.raises(exceptions.ConfigError):
        config.derive(**{'parameters.p': 6.0})

def test_load_errors(write_config, out_dir):
    with pytest.raises(exceptions.ConfigError) as ex:
        load_config(os.path.join(out_dir, 'missing.json'))
    assert ex.value.path == '<file>'
    filename = os.path.join(out_dir, 'broken.json')
    with open(filename, 'w') as f:
        f.write('{"parameters": ')
    with pytest.raises(exceptions.ConfigError) as ex:
        load_config(filename)
    assert ex.value.path == '<document>'
    assert write_config('empty', {}).endswith('empty.json')
    with pytest.raises(exceptions.ConfigError):
        load_config(os.path.join(out_dir, 'empty.json'))

def test_parse_axis():
    assert parse_axis('p=3,3.5, 4') == ('p', [3.0, 3.5, 4.0])
    assert parse_axis('epsilon=0.5') == ('epsilon', [0.5])
    assert parse_axis('family=gaussian,zero') == ('family', ['gaussian', 'zero'])
    for text in ('p', 'p=', 'p=abc', 'p=nan', 'family=cubic', 'kappa=1'):
        with pytest.raises(exceptions.ConfigError):
            parse_axis(text)

def test_tail_exterior_radius(make_document):
    tail = {'position': {'family': 'tail', 'epsilon': 0.5, 'eta': 0.5,
                         'amplitude': 1, 'cutoff': 5}}
    config = RunConfig(make_document(data=tail, grid={'r_max': 20, 'J': 1024}))
    assert config.params.R == 10.0
    assert config.params.t0 == -math.sqrt(101.0) - 1.0

def test_interpolation(make_document):
    assert RunConfig(make_document()).interpolation == 'linear'
    assert RunConfig(_chart_document(make_document)).interpolation == 'linear'
    config = RunConfig(_chart_document(make_document, method='cubic'))
    assert config.interpolation == 'cubic'
    assert _error(_chart_document(make_document, method='quintic')).path == 'transform.method'
