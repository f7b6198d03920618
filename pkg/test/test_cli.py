# pylint: disable=redefined-outer-name
import os
import json
import pytest
import radialwave.main
import radialwave.log

def _read_json(filename):
    with open(filename, 'r') as f:
        return json.load(f)

def _zero_document(make_document):
    return make_document(data={}, grid={'r_max': 8, 'J': 64},
                         analyses=['energy', 'morawetz', 'mixed_norm', 'scattering'])

def test_no_operation():
    with pytest.raises(SystemExit):
        radialwave.main.doit([], {})

def test_simulate_zero(make_document, write_config, out_dir):
    config = write_config('zero', _zero_document(make_document))
    out = os.path.join(out_dir, 'zero')
    assert radialwave.main.doit(['simulate', '--config', config, '--out', out], {}) == 0
    assert os.path.exists(os.path.join(out, 'energy.csv'))
    summary = _read_json(os.path.join(out, 'summary.json'))
    assert summary['passed'] is True
    assert summary['info']['energy0'] == 0.0
    assert summary['config']['grid'] == {'r_max': 8, 'J': 64}

def _files(directory):
    contents = {}
    for name in sorted(os.listdir(directory)):
        if name != '.lock':
            with open(os.path.join(directory, name), 'rb') as f:
                contents[name] = f.read()
    return contents

def test_simulate_deterministic(make_document, write_config, out_dir):
    # fine enough for the conservation budget to hold
    config = write_config('gaussian', make_document(grid={'r_max': 16, 'J': 2048},
                                                     time={'T': 2, 'stride': 16},
                                                     analyses=['energy', 'morawetz',
                                                               'mixed_norm', 'residual']))
    outs = [os.path.join(out_dir, 'gaussian-%d' % i) for i in range(2)]
    codes = [radialwave.main.doit(['simulate', '--config', config, '--out', out], {})
             for out in outs]
    assert codes == [0, 0]
    summary = _read_json(os.path.join(outs[0], 'summary.json'))
    assert summary['passed'] is True
    first = _files(outs[0])
    assert 'energy.csv' in first
    assert first == _files(outs[1])

def test_config_errors(make_document, write_config):
    config = write_config('unknown', make_document(colour='blue'))
    assert radialwave.main.doit(['simulate', '--config', config], {}) == 2
    config = write_config('narrow', make_document(grid={'r_max': 8, 'J': 256}))
    assert radialwave.main.doit(['simulate', '--config', config], {}) == 2

def test_unknown_suite():
    assert radialwave.main.doit(['verify', '--suite', 'bogus'], {}) == 2

def test_sweep_cap(make_document, write_config, out_dir):
    config = write_config('capped', _zero_document(make_document))
    assert radialwave.main.doit(['sweep', '--config', config,
                                 '--axis', 'p=3,4', '--axis', 'epsilon=0.5,0.25',
                                 '--out', os.path.join(out_dir, 'capped')],
                                {'RADIALWAVE_SWEEP_CAP': '2'}) == 2
    assert not os.path.exists(os.path.join(out_dir, 'capped', 'sweep.csv'))

def test_sweep(make_document, write_config, out_dir):
    config = write_config('sweep', _zero_document(make_document))
    out = os.path.join(out_dir, 'sweep')
    assert radialwave.main.doit(['sweep', '--config', config, '--axis', 'p=3,4',
                                 '--out', out], {'RADIALWAVE_THREADS': '2'}) == 0
    with open(os.path.join(out, 'sweep.csv'), 'r') as f:
        lines = f.read().splitlines()
    assert len(lines) == 3
    assert lines[0].split(',') == radialwave.main.SWEEP_HEADER
    assert lines[1].startswith('0,3.0,0.5,zero,')
    assert lines[2].startswith('1,4.0,0.5,zero,')
    for index in range(2):
        summary = _read_json(os.path.join(out, 'run-%03d' % index, 'summary.json'))
        assert summary['config']['parameters']['p'] == 3.0 + index

def test_progress(make_document, write_config, out_dir, capfd):
    config = write_config('progress', _zero_document(make_document))
    assert radialwave.main.doit(['simulate', '--config', config,
                                 '--out', os.path.join(out_dir, 'progress')],
                                {'RADIALWAVE_PROGRESS': '1'}) == 0
    _, err = capfd.readouterr()
    assert 'leapfrog' in err
    assert '100%' in err

def test_log_file(make_document, write_config, out_dir):
    config = write_config('logged', _zero_document(make_document))
    log_file = os.path.join(out_dir, 'radialwave.log')
    try:
        assert radialwave.main.doit(['simulate', '--config', config,
                                     '--out', os.path.join(out_dir, 'logged')],
                                    {'RADIALWAVE_LOG_FILE': log_file,
                                     'RADIALWAVE_FILE_LOG_LEVEL': 'INFO'}) == 0
    finally:
        radialwave.log.remove_handlers()
    with open(log_file, 'r') as f:
        text = f.read()
    assert 'leapfrog' in text
    assert '[radialwave.solver] [INFO]' in text

def test_verify_identities(out_dir, capsys):
    out = os.path.join(out_dir, 'verify')
    code = radialwave.main.doit(['verify', '--suite', 'identities', '--out', out], {})
    assert code == 0
    verdict = _read_json(os.path.join(out, 'verify.json'))
    assert verdict['suite'] == 'identities'
    assert verdict['passed'] is True
    assert len(verdict['checks']) == 4
    checks = dict((c['name'], c['passed']) for c in verdict['checks'])
    assert checks['identities.commutator_T3']
    out, _ = capsys.readouterr()
    assert 'pass identities.commutator_T3' in out
