import os
import json
import tempfile
import shutil
import pytest
from radialwave.core import DataSpec, GaussianFamily, build_grid, synthesize_data
from radialwave.solver import CoefficientProfile, evolve_leapfrog

_here = os.path.join(os.path.dirname(__file__))

_p3_config = os.path.join(_here, '..', 'configs', 'p3_gaussian.json')

@pytest.fixture(scope='module')
def p3_config():
    return _p3_config

@pytest.fixture(scope='module')
def out_dir(request):
    dir_name = tempfile.mkdtemp()
    def cleanup():
        # Be ultra cautious because we'll be doing rm -rf on this directory
        assert dir_name.startswith('/tmp/')
        shutil.rmtree(dir_name)
    request.addfinalizer(cleanup)
    return dir_name

@pytest.fixture(scope='module')
def small_grid():
    # dr = 1/64, roomy enough for a unit gaussian evolved up to t = 4
    return build_grid(16.0, 1024)

@pytest.fixture(scope='module')
def gaussian_spec():
    return DataSpec(GaussianFamily(1.0, 1.0, 0.0))

@pytest.fixture(scope='module')
def gaussian_state(small_grid, gaussian_spec):
    return synthesize_data(gaussian_spec, small_grid)

@pytest.fixture(scope='module')
def unit_profile():
    return CoefficientProfile(3.0)

@pytest.fixture(scope='module')
def gaussian_traj(gaussian_state, unit_profile):
    return evolve_leapfrog(gaussian_state, unit_profile, 4.0)

@pytest.fixture(scope='module')
def damped_traj(gaussian_state):
    return evolve_leapfrog(gaussian_state, CoefficientProfile(4.0, 1.0, 'hyperbolic'), 4.0,
                           stride=4)

@pytest.fixture(scope='module')
def make_document():
    return _make_document

def _make_document(**overrides):
    document = {
        'parameters': {'p': 3, 'epsilon': 0.5},
        'grid': {'r_max': 16, 'J': 256},
        'time': {'T': 2, 'stride': 4},
        'data': {'position': {'family': 'gaussian', 'amplitude': 1,
                              'width': 1, 'center': 0}},
        'analyses': ['energy'],
    }
    document.update(overrides)
    return document

@pytest.fixture(scope='module')
def write_config(out_dir):
    def write(name, document):
        filename = os.path.join(out_dir, name + '.json')
        with open(filename, 'w') as f:
            json.dump(document, f)
        return filename
    return write
