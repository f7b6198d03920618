# pylint: disable=redefined-outer-name
import pytest
from radialwave import exceptions
from radialwave.suites import SUITES, Check, run_suite

@pytest.mark.parametrize('name', list(SUITES))
def test_suite_passes(name):
    checks = run_suite(name)
    assert checks
    failed = [c.name for c in checks if not c.passed]
    assert failed == []
    for check in checks:
        assert check.name.startswith(name + '.')

def test_decay_calibration():
    check, = run_suite('decay')
    assert check.passed
    assert check.details['R'] == 50.0
    assert check.details['es1_max'] == 0.0

def test_unknown_suite():
    with pytest.raises(exceptions.UnknownSuiteError) as ex:
        run_suite('bogus')
    assert str(ex.value) == 'unknown suite bogus'

def test_check_dict():
    check = Check('drift', True, value=1e-5)
    assert check.to_dict() == {'name': 'drift', 'passed': True, 'details': {'value': 1e-5}}
