import os
from setuptools import setup

def read(name):
    return open(os.path.join(os.path.dirname(__file__), name)).read()

setup(
    name='radialwave',
    version='1.0.0',
    description="Simulation and verification laboratory for radial defocusing semilinear waves",
    long_description=read('README.rst'),
    keywords='wave equation semilinear defocusing scattering morawetz hyperboloidal',
    license='MIT',
    packages=['radialwave'],
    entry_points={'console_scripts': ['radialwave=radialwave.main:main']},
    install_requires=['numpy>=1.17.0',
                      'scipy>=1.6.0',
                      'fasteners>=0.14.1',
                      'tqdm>=4.19.4',
                      'decorator>=4.1.2',
                      'jsonschema>=3.2.0']
)
