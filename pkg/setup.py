# Copyright 2026 The gsqg-front-lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from setuptools import setup, find_packages

import gsqg_front_lab

long_description = '''
GSQG Front Lab
==============
Pseudo-spectral laboratory for the one-dimensional front equation of the
generalized surface quasi-geostrophic family with the parameter alpha in [0, 2).

The front is evolved on a periodic grid by an integrating-factor Runge-Kutta
scheme, with the nonlinearity computed as a singular integral over difference
quotients. Around the solver the package provides the paraproduct calculus of
the normal form energy method, the dispersive norms and frequency envelopes
used for the decay estimates, and wave packet testing which extracts the
asymptotic profile of the front together with its logarithmic phase correction.

Every numerical claim is packed into a configured experiment with acceptance
criteria, which can be run by the `gsqg` command.
'''

setup(
    name='gsqg-front-lab',
    version=gsqg_front_lab.__version__,
    packages=find_packages(exclude=['tests', 'demo']),
    include_package_data=True,
    description='Pseudo-spectral laboratory for generalized SQG fronts: evolution, normal forms, dispersive decay '
                'and modified scattering',
    long_description=long_description,
    license='Apache License Version 2.0',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
    ],
    keywords=['sqg', 'front', 'dispersive', 'pseudo-spectral', 'paraproduct', 'scattering', 'scikit-learn'],
    install_requires=['numpy>=1.19.0', 'scipy>=1.6.0', 'scikit-learn>=0.24.0'],
    entry_points={'console_scripts': ['gsqg = gsqg_front_lab.cli:main']},
    test_suite='tests'
)
