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

import codecs
import json
import os
import re
import shutil
import sys
import tempfile
import unittest

import numpy as np
from sklearn.exceptions import NotFittedError

try:
    from gsqg_front_lab.cli import Criterion, ExperimentRunner, EXPERIMENTS, main
    from gsqg_front_lab.evolution import FrontState, Trajectory
    from gsqg_front_lab.spectral_core import FourierField, Grid
    from gsqg_front_lab.utils import read_snapshot
except:
    sys.path.append(os.path.join(os.path.dirname(__file__), '..'))
    from gsqg_front_lab.cli import Criterion, ExperimentRunner, EXPERIMENTS, main
    from gsqg_front_lab.evolution import FrontState, Trajectory
    from gsqg_front_lab.spectral_core import FourierField, Grid
    from gsqg_front_lab.utils import read_snapshot


SLOW_TESTS = os.environ.get('GSQG_SLOW_TESTS', '0') == '1'


class TestCriterion(unittest.TestCase):
    def test_passed(self):
        self.assertTrue(Criterion('a', 0.5, 1.0, '<').passed)
        self.assertFalse(Criterion('a', 1.0, 1.0, '<').passed)
        self.assertTrue(Criterion('a', 1.0, 1.0, '>=').passed)
        self.assertTrue(Criterion('a', 2.1, (1.9, 2.1), 'in').passed)
        self.assertFalse(Criterion('a', 2.2, (1.9, 2.1), 'in').passed)
        self.assertFalse(Criterion('a', np.nan, 1.0, '<').passed)

    def test_as_dict(self):
        res = Criterion('exponent', np.nan, (1.9, 2.1), 'in').as_dict()
        self.assertEqual(res, {'name': 'exponent', 'value': None, 'comparison': 'in', 'tolerance': [1.9, 2.1],
                               'passed': False})


class TestExperimentRunner(unittest.TestCase):
    def setUp(self):
        self.output_dir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.isdir(self.output_dir):
            shutil.rmtree(self.output_dir)

    def test_check_params_negative01(self):
        true_err_msg = re.escape('`experiment` is wrong! Expected one of {0}, got `blowup`.'.format(
            ', '.join(sorted(EXPERIMENTS.keys()))))
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(experiment='blowup', output_dir=self.output_dir).validate()

    def test_check_params_negative02(self):
        true_err_msg = re.escape('`epsilon` is wrong! Expected a positive floating-point value, '
                                 'but -0.1 is not positive.')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(epsilon=-0.1, output_dir=self.output_dir).validate()

    def test_check_params_negative03(self):
        true_err_msg = re.escape('`seed` is wrong! Expected `{0}`, got `{1}`.'.format(type(3), type(True)))
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(seed=True, output_dir=self.output_dir).validate()

    def test_check_params_negative04(self):
        true_err_msg = re.escape('`datum` is wrong! Expected one of gaussian_bump, modulated_packet, two_mode, '
                                 'got `plateau`.')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(datum='plateau', output_dir=self.output_dir).validate()

    def test_validate_negative01(self):
        true_err_msg = re.escape('`dt` is wrong! Expected a positive floating-point value, but -0.1 is not positive.')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(dt=-0.1, output_dir=self.output_dir).validate()

    def test_validate_negative02(self):
        true_err_msg = re.escape('`alpha` is wrong! The experiment `energy_drift` needs alpha away from 0 and 1, '
                                 'got 1.0.')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(experiment='energy_drift', alpha=1.0, output_dir=self.output_dir).validate()

    def test_validate_negative03(self):
        true_err_msg = re.escape('`half_length` is wrong! The datum `modulated_packet` does not fit into the '
                                 'periodic domain')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(datum='modulated_packet', n_points=64, half_length=8.0,
                             output_dir=self.output_dir).validate()

    def test_validate_negative04(self):
        true_err_msg = re.escape('`xi1` is wrong! Expected a wavenumber of the grid, but 2.5 is not a multiple of '
                                 'pi / L below pi / dx.')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(datum='two_mode', xi1=2.5, n_points=64, half_length=np.pi,
                             output_dir=self.output_dir).validate()

    def test_validate_negative05(self):
        true_err_msg = re.escape('`epsilon` is wrong! Data are too large!')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(experiment='decay', epsilon=1.0, n_points=64, half_length=8.0,
                             output_dir=self.output_dir).validate()

    def test_validate_positive01(self):
        runner = ExperimentRunner(datum='two_mode', xi1=1.0, xi2=3.0, n_points=64, half_length=np.pi,
                                  output_dir=self.output_dir).validate()
        expected = 0.05 * (np.cos(runner.grid_.x) + np.cos(3.0 * runner.grid_.x))
        self.assertTrue(np.allclose(runner.datum_.values, expected, rtol=0.0, atol=1e-15))

    def test_not_fitted(self):
        with self.assertRaises(NotFittedError):
            _ = ExperimentRunner(output_dir=self.output_dir).passed

    def test_paraproduct(self):
        runner = ExperimentRunner(experiment='paraproduct', n_points=64, half_length=np.pi, seed=1,
                                  output_dir=self.output_dir)
        self.assertEqual(runner.run(), 0)
        with codecs.open(os.path.join(self.output_dir, 'summary.json'), mode='r', encoding='utf-8') as fp:
            summary = json.load(fp)
        self.assertEqual(summary['experiment'], 'paraproduct')
        self.assertTrue(summary['passed'])
        self.assertEqual([cur['name'] for cur in summary['criteria']],
                         ['paraproduct_identity', 'paraproduct_self_adjoint'])
        self.assertEqual(summary['artifacts'], ['paraproduct.csv'])
        self.assertEqual(summary['config']['n_points'], 64)

    def test_resonance(self):
        runner = ExperimentRunner(experiment='resonance', n_points=64, half_length=8.0, output_dir=self.output_dir)
        runner.fit()
        self.assertTrue(runner.passed)
        with codecs.open(os.path.join(self.output_dir, 'resonance.csv'), mode='r', encoding='utf-8') as fp:
            lines = list(filter(lambda it: len(it) > 0, fp.read().split('\n')))
        self.assertEqual(lines[0], 'alpha,xi1,xi2,im_kernel,im_closed,residual')
        self.assertEqual(len(lines), 1 + 4 * 20 * 20)

    def test_conservation(self):
        runner = ExperimentRunner(experiment='conservation', n_points=64, half_length=8.0, dt=0.02, t_final=0.2,
                                  output_dir=self.output_dir)
        runner.fit()
        self.assertTrue(runner.passed)
        phi, t = read_snapshot(os.path.join(self.output_dir, 'final_state.gsqgfield'))
        self.assertAlmostEqual(t, 0.2)
        self.assertEqual(phi.grid, runner.grid_)
        self.assertTrue(phi.is_finite())

    def test_determinism(self):
        contents = []
        for idx in range(2):
            output_dir = os.path.join(self.output_dir, str(idx))
            ExperimentRunner(experiment='conservation', n_points=64, half_length=8.0, dt=0.02, t_final=0.1,
                             output_dir=output_dir).fit()
            with codecs.open(os.path.join(output_dir, 'conservation.csv'), mode='r', encoding='utf-8') as fp:
                contents.append(fp.read())
        self.assertEqual(contents[0], contents[1])

    def test_conservation_euler_branch(self):
        runner = ExperimentRunner(experiment='conservation', alpha=0.0, n_points=64, half_length=8.0, dt=0.02,
                                  t_final=1.0, output_dir=self.output_dir)
        runner.fit()
        self.assertTrue(runner.passed)
        summary = runner.summary()
        self.assertEqual([cur['name'] for cur in summary['criteria']], ['mass_drift', 'mean_drift'])
        self.assertLess(summary['measurements']['nonlinear_mean'], 1e-12)
        with codecs.open(os.path.join(self.output_dir, 'conservation.csv'), mode='r', encoding='utf-8') as fp:
            lines = list(filter(lambda it: len(it) > 0, fp.read().split('\n')))
        self.assertEqual(lines[0], 't,mass,relative_drift,mean_drift')
        self.assertEqual(len(lines), 1 + 51)

    def test_validate_negative06(self):
        true_err_msg = re.escape('`half_length` is wrong! The linear evolution of the datum reaches the seam by '
                                 't = 50:')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(experiment='decay', alpha=1.5, n_points=64, half_length=8.0, t_final=50.0,
                             output_dir=self.output_dir).validate()

    def test_validate_negative07(self):
        true_err_msg = re.escape('`trajectory_dir` is wrong! Expected a nonempty string or null.')
        with self.assertRaisesRegex(ValueError, true_err_msg):
            ExperimentRunner(experiment='scattering', trajectory_dir='', output_dir=self.output_dir).validate()

    def test_energy_drift(self):
        runner = ExperimentRunner(experiment='energy_drift', alpha=0.5, n_points=64, half_length=8.0, dt=0.02,
                                  t_final=0.1, output_dir=self.output_dir)
        runner.fit()
        summary = runner.summary()
        self.assertEqual([cur['name'] for cur in summary['criteria']], ['normal_form_gain', 'energy_drift_bound'])
        for cur in summary['criteria']:
            self.assertIsNotNone(cur['value'])
        self.assertEqual(summary['artifacts'], ['normal_form_scan.csv', 'energy_drift.csv', 'final_state.gsqgfield'])
        self.assertGreater(summary['measurements']['B_sup'], 0.0)

    def test_scattering_negative01(self):
        missing = os.path.join(self.output_dir, 'missing')
        runner = ExperimentRunner(experiment='scattering', alpha=1.5, n_points=64, half_length=8.0, t_final=0.1,
                                  trajectory_dir=missing, output_dir=self.output_dir)
        true_err_msg = re.escape('Experiment `scattering` has failed! `trajectory_dir` is wrong! The directory '
                                 '`{0}` does not exist.'.format(missing))
        with self.assertRaisesRegex(RuntimeError, true_err_msg):
            runner.fit()

    def test_scattering_negative02(self):
        trajectory_dir = os.path.join(self.output_dir, 'trajectory')
        os.makedirs(trajectory_dir)
        other_grid = Grid(32, 8.0)
        phi = FourierField.from_function(other_grid, lambda x: 0.05 * np.exp(-x * x))
        Trajectory([FrontState(0.0, phi), FrontState(0.1, phi)]).export(trajectory_dir)
        runner = ExperimentRunner(experiment='scattering', alpha=1.5, n_points=64, half_length=8.0, t_final=0.1,
                                  trajectory_dir=trajectory_dir, output_dir=self.output_dir)
        true_err_msg = re.escape('`trajectory_dir` is wrong! The snapshot `state_00000.gsqgfield` lives on')
        with self.assertRaisesRegex(RuntimeError, true_err_msg):
            runner.fit()

    @unittest.skipUnless(SLOW_TESTS, 'set GSQG_SLOW_TESTS=1 to run the long experiments')
    def test_decay_and_scattering(self):
        decay_dir = os.path.join(self.output_dir, 'decay')
        config = dict(alpha=1.5, n_points=512, half_length=128.0, dt=0.1, t_final=6.0, datum='modulated_packet',
                      xi1=1.0)
        decay = ExperimentRunner(experiment='decay', output_dir=decay_dir, **config)
        decay.fit()
        criteria = {cur.name: cur for cur in decay.criteria_}
        self.assertEqual(sorted(criteria.keys()), ['diagnostics_violations', 'seam_mass_fraction',
                                                   'x_growth_exponent', 'y_decay_exponent'])
        self.assertTrue(criteria['seam_mass_fraction'].passed)
        self.assertEqual(criteria['diagnostics_violations'].value, 0.0)
        self.assertTrue(np.isfinite(criteria['y_decay_exponent'].value))
        self.assertLess(criteria['y_decay_exponent'].value, 0.0)
        trajectory_dir = os.path.join(decay_dir, 'trajectory')
        self.assertEqual(len(os.listdir(trajectory_dir)), 61)

        scattering = ExperimentRunner(experiment='scattering', output_dir=os.path.join(self.output_dir, 'scattering'),
                                      trajectory_dir=trajectory_dir, **config)
        scattering.fit()
        criteria = {cur.name: cur for cur in scattering.criteria_}
        self.assertTrue(criteria['seam_mass_fraction'].passed)
        self.assertTrue(criteria['synthetic_profile_recovery'].passed)
        self.assertIn('dominant_block', scattering.measurements_)
        phi, t = read_snapshot(os.path.join(self.output_dir, 'scattering', 'final_state.gsqgfield'))
        self.assertAlmostEqual(t, 6.0)
        self.assertEqual(phi.grid, decay.grid_)

    @unittest.skipUnless(SLOW_TESTS, 'set GSQG_SLOW_TESTS=1 to run the long experiments')
    def test_convergence_study(self):
        runner = ExperimentRunner(experiment='convergence_study', n_points=128, half_length=16.0, dt=0.05,
                                  t_final=1.0, output_dir=self.output_dir)
        self.assertEqual(runner.run(), 0)

    @unittest.skipUnless(SLOW_TESTS, 'set GSQG_SLOW_TESTS=1 to run the long experiments')
    def test_null_scaling(self):
        runner = ExperimentRunner(experiment='null_scaling', alpha=1.5, n_points=1024, half_length=16.0,
                                  output_dir=self.output_dir)
        self.assertEqual(runner.run(), 0)
        self.assertEqual([cur.name for cur in runner.criteria_][3:],
                         ['null_remainder_frequency_exponent', 'q_frequency_exponent'])


class TestMain(unittest.TestCase):
    def setUp(self):
        self.output_dir = tempfile.mkdtemp()
        self.config_name = os.path.join(self.output_dir, 'config.json')

    def tearDown(self):
        if os.path.isdir(self.output_dir):
            shutil.rmtree(self.output_dir)

    def write_config(self, config: dict):
        with codecs.open(self.config_name, mode='w', encoding='utf-8') as fp:
            json.dump(config, fp)

    def test_list_experiments(self):
        self.assertEqual(main(['list-experiments']), 0)

    def test_check_positive01(self):
        self.write_config({'experiment': 'paraproduct', 'n_points': 64, 'half_length': 3.0,
                           'output_dir': os.path.join(self.output_dir, 'out')})
        self.assertEqual(main(['check', self.config_name]), 0)
        self.assertFalse(os.path.isdir(os.path.join(self.output_dir, 'out')))

    def test_check_negative01(self):
        self.write_config({'experiment': 'conservation', 'dt': 'fast'})
        self.assertEqual(main(['check', self.config_name]), 2)

    def test_check_negative02(self):
        self.write_config({'experiment': 'conservation', 'time_step': 0.01})
        self.assertEqual(main(['check', self.config_name]), 2)

    def test_check_negative03(self):
        self.assertEqual(main(['check', os.path.join(self.output_dir, 'missing.json')]), 2)

    def test_run_positive01(self):
        output_dir = os.path.join(self.output_dir, 'out')
        self.write_config({'experiment': 'paraproduct', 'n_points': 64, 'half_length': np.pi, 'seed': 3,
                           'output_dir': output_dir})
        self.assertEqual(main(['run', self.config_name]), 0)
        self.assertTrue(os.path.isfile(os.path.join(output_dir, 'summary.json')))
        self.assertTrue(os.path.isfile(os.path.join(output_dir, 'paraproduct.csv')))

    def test_run_negative01(self):
        self.write_config({'experiment': 'scattering', 'alpha': 0.0, 'output_dir': self.output_dir})
        self.assertEqual(main(['run', self.config_name]), 2)


if __name__ == '__main__':
    unittest.main(verbosity=2)
