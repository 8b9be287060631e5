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
import os
import re
import sys
import tempfile
import unittest

import numpy as np

try:
    from gsqg_front_lab.diagnostics import mass, hs_norm, control_norms, vector_field_L, linear_propagate, norm_X
    from gsqg_front_lab.diagnostics import norm_Y, norm_Y_two_term, frequency_envelope, decay_fit, amplitude_scan
    from gsqg_front_lab.diagnostics import record_diagnostics, seam_mass_fraction, DiagnosticsRecord, DiagnosticsWriter
    from gsqg_front_lab.evolution import FrontState
    from gsqg_front_lab.spectral_core import Grid, FourierField, ParaproductSpec, dyadic_blocks, littlewood_paley
    from gsqg_front_lab.symbols import AlphaModel
    from gsqg_front_lab.exceptions import InsufficientSeries
except:
    sys.path.append(os.path.join(os.path.dirname(__file__), '..'))
    from gsqg_front_lab.diagnostics import mass, hs_norm, control_norms, vector_field_L, linear_propagate, norm_X
    from gsqg_front_lab.diagnostics import norm_Y, norm_Y_two_term, frequency_envelope, decay_fit, amplitude_scan
    from gsqg_front_lab.diagnostics import record_diagnostics, seam_mass_fraction, DiagnosticsRecord, DiagnosticsWriter
    from gsqg_front_lab.evolution import FrontState
    from gsqg_front_lab.spectral_core import Grid, FourierField, ParaproductSpec, dyadic_blocks, littlewood_paley
    from gsqg_front_lab.symbols import AlphaModel
    from gsqg_front_lab.exceptions import InsufficientSeries


class TestNorms(unittest.TestCase):
    def setUp(self):
        self.grid = Grid(64, np.pi)

    def test_mass(self):
        phi = FourierField.from_function(self.grid, lambda x: np.cos(2.0 * x))
        self.assertAlmostEqual(mass(phi), np.pi, places=12)
        self.assertAlmostEqual(hs_norm(phi, 1.5), 2.0 ** 1.5 * np.sqrt(np.pi), places=11)

    def test_control_norms_positive01(self):
        A, B = control_norms(FourierField.zeros(self.grid), AlphaModel(0.5))
        self.assertEqual(A, 0.0)
        self.assertEqual(B, 0.0)

    def test_control_norms_positive02(self):
        phi = FourierField.from_function(self.grid, lambda x: 0.05 * np.sin(x))
        for alpha in (0.5, 1.5):
            A, B = control_norms(phi, AlphaModel(alpha))
            self.assertAlmostEqual(A, 0.05, places=14)
            self.assertAlmostEqual(B, 0.05, places=14)

    def test_control_norms_positive03(self):
        model = AlphaModel(1.5)
        first = FourierField.from_function(self.grid, lambda x: 0.05 * np.sin(x))
        second = FourierField.from_function(self.grid, lambda x: 0.01 * np.sin(8.0 * x) / 8.0)
        _, B_first = control_norms(first, model)
        _, B_second = control_norms(second, model)
        _, B_total = control_norms(first + second, model)
        self.assertAlmostEqual(B_second, 0.01 * 8.0 ** 0.75, places=13)
        self.assertAlmostEqual(B_total ** 2, B_first ** 2 + B_second ** 2, places=13)

    def test_norm_Y_positive01(self):
        model = AlphaModel(0.5)
        zero = FourierField.zeros(self.grid)
        self.assertEqual(norm_Y(zero, model), 0.0)
        self.assertEqual(norm_X(zero, 1.0, model), 0.0)

    def test_norm_Y_positive02(self):
        eps = 0.05
        delta = 0.05
        phi = FourierField.from_function(self.grid, lambda x: eps * np.cos(2.0 * x))
        for alpha in (0.5, 1.5):
            model = AlphaModel(alpha)
            expected = eps * 2.0 ** (1.0 - delta) * np.sqrt(5.0) ** (0.5 * alpha + 2.0 * delta)
            self.assertAlmostEqual(norm_Y(phi, model, delta), expected, places=13)
            expected = eps * (2.0 ** (1.0 - delta) + 2.0 * 2.0 ** (0.5 * alpha + delta))
            self.assertAlmostEqual(norm_Y_two_term(phi, model, delta), expected, places=13)

    def test_norm_X_positive01(self):
        model = AlphaModel(1.5)
        phi = FourierField.from_function(self.grid, lambda x: np.cos(3.0 * x))
        expected = hs_norm(phi, 0.5) + hs_norm(phi, 4.0) + vector_field_L(FourierField.from_function(
            self.grid, lambda x: -3.0 * np.sin(3.0 * x)), 2.0, model).norm()
        self.assertAlmostEqual(norm_X(phi, 2.0, model), expected, places=9)


class TestVectorField(unittest.TestCase):
    def test_vector_field_L_positive01(self):
        grid = Grid(64, np.pi)
        phi = FourierField.from_function(grid, lambda x: np.exp(np.cos(x)))
        for alpha in (0.0, 0.5, 1.0, 1.5):
            result = vector_field_L(phi, 0.0, AlphaModel(alpha))
            self.assertTrue(np.allclose(result.values, grid.x * phi.values, rtol=0.0, atol=1e-15))

    def test_vector_field_L_positive02(self):
        grid = Grid(64, np.pi)
        model = AlphaModel(1.5)
        phi = FourierField.from_function(grid, lambda x: np.cos(3.0 * x))
        dispersive = vector_field_L(phi, 1.0, model) - FourierField(grid, grid.x * phi.values)
        expected = model.c_alpha * 1.5 * 3.0 ** 0.5 * np.cos(3.0 * grid.x)
        self.assertTrue(np.allclose(dispersive.values, expected, rtol=0.0, atol=1e-12))

    def test_vector_field_L_positive03(self):
        grid = Grid(256, 16.0)
        model = AlphaModel(1.5)
        phi = FourierField.from_function(grid, lambda x: np.exp(-x * x))
        t = 0.2
        left = vector_field_L(linear_propagate(phi, t, model), t, model)
        right = linear_propagate(vector_field_L(phi, 0.0, model), t, model)
        self.assertLess((left - right).norm(), 1e-8 * right.norm())


class TestEnvelope(unittest.TestCase):
    def setUp(self):
        self.grid = Grid(64, np.pi)

    def test_frequency_envelope_positive01(self):
        phi = FourierField.from_function(self.grid, lambda x: np.cos(4.0 * x))
        envelope = frequency_envelope(phi, 0.5, 3.0, delta=0.1)
        peak = envelope[4.0]
        self.assertAlmostEqual(peak, 2.0 * np.sqrt(np.pi) + 64.0 * np.sqrt(np.pi), places=10)
        for lam, value in envelope.items():
            self.assertAlmostEqual(value, peak * 2.0 ** (-0.1 * abs(np.log2(lam / 4.0))), places=10)

    def test_frequency_envelope_positive02(self):
        generator = np.random.RandomState(0)
        phi = FourierField(self.grid, generator.normal(size=64))
        delta = 0.05
        envelope = frequency_envelope(phi, 0.5, 2.0, delta)
        blocks = dyadic_blocks(self.grid)
        self.assertEqual(sorted(envelope.keys()), blocks)
        for lam in blocks:
            piece = littlewood_paley(phi, lam)
            self.assertGreaterEqual(envelope[lam] * (1.0 + 1e-12), hs_norm(piece, 0.5) + hs_norm(piece, 2.0))
        for lam in blocks[:-1]:
            ratio = envelope[lam] / envelope[2.0 * lam]
            self.assertGreaterEqual(ratio, 2.0 ** (-delta) * (1.0 - 1e-12))
            self.assertLessEqual(ratio, 2.0 ** delta * (1.0 + 1e-12))


class TestFits(unittest.TestCase):
    def test_decay_fit_positive01(self):
        times = np.linspace(1.0, 50.0, 40)
        exponent, residual = decay_fit(list(zip(times, times ** -0.5)))
        self.assertAlmostEqual(exponent, -0.5, delta=1e-12)
        self.assertLess(residual, 1e-12)

    def test_decay_fit_positive02(self):
        generator = np.random.RandomState(0)
        times = np.linspace(1.0, 50.0, 40)
        values = times ** -0.5 * (1.0 + 0.01 * generator.normal(size=40))
        exponent, _ = decay_fit(list(zip(times, values)))
        self.assertAlmostEqual(exponent, -0.5, delta=0.02)

    def test_decay_fit_positive03(self):
        times = np.linspace(1.0, 50.0, 40)
        exponent, _ = decay_fit(list(zip(times, np.full(40, 0.3))))
        self.assertAlmostEqual(exponent, 0.0, delta=1e-12)

    def test_decay_fit_positive04(self):
        times = np.linspace(1.0, 50.0, 50)
        values = np.where(times < 10.0, 1.0, times ** -0.5)
        exponent, _ = decay_fit(list(zip(times, values)), window=(10.0, 50.0))
        self.assertAlmostEqual(exponent, -0.5, delta=1e-12)

    def test_decay_fit_negative01(self):
        true_err_msg = re.escape('The series is too short! Expected at least 4 samples, got 3.')
        with self.assertRaisesRegex(InsufficientSeries, true_err_msg):
            decay_fit([(1.0, 1.0), (2.0, 0.7), (3.0, 0.6)])

    def test_amplitude_scan(self):
        amplitudes = [1e-2, 5e-3, 2.5e-3]
        self.assertAlmostEqual(amplitude_scan(amplitudes, [3.0 * cur ** 2 for cur in amplitudes]), 2.0, places=10)


class TestDiagnosticsWriter(unittest.TestCase):
    def setUp(self):
        fp = tempfile.NamedTemporaryFile(mode='w', suffix='.csv', delete=False)
        self.file_name = fp.name
        fp.close()

    def tearDown(self):
        if os.path.isfile(self.file_name):
            os.remove(self.file_name)

    def test_record_diagnostics(self):
        grid = Grid(64, np.pi)
        model = AlphaModel(0.5)
        phi = FourierField.from_function(grid, lambda x: 0.05 * np.sin(x) + 0.02 * np.cos(3.0 * x))
        record = record_diagnostics(phi, 1.0, model, ParaproductSpec(), hs_orders=(1.0, 2.0))
        self.assertAlmostEqual(record.A, control_norms(phi, model)[0])
        self.assertAlmostEqual(record.mass, mass(phi))
        self.assertEqual(sorted(record.hs_norms.keys()), [1.0, 2.0])
        row = record.as_row()
        for value in row.values():
            self.assertTrue(np.isfinite(value))
            self.assertGreaterEqual(value, 0.0)

    def test_record_violations(self):
        grid = Grid(64, np.pi)
        phi = FourierField.from_function(grid, lambda x: 0.05 * np.sin(x))
        record = record_diagnostics(phi, 1.0, AlphaModel(0.5), ParaproductSpec())
        self.assertEqual(record.violations, [])
        broken = DiagnosticsRecord(t=1.0, A=0.1, B=np.nan, mass=1.0, hs_norms={2.0: -1.0}, X=1.0, Y=np.inf, E=1.0,
                                   E_s=1.0, envelope={1.0: 0.5}, seam=0.0)
        self.assertEqual(sorted(broken.violations), ['B', 'Y', 'hs:2'])

    def test_writer(self):
        grid = Grid(64, np.pi)
        model = AlphaModel(1.5)
        blocks = dyadic_blocks(grid)
        phi = FourierField.from_function(grid, lambda x: 0.05 * np.sin(x))
        with DiagnosticsWriter(self.file_name, model, ParaproductSpec(), blocks, hs_orders=(1.0,), tdump=0.5) as writer:
            for t in (0.0, 0.1, 0.6):
                writer(FrontState(t, phi))
            self.assertEqual(len(writer.records), 2)
        with codecs.open(self.file_name, mode='r', encoding='utf-8') as fp:
            lines = list(filter(lambda it: len(it) > 0, fp.read().split('\n')))
        expected_header = 't,A,B,mass,hs:1,X,Y,E,E_s,seam,' + ','.join('env:{0:g}'.format(cur) for cur in blocks)
        self.assertEqual(lines[0], expected_header)
        self.assertEqual(len(lines), 3)
        self.assertEqual(lines[2].split(',')[0], '0.59999999999999998')


class TestSeam(unittest.TestCase):
    def setUp(self):
        self.grid = Grid(256, 20.0)

    def test_seam_mass_fraction_positive01(self):
        centered = FourierField.from_function(self.grid, lambda x: np.exp(-x * x))
        self.assertLess(seam_mass_fraction(centered), 1e-100)
        self.assertEqual(seam_mass_fraction(FourierField.zeros(self.grid)), 0.0)

    def test_seam_mass_fraction_positive02(self):
        at_seam = FourierField.from_function(self.grid, lambda x: np.exp(-(np.abs(x) - 20.0) ** 2))
        self.assertGreater(seam_mass_fraction(at_seam), 0.99)
        uniform = FourierField(self.grid, np.ones(256))
        self.assertAlmostEqual(seam_mass_fraction(uniform), 0.1, delta=2.0 / 256)

    def test_seam_mass_fraction_positive03(self):
        grid = Grid(512, 64.0)
        model = AlphaModel(1.5)
        packet = FourierField.from_function(grid, lambda x: np.exp(-x * x / 8.0) * np.cos(2.0 * x))
        self.assertLess(seam_mass_fraction(linear_propagate(packet, 1.0, model)), 1e-12)
        self.assertGreater(seam_mass_fraction(linear_propagate(packet, 20.0, model)), 1e-3)


if __name__ == '__main__':
    unittest.main(verbosity=2)
