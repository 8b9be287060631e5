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

"""Experiment runner and the `gsqg` command.

    gsqg run <config.json>          run the configured experiment, exit code 0 if every criterion passes, 1 if not
    gsqg check <config.json>        validate the configuration only
    gsqg list-experiments           print the experiment names

Configuration errors give the exit code 2.
"""

from argparse import ArgumentParser
import codecs
import json
import logging
import os
import sys
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from gsqg_front_lab.diagnostics import DiagnosticsWriter, amplitude_scan, control_norms, decay_fit, linear_propagate
from gsqg_front_lab.diagnostics import SEAM_FRACTION, mass, seam_mass_fraction
from gsqg_front_lab.evolution import Flow, FrontState, StepperConfig, Trajectory, evolve, nonlinear_mean
from gsqg_front_lab.exceptions import DataTooLarge, NotInScatteringRegime, PacketDoesNotFit
from gsqg_front_lab.nonlinearity import Q_apply, null_remainder
from gsqg_front_lab.normalform import COERCIVITY_THRESHOLD, build_normalform, linearized_correction, modified_energy
from gsqg_front_lab.quadrature import QuadratureSpec, SymbolQuadrature
from gsqg_front_lab.spectral_core import FourierField, Grid, ParaproductSpec, balanced_remainder, dealiased_product
from gsqg_front_lab.spectral_core import derivative, dyadic_blocks, littlewood_paley, paraproduct
from gsqg_front_lab.symbols import AlphaModel, phase_rate, resonance_closed, resonance_kernel
from gsqg_front_lab.utils import read_config, read_snapshot, write_snapshot, write_table
from gsqg_front_lab.wavepacket import MIN_SERIES_LENGTH, ScatteringWriter, VelocityPartition, profile_gamma
from gsqg_front_lab.wavepacket import extract_scattering_profile, is_valid, ode_residual_series, phase_law_slope
from gsqg_front_lab.wavepacket import plateau_slope, profile_regularity_proxy


logger = logging.getLogger(__name__)

EXPERIMENTS = {
    'resonance': 'Kernel quadrature of the resonance symbol against its closed form.',
    'conservation': 'Mass and mean of the front along the full flow.',
    'null_scaling': 'Amplitude and frequency scans of Q, of its cubic part and of the null-form remainder.',
    'energy_drift': 'Normal form gain along the linearized flow and modified energy drift along the '
                    'paradifferential flow.',
    'decay': 'Dispersive decay of the Y norm and growth of the X norm along the full flow.',
    'scattering': 'Asymptotic profile of the dominant block, its modulus plateau and logarithmic phase law.',
    'convergence_study': 'Self-convergence order of the stepper and exactness of the linear propagation.',
    'paraproduct': 'Paraproduct decomposition identity and self-adjointness on random band-limited triples.',
}
DATUMS = ('gaussian_bump', 'modulated_packet', 'two_mode')
GENERIC_ONLY = ('energy_drift', 'scattering')
DATUM_FREE = ('resonance', 'paraproduct')
NORMAL_FORM_EXPERIMENTS = ('energy_drift', 'decay', 'scattering')
SEAM_MONITORED = ('decay', 'scattering')
CONFIG_KEYS = ('alpha', 'n_points', 'half_length', 'dt', 't_final', 'epsilon', 'datum', 'xi1', 'xi2', 'experiment',
               'seed', 'output_dir', 'verbose', 'M', 'sharp_blocks', 'quad_ratio', 'trajectory_dir')
RESONANCE_ALPHAS = (0.25, 0.5, 1.5, 1.75)
RESONANCE_SIDE = 20
NORMAL_FORM_STEP = 1e-3
N_PARAPRODUCT_TRIALS = 100
SEAM_TOLERANCE = 1e-12
SEAM_MASS_TOLERANCE = 1e-3
N_TRAJECTORY_FRAMES = 128
N_SCAN_FREQUENCIES = 4
MEAN_DRIFT_TOLERANCE = 1e-10


class Criterion(object):
    """ Measured value of one acceptance criterion and its bound: `<` value below tolerance, `>=` value not below
    tolerance, `in` value inside the closed interval tolerance. """

    def __init__(self, name: str, value: float, tolerance: Union[float, Tuple[float, float]], comparison: str):
        self.name = name
        self.value = float(value)
        self.tolerance = tolerance
        self.comparison = comparison

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.comparison == '<':
            return self.value < self.tolerance
        if self.comparison == '>=':
            return self.value >= self.tolerance
        return self.tolerance[0] <= self.value <= self.tolerance[1]

    def as_dict(self) -> dict:
        tolerance = list(self.tolerance) if isinstance(self.tolerance, tuple) else self.tolerance
        return {'name': self.name, 'value': self.value if np.isfinite(self.value) else None,
                'comparison': self.comparison, 'tolerance': tolerance, 'passed': self.passed}


class ExperimentRunner(BaseEstimator):
    """ One configured experiment: the parameters mirror the keys of the JSON configuration. """

    def __init__(self, experiment: str = 'conservation', alpha: float = 0.5, n_points: int = 1024,
                 half_length: float = 32.0 * np.pi, dt: float = 0.01, t_final: float = 1.0, epsilon: float = 0.05,
                 datum: str = 'gaussian_bump', xi1: float = 2.0, xi2: float = 3.0, seed: int = 0,
                 output_dir: str = 'gsqg_output', verbose: bool = False, M: float = 1.0, sharp_blocks: bool = False,
                 quad_ratio: float = 1.05, trajectory_dir: Union[str, None] = None):
        self.experiment = experiment
        self.alpha = alpha
        self.n_points = n_points
        self.half_length = half_length
        self.dt = dt
        self.t_final = t_final
        self.epsilon = epsilon
        self.datum = datum
        self.xi1 = xi1
        self.xi2 = xi2
        self.seed = seed
        self.output_dir = output_dir
        self.verbose = verbose
        self.M = M
        self.sharp_blocks = sharp_blocks
        self.quad_ratio = quad_ratio
        self.trajectory_dir = trajectory_dir

    @classmethod
    def from_config(cls, file_name: str) -> 'ExperimentRunner':
        return cls(**read_config(file_name, CONFIG_KEYS))

    def validate(self):
        """ Check the configuration and build the objects it describes. Raises ValueError naming the wrong field. """
        self.check_params(**self.get_params())
        self.grid_ = Grid(self.n_points, float(self.half_length))
        self.model_ = AlphaModel(self.alpha)
        if (self.experiment in GENERIC_ONLY) and (not self.model_.is_generic):
            raise ValueError('`alpha` is wrong! The experiment `{0}` needs alpha away from 0 and 1, '
                             'got {1}.'.format(self.experiment, self.alpha))
        self.stepper_ = StepperConfig(dt=self.dt)
        self.spec_ = ParaproductSpec(M=self.M, sharp=self.sharp_blocks)
        self.quad_ = QuadratureSpec.for_grid(self.grid_, ratio=self.quad_ratio)
        self.datum_ = None if self.experiment in DATUM_FREE else self.make_datum(self.grid_)
        if self.experiment in NORMAL_FORM_EXPERIMENTS:
            slope_norm = derivative(self.datum_).max_abs()
            if slope_norm >= COERCIVITY_THRESHOLD:
                raise ValueError('`epsilon` is wrong! {0}'.format(DataTooLarge(slope_norm, COERCIVITY_THRESHOLD)))
        if self.experiment in SEAM_MONITORED:
            seam = seam_mass_fraction(linear_propagate(self.datum_, float(self.t_final), self.model_))
            if seam >= SEAM_MASS_TOLERANCE:
                raise ValueError('`half_length` is wrong! The linear evolution of the datum reaches the seam by '
                                 't = {0:g}: {1:.3g} of its mass lies in |x| > {2:g} L.'.format(
                                     self.t_final, seam, SEAM_FRACTION))
        return self

    def make_datum(self, grid: Grid) -> FourierField:
        """ Initial front of amplitude epsilon. Localized data must vanish at the seam x = +-L. """
        if self.datum == 'two_mode':
            for name, xi in (('xi1', self.xi1), ('xi2', self.xi2)):
                mode = xi * grid.half_length / np.pi
                if (abs(mode - round(mode)) > 1e-9) or (abs(xi) >= grid.xi_max):
                    raise ValueError('`{0}` is wrong! Expected a wavenumber of the grid, '
                                     'but {1} is not a multiple of pi / L below pi / dx.'.format(name, xi))
            return FourierField.from_function(
                grid, lambda x: self.epsilon * (np.cos(self.xi1 * x) + np.cos(self.xi2 * x)))
        if self.datum == 'gaussian_bump':
            def shape(x: np.ndarray) -> np.ndarray:
                return np.exp(-x * x)
        else:
            def shape(x: np.ndarray) -> np.ndarray:
                return np.exp(-x * x / 8.0) * np.cos(self.xi1 * x)
        seam_value = float(abs(shape(np.array([-grid.half_length]))[0]))
        if seam_value > SEAM_TOLERANCE:
            raise ValueError('`half_length` is wrong! The datum `{0}` does not fit into the periodic domain: '
                             'its relative value at the seam is {1:.3g}.'.format(self.datum, seam_value))
        return FourierField.from_function(grid, lambda x: self.epsilon * shape(x))

    def fit(self, X=None, y=None):
        self.validate()
        os.makedirs(self.output_dir, exist_ok=True)
        self.criteria_ = []
        self.measurements_ = dict()
        self.artifacts_ = []
        experiment = getattr(self, '_run_' + self.experiment)
        logger.info('Experiment `{0}` is started: {1!r}.'.format(self.experiment, self.model_))
        try:
            experiment()
        except (ValueError, RuntimeError, ArithmeticError) as err:
            raise RuntimeError('Experiment `{0}` has failed! {1}'.format(self.experiment, err)) from err
        self.summary_file_ = os.path.join(self.output_dir, 'summary.json')
        with codecs.open(self.summary_file_, mode='w', encoding='utf-8') as fp:
            json.dump(self.summary(), fp, indent=4, sort_keys=True)
        for cur in self.criteria_:
            logger.info('{0}: {1:.6g} ({2}).'.format(cur.name, cur.value, 'passed' if cur.passed else 'FAILED'))
        return self

    def run(self) -> int:
        self.fit()
        return 0 if self.passed else 1

    @property
    def passed(self) -> bool:
        check_is_fitted(self, ['criteria_'])
        return all(cur.passed for cur in self.criteria_)

    def summary(self) -> dict:
        check_is_fitted(self, ['criteria_', 'measurements_', 'artifacts_'])
        return {'experiment': self.experiment, 'config': self.get_params(),
                'criteria': [cur.as_dict() for cur in self.criteria_], 'measurements': self.measurements_,
                'artifacts': [os.path.basename(cur) for cur in self.artifacts_],
                'passed': all(cur.passed for cur in self.criteria_)}

    def _table(self, base_name: str, header: List[str], rows: Sequence[Sequence[float]]):
        file_name = os.path.join(self.output_dir, base_name)
        write_table(file_name, header, rows)
        self.artifacts_.append(file_name)

    def _final_snapshot(self, state: FrontState):
        file_name = os.path.join(self.output_dir, 'final_state.gsqgfield')
        write_snapshot(file_name, state.phi, state.t)
        self.artifacts_.append(file_name)

    def _evolve(self, state: FrontState, t_final: float, flow: Flow = Flow.FULL, dt: Union[float, None] = None,
                backward: bool = False, record_every: int = 1,
                callback: Union[Callable[[FrontState], None], None] = None):
        config = self.stepper_ if dt is None else StepperConfig(dt=dt)
        return evolve(state, t_final, config, self.model_, self.quad_, flow, self.spec_, backward=backward,
                      record_every=record_every, callback=callback)

    def _run_resonance(self):
        side = np.linspace(-8.0, 8.0, RESONANCE_SIDE)
        quad = SymbolQuadrature()
        rows = []
        for alpha in RESONANCE_ALPHAS:
            model = AlphaModel(alpha)
            for xi1 in side:
                for xi2 in side:
                    kernel = resonance_kernel(xi1, xi2, model, quad)
                    closed = complex(resonance_closed(xi1, xi2, model))
                    rows.append([alpha, xi1, xi2, kernel.imag, closed.imag, alpha * abs(kernel - closed)])
            logger.info('Resonance identity for alpha = {0} is checked.'.format(alpha))
        self._table('resonance.csv', ['alpha', 'xi1', 'xi2', 'im_kernel', 'im_closed', 'residual'], rows)
        self.criteria_.append(Criterion('resonance_identity', max(cur[-1] for cur in rows), 1e-6, '<'))

    def _run_conservation(self):
        series = []

        def record(state: FrontState):
            series.append((state.t, mass(state.phi), state.phi.mean()))

        trajectory = self._evolve(FrontState(0.0, self.datum_), self.t_final, callback=record)
        initial, initial_mean = series[0][1], series[0][2]
        scale = abs(initial) if abs(initial) > 0.0 else 1.0
        rows = [[t, value, abs(value - initial) / scale, abs(mean - initial_mean)] for t, value, mean in series]
        self._table('conservation.csv', ['t', 'mass', 'relative_drift', 'mean_drift'], rows)
        self._final_snapshot(trajectory.final)
        self.measurements_['nonlinear_mean'] = max(nonlinear_mean(cur.phi, self.model_, self.quad_)
                                                   for cur in (trajectory.states[0], trajectory.final))
        self.criteria_.append(Criterion('mass_drift', max(cur[2] for cur in rows), 1e-6, '<'))
        self.criteria_.append(Criterion('mean_drift', max(cur[3] for cur in rows), MEAN_DRIFT_TOLERANCE, '<'))

    def _frequency_scan(self, phi: FourierField) -> List[List[float]]:
        """ ||d/dx Q(phi, v_k)|| and ||d/dx R v_k|| for unit cosines v_k at xi_max / 2, xi_max / 4, ... """
        grid = self.grid_
        rows = []
        for idx in range(N_SCAN_FREQUENCIES):
            mode = grid.n_points // 2 ** (idx + 2)
            if mode < 1:
                raise ValueError('`n_points` is wrong! The frequency scan needs at least {0} grid points.'.format(
                    2 ** (N_SCAN_FREQUENCIES + 1)))
            xi = np.pi * mode / grid.half_length
            v = FourierField.from_function(grid, lambda x: np.cos(xi * x))
            v = v / v.norm()
            rows.append([xi, derivative(Q_apply(phi, v, self.model_, self.quad_)).norm(),
                         derivative(null_remainder(phi, v, self.model_, self.quad_)).norm()])
        return rows[::-1]

    def _run_null_scaling(self):
        shape = self.datum_ / self.epsilon
        v = shape / shape.norm()
        amplitudes = [self.epsilon, 0.5 * self.epsilon, 0.25 * self.epsilon]
        rows = []
        for kappa in amplitudes:
            phi = shape * kappa
            rows.append([
                kappa,
                derivative(Q_apply(phi, v, self.model_, self.quad_)).norm(),
                derivative(null_remainder(phi, v, self.model_, self.quad_)).norm(),
                Q_apply(phi, derivative(phi), self.model_, self.quad_).norm()
            ])
        self._table('null_scaling.csv', ['kappa', 'q_norm', 'remainder_norm', 'cubic_norm'], rows)
        for column, name, target, tolerance in ((1, 'q_exponent', 2.0, 0.2), (2, 'null_remainder_exponent', 2.0, 0.2),
                                                (3, 'cubic_exponent', 3.0, 0.1)):
            exponent = amplitude_scan(amplitudes, [cur[column] for cur in rows])
            self.criteria_.append(Criterion(name, exponent, (target - tolerance, target + tolerance), 'in'))

        scan = self._frequency_scan(self.datum_)
        self._table('null_frequency_scan.csv', ['xi', 'q_norm', 'remainder_norm'], scan)
        frequencies = [cur[0] for cur in scan]
        q_order = amplitude_scan(frequencies, [cur[1] for cur in scan])
        remainder_order = amplitude_scan(frequencies, [cur[2] for cur in scan])
        self.measurements_['q_frequency_exponent'] = q_order
        self.criteria_.append(Criterion('null_remainder_frequency_exponent', remainder_order, 1.2, '<'))
        if self.model_.alpha > 1.0:
            self.criteria_.append(Criterion('q_frequency_exponent', q_order,
                                            (self.model_.alpha - 0.25, self.model_.alpha + 0.25), 'in'))

    def _corrected_energy(self, state: FrontState) -> float:
        nf = build_normalform(state.phi, self.model_)
        return modified_energy(linearized_correction(state.v, nf, self.model_, self.spec_), nf, self.spec_)

    def _run_energy_drift(self):
        shape = self.datum_ / self.epsilon
        v0 = shape / shape.norm()
        amplitudes = [self.epsilon, 0.5 * self.epsilon, 0.25 * self.epsilon]
        h = NORMAL_FORM_STEP
        rows = []
        for kappa in amplitudes:
            initial = FrontState(0.0, shape * kappa, v0)
            forward = self._evolve(initial, h, Flow.LINEARIZED, dt=h).final
            backward = self._evolve(initial, -h, Flow.LINEARIZED, dt=h, backward=True).final
            d_energy = abs(self._corrected_energy(forward) - self._corrected_energy(backward)) / (2.0 * h)
            d_norm = abs(forward.v.inner(forward.v) - backward.v.inner(backward.v)) / (2.0 * h)
            rows.append([kappa, d_energy, d_norm])
        self._table('normal_form_scan.csv', ['kappa', 'd_modified_energy', 'd_norm_squared'], rows)
        gain = amplitude_scan(amplitudes, [cur[1] for cur in rows]) - \
            amplitude_scan(amplitudes, [cur[2] for cur in rows])
        self.criteria_.append(Criterion('normal_form_gain', gain, 0.8, '>='))

        series = []

        def record(state: FrontState):
            nf = build_normalform(state.phi, self.model_)
            series.append([state.t, modified_energy(state.v, nf, self.spec_), state.v.inner(state.v),
                           control_norms(state.phi, self.model_, self.sharp_blocks)[1]])

        trajectory = self._evolve(FrontState(0.0, self.datum_, v0), self.t_final, Flow.PARADIFFERENTIAL,
                                  callback=record)
        self._table('energy_drift.csv', ['t', 'modified_energy', 'norm_squared', 'B'], series)
        self._final_snapshot(trajectory.final)
        B_sup = max(cur[3] for cur in series)
        norm_sup = max(cur[2] for cur in series)
        ratios = [abs(cur[1] - series[0][1]) / (B_sup ** 2 * norm_sup * cur[0]) for cur in series[1:]]
        self.measurements_['B_sup'] = B_sup
        self.criteria_.append(Criterion('energy_drift_bound', max(ratios) if ratios else 0.0, 10.0, '<'))

    def _recording_stride(self) -> int:
        n_steps = int(np.ceil(self.t_final / self.dt - 1e-9))
        return max(1, n_steps // N_TRAJECTORY_FRAMES)

    def _seam_criterion(self, fractions: Sequence[float]):
        seam = max(fractions)
        self.measurements_['max_seam_mass_fraction'] = seam
        self.criteria_.append(Criterion('seam_mass_fraction', seam, SEAM_MASS_TOLERANCE, '<'))

    def _run_decay(self):
        file_name = os.path.join(self.output_dir, 'diagnostics.csv')
        with DiagnosticsWriter(file_name, self.model_, self.spec_, dyadic_blocks(self.grid_),
                               tdump=self.t_final / 200.0) as writer:
            trajectory = self._evolve(FrontState(0.0, self.datum_), self.t_final,
                                      record_every=self._recording_stride(), callback=writer)
            records = list(writer.records)
        self.artifacts_.append(file_name)
        self._final_snapshot(trajectory.final)
        trajectory_dir = os.path.join(self.output_dir, 'trajectory')
        os.makedirs(trajectory_dir, exist_ok=True)
        trajectory.export(trajectory_dir)
        self.artifacts_.append(trajectory_dir)
        self._seam_criterion([cur.seam for cur in records])
        self.criteria_.append(Criterion('diagnostics_violations', sum(len(cur.violations) for cur in records),
                                        1.0, '<'))
        window = (4.0, self.t_final)
        y_exponent, _ = decay_fit([(cur.t, cur.Y) for cur in records], window)
        x_exponent, _ = decay_fit([(cur.t, cur.X) for cur in records], window)
        self.criteria_.append(Criterion('y_decay_exponent', y_exponent, (-0.6, -0.4), 'in'))
        self.criteria_.append(Criterion('x_growth_exponent', x_exponent, 0.05, '<'))

    def _load_trajectory(self) -> Trajectory:
        """ Snapshots of an earlier decay run with the same grid and final time. """
        if not os.path.isdir(self.trajectory_dir):
            raise ValueError('`trajectory_dir` is wrong! The directory `{0}` does not exist.'.format(
                self.trajectory_dir))
        names = sorted(cur for cur in os.listdir(self.trajectory_dir) if cur.endswith('.gsqgfield'))
        if len(names) == 0:
            raise ValueError('`trajectory_dir` is wrong! The directory `{0}` has no snapshots.'.format(
                self.trajectory_dir))
        states = []
        for name in names:
            phi, t = read_snapshot(os.path.join(self.trajectory_dir, name))
            if phi.grid != self.grid_:
                raise ValueError('`trajectory_dir` is wrong! The snapshot `{0}` lives on {1!r}, '
                                 'expected {2!r}.'.format(name, phi.grid, self.grid_))
            states.append(FrontState(t, phi))
        if abs(states[-1].t - self.t_final) > 1e-9 * max(1.0, self.t_final):
            raise ValueError('`trajectory_dir` is wrong! The trajectory ends at t = {0:g}, expected {1:g}.'.format(
                states[-1].t, self.t_final))
        logger.info('{0} snapshots are loaded from `{1}`.'.format(len(states), self.trajectory_dir))
        return Trajectory(states)

    def _gamma_series(self, states: List[FrontState], lam: float, v: float) -> List[Tuple[float, complex]]:
        series = []
        for state in states:
            if not is_valid(state.t, lam, self.model_):
                continue
            try:
                gamma, _ = profile_gamma(state.phi, lam, v, state.t, self.model_, self.sharp_blocks)
            except PacketDoesNotFit:
                logger.warning('The packet of v = {0:.6g} leaves the domain at t = {1:.6g}.'.format(v, state.t))
                break
            series.append((state.t, gamma))
        return series

    def _run_scattering(self):
        if self.trajectory_dir is None:
            trajectory = self._evolve(FrontState(0.0, self.datum_), self.t_final,
                                      record_every=self._recording_stride())
        else:
            trajectory = self._load_trajectory()
        self._final_snapshot(trajectory.final)
        self._seam_criterion([seam_mass_fraction(cur.phi) for cur in trajectory.states])
        final = trajectory.final.phi
        blocks = dyadic_blocks(self.grid_)
        lam = max(blocks, key=lambda it: littlewood_paley(final, it, self.sharp_blocks).norm())
        partition = VelocityPartition(lam, self.model_, self.grid_, sharp=self.sharp_blocks)
        self.measurements_['dominant_block'] = lam
        writer = ScatteringWriter(self.output_dir)
        profile, residuals = [], []
        for idx, v in enumerate(partition.samples):
            series = self._gamma_series(trajectory.states, lam, v)
            W, residual = complex(np.nan, np.nan), np.nan
            if len(series) >= MIN_SERIES_LENGTH:
                self.artifacts_.append(writer.write_series(lam, idx, series,
                                                           ode_residual_series(series, v, self.model_)[1]))
                try:
                    W, residual = extract_scattering_profile(series, v, self.model_)
                except (NotInScatteringRegime, ValueError) as err:
                    logger.warning('No scattering profile at v = {0:.6g}: {1}'.format(v, err))
            profile.append(W)
            residuals.append(residual)
        self.artifacts_.append(writer.write_profile(lam, partition.samples, np.array(profile), np.array(residuals)))
        finite = np.isfinite(np.array(profile))
        if np.sum(finite) >= 3:
            proxy = profile_regularity_proxy(partition.samples[finite], np.array(profile)[finite])
            self.measurements_['profile_regularity_exponent'] = proxy['exponent']

        series = self._gamma_series(trajectory.states, lam, partition.v_ref)
        self.measurements_['gamma_samples'] = len(series)
        plateau, phase_error = np.nan, np.nan
        if len(series) >= MIN_SERIES_LENGTH:
            plateau = abs(plateau_slope(series))
            try:
                W, _ = extract_scattering_profile(series, partition.v_ref, self.model_)
                expected = phase_rate(partition.v_ref, self.model_, SymbolQuadrature()) * abs(W) ** 2
                phase_error = abs(phase_law_slope(series) - expected) / abs(expected)
                self.measurements_['W_ref'] = [W.real, W.imag]
            except NotInScatteringRegime as err:
                logger.warning(str(err))
        self.criteria_.append(Criterion('gamma_plateau_slope', plateau, 0.05, '<'))
        self.criteria_.append(Criterion('phase_law_relative_error', phase_error, 0.2, '<'))

        times = np.exp(np.linspace(np.log(4.0 * lam ** (-self.model_.alpha)) + 1.0,
                                   np.log(4.0 * lam ** (-self.model_.alpha)) + 4.0, 32))
        W_true = 0.1 * np.exp(0.3j)
        rate = phase_rate(partition.v_ref, self.model_) * abs(W_true) ** 2
        synthetic = [(t, W_true * np.exp(1j * rate * np.log(t))) for t in times]
        recovered, _ = extract_scattering_profile(synthetic, partition.v_ref, self.model_)
        self.criteria_.append(Criterion('synthetic_profile_recovery', abs(recovered - W_true), 1e-10, '<'))

    def _run_convergence_study(self):
        initial = FrontState(0.0, self.datum_)
        reference = self._evolve(initial, self.t_final, dt=self.dt / 8.0).final.phi
        rows = []
        for dt in (self.dt, 0.5 * self.dt):
            rows.append([dt, (self._evolve(initial, self.t_final, dt=dt).final.phi - reference).norm()])
        self._table('convergence.csv', ['dt', 'error'], rows)
        ratio = rows[0][1] / rows[1][1] if rows[1][1] > 0.0 else np.inf
        self.criteria_.append(Criterion('stepper_order', ratio, (12.0, 20.0), 'in'))
        linear = self._evolve(initial, self.t_final, Flow.LINEAR).final.phi
        exact = linear_propagate(self.datum_, self.t_final, self.model_)
        self.criteria_.append(Criterion('linear_exactness', (linear - exact).norm() / exact.norm(), 1e-12, '<'))

    def _random_band_limited(self, generator: np.random.RandomState) -> FourierField:
        grid = self.grid_
        max_mode = grid.n_points // 4
        values = np.zeros(grid.n_points, dtype=np.float64)
        for k in range(1, max_mode + 1):
            xi = np.pi * k / grid.half_length
            values += generator.normal() * np.cos(xi * grid.x) + generator.normal() * np.sin(xi * grid.x)
        return FourierField(grid, values / np.sqrt(max_mode))

    def _run_paraproduct(self):
        generator = np.random.RandomState(self.seed)
        rows = []
        for trial in range(N_PARAPRODUCT_TRIALS):
            a, u, w = [self._random_band_limited(generator) for _ in range(3)]
            product = dealiased_product(a, u)
            parts = paraproduct(a, u, self.spec_) + paraproduct(u, a, self.spec_) + \
                balanced_remainder(a, u, self.spec_)
            left = paraproduct(a, u, self.spec_).inner(w)
            right = u.inner(paraproduct(a, w, self.spec_))
            rows.append([trial, (product - parts).norm() / product.norm(), abs(left - right) / (1.0 + abs(left))])
        self._table('paraproduct.csv', ['trial', 'identity_residual', 'adjoint_residual'], rows)
        self.criteria_.append(Criterion('paraproduct_identity', max(cur[1] for cur in rows), 1e-12, '<'))
        self.criteria_.append(Criterion('paraproduct_self_adjoint', max(cur[2] for cur in rows), 1e-10, '<'))

    @staticmethod
    def check_params(**kwargs):
        if 'experiment' not in kwargs:
            raise ValueError('`experiment` is not specified!')
        if kwargs['experiment'] not in EXPERIMENTS:
            raise ValueError('`experiment` is wrong! Expected one of {0}, got `{1}`.'.format(
                ', '.join(sorted(EXPERIMENTS.keys())), kwargs['experiment']))
        if 'datum' not in kwargs:
            raise ValueError('`datum` is not specified!')
        if kwargs['datum'] not in DATUMS:
            raise ValueError('`datum` is wrong! Expected one of {0}, got `{1}`.'.format(
                ', '.join(DATUMS), kwargs['datum']))
        for name in ('half_length', 't_final', 'epsilon', 'xi1', 'xi2'):
            if name not in kwargs:
                raise ValueError('`{0}` is not specified!'.format(name))
            value = kwargs[name]
            if isinstance(value, bool) or (not isinstance(value, (int, float, np.integer, np.floating))):
                raise ValueError('`{0}` is wrong! Expected `{1}`, got `{2}`.'.format(name, type(3.5), type(value)))
            if (not np.isfinite(value)) or (value <= 0.0):
                raise ValueError('`{0}` is wrong! Expected a positive floating-point value, '
                                 'but {1} is not positive.'.format(name, value))
        if 'seed' not in kwargs:
            raise ValueError('`seed` is not specified!')
        if isinstance(kwargs['seed'], bool) or (not isinstance(kwargs['seed'], (int, np.integer))):
            raise ValueError('`seed` is wrong! Expected `{0}`, got `{1}`.'.format(type(3), type(kwargs['seed'])))
        if kwargs['seed'] < 0:
            raise ValueError('`seed` is wrong! Expected a non-negative integer value, '
                             'but {0} is negative.'.format(kwargs['seed']))
        if 'output_dir' not in kwargs:
            raise ValueError('`output_dir` is not specified!')
        if (not isinstance(kwargs['output_dir'], str)) or (len(kwargs['output_dir']) < 1):
            raise ValueError('`output_dir` is wrong! Expected a nonempty string.')
        if 'trajectory_dir' not in kwargs:
            raise ValueError('`trajectory_dir` is not specified!')
        trajectory_dir = kwargs['trajectory_dir']
        if (trajectory_dir is not None) and ((not isinstance(trajectory_dir, str)) or (len(trajectory_dir) < 1)):
            raise ValueError('`trajectory_dir` is wrong! Expected a nonempty string or null.')
        for name in ('verbose', 'sharp_blocks'):
            if name not in kwargs:
                raise ValueError('`{0}` is not specified!'.format(name))
            if not isinstance(kwargs[name], bool):
                raise ValueError('`{0}` is wrong! Expected `{1}`, got `{2}`.'.format(
                    name, type(True), type(kwargs[name])))


def attach_console_handler(verbose: bool):
    package_logger = logging.getLogger('gsqg_front_lab')
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter('%(asctime)s %(name)s %(levelname)s: %(message)s'))
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.INFO if verbose else logging.WARNING)
    return handler


def main(argv: Union[List[str], None] = None) -> int:
    parser = ArgumentParser(prog='gsqg', description='Numerical laboratory for the generalized SQG front equation.')
    subparsers = parser.add_subparsers(dest='command')
    run_parser = subparsers.add_parser('run', help='Run the experiment described by a JSON configuration.')
    run_parser.add_argument('config', type=str, help='The JSON file with the experiment configuration.')
    check_parser = subparsers.add_parser('check', help='Validate a JSON configuration without running it.')
    check_parser.add_argument('config', type=str, help='The JSON file with the experiment configuration.')
    subparsers.add_parser('list-experiments', help='Print the names of the experiments.')
    args = parser.parse_args(argv)

    if args.command == 'list-experiments':
        for name in sorted(EXPERIMENTS.keys()):
            print('{0:<20} {1}'.format(name, EXPERIMENTS[name]))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    config_name = os.path.normpath(args.config)
    try:
        runner = ExperimentRunner.from_config(config_name).validate()
    except (OSError, TypeError, ValueError) as err:
        print('Configuration `{0}` is wrong! {1}'.format(config_name, err), file=sys.stderr)
        return 2
    if args.command == 'check':
        print('Configuration `{0}` is correct.'.format(config_name))
        return 0
    handler = attach_console_handler(runner.verbose)
    try:
        exit_code = runner.run()
    except RuntimeError as err:
        logger.error(str(err))
        exit_code = 1
    finally:
        logging.getLogger('gsqg_front_lab').removeHandler(handler)
    return exit_code


if __name__ == '__main__':
    sys.exit(main())
