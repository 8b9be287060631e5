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

"""Wave packet testing of a front: the asymptotic profile gamma(t, v) and its scattering limit W(v).

A packet travelling with the group velocity v lives at the frequency xi_v < 0 and has the spatial scale
sqrt(t a''(xi_v)). Testing the solution against it gives gamma(t, v), which asymptotically solves

    d gamma / dt = i beta(v) |gamma|^2 gamma / t,

so that gamma(t, v) ~ W(v) exp(i beta(v) |W(v)|^2 ln t) (see `symbols.phase_rate` for beta).
"""

import logging
import os
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from sklearn.linear_model import LinearRegression

from gsqg_front_lab.diagnostics import DEFAULT_DELTA, decay_fit
from gsqg_front_lab.exceptions import InsufficientSeries, NotInScatteringRegime, PacketDoesNotFit
from gsqg_front_lab.quadrature import SymbolQuadrature
from gsqg_front_lab.spectral_core import FourierField, Grid, check_dyadic, littlewood_paley, lp_weights, unit_bump
from gsqg_front_lab.symbols import AlphaModel, packet_phase, phase_rate, xi_of_velocity
from gsqg_front_lab.utils import write_table


logger = logging.getLogger(__name__)

VALIDITY_CONSTANT = 4.0
N_VELOCITY_SAMPLES = 16
MIN_SERIES_LENGTH = 8
MAX_MODULUS_SPREAD = 0.2
AMPLITUDE_FLOOR = 1e-12

GammaSeries = Sequence[Tuple[float, complex]]


def is_valid(t: float, lam: float, model: AlphaModel) -> bool:
    """ (t, v) belongs to the region where packets of the block lam are meaningful: t >= 4 lam^(-alpha). """
    return t >= VALIDITY_CONSTANT * lam ** (-model.alpha) * (1.0 - 1e-12)


class VelocityPartition(object):
    """ Frequencies I = [-sqrt(2) lam, -lam / sqrt(2)] of one dyadic block and the velocities J = a'(I) they travel at.

    The weight chi(v) is the smooth Littlewood-Paley weight of the block at |xi_v|, so the weights of all blocks of
    a grid add up to 1 at every velocity of the negative frequency branch.
    """

    def __init__(self, lam: float, model: AlphaModel, grid: Grid, n_samples: int = N_VELOCITY_SAMPLES,
                 sharp: bool = False):
        model.require_generic()
        blocks = check_dyadic(lam, grid)
        self.check_params(n_samples=n_samples)
        self.lam = float(lam)
        self.model = model
        self.sharp = sharp
        self._lowest = blocks[0]
        self._highest = blocks[-1]
        self.I = (-np.sqrt(2.0) * self.lam, -self.lam / np.sqrt(2.0))
        velocities = model.dispersion.a_prime(np.array(self.I))
        self.J = (float(np.min(velocities)), float(np.max(velocities)))
        self.v_ref = float(model.dispersion.a_prime(-self.lam))
        self.samples = np.linspace(self.J[0], self.J[1], n_samples)

    def __repr__(self) -> str:
        return 'VelocityPartition(lam={0!r}, J=[{1:.6g}, {2:.6g}])'.format(self.lam, self.J[0], self.J[1])

    @property
    def width(self) -> float:
        return self.J[1] - self.J[0]

    def chi(self, v: Union[float, np.ndarray]) -> np.ndarray:
        xi_v = xi_of_velocity(v, self.model)
        return lp_weights(np.abs(xi_v), self.lam, self._lowest, self._highest, self.sharp)

    @staticmethod
    def check_params(**kwargs):
        if 'n_samples' not in kwargs:
            raise ValueError('`n_samples` is not specified!')
        if (not isinstance(kwargs['n_samples'], int)) or isinstance(kwargs['n_samples'], bool):
            raise ValueError('`n_samples` is wrong! Expected `{0}`, got `{1}`.'.format(
                type(3), type(kwargs['n_samples'])))
        if kwargs['n_samples'] < 2:
            raise ValueError('`n_samples` is wrong! Expected an integer value greater than 1, '
                             'but {0} is not greater than 1.'.format(kwargs['n_samples']))


class WavePacket(object):
    """ Complex packet a''(xi_v)^(-1/2) chi(y) exp(i t phi(x / t)) with y = (x - v t) / sqrt(t a''(xi_v)). """

    def __init__(self, grid: Grid, v: float, t: float, xi_v: float, scale: float, values: np.ndarray):
        self.grid = grid
        self.v = v
        self.t = t
        self.xi_v = xi_v
        self.scale = scale
        self.values = values
        self.values.setflags(write=False)

    @property
    def real(self) -> FourierField:
        return FourierField(self.grid, self.values.real)

    @property
    def imag(self) -> FourierField:
        return FourierField(self.grid, self.values.imag)

    @property
    def support(self) -> Tuple[float, float]:
        center = self.v * self.t
        return center - self.scale, center + self.scale

    def l1_norm(self) -> float:
        return float(self.grid.dx * np.sum(np.abs(self.values)))

    def test(self, f: FourierField) -> complex:
        """ L2 pairing of a real field with the packet, conjugate-linear in the packet. """
        return complex(self.grid.dx * np.sum(f.values * np.conj(self.values)))


def build_packet(v: float, t: float, model: AlphaModel, grid: Grid) -> WavePacket:
    model.require_generic()
    if (not np.isfinite(t)) or (t <= 0.0):
        raise ValueError('`t` is wrong! Expected a positive floating-point value, but {0} is not positive.'.format(t))
    xi_v = float(xi_of_velocity(v, model))
    curvature = float(model.dispersion.a_second(xi_v))
    scale = np.sqrt(t * curvature)
    center = v * t
    if (center - scale <= -grid.half_length) or (center + scale >= grid.half_length):
        raise PacketDoesNotFit(center - scale, center + scale, grid.half_length)
    y = (grid.x - center) / scale
    inside = np.abs(y) < 1.0
    values = np.zeros(grid.n_points, dtype=np.complex128)
    phase = t * packet_phase(grid.x[inside] / t, model)
    values[inside] = unit_bump(y[inside]) * np.exp(1j * phase) / np.sqrt(curvature)
    return WavePacket(grid, float(v), float(t), xi_v, float(scale), values)


def profile_gamma(phi: FourierField, lam: float, v: float, t: float, model: AlphaModel,
                  sharp: bool = False) -> Tuple[complex, bool]:
    """ gamma(t, v) = <P_lam phi, u_v> together with the validity flag of (t, v). """
    valid = is_valid(t, lam, model)
    if not valid:
        logger.warning('t = {0:.6g} is too early for packets of the block {1:g}.'.format(t, lam))
    packet = build_packet(v, t, model, phi.grid)
    return packet.test(littlewood_paley(phi, lam, sharp)), valid


class PacketFrame(object):
    """ Profile values of one front on the velocity samples of a block at a fixed time. """

    def __init__(self, lam: float, t: float, v_samples: np.ndarray, packets: List[WavePacket],
                 gammas: np.ndarray, valid: bool):
        self.lam = lam
        self.t = t
        self.v_samples = v_samples
        self.packets = packets
        self.gammas = gammas
        self.valid = valid

    def mass(self) -> float:
        """ Integral of |gamma|^2 over the velocity samples; it tracks the mass of P_lam phi up to a fixed factor. """
        return float(trapezoid(np.abs(self.gammas) ** 2, self.v_samples))


def packet_frame(phi: FourierField, partition: VelocityPartition, t: float, sharp: bool = False) -> PacketFrame:
    model = partition.model
    block = littlewood_paley(phi, partition.lam, sharp)
    packets = [build_packet(v, t, model, phi.grid) for v in partition.samples]
    gammas = np.array([packet.test(block) for packet in packets], dtype=np.complex128)
    valid = is_valid(t, partition.lam, model)
    if not valid:
        logger.warning('t = {0:.6g} is too early for packets of the block {1:g}.'.format(t, partition.lam))
    return PacketFrame(partition.lam, t, partition.samples, packets, gammas, valid)


def _as_series(series: GammaSeries, minimum: int) -> Tuple[np.ndarray, np.ndarray]:
    if len(series) < minimum:
        raise InsufficientSeries(len(series), minimum)
    ordered = sorted(series, key=lambda it: it[0])
    times = np.array([cur[0] for cur in ordered], dtype=np.float64)
    gammas = np.array([cur[1] for cur in ordered], dtype=np.complex128)
    if np.any(times <= 0.0) or np.any(np.diff(times) <= 0.0):
        raise ValueError('`series` is wrong! Expected distinct positive times.')
    return times, gammas


def _log_time_derivative(times: np.ndarray, values: np.ndarray, idx: int) -> complex:
    """ Five-point derivative in s = ln t, fourth order on non-uniform stencils too. """
    s = np.log(times[(idx - 2):(idx + 3)])
    offsets = s - np.log(times[idx])
    vandermonde = np.vander(offsets, 5, increasing=True).T
    rhs = np.zeros(5, dtype=np.float64)
    rhs[1] = 1.0
    weights = np.linalg.solve(vandermonde, rhs)
    return complex(np.dot(weights, values[(idx - 2):(idx + 3)]))


def ode_residual_series(series: GammaSeries, v: float, model: AlphaModel, delta: float = DEFAULT_DELTA,
                        quad: Union[SymbolQuadrature, None] = None) -> Tuple[np.ndarray, np.ndarray]:
    """ |d gamma / dt - i beta(v) |gamma|^2 gamma / t| * t^(1 + delta / 2) at every sample; NaN at the two samples
    of each end, where the stencil does not fit. """
    times, gammas = _as_series(series, MIN_SERIES_LENGTH)
    beta = phase_rate(v, model, quad)
    residuals = np.full(times.shape, np.nan)
    for idx in range(2, times.shape[0] - 2):
        rate = _log_time_derivative(times, gammas, idx) / times[idx]
        expected = 1j * beta * abs(gammas[idx]) ** 2 * gammas[idx] / times[idx]
        residuals[idx] = abs(rate - expected) * times[idx] ** (1.0 + 0.5 * delta)
    return times, residuals


def ode_residual(series: GammaSeries, v: float, model: AlphaModel, delta: float = DEFAULT_DELTA,
                 quad: Union[SymbolQuadrature, None] = None) -> float:
    _, residuals = ode_residual_series(series, v, model, delta, quad)
    return float(np.nanmax(residuals))


def extract_scattering_profile(series: GammaSeries, v: float, model: AlphaModel,
                               quad: Union[SymbolQuadrature, None] = None,
                               amplitude_floor: float = AMPLITUDE_FLOOR) -> Tuple[complex, float]:
    """ Scattering profile W(v) and the largest deviation of gamma from W exp(i beta |W|^2 ln t).

    |W| is the mean modulus over the window; the phase of W is the circular mean of arg gamma - beta |W|^2 ln t.
    A modulus below `amplitude_floor` gives W = 0.
    """
    times, gammas = _as_series(series, MIN_SERIES_LENGTH)
    if np.log(times[-1] / times[0]) < 1.0 - 1e-12:
        raise ValueError('`series` is wrong! Expected samples spanning at least one e-fold in time, '
                         'but they cover [{0:.6g}, {1:.6g}].'.format(times[0], times[-1]))
    moduli = np.abs(gammas)
    modulus = float(np.mean(moduli))
    if modulus < amplitude_floor:
        logger.warning('Profile modulus {0:.3g} at v = {1:.6g} is below the amplitude floor.'.format(modulus, v))
        return 0j, 0.0
    spread = float((np.max(moduli) - np.min(moduli)) / modulus)
    if spread > MAX_MODULUS_SPREAD:
        raise NotInScatteringRegime(spread)
    rate = phase_rate(v, model, quad) * modulus ** 2
    rotated = gammas * np.exp(-1j * rate * np.log(times))
    angle = float(np.angle(np.mean(rotated / moduli)))
    W = modulus * np.exp(1j * angle)
    residual = float(np.max(np.abs(gammas - W * np.exp(1j * rate * np.log(times)))))
    return complex(W), residual


def phase_law_slope(series: GammaSeries) -> float:
    """ Slope of the unwrapped arg gamma against ln t. """
    times, gammas = _as_series(series, 2)
    log_t = np.log(times).reshape((-1, 1))
    regression = LinearRegression()
    regression.fit(log_t, np.unwrap(np.angle(gammas)))
    return float(regression.coef_[0])


def plateau_slope(series: GammaSeries) -> float:
    """ d log|gamma| / d log t over the last e-fold of the series. """
    times, gammas = _as_series(series, 4)
    return decay_fit(list(zip(times, np.abs(gammas))), window=(times[-1] / np.e, times[-1]))[0]


def profile_regularity_proxy(v_samples: np.ndarray, W: np.ndarray) -> Dict[str, Union[np.ndarray, float]]:
    """ Root mean square increments of W at dyadic velocity steps and the exponent of their growth with the step. """
    v_samples = np.asarray(v_samples, dtype=np.float64)
    W = np.asarray(W, dtype=np.complex128)
    if v_samples.shape != W.shape:
        raise ValueError('Velocities and profile values do not correspond to each other! {0} != {1}.'.format(
            v_samples.shape, W.shape))
    if v_samples.shape[0] < 3:
        raise InsufficientSeries(v_samples.shape[0], 3)
    step = float(np.mean(np.diff(v_samples)))
    scales = []
    increments = []
    shift = 1
    while shift < v_samples.shape[0]:
        scales.append(shift * step)
        increments.append(float(np.sqrt(np.mean(np.abs(W[shift:] - W[:-shift]) ** 2))))
        shift *= 2
    scales = np.array(scales)
    increments = np.array(increments)
    exponent = float('nan')
    positive = increments > 0.0
    if np.sum(positive) >= 2:
        regression = LinearRegression()
        regression.fit(np.log(np.abs(scales[positive])).reshape((-1, 1)), np.log(increments[positive]))
        exponent = float(regression.coef_[0])
    return {'scales': scales, 'increments': increments, 'exponent': exponent}


class ScatteringWriter(object):
    """ CSV files of the profile series of one run: `gamma_lam{lam}_v{idx}.csv` with the columns
    t, re_gamma, im_gamma, abs_gamma, residual, and `profile_lam{lam}.csv` with v, re_W, im_W, residual. """

    def __init__(self, output_dir: str):
        if not os.path.isdir(output_dir):
            raise ValueError('Directory `{0}` does not exist!'.format(output_dir))
        self.output_dir = output_dir
        self.written = []

    def _write(self, base_name: str, header: List[str], rows: List[List[float]]) -> str:
        file_name = os.path.join(self.output_dir, base_name)
        write_table(file_name, header, rows)
        self.written.append(file_name)
        return file_name

    def write_series(self, lam: float, idx: int, series: GammaSeries,
                     residuals: Union[np.ndarray, None] = None) -> str:
        times, gammas = _as_series(series, 1)
        if residuals is None:
            residuals = np.full(times.shape, np.nan)
        rows = [[t, gamma.real, gamma.imag, abs(gamma), residual]
                for t, gamma, residual in zip(times, gammas, residuals)]
        return self._write('gamma_lam{0:g}_v{1:02d}.csv'.format(lam, idx),
                           ['t', 're_gamma', 'im_gamma', 'abs_gamma', 'residual'], rows)

    def write_profile(self, lam: float, v_samples: np.ndarray, W: np.ndarray, residuals: np.ndarray) -> str:
        rows = [[v, w.real, w.imag, residual] for v, w, residual in zip(v_samples, W, residuals)]
        return self._write('profile_lam{0:g}.csv'.format(lam), ['v', 're_W', 'im_W', 'residual'], rows)
