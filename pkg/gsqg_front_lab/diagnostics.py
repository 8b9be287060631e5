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

"""Norms, monitored quantities and power-law fits.

The BMO part of the control norm B is proxied by the dyadic B^{alpha/2}_{inf,2} sum, which is comparable to it on
band-limited data. Multiplication by x uses the centered sawtooth coordinate of the grid, so data whose weighted norms
are monitored must stay away from the seam at x = +-L.
"""

import codecs
import csv
import logging
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from sklearn.linear_model import LinearRegression

from gsqg_front_lab.evolution import FrontState, linear_symbol
from gsqg_front_lab.exceptions import InsufficientSeries
from gsqg_front_lab.normalform import build_normalform, higher_energy, modified_energy
from gsqg_front_lab.spectral_core import FourierField, ParaproductSpec, apply_multiplier, derivative, dyadic_blocks
from gsqg_front_lab.spectral_core import fractional_derivative, littlewood_paley, power_symbol
from gsqg_front_lab.symbols import AlphaModel, Branch


logger = logging.getLogger(__name__)

DEFAULT_DELTA = 0.05
DEFAULT_S0 = 0.5
SEAM_FRACTION = 0.9
BMO_PROXY = 'dyadic B^{alpha/2}_{inf,2}'


def default_s(model: AlphaModel) -> float:
    return model.alpha + 2.5


def mass(phi: FourierField) -> float:
    return phi.norm() ** 2


def seam_mass_fraction(phi: FourierField, fraction: float = SEAM_FRACTION) -> float:
    """ Share of the mass of phi in |x| > fraction * L, the region next to the seam of the periodic domain. """
    weights = phi.values * phi.values
    total = float(np.sum(weights))
    if total <= 0.0:
        return 0.0
    outside = np.abs(phi.grid.x) > fraction * phi.grid.half_length
    return float(np.sum(weights[outside])) / total


def hs_norm(phi: FourierField, s: float) -> float:
    """ Homogeneous Sobolev norm || |D|^s phi ||_{L2}. """
    return fractional_derivative(phi, s).norm()


def control_norms(phi: FourierField, model: AlphaModel, sharp: bool = False) -> Tuple[float, float]:
    """ A = max|phi_x| and B = (sum over blocks of (lam^(alpha/2) max|P_lam phi_x|)^2)^(1/2). """
    phi_x = derivative(phi)
    total = 0.0
    for lam in dyadic_blocks(phi.grid):
        total += (lam ** (0.5 * model.alpha) * littlewood_paley(phi_x, lam, sharp).max_abs()) ** 2
    return phi_x.max_abs(), float(np.sqrt(total))


def vector_field_L(phi: FourierField, t: float, model: AlphaModel) -> FourierField:
    """ L = x - t a'(D), which commutes with the linear flow; on the generic branch a'(D) = -c alpha |D|^(alpha - 1).

    The zero mode of a'(D) is set to 0.
    """
    grid = phi.grid
    multiplied = FourierField(grid, grid.x * phi.values)
    if t == 0.0:
        return multiplied
    if model.branch == Branch.ZERO:
        return multiplied
    if model.branch == Branch.LOG_SQG:
        nonzero = grid.wavenumbers != 0.0
        symbol = np.where(nonzero, -2.0 * np.log(np.abs(np.where(nonzero, grid.wavenumbers, 1.0))) - 2.0, 0.0)
    else:
        symbol = -model.c_alpha * model.alpha * power_symbol(grid.wavenumbers, model.alpha - 1.0)
    return multiplied - apply_multiplier(phi, symbol) * t


def linear_propagate(phi: FourierField, t: float, model: AlphaModel) -> FourierField:
    """ Exact solution of the linear part at time t. """
    return apply_multiplier(phi, np.exp(t * linear_symbol(phi.grid, model)))


def norm_X(phi: FourierField, t: float, model: AlphaModel, s0: float = DEFAULT_S0,
           s: Union[float, None] = None) -> float:
    if s is None:
        s = default_s(model)
    return hs_norm(phi, s0) + hs_norm(phi, s) + vector_field_L(derivative(phi), t, model).norm()


def norm_Y(phi: FourierField, model: AlphaModel, delta: float = DEFAULT_DELTA) -> float:
    """ max | |D|^(1 - delta) <D>^(alpha/2 + 2 delta) phi |. """
    def symbol(xi: np.ndarray) -> np.ndarray:
        return power_symbol(xi, 1.0 - delta) * np.power(1.0 + xi * xi, 0.5 * (0.5 * model.alpha + 2.0 * delta))

    return apply_multiplier(phi, symbol).max_abs()


def norm_Y_two_term(phi: FourierField, model: AlphaModel, delta: float = DEFAULT_DELTA) -> float:
    return fractional_derivative(phi, 1.0 - delta).max_abs() + \
           fractional_derivative(derivative(phi), 0.5 * model.alpha + delta).max_abs()


def frequency_envelope(phi: FourierField, s0: float, s: float, delta: float = DEFAULT_DELTA) -> Dict[float, float]:
    """ c_lam = max over mu of 2^(-delta |log2(lam / mu)|) ||P_mu phi||, the norm being that of H^s0 and H^s. """
    blocks = dyadic_blocks(phi.grid)
    block_norms = []
    for mu in blocks:
        piece = littlewood_paley(phi, mu)
        block_norms.append(hs_norm(piece, s0) + hs_norm(piece, s))
    block_norms = np.array(block_norms)
    exponents = np.log2(np.array(blocks))
    envelope = dict()
    for lam, exponent in zip(blocks, exponents):
        envelope[lam] = float(np.max(np.power(2.0, -delta * np.abs(exponent - exponents)) * block_norms))
    return envelope


def _log_log_fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise ValueError('Power-law fit needs positive abscissas and values!')
    log_x = np.log(x).reshape((-1, 1))
    log_y = np.log(y)
    regression = LinearRegression()
    regression.fit(log_x, log_y)
    residual = float(np.max(np.abs(regression.predict(log_x) - log_y)))
    return float(regression.coef_[0]), residual


def decay_fit(series: Sequence[Tuple[float, float]],
              window: Union[Tuple[float, float], None] = None) -> Tuple[float, float]:
    """ Least-squares slope of log(value) against log(t) and the largest deviation from the fitted line. """
    points = np.array(series, dtype=np.float64).reshape((-1, 2))
    if window is not None:
        points = points[(points[:, 0] >= window[0]) & (points[:, 0] <= window[1])]
    if points.shape[0] < 4:
        raise InsufficientSeries(points.shape[0], 4)
    return _log_log_fit(points[:, 0], points[:, 1])


def amplitude_scan(amplitudes: Sequence[float], values: Sequence[float]) -> float:
    """ Exponent p in values ~ amplitudes^p. """
    amplitudes = np.asarray(amplitudes, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if amplitudes.shape[0] < 2:
        raise InsufficientSeries(amplitudes.shape[0], 2)
    if amplitudes.shape != values.shape:
        raise ValueError('Amplitudes and values do not correspond to each other! {0} != {1}.'.format(
            amplitudes.shape, values.shape))
    return _log_log_fit(amplitudes, values)[0]


class DiagnosticsRecord(object):
    """ Snapshot of the monitored quantities at the time t.

    `violations` names the entries that are negative or not finite.
    """

    def __init__(self, t: float, A: float, B: float, mass: float, hs_norms: Dict[float, float], X: float, Y: float,
                 E: float, E_s: float, envelope: Dict[float, float], seam: float = 0.0):
        self.t = t
        self.A = A
        self.B = B
        self.mass = mass
        self.hs_norms = hs_norms
        self.X = X
        self.Y = Y
        self.E = E
        self.E_s = E_s
        self.envelope = envelope
        self.seam = seam
        self.violations = [name for name, value in self.as_row().items()
                           if (name != 't') and not (np.isfinite(value) and (value >= 0.0))]
        if len(self.violations) > 0:
            logger.warning('Diagnostics at t = {0:.6g} contain negative or non-finite entries: {1}.'.format(
                t, ', '.join(self.violations)))

    def as_row(self) -> Dict[str, float]:
        row = {'t': self.t, 'A': self.A, 'B': self.B, 'mass': self.mass, 'X': self.X, 'Y': self.Y, 'E': self.E,
               'E_s': self.E_s, 'seam': self.seam}
        for s, value in self.hs_norms.items():
            row['hs:{0:g}'.format(s)] = value
        for lam, value in self.envelope.items():
            row['env:{0:g}'.format(lam)] = value
        return row


def record_diagnostics(phi: FourierField, t: float, model: AlphaModel, spec: ParaproductSpec,
                       hs_orders: Sequence[float] = (), s0: float = DEFAULT_S0, s: Union[float, None] = None,
                       delta: float = DEFAULT_DELTA) -> DiagnosticsRecord:
    """ All monitored quantities of one front; the energies are the modified energies of phi itself. """
    if s is None:
        s = default_s(model)
    A, B = control_norms(phi, model)
    nf = build_normalform(phi, model)
    return DiagnosticsRecord(
        t=t, A=A, B=B, mass=mass(phi), hs_norms={order: hs_norm(phi, order) for order in hs_orders},
        X=norm_X(phi, t, model, s0, s), Y=norm_Y(phi, model, delta), E=modified_energy(phi, nf, spec),
        E_s=higher_energy(phi, s, nf, model, spec), envelope=frequency_envelope(phi, s0, s, delta),
        seam=seam_mass_fraction(phi)
    )


class DiagnosticsWriter(object):
    """ Writes one CSV row per snapshot with the columns t, A, B, mass, hs:{s}, X, Y, E, E_s, seam, env:{lam}.

    Called with a `FrontState`, it records the diagnostics when at least `tdump` time has passed since the last row,
    so an instance can be handed to `evolve` as its callback.
    """

    def __init__(self, file_name: str, model: AlphaModel, spec: ParaproductSpec, blocks: List[float],
                 hs_orders: Sequence[float] = (), s0: float = DEFAULT_S0, s: Union[float, None] = None,
                 delta: float = DEFAULT_DELTA, tdump: float = 0.0):
        self.model = model
        self.spec = spec
        self.hs_orders = tuple(hs_orders)
        self.s0 = s0
        self.s = default_s(model) if s is None else s
        self.delta = delta
        self.tdump = tdump
        self.last_dump = None
        self.records = []
        self.fieldnames = ['t', 'A', 'B', 'mass'] + ['hs:{0:g}'.format(cur) for cur in self.hs_orders] + \
                          ['X', 'Y', 'E', 'E_s', 'seam'] + ['env:{0:g}'.format(cur) for cur in blocks]
        self._fp = codecs.open(file_name, mode='w', encoding='utf-8')
        self.writer = csv.DictWriter(self._fp, self.fieldnames, lineterminator='\n')
        self.writer.writeheader()

    def __enter__(self) -> 'DiagnosticsWriter':
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def __call__(self, state: FrontState):
        if (self.last_dump is not None) and (abs(state.t - self.last_dump) < self.tdump - 1e-12):
            return
        self.write(record_diagnostics(state.phi, state.t, self.model, self.spec, self.hs_orders, self.s0, self.s,
                                      self.delta))
        self.last_dump = state.t

    def write(self, record: DiagnosticsRecord):
        row = record.as_row()
        self.writer.writerow({name: '{0:.17g}'.format(row[name]) for name in self.fieldnames})
        self._fp.flush()
        self.records.append(record)

    def close(self):
        if not self._fp.closed:
            self._fp.close()
