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

"""Graded Gauss-Legendre rules for the singular y-integrals.

Two rules live here. `QuadratureSpec` discretizes the y-integral of the nonlinearity on a given grid: geometric
panels near y = 0 and uniform panels up to 2L. `SymbolQuadrature` evaluates the scalar symbol integrals over the half
line, closing them with Fourier-weighted (QAWF) tails.
"""

from typing import Callable, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from gsqg_front_lab.exceptions import QuadratureDiverged


def gauss_legendre_panels(breakpoints: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """ Nodes and weights of the composite Gauss-Legendre rule on consecutive panels. """
    roots, coeffs = leggauss(order)
    left = np.asarray(breakpoints[:-1], dtype=np.float64)[:, np.newaxis]
    right = np.asarray(breakpoints[1:], dtype=np.float64)[:, np.newaxis]
    nodes = 0.5 * (right - left) * roots[np.newaxis, :] + 0.5 * (right + left)
    weights = 0.5 * (right - left) * coeffs[np.newaxis, :]
    return nodes.ravel(), weights.ravel()


def geometric_log_panels(start: float, stop: float, n_panels: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """ Gauss-Legendre in log(y) on n_panels equal panels between start and stop. """
    log_nodes, log_weights = gauss_legendre_panels(np.linspace(np.log(start), np.log(stop), n_panels + 1), order)
    nodes = np.exp(log_nodes)
    return nodes, log_weights * nodes


def fourier_tail(power: float, frequency: float, start: float, kind: str) -> float:
    """ Integral of y^power * sin(frequency * y) (kind='sin') or cos (kind='cos') over [start, infinity). """
    if frequency == 0.0:
        if kind == 'sin':
            return 0.0
        return -start ** (power + 1.0) / (power + 1.0)
    sign = 1.0
    if frequency < 0.0:
        frequency = -frequency
        if kind == 'sin':
            sign = -1.0
    value = quad(lambda y: y ** power, start, np.inf, weight=kind, wvar=frequency, epsabs=1e-13, limlst=100)[0]
    return sign * value


class QuadratureSpec(object):
    """ Discretization of the y-integral for fields on one grid.

    Near field [y_min, y_switch]: geometric panels with the ratio adjusted to land on y_switch, Gauss-Legendre in
    log(y). Far field [y_switch, y_max]: uniform panels of width y_switch * (ratio - 1). The gap (0, y_min) is not
    covered here; the nonlinearity treats it analytically.
    """

    def __init__(self, y_min: float, y_max: float, ratio: float = 1.05, y_switch: Union[float, None] = None,
                 order: int = 3):
        if y_switch is None:
            y_switch = min(128.0 * y_min, 0.5 * y_max)
        self.check_params(y_min=y_min, y_max=y_max, ratio=ratio, y_switch=y_switch, order=order)
        self.y_min = float(y_min)
        self.y_max = float(y_max)
        self.ratio = float(ratio)
        self.y_switch = float(y_switch)
        self.order = int(order)
        self._nodes = None

    @classmethod
    def for_grid(cls, grid, ratio: float = 1.05, order: int = 3) -> 'QuadratureSpec':
        y_min = grid.dx / 8.0
        y_max = 2.0 * grid.half_length
        return cls(y_min=y_min, y_max=y_max, ratio=ratio, y_switch=min(16.0 * grid.dx, 0.5 * y_max), order=order)

    def refined(self) -> 'QuadratureSpec':
        return QuadratureSpec(y_min=self.y_min, y_max=self.y_max, ratio=np.sqrt(self.ratio), y_switch=self.y_switch,
                              order=self.order)

    def __repr__(self) -> str:
        return 'QuadratureSpec(y_min={0!r}, y_max={1!r}, ratio={2!r}, y_switch={3!r}, order={4})'.format(
            self.y_min, self.y_max, self.ratio, self.y_switch, self.order)

    def nodes(self) -> Tuple[np.ndarray, np.ndarray]:
        """ Positive nodes and weights of the rule on [y_min, y_max]. """
        if self._nodes is None:
            n_near = max(int(np.ceil(np.log(self.y_switch / self.y_min) / np.log(self.ratio) - 1e-9)), 1)
            near_nodes, near_weights = geometric_log_panels(self.y_min, self.y_switch, n_near, self.order)
            effective_ratio = (self.y_switch / self.y_min) ** (1.0 / n_near)
            width = self.y_switch * (effective_ratio - 1.0)
            n_far = max(int(np.ceil((self.y_max - self.y_switch) / width - 1e-9)), 1)
            far_nodes, far_weights = gauss_legendre_panels(np.linspace(self.y_switch, self.y_max, n_far + 1),
                                                           self.order)
            self._nodes = (np.concatenate((near_nodes, far_nodes)), np.concatenate((near_weights, far_weights)))
        return self._nodes

    @property
    def node_count(self) -> int:
        return 2 * self.nodes()[0].shape[0]

    @staticmethod
    def check_params(**kwargs):
        for name in ('y_min', 'y_max', 'ratio', 'y_switch'):
            if name not in kwargs:
                raise ValueError('`{0}` is not specified!'.format(name))
            value = kwargs[name]
            if isinstance(value, bool) or (not isinstance(value, (int, float, np.integer, np.floating))):
                raise ValueError('`{0}` is wrong! Expected `{1}`, got `{2}`.'.format(name, type(3.5), type(value)))
            if (not np.isfinite(value)) or (value <= 0.0):
                raise ValueError('`{0}` is wrong! Expected a positive floating-point value, '
                                 'but {1} is not positive.'.format(name, value))
        if kwargs['ratio'] <= 1.0:
            raise ValueError('`ratio` is wrong! Expected a floating-point value greater than 1.0, '
                             'but {0} is not greater than 1.0.'.format(kwargs['ratio']))
        if not (kwargs['y_min'] < kwargs['y_switch'] < kwargs['y_max']):
            raise ValueError('`y_switch` is wrong! Expected a value between {0} and {1}, but got {2}.'.format(
                kwargs['y_min'], kwargs['y_max'], kwargs['y_switch']))
        if 'order' not in kwargs:
            raise ValueError('`order` is not specified!')
        if isinstance(kwargs['order'], bool) or (not isinstance(kwargs['order'], (int, np.integer))):
            raise ValueError('`order` is wrong! Expected `{0}`, got `{1}`.'.format(type(3), type(kwargs['order'])))
        if kwargs['order'] < 1:
            raise ValueError('`order` is wrong! Expected a positive integer value, '
                             'but {0} is not positive.'.format(kwargs['order']))


class SymbolQuadrature(object):
    """ Half-line rule for the symbol integrals.

    (0, gap) is integrated from the leading Taylor term by the caller, [gap, h] uses geometric panels with ratio 2,
    [h, cutoff] uniform panels of width h = min(1/2, 1/k_max), and [cutoff, infinity) the QAWF tails.
    """

    def __init__(self, gap: float = 1e-6, cutoff: float = 2.0, order: int = 16, tol: float = 1e-9):
        self.gap = gap
        self.cutoff = cutoff
        self.order = order
        self.tol = tol

    def __repr__(self) -> str:
        return 'SymbolQuadrature(gap={0!r}, cutoff={1!r}, order={2}, tol={3!r})'.format(
            self.gap, self.cutoff, self.order, self.tol)

    def breakpoints(self, k_max: float) -> np.ndarray:
        width = min(0.5, 1.0 / max(k_max, 1e-12))
        n_geometric = max(int(np.ceil(np.log2(width / self.gap))), 1)
        geometric = width * np.power(2.0, -np.arange(n_geometric, 0, -1, dtype=np.float64))
        geometric[0] = self.gap
        n_uniform = max(int(np.ceil((self.cutoff - width) / width - 1e-9)), 1)
        uniform = np.linspace(width, self.cutoff, n_uniform + 1)
        return np.concatenate((geometric, uniform))

    def integrate(self, integrand: Callable[[np.ndarray], np.ndarray], k_max: float, order: int = None) -> float:
        nodes, weights = gauss_legendre_panels(self.breakpoints(k_max), self.order if order is None else order)
        return float(np.sum(weights * integrand(nodes)))

    def integrate_checked(self, integrand: Callable[[np.ndarray], np.ndarray], k_max: float) -> float:
        coarse = self.integrate(integrand, k_max)
        fine = self.integrate(integrand, k_max, order=2 * self.order)
        if abs(fine - coarse) > self.tol * (1.0 + abs(fine)):
            raise QuadratureDiverged(coarse, fine, self.tol)
        return fine
