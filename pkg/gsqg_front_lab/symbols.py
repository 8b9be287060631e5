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

"""Closed-form and quadrature symbols of the front equation.

The linear part of the equation is written as a Fourier multiplier acting by phi^(t, xi) = exp(-i a(xi) t) phi^(0, xi),
where a(xi) = -c(alpha) xi |xi|^(alpha - 1) on the generic and Euler branches and a(xi) = -2 xi log|xi| on the SQG
branch. The dispersion relation is omega = -i a. Wave packets live on the negative frequency half line, where
a''(xi) > 0 on every generic branch.
"""

import enum
import logging
from typing import Tuple, Union

import numpy as np
from scipy.special import gamma

from gsqg_front_lab.exceptions import UseLogBranch, VelocityOutOfRange
from gsqg_front_lab.quadrature import SymbolQuadrature, fourier_tail


logger = logging.getLogger(__name__)

BRANCH_TOLERANCE = 1e-3


class Branch(enum.Enum):
    ZERO = 'zero'
    GENERIC = 'generic'
    LOG_SQG = 'log_sqg'


def c_of_alpha(alpha: float) -> float:
    if alpha < BRANCH_TOLERANCE:
        return -0.5
    if abs(alpha - 1.0) < BRANCH_TOLERANCE:
        raise UseLogBranch(alpha)
    return float(-2.0 * np.sin(np.pi * (2.0 - alpha) / 2.0) * gamma(1.0 - alpha))


class AlphaModel(object):
    """ The parameter alpha of the equation together with its branch and the constant c(alpha).

    Values of alpha closer than 1e-3 to 0 are routed to the Euler branch (alpha = 0), values closer than 1e-3 to 1
    to the logarithmic SQG branch, where c(alpha) is not defined.
    """

    def __init__(self, alpha: float):
        self.check_params(alpha=alpha)
        self.alpha = float(alpha)
        if self.alpha < BRANCH_TOLERANCE:
            self.branch = Branch.ZERO
        elif abs(self.alpha - 1.0) < BRANCH_TOLERANCE:
            self.branch = Branch.LOG_SQG
        else:
            self.branch = Branch.GENERIC
        self.c_alpha = None if self.branch == Branch.LOG_SQG else c_of_alpha(self.alpha)
        self.dispersion = DispersionSymbols(self)

    def __repr__(self) -> str:
        return 'AlphaModel(alpha={0!r}, branch={1})'.format(self.alpha, self.branch.value)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlphaModel) and (self.alpha == other.alpha)

    def __hash__(self) -> int:
        return hash(self.alpha)

    @property
    def is_generic(self) -> bool:
        return self.branch == Branch.GENERIC

    @property
    def kernel_exponent(self) -> float:
        """ Exponent alpha of the weight |y|^(1 - alpha) in the nonlinearity; 0 and 1 on the special branches. """
        if self.branch == Branch.ZERO:
            return 0.0
        if self.branch == Branch.LOG_SQG:
            return 1.0
        return self.alpha

    def require_generic(self):
        if not self.is_generic:
            raise UseLogBranch(self.alpha)

    def profile(self, s: Union[float, np.ndarray]) -> np.ndarray:
        """ The function F with F(0) = F'(0) = 0 entering the nonlinearity. """
        s = np.asarray(s, dtype=np.float64)
        if self.branch == Branch.ZERO:
            return np.log1p(s * s) / (2.0 * np.pi)
        return -np.expm1(-0.5 * self.kernel_exponent * np.log1p(s * s))

    def profile_derivative(self, s: Union[float, np.ndarray]) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        if self.branch == Branch.ZERO:
            return s / (np.pi * (1.0 + s * s))
        exponent = self.kernel_exponent
        return exponent * s * np.power(1.0 + s * s, -0.5 * exponent - 1.0)

    @property
    def profile_curvature(self) -> float:
        """ F''(0): alpha on the power branches, 1/pi on the Euler branch. """
        if self.branch == Branch.ZERO:
            return 1.0 / np.pi
        return self.kernel_exponent

    @staticmethod
    def check_params(**kwargs):
        if 'alpha' not in kwargs:
            raise ValueError('`alpha` is not specified!')
        alpha = kwargs['alpha']
        if isinstance(alpha, bool) or (not isinstance(alpha, (int, float, np.integer, np.floating))):
            raise ValueError('`alpha` is wrong! Expected `{0}`, got `{1}`.'.format(type(3.5), type(alpha)))
        if (not np.isfinite(alpha)) or (alpha < 0.0) or (alpha >= 2.0):
            raise ValueError('`alpha` is wrong! Expected a floating-point value in [0, 2), '
                             'but {0} is not in this interval.'.format(alpha))


class DispersionSymbols(object):
    """ a(xi), its derivatives and omega(xi) = -i a(xi) for one model. All methods are vectorized. """

    def __init__(self, model: AlphaModel):
        self.model = model

    def a(self, xi: Union[float, np.ndarray]) -> np.ndarray:
        xi = np.asarray(xi, dtype=np.float64)
        r = np.abs(xi)
        if self.model.branch == Branch.LOG_SQG:
            return -2.0 * xi * np.log(np.where(r > 0.0, r, 1.0))
        exponent = self.model.kernel_exponent
        if exponent == 0.0:
            return -self.model.c_alpha * np.sign(xi)
        return -self.model.c_alpha * np.sign(xi) * np.power(r, exponent)

    def a_prime(self, xi: Union[float, np.ndarray]) -> np.ndarray:
        """ Group velocity. """
        xi = np.asarray(xi, dtype=np.float64)
        r = np.abs(xi)
        with np.errstate(divide='ignore'):
            if self.model.branch == Branch.LOG_SQG:
                return -2.0 * np.log(r) - 2.0
            exponent = self.model.kernel_exponent
            return -self.model.c_alpha * exponent * np.power(r, exponent - 1.0)

    def a_second(self, xi: Union[float, np.ndarray]) -> np.ndarray:
        xi = np.asarray(xi, dtype=np.float64)
        r = np.abs(xi)
        with np.errstate(divide='ignore', invalid='ignore'):
            if self.model.branch == Branch.LOG_SQG:
                return -2.0 / xi
            exponent = self.model.kernel_exponent
            return -self.model.c_alpha * exponent * (exponent - 1.0) * np.sign(xi) * np.power(r, exponent - 2.0)

    def omega(self, xi: Union[float, np.ndarray]) -> np.ndarray:
        return -1j * self.a(xi)


def velocity_range(model: AlphaModel) -> Tuple[float, str]:
    """ Sign of the group velocities of the negative frequency branch and a readable description of the range. """
    model.require_generic()
    sign = -float(np.sign(model.c_alpha))
    return sign, '(0, +inf)' if sign > 0.0 else '(-inf, 0)'


def xi_of_velocity(v: Union[float, np.ndarray], model: AlphaModel) -> np.ndarray:
    """ The frequency xi_v < 0 whose group velocity equals v. """
    model.require_generic()
    sign, _ = velocity_range(model)
    v_arr = np.asarray(v, dtype=np.float64)
    bad = (~np.isfinite(v_arr)) | (v_arr * sign <= 0.0)
    if np.any(bad):
        raise VelocityOutOfRange(float(np.ravel(v_arr)[np.argmax(np.ravel(bad))]), model.alpha)
    ratio = -v_arr / (model.c_alpha * model.alpha)
    return -np.power(ratio, 1.0 / (model.alpha - 1.0))


def packet_phase(v: Union[float, np.ndarray], model: AlphaModel) -> np.ndarray:
    """ phi(v) = v xi_v - a(xi_v); its derivative in v is xi_v. """
    xi_v = xi_of_velocity(v, model)
    return np.asarray(v, dtype=np.float64) * xi_v - model.dispersion.a(xi_v)


def resonance_closed(xi1: Union[float, np.ndarray], xi2: Union[float, np.ndarray],
                     model: AlphaModel) -> np.ndarray:
    model.require_generic()
    omega = model.dispersion.omega
    xi1 = np.asarray(xi1, dtype=np.float64)
    xi2 = np.asarray(xi2, dtype=np.float64)
    return (omega(xi1) + omega(xi2) - omega(xi1 + xi2)) / model.alpha


def resonance_kernel(xi1: float, xi2: float, model: AlphaModel,
                     quad: Union[SymbolQuadrature, None] = None) -> complex:
    """ Quadrature of the kernel form of the resonance symbol.

    After pairing y with -y the kernel reduces to 2i times the integral over y > 0 of
    -4 sin(xi1 y / 2) sin(xi2 y / 2) sin((xi1 + xi2) y / 2) y^(-1 - alpha).
    """
    model.require_generic()
    if quad is None:
        quad = SymbolQuadrature()
    xi1 = float(xi1)
    xi2 = float(xi2)
    total = xi1 + xi2
    alpha = model.alpha
    if (xi1 == 0.0) or (xi2 == 0.0) or (total == 0.0):
        return 0j

    def integrand(y: np.ndarray) -> np.ndarray:
        return -4.0 * np.sin(0.5 * xi1 * y) * np.sin(0.5 * xi2 * y) * np.sin(0.5 * total * y) * \
            np.power(y, -1.0 - alpha)

    gap = -0.5 * xi1 * xi2 * total * quad.gap ** (3.0 - alpha) / (3.0 - alpha)
    finite = quad.integrate_checked(integrand, max(abs(xi1), abs(xi2), abs(total)))
    tail = sum(weight * fourier_tail(-1.0 - alpha, k, quad.cutoff, 'sin')
               for k, weight in ((total, 1.0), (xi1, -1.0), (xi2, -1.0)))
    return 2j * (gap + finite + tail)


def cubic_coefficient_q(xi: float, model: AlphaModel, quad: Union[SymbolQuadrature, None] = None) -> float:
    """ Quadrature of q(xi) = -4 times the integral over y > 0 of y^(-2 - alpha) (1 - cos(xi y))^2.

    The value is real, even in xi, negative, and homogeneous of degree alpha + 1.
    """
    model.require_generic()
    if quad is None:
        quad = SymbolQuadrature()
    xi = abs(float(xi))
    if xi == 0.0:
        raise ValueError('`xi` is wrong! Expected a nonzero frequency, but got 0.')
    alpha = model.alpha

    def integrand(y: np.ndarray) -> np.ndarray:
        return -16.0 * np.power(np.sin(0.5 * xi * y), 4) * np.power(y, -2.0 - alpha)

    gap = -xi ** 4 * quad.gap ** (3.0 - alpha) / (3.0 - alpha)
    finite = quad.integrate_checked(integrand, 2.0 * xi)
    cutoff = quad.cutoff
    tail = -4.0 * (1.5 * cutoff ** (-1.0 - alpha) / (1.0 + alpha) -
                   2.0 * fourier_tail(-2.0 - alpha, xi, cutoff, 'cos') +
                   0.5 * fourier_tail(-2.0 - alpha, 2.0 * xi, cutoff, 'cos'))
    return float(gap + finite + tail)


def cubic_coefficient_closed(xi: Union[float, np.ndarray], model: AlphaModel) -> np.ndarray:
    model.require_generic()
    alpha = model.alpha
    scale = -4.0 * gamma(-1.0 - alpha) * np.cos(0.5 * np.pi * (1.0 + alpha)) * (2.0 ** alpha - 2.0)
    return scale * np.power(np.abs(np.asarray(xi, dtype=np.float64)), 1.0 + alpha)


def phase_rate(v: float, model: AlphaModel, quad: Union[SymbolQuadrature, None] = None) -> float:
    """ beta(v) in the asymptotic equation d gamma / dt = i beta(v) |gamma|^2 gamma / t.

    beta(v) = F''(0) / 2 * q(xi_v) * xi_v. The closed form of q is used unless a quadrature rule is given.
    """
    xi_v = float(xi_of_velocity(v, model))
    if quad is None:
        q = float(cubic_coefficient_closed(xi_v, model))
    else:
        q = cubic_coefficient_q(xi_v, model, quad)
    return 0.5 * model.profile_curvature * q * xi_v
