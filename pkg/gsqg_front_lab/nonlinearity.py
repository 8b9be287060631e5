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

"""The front nonlinearity Q(f, g), its paradifferential split and the null form Omega.

Both Q(f, g) = int |y|^(1 - alpha) F(delta^y f) |delta|^y g dy and Omega(psi, v) = int |y|^(1 - alpha) delta^y psi
|delta|^y v dy are integrals over y of pointwise products "coefficient row" times "difference row". They share one
quadrature engine: every node y > 0 of a `QuadratureSpec` is used with both signs, each product is dealiased, and the
gap (0, y_min) contributes its leading Taylor term. The Euler branch runs through the same engine with the logarithmic
profile and the weight |y|, which is the alpha = 0 form of the integral.
"""

import logging
from typing import Callable, Dict, Union

import numpy as np

from gsqg_front_lab.exceptions import QuadratureDiverged, ZeroShift
from gsqg_front_lab.quadrature import QuadratureSpec
from gsqg_front_lab.spectral_core import FourierField, Grid, ParaproductSpec, check_same_grid, derivative
from gsqg_front_lab.spectral_core import antiderivative, dealiased_product_spectra, paraproduct_cross_spectrum
from gsqg_front_lab.spectral_core import spectra_of_rows, translate, translated_values
from gsqg_front_lab.symbols import AlphaModel


logger = logging.getLogger(__name__)

CHUNK_SIZE = 128


class NonlinearityTerms(object):
    """ Q and its three paradifferential parts. """

    def __init__(self, q_full: FourierField, q_lh: FourierField, q_hl: FourierField, q_hh: FourierField):
        check_same_grid(q_full, q_lh, q_hl, q_hh)
        self.q_full = q_full
        self.q_lh = q_lh
        self.q_hl = q_hl
        self.q_hh = q_hh

    def split_residual(self) -> float:
        """ Relative L2 defect of q_full = q_lh + q_hl + q_hh. """
        defect = (self.q_full - self.q_lh - self.q_hl - self.q_hh).norm()
        return defect / max(self.q_full.norm(), np.finfo(np.float64).tiny)


def F_profile(s: Union[FourierField, float, np.ndarray], model: AlphaModel):
    if isinstance(s, FourierField):
        return FourierField(s.grid, model.profile(s.values))
    return model.profile(s)


def difference_quotient(f: FourierField, y: float, absolute: bool = False) -> FourierField:
    """ delta^y f = (f(x + y) - f(x)) / y, or |delta|^y f with |y| in the denominator. """
    if y == 0.0:
        raise ZeroShift()
    return (translate(f, y) - f) / (abs(y) if absolute else y)


def psi_of(phi: FourierField, model: AlphaModel) -> FourierField:
    """ psi = antiderivative of F(phi_x) with zero mean; the mean of F(phi_x) is returned by `profile_mean`. """
    return antiderivative(F_profile(derivative(phi), model))


def profile_mean(phi: FourierField, model: AlphaModel) -> float:
    """ Mean m of F(phi_x). The line antiderivative is psi + m * x, so delta^y of it is delta^y psi + m. """
    return F_profile(derivative(phi), model).mean()


def _accumulate(a_rows: np.ndarray, u_rows: np.ndarray, row_weights: np.ndarray, grid: Grid,
                totals: Dict[str, np.ndarray], spec: Union[ParaproductSpec, None]):
    a_spectra = spectra_of_rows(a_rows, grid)
    u_spectra = spectra_of_rows(u_rows, grid)
    totals['full'] += row_weights.dot(dealiased_product_spectra(a_spectra, u_spectra, grid))
    if spec is not None:
        totals['cross'] += (row_weights[:, np.newaxis] * a_spectra).T.dot(u_spectra)


def _integrate_spectra(f: FourierField, g: FourierField, exponent: float, quad: QuadratureSpec,
                       coefficient: Callable[[np.ndarray], np.ndarray],
                       coefficient_slope: Callable[[np.ndarray], np.ndarray],
                       spec: Union[ParaproductSpec, None] = None) -> Dict[str, np.ndarray]:
    """ Spectra of int |y|^(1 - exponent) coefficient(delta^y f) |delta|^y g dy and, with `spec`, of its parts. """
    check_same_grid(f, g)
    grid = f.grid
    nodes, weights = quad.nodes()
    kernel = weights * np.power(nodes, 1.0 - exponent)
    shifts = np.concatenate((nodes, -nodes))
    row_weights = np.concatenate((kernel, kernel))
    totals = {'full': np.zeros(grid.n_points, dtype=np.complex128)}
    if spec is not None:
        totals['cross'] = np.zeros((grid.n_points, grid.n_points), dtype=np.complex128)
    for start in range(0, shifts.shape[0], CHUNK_SIZE):
        chunk = shifts[start:(start + CHUNK_SIZE)]
        f_rows = translated_values(f.spectrum, grid, chunk)
        g_rows = translated_values(g.spectrum, grid, chunk)
        a_rows = coefficient((f_rows - f.values[np.newaxis, :]) / chunk[:, np.newaxis])
        u_rows = (g_rows - g.values[np.newaxis, :]) / np.abs(chunk)[:, np.newaxis]
        _accumulate(a_rows, u_rows, row_weights[start:(start + CHUNK_SIZE)], grid, totals, spec)
    f_x = derivative(f).values
    f_xx = derivative(f, 2).values
    g_x = derivative(g).values
    g_xx = derivative(g, 2).values
    gap_weight = 2.0 * quad.y_min ** (3.0 - exponent) / (3.0 - exponent)
    a_rows = np.stack((coefficient(f_x), 0.5 * coefficient_slope(f_x) * f_xx))
    u_rows = np.stack((0.5 * g_xx, g_x))
    _accumulate(a_rows, u_rows, np.array([gap_weight, gap_weight]), grid, totals, spec)
    if spec is not None:
        cross = totals.pop('cross')
        totals['lh'] = paraproduct_cross_spectrum(cross, grid, spec)
        totals['hl'] = paraproduct_cross_spectrum(cross.T, grid, spec)
    return totals


def _unit_slope(s: np.ndarray) -> np.ndarray:
    return np.ones_like(s)


def _checked(compute: Callable[[QuadratureSpec], FourierField], quad: QuadratureSpec, check_convergence: bool,
             tol: float) -> FourierField:
    coarse = compute(quad)
    if not check_convergence:
        return coarse
    fine = compute(quad.refined())
    scale = fine.norm()
    difference = (fine - coarse).norm()
    logger.debug('Quadrature refinement from {0} to {1} nodes changed the result by {2:.3e}.'.format(
        quad.node_count, quad.refined().node_count, difference))
    if difference > tol * scale + np.finfo(np.float64).tiny:
        raise QuadratureDiverged(coarse.norm(), scale, tol)
    return fine


def Q_apply(f: FourierField, g: FourierField, model: AlphaModel, quad: Union[QuadratureSpec, None] = None,
            check_convergence: bool = False, tol: float = 1e-7) -> FourierField:
    if quad is None:
        quad = QuadratureSpec.for_grid(f.grid)

    def compute(cur_quad: QuadratureSpec) -> FourierField:
        totals = _integrate_spectra(f, g, model.kernel_exponent, cur_quad, model.profile, model.profile_derivative)
        return FourierField.from_spectrum(f.grid, totals['full'])

    return _checked(compute, quad, check_convergence, tol)


def Q_split(f: FourierField, v: FourierField, model: AlphaModel, quad: Union[QuadratureSpec, None] = None,
            spec: Union[ParaproductSpec, None] = None) -> NonlinearityTerms:
    """ Split of Q(f, v) inside the y-integral into T_F |delta| v, T_{|delta| v} F and the balanced part. """
    if quad is None:
        quad = QuadratureSpec.for_grid(f.grid)
    if spec is None:
        spec = ParaproductSpec()
    totals = _integrate_spectra(f, v, model.kernel_exponent, quad, model.profile, model.profile_derivative, spec)
    grid = f.grid
    return NonlinearityTerms(
        q_full=FourierField.from_spectrum(grid, totals['full']),
        q_lh=FourierField.from_spectrum(grid, totals['lh']),
        q_hl=FourierField.from_spectrum(grid, totals['hl']),
        q_hh=FourierField.from_spectrum(grid, totals['full'] - totals['lh'] - totals['hl'])
    )


def omega_bilinear(psi: FourierField, v: FourierField, model: AlphaModel, quad: Union[QuadratureSpec, None] = None,
                   check_convergence: bool = False, tol: float = 1e-7, slope_mean: float = 0.0) -> FourierField:
    """ Omega(psi + slope_mean * x, v); the linear part is carried as a constant added to delta^y psi. """
    if quad is None:
        quad = QuadratureSpec.for_grid(psi.grid)

    def shifted(s: np.ndarray) -> np.ndarray:
        return s + slope_mean

    def compute(cur_quad: QuadratureSpec) -> FourierField:
        totals = _integrate_spectra(psi, v, model.kernel_exponent, cur_quad, shifted, _unit_slope)
        return FourierField.from_spectrum(psi.grid, totals['full'])

    return _checked(compute, quad, check_convergence, tol)


def null_remainder(f: FourierField, v: FourierField, model: AlphaModel,
                   quad: Union[QuadratureSpec, None] = None) -> FourierField:
    """ R v = Q(f, v) - Omega(Psi, v), where Psi = psi(f) + m * x is the line antiderivative of F(f_x). """
    if quad is None:
        quad = QuadratureSpec.for_grid(f.grid)
    omega = omega_bilinear(psi_of(f, model), v, model, quad, slope_mean=profile_mean(f, model))
    return Q_apply(f, v, model, quad) - omega
