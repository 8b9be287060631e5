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

"""Normal form corrections and modified energies.

Everything here is built from psi = antiderivative of F(phi_x) and the weight J = 1 / (1 - psi_x). On the torus psi
is the mean-zero antiderivative, so psi_x differs from F(phi_x) by a constant; `mean_discrepancy` reports it.
"""

import logging
from typing import Union

import numpy as np

from gsqg_front_lab.exceptions import DataTooLarge
from gsqg_front_lab.spectral_core import FourierField, ParaproductSpec, apply_multiplier, balanced_remainder
from gsqg_front_lab.spectral_core import derivative, fractional_derivative, paraproduct, power_symbol
from gsqg_front_lab.nonlinearity import F_profile, psi_of
from gsqg_front_lab.symbols import AlphaModel


logger = logging.getLogger(__name__)

COERCIVITY_THRESHOLD = 0.5


class NormalFormData(object):
    """ psi, psi_x = F(phi_x), J = 1 / (1 - psi_x) and, on the generic branch, J_tilde = J^(-1/alpha). """

    def __init__(self, psi: FourierField, psi_x: FourierField, J: FourierField,
                 J_tilde: Union[FourierField, None], model: AlphaModel):
        self.psi = psi
        self.psi_x = psi_x
        self.J = J
        self.J_tilde = J_tilde
        self.model = model

    def __repr__(self) -> str:
        return 'NormalFormData({0!r}, max|psi_x|={1:.6g})'.format(self.model, self.psi_x.max_abs())

    def weight_power(self, exponent: float) -> FourierField:
        """ J^exponent = (1 - psi_x)^(-exponent). """
        return FourierField(self.J.grid, np.power(1.0 - self.psi_x.values, -exponent))


def build_normalform(phi: FourierField, model: AlphaModel,
                     threshold: float = COERCIVITY_THRESHOLD) -> NormalFormData:
    phi_x = derivative(phi)
    slope_norm = phi_x.max_abs()
    if slope_norm >= threshold:
        raise DataTooLarge(slope_norm, threshold)
    psi_x = F_profile(phi_x, model)
    coercivity = float(np.min(1.0 - psi_x.values))
    if coercivity <= 0.5:
        logger.warning('The weight 1 - psi_x drops to {0:.6g}.'.format(coercivity))
        raise DataTooLarge(slope_norm, threshold)
    J = FourierField(phi.grid, 1.0 / (1.0 - psi_x.values))
    J_tilde = None
    if model.is_generic:
        J_tilde = FourierField(phi.grid, np.power(1.0 - psi_x.values, 1.0 / model.alpha))
    return NormalFormData(psi=psi_of(phi, model), psi_x=psi_x, J=J, J_tilde=J_tilde, model=model)


def mean_discrepancy(nf: NormalFormData) -> float:
    """ Mean of F(phi_x), which the periodic antiderivative psi cannot carry. """
    return nf.psi_x.mean()


def linearized_correction(v: FourierField, nf: NormalFormData, model: AlphaModel,
                          spec: ParaproductSpec) -> FourierField:
    """ v~ = v - (1/alpha) d/dx T_{T_J v} psi - (1/alpha) d/dx Pi(T_J v, psi). """
    model.require_generic()
    weighted = paraproduct(nf.J, v, spec)
    correction = paraproduct(weighted, nf.psi, spec) + balanced_remainder(weighted, nf.psi, spec)
    return v - derivative(correction) / model.alpha


def nonlinear_correction(phi: FourierField, nf: NormalFormData, model: AlphaModel,
                         spec: ParaproductSpec) -> FourierField:
    """ phi~ = phi - (1/alpha) Pi(psi, T_J phi_x). """
    model.require_generic()
    weighted = paraproduct(nf.J, derivative(phi), spec)
    return phi - balanced_remainder(nf.psi, weighted, spec) / model.alpha


def modified_energy(v: FourierField, nf: NormalFormData, spec: ParaproductSpec) -> float:
    """ <v, T_{J_tilde} v>; the usual energy of v away from the generic branch. """
    if nf.J_tilde is None:
        return v.inner(v)
    return v.inner(paraproduct(nf.J_tilde, v, spec))


def _order_zero_form(u: FourierField, s: float, nf: NormalFormData, model: AlphaModel,
                     spec: ParaproductSpec) -> FourierField:
    """ L(psi_x, u) + (s c / alpha) T_{psi_x} u with L(psi_x, u) = -(c / alpha) d/dx [|D|^s, T_psi] |D|^(-s) u. """
    c_alpha = model.c_alpha
    lowered = fractional_derivative(u, -s)
    commutator = fractional_derivative(paraproduct(nf.psi, lowered, spec), s) - paraproduct(nf.psi, u, spec)
    principal = paraproduct(derivative(nf.psi), u, spec)
    return derivative(commutator) * (-c_alpha / model.alpha) + principal * (s * c_alpha / model.alpha)


def conjugated_variable(v: FourierField, s: float, nf: NormalFormData, model: AlphaModel, spec: ParaproductSpec,
                        corrected: bool = False) -> FourierField:
    """ T_{J^(-s/alpha)} |D|^s v, optionally minus the first quadratic correction

        w~ = (1 / (c alpha)) T_J L_0(psi_xx, d/dx^(-1) v~),

    where the order zero form L_0 is evaluated on u = |D|^(1 - alpha) v~.
    """
    model.require_generic()
    if s < 0.0:
        raise ValueError('`s` is wrong! Expected a non-negative floating-point value, but {0} is negative.'.format(s))
    conjugated = paraproduct(nf.weight_power(-s / model.alpha), fractional_derivative(v, s), spec)
    if not corrected:
        return conjugated
    u = apply_multiplier(conjugated, lambda xi: power_symbol(xi, 1.0 - model.alpha))
    correction = paraproduct(nf.J, _order_zero_form(u, s, nf, model, spec), spec)
    return conjugated - correction / (model.c_alpha * model.alpha)


def higher_energy(v: FourierField, s: float, nf: NormalFormData, model: AlphaModel, spec: ParaproductSpec,
                  corrected: bool = False) -> float:
    if not model.is_generic:
        return modified_energy(fractional_derivative(v, s), nf, spec)
    return modified_energy(conjugated_variable(v, s, nf, model, spec, corrected), nf, spec)
