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

"""Integrating-factor Runge-Kutta evolution of the front equation and of its linearized and paradifferential forms.

All flows share the dispersive part d/dt u = omega(D) u, which is applied exactly through exp(omega h). The state is
the front phi and, for the linearized and paradifferential flows, a companion field v that is carried along with phi
so that the coefficients of its equation evolve with the front.
"""

import enum
import logging
import os
from typing import Callable, List, Tuple, Union

import numpy as np

from gsqg_front_lab.exceptions import BlowupDetected, DataTooLarge
from gsqg_front_lab.nonlinearity import Q_apply, Q_split, QuadratureSpec
from gsqg_front_lab.spectral_core import FourierField, Grid, ParaproductSpec, check_same_grid, derivative
from gsqg_front_lab.symbols import AlphaModel
from gsqg_front_lab.utils import write_snapshot


logger = logging.getLogger(__name__)

MAX_HALVINGS = 5


class Flow(enum.Enum):
    LINEAR = 'linear'
    FULL = 'full'
    LINEARIZED = 'linearized'
    PARADIFFERENTIAL = 'paradifferential'


class FrontState(object):
    """ Time t, the front phi and, for the linearized and paradifferential flows, the companion field v. """

    def __init__(self, t: float, phi: FourierField, v: Union[FourierField, None] = None):
        if v is not None:
            check_same_grid(phi, v)
        self.t = float(t)
        self.phi = phi
        self.v = v

    def __repr__(self) -> str:
        return 'FrontState(t={0:.6g}, phi={1!r}, v={2!r})'.format(self.t, self.phi, self.v)

    @property
    def grid(self) -> Grid:
        return self.phi.grid

    def fields(self) -> Tuple[FourierField, ...]:
        return (self.phi,) if self.v is None else (self.phi, self.v)

    def is_finite(self) -> bool:
        return all(cur.is_finite() for cur in self.fields())


class StepperConfig(object):
    """ Time step and guards of the integrator.

    `cfl_guard` bounds dt * max|a(xi)| over the grid. `coercivity_threshold`, when given, rejects any step after
    which max|phi_x| reaches it (used while the normal form diagnostics are active).
    """

    def __init__(self, dt: float, scheme: str = 'IFRK4', cfl_guard: float = 100.0,
                 coercivity_threshold: Union[float, None] = None):
        self.check_params(dt=dt, scheme=scheme, cfl_guard=cfl_guard, coercivity_threshold=coercivity_threshold)
        self.dt = float(dt)
        self.scheme = scheme
        self.cfl_guard = float(cfl_guard)
        self.coercivity_threshold = coercivity_threshold

    def __repr__(self) -> str:
        return 'StepperConfig(dt={0!r}, scheme={1!r}, cfl_guard={2!r}, coercivity_threshold={3!r})'.format(
            self.dt, self.scheme, self.cfl_guard, self.coercivity_threshold)

    def check_cfl(self, grid: Grid, model: AlphaModel):
        dispersion_bound = float(np.max(np.abs(model.dispersion.a(grid.wavenumbers))))
        if self.dt * dispersion_bound > self.cfl_guard:
            raise ValueError('`dt` is wrong! Expected dt * max|a(xi)| not greater than {0}, but {1} * {2:.6g} is '
                             'greater.'.format(self.cfl_guard, self.dt, dispersion_bound))

    @staticmethod
    def check_params(**kwargs):
        for name in ('dt', 'cfl_guard'):
            if name not in kwargs:
                raise ValueError('`{0}` is not specified!'.format(name))
            value = kwargs[name]
            if isinstance(value, bool) or (not isinstance(value, (int, float, np.integer, np.floating))):
                raise ValueError('`{0}` is wrong! Expected `{1}`, got `{2}`.'.format(name, type(3.5), type(value)))
            if (not np.isfinite(value)) or (value <= 0.0):
                raise ValueError('`{0}` is wrong! Expected a positive floating-point value, '
                                 'but {1} is not positive.'.format(name, value))
        if 'scheme' not in kwargs:
            raise ValueError('`scheme` is not specified!')
        if kwargs['scheme'] != 'IFRK4':
            raise ValueError('`scheme` is wrong! Expected `IFRK4`, got `{0}`.'.format(kwargs['scheme']))
        if 'coercivity_threshold' not in kwargs:
            raise ValueError('`coercivity_threshold` is not specified!')
        threshold = kwargs['coercivity_threshold']
        if threshold is not None:
            if isinstance(threshold, bool) or (not isinstance(threshold, (int, float, np.integer, np.floating))):
                raise ValueError('`coercivity_threshold` is wrong! Expected `{0}`, got `{1}`.'.format(
                    type(3.5), type(threshold)))
            if (not np.isfinite(threshold)) or (threshold <= 0.0):
                raise ValueError('`coercivity_threshold` is wrong! Expected a positive floating-point value, '
                                 'but {0} is not positive.'.format(threshold))


def linear_symbol(grid: Grid, model: AlphaModel) -> np.ndarray:
    """ omega(xi) = -i a(xi) of the dispersive part; the unpaired Nyquist mode is kept still. """
    symbol = np.asarray(model.dispersion.omega(grid.wavenumbers), dtype=np.complex128).copy()
    symbol[grid.nyquist_index] = 0.0
    return symbol


def rhs_full(state: FrontState, model: AlphaModel, quad: Union[QuadratureSpec, None] = None) -> FourierField:
    """ Nonlinear part Q(phi, phi_x) of the front equation. Its zero mode is not projected out. """
    return Q_apply(state.phi, derivative(state.phi), model, quad)


def nonlinear_mean(phi: FourierField, model: AlphaModel, quad: Union[QuadratureSpec, None] = None) -> float:
    """ |mean of Q(phi, phi_x)|, the rate at which the mean of phi drifts under the full flow.

    Q(phi, phi_x) is an exact x-derivative, so this vanishes up to quadrature and round-off error.
    """
    return abs(Q_apply(phi, derivative(phi), model, quad).mean())


def rhs_linearized(state: FrontState, v: FourierField, model: AlphaModel,
                   quad: Union[QuadratureSpec, None] = None) -> FourierField:
    return derivative(Q_apply(state.phi, v, model, quad))


def rhs_paradifferential(state: FrontState, v: FourierField, f_source: Union[FourierField, None], model: AlphaModel,
                         quad: Union[QuadratureSpec, None] = None,
                         spec: Union[ParaproductSpec, None] = None) -> FourierField:
    """ d/dx Q_lh(phi, v) + f. """
    result = derivative(Q_split(state.phi, v, model, quad, spec).q_lh)
    if f_source is not None:
        result = result + f_source
    return result


class IntegratingFactorRK4(object):
    """ Classical RK4 in the variable exp(-omega t) u, so the dispersive part is integrated exactly. """

    def __init__(self, symbol: np.ndarray,
                 nonlinear_operator: Callable[[float, Tuple[np.ndarray, ...]], Tuple[np.ndarray, ...]]):
        self.symbol = symbol
        self.nonlinear_operator = nonlinear_operator

    def step(self, t: float, spectra: Tuple[np.ndarray, ...], h: float) -> Tuple[np.ndarray, ...]:
        exp_half = np.exp(0.5 * h * self.symbol)
        exp_full = exp_half * exp_half
        n_0 = self.nonlinear_operator(t, spectra)
        states_1 = tuple(exp_half * (u + 0.5 * h * n) for u, n in zip(spectra, n_0))
        n_1 = self.nonlinear_operator(t + 0.5 * h, states_1)
        states_2 = tuple(exp_half * u + 0.5 * h * n for u, n in zip(spectra, n_1))
        n_2 = self.nonlinear_operator(t + 0.5 * h, states_2)
        states_3 = tuple(exp_full * u + h * exp_half * n for u, n in zip(spectra, n_2))
        n_3 = self.nonlinear_operator(t + h, states_3)
        return tuple(
            exp_full * u + (h / 6.0) * (exp_full * a + 2.0 * exp_half * (b + c) + d)
            for u, a, b, c, d in zip(spectra, n_0, n_1, n_2, n_3)
        )


def _nonlinear_operator(grid: Grid, flow: Flow, model: AlphaModel, quad: QuadratureSpec,
                        spec: Union[ParaproductSpec, None], source: Union[FourierField, None]):
    def operator(t: float, spectra: Tuple[np.ndarray, ...]) -> Tuple[np.ndarray, ...]:
        if flow == Flow.LINEAR:
            return tuple(np.zeros_like(cur) for cur in spectra)
        state = FrontState(t, FourierField.from_spectrum(grid, spectra[0]))
        terms = [rhs_full(state, model, quad)]
        if flow == Flow.LINEARIZED:
            terms.append(rhs_linearized(state, FourierField.from_spectrum(grid, spectra[1]), model, quad))
        elif flow == Flow.PARADIFFERENTIAL:
            terms.append(rhs_paradifferential(state, FourierField.from_spectrum(grid, spectra[1]), source, model,
                                              quad, spec))
        return tuple(cur.spectrum for cur in terms)

    return operator


def _check_flow(state: FrontState, flow: Flow):
    if (flow in (Flow.LINEARIZED, Flow.PARADIFFERENTIAL)) and (state.v is None):
        raise ValueError('`v` is not specified! The {0} flow needs a companion field.'.format(flow.value))


def step(state: FrontState, config: StepperConfig, model: AlphaModel, quad: Union[QuadratureSpec, None] = None,
         flow: Flow = Flow.FULL, spec: Union[ParaproductSpec, None] = None,
         source: Union[FourierField, None] = None, backward: bool = False) -> FrontState:
    """ One step of size dt (or -dt when `backward`), halving the step up to five times on non-finite output. """
    _check_flow(state, flow)
    if not state.is_finite():
        raise BlowupDetected(state.t)
    grid = state.grid
    if quad is None:
        quad = QuadratureSpec.for_grid(grid)
    integrator = IntegratingFactorRK4(linear_symbol(grid, model),
                                      _nonlinear_operator(grid, flow, model, quad, spec, source))
    h = -config.dt if backward else config.dt
    spectra = tuple(cur.spectrum for cur in state.fields())
    for halving in range(MAX_HALVINGS + 1):
        n_substeps = 2 ** halving
        with np.errstate(all='ignore'):
            t = state.t
            result = spectra
            for _ in range(n_substeps):
                result = integrator.step(t, result, h / n_substeps)
                t += h / n_substeps
        if all(np.all(np.isfinite(cur)) for cur in result):
            break
        logger.warning('Non-finite values after a step of {0:.6g} from t = {1:.6g}, the step is halved.'.format(
            h / n_substeps, state.t))
    else:
        raise BlowupDetected(state.t + h)
    fields = [FourierField.from_spectrum(grid, cur) for cur in result]
    new_state = FrontState(state.t + h, fields[0], fields[1] if len(fields) > 1 else None)
    if config.coercivity_threshold is not None:
        slope_norm = derivative(new_state.phi).max_abs()
        if slope_norm >= config.coercivity_threshold:
            raise DataTooLarge(slope_norm, config.coercivity_threshold)
    return new_state


class Trajectory(object):
    """ Recorded states of one evolution, in the order they were computed. """

    def __init__(self, states: List[FrontState]):
        self.states = states

    def __len__(self) -> int:
        return len(self.states)

    @property
    def times(self) -> np.ndarray:
        return np.array([cur.t for cur in self.states], dtype=np.float64)

    @property
    def final(self) -> FrontState:
        return self.states[-1]

    def export(self, directory: str, prefix: str = 'state') -> List[str]:
        """ Write every recorded front as a snapshot file and return the file names. """
        file_names = []
        for idx, cur in enumerate(self.states):
            file_name = os.path.join(directory, '{0}_{1:05d}.gsqgfield'.format(prefix, idx))
            write_snapshot(file_name, cur.phi, cur.t)
            file_names.append(file_name)
        return file_names


def evolve(state: FrontState, t_final: float, config: StepperConfig, model: AlphaModel,
           quad: Union[QuadratureSpec, None] = None, flow: Flow = Flow.FULL,
           spec: Union[ParaproductSpec, None] = None, source: Union[FourierField, None] = None,
           backward: bool = False, record_every: int = 1,
           callback: Union[Callable[[FrontState], None], None] = None) -> Trajectory:
    """ Evolve from state.t to t_final with equal steps not longer than config.dt.

    Forward runs need t_final >= state.t and backward runs t_final <= state.t. Every `record_every`-th state and
    the final one are kept in the returned trajectory; `callback` sees every state.
    """
    span = (state.t - t_final) if backward else (t_final - state.t)
    if span < 0.0:
        raise ValueError('`t_final` is wrong! Expected a time {0} the initial time {1}, but got {2}.'.format(
            'not after' if backward else 'not before', state.t, t_final))
    if (not isinstance(record_every, int)) or (record_every < 1):
        raise ValueError('`record_every` is wrong! Expected a positive integer value, got {0}.'.format(record_every))
    config.check_cfl(state.grid, model)
    if quad is None:
        quad = QuadratureSpec.for_grid(state.grid)
    n_steps = int(np.ceil(span / config.dt - 1e-9))
    states = [state]
    if callback is not None:
        callback(state)
    if n_steps == 0:
        return Trajectory(states)
    step_config = StepperConfig(dt=span / n_steps, scheme=config.scheme, cfl_guard=config.cfl_guard,
                                coercivity_threshold=config.coercivity_threshold)
    logger.info('Evolution of the {0} flow from t = {1:.6g} to t = {2:.6g} in {3} steps.'.format(
        flow.value, state.t, t_final, n_steps))
    cur = state
    for idx in range(1, n_steps + 1):
        cur = step(cur, step_config, model, quad, flow, spec, source, backward)
        if idx == n_steps:
            cur = FrontState(t_final, cur.phi, cur.v)
        if callback is not None:
            callback(cur)
        if (idx % record_every == 0) or (idx == n_steps):
            states.append(cur)
        if idx % max(1, n_steps // 10) == 0:
            logger.info('t = {0:.6g}, max|phi| = {1:.6g}.'.format(cur.t, cur.phi.max_abs()))
    return Trajectory(states)
