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

"""Periodic grid, Fourier fields, multipliers, Littlewood-Paley blocks and paraproducts.

The line is truncated to the periodic interval [-L, L) sampled at x_j = -L + j*dx. Spectra are kept in FFT order
and normalized as

    spectrum[k] = dx * sum_j values[j] * exp(-i * xi_k * x_j),   values[j] = (1 / 2L) * sum_k spectrum[k] * exp(i * xi_k * x_j),

so that the product of two fields has the spectrum (1 / 2L) * (convolution of spectra), the torus analogue of the
(2 pi)^{-1} convolution on the line. The phase exp(-i * xi_k * x_0) = (-1)^k is stored once in `Grid.signs`.
"""

import functools
import logging
import os
from typing import Callable, List, Tuple, Union

import numpy as np
from scipy import fft as sp_fft
from scipy.integrate import quad

from gsqg_front_lab.exceptions import BlockOutOfRange, GridMismatch, SingularMultiplier


logger = logging.getLogger(__name__)

Symbol = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


def fft_workers() -> int:
    value = os.environ.get('GSQG_THREADS', '1')
    try:
        workers = int(value)
    except ValueError:
        raise ValueError('`GSQG_THREADS` is wrong! Expected a positive integer value, got `{0}`.'.format(value))
    if workers < 1:
        raise ValueError('`GSQG_THREADS` is wrong! Expected a positive integer value, '
                         'but {0} is not positive.'.format(workers))
    return workers


def smooth_step(t: Union[float, np.ndarray]) -> np.ndarray:
    """ C-infinity transition from 0 (t <= 0) to 1 (t >= 1) built from exp(-1/t). """
    t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
    with np.errstate(divide='ignore', over='ignore', under='ignore'):
        left = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
        right = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)), 0.0)
    return left / (left + right)


def mollifier(t: Union[float, np.ndarray]) -> np.ndarray:
    """ The standard bump exp(-1 / (1 - t^2)) on (-1, 1), zero outside. """
    t = np.asarray(t, dtype=np.float64)
    inside = np.abs(t) < 1.0
    with np.errstate(divide='ignore', over='ignore', under='ignore'):
        return np.where(inside, np.exp(-1.0 / np.where(inside, 1.0 - t * t, 1.0)), 0.0)


@functools.lru_cache(maxsize=1)
def mollifier_mass() -> float:
    return quad(lambda s: float(mollifier(s)), -1.0, 1.0, epsabs=1e-15, epsrel=1e-13)[0]


def unit_bump(t: Union[float, np.ndarray]) -> np.ndarray:
    """ Mollifier rescaled to unit integral. """
    return mollifier(t) / mollifier_mass()


def dyadic_cutoff(r: np.ndarray, sharp: bool = False) -> np.ndarray:
    """ Radial cutoff equal to 1 on [0, 1] and to 0 on [2, infinity). """
    r = np.asarray(r, dtype=np.float64)
    if sharp:
        return (r <= 1.0 + 1e-10).astype(np.float64)
    return 1.0 - smooth_step(r - 1.0)


class Grid(object):
    def __init__(self, n_points: int, half_length: float):
        self.check_params(n_points=n_points, half_length=half_length)
        self.n_points = int(n_points)
        self.half_length = float(half_length)
        self.dx = 2.0 * self.half_length / self.n_points
        self.x = -self.half_length + self.dx * np.arange(self.n_points, dtype=np.float64)
        self.modes = np.rint(np.fft.fftfreq(self.n_points) * self.n_points).astype(np.int64)
        self.wavenumbers = np.pi * self.modes / self.half_length
        self.signs = np.where(self.modes % 2 == 0, 1.0, -1.0)
        self.xi_max = np.pi / self.dx
        self.x.setflags(write=False)
        self.modes.setflags(write=False)
        self.wavenumbers.setflags(write=False)
        self.signs.setflags(write=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return False
        return (self.n_points == other.n_points) and (self.half_length == other.half_length)

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.n_points, self.half_length))

    def __repr__(self) -> str:
        return 'Grid(n_points={0}, half_length={1!r})'.format(self.n_points, self.half_length)

    @property
    def nyquist_index(self) -> int:
        return self.n_points // 2

    @staticmethod
    def check_params(**kwargs):
        if 'n_points' not in kwargs:
            raise ValueError('`n_points` is not specified!')
        n_points = kwargs['n_points']
        if isinstance(n_points, bool) or (not isinstance(n_points, (int, np.integer))):
            raise ValueError('`n_points` is wrong! Expected `{0}`, got `{1}`.'.format(type(3), type(n_points)))
        if n_points < 4:
            raise ValueError('`n_points` is wrong! Expected a positive integer value not less than 4, '
                             'but {0} is less than 4.'.format(n_points))
        if (n_points & (n_points - 1)) != 0:
            raise ValueError('`n_points` is wrong! Expected a power of two, but {0} is not.'.format(n_points))
        if 'half_length' not in kwargs:
            raise ValueError('`half_length` is not specified!')
        half_length = kwargs['half_length']
        if isinstance(half_length, bool) or (not isinstance(half_length, (int, float, np.integer, np.floating))):
            raise ValueError('`half_length` is wrong! Expected `{0}`, got `{1}`.'.format(type(3.5), type(half_length)))
        if (not np.isfinite(half_length)) or (half_length <= 0.0):
            raise ValueError('`half_length` is wrong! Expected a positive floating-point value, '
                             'but {0} is not positive.'.format(half_length))


class FourierField(object):
    """ Real field on a periodic grid with a lazily computed spectrum. Instances are immutable. """

    def __init__(self, grid: Grid, values: np.ndarray):
        values = np.array(values, dtype=np.float64)
        if values.shape != (grid.n_points,):
            raise ValueError('`values` are wrong! Expected an array of shape {0}, got {1}.'.format(
                (grid.n_points,), values.shape))
        values.setflags(write=False)
        self.grid = grid
        self._values = values
        self._spectrum = None

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: np.ndarray) -> 'FourierField':
        spectrum = np.asarray(spectrum, dtype=np.complex128)
        if spectrum.shape != (grid.n_points,):
            raise ValueError('`spectrum` is wrong! Expected an array of shape {0}, got {1}.'.format(
                (grid.n_points,), spectrum.shape))
        values = sp_fft.ifft(spectrum * grid.signs, workers=fft_workers()) / grid.dx
        return cls(grid, values.real)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]) -> 'FourierField':
        return cls(grid, func(grid.x))

    @classmethod
    def zeros(cls, grid: Grid) -> 'FourierField':
        return cls(grid, np.zeros(grid.n_points, dtype=np.float64))

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            spectrum = self.grid.dx * self.grid.signs * sp_fft.fft(self._values, workers=fft_workers())
            spectrum.setflags(write=False)
            self._spectrum = spectrum
        return self._spectrum

    def __add__(self, other: 'FourierField') -> 'FourierField':
        check_same_grid(self, other)
        return FourierField(self.grid, self._values + other.values)

    def __sub__(self, other: 'FourierField') -> 'FourierField':
        check_same_grid(self, other)
        return FourierField(self.grid, self._values - other.values)

    def __neg__(self) -> 'FourierField':
        return FourierField(self.grid, -self._values)

    def __mul__(self, scalar: float) -> 'FourierField':
        if isinstance(scalar, FourierField):
            raise TypeError('Use `dealiased_product` for products of two fields.')
        return FourierField(self.grid, float(scalar) * self._values)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> 'FourierField':
        return FourierField(self.grid, self._values / float(scalar))

    def __repr__(self) -> str:
        return 'FourierField({0!r}, max|values|={1:.6g})'.format(self.grid, self.max_abs())

    def norm(self) -> float:
        return float(np.sqrt(self.grid.dx * np.sum(self._values * self._values)))

    def inner(self, other: 'FourierField') -> float:
        check_same_grid(self, other)
        return float(self.grid.dx * np.sum(self._values * other.values))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._values)))

    def mean(self) -> float:
        return float(np.mean(self._values))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self._values)))


def check_same_grid(*fields: FourierField):
    first = fields[0].grid
    for cur in fields[1:]:
        if cur.grid != first:
            raise GridMismatch(first, cur.grid)


def evaluate_symbol(grid: Grid, m: Symbol) -> np.ndarray:
    if callable(m):
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            values = np.asarray(m(grid.wavenumbers), dtype=np.complex128)
    else:
        values = np.asarray(m, dtype=np.complex128)
    values = np.broadcast_to(values, (grid.n_points,))
    finite = np.isfinite(values)
    if not np.all(finite):
        raise SingularMultiplier(float(grid.wavenumbers[np.argmin(finite)]))
    return values


def apply_multiplier(f: FourierField, m: Symbol) -> FourierField:
    """ Fourier multiplier m(D). The unpaired Nyquist mode is dropped when m is odd there. """
    return FourierField.from_spectrum(f.grid, evaluate_symbol(f.grid, m) * f.spectrum)


def power_symbol(xi: np.ndarray, s: float) -> np.ndarray:
    """ |xi|^s with the zero mode set to 0 for s < 0 (and 1 for s == 0). """
    xi = np.abs(np.asarray(xi, dtype=np.float64))
    if s == 0.0:
        return np.ones_like(xi)
    nonzero = xi > 0.0
    return np.where(nonzero, np.power(np.where(nonzero, xi, 1.0), s), 0.0)


def derivative(f: FourierField, order: int = 1) -> FourierField:
    return apply_multiplier(f, lambda xi: (1j * xi) ** order)


def antiderivative(f: FourierField) -> FourierField:
    """ Mean-zero antiderivative; the mean of f is discarded. """
    return apply_multiplier(f, lambda xi: np.where(xi != 0.0, 1.0 / (1j * np.where(xi != 0.0, xi, 1.0)), 0.0))


def fractional_derivative(f: FourierField, s: float) -> FourierField:
    return apply_multiplier(f, lambda xi: power_symbol(xi, s))


def translate(f: FourierField, y: float) -> FourierField:
    return apply_multiplier(f, lambda xi: np.exp(1j * xi * y))


def translated_values(spectrum: np.ndarray, grid: Grid, shifts: np.ndarray) -> np.ndarray:
    """ Samples of f(x + y) for every y in `shifts`, one row per shift. """
    shifts = np.asarray(shifts, dtype=np.float64)
    phases = np.exp(1j * shifts[:, np.newaxis] * grid.wavenumbers[np.newaxis, :])
    rows = sp_fft.ifft(phases * (spectrum * grid.signs)[np.newaxis, :], axis=-1, workers=fft_workers())
    return rows.real / grid.dx


def spectra_of_rows(rows: np.ndarray, grid: Grid) -> np.ndarray:
    return grid.dx * grid.signs[np.newaxis, :] * sp_fft.fft(rows, axis=-1, workers=fft_workers())


def dyadic_blocks(grid: Grid) -> List[float]:
    """ Dyadic frequencies lambda = 2^j of the grid, from the largest one below pi/L to the largest below xi_max. """
    lowest = int(np.floor(np.log2(np.pi / grid.half_length) + 1e-12))
    highest = int(np.floor(np.log2(grid.xi_max) + 1e-12))
    return [2.0 ** j for j in range(lowest, highest + 1)]


def check_dyadic(lam: float, grid: Grid) -> List[float]:
    if isinstance(lam, bool) or (not isinstance(lam, (int, float, np.integer, np.floating))):
        raise ValueError('`lam` is wrong! Expected `{0}`, got `{1}`.'.format(type(3.5), type(lam)))
    if (not np.isfinite(lam)) or (lam <= 0.0):
        raise ValueError('`lam` is wrong! Expected a positive dyadic number, but {0} is not positive.'.format(lam))
    exponent = np.log2(lam)
    if abs(exponent - round(exponent)) > 1e-9:
        raise ValueError('`lam` is wrong! Expected a dyadic number, but {0} is not a power of two.'.format(lam))
    blocks = dyadic_blocks(grid)
    if (lam < blocks[0] * (1.0 - 1e-12)) or (lam > blocks[-1] * (1.0 + 1e-12)):
        raise BlockOutOfRange(lam, blocks[0], blocks[-1])
    return blocks


def lp_weights(xi: np.ndarray, lam: float, lowest: float, highest: float, sharp: bool = False) -> np.ndarray:
    """ Symbol of the block lam in the partition whose bottom and top blocks absorb the remaining frequencies. """
    r = np.abs(np.asarray(xi, dtype=np.float64))
    if lam >= highest * (1.0 - 1e-12):
        upper = np.ones_like(r)
    else:
        upper = dyadic_cutoff(r / lam, sharp)
    if lam <= lowest * (1.0 + 1e-12):
        lower = (r == 0.0).astype(np.float64)
    else:
        lower = dyadic_cutoff(2.0 * r / lam, sharp)
    return upper - lower


def littlewood_paley(f: FourierField, lam: float, sharp: bool = False) -> FourierField:
    blocks = check_dyadic(lam, f.grid)
    return apply_multiplier(f, lp_weights(f.grid.wavenumbers, lam, blocks[0], blocks[-1], sharp))


def zero_mode(f: FourierField) -> FourierField:
    return FourierField(f.grid, np.full(f.grid.n_points, f.mean()))


class ParaproductSpec(object):
    """ Quantization parameter M and cutoff chi of the M-dependent paraproduct.

    chi equals 1 on [-1/20, 1/20], vanishes outside [-1/10, 1/10] and decreases smoothly in between. The
    projection P_{>M} is smooth (vanishing for |xi| <= M and equal to 1 for |xi| >= 2M) unless `sharp` is set.
    """

    def __init__(self, M: float = 1.0, sharp: bool = False):
        self.check_params(M=M, sharp=sharp)
        self.M = float(M)
        self.sharp = sharp
        self._kernels = dict()

    def __repr__(self) -> str:
        return 'ParaproductSpec(M={0!r}, sharp={1})'.format(self.M, self.sharp)

    @staticmethod
    def chi(theta: Union[float, np.ndarray]) -> np.ndarray:
        theta = np.abs(np.asarray(theta, dtype=np.float64))
        return 1.0 - smooth_step((theta - 0.05) / 0.05)

    def high_symbol(self, xi: np.ndarray) -> np.ndarray:
        r = np.abs(np.asarray(xi, dtype=np.float64))
        if self.sharp:
            return (r > self.M).astype(np.float64)
        return smooth_step(r / self.M - 1.0)

    def low_symbol(self, xi: np.ndarray) -> np.ndarray:
        return 1.0 - self.high_symbol(xi)

    def kernel(self, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
        """ Matrix P(xi) chi~(xi - eta, xi + eta) P(eta) over pairs of grid modes and the index of xi - eta. """
        if grid not in self._kernels:
            xi = grid.wavenumbers[:, np.newaxis]
            eta = grid.wavenumbers[np.newaxis, :]
            ratio = (xi - eta) ** 2 / (self.M ** 2 + (xi + eta) ** 2)
            matrix = self.high_symbol(xi) * self.chi(ratio) * self.high_symbol(eta)
            index = grid.modes[:, np.newaxis] - grid.modes[np.newaxis, :] + grid.n_points
            self._kernels[grid] = (matrix, index)
        return self._kernels[grid]

    @staticmethod
    def check_params(**kwargs):
        if 'M' not in kwargs:
            raise ValueError('`M` is not specified!')
        if isinstance(kwargs['M'], bool) or (not isinstance(kwargs['M'], (int, float, np.integer, np.floating))):
            raise ValueError('`M` is wrong! Expected `{0}`, got `{1}`.'.format(type(3.5), type(kwargs['M'])))
        if (not np.isfinite(kwargs['M'])) or (kwargs['M'] <= 0.0):
            raise ValueError('`M` is wrong! Expected a positive floating-point value, '
                             'but {0} is not positive.'.format(kwargs['M']))
        if 'sharp' not in kwargs:
            raise ValueError('`sharp` is not specified!')
        if not isinstance(kwargs['sharp'], bool):
            raise ValueError('`sharp` is wrong! Expected `{0}`, got `{1}`.'.format(type(True), type(kwargs['sharp'])))


def paraproduct_spectrum(a_spectrum: np.ndarray, u_spectrum: np.ndarray, grid: Grid,
                         spec: ParaproductSpec) -> np.ndarray:
    matrix, index = spec.kernel(grid)
    extended = np.zeros(2 * grid.n_points, dtype=np.complex128)
    extended[grid.modes + grid.n_points] = a_spectrum
    return (matrix * extended[index]).dot(u_spectrum) / (2.0 * grid.half_length)


def paraproduct_cross_spectrum(cross: np.ndarray, grid: Grid, spec: ParaproductSpec) -> np.ndarray:
    """ Spectrum of sum_r T_{a_r} u_r given cross[m, eta] = sum_r a_r[m] u_r[eta] (both indices in FFT order).

    The kernel is applied once, so a weighted sum of many paraproducts costs one matrix product to build `cross`.
    """
    matrix, index = spec.kernel(grid)
    extended = np.zeros((2 * grid.n_points, grid.n_points), dtype=np.complex128)
    extended[grid.modes + grid.n_points] = cross
    gathered = extended[index, np.arange(grid.n_points)[np.newaxis, :]]
    return np.sum(matrix * gathered, axis=1) / (2.0 * grid.half_length)


def paraproduct(a: FourierField, u: FourierField, spec: ParaproductSpec) -> FourierField:
    """ T_a u: the part of a * u where a has frequencies well below those of u. """
    check_same_grid(a, u)
    return FourierField.from_spectrum(a.grid, paraproduct_spectrum(a.spectrum, u.spectrum, a.grid, spec))


def _pad_spectra(spectra: np.ndarray, grid: Grid, size: int) -> np.ndarray:
    padded = np.zeros(spectra.shape[:-1] + (size,), dtype=np.complex128)
    padded[..., grid.modes % size] = spectra
    nyquist = grid.nyquist_index
    half = spectra[..., nyquist] / 2.0
    padded[..., (-nyquist) % size] = half
    padded[..., nyquist] = half
    return padded


def dealiased_product_spectra(a_spectra: np.ndarray, u_spectra: np.ndarray, grid: Grid) -> np.ndarray:
    """ Grid modes of the exact product of two band-limited fields (3/2 zero padding). Works row-wise. """
    size = 3 * grid.n_points // 2
    fine_dx = 2.0 * grid.half_length / size
    fine_modes = np.rint(np.fft.fftfreq(size) * size).astype(np.int64)
    fine_signs = np.where(fine_modes % 2 == 0, 1.0, -1.0)
    workers = fft_workers()
    a_fine = sp_fft.ifft(_pad_spectra(a_spectra, grid, size) * fine_signs, axis=-1, workers=workers).real / fine_dx
    u_fine = sp_fft.ifft(_pad_spectra(u_spectra, grid, size) * fine_signs, axis=-1, workers=workers).real / fine_dx
    product = fine_dx * fine_signs * sp_fft.fft(a_fine * u_fine, axis=-1, workers=workers)
    truncated = product[..., grid.modes % size]
    nyquist = grid.nyquist_index
    truncated[..., nyquist] = product[..., nyquist] + product[..., (-nyquist) % size]
    return truncated


def dealiased_product(a: FourierField, u: FourierField) -> FourierField:
    check_same_grid(a, u)
    return FourierField.from_spectrum(a.grid, dealiased_product_spectra(a.spectrum, u.spectrum, a.grid))


def balanced_remainder(a: FourierField, u: FourierField, spec: ParaproductSpec) -> FourierField:
    """ Pi(a, u) = a * u - T_a u - T_u a, so the paraproduct decomposition is exact by construction. """
    check_same_grid(a, u)
    grid = a.grid
    product = dealiased_product_spectra(a.spectrum, u.spectrum, grid)
    low_high = paraproduct_spectrum(a.spectrum, u.spectrum, grid, spec)
    high_low = paraproduct_spectrum(u.spectrum, a.spectrum, grid, spec)
    return FourierField.from_spectrum(grid, product - low_high - high_low)


def low_projection(f: FourierField, spec: ParaproductSpec) -> FourierField:
    """ P_{<=M} f, the part not seen by the paraproducts. """
    return apply_multiplier(f, spec.low_symbol(f.grid.wavenumbers))
