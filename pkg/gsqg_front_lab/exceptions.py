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

"""Error types raised by the laboratory.

Invalid inputs derive from ValueError and numerical failures from RuntimeError, so callers
which only know the builtin types still catch them.
"""


class SingularMultiplier(ValueError):
    def __init__(self, xi: float):
        self.xi = xi
        super(SingularMultiplier, self).__init__(
            'Fourier multiplier is not finite at the wavenumber {0}!'.format(xi))


class BlockOutOfRange(ValueError):
    def __init__(self, lam: float, lowest: float, highest: float):
        self.lam = lam
        super(BlockOutOfRange, self).__init__(
            'Dyadic block {0} is out of range! Blocks of this grid lie in [{1}, {2}].'.format(lam, lowest, highest))


class GridMismatch(ValueError):
    def __init__(self, first, second):
        super(GridMismatch, self).__init__('Fields live on different grids: {0} and {1}.'.format(first, second))


class UseLogBranch(ValueError):
    def __init__(self, alpha: float):
        self.alpha = alpha
        super(UseLogBranch, self).__init__(
            'alpha = {0} is not on the generic branch! Use the logarithmic (alpha = 1) or the Euler (alpha = 0) '
            'form instead.'.format(alpha))


class VelocityOutOfRange(ValueError):
    def __init__(self, v: float, alpha: float):
        self.v = v
        super(VelocityOutOfRange, self).__init__(
            'Velocity {0} is not attained by the group velocity when alpha = {1}.'.format(v, alpha))


class ZeroShift(ValueError):
    def __init__(self):
        super(ZeroShift, self).__init__('Difference quotient with a zero shift is undefined!')


class DataTooLarge(ValueError):
    def __init__(self, slope_norm: float, threshold: float):
        self.slope_norm = slope_norm
        self.threshold = threshold
        super(DataTooLarge, self).__init__(
            'Data are too large! max|d/dx phi| = {0:.6g}, but it must be less than {1}.'.format(slope_norm, threshold))


class InsufficientSeries(ValueError):
    def __init__(self, got: int, expected: int):
        super(InsufficientSeries, self).__init__(
            'The series is too short! Expected at least {0} samples, got {1}.'.format(expected, got))


class PacketDoesNotFit(ValueError):
    def __init__(self, left: float, right: float, half_length: float):
        super(PacketDoesNotFit, self).__init__(
            'Wave packet support [{0:.6g}, {1:.6g}] does not fit into the periodic domain [{2:.6g}, {3:.6g}).'.format(
                left, right, -half_length, half_length))


class CorruptSnapshot(ValueError):
    pass


class QuadratureDiverged(RuntimeError):
    def __init__(self, coarse, fine, tol: float):
        self.coarse = coarse
        self.fine = fine
        super(QuadratureDiverged, self).__init__(
            'Quadrature does not converge! Refinement changed the result from {0} to {1} (tolerance {2}).'.format(
                coarse, fine, tol))


class BlowupDetected(RuntimeError):
    def __init__(self, t: float):
        self.t = t
        super(BlowupDetected, self).__init__('Non-finite values in the solution at t = {0:.6g}.'.format(t))


class NotInScatteringRegime(RuntimeError):
    def __init__(self, spread: float):
        self.spread = spread
        super(NotInScatteringRegime, self).__init__(
            'The profile modulus is not settled: its relative spread is {0:.3%}.'.format(spread))
