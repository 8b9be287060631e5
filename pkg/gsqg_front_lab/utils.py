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

import codecs
import csv
import json
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from gsqg_front_lab.exceptions import CorruptSnapshot
from gsqg_front_lab.spectral_core import FourierField, Grid


SNAPSHOT_VERSION = 'gsqgfield v1'


def read_config(file_name: str, known_keys: Union[Iterable[str], None] = None) -> dict:
    with codecs.open(file_name, mode='r', encoding='utf-8', errors='ignore') as fp:
        try:
            source_data = json.load(fp)
        except json.JSONDecodeError as err:
            raise ValueError('Data in the file `{0}` are wrong! {1}'.format(file_name, err))
    if not isinstance(source_data, dict):
        raise ValueError('Data in the file `{0}` are wrong! Expected `{1}`, got `{2}`.'.format(
            file_name, type({'a': 1, 'b': 2}), type(source_data)))
    if known_keys is not None:
        unknown_keys = sorted(set(source_data.keys()) - set(known_keys))
        if len(unknown_keys) > 0:
            raise ValueError('Data in the file `{0}` are wrong! Unknown keys: {1}.'.format(
                file_name, ', '.join(unknown_keys)))
    return source_data


def write_snapshot(file_name: str, field: FourierField, t: float):
    """ Header `gsqgfield v1, n, L, t`, then one `x_j, value_j` line per grid point, 17 significant digits. """
    grid = field.grid
    with codecs.open(file_name, mode='w', encoding='utf-8') as fp:
        fp.write('{0}, {1}, {2:.17g}, {3:.17g}\n'.format(SNAPSHOT_VERSION, grid.n_points, grid.half_length, t))
        for x, value in zip(grid.x, field.values):
            fp.write('{0:.17g}, {1:.17g}\n'.format(x, value))


def read_snapshot(file_name: str) -> Tuple[FourierField, float]:
    with codecs.open(file_name, mode='r', encoding='utf-8', errors='ignore') as fp:
        rows = list(filter(lambda it: len(it) > 0, csv.reader(fp, delimiter=',', skipinitialspace=True)))
    if len(rows) == 0:
        raise CorruptSnapshot('File `{0}` is empty!'.format(file_name))
    header = [cur.strip() for cur in rows[0]]
    if (len(header) != 4) or (header[0] != SNAPSHOT_VERSION):
        raise CorruptSnapshot('File `{0}`: the header is wrong! Expected `{1}, n, L, t`, got `{2}`.'.format(
            file_name, SNAPSHOT_VERSION, ', '.join(header)))
    try:
        grid = Grid(int(header[1]), float(header[2]))
        t = float(header[3])
    except ValueError as err:
        raise CorruptSnapshot('File `{0}`: the header is wrong! {1}'.format(file_name, err))
    if len(rows) - 1 != grid.n_points:
        raise CorruptSnapshot('File `{0}` is truncated! Expected {1} grid points, got {2}.'.format(
            file_name, grid.n_points, len(rows) - 1))
    values = np.zeros(grid.n_points, dtype=np.float64)
    for idx, row in enumerate(rows[1:]):
        err_msg = 'File `{0}`: line {1} is wrong!'.format(file_name, idx + 2)
        if len(row) != 2:
            raise CorruptSnapshot(err_msg)
        try:
            x = float(row[0])
            values[idx] = float(row[1])
        except ValueError:
            raise CorruptSnapshot(err_msg)
        if abs(x - grid.x[idx]) > 1e-9 * max(1.0, grid.half_length):
            raise CorruptSnapshot(err_msg)
    return FourierField(grid, values), t


def write_table(file_name: str, header: List[str], rows: Iterable[Sequence[float]]):
    """ CSV table with a header line; numbers are written with 17 significant digits. """
    with codecs.open(file_name, mode='w', encoding='utf-8') as fp:
        writer = csv.writer(fp, delimiter=',', lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow(['{0:.17g}'.format(cur) for cur in row])
