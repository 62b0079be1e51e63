# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Reading and writing datasets, traces and summaries.

Dataset CSV files have the header

  id,choice,x_1_1,...,x_1_d,...,x_J_1,...,x_J_d        (non-panel)
  id,t,choice,x_1_1,...,x_J_d                          (panel)

where x_j_k is attribute k of alternative j and choices are 1-based. A panel
file has one row per (individual, period), rows of an individual consecutive
and t = 1, 2, ... in order. Floats are written with repr() so that reading a
written file reproduces the data exactly.
"""

import csv
import re

import numpy as np

from .messages import Message
from .model import ChoiceDataset, InvalidInputError, Observation, \
    PanelDataset, PanelObservation
from .trace import Trace

from typing import Any, Dict, IO, List, Optional, Union  # noqa: F401

AnyDataset = Union[ChoiceDataset, PanelDataset]

STATE_FORMAT_VERSION = 2

# Trace attributes the Monte Carlo estimators of a reloaded trace depend on.
_TRACE_SETTINGS = ('mass', 'seed', 'predictive_draws')

_COVARIATE_COLUMN = re.compile(r'^x_(\d+)_(\d+)$')


class DataFormatError(InvalidInputError):
    """A data file does not follow its documented format."""
    pass


def CovariateColumns(num_alternatives, dimension):
    # type: (int, int) -> List[str]
    return [
        'x_{}_{}'.format(j + 1, k + 1) for j in range(num_alternatives)
        for k in range(dimension)
    ]


def WriteDataset(dataset, stream):
    # type: (AnyDataset, IO[str]) -> None
    panel = isinstance(dataset, PanelDataset)
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['id'] + (['t'] if panel else []) + ['choice'] +
                    CovariateColumns(dataset.num_alternatives,
                                     dataset.dimension))
    for i in range(len(dataset)):
        if panel:
            for t in range(dataset.Periods(i)):
                writer.writerow([dataset.ids[i], t + 1,
                                 dataset.choices[i, t] + 1] +
                                [repr(float(v))
                                 for v in dataset.covariates[i, t].ravel()])
        else:
            writer.writerow([dataset.ids[i], dataset.choices[i] + 1] +
                            [repr(float(v))
                             for v in dataset.covariates[i].ravel()])


def _ParseHeader(header):
    if not header or header[0] != 'id':
        raise DataFormatError('row 1: header must start with "id"')
    panel = len(header) > 1 and header[1] == 't'
    fixed = ['id', 't', 'choice'] if panel else ['id', 'choice']
    if header[:len(fixed)] != fixed:
        raise DataFormatError('row 1: header must start with {}'.format(
            ','.join(fixed)))
    pairs = []
    for name in header[len(fixed):]:
        match = _COVARIATE_COLUMN.match(name)
        if not match:
            raise DataFormatError(
                'row 1: unexpected column "{}"'.format(name))
        pairs.append((int(match.group(1)), int(match.group(2))))
    num_alternatives = max([j for j, _ in pairs] or [0])
    dimension = max([k for _, k in pairs] or [0])
    if header[len(fixed):] != CovariateColumns(num_alternatives, dimension):
        raise DataFormatError(
            'row 1: covariate columns must be x_1_1..x_J_d in '
            'alternative-major order')
    if num_alternatives < 2 or dimension < 1:
        raise DataFormatError('row 1: need J >= 2 alternatives and d >= 1')
    return panel, len(fixed), num_alternatives, dimension


def ReadDataset(stream):
    # type: (IO[str]) -> AnyDataset
    """Reads a non-panel or panel dataset, chosen by the header."""
    reader = csv.reader(stream)
    header = next(reader, None)
    panel, fixed, num_alternatives, dimension = _ParseHeader(header)
    width = fixed + num_alternatives * dimension

    rows = []
    for row_number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != width:
            raise DataFormatError('row {}: expected {} fields, got {}'.format(
                row_number, width, len(row)))
        try:
            keys = [int(v) for v in row[:fixed]]
            values = np.array([float(v) for v in row[fixed:]])
        except ValueError:
            raise DataFormatError('row {}: malformed number'.format(row_number))
        if not np.all(np.isfinite(values)):
            raise DataFormatError(
                'row {}: non-finite covariate'.format(row_number))
        choice = keys[-1]
        if not 1 <= choice <= num_alternatives:
            raise DataFormatError('row {}: choice {} is not in 1..{}'.format(
                row_number, choice, num_alternatives))
        rows.append((row_number, keys,
                     values.reshape(num_alternatives, dimension)))

    if not panel:
        ids = [keys[0] for _, keys, _ in rows]
        if len(set(ids)) != len(ids):
            raise DataFormatError('duplicate id in a non-panel file')
        return ChoiceDataset([
            Observation(keys[0], keys[1], x) for _, keys, x in rows
        ], num_alternatives, dimension)

    observations = []  # type: List[PanelObservation]
    seen = set()
    current = None  # type: Optional[Dict[str, Any]]
    for row_number, (individual, t, choice), x in rows:
        if current is None or individual != current['id']:
            if individual in seen:
                raise DataFormatError(
                    'row {}: rows of id {} are not consecutive'.format(
                        row_number, individual))
            if current is not None:
                observations.append(
                    PanelObservation(current['id'], current['choices'],
                                     current['covariates']))
            seen.add(individual)
            current = {'id': individual, 'choices': [], 'covariates': []}
        if t != len(current['choices']) + 1:
            raise DataFormatError('row {}: expected t={}, got {}'.format(
                row_number, len(current['choices']) + 1, t))
        current['choices'].append(choice)
        current['covariates'].append(x)
    if current is not None:
        observations.append(
            PanelObservation(current['id'], current['choices'],
                             current['covariates']))
    return PanelDataset(observations, num_alternatives, dimension)


def WriteTrace(trace, stream):
    # type: (Trace, IO[str]) -> None
    """One row per (retained iteration, point, alternative); 1-based indices.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(
        ['iteration', 'point', 'alternative', 'plugin', 'predictive'])
    predictive = trace.PredictiveProbs()
    for m, iteration in enumerate(trace.iterations):
        for p, probs in enumerate(trace.plugin[m]):
            for j, value in enumerate(probs):
                writer.writerow([
                    iteration + 1, p + 1, j + 1,
                    repr(float(value)), '' if predictive is None else repr(
                        float(predictive[m, p, j]))
                ])


def ReadTrace(stream, points, model=''):
    # type: (IO[str], np.ndarray, str) -> Trace
    """Reads a trace written by WriteTrace for the given registered points."""
    points = np.asarray(points, dtype=float)
    num_points, num_alternatives = points.shape[:2]
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != ['iteration', 'point', 'alternative', 'plugin',
                  'predictive']:
        raise DataFormatError('row 1: not a trace file')
    records = {}  # type: Dict[int, Dict[str, np.ndarray]]
    order = []  # type: List[int]
    for row_number, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            iteration, p, j = int(row[0]), int(row[1]) - 1, int(row[2]) - 1
            plugin = float(row[3])
            predictive = float(row[4]) if row[4] else None
        except (ValueError, IndexError):
            raise DataFormatError('row {}: malformed trace row'.format(
                row_number))
        if not (0 <= p < num_points and 0 <= j < num_alternatives):
            raise DataFormatError(
                'row {}: point or alternative out of range'.format(
                    row_number))
        if iteration not in records:
            order.append(iteration)
            records[iteration] = {
                'plugin': np.zeros((num_points, num_alternatives)),
                'predictive': None
            }
        record = records[iteration]
        record['plugin'][p, j] = plugin
        if predictive is not None:
            if record['predictive'] is None:
                record['predictive'] = np.zeros(
                    (num_points, num_alternatives))
            record['predictive'][p, j] = predictive

    trace = Trace(model, points)
    for iteration in order:
        record = records[iteration]
        trace.Append(iteration - 1, record['plugin'], record['predictive'])
    return trace


def WriteDiagnostics(trace, stream):
    # type: (Trace, IO[str]) -> None
    """Scalar diagnostics per retained iteration."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['iteration', 'occupied', 'acceptance'])
    for m, iteration in enumerate(trace.iterations):
        acceptance = trace.sweep_acceptance[m] if m < len(
            trace.sweep_acceptance) else None
        writer.writerow([
            iteration + 1, trace.occupied[m],
            '' if acceptance is None else repr(float(acceptance))
        ])


def SaveStates(trace, path):
    # type: (Trace, str) -> None
    """Stores the full states of a trace as a versioned .npz file."""
    if not trace.states:
        raise InvalidInputError('trace has no stored states')
    arrays = {
        key: np.stack([s[key] for s in trace.states])
        for key in trace.states[0]
    }
    arrays['format_version'] = np.array(STATE_FORMAT_VERSION)
    arrays['iterations'] = np.array(trace.iterations)
    arrays['points'] = trace.points
    for key in _TRACE_SETTINGS:
        arrays[key] = np.array(getattr(trace, key))
    with open(path, 'wb') as f:
        np.savez(f, **arrays)


def LoadStates(path, model=''):
    # type: (str, str) -> Trace
    """Reads a file written by SaveStates into a trace carrying states only.
    """
    with np.load(path) as blob:
        if 'format_version' not in blob.files or \
                int(blob['format_version']) != STATE_FORMAT_VERSION:
            raise DataFormatError(
                '{}: unsupported state file version'.format(path))
        keys = [
            k for k in blob.files
            if k not in ('format_version', 'iterations', 'points') +
            _TRACE_SETTINGS
        ]
        stacked = {k: blob[k] for k in keys}
        trace = Trace(model,
                      blob['points'],
                      seed=int(blob['seed']),
                      mass=float(blob['mass']),
                      predictive_draws=int(blob['predictive_draws']))
        trace.iterations = [int(i) for i in blob['iterations']]
    trace.states = [{k: stacked[k][m]
                     for k in keys}
                    for m in range(len(trace.iterations))]
    return trace


def WriteMessage(message, stream):
    # type: (Message, IO[str]) -> None
    stream.write(message.AsJsonString(pretty=True))
    stream.write('\n')
