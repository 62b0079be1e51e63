# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Accuracy metrics and chain diagnostics."""

import numpy as np

from .model import CovariatesFromFlat, InvalidInputError
from .random_variates import RngStream
from .trace import EmptyTraceError

from typing import Callable, List, NamedTuple, Tuple  # noqa: F401

# Relative drift between the first-half and full-sample means of |beta| above
# which TailMomentCheck reports instability.
TAIL_DRIFT_LIMIT = 0.2

# Tail-index estimates at or below this also count as unstable. A first
# moment needs an index above one.
TAIL_INDEX_FLOOR = 1.5

# Fraction of the largest draws used by the tail-index estimate.
TAIL_FRACTION = 0.001

TailMomentReport = NamedTuple('TailMomentReport', [('estimate', float),
                                                   ('first_half', float),
                                                   ('tail_index', float),
                                                   ('stable', bool)])

Histogram = NamedTuple('Histogram', [('edges', np.ndarray),
                                     ('counts', np.ndarray)])


def Rms(trace_probs, p0):
    # type: (np.ndarray, np.ndarray) -> float
    """sqrt(J^-1 sum_j M^-1 sum_m (P_m(j) - P0(j))^2).

    >>> round(Rms([[0.5, 0.2, 0.3]], [0.4, 0.3, 0.3]), 5)
    0.08165
    """
    trace_probs = np.asarray(trace_probs, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    if trace_probs.ndim != 2 or trace_probs.shape[0] == 0:
        raise EmptyTraceError('RMS needs at least one iteration')
    if trace_probs.shape[1] != p0.shape[0]:
        raise InvalidInputError(
            'trace has {} alternatives, truth has {}'.format(
                trace_probs.shape[1], p0.shape[0]))
    return float(np.sqrt(np.mean((trace_probs - p0[None, :])**2)))


def Grid(points_per_axis, axes, low=-2.0, high=2.0):
    # type: (int, int, float, float) -> np.ndarray
    """All points of an equally spaced grid on [low, high]^axes.

    Endpoints are included. Returns a (points_per_axis^axes) x axes array.
    """
    if points_per_axis < 1 or axes < 1:
        raise InvalidInputError('grid needs at least one point and one axis')
    ticks = np.linspace(low, high, points_per_axis) if points_per_axis > 1 \
        else np.array([0.5 * (low + high)])
    mesh = np.meshgrid(*([ticks] * axes), indexing='ij')
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def L1GridErrors(q_hat, q0, grid, num_alternatives, dimension):
    # type: (Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray], np.ndarray, int, int) -> np.ndarray  # noqa: E501
    """Euclidean distances |q_hat(x) - q0(x)| at every grid point.

    Grid rows are flattened alternative-major covariate matrices.
    """
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.shape[0] == 0:
        raise InvalidInputError('empty grid')
    distances = np.zeros(grid.shape[0])
    for g, flat in enumerate(grid):
        x = CovariatesFromFlat(flat, num_alternatives, dimension)
        distances[g] = np.linalg.norm(
            np.asarray(q_hat(x)) - np.asarray(q0(x)))
    return distances


def L1GridError(q_hat, q0, grid, num_alternatives, dimension):
    """Mean over grid points of |q_hat(x) - q0(x)|, uniform M(dx)."""
    return float(
        L1GridErrors(q_hat, q0, grid, num_alternatives, dimension).mean())


def SurfaceL1Error(q_hat, q0):
    # type: (np.ndarray, np.ndarray) -> float
    """L1GridError from G x J arrays of probabilities already on the grid."""
    q_hat = np.asarray(q_hat, dtype=float)
    q0 = np.asarray(q0, dtype=float)
    if q_hat.shape != q0.shape or q_hat.shape[0] == 0:
        raise InvalidInputError(
            'surfaces of shapes {} and {} do not match'.format(
                q_hat.shape, q0.shape))
    return float(np.linalg.norm(q_hat - q0, axis=1).mean())


def VolumeScaled(l1_error, axes, low=-2.0, high=2.0):
    # type: (float, int, float, float) -> float
    """The grid mean rescaled to an integral over the hypercube."""
    return l1_error * (high - low)**axes


def Acf(series, max_lag):
    # type: (np.ndarray, int) -> np.ndarray
    """Sample autocorrelations at lags 0..max_lag.

    r_k = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2.
    """
    series = np.asarray(series, dtype=float).reshape(-1)
    if max_lag < 0 or series.shape[0] <= max_lag:
        raise InvalidInputError(
            'need 0 <= max_lag < {}, got {}'.format(series.shape[0], max_lag))
    centred = series - series.mean()
    denominator = centred.dot(centred)
    if not denominator > 0.0:
        raise InvalidInputError('autocorrelation of a constant series')
    n = series.shape[0]
    return np.array([
        centred[:n - k].dot(centred[k:]) / denominator
        for k in range(max_lag + 1)
    ])


def BatchMeansStandardError(series, batches=20):
    # type: (np.ndarray, int) -> float
    """Standard error of the mean of an autocorrelated series.

    The series is cut into |batches| contiguous batches; trailing draws that
    do not fill a batch are dropped.
    """
    series = np.asarray(series, dtype=float).reshape(-1)
    size = series.shape[0] // batches
    if size < 1:
        raise InvalidInputError('series of {} draws is too short for {} '
                                'batches'.format(series.shape[0], batches))
    means = series[:size * batches].reshape(batches, size).mean(axis=1)
    return float(means.std(ddof=1) / np.sqrt(batches))


def CredibleInterval(trace_probs, level=0.95):
    # type: (np.ndarray, float) -> Tuple[np.ndarray, np.ndarray]
    """Equal-tailed interval of per-iteration choice probabilities."""
    trace_probs = np.asarray(trace_probs, dtype=float)
    if trace_probs.shape[0] == 0:
        raise EmptyTraceError('credible interval of an empty trace')
    if not 0.0 < level < 1.0:
        raise InvalidInputError('credible level must be in (0, 1)')
    tail = 0.5 * (1.0 - level)
    return (np.quantile(trace_probs, tail, axis=0),
            np.quantile(trace_probs, 1.0 - tail, axis=0))


def HillTailIndex(magnitudes, fraction=TAIL_FRACTION):
    # type: (np.ndarray, float) -> float
    """Hill estimate of the tail index from the largest |fraction| of draws.

    Returns inf when the threshold order statistic is zero (no tail).
    """
    ordered = np.sort(np.asarray(magnitudes, dtype=float))[::-1]
    k = max(2, int(fraction * ordered.shape[0]))
    threshold = ordered[k]
    if not threshold > 0.0:
        return float('inf')
    mean_log_excess = np.mean(np.log(ordered[:k] / threshold))
    if not mean_log_excess > 0.0:
        return float('inf')
    return float(1.0 / mean_log_excess)


def TailMomentCheck(predictive_sampler, n_samples, rng):
    # type: (Callable[[int, RngStream], np.ndarray], int, RngStream) -> TailMomentReport  # noqa: E501
    """Monte Carlo estimate of E|beta| under a prior predictive.

    |predictive_sampler(count, rng)| returns count x d draws. The result is
    flagged unstable when the first-half mean drifts from the full mean by
    more than TAIL_DRIFT_LIMIT relative, or the tail-index estimate is at
    most TAIL_INDEX_FLOOR.
    """
    if n_samples < 1000:
        raise InvalidInputError('tail check needs at least 1000 samples')
    draws = np.asarray(predictive_sampler(n_samples, rng), dtype=float)
    magnitudes = np.linalg.norm(draws.reshape(n_samples, -1), axis=1)
    estimate = float(magnitudes.mean())
    first_half = float(magnitudes[:n_samples // 2].mean())
    drift = 0.0 if estimate == 0.0 else abs(first_half - estimate) / estimate
    tail_index = HillTailIndex(magnitudes)
    stable = drift <= TAIL_DRIFT_LIMIT and tail_index > TAIL_INDEX_FLOOR
    return TailMomentReport(estimate, first_half, tail_index, bool(stable))


def HistogramExport(samples, bins):
    # type: (np.ndarray, int) -> Histogram
    """Equal-width histogram over [min, max] of the samples."""
    samples = np.asarray(samples, dtype=float).reshape(-1)
    if samples.shape[0] == 0:
        raise InvalidInputError('histogram of no samples')
    if bins < 1:
        raise InvalidInputError('histogram needs at least one bin')
    counts, edges = np.histogram(samples,
                                 bins=bins,
                                 range=(samples.min(), samples.max()))
    return Histogram(edges, counts)


def HistogramRows(histogram):
    # type: (Histogram) -> List[Tuple[float, float, int]]
    """(left edge, right edge, count) for every bin."""
    edges, counts = histogram
    return [(float(edges[b]), float(edges[b + 1]), int(counts[b]))
            for b in range(counts.shape[0])]


# For running doctests.
if __name__ == "__main__":
    import doctest
    doctest.testmod()
