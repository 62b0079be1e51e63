# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Truncated stick-breaking construction of the Dirichlet process.

With V_1, ..., V_{N-1} iid Beta(1, a) and V_N = 1 the weights
p_1 = V_1, p_k = (1 - V_1) ... (1 - V_{k-1}) V_k sum to one exactly.
"""

import math

import numpy as np

from .model import InvalidInputError, MixingDistribution
from .random_variates import RngStream, SampleBeta

from typing import Callable  # noqa: F401

# Sticks closer to one than this switch the weight computation to log domain.
_NEAR_ONE = 1.0 - 1e-8


class StickVector(object):
    """Stick fractions V_1, ..., V_{N-1}; the last stick V_N = 1 is implicit.

    >>> StickVector([0.5, 0.5]).Truncation()
    3
    """
    def __init__(self, values):
        values = np.asarray(values, dtype=float).reshape(-1)
        if np.any(~((values >= 0.0) & (values <= 1.0))):
            raise InvalidInputError('stick fractions must lie in [0, 1]')
        self.values = values  # type: np.ndarray

    def Truncation(self):
        # type: () -> int
        return self.values.shape[0] + 1

    def AllValues(self):
        # type: () -> np.ndarray
        return np.append(self.values, 1.0)


def ClusterCounts(classes, truncation):
    # type: (np.ndarray, int) -> np.ndarray
    """e_k, the number of individuals assigned to each of the N components."""
    return np.bincount(np.asarray(classes, dtype=int), minlength=truncation)


def WeightsFromSticks(sticks):
    # type: (StickVector) -> np.ndarray
    """Mixture weights from stick fractions.

    >>> [float(p) for p in WeightsFromSticks(StickVector([0.5, 0.5]))]
    [0.5, 0.25, 0.25]
    >>> [float(p) for p in WeightsFromSticks(StickVector([1.0, 0.3]))]
    [1.0, 0.0, 0.0]
    """
    assert isinstance(sticks, StickVector)
    v = sticks.values
    if np.any(v > _NEAR_ONE):
        with np.errstate(divide='ignore'):
            log_rest = np.concatenate([[0.0], np.cumsum(np.log1p(-v))])
            log_v = np.append(np.log(v), 0.0)
        return np.exp(log_v + log_rest)
    rest = np.concatenate([[1.0], np.cumprod(1.0 - v)])
    return np.append(v, 1.0) * rest


def DrawPriorSticks(truncation, mass, rng):
    # type: (int, float, RngStream) -> StickVector
    if truncation < 1:
        raise InvalidInputError('truncation level must be at least 1')
    return StickVector(
        SampleBeta(np.ones(truncation - 1), np.full(truncation - 1, mass),
                   rng))


def DrawPriorMixing(truncation, mass, atom_sampler, rng):
    # type: (int, float, Callable[[RngStream], np.ndarray], RngStream) -> MixingDistribution  # noqa: E501
    """A draw from the truncated Dirichlet process with base |atom_sampler|."""
    if not mass > 0.0:
        raise InvalidInputError('mass parameter must be positive')
    sticks = DrawPriorSticks(truncation, mass, rng)
    atoms = np.array([atom_sampler(rng) for _ in range(truncation)])
    return MixingDistribution(WeightsFromSticks(sticks),
                              atoms.reshape(truncation, -1))


def UpdateSticksPosterior(counts, mass, rng):
    # type: (np.ndarray, float, RngStream) -> StickVector
    """Conditional draw of the sticks given cluster counts e_1, ..., e_N.

    V_k ~ Beta(1 + e_k, a + sum_{l > k} e_l) for k < N.
    """
    counts = np.asarray(counts, dtype=float)
    if np.any(counts < 0):
        raise InvalidInputError('cluster counts must be nonnegative')
    tail = np.cumsum(counts[::-1])[::-1]
    after = tail[1:]
    return StickVector(SampleBeta(1.0 + counts[:-1], mass + after, rng))


def TruncationErrorBound(n, truncation, mass):
    # type: (int, int, float) -> float
    """Approximate L1 distance between truncated and full DP marginals.

    >>> TruncationErrorBound(500, 1, 1.0)
    2000.0
    """
    if n < 1 or truncation < 1 or not mass > 0.0:
        raise InvalidInputError('need n >= 1, N >= 1 and a > 0')
    return 4.0 * n * math.exp(-(truncation - 1) / float(mass))


# For running doctests.
if __name__ == "__main__":
    import doctest
    doctest.testmod()
