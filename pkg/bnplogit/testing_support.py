# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Fixtures and statistical assertions shared by the test modules."""

import os
import shutil
import tempfile

import numpy as np

from .diagnostics import BatchMeansStandardError
from .messages import MhConfig, NIWParams, RunConfig, X_STAR
from .model import ChoiceDataset, CovariatesFromFlat, PanelDataset, \
    PanelObservation
from .random_variates import RngStream

SCRIPT_DIR = os.path.dirname(os.path.realpath(__file__))
TESTDATA_DIR = os.path.join(SCRIPT_DIR, 'testdata')

# Set to run the multi-minute reproduction checks.
LONG_TESTS = bool(os.environ.get('BNPLOGIT_LONG_TESTS'))

# Standard errors allowed by the statistical assertions.
SE_MULTIPLIER = 3.0


def DataFilePath(name):
    # type: (str) -> str
    return os.path.join(TESTDATA_DIR, name)


def XStar():
    # type: () -> np.ndarray
    return CovariatesFromFlat(X_STAR, 3, 2)


def SeededStream(seed=20260101, *key):
    # type: (int, int) -> RngStream
    return RngStream(seed, key)


def SmallConfig(**overrides):
    # type: (...) -> RunConfig
    """A short run configuration for unit tests."""
    fields = dict(truncation=10,
                  burnin=50,
                  iterations=50,
                  seed=7,
                  predictive_draws=200,
                  beta_draws=2,
                  report_every=25)
    fields.update(overrides)
    return RunConfig(**fields)


def OneDimensionalConfig(**overrides):
    # type: (...) -> RunConfig
    """J = 2, d = 1 with a proper prior on tau (nu0 = 10)."""
    fields = dict(num_alternatives=2,
                  dimension=1,
                  niw=NIWParams(mean=[0.0],
                                precision_scale=1.0,
                                dof=10.0,
                                scale=[[1.0]]),
                  mh=MhConfig(adapt=False),
                  x_points=[[0.0, 1.0]],
                  truncation=3,
                  seed=11,
                  predictive_draws=200,
                  beta_draws=0,
                  report_every=1000)
    fields.update(overrides)
    return RunConfig(**fields)


def EmptyChoiceDataset(num_alternatives=3, dimension=2):
    # type: (int, int) -> ChoiceDataset
    return ChoiceDataset([], num_alternatives, dimension)


def EmptyPanelDataset(num_alternatives=3, dimension=2):
    # type: (int, int) -> PanelDataset
    return PanelDataset([], num_alternatives, dimension)


def TinyPanel():
    # type: () -> PanelDataset
    """Two individuals, unbalanced: T_1 = 2, T_2 = 1."""
    x = XStar()
    return PanelDataset([
        PanelObservation(1, [3, 1], [x, -x]),
        PanelObservation(2, [2], [x]),
    ])


def AssertMeanWithinSE(test_case, draws, expected, multiplier=SE_MULTIPLIER,
                       batches=None, msg=None):
    """Asserts |mean(draws) - expected| <= multiplier * SE.

    Independent draws use the sample standard error; pass |batches| for a
    batch-means standard error on autocorrelated chains.
    """
    draws = np.asarray(draws, dtype=float).reshape(-1)
    if batches:
        se = BatchMeansStandardError(draws, batches)
    else:
        se = draws.std(ddof=1) / np.sqrt(draws.shape[0])
    gap = abs(draws.mean() - expected)
    test_case.assertLessEqual(
        gap, multiplier * se,
        msg or 'mean {} is {} SE from {}'.format(draws.mean(),
                                                 gap / se if se else 'inf',
                                                 expected))


class TemporaryDirectory(object):
    """with TemporaryDirectory() as d: ... removes |d| on exit."""
    def __enter__(self):
        self.path = tempfile.mkdtemp()
        return self.path

    def __exit__(self, *unused):
        shutil.rmtree(self.path)
