# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Conjugate Normal-inverse-Wishart updates."""

import numpy as np

from .messages import NIWParams
from .model import InvalidInputError
from .random_variates import RngStream, SampleNiw

from typing import Tuple  # noqa: F401


def NiwPosterior(prior, data):
    # type: (NIWParams, np.ndarray) -> NIWParams
    """Posterior hyperparameters after observing the rows of |data|.

    With n0 rows, mean b and scatter S = sum (b_j - b)(b_j - b)' / n0:

      m'      = (lambda m + n0 b) / (lambda + n0)
      lambda' = lambda + n0
      nu'     = nu0 + n0
      S'      = (nu0 S0 + n0 S + R) / (nu0 + n0),
      R       = lambda n0 / (lambda + n0) (b - m)(b - m)'.

    An empty |data| returns the prior unchanged.
    """
    assert isinstance(prior, NIWParams)
    d = prior.Dimension()
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        data = data.reshape(0, d)
    if data.ndim != 2 or data.shape[1] != d:
        raise InvalidInputError(
            'NIW data has shape {}, expected (n0, {})'.format(data.shape, d))
    n0 = data.shape[0]
    if n0 == 0:
        return NIWParams(mean=prior.mean.copy(),
                         precision_scale=prior.precision_scale,
                         dof=prior.dof,
                         scale=prior.scale.copy())

    lam = prior.precision_scale
    mean = data.mean(axis=0)
    centred = data - mean
    scatter = centred.T.dot(centred)
    offset = mean - prior.mean
    r = (lam * n0 / (lam + n0)) * np.outer(offset, offset)
    dof = prior.dof + n0
    scale = (prior.dof * prior.scale + scatter + r) / dof
    return NIWParams(mean=(lam * prior.mean + n0 * mean) / (lam + n0),
                     precision_scale=lam + n0,
                     dof=dof,
                     scale=0.5 * (scale + scale.T))


def DrawThetaPosterior(prior, data, rng):
    # type: (NIWParams, np.ndarray, RngStream) -> Tuple[np.ndarray, np.ndarray]
    """Draws (mu, tau) from the NIW posterior given the rows of |data|."""
    return SampleNiw(NiwPosterior(prior, data), rng)
