# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Seedable random variates used by the samplers and simulators.

Every draw comes from an RngStream, a thin wrapper around numpy's Generator
over the PCG64 bit generator. PCG64 is fixed (not numpy's default_rng choice of
the day) so that a seed identifies the same stream on every platform. Streams
that must not perturb a chain, such as the fixed draws used for Monte Carlo
integration, are derived with Spawn() from the chain's seed.

Inverse-Wishart draws use the scaled convention: IW(nu, Psi) has density
proportional to |tau|^{-(nu+d+1)/2} exp(-tr(nu Psi tau^{-1}) / 2), hence
E[tau] = nu Psi / (nu - d - 1). See messages.NIWParams.
"""

import math

import numpy as np
from scipy.linalg import solve_triangular

from .messages import NIWParams
from .model import InvalidInputError, NumericalError

from typing import Tuple  # noqa: F401

# Smallest eigenvalue accepted for a covariance passed to SampleMvn.
SPD_TOLERANCE = 1e-14

# Spawn keys of the derived streams. Keep these stable: they are part of what
# makes a seed reproducible.
PREDICTIVE_STREAM = 1
BETA_DRAW_STREAM = 2
TRUTH_STREAM = 3
SUBSTREAM_BASE = 1000


class RngStream(object):
    """A reproducible stream of random numbers.

    Two streams built from the same (seed, spawn key) produce bitwise identical
    draws for identical call sequences. A stream must not be shared between
    concurrently running chains.
    """
    def __init__(self, seed, spawn_key=()):
        # type: (int, Tuple[int, ...]) -> None
        self.seed = int(seed)
        self.spawn_key = tuple(int(k) for k in spawn_key)
        self.generator = np.random.Generator(
            np.random.PCG64(
                np.random.SeedSequence(self.seed,
                                       spawn_key=self.spawn_key)))

    def Spawn(self, *key):
        # type: (int) -> RngStream
        """Returns an independent stream derived from this stream's seed."""
        return RngStream(self.seed, self.spawn_key + tuple(key))

    def Uniform(self, size=None):
        """Uniform draws on [0, 1)."""
        return self.generator.random(size)

    def OpenUniform(self, size=None):
        """Uniform draws strictly inside (0, 1), on a 2^-53 grid."""
        return (self.generator.integers(0, 2**53, size=size) + 0.5) / 2.0**53

    def Integers(self, high, size=None):
        """Uniform integers in {0, ..., high - 1}."""
        return self.generator.integers(0, high, size=size)

    def Normal(self, size=None):
        return self.generator.standard_normal(size)

    def ChiSquare(self, df, size=None):
        return self.generator.chisquare(df, size)

    def Beta(self, a, b, size=None):
        return self.generator.beta(a, b, size)


def SampleGumbel(u):
    """Inverse CDF of the standard Gumbel distribution, -log(-log u).

    |u| may be a scalar or an array of uniforms in (0, 1).

    >>> abs(SampleGumbel(math.exp(-1.0))) < 1e-12
    True
    """
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0) or np.any(u >= 1.0) or not np.all(np.isfinite(u)):
        raise InvalidInputError('Gumbel inverse CDF needs u in (0, 1)')
    g = -np.log(-np.log(u))
    return g if g.ndim else float(g)


def Cholesky(matrix, what='covariance', error=InvalidInputError):
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Raises |error| naming |what| if the matrix is not symmetric or its
    smallest eigenvalue is below SPD_TOLERANCE.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise error('{} must be square, got shape {}'.format(
            what, matrix.shape))
    if not np.all(np.isfinite(matrix)):
        raise error('{} has non-finite entries'.format(what))
    scale = max(1.0, float(np.abs(matrix).max()))
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-10 * scale):
        raise error('{} is not symmetric'.format(what))
    if np.linalg.eigvalsh(matrix).min() < SPD_TOLERANCE:
        raise error('{} is not positive definite'.format(what))
    return np.linalg.cholesky(matrix)


def CholeskyStack(matrices, what='covariance', error=InvalidInputError):
    """Lower Cholesky factors of a K x d x d stack of SPD matrices."""
    matrices = np.asarray(matrices, dtype=float)
    if not np.all(np.isfinite(matrices)):
        raise error('{} has non-finite entries'.format(what))
    if matrices.shape[0] and \
            np.linalg.eigvalsh(matrices).min() < SPD_TOLERANCE:
        raise error('{} is not positive definite'.format(what))
    return np.linalg.cholesky(matrices)


def MvnLogDensity(points, mean, chol):
    # type: (np.ndarray, np.ndarray, np.ndarray) -> np.ndarray
    """log phi(x | mean, L L') for each row x of |points|."""
    points = np.atleast_2d(points)
    d = chol.shape[0]
    z = solve_triangular(chol, (points - mean).T, lower=True)
    return (-0.5 * d * math.log(2.0 * math.pi) -
            np.log(np.diag(chol)).sum() - 0.5 * np.sum(z * z, axis=0))


def MvnLogDensityStack(points, means, chols):
    # type: (np.ndarray, np.ndarray, np.ndarray) -> np.ndarray
    """n x K matrix of log phi(points[i] | means[k], chols[k] chols[k]')."""
    d = means.shape[1]
    diff = points[:, None, :] - means[None, :, :]
    z = np.linalg.solve(chols[None, :, :, :], diff[..., None])[..., 0]
    log_det = np.log(np.diagonal(chols, axis1=1, axis2=2)).sum(axis=1)
    return (-0.5 * d * math.log(2.0 * math.pi) - log_det[None, :] -
            0.5 * np.sum(z * z, axis=2))


def MvnLogDensityRows(points, means, chols):
    # type: (np.ndarray, np.ndarray, np.ndarray) -> np.ndarray
    """log phi(points[i] | means[i], chols[i] chols[i]') for each row i."""
    d = means.shape[1]
    z = np.linalg.solve(chols, (points - means)[..., None])[..., 0]
    log_det = np.log(np.diagonal(chols, axis1=1, axis2=2)).sum(axis=1)
    return (-0.5 * d * math.log(2.0 * math.pi) - log_det -
            0.5 * np.sum(z * z, axis=1))


def SampleMvnFromCholesky(mean, chol, rng, size=None):
    """Draws mean + L z with z standard normal."""
    d = chol.shape[0]
    if size is None:
        return mean + chol.dot(rng.Normal(d))
    return mean + rng.Normal((size, d)).dot(chol.T)


def SampleMvn(mean, cov, rng, size=None):
    """Multivariate normal draw(s) via the Cholesky factor of |cov|."""
    assert isinstance(rng, RngStream)
    mean = np.asarray(mean, dtype=float)
    return SampleMvnFromCholesky(mean, Cholesky(cov), rng, size)


def SampleInverseWishart(nu, psi, rng, size=None):
    """One (or |size|) draws from IW(nu, psi) in the scaled convention.

    With nu psi = C C' and A the Bartlett factor of a standard Wishart(nu, I)
    draw, tau^{-1} = C^{-T} A A' C^{-1} is Wishart(nu, (nu psi)^{-1}), so
    tau = (C A^{-T})(C A^{-T})'. Only the triangular Bartlett factor is ever
    inverted.
    """
    assert isinstance(rng, RngStream)
    psi = np.atleast_2d(np.asarray(psi, dtype=float))
    d = psi.shape[0]
    if not nu > d - 1:
        raise InvalidInputError(
            'inverse-Wishart degrees of freedom {} must exceed {}'.format(
                nu, d - 1))
    c = Cholesky(nu * psi, what='inverse-Wishart scale')
    count = 1 if size is None else int(size)

    bartlett = np.zeros((count, d, d))
    rows, cols = np.tril_indices(d, -1)
    bartlett[:, rows, cols] = rng.Normal((count, rows.shape[0]))
    diag = np.arange(d)
    bartlett[:, diag, diag] = np.sqrt(
        rng.ChiSquare(nu - diag, size=(count, d)))

    inv_bartlett = np.linalg.solve(bartlett, np.broadcast_to(
        np.eye(d), (count, d, d)))
    f = np.matmul(c[None, :, :], np.transpose(inv_bartlett, (0, 2, 1)))
    tau = np.matmul(f, np.transpose(f, (0, 2, 1)))
    tau = 0.5 * (tau + np.transpose(tau, (0, 2, 1)))
    if not np.all(np.isfinite(tau)):
        raise NumericalError('non-finite inverse-Wishart draw')
    return tau[0] if size is None else tau


def SampleNiw(params, rng):
    # type: (NIWParams, RngStream) -> Tuple[np.ndarray, np.ndarray]
    """Draws tau ~ IW(nu0, S0) and then mu | tau ~ N(m, tau / lambda)."""
    assert isinstance(params, NIWParams)
    tau = SampleInverseWishart(params.dof, params.scale, rng)
    chol = Cholesky(tau, what='inverse-Wishart draw', error=NumericalError)
    mu = SampleMvnFromCholesky(params.mean,
                               chol / math.sqrt(params.precision_scale), rng)
    return mu, tau


def SampleNiwBatch(params, count, rng):
    # type: (NIWParams, int, RngStream) -> Tuple[np.ndarray, np.ndarray]
    """|count| independent SampleNiw draws as (count x d, count x d x d)."""
    assert isinstance(params, NIWParams)
    d = params.Dimension()
    if count == 0:
        return np.zeros((0, d)), np.zeros((0, d, d))
    taus = SampleInverseWishart(params.dof, params.scale, rng, size=count)
    chols = CholeskyStack(taus, what='inverse-Wishart draw',
                          error=NumericalError)
    z = rng.Normal((count, d))
    mus = params.mean + np.matmul(chols, z[..., None])[..., 0] / math.sqrt(
        params.precision_scale)
    return mus, taus


def _CheckWeights(weights):
    weights = np.asarray(weights, dtype=float)
    if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
        raise InvalidInputError(
            'categorical weights must be finite and nonnegative')
    return weights


def SampleCategorical(weights, rng):
    # type: (np.ndarray, RngStream) -> int
    """0-based index k drawn with probability weights[k] / sum(weights).

    The weights need not be normalised; entries with zero weight are never
    drawn.
    """
    weights = _CheckWeights(weights)
    cumulative = np.cumsum(weights)
    if not cumulative[-1] > 0.0:
        raise InvalidInputError('categorical weights are all zero')
    target = rng.Uniform() * cumulative[-1]
    return int(
        min(np.searchsorted(cumulative, target, side='right'),
            weights.shape[0] - 1))


def SampleCategoricalRows(weights, rng):
    # type: (np.ndarray, RngStream) -> np.ndarray
    """Row-wise SampleCategorical over an n x K weight matrix."""
    weights = _CheckWeights(weights)
    cumulative = np.cumsum(weights, axis=1)
    totals = cumulative[:, -1]
    if np.any(~(totals > 0.0)):
        raise InvalidInputError('categorical weights are all zero in a row')
    target = rng.Uniform(weights.shape[0]) * totals
    picks = np.sum(cumulative <= target[:, None], axis=1)
    return np.minimum(picks, weights.shape[1] - 1)


def SampleBeta(a, b, rng, size=None):
    """Beta(a, b) draw(s); a and b may be arrays of equal shape."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a > 0.0)) or np.any(~(b > 0.0)):
        raise InvalidInputError('Beta parameters must be positive')
    return rng.Beta(a, b, size)


# For running doctests.
if __name__ == "__main__":
    import doctest
    doctest.testmod()
