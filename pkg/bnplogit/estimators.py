# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Posterior estimators of choice probabilities.

Two estimators of the posterior mean of P({j} | G, x) are offered for a
trace:

  * the prediction-rule estimator, which averages over retained iterations
    the conditional expectation of P({j} | G, x) given theta and the
    individual coefficients:

        a / (a + n) P({j} | F_theta, x) + 1 / (a + n) sum_i logit_j(beta_i, x)

  * the plug-in estimator, which averages P({j} | G^(m), x) directly.

The first is only defined for the non-panel sampler; traces of the other
samplers carry plug-in values only. P({j} | F_theta, x) and the plug-in value
for continuous mixing distributions are Monte Carlo integrals. They reuse one
fixed set of standard normals (and uniforms) per chain so that successive
iterations differ only through the parameters.
"""

import numpy as np
from scipy.special import logsumexp

from .model import AsCovariateMatrix, AtomLogProbs, InvalidInputError, \
    MixingDistribution, MixtureChoiceProb, NumericalError
from .random_variates import Cholesky, PREDICTIVE_STREAM, RngStream
from .trace import EmptyTraceError, Trace

from typing import Dict, Optional, Tuple  # noqa: F401

DEFAULT_PREDICTIVE_DRAWS = 10000


class CommonRandomNumbers(object):
    """Fixed draws used for Monte Carlo choice-probability integrals."""
    def __init__(self,
                 seed,
                 dimension,
                 draws=DEFAULT_PREDICTIVE_DRAWS,
                 stream=PREDICTIVE_STREAM):
        # type: (int, int, int, int) -> None
        rng = RngStream(seed).Spawn(stream)
        self.normals = rng.Normal((draws, dimension))  # type: np.ndarray
        self.uniforms = rng.Uniform(draws)  # type: np.ndarray

    def Draws(self):
        # type: () -> int
        return self.normals.shape[0]


def NormalMixtureChoiceProb(x, weights, means, chols, crn):
    # type: (np.ndarray, np.ndarray, np.ndarray, np.ndarray, CommonRandomNumbers) -> np.ndarray  # noqa: E501
    """Monte Carlo P({j} | x) under sum_k w_k phi(mu_k, tau_k).

    |chols| are the lower Cholesky factors of the tau_k. Component labels are
    assigned by inverting the cumulative weights at crn.uniforms, and each
    coefficient draw is mu_k + L_k z with z from crn.normals.
    """
    x = AsCovariateMatrix(x)
    weights = np.asarray(weights, dtype=float)
    cumulative = np.cumsum(weights)
    components = np.minimum(
        np.searchsorted(cumulative, crn.uniforms * cumulative[-1],
                        side='right'), weights.shape[0] - 1)
    betas = means[components] + np.matmul(
        chols[components], crn.normals[..., None])[..., 0]
    probs = np.exp(AtomLogProbs(x, betas)).mean(axis=0)
    return probs / probs.sum()


def PredictionRule(base_prob, beta_probs, mass):
    # type: (np.ndarray, np.ndarray, float) -> np.ndarray
    """Combines P(. | F_theta, x) with the logit probabilities of n betas.

    |beta_probs| is n x J. With n = 0 the result is |base_prob| itself.
    """
    if not mass > 0.0:
        raise InvalidInputError('mass parameter must be positive')
    base_prob = np.asarray(base_prob, dtype=float)
    beta_probs = np.asarray(beta_probs, dtype=float).reshape(
        -1, base_prob.shape[0])
    n = beta_probs.shape[0]
    if n == 0:
        return base_prob.copy()
    return (mass * base_prob + beta_probs.sum(axis=0)) / (mass + n)


def PredictiveEstimate(theta, betas, x, mass, crn=None):
    # type: (Tuple[np.ndarray, np.ndarray], np.ndarray, np.ndarray, float, Optional[CommonRandomNumbers]) -> np.ndarray  # noqa: E501
    """E[P({j} | G, x) | theta, beta_1..beta_n] under the Dirichlet process.

    P({j} | F_theta, x) is integrated with |crn|; by default with
    DEFAULT_PREDICTIVE_DRAWS draws from seed 0.
    """
    mu, tau = theta
    mu = np.asarray(mu, dtype=float)
    x = AsCovariateMatrix(x)
    if crn is None:
        crn = CommonRandomNumbers(0, mu.shape[0])
    chol = Cholesky(tau, what='tau', error=NumericalError)
    base = NormalMixtureChoiceProb(x, np.ones(1), mu[None, :], chol[None],
                                   crn)
    betas = np.asarray(betas, dtype=float).reshape(-1, mu.shape[0])
    beta_probs = np.exp(AtomLogProbs(x, betas)) if betas.shape[0] else \
        np.zeros((0, x.shape[0]))
    probs = PredictionRule(base, beta_probs, mass)
    return probs / probs.sum()


def StatePluginChoiceProb(state, x, crn):
    """P({j} | G, x) for a stored full state of any sampler."""
    if 'atoms' in state:
        return MixtureChoiceProb(
            x, MixingDistribution(state['weights'], state['atoms']))
    chols = np.linalg.cholesky(state['covariances'])
    return NormalMixtureChoiceProb(x, state['weights'], state['means'], chols,
                                   crn)


def PosteriorMeanChoiceProb(trace, x):
    # type: (Trace, np.ndarray) -> Tuple[Optional[np.ndarray], np.ndarray]
    """Posterior mean of P({j} | x) from a trace.

    Returns (prediction_rule, plugin). The prediction-rule estimate is None
    for traces that do not carry one. |x| must be one of the trace's
    registered points unless the trace stores full states.
    """
    assert isinstance(trace, Trace)
    trace.CheckNotEmpty()
    x = AsCovariateMatrix(x)
    index = trace.PointIndex(x)
    if index is not None and trace.plugin:
        plugin = trace.PluginProbs()[:, index].mean(axis=0)
        predictive = trace.PredictiveProbs()
        rule = None if predictive is None else \
            predictive[:, index].mean(axis=0)
        return _Normalised(rule), _Normalised(plugin)

    if not trace.states:
        raise InvalidInputError(
            'x={} is not a registered point and the trace has no stored '
            'states'.format(x.reshape(-1).tolist()))
    crn = CommonRandomNumbers(trace.seed, x.shape[1], trace.predictive_draws)
    plugin = np.mean([StatePluginChoiceProb(s, x, crn) for s in trace.states],
                     axis=0)
    rule = None
    if all('classes' in s and 'mu' in s for s in trace.states):
        rule = np.mean([
            PredictiveEstimate((s['mu'], s['tau']),
                               s['atoms'][s['classes']], x, trace.mass, crn)
            for s in trace.states
        ],
                       axis=0)
    return _Normalised(rule), _Normalised(plugin)


def _Normalised(probs):
    if probs is None:
        return None
    return probs / probs.sum()


def _SurfaceProbs(points, betas, weights):
    u = np.einsum('gjd,kd->gkj', points, betas)
    probs = np.einsum('k,gkj->gj', weights,
                      np.exp(u - logsumexp(u, axis=2, keepdims=True)))
    return probs / probs.sum(axis=1, keepdims=True)


def PluginSurface(state, points, crn):
    # type: (Dict[str, np.ndarray], np.ndarray, CommonRandomNumbers) -> np.ndarray  # noqa: E501
    """StatePluginChoiceProb at every row of a G x J x d array of points."""
    points = np.asarray(points, dtype=float)
    if 'atoms' in state:
        return _SurfaceProbs(points, state['atoms'], state['weights'])
    weights = np.asarray(state['weights'], dtype=float)
    cumulative = np.cumsum(weights)
    components = np.minimum(
        np.searchsorted(cumulative, crn.uniforms * cumulative[-1],
                        side='right'), weights.shape[0] - 1)
    chols = np.linalg.cholesky(state['covariances'])
    betas = state['means'][components] + np.matmul(
        chols[components], crn.normals[..., None])[..., 0]
    return _SurfaceProbs(points, betas, np.full(crn.Draws(),
                                                1.0 / crn.Draws()))


def PredictiveSurface(state, points, crn, mass):
    # type: (Dict[str, np.ndarray], np.ndarray, CommonRandomNumbers, float) -> np.ndarray  # noqa: E501
    """PredictiveEstimate at every row of a G x J x d array of points."""
    points = np.asarray(points, dtype=float)
    base = PluginSurface(
        {
            'weights': np.ones(1),
            'means': state['mu'][None, :],
            'covariances': state['tau'][None, :, :],
        }, points, crn)
    betas = state['atoms'][state['classes']]
    n = betas.shape[0]
    if n == 0:
        return base
    u = np.einsum('gjd,id->gij', points, betas)
    beta_probs = np.exp(u - logsumexp(u, axis=2, keepdims=True)).sum(axis=1)
    probs = (mass * base + beta_probs) / (mass + n)
    return probs / probs.sum(axis=1, keepdims=True)


def PosteriorMeanSurface(trace, points, crn=None):
    # type: (Trace, np.ndarray, Optional[CommonRandomNumbers]) -> Tuple[Optional[np.ndarray], np.ndarray]  # noqa: E501
    """PosteriorMeanChoiceProb over many points from a trace's stored states.

    Returns (prediction_rule, plugin) as G x J arrays.
    """
    assert isinstance(trace, Trace)
    if not trace.states:
        raise EmptyTraceError('trace has no stored states')
    points = np.asarray(points, dtype=float)
    if crn is None:
        crn = CommonRandomNumbers(trace.seed, points.shape[2],
                                  trace.predictive_draws)
    plugin = np.mean([PluginSurface(s, points, crn) for s in trace.states],
                     axis=0)
    rule = None
    if all('classes' in s and 'mu' in s for s in trace.states):
        rule = np.mean([
            PredictiveSurface(s, points, crn, trace.mass)
            for s in trace.states
        ],
                       axis=0)
    return rule, plugin
