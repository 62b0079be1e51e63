# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Blocked Gibbs sampler for mixed logit on panel data.

Here the Dirichlet process mixes over normal distributions: atom k is a pair
Z_k = (mu_k, tau_k), individual i belongs to component K_i, and beta_i ~
N(mu_{K_i}, tau_{K_i}) is kept as its own latent vector. The mixing density of
beta is therefore the continuous sum_k p_k phi(beta | mu_k, tau_k). One sweep
draws K | p, Z, beta; p | K; Z | K, beta; and beta | K, Z, Y.
"""

import numpy as np

from .estimators import CommonRandomNumbers, NormalMixtureChoiceProb
from .gibbs import ClassificationWeightsFromLogLikelihood, DriveChain
from .messages import ModelKind, NIWParams, RunConfig
from .metropolis import MhUpdateBatch, ProposalCholeskyStack
from .model import NumericalError, PanelDataset
from .niw import NiwPosterior
from .random_variates import BETA_DRAW_STREAM, CholeskyStack, \
    MvnLogDensityRows, MvnLogDensityStack, RngStream, \
    SampleCategoricalRows, SampleNiw, SampleNiwBatch
from .stick_breaking import ClusterCounts, DrawPriorSticks, StickVector, \
    UpdateSticksPosterior, WeightsFromSticks
from .trace import Trace

from typing import Any, Dict, Optional  # noqa: F401


class GibbsStatePanel(object):
    def __init__(self, classes, sticks, means, covariances, betas):
        # type: (np.ndarray, StickVector, np.ndarray, np.ndarray, np.ndarray) -> None  # noqa: E501
        assert isinstance(sticks, StickVector)
        self.classes = np.asarray(classes, dtype=int)  # type: np.ndarray
        self.sticks = sticks
        self.weights = WeightsFromSticks(sticks)  # type: np.ndarray
        self.means = np.asarray(means, dtype=float)  # type: np.ndarray
        self.covariances = np.asarray(covariances,
                                      dtype=float)  # type: np.ndarray
        self.betas = np.asarray(betas, dtype=float)  # type: np.ndarray
        self.accepted = 0
        self.proposed = 0

    def Counts(self):
        # type: () -> np.ndarray
        return ClusterCounts(self.classes, self.weights.shape[0])

    def NumOccupied(self):
        # type: () -> int
        return int(np.count_nonzero(self.Counts()))

    def Cholesky(self):
        # type: () -> np.ndarray
        return CholeskyStack(self.covariances, what='tau_k',
                             error=NumericalError)

    def AsDict(self):
        # type: () -> Dict[str, Any]
        return {
            'weights': self.weights.copy(),
            'means': self.means.copy(),
            'covariances': self.covariances.copy(),
            'classes': self.classes.copy(),
            'betas': self.betas.copy(),
        }


def ClassificationWeightsPanel(p, means, covariances, beta):
    # type: (np.ndarray, np.ndarray, np.ndarray, np.ndarray) -> np.ndarray
    """Unnormalised (p_k phi(beta | mu_k, tau_k))_k for one individual.

    Raises InvalidInputError if some tau_k is not positive definite.
    """
    chols = CholeskyStack(covariances, what='tau_k')
    beta = np.asarray(beta, dtype=float).reshape(1, -1)
    log_density = MvnLogDensityStack(beta, np.asarray(means, dtype=float),
                                     chols)[0]
    return ClassificationWeightsFromLogLikelihood(p, log_density)


def ClusterPosterior(prior, betas, classes, k):
    # type: (NIWParams, np.ndarray, np.ndarray, int) -> NIWParams
    """NIW posterior of component |k| given the betas assigned to it."""
    return NiwPosterior(prior, betas[np.asarray(classes) == k])


def InitialStatePanel(data, cfg, rng):
    # type: (PanelDataset, RunConfig, RngStream) -> GibbsStatePanel
    """Prior draws of V and Z, K uniform, beta_i from the prior predictive."""
    sticks = DrawPriorSticks(cfg.truncation, cfg.mass, rng)
    means, covariances = SampleNiwBatch(cfg.niw, cfg.truncation, rng)
    classes = rng.Integers(cfg.truncation, size=len(data))
    mus, taus = SampleNiwBatch(cfg.niw, len(data), rng)
    betas = mus.copy()
    if len(data):
        chols = CholeskyStack(taus, what='tau', error=NumericalError)
        z = rng.Normal((len(data), cfg.dimension))
        betas += np.matmul(chols, z[..., None])[..., 0]
    return GibbsStatePanel(classes, sticks, means, covariances, betas)


def GibbsSweepPanel(state, data, cfg, rng, scale=None):
    # type: (GibbsStatePanel, PanelDataset, RunConfig, RngStream, Optional[float]) -> GibbsStatePanel  # noqa: E501
    """One cycle of the four conditional draws for panel data.

    Each beta_i moves by random-walk Metropolis-Hastings on
    exp(panel log-likelihood) phi(beta | mu_{K_i}, tau_{K_i}), proposing with
    covariance |scale|^2 tau_{K_i}.
    """
    assert isinstance(state, GibbsStatePanel)
    assert isinstance(data, PanelDataset)
    scale = cfg.mh.proposal_scale if scale is None else scale
    truncation = state.weights.shape[0]
    n = len(data)

    # K | p, Z, beta.
    if n:
        log_density = MvnLogDensityStack(state.betas, state.means,
                                         state.Cholesky())
        classes = SampleCategoricalRows(
            ClassificationWeightsFromLogLikelihood(state.weights,
                                                   log_density), rng)
    else:
        classes = np.zeros(0, dtype=int)
    counts = ClusterCounts(classes, truncation)

    # p | K.
    sticks = UpdateSticksPosterior(counts, cfg.mass, rng)

    # Z | K, beta: prior draws for empty components.
    means = state.means.copy()
    covariances = state.covariances.copy()
    empty = np.flatnonzero(counts == 0)
    means[empty], covariances[empty] = SampleNiwBatch(cfg.niw,
                                                      empty.shape[0], rng)
    for k in np.flatnonzero(counts):
        means[k], covariances[k] = SampleNiw(
            ClusterPosterior(cfg.niw, state.betas, classes, k), rng)

    # beta | K, Z, Y.
    betas = state.betas
    if n:
        chols = CholeskyStack(covariances[classes], what='tau_k',
                              error=NumericalError)
        assigned_means = means[classes]

        def log_target(b):
            return data.LogLikelihoods(b) + MvnLogDensityRows(
                b, assigned_means, chols)

        proposal_chols = ProposalCholeskyStack(covariances)[classes]
        betas, moved = MhUpdateBatch(betas, log_target, proposal_chols,
                                     scale, cfg.mh, rng)
        accepted = int(moved.sum())
    else:
        accepted = 0

    successor = GibbsStatePanel(classes, sticks, means, covariances, betas)
    successor.accepted = accepted
    successor.proposed = n * cfg.mh.steps_per_update
    return successor


def DrawFromNormalMixing(weights, means, chols, count, rng):
    # type: (np.ndarray, np.ndarray, np.ndarray, int, RngStream) -> np.ndarray
    """|count| i.i.d. draws from sum_k weights[k] N(means[k], chols[k]^2)."""
    if count == 0:
        return np.zeros((0, means.shape[1]))
    picks = SampleCategoricalRows(
        np.broadcast_to(weights, (count, weights.shape[0])), rng)
    z = rng.Normal((count, means.shape[1]))
    return means[picks] + np.matmul(chols[picks], z[..., None])[..., 0]


def RunChainPanel(data, cfg):
    # type: (PanelDataset, RunConfig) -> Trace
    """Runs the panel sampler from a prior initialisation.

    Choice probabilities at the registered points are plug-in Monte Carlo
    integrals over the current mixing density, using cfg.predictive_draws
    common random numbers.
    """
    assert isinstance(data, PanelDataset)
    cfg.Validate()
    cfg.ValidateAgainst(data)
    rng = RngStream(cfg.seed)
    points = cfg.Points()
    crn = CommonRandomNumbers(cfg.seed, cfg.dimension, cfg.predictive_draws)
    beta_rng = rng.Spawn(BETA_DRAW_STREAM)
    trace = Trace(ModelKind.MMNL_PANEL, points, cfg.seed, cfg.mass,
                  cfg.predictive_draws)

    def sweep(state, scale):
        return GibbsSweepPanel(state, data, cfg, rng, scale)

    def record(iteration, state):
        chols = state.Cholesky()
        plugin = [
            NormalMixtureChoiceProb(x, state.weights, state.means, chols, crn)
            for x in points
        ]
        draws = DrawFromNormalMixing(state.weights, state.means, chols,
                                     cfg.beta_draws, beta_rng)
        trace.Append(iteration,
                     plugin,
                     occupied=state.NumOccupied(),
                     beta_draws=draws,
                     state=state.AsDict() if cfg.store_states else None)

    DriveChain(InitialStatePanel(data, cfg, rng), sweep, record, cfg, trace,
               'mmnl-panel chain {}'.format(cfg.seed))
    return trace
