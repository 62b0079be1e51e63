# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Blocked Gibbs sampler for mixed logit on non-panel data.

The mixing distribution is G = sum_k p_k delta_{Z_k} with truncated
stick-breaking weights and atoms drawn from F_theta = N(mu, tau). Each
individual i is linked to an atom through the classification variable K_i,
so that beta_i = Z_{K_i}. One sweep draws, in order, K | p, Z; p | K;
Z | K, theta; and theta | Z, K.

Classification indices are 0-based inside the sampler.
"""

import logging
import time

import numpy as np

from .estimators import CommonRandomNumbers, PredictiveEstimate
from .messages import ModelKind, RunConfig
from .metropolis import AdaptScale, MIN_SCALE, MhUpdateBatch, \
    ProposalCholesky
from .model import AtomLogProbs, ChoiceDataset, MixingDistribution, \
    MixtureChoiceProb, NumericalError, Observation
from .niw import DrawThetaPosterior
from .random_variates import BETA_DRAW_STREAM, Cholesky, MvnLogDensity, \
    RngStream, SampleCategoricalRows, SampleMvnFromCholesky, SampleNiw
from .stick_breaking import ClusterCounts, DrawPriorSticks, StickVector, \
    UpdateSticksPosterior, WeightsFromSticks
from .trace import Trace

from typing import Any, Callable, Dict, Optional, Tuple  # noqa: F401


class GibbsStateNP(object):
    """State of the non-panel sampler after a sweep."""
    def __init__(self, classes, sticks, atoms, mu, tau):
        # type: (np.ndarray, StickVector, np.ndarray, np.ndarray, np.ndarray) -> None  # noqa: E501
        assert isinstance(sticks, StickVector)
        self.classes = np.asarray(classes, dtype=int)  # type: np.ndarray
        self.sticks = sticks
        self.weights = WeightsFromSticks(sticks)  # type: np.ndarray
        self.atoms = np.asarray(atoms, dtype=float)  # type: np.ndarray
        self.mu = np.asarray(mu, dtype=float)  # type: np.ndarray
        self.tau = np.asarray(tau, dtype=float)  # type: np.ndarray

        # Metropolis-Hastings counts of the sweep that produced this state.
        self.accepted = 0
        self.proposed = 0

    def Theta(self):
        # type: () -> Tuple[np.ndarray, np.ndarray]
        return self.mu, self.tau

    def Betas(self):
        # type: () -> np.ndarray
        """The implied individual coefficients beta_i = Z_{K_i}."""
        return self.atoms[self.classes]

    def Counts(self):
        # type: () -> np.ndarray
        return ClusterCounts(self.classes, self.weights.shape[0])

    def NumOccupied(self):
        # type: () -> int
        return int(np.count_nonzero(self.Counts()))

    def Mixing(self):
        # type: () -> MixingDistribution
        return MixingDistribution(self.weights, self.atoms)

    def AsDict(self):
        # type: () -> Dict[str, Any]
        return {
            'weights': self.weights.copy(),
            'atoms': self.atoms.copy(),
            'mu': self.mu.copy(),
            'tau': self.tau.copy(),
            'classes': self.classes.copy(),
        }


def ClassificationWeightsFromLogLikelihood(weights, log_lik):
    # type: (np.ndarray, np.ndarray) -> np.ndarray
    """Unnormalised p_k L_k from mixture weights and log-likelihoods.

    |log_lik| is either a length-N vector or an n x N matrix. Rows are scaled
    so that their largest entry is one; components with p_k = 0 get exactly
    zero.
    """
    log_lik = np.asarray(log_lik, dtype=float)
    with np.errstate(divide='ignore'):
        log_w = np.log(np.asarray(weights, dtype=float)) + log_lik
    top = log_w.max(axis=-1, keepdims=True)
    if not np.all(np.isfinite(top)):
        raise NumericalError('classification weights are all zero')
    return np.exp(log_w - top)


def ClassificationWeights(p, atoms, obs):
    # type: (np.ndarray, np.ndarray, Observation) -> np.ndarray
    """Unnormalised (p_k L(Y_i, Z_k))_k for one individual."""
    assert isinstance(obs, Observation)
    log_lik = AtomLogProbs(obs.covariates, atoms)[:, obs.choice - 1]
    return ClassificationWeightsFromLogLikelihood(p, log_lik)


def InitialState(data, cfg, rng):
    # type: (ChoiceDataset, RunConfig, RngStream) -> GibbsStateNP
    """Prior draws of theta, V and Z; K uniform on the N components."""
    mu, tau = SampleNiw(cfg.niw, rng)
    sticks = DrawPriorSticks(cfg.truncation, cfg.mass, rng)
    chol = Cholesky(tau, what='tau', error=NumericalError)
    atoms = SampleMvnFromCholesky(mu, chol, rng, size=cfg.truncation)
    classes = rng.Integers(cfg.truncation, size=len(data))
    return GibbsStateNP(classes, sticks, atoms, mu, tau)


def GibbsSweep(state, data, cfg, rng, scale=None):
    # type: (GibbsStateNP, ChoiceDataset, RunConfig, RngStream, Optional[float]) -> GibbsStateNP  # noqa: E501
    """One full cycle of the four conditional draws.

    Occupied atoms are moved by random-walk Metropolis-Hastings on
    phi(z | mu, tau) prod_{i: K_i = k} L(Y_i, z), proposing with covariance
    |scale|^2 tau. |scale| defaults to cfg.mh.proposal_scale.
    """
    assert isinstance(state, GibbsStateNP)
    assert isinstance(data, ChoiceDataset)
    scale = cfg.mh.proposal_scale if scale is None else scale
    truncation = state.weights.shape[0]
    d = state.atoms.shape[1]

    # K | p, Z.
    if len(data):
        weights = ClassificationWeightsFromLogLikelihood(
            state.weights, data.LogLikelihoodMatrix(state.atoms))
        classes = SampleCategoricalRows(weights, rng)
    else:
        classes = np.zeros(0, dtype=int)
    counts = ClusterCounts(classes, truncation)

    # p | K.
    sticks = UpdateSticksPosterior(counts, cfg.mass, rng)

    # Z_k | K, theta for occupied k.
    atoms = state.atoms.copy()
    chol_tau = Cholesky(state.tau, what='tau', error=NumericalError)
    occupied = np.flatnonzero(counts)
    accepted = 0
    if occupied.shape[0]:
        position = np.searchsorted(occupied, classes)

        def log_target(z):
            lik = np.bincount(position,
                              weights=data.LogLikelihoods(z[position]),
                              minlength=occupied.shape[0])
            return MvnLogDensity(z, state.mu, chol_tau) + lik

        chols = np.broadcast_to(ProposalCholesky(state.tau),
                                (occupied.shape[0], d, d))
        atoms[occupied], moved = MhUpdateBatch(atoms[occupied], log_target,
                                               chols, scale, cfg.mh, rng)
        accepted = int(moved.sum())

    # theta | Z, K: one datum per distinct occupied atom. Unoccupied atoms
    # are drawn from F_theta at the new theta.
    mu, tau = DrawThetaPosterior(cfg.niw, atoms[occupied], rng)
    empty = np.flatnonzero(counts == 0)
    atoms[empty] = SampleMvnFromCholesky(
        mu, Cholesky(tau, what='tau', error=NumericalError), rng,
        size=empty.shape[0])

    successor = GibbsStateNP(classes, sticks, atoms, mu, tau)
    successor.accepted = accepted
    successor.proposed = occupied.shape[0] * cfg.mh.steps_per_update
    return successor


def DrawFromMixing(weights, atoms, count, rng):
    # type: (np.ndarray, np.ndarray, int, RngStream) -> np.ndarray
    """|count| i.i.d. draws from sum_k weights[k] delta_{atoms[k]}."""
    if count == 0:
        return np.zeros((0, atoms.shape[1]))
    picks = SampleCategoricalRows(
        np.broadcast_to(weights, (count, weights.shape[0])), rng)
    return atoms[picks]


def DriveChain(state, sweep, record, cfg, trace, label):
    # type: (Any, Callable[[Any, float], Any], Callable[[int, Any], None], RunConfig, Trace, str) -> Any  # noqa: E501
    """Runs burn-in and sampling sweeps, shared by every sampler.

    |sweep(state, scale)| returns the next state, which carries the
    Metropolis-Hastings counts of that sweep in |accepted| and |proposed|.
    |record(iteration, state)| is called for every retained iteration. The
    proposal scale adapts during burn-in only.
    """
    logger = logging.getLogger('bnplogit')
    scale = cfg.mh.proposal_scale
    total = cfg.burnin + cfg.iterations
    warned_floor = False
    started = time.time()
    logger.info('%s: starting %d burn-in and %d sampling iterations (seed %d)',
                label, cfg.burnin, cfg.iterations, cfg.seed)
    for iteration in range(total):
        burnin = iteration < cfg.burnin
        state = sweep(state, scale)
        trace.RecordAcceptance(state.accepted, state.proposed, burnin)
        if burnin and state.proposed:
            scale = AdaptScale(scale, state.accepted / float(state.proposed),
                               cfg.mh)
            if scale <= MIN_SCALE and not warned_floor:
                logger.warning('%s: proposal scale reached its floor %g',
                               label, MIN_SCALE)
                warned_floor = True
        if not burnin and (iteration - cfg.burnin + 1) % cfg.thin == 0:
            record(iteration, state)
            trace.sweep_acceptance.append(
                state.accepted / float(state.proposed) if state.proposed else
                None)
        if (iteration + 1) % cfg.report_every == 0:
            phase = 'burnin' if burnin else 'sampling'
            logger.debug('%s: iteration %d (%s), %d occupied, acceptance %s',
                         label, iteration + 1, phase,
                         state.NumOccupied(), trace.AcceptanceRate(phase))
    trace.final_scale = scale
    logger.info('%s: finished %d iterations in %.1fs, acceptance %s', label,
                total, time.time() - started, trace.AcceptanceRate())
    return state


def RunChain(data, cfg):
    # type: (ChoiceDataset, RunConfig) -> Trace
    """Runs the non-panel sampler from a prior initialisation."""
    assert isinstance(data, ChoiceDataset)
    cfg.Validate()
    cfg.ValidateAgainst(data)
    rng = RngStream(cfg.seed)
    points = cfg.Points()
    crn = CommonRandomNumbers(cfg.seed, cfg.dimension, cfg.predictive_draws)
    beta_rng = rng.Spawn(BETA_DRAW_STREAM)
    trace = Trace(ModelKind.MMNL_NONPANEL, points, cfg.seed, cfg.mass,
                  cfg.predictive_draws)

    def sweep(state, scale):
        return GibbsSweep(state, data, cfg, rng, scale)

    def record(iteration, state):
        mixing = state.Mixing()
        betas = state.Betas()
        trace.Append(
            iteration,
            [MixtureChoiceProb(x, mixing) for x in points],
            predictive=[
                PredictiveEstimate(state.Theta(), betas, x, cfg.mass, crn)
                for x in points
            ],
            occupied=state.NumOccupied(),
            beta_draws=DrawFromMixing(state.weights, state.atoms,
                                      cfg.beta_draws, beta_rng),
            state=state.AsDict() if cfg.store_states else None)

    DriveChain(InitialState(data, cfg, rng), sweep, record, cfg, trace,
               'mmnl-nonpanel chain {}'.format(cfg.seed))
    return trace
