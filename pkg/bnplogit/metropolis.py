# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Random-walk Metropolis-Hastings for the non-conjugate coefficient draws.

Targets are densities proportional to phi(beta | mu, tau) times a product of
logit likelihoods. Acceptance is decided on log-density differences only.
"""

import logging
import math

import numpy as np

from .messages import MhConfig
from .model import NumericalError
from .random_variates import RngStream

from typing import Callable, Optional, Tuple  # noqa: F401

# Adapted proposal scales never go below this.
MIN_SCALE = 1e-6

# A proposal covariance whose smallest eigenvalue is below this is replaced by
# the identity.
MIN_PROPOSAL_EIGENVALUE = 1e-10


def ProposalCholesky(cov):
    # type: (np.ndarray) -> np.ndarray
    """Cholesky factor of a proposal covariance, or I when it is degenerate."""
    cov = np.asarray(cov, dtype=float)
    if np.all(np.isfinite(cov)) and \
            np.linalg.eigvalsh(cov).min() >= MIN_PROPOSAL_EIGENVALUE:
        return np.linalg.cholesky(cov)
    logging.getLogger('bnplogit').warning(
        'near-singular proposal covariance; falling back to the identity')
    return np.eye(cov.shape[0])


def ProposalCholeskyStack(covs):
    # type: (np.ndarray) -> np.ndarray
    """ProposalCholesky applied to each matrix of a K x d x d stack."""
    covs = np.asarray(covs, dtype=float)
    eig_min = np.linalg.eigvalsh(covs).min(axis=1)
    good = np.isfinite(eig_min) & (eig_min >= MIN_PROPOSAL_EIGENVALUE)
    chols = np.broadcast_to(np.eye(covs.shape[1]), covs.shape).copy()
    if np.any(good):
        chols[good] = np.linalg.cholesky(covs[good])
    if not np.all(good):
        logging.getLogger('bnplogit').warning(
            '%d near-singular proposal covariances replaced by the identity',
            int(np.sum(~good)))
    return chols


def MetropolisAccept(log_ratio, rng):
    # type: (float, RngStream) -> bool
    """Accepts with probability min(1, exp(log_ratio))."""
    return bool(math.log(rng.OpenUniform()) < log_ratio)


def MhUpdate(current, log_target, proposal_cov, cfg, rng, scale=None):
    # type: (np.ndarray, Callable[[np.ndarray], float], np.ndarray, MhConfig, RngStream, Optional[float]) -> Tuple[np.ndarray, int]  # noqa: E501
    """Runs cfg.steps_per_update random-walk steps from |current|.

    Proposals are beta + scale * chol(proposal_cov) z with z standard normal;
    |scale| defaults to cfg.proposal_scale. Returns the final state and the
    number of accepted proposals.
    """
    assert isinstance(cfg, MhConfig)
    scale = cfg.proposal_scale if scale is None else scale
    state = np.array(current, dtype=float)
    chol = ProposalCholesky(proposal_cov)
    log_current = log_target(state)
    if not np.isfinite(log_current):
        raise NumericalError(
            'log target is {} at the current state {}'.format(
                log_current, state))
    accepted = 0
    for _ in range(cfg.steps_per_update):
        proposal = state + scale * chol.dot(rng.Normal(state.shape[0]))
        log_proposal = log_target(proposal)
        if MetropolisAccept(log_proposal - log_current, rng):
            state = proposal
            log_current = log_proposal
            accepted += 1
    return state, accepted


def MhUpdateBatch(current, log_target, proposal_chols, scale, cfg, rng):
    # type: (np.ndarray, Callable[[np.ndarray], np.ndarray], np.ndarray, float, MhConfig, RngStream) -> Tuple[np.ndarray, np.ndarray]  # noqa: E501
    """MhUpdate for n independent targets at once.

    |current| is n x d, |log_target| maps an n x d array to the n log
    densities (target i only depends on row i) and |proposal_chols| is an
    n x d x d stack of proposal Cholesky factors. Returns the new states and
    per-row acceptance counts.
    """
    assert isinstance(cfg, MhConfig)
    state = np.array(current, dtype=float)
    n, d = state.shape
    accepted = np.zeros(n, dtype=int)
    if n == 0:
        return state, accepted
    log_current = log_target(state)
    if not np.all(np.isfinite(log_current)):
        raise NumericalError('log target is not finite at {} current states'.
                             format(int(np.sum(~np.isfinite(log_current)))))
    for _ in range(cfg.steps_per_update):
        step = np.matmul(proposal_chols, rng.Normal((n, d))[..., None])[..., 0]
        proposal = state + scale * step
        log_proposal = log_target(proposal)
        with np.errstate(invalid='ignore'):
            accept = np.log(rng.OpenUniform(n)) < log_proposal - log_current
        state[accept] = proposal[accept]
        log_current[accept] = log_proposal[accept]
        accepted += accept
    return state, accepted


def AdaptScale(scale, acceptance_rate, cfg):
    # type: (float, float, MhConfig) -> float
    """Multiplicative adjustment of the proposal scale toward the target rate.

    log s' = log s + gain * (rate - target), floored at MIN_SCALE. Only called
    during burn-in; returns |scale| unchanged when adaptation is off.
    """
    assert isinstance(cfg, MhConfig)
    if not cfg.adapt:
        return scale
    adjusted = scale * math.exp(cfg.adaptation_gain *
                                (acceptance_rate - cfg.target_acceptance))
    return max(MIN_SCALE, adjusted)
