# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Gaussian mixed logit, the parametric baseline.

beta_i ~ N(mu, tau) independently with a Normal-inverse-Wishart prior on
(mu, tau), fitted by Metropolis-within-Gibbs. Works on non-panel and panel
data alike; the truncation level and mass in the configuration are ignored.
"""

import numpy as np

from .estimators import CommonRandomNumbers, NormalMixtureChoiceProb
from .gibbs import DriveChain
from .messages import ModelKind, RunConfig
from .metropolis import MhUpdateBatch, ProposalCholesky
from .model import ChoiceDataset, NumericalError, PanelDataset
from .niw import DrawThetaPosterior
from .random_variates import BETA_DRAW_STREAM, Cholesky, MvnLogDensity, \
    RngStream, SampleMvnFromCholesky, SampleNiw
from .trace import Trace

from typing import Any, Dict, Optional, Union  # noqa: F401

AnyDataset = Union[ChoiceDataset, PanelDataset]


class GmlState(object):
    def __init__(self, mu, tau, betas):
        self.mu = np.asarray(mu, dtype=float)  # type: np.ndarray
        self.tau = np.asarray(tau, dtype=float)  # type: np.ndarray
        self.betas = np.asarray(betas, dtype=float)  # type: np.ndarray
        self.accepted = 0
        self.proposed = 0

    def NumOccupied(self):
        # type: () -> int
        return 1

    def Cholesky(self):
        # type: () -> np.ndarray
        return Cholesky(self.tau, what='tau', error=NumericalError)

    def AsDict(self):
        # type: () -> Dict[str, Any]
        return {
            'weights': np.ones(1),
            'means': self.mu[None, :].copy(),
            'covariances': self.tau[None, :, :].copy(),
            'betas': self.betas.copy(),
        }


def GmlSweep(state, data, cfg, rng, scale=None):
    # type: (GmlState, AnyDataset, RunConfig, RngStream, Optional[float]) -> GmlState  # noqa: E501
    """beta_i | mu, tau, Y_i for every i, then (mu, tau) | beta."""
    assert isinstance(state, GmlState)
    scale = cfg.mh.proposal_scale if scale is None else scale
    n = len(data)
    chol = state.Cholesky()

    def log_target(b):
        return data.LogLikelihoods(b) + MvnLogDensity(b, state.mu, chol)

    betas, moved = MhUpdateBatch(
        state.betas, log_target,
        np.broadcast_to(ProposalCholesky(state.tau),
                        (n, cfg.dimension, cfg.dimension)), scale, cfg.mh,
        rng)
    mu, tau = DrawThetaPosterior(cfg.niw, betas, rng)
    successor = GmlState(mu, tau, betas)
    successor.accepted = int(moved.sum())
    successor.proposed = n * cfg.mh.steps_per_update
    return successor


def RunGmlChain(data, cfg):
    # type: (AnyDataset, RunConfig) -> Trace
    """Runs the Gaussian mixed logit sampler from a prior initialisation.

    Choice probabilities at the registered points integrate the logit against
    N(mu^(m), tau^(m)) with cfg.predictive_draws common random numbers.
    """
    assert isinstance(data, (ChoiceDataset, PanelDataset))
    cfg.Validate()
    cfg.ValidateAgainst(data)
    rng = RngStream(cfg.seed)
    points = cfg.Points()
    crn = CommonRandomNumbers(cfg.seed, cfg.dimension, cfg.predictive_draws)
    beta_rng = rng.Spawn(BETA_DRAW_STREAM)
    trace = Trace(ModelKind.GML, points, cfg.seed, cfg.mass,
                  cfg.predictive_draws)

    mu, tau = SampleNiw(cfg.niw, rng)
    chol = Cholesky(tau, what='tau', error=NumericalError)
    initial = GmlState(mu, tau,
                       SampleMvnFromCholesky(mu, chol, rng, size=len(data)))

    def sweep(state, scale):
        return GmlSweep(state, data, cfg, rng, scale)

    def record(iteration, state):
        chol = state.Cholesky()
        plugin = [
            NormalMixtureChoiceProb(x, np.ones(1), state.mu[None, :],
                                    chol[None], crn) for x in points
        ]
        draws = SampleMvnFromCholesky(state.mu, chol, beta_rng,
                                      size=cfg.beta_draws)
        trace.Append(iteration,
                     plugin,
                     occupied=1,
                     beta_draws=draws,
                     state=state.AsDict() if cfg.store_states else None)

    DriveChain(initial, sweep, record, cfg, trace,
               'gml chain {}'.format(cfg.seed))
    return trace
