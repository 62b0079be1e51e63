# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Per-iteration record of a sampler run.

In the default summary mode a Trace keeps, for every retained iteration, the
choice probabilities at the registered covariate points, a few draws of beta
from the current mixing distribution, and scalar diagnostics. Full states are
kept only when RunConfig.store_states is set.
"""

import numpy as np

from .model import IsSimplex, NumericalError

from typing import Any, Dict, List, Optional  # noqa: F401

# Stored probability vectors must sum to one within this.
_STORED_SIMPLEX_TOLERANCE = 1e-10


class EmptyTraceError(Exception):
    """An estimator was requested from a trace with no retained iterations."""
    pass


class Trace(object):
    def __init__(self, model, points, seed=0, mass=1.0,
                 predictive_draws=10000):
        # type: (str, np.ndarray, int, float, int) -> None
        self.model = model
        self.points = np.asarray(points, dtype=float)  # type: np.ndarray
        self.seed = seed
        self.mass = mass
        self.predictive_draws = predictive_draws

        # Retained-iteration records. |plugin| holds P(j | G^(m), x) at each
        # registered point and |predictive| the prediction-rule estimate
        # E[P(j | G, x) | theta^(m), beta^(m)] where a sampler provides one.
        self.iterations = []  # type: List[int]
        self.plugin = []  # type: List[np.ndarray]
        self.predictive = []  # type: List[np.ndarray]
        self.occupied = []  # type: List[int]
        self.beta_draws = []  # type: List[np.ndarray]
        self.sweep_acceptance = []  # type: List[Optional[float]]
        self.states = []  # type: List[Dict[str, Any]]

        # Metropolis-Hastings bookkeeping, split by phase.
        self.accepted = {'burnin': 0, 'sampling': 0}  # type: Dict[str, int]
        self.proposed = {'burnin': 0, 'sampling': 0}  # type: Dict[str, int]
        self.final_scale = None  # type: Optional[float]

    def __len__(self):
        return len(self.iterations)

    def Append(self,
               iteration,
               plugin,
               predictive=None,
               occupied=0,
               beta_draws=None,
               state=None):
        plugin = np.asarray(plugin, dtype=float)
        for probs in [plugin] + ([] if predictive is None else [predictive]):
            for p in np.asarray(probs):
                if not IsSimplex(p, _STORED_SIMPLEX_TOLERANCE):
                    raise NumericalError(
                        'iteration {} produced invalid choice probabilities '
                        '{}'.format(iteration, p))
        self.iterations.append(iteration)
        self.plugin.append(plugin)
        if predictive is not None:
            self.predictive.append(np.asarray(predictive, dtype=float))
        self.occupied.append(int(occupied))
        if beta_draws is not None:
            self.beta_draws.append(np.asarray(beta_draws, dtype=float))
        if state is not None:
            self.states.append(state)

    def RecordAcceptance(self, accepted, proposed, burnin):
        # type: (int, int, bool) -> None
        phase = 'burnin' if burnin else 'sampling'
        self.accepted[phase] += int(accepted)
        self.proposed[phase] += int(proposed)

    def AcceptanceRate(self, phase='sampling'):
        # type: (str) -> Optional[float]
        if self.proposed[phase] == 0:
            return None
        return self.accepted[phase] / float(self.proposed[phase])

    def HasPredictive(self):
        # type: () -> bool
        return len(self.predictive) > 0 and \
            len(self.predictive) == len(self.plugin)

    def PluginProbs(self):
        # type: () -> np.ndarray
        """M x P x J array of plug-in choice probabilities."""
        if not self.plugin:
            return np.zeros((0, ) + self.points.shape[:2])
        return np.array(self.plugin)

    def PredictiveProbs(self):
        # type: () -> Optional[np.ndarray]
        """M x P x J array of prediction-rule estimates, if recorded."""
        if not self.HasPredictive():
            return None
        return np.array(self.predictive)

    def BetaDraws(self):
        # type: () -> np.ndarray
        """All retained draws of beta from the mixing distribution."""
        if not self.beta_draws:
            return np.zeros((0, self.points.shape[2] if self.points.ndim == 3
                             else 0))
        return np.concatenate(self.beta_draws, axis=0)

    def PointIndex(self, x):
        # type: (np.ndarray) -> Optional[int]
        """Index of the registered point equal to |x|, or None."""
        x = np.asarray(x, dtype=float)
        for index, point in enumerate(self.points):
            if point.shape == x.shape and np.allclose(point, x, rtol=0.0,
                                                      atol=1e-12):
                return index
        return None

    def CheckNotEmpty(self):
        if len(self) == 0:
            raise EmptyTraceError('trace of model {} has no retained '
                                  'iterations'.format(self.model))

    @staticmethod
    def Concatenate(traces):
        # type: (List[Trace]) -> Trace
        """Pools the retained draws of several chains into one trace."""
        assert traces
        first = traces[0]
        pooled = Trace(first.model, first.points, first.seed, first.mass,
                       first.predictive_draws)
        for t in traces:
            assert isinstance(t, Trace)
            pooled.iterations.extend(t.iterations)
            pooled.plugin.extend(t.plugin)
            pooled.predictive.extend(t.predictive)
            pooled.occupied.extend(t.occupied)
            pooled.beta_draws.extend(t.beta_draws)
            pooled.sweep_acceptance.extend(t.sweep_acceptance)
            pooled.states.extend(t.states)
            for phase in ('burnin', 'sampling'):
                pooled.accepted[phase] += t.accepted[phase]
                pooled.proposed[phase] += t.proposed[phase]
        return pooled
