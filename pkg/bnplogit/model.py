# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Multinomial logit kernel and the choice data it is evaluated on.

Choices are 1-based at every public boundary (an observed choice is in
{1, ..., J}) and converted to 0-based column indices exactly once, when a
dataset is built. Covariates for one choice situation are a J x d matrix whose
row j holds x_j, the covariate vector of alternative j.

All likelihood arithmetic is done in the log domain.
"""

import numpy as np
from scipy.special import logsumexp

from typing import List, Optional, Sequence  # noqa: F401

# Tolerance used when checking that a probability vector sums to one.
SIMPLEX_TOLERANCE = 1e-12


class InvalidInputError(Exception):
    """Input data or parameters violate a documented precondition."""
    pass


class NumericalError(Exception):
    """A computation that must be finite produced a non-finite result."""
    pass


def AsCovariateMatrix(x):
    # type: (Sequence) -> np.ndarray
    """Returns |x| as a finite float J x d array with J >= 2 and d >= 1."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise InvalidInputError(
            'covariate matrix must be two dimensional, got shape {}'.format(
                x.shape))
    if x.shape[0] < 2 or x.shape[1] < 1:
        raise InvalidInputError(
            'covariate matrix needs J >= 2 rows and d >= 1 columns, got {}'.
            format(x.shape))
    if not np.all(np.isfinite(x)):
        raise InvalidInputError('covariate matrix has non-finite entries')
    return x


def CovariatesFromFlat(flat, num_alternatives, dimension):
    # type: (Sequence[float], int, int) -> np.ndarray
    """Unflattens an alternative-major covariate vector.

    (x_11, ..., x_1d, x_21, ..., x_Jd) becomes the J x d matrix whose row j is
    x_j. This is the layout of the dataset CSV columns and of registered
    evaluation points.
    """
    flat = np.asarray(flat, dtype=float)
    if flat.size != num_alternatives * dimension:
        raise InvalidInputError(
            'expected {} covariates (J={}, d={}), got {}'.format(
                num_alternatives * dimension, num_alternatives, dimension,
                flat.size))
    return AsCovariateMatrix(flat.reshape(num_alternatives, dimension))


def IsSimplex(p, tolerance=SIMPLEX_TOLERANCE):
    # type: (np.ndarray, float) -> bool
    p = np.asarray(p, dtype=float)
    return bool(
        np.all(p >= 0.0) and np.all(p <= 1.0) and
        abs(p.sum() - 1.0) <= tolerance)


def MnlLogProb(x, beta):
    # type: (np.ndarray, np.ndarray) -> np.ndarray
    """Log choice probabilities of the multinomial logit at coefficient |beta|.

    Computed as u_j - logsumexp(u) with u_j = x_j'beta, so that utilities of
    several hundred in magnitude do not overflow.
    """
    x = AsCovariateMatrix(x)
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (x.shape[1], ):
        raise InvalidInputError('beta has shape {}, expected ({},)'.format(
            beta.shape, x.shape[1]))
    u = x.dot(beta)
    if not np.all(np.isfinite(u)):
        raise InvalidInputError('non-finite utility for beta={}'.format(beta))
    return u - logsumexp(u)


def MnlProb(x, beta):
    # type: (np.ndarray, np.ndarray) -> np.ndarray
    """Multinomial logit choice probabilities exp(x_j'b) / sum_l exp(x_l'b).

    >>> x = [[1.0, -0.9], [1.0, 0.2], [1.0, 0.9]]
    >>> [round(float(v), 6) for v in MnlProb(x, [-5.0, 5.0])]
    [0.00012, 0.029309, 0.970571]
    """
    return np.exp(MnlLogProb(x, beta))


def AtomLogProbs(x, atoms):
    # type: (np.ndarray, np.ndarray) -> np.ndarray
    """Log choice probabilities at |x| for every row of |atoms|.

    Returns a K x J array; row k is MnlLogProb(x, atoms[k]).
    """
    u = np.asarray(atoms, dtype=float).dot(np.asarray(x, dtype=float).T)
    if not np.all(np.isfinite(u)):
        raise InvalidInputError('non-finite utility')
    return u - logsumexp(u, axis=1, keepdims=True)


class MixingDistribution(object):
    """A discrete mixing distribution sum_k p_k delta_{Z_k}.

    Weights must be nonnegative and sum to one within SIMPLEX_TOLERANCE.
    """
    def __init__(self, weights, atoms):
        # type: (Sequence[float], Sequence[Sequence[float]]) -> None
        weights = np.asarray(weights, dtype=float)
        atoms = np.asarray(atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms.reshape(len(weights), -1)
        if weights.ndim != 1 or atoms.ndim != 2 or \
                atoms.shape[0] != weights.shape[0]:
            raise InvalidInputError(
                'weights {} and atoms {} have incompatible shapes'.format(
                    weights.shape, atoms.shape))
        if np.any(weights < 0.0) or not np.all(np.isfinite(weights)):
            raise InvalidInputError('mixing weights must be nonnegative')
        if abs(weights.sum() - 1.0) > SIMPLEX_TOLERANCE:
            raise InvalidInputError(
                'mixing weights sum to {!r}, not 1'.format(weights.sum()))
        if not np.all(np.isfinite(atoms)):
            raise InvalidInputError('mixing atoms must be finite')
        self.weights = weights  # type: np.ndarray
        self.atoms = atoms  # type: np.ndarray

    def __len__(self):
        return self.weights.shape[0]

    def Dimension(self):
        # type: () -> int
        return self.atoms.shape[1]


def MixtureChoiceProb(x, mixing):
    # type: (np.ndarray, MixingDistribution) -> np.ndarray
    """Choice probabilities at |x| averaged over a discrete mixing distribution.

    The result is sum_k p_k MnlProb(x, Z_k).
    """
    assert isinstance(mixing, MixingDistribution)
    x = AsCovariateMatrix(x)
    if mixing.Dimension() != x.shape[1]:
        raise InvalidInputError('atoms have dimension {}, covariates {}'.format(
            mixing.Dimension(), x.shape[1]))
    probs = mixing.weights.dot(np.exp(AtomLogProbs(x, mixing.atoms)))
    # Weight-averaging can drift from the simplex by a few ulps.
    return probs / probs.sum()


class Observation(object):
    """One individual's single observed choice."""
    def __init__(self, id, choice, covariates):
        # type: (int, int, np.ndarray) -> None
        self.id = id
        self.covariates = AsCovariateMatrix(covariates)
        self.choice = int(choice)
        if not 1 <= self.choice <= self.covariates.shape[0]:
            raise InvalidInputError(
                'choice {} of individual {} is not in 1..{}'.format(
                    choice, id, self.covariates.shape[0]))


class PanelObservation(object):
    """One individual's sequence of T_i >= 1 choices sharing one beta."""
    def __init__(self, id, choices, covariates):
        # type: (int, Sequence[int], Sequence[np.ndarray]) -> None
        self.id = id
        self.choices = [int(c) for c in choices]  # type: List[int]
        self.covariates = [AsCovariateMatrix(x) for x in covariates
                           ]  # type: List[np.ndarray]
        if len(self.choices) != len(self.covariates):
            raise InvalidInputError(
                'individual {} has {} choices but {} covariate matrices'.format(
                    id, len(self.choices), len(self.covariates)))
        if not self.choices:
            raise InvalidInputError(
                'individual {} has no choices'.format(id))
        shapes = set(x.shape for x in self.covariates)
        if len(shapes) != 1:
            raise InvalidInputError(
                'individual {} has covariates of shapes {}'.format(
                    id, sorted(shapes)))
        num_alternatives = self.covariates[0].shape[0]
        for t, c in enumerate(self.choices):
            if not 1 <= c <= num_alternatives:
                raise InvalidInputError(
                    'choice {} of individual {} at t={} is not in 1..{}'.format(
                        c, id, t + 1, num_alternatives))

    def Periods(self):
        # type: () -> int
        return len(self.choices)


def PanelLogLikelihood(obs, beta):
    # type: (PanelObservation, np.ndarray) -> float
    """Log of the product of logit probabilities of the observed choices.

    >>> obs = PanelObservation(1, [1, 2], [[[0.0], [0.0]], [[0.0], [0.0]]])
    >>> round(PanelLogLikelihood(obs, [3.0]), 6)
    -1.386294
    """
    assert isinstance(obs, PanelObservation)
    return float(
        sum(
            MnlLogProb(x, beta)[c - 1]
            for x, c in zip(obs.covariates, obs.choices)))


class ChoiceDataset(object):
    """Non-panel data: one choice per individual.

    Stored as an n x J x d covariate array and a vector of 0-based choices so
    that likelihoods for every individual and every atom vectorise.
    """
    def __init__(self, observations, num_alternatives=None, dimension=None):
        # type: (Sequence[Observation], Optional[int], Optional[int]) -> None
        observations = list(observations)
        if observations:
            num_alternatives, dimension = observations[0].covariates.shape
        if num_alternatives is None or dimension is None:
            raise InvalidInputError(
                'an empty dataset needs explicit num_alternatives and '
                'dimension')
        covariates = np.zeros((len(observations), num_alternatives,
                               dimension))
        choices = np.zeros(len(observations), dtype=int)
        for i, obs in enumerate(observations):
            assert isinstance(obs, Observation)
            if obs.covariates.shape != (num_alternatives, dimension):
                raise InvalidInputError(
                    'observation {} has covariates of shape {}, expected '
                    '({}, {})'.format(obs.id, obs.covariates.shape,
                                      num_alternatives, dimension))
            covariates[i] = obs.covariates
            choices[i] = obs.choice - 1
        self.ids = [obs.id for obs in observations]  # type: List[int]
        self.covariates = covariates  # type: np.ndarray
        self.choices = choices  # type: np.ndarray
        self.num_alternatives = int(num_alternatives)
        self.dimension = int(dimension)

    @staticmethod
    def FromArrays(ids, choices, covariates):
        # type: (Sequence[int], Sequence[int], np.ndarray) -> ChoiceDataset
        """Builds a dataset from 1-based |choices| and an n x J x d array."""
        covariates = np.asarray(covariates, dtype=float)
        return ChoiceDataset([
            Observation(i, c, x) for i, c, x in zip(ids, choices, covariates)
        ], covariates.shape[1], covariates.shape[2])

    def __len__(self):
        return len(self.ids)

    def GetObservation(self, index):
        # type: (int) -> Observation
        return Observation(self.ids[index], self.choices[index] + 1,
                           self.covariates[index])

    def LogLikelihoodMatrix(self, atoms):
        # type: (np.ndarray) -> np.ndarray
        """Returns the n x K matrix of log L(Y_i, Z_k)."""
        u = np.einsum('ijd,kd->ikj', self.covariates, atoms)
        chosen = u[np.arange(len(self)), :, self.choices]
        return chosen - logsumexp(u, axis=2)

    def LogLikelihoods(self, betas, members=None):
        # type: (np.ndarray, Optional[np.ndarray]) -> np.ndarray
        """Returns log L(Y_i, beta_i) for each row of |betas|.

        |members| optionally selects the individuals the rows refer to.
        """
        covariates = self.covariates
        choices = self.choices
        if members is not None:
            covariates = covariates[members]
            choices = choices[members]
        u = np.einsum('ijd,id->ij', covariates, betas)
        return u[np.arange(u.shape[0]), choices] - logsumexp(u, axis=1)

    def MemberLogLikelihood(self, members, beta):
        # type: (np.ndarray, np.ndarray) -> float
        """Returns sum_{i in members} log L(Y_i, beta) for a shared |beta|."""
        u = self.covariates[members].dot(beta)
        chosen = u[np.arange(u.shape[0]), self.choices[members]]
        return float(np.sum(chosen - logsumexp(u, axis=1)))


class PanelDataset(object):
    """Panel data: T_i >= 1 choices per individual.

    Unbalanced panels are padded to T = max T_i; |mask| marks real periods and
    padded periods contribute nothing to any likelihood.
    """
    def __init__(self, observations, num_alternatives=None, dimension=None):
        # type: (Sequence[PanelObservation], Optional[int], Optional[int]) -> None  # noqa: E501
        observations = list(observations)
        if observations:
            num_alternatives, dimension = observations[0].covariates[0].shape
        if num_alternatives is None or dimension is None:
            raise InvalidInputError(
                'an empty dataset needs explicit num_alternatives and '
                'dimension')
        periods = max([obs.Periods() for obs in observations] or [0])
        covariates = np.zeros(
            (len(observations), periods, num_alternatives, dimension))
        choices = np.zeros((len(observations), periods), dtype=int)
        mask = np.zeros((len(observations), periods), dtype=bool)
        for i, obs in enumerate(observations):
            assert isinstance(obs, PanelObservation)
            if obs.covariates[0].shape != (num_alternatives, dimension):
                raise InvalidInputError(
                    'observation {} has covariates of shape {}, expected '
                    '({}, {})'.format(obs.id, obs.covariates[0].shape,
                                      num_alternatives, dimension))
            t_i = obs.Periods()
            covariates[i, :t_i] = np.asarray(obs.covariates)
            choices[i, :t_i] = np.asarray(obs.choices) - 1
            mask[i, :t_i] = True
        self.ids = [obs.id for obs in observations]  # type: List[int]
        self.covariates = covariates  # type: np.ndarray
        self.choices = choices  # type: np.ndarray
        self.mask = mask  # type: np.ndarray
        self.num_alternatives = int(num_alternatives)
        self.dimension = int(dimension)

    def __len__(self):
        return len(self.ids)

    def Periods(self, index):
        # type: (int) -> int
        return int(self.mask[index].sum())

    def GetObservation(self, index):
        # type: (int) -> PanelObservation
        t_i = self.Periods(index)
        return PanelObservation(self.ids[index],
                                self.choices[index, :t_i] + 1,
                                list(self.covariates[index, :t_i]))

    def LogLikelihoods(self, betas):
        # type: (np.ndarray) -> np.ndarray
        """Returns the panel log-likelihood of each individual at betas[i]."""
        u = np.einsum('itjd,id->itj', self.covariates, betas)
        n, periods = self.choices.shape
        chosen = u[np.arange(n)[:, None], np.arange(periods)[None, :],
                   self.choices]
        per_period = chosen - logsumexp(u, axis=2)
        return np.where(self.mask, per_period, 0.0).sum(axis=1)


# For running doctests.
if __name__ == "__main__":
    import doctest
    doctest.testmod()
