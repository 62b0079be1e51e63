# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Random-utility data generators and their exact choice probabilities.

Each individual draws beta from a generating mixture, sees covariates drawn
uniformly from (-2, 2) for J = 3 alternatives with d = 2 attributes, and picks
the alternative with the largest utility x_j'beta + e_j, e_j standard Gumbel.
Two designs are provided:

  * non-panel: beta ~ 0.5 delta_(-5, 5) + 0.5 delta_(5, -5), one choice each;
  * panel: beta ~ 0.5 N((-5, 5), 2I) + 0.5 N((5, -5), 2I), T choices each with
    fresh covariates per period.
"""

import numpy as np

from .estimators import CommonRandomNumbers, NormalMixtureChoiceProb, \
    PluginSurface
from .model import AsCovariateMatrix, ChoiceDataset, InvalidInputError, \
    MixingDistribution, MixtureChoiceProb, PanelDataset, PanelObservation
from .random_variates import CholeskyStack, RngStream, \
    SampleCategoricalRows, SampleGumbel, TRUTH_STREAM

from typing import Callable, Optional  # noqa: F401

COVARIATE_LOW = -2.0
COVARIATE_HIGH = 2.0
NUM_ALTERNATIVES = 3
DIMENSION = 2

# Monte Carlo draws used for the true probabilities of a normal mixture.
TRUTH_DRAWS = 1000000


class GeneratingMixture(object):
    """A finite mixture of normals (or point masses) over beta.

    Components with an all-zero covariance are point masses, for which choice
    probabilities are exact.
    """
    def __init__(self, name, weights, means, covariances):
        self.name = name
        self.weights = np.asarray(weights, dtype=float)  # type: np.ndarray
        self.means = np.asarray(means, dtype=float)  # type: np.ndarray
        self.covariances = np.asarray(covariances,
                                      dtype=float)  # type: np.ndarray

    def Dimension(self):
        # type: () -> int
        return self.means.shape[1]

    def IsDiscrete(self):
        # type: () -> bool
        return not np.any(self.covariances)

    def Draw(self, count, rng):
        # type: (int, RngStream) -> np.ndarray
        """|count| i.i.d. coefficient vectors."""
        picks = SampleCategoricalRows(
            np.broadcast_to(self.weights, (count, self.weights.shape[0])),
            rng)
        betas = self.means[picks]
        if self.IsDiscrete():
            return betas
        chols = CholeskyStack(self.covariances)
        z = rng.Normal((count, self.Dimension()))
        return betas + np.matmul(chols[picks], z[..., None])[..., 0]

    @staticmethod
    def TwoPoint():
        return GeneratingMixture('two-point', [0.5, 0.5],
                                 [[-5.0, 5.0], [5.0, -5.0]],
                                 np.zeros((2, 2, 2)))

    @staticmethod
    def TwoNormal():
        return GeneratingMixture('two-normal', [0.5, 0.5],
                                 [[-5.0, 5.0], [5.0, -5.0]],
                                 [2.0 * np.eye(2), 2.0 * np.eye(2)])

    @staticmethod
    def PointMass(beta):
        beta = np.asarray(beta, dtype=float).reshape(1, -1)
        return GeneratingMixture('point-mass', [1.0], beta,
                                 np.zeros((1, beta.shape[1], beta.shape[1])))

    @staticmethod
    def FromName(name):
        # type: (str) -> GeneratingMixture
        if name == 'two-point':
            return GeneratingMixture.TwoPoint()
        if name == 'two-normal':
            return GeneratingMixture.TwoNormal()
        if name == 'point-mass':
            return GeneratingMixture.PointMass(np.zeros(DIMENSION))
        raise InvalidInputError(
            'unknown generating mixture "{}"; expected two-point, two-normal '
            'or point-mass'.format(name))


def DrawCovariates(shape, rng):
    """Covariates uniform on the open interval (COVARIATE_LOW, COVARIATE_HIGH).
    """
    return COVARIATE_LOW + (COVARIATE_HIGH -
                            COVARIATE_LOW) * rng.OpenUniform(shape)


def SimulateChoices(covariates, betas, rng, errors=None):
    # type: (np.ndarray, np.ndarray, RngStream, Optional[np.ndarray]) -> np.ndarray  # noqa: E501
    """1-based utility-maximising choices for n choice situations.

    |covariates| is n x J x d and |betas| n x d. |errors| overrides the Gumbel
    draws. Ties go to the lowest index.
    """
    utility = np.einsum('ijd,id->ij', covariates, betas)
    if errors is None:
        errors = SampleGumbel(rng.OpenUniform(utility.shape))
    return np.argmax(utility + errors, axis=1) + 1


def SimulateNonpanel(n, rng, mixture=None):
    # type: (int, RngStream, Optional[GeneratingMixture]) -> ChoiceDataset
    """n individuals with one choice each, beta from the two-point mixture."""
    if n < 1:
        raise InvalidInputError('need at least one individual')
    mixture = mixture or GeneratingMixture.TwoPoint()
    betas = mixture.Draw(n, rng)
    covariates = DrawCovariates((n, NUM_ALTERNATIVES, mixture.Dimension()),
                                rng)
    choices = SimulateChoices(covariates, betas, rng)
    return ChoiceDataset.FromArrays(range(1, n + 1), choices, covariates)


def SimulatePanel(n, periods, rng, mixture=None):
    # type: (int, int, RngStream, Optional[GeneratingMixture]) -> PanelDataset
    """n individuals with |periods| choices each, beta from the normal mixture.
    """
    if n < 1 or periods < 1:
        raise InvalidInputError('need at least one individual and one period')
    mixture = mixture or GeneratingMixture.TwoNormal()
    d = mixture.Dimension()
    betas = mixture.Draw(n, rng)
    covariates = DrawCovariates((n, periods, NUM_ALTERNATIVES, d), rng)
    choices = SimulateChoices(covariates.reshape(n * periods, NUM_ALTERNATIVES,
                                                 d),
                              np.repeat(betas, periods, axis=0),
                              rng).reshape(n, periods)
    return PanelDataset([
        PanelObservation(i + 1, choices[i], list(covariates[i]))
        for i in range(n)
    ], NUM_ALTERNATIVES, d)


def TrueChoiceProb(x, mixture, draws=TRUTH_DRAWS, crn=None):
    # type: (np.ndarray, GeneratingMixture, int, Optional[CommonRandomNumbers]) -> np.ndarray  # noqa: E501
    """P0({j} | x) under a generating mixture.

    Exact for point-mass mixtures; otherwise a Monte Carlo integral over
    |draws| fixed draws (seed 0, truth stream), or over |crn| if given.
    """
    assert isinstance(mixture, GeneratingMixture)
    x = AsCovariateMatrix(x)
    if mixture.IsDiscrete():
        return MixtureChoiceProb(
            x, MixingDistribution(mixture.weights, mixture.means))
    if crn is None:
        crn = CommonRandomNumbers(0, mixture.Dimension(), draws,
                                  stream=TRUTH_STREAM)
    return NormalMixtureChoiceProb(x, mixture.weights, mixture.means,
                                   CholeskyStack(mixture.covariances), crn)


def TruthFunction(mixture, draws=TRUTH_DRAWS):
    # type: (GeneratingMixture, int) -> Callable[[np.ndarray], np.ndarray]
    """x -> TrueChoiceProb(x, mixture), reusing one set of Monte Carlo draws."""
    crn = None if mixture.IsDiscrete() else CommonRandomNumbers(
        0, mixture.Dimension(), draws, stream=TRUTH_STREAM)
    return lambda x: TrueChoiceProb(x, mixture, draws, crn)


# Monte Carlo draws and grid points per chunk for TrueSurface.
SURFACE_TRUTH_DRAWS = 100000
_SURFACE_CHUNK = 8


def TrueSurface(mixture, points, draws=SURFACE_TRUTH_DRAWS):
    # type: (GeneratingMixture, np.ndarray, int) -> np.ndarray
    """TrueChoiceProb at every row of a G x J x d array of points."""
    assert isinstance(mixture, GeneratingMixture)
    points = np.asarray(points, dtype=float)
    if mixture.IsDiscrete():
        return PluginSurface(
            {
                'weights': mixture.weights,
                'atoms': mixture.means
            }, points, None)
    crn = CommonRandomNumbers(0, mixture.Dimension(), draws,
                              stream=TRUTH_STREAM)
    state = {
        'weights': mixture.weights,
        'means': mixture.means,
        'covariances': mixture.covariances,
    }
    return np.concatenate([
        PluginSurface(state, points[start:start + _SURFACE_CHUNK], crn)
        for start in range(0, points.shape[0], _SURFACE_CHUNK)
    ])
