# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

from __future__ import absolute_import

from .model import \
    AsCovariateMatrix, \
    AtomLogProbs, \
    ChoiceDataset, \
    CovariatesFromFlat, \
    InvalidInputError, \
    IsSimplex, \
    MixingDistribution, \
    MixtureChoiceProb, \
    MnlLogProb, \
    MnlProb, \
    NumericalError, \
    Observation, \
    PanelDataset, \
    PanelLogLikelihood, \
    PanelObservation

__all__ = [
    "AsCovariateMatrix", "AtomLogProbs", "ChoiceDataset",
    "CovariatesFromFlat", "InvalidInputError", "IsSimplex",
    "MixingDistribution", "MixtureChoiceProb", "MnlLogProb", "MnlProb",
    "NumericalError", "Observation", "PanelDataset", "PanelLogLikelihood",
    "PanelObservation"
]

from .messages import \
    BnpJsonEncoder, \
    ConfigError, \
    EvaluationReport, \
    FitSummary, \
    MhConfig, \
    ModelKind, \
    NIWParams, \
    PointEvaluation, \
    PointSummary, \
    RunConfig, \
    X_STAR

__all__ += [
    "BnpJsonEncoder", "ConfigError", "EvaluationReport", "FitSummary",
    "MhConfig", "ModelKind", "NIWParams", "PointEvaluation", "PointSummary",
    "RunConfig", "X_STAR"
]

from .random_variates import \
    RngStream, \
    SampleBeta, \
    SampleCategorical, \
    SampleGumbel, \
    SampleInverseWishart, \
    SampleMvn, \
    SampleNiw

__all__ += [
    "RngStream", "SampleBeta", "SampleCategorical", "SampleGumbel",
    "SampleInverseWishart", "SampleMvn", "SampleNiw"
]

from .stick_breaking import \
    DrawPriorMixing, \
    StickVector, \
    TruncationErrorBound, \
    UpdateSticksPosterior, \
    WeightsFromSticks

__all__ += [
    "DrawPriorMixing", "StickVector", "TruncationErrorBound",
    "UpdateSticksPosterior", "WeightsFromSticks"
]

from .niw import DrawThetaPosterior, NiwPosterior
from .metropolis import AdaptScale, MhUpdate

__all__ += ["AdaptScale", "DrawThetaPosterior", "MhUpdate", "NiwPosterior"]

from .trace import EmptyTraceError, Trace
from .estimators import \
    PosteriorMeanChoiceProb, \
    PredictionRule, \
    PredictiveEstimate
from .gibbs import \
    ClassificationWeights, \
    GibbsStateNP, \
    GibbsSweep, \
    RunChain
from .gibbs_panel import \
    ClassificationWeightsPanel, \
    GibbsStatePanel, \
    GibbsSweepPanel, \
    RunChainPanel
from .gml import RunGmlChain

__all__ += [
    "ClassificationWeights", "ClassificationWeightsPanel", "EmptyTraceError",
    "GibbsStateNP", "GibbsStatePanel", "GibbsSweep", "GibbsSweepPanel",
    "PosteriorMeanChoiceProb", "PredictionRule", "PredictiveEstimate",
    "RunChain", "RunChainPanel", "RunGmlChain", "Trace"
]

from .simulate import \
    GeneratingMixture, \
    SimulateNonpanel, \
    SimulatePanel, \
    TrueChoiceProb

__all__ += [
    "GeneratingMixture", "SimulateNonpanel", "SimulatePanel", "TrueChoiceProb"
]

from .diagnostics import \
    Acf, \
    HistogramExport, \
    L1GridError, \
    Rms, \
    TailMomentCheck

__all__ += ["Acf", "HistogramExport", "L1GridError", "Rms", "TailMomentCheck"]

from .data_io import DataFormatError, ReadDataset, WriteDataset
from .result_cache import ResultCache

__all__ += ["DataFormatError", "ReadDataset", "ResultCache", "WriteDataset"]
