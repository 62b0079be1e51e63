# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

from __future__ import absolute_import

import unittest

import numpy as np

from .estimators import CommonRandomNumbers, NormalMixtureChoiceProb, \
    PluginSurface, PosteriorMeanChoiceProb, PosteriorMeanSurface, \
    PredictionRule, PredictiveEstimate, PredictiveSurface, \
    StatePluginChoiceProb
from .model import InvalidInputError, MixingDistribution, \
    MixtureChoiceProb, MnlProb, NumericalError
from .trace import EmptyTraceError, Trace
from .testing_support import XStar

TWO_ATOMS = np.array([[-5.0, 5.0], [5.0, -5.0]])


def DiscreteState():
    return {
        'weights': np.array([0.25, 0.75]),
        'atoms': TWO_ATOMS.copy(),
        'mu': np.array([0.0, 0.5]),
        'tau': np.eye(2),
        'classes': np.array([0, 1, 1]),
    }


class TestTrace(unittest.TestCase):
    def setUp(self):
        self.trace = Trace('gml', XStar()[None])

    def test_append_rejects_non_simplex(self):
        with self.assertRaises(NumericalError):
            self.trace.Append(0, [[0.5, 0.5, 0.5]])
        with self.assertRaises(NumericalError):
            self.trace.Append(0, [[0.2, 0.3, 0.5]],
                              predictive=[[0.2, 0.3, 0.4]])
        self.assertEqual(0, len(self.trace))

    def test_empty(self):
        self.assertEqual((0, 1, 3), self.trace.PluginProbs().shape)
        self.assertIsNone(self.trace.PredictiveProbs())
        self.assertIsNone(self.trace.AcceptanceRate())
        self.assertEqual((0, 2), self.trace.BetaDraws().shape)
        with self.assertRaises(EmptyTraceError):
            self.trace.CheckNotEmpty()

    def test_acceptance_by_phase(self):
        self.trace.RecordAcceptance(3, 10, burnin=True)
        self.trace.RecordAcceptance(1, 4, burnin=False)
        self.assertAlmostEqual(0.3, self.trace.AcceptanceRate('burnin'))
        self.assertAlmostEqual(0.25, self.trace.AcceptanceRate())

    def test_point_index(self):
        self.assertEqual(0, self.trace.PointIndex(XStar()))
        self.assertIsNone(self.trace.PointIndex(-XStar()))

    def test_concatenate(self):
        other = Trace('gml', XStar()[None])
        self.trace.Append(0, [[0.2, 0.3, 0.5]], occupied=1,
                          beta_draws=np.zeros((2, 2)))
        other.Append(0, [[0.4, 0.3, 0.3]], occupied=2,
                     beta_draws=np.ones((2, 2)))
        other.RecordAcceptance(2, 4, burnin=False)
        pooled = Trace.Concatenate([self.trace, other])
        self.assertEqual(2, len(pooled))
        self.assertEqual([1, 2], pooled.occupied)
        self.assertEqual((4, 2), pooled.BetaDraws().shape)
        self.assertAlmostEqual(0.5, pooled.AcceptanceRate())
        np.testing.assert_allclose([[0.3, 0.3, 0.4]],
                                   pooled.PluginProbs().mean(axis=0))


class TestPredictionRule(unittest.TestCase):
    def test_no_individuals_returns_base(self):
        base = np.array([0.2, 0.3, 0.5])
        result = PredictionRule(base, np.zeros((0, 3)), 1.0)
        np.testing.assert_array_equal(base, result)
        self.assertIsNot(base, result)

    def test_weights(self):
        base = np.array([1.0, 0.0, 0.0])
        betas = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        np.testing.assert_allclose([0.5, 0.25, 0.25],
                                   PredictionRule(base, betas, 2.0))

    def test_rejects_nonpositive_mass(self):
        with self.assertRaises(InvalidInputError):
            PredictionRule([1.0, 0.0], np.zeros((0, 2)), 0.0)


class TestMonteCarloIntegrals(unittest.TestCase):
    def test_common_random_numbers_are_reproducible(self):
        a = CommonRandomNumbers(5, 2, 100)
        b = CommonRandomNumbers(5, 2, 100)
        np.testing.assert_array_equal(a.normals, b.normals)
        np.testing.assert_array_equal(a.uniforms, b.uniforms)
        self.assertEqual(100, a.Draws())
        self.assertFalse(
            np.array_equal(a.normals,
                           CommonRandomNumbers(6, 2, 100).normals))

    def test_tight_normals_match_discrete_mixture(self):
        crn = CommonRandomNumbers(1, 2, 20000)
        weights = np.array([0.3, 0.7])
        chols = np.broadcast_to(1e-6 * np.eye(2), (2, 2, 2))
        p = NormalMixtureChoiceProb(XStar(), weights, TWO_ATOMS, chols, crn)
        expected = MixtureChoiceProb(XStar(),
                                     MixingDistribution(weights, TWO_ATOMS))
        np.testing.assert_allclose(p, expected, atol=0.015)

    def test_predictive_estimate_without_individuals(self):
        crn = CommonRandomNumbers(1, 2, 2000)
        mu = np.array([0.5, -1.0])
        p = PredictiveEstimate((mu, 1e-8 * np.eye(2)), np.zeros((0, 2)),
                               XStar(), 1.0, crn)
        np.testing.assert_allclose(p, MnlProb(XStar(), mu), atol=1e-3)

    def test_predictive_estimate_large_mass(self):
        crn = CommonRandomNumbers(1, 2, 2000)
        theta = (np.zeros(2), np.eye(2))
        base = PredictiveEstimate(theta, np.zeros((0, 2)), XStar(), 1.0, crn)
        heavy = PredictiveEstimate(theta, TWO_ATOMS, XStar(), 1e9, crn)
        np.testing.assert_allclose(base, heavy, atol=1e-8)

    def test_predictive_estimate_rejects_bad_tau(self):
        with self.assertRaises(NumericalError):
            PredictiveEstimate((np.zeros(2), -np.eye(2)), TWO_ATOMS, XStar(),
                               1.0, CommonRandomNumbers(1, 2, 10))


class TestStateEstimators(unittest.TestCase):
    def test_discrete_plugin(self):
        state = DiscreteState()
        crn = CommonRandomNumbers(1, 2, 10)
        expected = 0.25 * MnlProb(XStar(), TWO_ATOMS[0]) + \
            0.75 * MnlProb(XStar(), TWO_ATOMS[1])
        np.testing.assert_allclose(
            StatePluginChoiceProb(state, XStar(), crn), expected)

    def test_surfaces_match_pointwise(self):
        state = DiscreteState()
        crn = CommonRandomNumbers(2, 2, 500)
        points = np.array([XStar(), -XStar(), np.zeros((3, 2))])
        plugin = PluginSurface(state, points, crn)
        rule = PredictiveSurface(state, points, crn, 1.0)
        for g in range(3):
            np.testing.assert_allclose(
                plugin[g], StatePluginChoiceProb(state, points[g], crn),
                atol=1e-12)
            np.testing.assert_allclose(
                rule[g],
                PredictiveEstimate((state['mu'], state['tau']),
                                   TWO_ATOMS[state['classes']], points[g],
                                   1.0, crn),
                atol=1e-12)

    def test_continuous_plugin_surface(self):
        state = {
            'weights': np.array([1.0]),
            'means': np.array([[0.5, -1.0]]),
            'covariances': np.array([np.eye(2)]),
        }
        crn = CommonRandomNumbers(3, 2, 400)
        surface = PluginSurface(state, XStar()[None], crn)
        np.testing.assert_allclose(
            surface[0], StatePluginChoiceProb(state, XStar(), crn),
            atol=1e-12)


class TestPosteriorMean(unittest.TestCase):
    def test_registered_point(self):
        trace = Trace('mmnl-nonpanel', XStar()[None])
        trace.Append(10, [[0.2, 0.3, 0.5]], predictive=[[0.1, 0.1, 0.8]])
        trace.Append(11, [[0.4, 0.3, 0.3]], predictive=[[0.3, 0.1, 0.6]])
        rule, plugin = PosteriorMeanChoiceProb(trace, XStar())
        np.testing.assert_allclose([0.3, 0.3, 0.4], plugin)
        np.testing.assert_allclose([0.2, 0.1, 0.7], rule)

    def test_plugin_only_trace(self):
        trace = Trace('gml', XStar()[None])
        trace.Append(0, [[0.2, 0.3, 0.5]])
        rule, plugin = PosteriorMeanChoiceProb(trace, XStar())
        self.assertIsNone(rule)
        np.testing.assert_allclose([0.2, 0.3, 0.5], plugin)

    def test_unregistered_point_uses_states(self):
        trace = Trace('mmnl-nonpanel', XStar()[None], predictive_draws=300)
        state = DiscreteState()
        trace.Append(0, [[0.2, 0.3, 0.5]], state=state)
        rule, plugin = PosteriorMeanChoiceProb(trace, -XStar())
        np.testing.assert_allclose(
            plugin, StatePluginChoiceProb(state, -XStar(), None))
        self.assertAlmostEqual(1.0, rule.sum())

    def test_unregistered_point_without_states(self):
        trace = Trace('gml', XStar()[None])
        trace.Append(0, [[0.2, 0.3, 0.5]])
        with self.assertRaises(InvalidInputError):
            PosteriorMeanChoiceProb(trace, -XStar())

    def test_empty_trace(self):
        with self.assertRaises(EmptyTraceError):
            PosteriorMeanChoiceProb(Trace('gml', XStar()[None]), XStar())
        with self.assertRaises(EmptyTraceError):
            PosteriorMeanSurface(Trace('gml', XStar()[None]), XStar()[None])

    def test_surface_from_states(self):
        trace = Trace('mmnl-nonpanel', XStar()[None], predictive_draws=300)
        trace.Append(0, [[0.2, 0.3, 0.5]], state=DiscreteState())
        rule, plugin = PosteriorMeanSurface(trace, XStar()[None])
        self.assertEqual((1, 3), plugin.shape)
        self.assertEqual((1, 3), rule.shape)
        np.testing.assert_allclose(
            plugin[0], StatePluginChoiceProb(DiscreteState(), XStar(), None))


if __name__ == '__main__':
    unittest.main()
