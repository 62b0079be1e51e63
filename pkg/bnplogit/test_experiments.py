# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

from __future__ import absolute_import

import unittest

import numpy as np

from .experiments import AsPanel, CellConfig, DESIGNS, EXPERIMENTS, \
    Evaluate, Reproduce, RunCell, RunChains, RunModel, SCALES, Scale, \
    Summarize, _TrueBeta1Density
from .messages import ConfigError, ModelKind
from .model import InvalidInputError, PanelDataset
from .result_cache import ResultCache
from .simulate import GeneratingMixture, SimulateNonpanel, TruthFunction
from .testing_support import LONG_TESTS, SeededStream, SmallConfig, \
    TinyPanel, XStar

TINY_SCALE = Scale(burnin=20,
                   iterations=20,
                   truncation=5,
                   predictive_draws=100,
                   seeds=1,
                   replicates=1,
                   grid=2,
                   max_states=10)


def Nonpanel(n=8, seed=3):
    return SimulateNonpanel(n, SeededStream(seed))


class TestAsPanel(unittest.TestCase):
    def test_one_period_each(self):
        data = Nonpanel()
        panel = AsPanel(data)
        self.assertIsInstance(panel, PanelDataset)
        self.assertEqual(len(data), len(panel))
        for i in range(len(data)):
            self.assertEqual(1, panel.Periods(i))
        # A panel with T = 1 has the non-panel likelihood.
        betas = SeededStream(9).Normal((len(data), 2))
        np.testing.assert_allclose(data.LogLikelihoods(betas),
                                   panel.LogLikelihoods(betas))


class TestRunModel(unittest.TestCase):
    def test_dispatch(self):
        data = Nonpanel()
        for model in ModelKind.Values():
            trace = RunModel(data, SmallConfig(model=model, burnin=5,
                                               iterations=5))
            self.assertEqual(model, trace.model)
            self.assertEqual(5, len(trace))

    def test_nonpanel_model_rejects_panel_data(self):
        with self.assertRaises(ConfigError):
            RunModel(TinyPanel(), SmallConfig())

    def test_unknown_model(self):
        with self.assertRaises(ConfigError):
            RunModel(Nonpanel(), SmallConfig(model='probit'))


class TestRunChains(unittest.TestCase):
    def test_needs_a_chain(self):
        with self.assertRaises(InvalidInputError):
            RunChains(Nonpanel(), SmallConfig(), chains=0)

    def test_threaded_matches_serial(self):
        data = Nonpanel()
        cfg = SmallConfig(burnin=10, iterations=10)
        serial = RunChains(data, cfg, chains=2, jobs=1)
        threaded = RunChains(data, cfg, chains=2, jobs=2)
        self.assertEqual(cfg.seed + 1, serial[1].seed)
        for a, b in zip(serial, threaded):
            np.testing.assert_array_equal(a.PluginProbs(), b.PluginProbs())
        self.assertFalse(
            np.array_equal(serial[0].PluginProbs(), serial[1].PluginProbs()))


class TestSummarize(unittest.TestCase):
    def test_pooled_summary(self):
        data = Nonpanel()
        cfg = SmallConfig(burnin=10, iterations=10)
        traces = RunChains(data, cfg, chains=2)
        summary = Summarize(traces, cfg, len(data),
                            TruthFunction(GeneratingMixture.TwoPoint()))
        self.assertEqual(2, summary.chains)
        self.assertEqual(20, summary.retained)
        self.assertEqual(len(data), summary.observations)
        self.assertIsNotNone(summary.truncation_bound)
        point = summary.points[0]
        np.testing.assert_allclose(XStar().reshape(-1), point.x)
        self.assertAlmostEqual(1.0, sum(point.posterior_mean))
        self.assertTrue(
            all(lo <= hi for lo, hi in zip(point.lower, point.upper)))
        self.assertGreaterEqual(point.rms, 0.0)

    def test_gml_has_no_truncation_bound(self):
        data = Nonpanel()
        cfg = SmallConfig(model=ModelKind.GML, burnin=5, iterations=5)
        summary = Summarize(RunChains(data, cfg), cfg, len(data))
        self.assertIsNone(summary.truncation_bound)
        self.assertIsNone(summary.points[0].rms)


class TestEvaluate(unittest.TestCase):
    def test_report_with_grid_error(self):
        data = Nonpanel()
        cfg = SmallConfig(burnin=10, iterations=20, store_states=True)
        traces = RunChains(data, cfg)
        summary = Summarize(traces, cfg, len(data))
        report = Evaluate(summary, traces[0], GeneratingMixture.TwoPoint(),
                          max_lag=5, states=traces[0], points_per_axis=2)
        self.assertEqual('two-point', report.truth)
        point = report.points[0]
        self.assertEqual(6, len(point.acf))
        self.assertAlmostEqual(1.0, point.acf[0])
        self.assertGreaterEqual(point.rms, 0.0)
        self.assertGreater(report.l1_grid_error, 0.0)
        self.assertAlmostEqual(report.l1_grid_error * 4.0**6,
                               report.l1_volume_scaled)

    def test_report_without_states(self):
        data = Nonpanel()
        cfg = SmallConfig(burnin=5, iterations=5)
        traces = RunChains(data, cfg)
        report = Evaluate(Summarize(traces, cfg, len(data)), traces[0],
                          GeneratingMixture.TwoPoint())
        self.assertIsNone(report.l1_grid_error)
        self.assertEqual(1, len(report.points))


class TestCells(unittest.TestCase):
    def test_cell_config(self):
        cfg = CellConfig(TINY_SCALE, ModelKind.GML, 4, precision_scale=0.01,
                         store_states=True)
        cfg.Validate()
        self.assertEqual(ModelKind.GML, cfg.model)
        self.assertEqual(0.01, cfg.niw.precision_scale)
        self.assertEqual(2, cfg.thin)
        self.assertEqual(1, CellConfig(TINY_SCALE, ModelKind.GML, 4).thin)

    def test_nonpanel_cell_is_cached(self):
        cache = ResultCache()
        design = DESIGNS[0]
        first = RunCell(design, 10, 1, TINY_SCALE,
                        outputs=('acf', 'betas'), cache=cache)
        self.assertEqual(3, len(first['truth']))
        self.assertAlmostEqual(1.0, sum(first['estimate']))
        self.assertEqual(20, len(first['acf']))
        self.assertEqual(20 * 10, len(first['beta_1']))
        self.assertIsNotNone(cache.Get({
            'design': design.name,
            'n': 10,
            'seed': 1,
            'model': design.model,
            'scale': TINY_SCALE._asdict(),
            'precision_scale': 1.0,
            'outputs': ['acf', 'betas'],
        }))
        self.assertEqual(first,
                         RunCell(design, 10, 1, TINY_SCALE,
                                 outputs=('betas', 'acf'), cache=cache))

    def test_panel_cell_grid_error(self):
        result = RunCell(DESIGNS[1], 4, 2, TINY_SCALE, outputs=('l1', ))
        self.assertGreater(result['l1'], 0.0)
        self.assertAlmostEqual(result['l1'] * 4.0**6,
                               result['l1_volume_scaled'])
        self.assertNotIn('acf', result)


class TestTrueBeta1Density(unittest.TestCase):
    def test_point_masses_integrate_to_one(self):
        edges = np.linspace(-6.0, 6.0, 13)
        centres = 0.5 * (edges[:-1] + edges[1:])
        density = _TrueBeta1Density(GeneratingMixture.TwoPoint(), centres,
                                    edges)
        self.assertAlmostEqual(1.0, float((density * np.diff(edges)).sum()))
        self.assertEqual(2, np.count_nonzero(density))

    def test_normal_mixture(self):
        edges = np.linspace(-15.0, 15.0, 301)
        centres = 0.5 * (edges[:-1] + edges[1:])
        density = _TrueBeta1Density(GeneratingMixture.TwoNormal(), centres,
                                    edges)
        self.assertAlmostEqual(1.0, float((density * np.diff(edges)).sum()),
                               places=3)


class TestReproduce(unittest.TestCase):
    def test_known_experiments(self):
        self.assertEqual(
            ['figure1', 'figure2', 'table1', 'table2', 'table3-lite'],
            sorted(EXPERIMENTS))
        self.assertEqual(['desk', 'paper', 'smoke'], sorted(SCALES))

    def test_unknown_names(self):
        with self.assertRaises(InvalidInputError):
            Reproduce('table9', 'smoke')
        with self.assertRaises(InvalidInputError):
            Reproduce('table1', 'huge')

    @unittest.skipUnless(LONG_TESTS, 'set BNPLOGIT_LONG_TESTS to run')
    def test_smoke_scale(self):
        cache = ResultCache()
        for name in sorted(EXPERIMENTS):
            result = Reproduce(name, 'smoke', seed=0, cache=cache)
            self.assertEqual(name, result.name)
            self.assertTrue(result.rows, name)
            for row in result.rows:
                self.assertEqual(len(result.columns), len(row))


if __name__ == '__main__':
    unittest.main()
