# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

from __future__ import absolute_import

import contextlib
import io
import json
import os
import unittest

try:
    from unittest import mock
except ImportError:
    import mock  # type: ignore

from .cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, Main
from .data_io import ReadDataset
from .messages import EvaluationReport, FitSummary, PointSummary, RunConfig
from .model import ChoiceDataset, PanelDataset
from .testing_support import DataFilePath, LONG_TESTS, TemporaryDirectory


def RunMain(argv):
    """Main(argv) with stdout and stderr captured."""
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        status = Main(argv)
    return status, out.getvalue(), err.getvalue()


def WriteConfig(directory, **overrides):
    with io.open(DataFilePath('small_config.json'), encoding='utf-8') as f:
        cfg = RunConfig.FromJsonString(f.read())
    path = os.path.join(directory, 'config.json')
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(cfg.Copy(**overrides).AsJsonString())
    return path


class TestUsage(unittest.TestCase):
    def test_no_subcommand(self):
        status, _, err = RunMain([])
        self.assertEqual(EXIT_USAGE, status)
        self.assertIn('subcommand', err)

    def test_unknown_subcommand(self):
        self.assertEqual(EXIT_USAGE, RunMain(['sample'])[0])

    def test_missing_required_argument(self):
        self.assertEqual(EXIT_USAGE, RunMain(['simulate'])[0])
        self.assertEqual(EXIT_USAGE, RunMain(['fit'])[0])

    def test_bad_choice(self):
        self.assertEqual(EXIT_USAGE,
                         RunMain(['reproduce', 'table9', '--scale',
                                  'smoke'])[0])
        self.assertEqual(
            EXIT_USAGE,
            RunMain(['fit', '--data', 'x.csv', '--model', 'probit'])[0])

    def test_bad_seed_environment(self):
        with mock.patch.dict(os.environ, {'BNPLOGIT_SEED': 'seven'}):
            status, _, err = RunMain(['simulate', '--n', '2'])
        self.assertEqual(EXIT_USAGE, status)
        self.assertIn('BNPLOGIT_SEED', err)


class TestSimulate(unittest.TestCase):
    def test_nonpanel_to_stdout(self):
        status, out, _ = RunMain(['simulate', '--n', '5', '--seed', '1'])
        self.assertEqual(EXIT_OK, status)
        dataset = ReadDataset(io.StringIO(out))
        self.assertIsInstance(dataset, ChoiceDataset)
        self.assertEqual(5, len(dataset))

    def test_panel_to_file(self):
        with TemporaryDirectory() as d:
            path = os.path.join(d, 'panel.csv')
            status, out, _ = RunMain([
                'simulate', '--design', 'panel', '--n', '4', '-T', '3',
                '--output', path
            ])
            self.assertEqual(EXIT_OK, status)
            self.assertEqual('', out)
            with io.open(path, encoding='utf-8', newline='') as f:
                dataset = ReadDataset(f)
        self.assertIsInstance(dataset, PanelDataset)
        self.assertEqual(4, len(dataset))
        self.assertEqual([3, 3, 3, 3], [dataset.Periods(i) for i in range(4)])

    def test_seed_from_environment(self):
        with mock.patch.dict(os.environ, {'BNPLOGIT_SEED': '5'}):
            _, from_env, _ = RunMain(['simulate', '--n', '6'])
        _, from_flag, _ = RunMain(['simulate', '--n', '6', '--seed', '5'])
        _, other, _ = RunMain(['simulate', '--n', '6', '--seed', '6'])
        self.assertEqual(from_flag, from_env)
        self.assertNotEqual(from_flag, other)

    def test_zero_individuals(self):
        self.assertEqual(EXIT_INVALID,
                         RunMain(['simulate', '--n', '0'])[0])


class TestFit(unittest.TestCase):
    def test_writes_outputs(self):
        with TemporaryDirectory() as d:
            status, out, _ = RunMain([
                'fit', '--data',
                DataFilePath('tiny_nonpanel.csv'), '--config',
                DataFilePath('small_config.json'), '-o', d
            ])
            self.assertEqual(EXIT_OK, status)
            for name in ('trace_0.csv', 'diagnostics_0.csv', 'summary.json'):
                self.assertTrue(os.path.exists(os.path.join(d, name)), name)
            self.assertFalse(os.path.exists(os.path.join(d, 'states_0.npz')))
            with io.open(os.path.join(d, 'summary.json'),
                         encoding='utf-8') as f:
                written = FitSummary.FromJsonString(f.read())
        printed = FitSummary.FromJsonString(out)
        self.assertEqual(written.AsJsonString(), printed.AsJsonString())
        self.assertEqual('mmnl-nonpanel', printed.model)
        self.assertEqual(6, printed.observations)
        self.assertEqual(20, printed.retained)
        self.assertEqual(2, len(printed.points))
        for point in printed.points:
            self.assertAlmostEqual(1.0, sum(point.posterior_mean))
            for low, high in zip(point.lower, point.upper):
                self.assertLessEqual(low, high)
            self.assertIsNone(point.rms)

    def test_output_dir_from_environment(self):
        with TemporaryDirectory() as d:
            target = os.path.join(d, 'nested')
            with mock.patch.dict(os.environ, {'BNPLOGIT_OUTPUT_DIR': target}):
                status, _, _ = RunMain([
                    'fit', '--data',
                    DataFilePath('tiny_nonpanel.csv'), '--config',
                    DataFilePath('small_config.json')
                ])
            self.assertEqual(EXIT_OK, status)
            self.assertTrue(
                os.path.exists(os.path.join(target, 'summary.json')))

    def test_chains_and_truth(self):
        with TemporaryDirectory() as d:
            status, out, _ = RunMain([
                'fit', '--data',
                DataFilePath('tiny_nonpanel.csv'), '--config',
                DataFilePath('small_config.json'), '--chains', '2', '--jobs',
                '2', '--truth', 'two-point', '-o', d
            ])
            self.assertEqual(EXIT_OK, status)
            self.assertTrue(os.path.exists(os.path.join(d, 'trace_1.csv')))
        summary = FitSummary.FromJsonString(out)
        self.assertEqual(2, summary.chains)
        self.assertEqual(40, summary.retained)
        for point in summary.points:
            self.assertEqual(3, len(point.truth))
            self.assertGreaterEqual(point.rms, 0.0)

    def test_panel_model_override(self):
        with TemporaryDirectory() as d:
            status, out, _ = RunMain([
                'fit', '--data',
                DataFilePath('tiny_panel.csv'), '--config',
                DataFilePath('small_config.json'), '--model', 'mmnl-panel',
                '-o', d
            ])
        self.assertEqual(EXIT_OK, status)
        summary = FitSummary.FromJsonString(out)
        self.assertEqual('mmnl-panel', summary.model)
        self.assertEqual(3, summary.observations)

    def test_nonpanel_model_on_panel_data(self):
        with TemporaryDirectory() as d:
            status, _, err = RunMain([
                'fit', '--data',
                DataFilePath('tiny_panel.csv'), '--config',
                DataFilePath('small_config.json'), '-o', d
            ])
        self.assertEqual(EXIT_INVALID, status)
        self.assertIn('panel', err)

    def test_malformed_data(self):
        with TemporaryDirectory() as d:
            path = os.path.join(d, 'bad.csv')
            with io.open(path, 'w', encoding='utf-8') as f:
                f.write(u'id,choice,x_1_1,x_2_1\n1,4,0.0,1.0\n')
            status, _, err = RunMain(['fit', '--data', path, '-o', d])
        self.assertEqual(EXIT_INVALID, status)
        self.assertIn('row', err)

    def test_alternatives_mismatch(self):
        with TemporaryDirectory() as d:
            path = os.path.join(d, 'two.csv')
            with io.open(path, 'w', encoding='utf-8') as f:
                f.write(u'id,choice,x_1_1,x_1_2,x_2_1,x_2_2\n'
                        u'1,2,0.0,1.0,0.5,-0.5\n')
            status, _, err = RunMain(['fit', '--data', path, '-o', d])
        self.assertEqual(EXIT_INVALID, status)
        self.assertIn('num_alternatives', err)

    def test_missing_data_file(self):
        with TemporaryDirectory() as d:
            status, _, _ = RunMain(
                ['fit', '--data',
                 os.path.join(d, 'absent.csv'), '-o', d])
        self.assertEqual(EXIT_INVALID, status)

    def test_invalid_config(self):
        with TemporaryDirectory() as d:
            path = os.path.join(d, 'config.json')
            with io.open(path, 'w', encoding='utf-8') as f:
                f.write(u'{"truncation": 0}')
            status, _, err = RunMain([
                'fit', '--data',
                DataFilePath('tiny_nonpanel.csv'), '--config', path, '-o', d
            ])
        self.assertEqual(EXIT_INVALID, status)
        self.assertIn('truncation', err)

    def test_fractional_integer_in_config(self):
        with TemporaryDirectory() as d:
            path = os.path.join(d, 'config.json')
            with io.open(path, 'w', encoding='utf-8') as f:
                f.write(u'{"truncation": 2.7}')
            status, _, err = RunMain([
                'fit', '--data',
                DataFilePath('tiny_nonpanel.csv'), '--config', path, '-o', d
            ])
        self.assertEqual(EXIT_INVALID, status)
        self.assertIn('"truncation" must be an integer', err)


class TestEvaluate(unittest.TestCase):
    def test_fit_then_evaluate(self):
        with TemporaryDirectory() as d:
            config = WriteConfig(d, store_states=True)
            status, _, _ = RunMain([
                'fit', '--data',
                DataFilePath('tiny_nonpanel.csv'), '--config', config, '-o', d
            ])
            self.assertEqual(EXIT_OK, status)
            self.assertTrue(os.path.exists(os.path.join(d, 'states_0.npz')))
            report_path = os.path.join(d, 'report.json')
            status, out, _ = RunMain([
                'evaluate', '--summary',
                os.path.join(d, 'summary.json'), '--trace',
                os.path.join(d, 'trace_0.csv'), '--states',
                os.path.join(d, 'states_0.npz'), '--truth', 'two-point',
                '--grid', '2', '--max-lag', '5', '--output', report_path
            ])
            self.assertEqual(EXIT_OK, status)
            with io.open(report_path, encoding='utf-8') as f:
                written = json.load(f)
        report = EvaluationReport.FromJsonString(out)
        self.assertEqual(written, json.loads(out))
        self.assertEqual('two-point', report.truth)
        self.assertEqual(2, len(report.points))
        for point in report.points:
            self.assertAlmostEqual(1.0, sum(point.truth))
            self.assertGreaterEqual(point.rms, 0.0)
            self.assertLessEqual(len(point.acf), 6)
        self.assertEqual(2, report.grid_points_per_axis)
        self.assertGreaterEqual(report.l1_grid_error, 0.0)
        self.assertAlmostEqual(report.l1_grid_error * 4.0**6,
                               report.l1_volume_scaled)

    def test_shape_comes_from_summary(self):
        with TemporaryDirectory() as d:
            data = os.path.join(d, 'two.csv')
            with io.open(data, 'w', encoding='utf-8') as f:
                f.write(u'id,choice,x_1_1,x_1_2,x_2_1,x_2_2\n'
                        u'1,2,1.0,-0.5,1.0,0.5\n'
                        u'2,1,1.0,0.3,1.0,-0.2\n'
                        u'3,2,1.0,0.0,1.0,1.0\n'
                        u'4,1,1.0,1.5,1.0,-1.0\n')
            config = WriteConfig(d,
                                 num_alternatives=2,
                                 x_points=[[1.0, -0.9, 1.0, 0.9]])
            status, out, _ = RunMain(
                ['fit', '--data', data, '--config', config, '-o', d])
            self.assertEqual(EXIT_OK, status)
            summary = FitSummary.FromJsonString(out)
            self.assertEqual((2, 2),
                             (summary.num_alternatives, summary.dimension))
            status, out, _ = RunMain([
                'evaluate', '--summary',
                os.path.join(d, 'summary.json'), '--trace',
                os.path.join(d, 'trace_0.csv'), '--truth', 'two-point'
            ])
        self.assertEqual(EXIT_OK, status)
        report = EvaluationReport.FromJsonString(out)
        self.assertEqual(2, len(report.points[0].truth))
        self.assertAlmostEqual(1.0, sum(report.points[0].truth))

    def test_summary_without_shape_needs_flags(self):
        with TemporaryDirectory() as d:
            path = os.path.join(d, 'summary.json')
            with io.open(path, 'w', encoding='utf-8') as f:
                f.write(
                    FitSummary(model='gml',
                               points=[PointSummary(x=[1.0, 0.0, 1.0, 1.0])
                                       ]).AsJsonString())
            status, _, err = RunMain([
                'evaluate', '--summary', path, '--trace',
                os.path.join(d, 'trace_0.csv'), '--truth', 'two-point'
            ])
        self.assertEqual(EXIT_INVALID, status)
        self.assertIn('--alternatives', err)

    def test_missing_summary(self):
        with TemporaryDirectory() as d:
            status, _, _ = RunMain([
                'evaluate', '--summary',
                os.path.join(d, 'summary.json'), '--trace',
                os.path.join(d, 'trace_0.csv'), '--truth', 'two-point'
            ])
        self.assertEqual(EXIT_INVALID, status)


@unittest.skipUnless(LONG_TESTS, 'set BNPLOGIT_LONG_TESTS to run')
class TestReproduce(unittest.TestCase):
    def test_smoke_table1(self):
        with TemporaryDirectory() as d:
            cache = os.path.join(d, 'cache')
            argv = [
                'reproduce', 'table1', '--scale', 'smoke', '--cache', cache,
                '-o', d, '--seed', '0'
            ]
            status, out, _ = RunMain(argv)
            self.assertEqual(EXIT_OK, status)
            self.assertEqual(os.path.join(d, 'table1.csv'), out.strip())
            with io.open(os.path.join(d, 'table1.json'),
                         encoding='utf-8') as f:
                first = json.load(f)
            self.assertEqual(12, len(first['rows']))

            # A second run is served from the cache.
            status, _, _ = RunMain(argv)
            self.assertEqual(EXIT_OK, status)
            with io.open(os.path.join(d, 'table1.json'),
                         encoding='utf-8') as f:
                self.assertEqual(first, json.load(f))


if __name__ == '__main__':
    unittest.main()
