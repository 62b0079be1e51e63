# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.

from __future__ import absolute_import

import io
import json
import os
import unittest

import numpy as np

from .data_io import DataFormatError, LoadStates, ReadDataset, ReadTrace, \
    SaveStates, WriteDataset, WriteDiagnostics, WriteMessage, WriteTrace
from .estimators import PosteriorMeanChoiceProb, PosteriorMeanSurface
from .gibbs import RunChain
from .messages import FitSummary
from .model import ChoiceDataset, InvalidInputError, PanelDataset
from .simulate import SimulateNonpanel, SimulatePanel
from .testing_support import SeededStream, SmallConfig, TemporaryDirectory, \
    TinyPanel, XStar

NONPANEL_CSV = """id,choice,x_1_1,x_1_2,x_2_1,x_2_2,x_3_1,x_3_2
1,3,1.0,-0.9,1.0,0.2,1.0,0.9
2,1,0.5,0.5,-1.5,0.25,0.0,1.0
"""

PANEL_CSV = """id,t,choice,x_1_1,x_2_1
10,1,2,0.0,1.0
10,2,1,0.0,-1.0
11,1,2,0.0,0.5
"""


def Written(dataset):
    stream = io.StringIO()
    WriteDataset(dataset, stream)
    return stream.getvalue()


class TestReadDataset(unittest.TestCase):
    def test_nonpanel(self):
        data = ReadDataset(io.StringIO(NONPANEL_CSV))
        self.assertIsInstance(data, ChoiceDataset)
        self.assertEqual([1, 2], data.ids)
        np.testing.assert_array_equal([2, 0], data.choices)
        np.testing.assert_array_equal(XStar(), data.covariates[0])

    def test_panel(self):
        data = ReadDataset(io.StringIO(PANEL_CSV))
        self.assertIsInstance(data, PanelDataset)
        self.assertEqual([10, 11], data.ids)
        self.assertEqual(2, data.Periods(0))
        self.assertEqual(1, data.Periods(1))
        self.assertEqual((2, 1), (data.num_alternatives, data.dimension))

    def test_written_files_read_back_exactly(self):
        for data in (SimulateNonpanel(7, SeededStream()),
                     SimulatePanel(3, 2, SeededStream()), TinyPanel()):
            text = Written(data)
            again = ReadDataset(io.StringIO(text))
            np.testing.assert_array_equal(data.covariates, again.covariates)
            np.testing.assert_array_equal(data.choices, again.choices)
            self.assertEqual(text, Written(again))

    def test_header_errors(self):
        for text in ('', 'choice,id,x_1_1,x_2_1\n',
                     'id,choice,x_1_1,x_1_2\n',
                     'id,choice,x_1_1,x_2_2\n',
                     'id,choice,x_1_1,x_2_1,extra\n'):
            with self.assertRaises(DataFormatError):
                ReadDataset(io.StringIO(text))

    def test_row_errors_name_the_row(self):
        cases = [
            'id,choice,x_1_1,x_2_1\n1,1,0.0\n',
            'id,choice,x_1_1,x_2_1\n1,3,0.0,1.0\n',
            'id,choice,x_1_1,x_2_1\n1,1,abc,1.0\n',
            'id,choice,x_1_1,x_2_1\n1,1,nan,1.0\n',
        ]
        for text in cases:
            with self.assertRaisesRegex(DataFormatError, 'row 2'):
                ReadDataset(io.StringIO(text))

    def test_duplicate_and_panel_order_errors(self):
        with self.assertRaises(DataFormatError):
            ReadDataset(io.StringIO(
                'id,choice,x_1_1,x_2_1\n1,1,0.0,1.0\n1,2,0.0,1.0\n'))
        with self.assertRaisesRegex(DataFormatError, 'row 4'):
            ReadDataset(io.StringIO('id,t,choice,x_1_1,x_2_1\n'
                                    '1,1,1,0.0,1.0\n2,1,1,0.0,1.0\n'
                                    '1,2,1,0.0,1.0\n'))
        with self.assertRaisesRegex(DataFormatError, 'expected t=2'):
            ReadDataset(io.StringIO('id,t,choice,x_1_1,x_2_1\n'
                                    '1,1,1,0.0,1.0\n1,3,1,0.0,1.0\n'))

    def test_format_error_is_invalid_input(self):
        self.assertTrue(issubclass(DataFormatError, InvalidInputError))

    def test_header_only(self):
        data = ReadDataset(io.StringIO('id,choice,x_1_1,x_2_1\n'))
        self.assertEqual(0, len(data))


class TestTraceFiles(unittest.TestCase):
    def setUp(self):
        self.data = SimulateNonpanel(15, SeededStream())
        self.cfg = SmallConfig(iterations=10, burnin=5, store_states=True)
        self.trace = RunChain(self.data, self.cfg)

    def test_trace_round_trip(self):
        stream = io.StringIO()
        WriteTrace(self.trace, stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual('iteration,point,alternative,plugin,predictive',
                         lines[0])
        self.assertEqual(1 + 10 * 3, len(lines))
        self.assertTrue(lines[1].startswith('6,1,1,'))
        again = ReadTrace(io.StringIO(stream.getvalue()), self.cfg.Points(),
                          'mmnl-nonpanel')
        self.assertEqual(self.trace.iterations, again.iterations)
        np.testing.assert_array_equal(self.trace.PluginProbs(),
                                      again.PluginProbs())
        np.testing.assert_array_equal(self.trace.PredictiveProbs(),
                                      again.PredictiveProbs())

    def test_read_trace_errors(self):
        with self.assertRaises(DataFormatError):
            ReadTrace(io.StringIO('a,b\n'), self.cfg.Points())
        with self.assertRaisesRegex(DataFormatError, 'row 2'):
            ReadTrace(
                io.StringIO('iteration,point,alternative,plugin,predictive\n'
                            '1,2,1,0.5,\n'), self.cfg.Points())

    def test_diagnostics(self):
        stream = io.StringIO()
        WriteDiagnostics(self.trace, stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual('iteration,occupied,acceptance', lines[0])
        self.assertEqual(11, len(lines))

    def test_states_round_trip(self):
        with TemporaryDirectory() as directory:
            path = os.path.join(directory, 'states.npz')
            SaveStates(self.trace, path)
            loaded = LoadStates(path, 'mmnl-nonpanel')
        self.assertEqual(self.trace.iterations, loaded.iterations)
        np.testing.assert_array_equal(self.trace.states[3]['atoms'],
                                      loaded.states[3]['atoms'])
        _, plugin = PosteriorMeanChoiceProb(loaded, -XStar())
        _, expected = PosteriorMeanChoiceProb(self.trace, -XStar())
        np.testing.assert_allclose(expected, plugin)

    def test_states_keep_estimator_settings(self):
        cfg = SmallConfig(iterations=10,
                          burnin=5,
                          mass=5.0,
                          seed=11,
                          predictive_draws=300,
                          store_states=True)
        trace = RunChain(self.data, cfg)
        with TemporaryDirectory() as directory:
            path = os.path.join(directory, 'states.npz')
            SaveStates(trace, path)
            loaded = LoadStates(path, 'mmnl-nonpanel')
        self.assertEqual(5.0, loaded.mass)
        self.assertEqual(11, loaded.seed)
        self.assertEqual(300, loaded.predictive_draws)
        points = XStar()[np.newaxis]
        rule, plugin = PosteriorMeanSurface(trace, points)
        loaded_rule, loaded_plugin = PosteriorMeanSurface(loaded, points)
        np.testing.assert_allclose(rule, loaded_rule)
        np.testing.assert_allclose(plugin, loaded_plugin)

    def test_states_version_check(self):
        with TemporaryDirectory() as directory:
            path = os.path.join(directory, 'bad.npz')
            with open(path, 'wb') as f:
                np.savez(f, format_version=np.array(99))
            with self.assertRaises(DataFormatError):
                LoadStates(path)
            with self.assertRaises(InvalidInputError):
                SaveStates(RunChain(self.data, SmallConfig(iterations=2)),
                           path)


class TestWriteMessage(unittest.TestCase):
    def test_summary_is_json(self):
        stream = io.StringIO()
        WriteMessage(FitSummary(model='gml', retained=3), stream)
        parsed = json.loads(stream.getvalue())
        self.assertEqual('gml', parsed['model'])
        self.assertEqual(3, parsed['retained'])


if __name__ == '__main__':
    unittest.main()
