# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Pipelines behind the command line: fitting, evaluation and the
simulation-study experiments.

An experiment is a grid of cells, each cell one (design, sample size, seed,
model) fit on freshly simulated data. Cells are independent, may run in a
thread pool and are cached in a ResultCache when one is given, so that an
interrupted experiment resumes where it stopped.
"""

import concurrent.futures
import json
import logging
import math
import threading

import numpy as np

from .diagnostics import Acf, CredibleInterval, Grid, HistogramExport, \
    HistogramRows, Rms, SurfaceL1Error, VolumeScaled
from .estimators import CommonRandomNumbers, PosteriorMeanChoiceProb, \
    PosteriorMeanSurface
from .gibbs import RunChain
from .gibbs_panel import RunChainPanel
from .gml import RunGmlChain
from .messages import ConfigError, EvaluationReport, FitSummary, ModelKind, \
    NIWParams, PointEvaluation, PointSummary, RunConfig, X_STAR
from .model import ChoiceDataset, CovariatesFromFlat, InvalidInputError, \
    PanelDataset, PanelObservation
from .random_variates import RngStream, SUBSTREAM_BASE
from .result_cache import ResultCache
from .simulate import GeneratingMixture, SimulateNonpanel, SimulatePanel, \
    TrueSurface, TruthFunction
from .stick_breaking import TruncationErrorBound
from .trace import Trace

from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple, Union  # noqa: F401,E501

AnyDataset = Union[ChoiceDataset, PanelDataset]

# Lags reported by ACF outputs.
ACF_LAGS = 50

# Bins of the exported beta_1 histograms.
HISTOGRAM_BINS = 40

# Monte Carlo draws per stored state when averaging panel surfaces on a grid.
SURFACE_DRAWS = 1000

Scale = NamedTuple('Scale', [('burnin', int), ('iterations', int),
                             ('truncation', int), ('predictive_draws', int),
                             ('seeds', int), ('replicates', int),
                             ('grid', int), ('max_states', int)])

SCALES = {
    'smoke': Scale(burnin=100,
                   iterations=100,
                   truncation=20,
                   predictive_draws=500,
                   seeds=1,
                   replicates=2,
                   grid=2,
                   max_states=20),
    'desk': Scale(burnin=4000,
                  iterations=6000,
                  truncation=100,
                  predictive_draws=10000,
                  seeds=3,
                  replicates=10,
                  grid=3,
                  max_states=200),
    'paper': Scale(burnin=10000,
                   iterations=10000,
                   truncation=100,
                   predictive_draws=10000,
                   seeds=3,
                   replicates=20,
                   grid=5,
                   max_states=500),
}

Design = NamedTuple('Design', [('name', str), ('model', str),
                               ('mixture', GeneratingMixture),
                               ('periods', int), ('sizes', Tuple[int, ...]),
                               ('table1_n', int)])

DESIGNS = [
    Design('nonpanel', ModelKind.MMNL_NONPANEL, GeneratingMixture.TwoPoint(),
           1, (50, 100, 500), 500),
    Design('panel', ModelKind.MMNL_PANEL, GeneratingMixture.TwoNormal(), 10,
           (10, 50, 100), 100),
]

ExperimentResult = NamedTuple('ExperimentResult',
                              [('name', str), ('columns', List[str]),
                               ('rows', List[List[Any]]),
                               ('details', Dict[str, Any])])


def GetLogger():
    return logging.getLogger('bnplogit')


def AsPanel(data):
    # type: (ChoiceDataset) -> PanelDataset
    """Views non-panel data as a panel with one period per individual."""
    return PanelDataset([
        PanelObservation(data.ids[i], [data.choices[i] + 1],
                         [data.covariates[i]]) for i in range(len(data))
    ], data.num_alternatives, data.dimension)


def RunModel(data, cfg):
    # type: (AnyDataset, RunConfig) -> Trace
    """Runs the sampler selected by cfg.model."""
    if cfg.model == ModelKind.MMNL_NONPANEL:
        if not isinstance(data, ChoiceDataset):
            raise ConfigError(
                'field "model" is mmnl-nonpanel but the data is a panel')
        return RunChain(data, cfg)
    if cfg.model == ModelKind.MMNL_PANEL:
        if isinstance(data, ChoiceDataset):
            data = AsPanel(data)
        return RunChainPanel(data, cfg)
    if cfg.model == ModelKind.GML:
        return RunGmlChain(data, cfg)
    raise ConfigError('field "model" must be one of {}, got "{}"'.format(
        ', '.join(ModelKind.Values()), cfg.model))


def RunChains(data, cfg, chains=1, jobs=1):
    # type: (AnyDataset, RunConfig, int, int) -> List[Trace]
    """Runs |chains| chains with seeds cfg.seed, cfg.seed + 1, ...

    With jobs > 1 chains run in a thread pool. Each chain owns its random
    stream and trace.
    """
    if chains < 1:
        raise InvalidInputError('need at least one chain')
    configs = [cfg.Copy(seed=cfg.seed + c) for c in range(chains)]
    if jobs <= 1 or chains == 1:
        return [RunModel(data, c) for c in configs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda c: RunModel(data, c), configs))


def Summarize(traces, cfg, observations, truth=None):
    # type: (List[Trace], RunConfig, int, Optional[Callable[[np.ndarray], np.ndarray]]) -> FitSummary  # noqa: E501
    """Pools chains into the posterior summary reported by `fit`.

    |truth| maps a covariate matrix to its true choice probabilities; when
    given, every point also reports its RMS.
    """
    pooled = Trace.Concatenate(traces)
    plugin_draws = pooled.PluginProbs()
    points = []
    for index, x in enumerate(pooled.points if len(pooled) else []):
        rule, plugin = PosteriorMeanChoiceProb(pooled, x)
        lower, upper = CredibleInterval(plugin_draws[:, index],
                                        cfg.credible_level)
        summary = PointSummary(
            x=x.reshape(-1).tolist(),
            posterior_mean=(plugin if rule is None else rule).tolist(),
            plugin_mean=plugin.tolist(),
            lower=lower.tolist(),
            upper=upper.tolist())
        if truth is not None:
            p0 = np.asarray(truth(x), dtype=float)
            summary.truth = p0.tolist()
            summary.rms = Rms(plugin_draws[:, index], p0)
        points.append(summary)

    bound = None
    if cfg.model != ModelKind.GML and observations > 0:
        bound = TruncationErrorBound(observations, cfg.truncation, cfg.mass)
    return FitSummary(model=cfg.model,
                      observations=observations,
                      num_alternatives=cfg.num_alternatives,
                      dimension=cfg.dimension,
                      chains=len(traces),
                      retained=len(pooled),
                      credible_level=cfg.credible_level,
                      truncation_bound=bound,
                      acceptance_rate=pooled.AcceptanceRate(),
                      mean_occupied=float(np.mean(pooled.occupied))
                      if pooled.occupied else None,
                      points=points)


def GridL1Error(states, mixture, num_alternatives, dimension,
                points_per_axis):
    # type: (Trace, GeneratingMixture, int, int, int) -> Tuple[float, float]
    """Grid-mean and volume-scaled L1 error of a trace's posterior mean.

    Uses the prediction-rule surface where the trace supports it and the
    plug-in surface otherwise.
    """
    axes = num_alternatives * dimension
    grid = Grid(points_per_axis, axes).reshape(-1, num_alternatives,
                                               dimension)
    crn = CommonRandomNumbers(states.seed, dimension, SURFACE_DRAWS)
    rule, plugin = PosteriorMeanSurface(states, grid, crn)
    estimate = plugin if rule is None else rule
    l1 = SurfaceL1Error(estimate, _TruthSurface(mixture, points_per_axis,
                                                grid))
    return l1, VolumeScaled(l1, axes)


def Evaluate(summary,
             trace,
             mixture,
             max_lag=ACF_LAGS,
             states=None,
             points_per_axis=3):
    # type: (FitSummary, Trace, GeneratingMixture, int, Optional[Trace], int) -> EvaluationReport  # noqa: E501
    """Scores a fitted trace against the generating mixture."""
    assert isinstance(summary, FitSummary)
    truth = TruthFunction(mixture)
    num_alternatives, dimension = trace.points.shape[1:]
    plugin = trace.PluginProbs()
    report = EvaluationReport(model=summary.model, truth=mixture.name)
    for index, point in enumerate(summary.points):
        x = CovariatesFromFlat(point.x, num_alternatives, dimension)
        p0 = truth(x)
        series = plugin[:, index, 0]
        acf = []  # type: List[float]
        if series.shape[0] > 1 and np.ptp(series) > 0.0:
            acf = Acf(series, min(max_lag, series.shape[0] - 1)).tolist()
        report.points.append(
            PointEvaluation(x=point.x,
                            truth=p0.tolist(),
                            posterior_mean=point.posterior_mean,
                            rms=Rms(plugin[:, index], p0),
                            acf=acf))
    if states is not None:
        report.grid_points_per_axis = points_per_axis
        report.l1_grid_error, report.l1_volume_scaled = GridL1Error(
            states, mixture, num_alternatives, dimension, points_per_axis)
    return report


_truth_lock = threading.Lock()
_truth_memo = {}  # type: Dict[Any, np.ndarray]


def _TruthSurface(mixture, points_per_axis, grid):
    key = (mixture.name, points_per_axis)
    with _truth_lock:
        if key not in _truth_memo:
            _truth_memo[key] = TrueSurface(mixture, grid)
        return _truth_memo[key]


def _TruthAtXStar(design):
    key = (design.mixture.name, 'x*')
    with _truth_lock:
        if key not in _truth_memo:
            _truth_memo[key] = TruthFunction(design.mixture)(
                CovariatesFromFlat(X_STAR, 3, 2))
        return _truth_memo[key]


def SimulateDesign(design, n, seed):
    # type: (Design, int, int) -> AnyDataset
    rng = RngStream(seed).Spawn(SUBSTREAM_BASE, n)
    if design.periods > 1:
        return SimulatePanel(n, design.periods, rng, design.mixture)
    return SimulateNonpanel(n, rng, design.mixture)


def CellConfig(scale, model, seed, precision_scale=1.0, store_states=False):
    # type: (Scale, str, int, float, bool) -> RunConfig
    niw = NIWParams.Default(2)
    niw.precision_scale = precision_scale
    return RunConfig(model=model,
                     truncation=scale.truncation,
                     niw=niw,
                     burnin=scale.burnin,
                     iterations=scale.iterations,
                     thin=max(1, scale.iterations // scale.max_states)
                     if store_states else 1,
                     seed=seed,
                     predictive_draws=scale.predictive_draws,
                     store_states=store_states,
                     report_every=max(1, (scale.burnin + scale.iterations) //
                                      10))


def RunCell(design,
            n,
            seed,
            scale,
            model=None,
            precision_scale=1.0,
            outputs=(),
            cache=None):
    # type: (Design, int, int, Scale, Optional[str], float, Tuple[str, ...], Optional[ResultCache]) -> Dict[str, Any]  # noqa: E501
    """Simulates, fits and scores one experiment cell.

    |outputs| may request 'acf' (of P({1} | x*)), 'l1' (grid error) and
    'betas' (posterior draws of beta_1).
    """
    model = model or design.model
    description = {
        'design': design.name,
        'n': n,
        'seed': seed,
        'model': model,
        'scale': scale._asdict(),
        'precision_scale': precision_scale,
        'outputs': sorted(outputs),
    }
    if cache is not None:
        cached = cache.Get(description)
        if cached is not None:
            return json.loads(cached)

    GetLogger().info('cell %s n=%d seed=%d model=%s', design.name, n, seed,
                     model)
    data = SimulateDesign(design, n, seed)
    cfg = CellConfig(scale, model, seed, precision_scale, 'l1' in outputs)
    trace = RunModel(data, cfg)
    x_star = CovariatesFromFlat(X_STAR, 3, 2)
    truth = _TruthAtXStar(design)
    rule, plugin = PosteriorMeanChoiceProb(trace, x_star)
    draws = trace.PluginProbs()[:, 0]
    lower, upper = CredibleInterval(draws, cfg.credible_level)
    result = {
        'truth': truth.tolist(),
        'estimate': (plugin if rule is None else rule).tolist(),
        'plugin': plugin.tolist(),
        'lower': lower.tolist(),
        'upper': upper.tolist(),
        'rms': Rms(draws, truth),
        'acceptance': trace.AcceptanceRate(),
    }  # type: Dict[str, Any]
    if 'acf' in outputs:
        result['acf'] = Acf(draws[:, 0], min(ACF_LAGS,
                                             draws.shape[0] - 1)).tolist()
    if 'l1' in outputs:
        result['l1'], result['l1_volume_scaled'] = GridL1Error(
            trace, design.mixture, 3, 2, scale.grid)
    if 'betas' in outputs:
        result['beta_1'] = trace.BetaDraws()[:, 0].tolist()
    if cache is not None:
        cache.Put(description, json.dumps(result))
    return result


def _RunCells(cells, jobs):
    # type: (List[Callable[[], Dict[str, Any]]], int) -> List[Dict[str, Any]]
    if jobs <= 1:
        return [cell() for cell in cells]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda cell: cell(), cells))


def Table1(scale, seed, cache=None, jobs=1):
    # type: (Scale, int, Optional[ResultCache], int) -> ExperimentResult
    """True probabilities, estimates, credible intervals and RMS at x*."""
    keys = [(design, model) for design in DESIGNS
            for model in (design.model, ModelKind.GML)]
    results = _RunCells([
        lambda d=design, m=model: RunCell(d, d.table1_n, seed, scale, m,
                                          cache=cache)
        for design, model in keys
    ], jobs)
    rows = []
    for (design, model), result in zip(keys, results):
        for j in range(3):
            rows.append([
                design.name, model, j + 1, result['truth'][j],
                result['estimate'][j], result['lower'][j],
                result['upper'][j], result['rms']
            ])
    return ExperimentResult(
        'table1', [
            'design', 'model', 'alternative', 'true', 'estimate',
            'ci_lower', 'ci_upper', 'rms'
        ], rows, {
            '{}/{}'.format(design.name, model): result
            for (design, model), result in zip(keys, results)
        })


def Table2(scale, seed, cache=None, jobs=1):
    # type: (Scale, int, Optional[ResultCache], int) -> ExperimentResult
    """Median RMS of the nonparametric model across sample sizes."""
    keys = [(design, n, seed + s) for design in DESIGNS
            for n in design.sizes for s in range(scale.seeds)]
    results = _RunCells([
        lambda d=design, n=n, s=s: RunCell(d, n, s, scale, cache=cache)
        for design, n, s in keys
    ], jobs)
    by_cell = {}  # type: Dict[Tuple[str, int], List[float]]
    for (design, n, _), result in zip(keys, results):
        by_cell.setdefault((design.name, n), []).append(result['rms'])
    rows = [[design.name, n,
             float(np.median(by_cell[(design.name, n)])),
             ' '.join(repr(v) for v in by_cell[(design.name, n)])]
            for design in DESIGNS for n in design.sizes]
    return ExperimentResult('table2',
                            ['design', 'n', 'median_rms', 'rms_by_seed'],
                            rows, {})


def Table3Lite(scale, seed, cache=None, jobs=1):
    # type: (Scale, int, Optional[ResultCache], int) -> ExperimentResult
    """Grid L1 error of the posterior mean over Monte Carlo replicates."""
    keys = [(design, n, seed + r) for design in DESIGNS
            for n in design.sizes for r in range(scale.replicates)]
    results = _RunCells([
        lambda d=design, n=n, s=s: RunCell(
            d, n, s, scale, outputs=('l1', ), cache=cache)
        for design, n, s in keys
    ], jobs)
    by_cell = {}  # type: Dict[Tuple[str, int], List[Dict[str, Any]]]
    for (design, n, _), result in zip(keys, results):
        by_cell.setdefault((design.name, n), []).append(result)
    rows = []
    for design in DESIGNS:
        for n in design.sizes:
            cell = by_cell[(design.name, n)]
            l1 = np.array([r['l1'] for r in cell])
            scaled = np.array([r['l1_volume_scaled'] for r in cell])
            q1, median, q3 = np.quantile(l1, [0.25, 0.5, 0.75])
            rows.append([
                design.name, n,
                len(cell),
                float(l1.mean()),
                float(q1),
                float(median),
                float(q3),
                float(scaled.mean())
            ])
    return ExperimentResult('table3-lite', [
        'design', 'n', 'replicates', 'l1_mean', 'l1_q1', 'l1_median',
        'l1_q3', 'l1_volume_scaled_mean'
    ], rows, {'grid_points_per_axis': scale.grid})


def Figure1(scale, seed, cache=None, jobs=1):
    # type: (Scale, int, Optional[ResultCache], int) -> ExperimentResult
    """Autocorrelation of P({1} | x*) for two prior precision scales."""
    keys = [(design, lam) for design in DESIGNS for lam in (0.01, 1.0)]
    results = _RunCells([
        lambda d=design, lam=lam: RunCell(d,
                                          d.table1_n,
                                          seed,
                                          scale,
                                          precision_scale=lam,
                                          outputs=('acf', ),
                                          cache=cache)
        for design, lam in keys
    ], jobs)
    rows = []
    for (design, lam), result in zip(keys, results):
        for lag, value in enumerate(result['acf']):
            rows.append([design.name, lam, result['rms'], lag, value])
    return ExperimentResult('figure1',
                            ['design', 'lambda', 'rms', 'lag', 'acf'], rows,
                            {})


def _TrueBeta1Density(mixture, centres, edges):
    """Density of beta_1 under |mixture|, binned for point masses."""
    if mixture.IsDiscrete():
        widths = np.diff(edges)
        mass = np.zeros(centres.shape[0])
        for weight, mean in zip(mixture.weights, mixture.means):
            b = np.searchsorted(edges, mean[0], side='right') - 1
            if 0 <= b < mass.shape[0]:
                mass[b] += weight
            elif mean[0] == edges[-1]:
                mass[-1] += weight
        return mass / widths
    density = np.zeros(centres.shape[0])
    for weight, mean, cov in zip(mixture.weights, mixture.means,
                                 mixture.covariances):
        variance = cov[0, 0]
        density += weight * np.exp(-0.5 * (centres - mean[0])**2 /
                                   variance) / math.sqrt(
                                       2.0 * math.pi * variance)
    return density


def Figure2(scale, seed, cache=None, jobs=1):
    # type: (Scale, int, Optional[ResultCache], int) -> ExperimentResult
    """Histograms of posterior draws of beta_1 across sample sizes."""
    keys = [(design, n) for design in DESIGNS for n in design.sizes]
    results = _RunCells([
        lambda d=design, n=n: RunCell(
            d, n, seed, scale, outputs=('betas', ), cache=cache)
        for design, n in keys
    ], jobs)
    rows = []
    for (design, n), result in zip(keys, results):
        samples = np.asarray(result['beta_1'])
        if samples.shape[0] == 0:
            continue
        histogram = HistogramExport(samples, HISTOGRAM_BINS)
        edges = histogram.edges
        centres = 0.5 * (edges[:-1] + edges[1:])
        truth = _TrueBeta1Density(design.mixture, centres, edges)
        for b, (left, right, count) in enumerate(HistogramRows(histogram)):
            density = count / (samples.shape[0] * (right - left))
            rows.append(
                [design.name, n, left, right, count, density,
                 float(truth[b])])
    return ExperimentResult('figure2', [
        'design', 'n', 'bin_left', 'bin_right', 'count', 'density',
        'true_density'
    ], rows, {})


EXPERIMENTS = {
    'table1': Table1,
    'table2': Table2,
    'table3-lite': Table3Lite,
    'figure1': Figure1,
    'figure2': Figure2,
}


def Reproduce(name, scale='desk', seed=0, cache=None, jobs=1):
    # type: (str, str, int, Optional[ResultCache], int) -> ExperimentResult
    if name not in EXPERIMENTS:
        raise InvalidInputError(
            'unknown experiment "{}"; expected one of {}'.format(
                name, ', '.join(sorted(EXPERIMENTS))))
    if scale not in SCALES:
        raise InvalidInputError('unknown scale "{}"; expected one of {}'.format(
            scale, ', '.join(sorted(SCALES))))
    return EXPERIMENTS[name](SCALES[scale], seed, cache, jobs)
