# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Configuration and report messages.

Every message is a plain object whose fields are listed in a class level
DESCRIPTOR mapping field names to types. Messages are decoded from JSON by
coercing a dictionary against the DESCRIPTOR, recursively, and encoded back to
JSON through BnpJsonEncoder. Decoding is strict: a key that is not in the
DESCRIPTOR is a configuration error.
"""

import json
import numbers

import numpy as np

from .model import InvalidInputError, CovariatesFromFlat

from typing import Any, Dict, List, Optional  # noqa: F401

# The covariate point used throughout the simulation study, alternative-major:
# x_1 = (1.0, -0.9), x_2 = (1.0, 0.2), x_3 = (1.0, 0.9).
X_STAR = [1.0, -0.9, 1.0, 0.2, 1.0, 0.9]


class ConfigError(InvalidInputError):
    """A configuration field is unknown or out of range."""
    pass


class BnpJsonEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, Message):
            return o.__dict__
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        return json.JSONEncoder.default(self, o)


def StringifyObject(o, target_type):
    def stringify_lines(o, level):
        indent = '  ' * level
        lines = [indent + '{']
        for k, v in vars(o).items():
            if isinstance(v, target_type):
                lines.append(indent + '  {}:'.format(k))
                lines.extend(stringify_lines(v, level + 1))
            else:
                lines.append(indent + '  {}: {}'.format(k, repr(v)))
        lines.append(indent + '}')
        return lines

    return '\n'.join(stringify_lines(o, 0))


class Message(object):
    def __str__(self):
        return StringifyObject(self, Message)

    def AsJsonString(self, pretty=False):
        # type: (bool) -> str
        if pretty:
            return json.dumps(self, cls=BnpJsonEncoder, indent=2,
                              sort_keys=True)
        return json.dumps(self, cls=BnpJsonEncoder, sort_keys=True)

    @staticmethod
    def Coerce(source, target_type, field='<root>'):
        if source is None:
            return None

        if isinstance(target_type, list):
            assert len(target_type) == 1
            if isinstance(source, np.ndarray):
                source = source.tolist()
            if not isinstance(source, (list, tuple)):
                raise ConfigError('field "{}" must be a list, got {!r}'.format(
                    field, source))
            return [Message.Coerce(x, target_type[0], field) for x in source]

        if isinstance(target_type, type) and issubclass(target_type, Message):
            if source.__class__ == target_type:
                return source
            if not isinstance(source, dict):
                raise ConfigError(
                    'field "{}" must be a section, got {!r}'.format(
                        field, source))
            descriptor = target_type.DESCRIPTOR
            dest = {}
            for k, v in source.items():
                if k not in descriptor:
                    raise ConfigError(
                        'unknown configuration key "{}" in {}'.format(
                            k, target_type.__name__))
                dest[k] = Message.Coerce(v, descriptor[k], k)
            try:
                return target_type(**dest)
            except (TypeError, ValueError) as e:
                raise ConfigError('invalid {}: {}'.format(
                    target_type.__name__, e))

        if target_type == bool:
            if not isinstance(source, (bool, np.bool_)):
                raise ConfigError('field "{}" must be true or false'.format(
                    field))
            return bool(source)
        if target_type == str:
            if not isinstance(source, str):
                raise ConfigError('field "{}" must be a string'.format(field))
            return source
        if target_type == int:
            if isinstance(source, (bool, np.bool_)) or \
                    not isinstance(source, numbers.Real) or \
                    not float(source).is_integer():
                raise ConfigError('field "{}" must be an integer, got '
                                  '{!r}'.format(field, source))
            return int(source)
        if target_type == float and isinstance(source, (bool, np.bool_)):
            raise ConfigError('field "{}" must be a number, got {!r}'.format(
                field, source))
        try:
            return target_type(source)
        except (TypeError, ValueError):
            raise ConfigError('field "{}" has invalid value {!r}'.format(
                field, source))

    @classmethod
    def Make(cls, **kwargs):
        return Message.Coerce(kwargs, cls)

    @classmethod
    def FromShallowDict(cls, d):
        return Message.Coerce(d, cls)

    @classmethod
    def FromJsonString(cls, s):
        if isinstance(s, (bytes, bytearray)):
            s = s.decode(encoding='utf-8')
        if not s.strip():
            return cls()
        try:
            d = json.loads(s)
        except ValueError as e:
            raise ConfigError('configuration is not valid JSON: {}'.format(e))
        return cls.FromShallowDict(d)

    DESCRIPTOR = {}  # type: Dict[str, Any]


class ModelKind(object):
    MMNL_NONPANEL = 'mmnl-nonpanel'
    MMNL_PANEL = 'mmnl-panel'
    GML = 'gml'

    @staticmethod
    def Values():
        # type: () -> List[str]
        return [ModelKind.MMNL_NONPANEL, ModelKind.MMNL_PANEL, ModelKind.GML]


class NIWParams(Message):
    """Normal-inverse-Wishart hyperparameters (m, lambda, nu0, S0).

    mu | tau ~ N(m, tau / lambda) and tau ~ IW(nu0, S0), where IW(nu, Psi) has
    density proportional to |tau|^{-(nu+d+1)/2} exp(-tr(nu Psi tau^{-1}) / 2),
    so that E[tau] = nu Psi / (nu - d - 1). Under this convention posterior
    scale matrices are weighted averages of S0 and data scatter.
    """
    DESCRIPTOR = {
        'mean': [float],
        'precision_scale': float,
        'dof': float,
        'scale': [[float]],
    }

    def __init__(self, **kwargs):
        d = kwargs
        self.mean = np.asarray(d.get('mean', [0.0, 0.0]),
                               dtype=float)  # type: np.ndarray
        self.precision_scale = float(d.get('precision_scale', 1.0))
        self.dof = float(d.get('dof', 2.0))
        self.scale = np.asarray(d.get('scale', np.eye(self.mean.shape[0])),
                                dtype=float)  # type: np.ndarray

    @staticmethod
    def Default(dimension):
        # type: (int) -> NIWParams
        return NIWParams(mean=np.zeros(dimension),
                         precision_scale=1.0,
                         dof=2.0,
                         scale=np.eye(dimension))

    def Dimension(self):
        # type: () -> int
        return self.mean.shape[0]

    def Validate(self):
        d = self.Dimension()
        if self.mean.ndim != 1 or d < 1:
            raise ConfigError('field "mean" must be a nonempty vector')
        if self.scale.shape != (d, d):
            raise ConfigError('field "scale" must be {0}x{0}, got {1}'.format(
                d, self.scale.shape))
        if not self.precision_scale > 0.0:
            raise ConfigError('field "precision_scale" must be positive')
        if not self.dof > d - 1:
            raise ConfigError('field "dof" must exceed dimension - 1 = {}'.
                              format(d - 1))
        if not np.allclose(self.scale, self.scale.T, rtol=0.0, atol=1e-12):
            raise ConfigError('field "scale" must be symmetric')
        try:
            np.linalg.cholesky(self.scale)
        except np.linalg.LinAlgError:
            raise ConfigError('field "scale" must be positive definite')
        return self


class MhConfig(Message):
    """Random-walk Metropolis-Hastings settings.

    The proposal is beta + proposal_scale * chol(Sigma) z. When |adapt| is
    set the scale is tuned toward |target_acceptance| during burn-in only.
    """
    DESCRIPTOR = {
        'proposal_scale': float,
        'steps_per_update': int,
        'adapt': bool,
        'target_acceptance': float,
        'adaptation_gain': float,
    }

    def __init__(self, **kwargs):
        d = kwargs
        self.proposal_scale = float(d.get('proposal_scale', 1.0))
        self.steps_per_update = int(d.get('steps_per_update', 2))
        self.adapt = bool(d.get('adapt', True))
        self.target_acceptance = float(d.get('target_acceptance', 0.30))
        self.adaptation_gain = float(d.get('adaptation_gain', 0.5))

    def Validate(self):
        if not self.proposal_scale >= 0.0:
            raise ConfigError('field "proposal_scale" must be nonnegative')
        if self.steps_per_update < 1:
            raise ConfigError('field "steps_per_update" must be at least 1')
        if not 0.0 < self.target_acceptance < 1.0:
            raise ConfigError('field "target_acceptance" must be in (0, 1)')
        if not self.adaptation_gain > 0.0:
            raise ConfigError('field "adaptation_gain" must be positive')
        return self


class RunConfig(Message):
    """Everything needed to run one sampler on one dataset."""
    DESCRIPTOR = {
        'model': str,
        'num_alternatives': int,
        'dimension': int,
        'truncation': int,
        'mass': float,
        'niw': NIWParams,
        'mh': MhConfig,
        'burnin': int,
        'iterations': int,
        'thin': int,
        'seed': int,
        'x_points': [[float]],
        'credible_level': float,
        'predictive_draws': int,
        'beta_draws': int,
        'store_states': bool,
        'report_every': int,
    }

    def __init__(self, **kwargs):
        d = kwargs
        self.model = d.get('model', ModelKind.MMNL_NONPANEL)  # type: str
        self.num_alternatives = int(d.get('num_alternatives', 3))
        self.dimension = int(d.get('dimension', 2))
        self.truncation = int(d.get('truncation', 100))
        self.mass = float(d.get('mass', 1.0))
        self.niw = d.get('niw') or NIWParams.Default(
            self.dimension)  # type: NIWParams
        self.mh = d.get('mh') or MhConfig()  # type: MhConfig
        self.burnin = int(d.get('burnin', 10000))
        self.iterations = int(d.get('iterations', 10000))
        self.thin = int(d.get('thin', 1))
        self.seed = int(d.get('seed', 0))
        default_points = [X_STAR] if (self.num_alternatives,
                                      self.dimension) == (3, 2) else []
        self.x_points = [
            [float(v) for v in p] for p in d.get('x_points', default_points)
        ]  # type: List[List[float]]
        self.credible_level = float(d.get('credible_level', 0.95))
        self.predictive_draws = int(d.get('predictive_draws', 10000))
        self.beta_draws = int(d.get('beta_draws', 10))
        self.store_states = bool(d.get('store_states', False))
        self.report_every = int(d.get('report_every', 1000))

    def Copy(self, **overrides):
        # type: (...) -> RunConfig
        fields = dict(self.__dict__)
        fields.update(overrides)
        return RunConfig(**fields)

    def Validate(self):
        if self.model not in ModelKind.Values():
            raise ConfigError(
                'field "model" must be one of {}, got "{}"'.format(
                    ', '.join(ModelKind.Values()), self.model))
        if self.num_alternatives < 2:
            raise ConfigError('field "num_alternatives" must be at least 2')
        if self.dimension < 1:
            raise ConfigError('field "dimension" must be at least 1')
        if self.truncation < 1:
            raise ConfigError('field "truncation" must be at least 1')
        if not self.mass > 0.0:
            raise ConfigError('field "mass" must be positive')
        for name in ('burnin', 'iterations'):
            if getattr(self, name) < 0:
                raise ConfigError('field "{}" must be nonnegative'.format(name))
        for name in ('thin', 'predictive_draws', 'report_every'):
            if getattr(self, name) < 1:
                raise ConfigError('field "{}" must be at least 1'.format(name))
        if self.beta_draws < 0:
            raise ConfigError('field "beta_draws" must be nonnegative')
        if not 0.0 < self.credible_level < 1.0:
            raise ConfigError('field "credible_level" must be in (0, 1)')
        self.niw.Validate()
        if self.niw.Dimension() != self.dimension:
            raise ConfigError(
                'field "niw.mean" has dimension {}, but "dimension" is {}'.
                format(self.niw.Dimension(), self.dimension))
        self.mh.Validate()
        for p in self.x_points:
            try:
                CovariatesFromFlat(p, self.num_alternatives, self.dimension)
            except InvalidInputError as e:
                raise ConfigError('field "x_points": {}'.format(e))
        return self

    def ValidateAgainst(self, dataset):
        """Checks that |dataset| has the configured J and d."""
        if dataset.num_alternatives != self.num_alternatives:
            raise ConfigError(
                'field "num_alternatives" is {} but the data has J={}'.format(
                    self.num_alternatives, dataset.num_alternatives))
        if dataset.dimension != self.dimension:
            raise ConfigError(
                'field "dimension" is {} but the data has d={}'.format(
                    self.dimension, dataset.dimension))
        return self

    def Points(self):
        # type: () -> np.ndarray
        """Registered evaluation points as a P x J x d array."""
        return np.array([
            CovariatesFromFlat(p, self.num_alternatives, self.dimension)
            for p in self.x_points
        ]).reshape(len(self.x_points), self.num_alternatives, self.dimension)


class PointSummary(Message):
    """Posterior summary of the choice probabilities at one covariate point."""
    DESCRIPTOR = {
        'x': [float],
        'posterior_mean': [float],
        'plugin_mean': [float],
        'lower': [float],
        'upper': [float],
        'truth': [float],
        'rms': float,
    }

    def __init__(self, **kwargs):
        d = kwargs
        self.x = d.get('x', [])  # type: List[float]
        self.posterior_mean = d.get('posterior_mean', [])  # type: List[float]
        self.plugin_mean = d.get('plugin_mean', [])  # type: List[float]
        self.lower = d.get('lower', [])  # type: List[float]
        self.upper = d.get('upper', [])  # type: List[float]
        self.truth = d.get('truth', None)  # type: Optional[List[float]]
        self.rms = d.get('rms', None)  # type: Optional[float]


class FitSummary(Message):
    """What `fit` reports about a completed run."""
    DESCRIPTOR = {
        'model': str,
        'observations': int,
        'num_alternatives': int,
        'dimension': int,
        'chains': int,
        'retained': int,
        'credible_level': float,
        'truncation_bound': float,
        'acceptance_rate': float,
        'mean_occupied': float,
        'points': [PointSummary],
    }

    def __init__(self, **kwargs):
        d = kwargs
        self.model = d.get('model', '')  # type: str
        self.observations = d.get('observations', 0)  # type: int
        self.num_alternatives = d.get('num_alternatives',
                                      None)  # type: Optional[int]
        self.dimension = d.get('dimension', None)  # type: Optional[int]
        self.chains = d.get('chains', 1)  # type: int
        self.retained = d.get('retained', 0)  # type: int
        self.credible_level = d.get('credible_level', 0.95)  # type: float
        self.truncation_bound = d.get('truncation_bound',
                                      None)  # type: Optional[float]
        self.acceptance_rate = d.get('acceptance_rate',
                                     None)  # type: Optional[float]
        self.mean_occupied = d.get('mean_occupied',
                                   None)  # type: Optional[float]
        self.points = d.get('points', [])  # type: List[PointSummary]


class PointEvaluation(Message):
    """Accuracy of a fitted model at one registered covariate point."""
    DESCRIPTOR = {
        'x': [float],
        'truth': [float],
        'posterior_mean': [float],
        'rms': float,
        'acf': [float],
    }

    def __init__(self, **kwargs):
        d = kwargs
        self.x = d.get('x', [])  # type: List[float]
        self.truth = d.get('truth', [])  # type: List[float]
        self.posterior_mean = d.get('posterior_mean', [])  # type: List[float]
        self.rms = d.get('rms', None)  # type: Optional[float]
        self.acf = d.get('acf', [])  # type: List[float]


class EvaluationReport(Message):
    """What `evaluate` reports about a fitted trace against a known truth."""
    DESCRIPTOR = {
        'model': str,
        'truth': str,
        'points': [PointEvaluation],
        'grid_points_per_axis': int,
        'l1_grid_error': float,
        'l1_volume_scaled': float,
    }

    def __init__(self, **kwargs):
        d = kwargs
        self.model = d.get('model', '')  # type: str
        self.truth = d.get('truth', '')  # type: str
        self.points = d.get('points', [])  # type: List[PointEvaluation]
        self.grid_points_per_axis = d.get('grid_points_per_axis',
                                          None)  # type: Optional[int]
        self.l1_grid_error = d.get('l1_grid_error',
                                   None)  # type: Optional[float]
        self.l1_volume_scaled = d.get('l1_volume_scaled',
                                      None)  # type: Optional[float]
