"""
Monte Carlo experiments: for each sample size n of a grid and its truncation size k, R replications
of data generation, sample splitting, nuisance fitting and estimation, aggregated in a ResultTable.

Replication r at sample size n draws its random numbers from
numpy.random.SeedSequence(seed, spawn_key=(n, r)), so the results do not depend on the order in
which replications run, nor on the number of parallel jobs.
"""

import json
import logging
import math

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from pyHOIF.basis import Haar
from pyHOIF.basis.Atoms import AtomBasis
from pyHOIF.benchmarks import Measures
from pyHOIF.benchmarks.Util import ResultTable
from pyHOIF.common.Exceptions import ConfigurationError, ExperimentError, HOIFError
from pyHOIF.data import artificial, common
from pyHOIF.estimators import oracle, report
from pyHOIF.models import get_kind, model
from pyHOIF.models.discrete import DiscreteModel
from pyHOIF.nuisance.fit import NuisanceFit


logger = logging.getLogger(__name__)

ESTIMATORS = ('plugin', 'first', 'second')
FIT_MODES = ('fitted', 'fixed', 'truth')
MAX_FAILURE_RATE = 0.1
TRUTH_FIELDS = {'discrete': ('type', 'f', 'a', 'b', 'c'), 'lacunary': ('type', 'levels')}


class ExperimentConfig(object):
    """
    Validated experiment configuration. The fields are the keys of the JSON configuration file;
    unknown keys are errors.
    """
    FIELDS = {
        'kind': None,
        'truth': None,
        'smoothness': {'alpha': 1.0, 'beta': 1.0, 'gamma': 1.0, 'd': 1},
        'propensity': 0.5,
        'n_grid': None,
        'k_schedule': 'default',
        'nuisance_level': 'auto',
        'folds': 2,
        'replications': 100,
        'seed': 0,
        'estimators': list(ESTIMATORS),
        'fit_mode': 'fitted',
        'fixed_fit': None,
        'clip': 0.05,
        'projection_weight': 'direct',
        'quadrature_level': None,
        'n_jobs': 1,
        'output': 'results.csv',
    }
    REQUIRED = ('kind', 'truth', 'n_grid')

    def __init__(self, **kwargs):
        for key in kwargs:
            if key not in self.FIELDS:
                raise ConfigurationError("Unknown configuration field '{}'".format(key), field=key)
        for key in self.REQUIRED:
            if key not in kwargs:
                raise ConfigurationError("Missing configuration field '{}'".format(key), field=key)
        for key, default in self.FIELDS.items():
            setattr(self, key, kwargs.get(key, default))
        self._validate()

    @staticmethod
    def from_file(filename):
        try:
            with open(filename, 'r') as file:
                spec = json.load(file)
        except json.JSONDecodeError as ex:
            raise ConfigurationError("Malformed configuration file {}: {}".format(filename, ex))
        if not isinstance(spec, dict):
            raise ConfigurationError("The configuration file must hold a JSON object")
        return ExperimentConfig(**spec)

    def to_dict(self):
        return {key: getattr(self, key) for key in self.FIELDS}

    def _fail(self, field, message):
        raise ConfigurationError("Invalid '{}': {}".format(field, message), field=field)

    def _positive_ints(self, field, values, allow_zero=False):
        if not isinstance(values, list) or len(values) == 0:
            self._fail(field, "expected a nonempty list of integers")
        for v in values:
            if not isinstance(v, int) or isinstance(v, bool) or v < (0 if allow_zero else 1):
                self._fail(field, "entries must be {} integers".format('nonnegative' if allow_zero else 'positive'))

    def _positive_real(self, field, value):
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value) or value <= 0:
            self._fail(field, "must be a positive finite number")

    def _validate(self):
        if self.kind not in ('missing', 'covariance', 'ate'):
            self._fail('kind', "expected 'missing', 'covariance' or 'ate'")
        if not isinstance(self.truth, dict) or self.truth.get('type') not in TRUTH_FIELDS:
            self._fail('truth', "expected an object with type 'discrete' or 'lacunary'")
        common.check_fields(self.truth, TRUTH_FIELDS[self.truth['type']], 'truth')
        levels = self.truth.get('levels', 6)
        if not isinstance(levels, int) or isinstance(levels, bool) or levels < 1:
            self._fail('truth.levels', "must be a positive integer")
        smoothness = dict(self.FIELDS['smoothness'])
        if not isinstance(self.smoothness, dict):
            self._fail('smoothness', "expected an object with the keys alpha, beta, gamma, d")
        for key, value in self.smoothness.items():
            if key not in smoothness:
                self._fail('smoothness', "unknown key '{}'".format(key))
            if not isinstance(value, (int, float)) or value <= 0:
                self._fail('smoothness', "'{}' must be positive".format(key))
            smoothness[key] = value
        if not isinstance(smoothness['d'], int):
            self._fail('smoothness', "'d' must be an integer")
        self.smoothness = smoothness
        if not isinstance(self.propensity, (int, float)) or not 0 < self.propensity < 1:
            self._fail('propensity', "must lie strictly inside (0, 1)")
        self._positive_ints('n_grid', self.n_grid)
        if isinstance(self.k_schedule, list):
            self._positive_ints('k_schedule', self.k_schedule, allow_zero=True)
            if len(self.k_schedule) != len(self.n_grid):
                self._fail('k_schedule', "a fixed schedule needs one k per entry of n_grid")
        elif isinstance(self.k_schedule, dict):
            if set(self.k_schedule) != {'rule', 'c', 'p'} or self.k_schedule['rule'] != 'power':
                self._fail('k_schedule', "a rule is given as {'rule': 'power', 'c': c, 'p': p}")
            self._positive_real('k_schedule.c', self.k_schedule['c'])
            self._positive_real('k_schedule.p', self.k_schedule['p'])
        elif self.k_schedule != 'default':
            self._fail('k_schedule', "expected a list, a power rule or 'default'")
        if self.nuisance_level != 'auto' and (not isinstance(self.nuisance_level, int) or self.nuisance_level < 0):
            self._fail('nuisance_level', "expected 'auto' or a nonnegative integer")
        if not isinstance(self.folds, int) or self.folds < 1:
            self._fail('folds', "must be a positive integer")
        if not isinstance(self.replications, int) or self.replications < 1:
            self._fail('replications', "must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            self._fail('seed', "must be a nonnegative integer")
        if not isinstance(self.estimators, list) or not self.estimators \
                or any(e not in ESTIMATORS for e in self.estimators):
            self._fail('estimators', "expected a nonempty subset of {}".format(list(ESTIMATORS)))
        if self.fit_mode not in FIT_MODES:
            self._fail('fit_mode', "expected one of {}".format(list(FIT_MODES)))
        if self.fit_mode == 'fixed':
            if self.truth['type'] != 'discrete':
                self._fail('fit_mode', "fixed fits are only available for discrete truths")
            if not isinstance(self.fixed_fit, dict):
                self._fail('fixed_fit', "expected an object with a_hat, b_hat and optionally f_hat")
            common.check_fields(self.fixed_fit, common.FIT_FIELDS, 'fixed_fit')
        if not isinstance(self.clip, (int, float)) or not 0 < self.clip < 0.5:
            self._fail('clip', "must lie inside (0, 0.5)")
        if self.projection_weight not in ('direct', 'plugin'):
            self._fail('projection_weight', "expected 'direct' or 'plugin'")
        if self.quadrature_level is not None and (not isinstance(self.quadrature_level, int)
                                                  or self.quadrature_level < 1):
            self._fail('quadrature_level', "must be a positive integer")
        if not isinstance(self.n_jobs, int) or self.n_jobs == 0:
            self._fail('n_jobs', "must be a nonzero integer")
        if not isinstance(self.output, str) or not self.output:
            self._fail('output', "must be a file name")


def default_k(n, d, gamma):
    """Default truncation size k = ceil(min(n^(2d/(2 gamma + d)), n/4))"""
    return int(math.ceil(min(n ** (2.0 * d / (2.0 * gamma + d)), n / 4.0)))


def k_schedule(config):
    """Truncation size for each sample size of the grid"""
    d = config.smoothness['d']
    if isinstance(config.k_schedule, list):
        return list(config.k_schedule)
    if isinstance(config.k_schedule, dict):
        c, p = config.k_schedule['c'], config.k_schedule['p']
        return [int(math.ceil(c * n ** p)) for n in config.n_grid]
    return [default_k(n, d, config.smoothness['gamma']) for n in config.n_grid]


def auto_nuisance_level(n, d, smoothness):
    """Haar level with about n^(d/(2s+d)) cells, s the smaller of the smoothness of a and b"""
    s = min(smoothness['alpha'], smoothness['beta'])
    return max(0, int(round(math.log2(n ** (d / (2.0 * s + d))) / d)))


class Experiment(object):
    """The objects built once from a configuration and shared by all replications"""

    def __init__(self, config):
        self.config = config
        kind_args = {'propensity': config.propensity} if config.kind == 'ate' else {}
        self.kind = get_kind(config.kind, **kind_args)
        truth = dict(config.truth)
        ttype = truth.pop('type')
        if ttype == 'discrete':
            truth['kind'] = config.kind
            if config.kind == 'ate':
                truth['propensity'] = config.propensity
            self.truth = common.discrete_model_from_dict(truth, where='truth')
            self.kind = self.truth.kind
            self.chi = self.truth.chi()
        else:
            sm = config.smoothness
            args = {'levels': truth.get('levels', 6)}
            if config.quadrature_level is not None:
                args['quadrature_level'] = config.quadrature_level
            self.truth = artificial.continuous_truth(self.kind, sm['alpha'], sm['beta'], sm['gamma'], sm['d'], **args)
            self.chi = model.functional_chi(self.truth)
        self.fixed = None
        if config.fit_mode == 'fixed':
            values = common.fit_from_dict(config.fixed_fit, self.truth.J, where='fixed_fit')
            self.fixed = oracle.fixed_fit(self.truth, values['a_hat'], values['b_hat'], values['f_hat'])
        elif config.fit_mode == 'truth':
            if self.discrete:
                self.fixed = oracle.fixed_fit(self.truth, self.truth.a, self.truth.b)
            else:
                self.fixed = NuisanceFit.from_params(self.truth, self.kind)

    @property
    def discrete(self):
        return isinstance(self.truth, DiscreteModel)

    def truncation_basis(self, k):
        """
        Basis of the second order estimator for the truncation size k. On continuous truths k is
        rounded down to a whole Haar level, so every k < 2^d (k = 0 included) gives the level 0
        system, the constant function; leave 'second' out of the estimators for first order runs.
        """
        if self.discrete:
            return AtomBasis.indicator(self.truth.J, min(k, self.truth.J))
        d = self.config.smoothness['d']
        return Haar.build_tensor_haar(d, Haar.level_for_size(k, d))

    def nuisance_basis(self, n):
        if self.discrete:
            return AtomBasis.indicator(self.truth.J)
        d = self.config.smoothness['d']
        level = self.config.nuisance_level
        if level == 'auto':
            level = auto_nuisance_level(n, d, self.config.smoothness)
        return Haar.build_tensor_haar(d, level)


def replicate(experiment, n, k, rep):
    """
    One replication at sample size n and truncation size k
    :return: tuple (rep, dict estimator -> estimate, k_used, error message or None)
    """
    config = experiment.config
    data_seed, split_seed = np.random.SeedSequence(config.seed, spawn_key=(n, rep)).spawn(2)
    basis = experiment.truncation_basis(k) if 'second' in config.estimators else None
    try:
        data = artificial.generate_dataset(experiment.truth, experiment.kind, n, seed=data_seed)
        if experiment.fixed is not None:
            rpt = report.estimate_on_fold(data, experiment.fixed, experiment.kind, basis,
                                          projection_weight=config.projection_weight)
        else:
            rpt = report.estimate(data, experiment.kind, basis, nuisance_basis=experiment.nuisance_basis(n),
                                  folds=config.folds, seed=split_seed, clip=config.clip,
                                  projection_weight=config.projection_weight)
    except (HOIFError, np.linalg.LinAlgError, FloatingPointError) as ex:
        return rep, {}, None, "{}: {}".format(type(ex).__name__, ex)
    return rep, {e: rpt.estimate(e) for e in config.estimators}, k if basis is None else basis.size, None


def run_experiment(config, **kwargs):
    """
    Run a Monte Carlo experiment
    :param config: ExperimentConfig
    :keyword
        progress: if True a progress bar is displayed, default False
        n_jobs: number of parallel jobs, default config.n_jobs
    :return: ResultTable sorted by (estimator, n, k)
    """
    experiment = Experiment(config)
    n_jobs = kwargs.get('n_jobs', config.n_jobs)
    progress = kwargs.get('progress', False)
    R = config.replications
    logger.info("Experiment %s (%s fit): n in %s, %d replications, true chi = %.12g",
                experiment.kind, config.fit_mode, config.n_grid, R, experiment.chi)

    table = ResultTable()
    for n, k in zip(config.n_grid, k_schedule(config)):
        reps = tqdm(range(R), desc="n={} k={}".format(n, k), disable=not progress)
        if n_jobs == 1:
            results = [replicate(experiment, n, k, rep) for rep in reps]
        else:
            results = Parallel(n_jobs=n_jobs)(delayed(replicate)(experiment, n, k, rep) for rep in reps)
        results = sorted(results, key=lambda r: r[0])

        failures = [r for r in results if r[3] is not None]
        for rep, _, _, message in failures:
            logger.warning("Replication %d at n=%d failed: %s", rep, n, message)
        if len(failures) > MAX_FAILURE_RATE * R:
            raise ExperimentError("{} of {} replications failed at n={} (first error: {})"
                                  .format(len(failures), R, n, failures[0][3]))
        done = [r for r in results if r[3] is None]
        k_used = done[0][2] if done and done[0][2] is not None else k
        for estimator in config.estimators:
            estimates = [r[1][estimator] for r in done]
            if estimates:
                row = {'mean': Measures.mean(estimates), 'bias': Measures.bias(estimates, experiment.chi),
                       'variance': Measures.variance(estimates), 'rmse': Measures.rmse(estimates, experiment.chi)}
            else:
                row = {'mean': float('nan'), 'bias': float('nan'), 'variance': float('nan'), 'rmse': float('nan')}
            table.append(estimator=estimator, n=n, k=k_used, replications=len(estimates),
                         failures=len(failures), seed=config.seed, **row)
    logger.info("Experiment finished: %d rows", len(table))
    return table.sorted()
