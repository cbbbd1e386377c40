"""
Command line interface

    python -m pyHOIF simulate CONFIG [--output-dir DIR]
    python -m pyHOIF estimate DATASET --kind KIND [...]
    python -m pyHOIF oracle MODELFILE
    python -m pyHOIF selftest [--cases N]

Exit codes: 0 success, 1 usage error or malformed input, 2 runtime failure.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from pyHOIF.basis import Haar
from pyHOIF.basis.Atoms import AtomBasis
from pyHOIF.benchmarks import benchmarks, selftest
from pyHOIF.common import Util
from pyHOIF.common.Exceptions import ArgumentError, ConfigurationError, DataError, HOIFError, LayoutError, \
    ParameterError
from pyHOIF.data import common
from pyHOIF.estimators import oracle, report
from pyHOIF.models import get_kind


logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = 'HOIF_OUTPUT_DIR'

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2

INPUT_ERRORS = (ConfigurationError, DataError, LayoutError, ArgumentError, ParameterError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog='pyHOIF', description="Higher order influence function estimators")
    parser.add_argument('-v', '--verbose', action='count', default=0, help="more logging (DEBUG)")
    parser.add_argument('-q', '--quiet', action='store_true', help="less logging (WARNING)")
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)

    sim = sub.add_parser('simulate', help="run a Monte Carlo experiment and write its result table")
    sim.add_argument('config', help="JSON experiment configuration")
    sim.add_argument('--output-dir', default=None,
                     help="output directory, default ${} or the working directory".format(OUTPUT_DIR_ENV))
    sim.add_argument('--n-jobs', type=int, default=None, help="parallel jobs, overrides the configuration")
    sim.add_argument('--progress', action='store_true', help="display a progress bar")

    est = sub.add_parser('estimate', help="estimate the functional on a dataset file")
    est.add_argument('dataset', help="delimited text with the columns y1,y2,a,z1..zd")
    est.add_argument('--kind', required=True, choices=['missing', 'covariance', 'ate'])
    est.add_argument('--propensity', type=float, default=0.5, help="known propensity of the ATE model")
    est.add_argument('--level', type=int, default=2, help="Haar level of the truncation basis")
    est.add_argument('--nuisance-level', type=int, default=None, help="Haar level of the nuisance basis")
    est.add_argument('--atoms', type=int, default=None, help="number of atoms of a discrete covariate")
    est.add_argument('--k', type=int, default=None, help="truncation size on a discrete covariate")
    est.add_argument('--first-only', action='store_true', help="skip the second order estimator")
    est.add_argument('--folds', type=int, default=2)
    est.add_argument('--seed', type=int, default=0)
    est.add_argument('--clip', type=float, default=0.05)
    est.add_argument('--projection-weight', default='direct', choices=['direct', 'plugin'])
    est.add_argument('--alpha', type=float, default=0.05, help="level of the normal interval")
    est.add_argument('--save', default=None, help="persist the report with dill")

    orc = sub.add_parser('oracle', help="exact biases of a fixed fit on a discrete model")
    orc.add_argument('model', help="JSON file with the model, the fixed fit and optionally a basis")

    st = sub.add_parser('selftest', help="run the randomized invariant suite")
    st.add_argument('--cases', type=int, default=100)
    st.add_argument('--seed', type=int, default=0)
    return parser


def output_dir(args):
    return args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or os.getcwd()


def cmd_simulate(args):
    config = benchmarks.ExperimentConfig.from_file(args.config)
    kwargs = {'progress': args.progress}
    if args.n_jobs is not None:
        kwargs['n_jobs'] = args.n_jobs
    table = benchmarks.run_experiment(config, **kwargs)
    folder = output_dir(args)
    os.makedirs(folder, exist_ok=True)
    path = os.path.join(folder, config.output)
    table.save(path)
    print(path)
    return EXIT_OK


def _estimation_bases(args, data):
    if data.discrete:
        J = args.atoms if args.atoms is not None else int(np.max(data.z)) + 1
        if np.any(data.z >= J) or np.any(data.z < 0):
            raise DataError("Discrete covariates must lie in 0..{}".format(J - 1))
        k = J if args.k is None else args.k
        return AtomBasis.indicator(J, k), AtomBasis.indicator(J)
    level = args.nuisance_level if args.nuisance_level is not None else args.level
    return Haar.build_tensor_haar(data.dim, args.level), Haar.build_tensor_haar(data.dim, level)


def cmd_estimate(args):
    data, _ = common.read_dataset(args.dataset, discrete=True if args.atoms is not None else None)
    kind = get_kind(args.kind, **({'propensity': args.propensity} if args.kind == 'ate' else {}))
    kind.check_layout(data)
    basis, nuisance_basis = _estimation_bases(args, data)
    rpt = report.estimate(data, kind, None if args.first_only else basis, nuisance_basis=nuisance_basis,
                          folds=args.folds, seed=args.seed, clip=args.clip,
                          projection_weight=args.projection_weight)
    if args.save:
        Util.persist_obj(rpt, args.save)
    print(json.dumps(rpt.to_dict(args.alpha), indent=2, default=float))
    return EXIT_OK


def cmd_oracle(args):
    dmodel, values, basis = common.load_oracle_file(args.model)
    fit = oracle.fixed_fit(dmodel, values['a_hat'], values['b_hat'], values['f_hat'])
    enumerated, formula = oracle.exact_bias_first_order(dmodel, fit)
    print("chi {:.17g}".format(dmodel.chi()))
    print("first_order_bias {:.17g}".format(enumerated))
    print("first_order_bias_formula {:.17g}".format(formula))
    if basis is not None:
        pk = oracle.true_projection_kernel(dmodel, basis)
        enumerated, formula = oracle.exact_bias_second_order(dmodel, fit, pk)
        print("second_order_bias {:.17g}".format(enumerated))
        print("second_order_bias_formula {:.17g}".format(formula))
    return EXIT_OK


def cmd_selftest(args):
    results = selftest.run_selftest(cases=args.cases, seed=args.seed)
    for result in results:
        print(repr(result))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


COMMANDS = {'simulate': cmd_simulate, 'estimate': cmd_estimate, 'oracle': cmd_oracle, 'selftest': cmd_selftest}


def cli_main(argv=None):
    """
    Run the command line interface
    :param argv: arguments without the program name, default sys.argv[1:]
    :return: exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: {}".format(', '.join(COMMANDS)))
    except UsageError as ex:
        print("pyHOIF: error: {}".format(ex), file=sys.stderr)
        return EXIT_USAGE

    Util.setup_logging(-1 if args.quiet else args.verbose)
    try:
        return COMMANDS[args.command](args)
    except INPUT_ERRORS as ex:
        field = getattr(ex, 'field', None)
        where = " (field '{}')".format(field) if field else ""
        print("pyHOIF {}: invalid input{}: {}".format(args.command, where, ex), file=sys.stderr)
        return EXIT_USAGE
    except (HOIFError, OSError) as ex:
        logger.error("%s failed: %s", args.command, ex)
        print("pyHOIF {}: {}: {}".format(args.command, type(ex).__name__, ex), file=sys.stderr)
        return EXIT_FAILURE
