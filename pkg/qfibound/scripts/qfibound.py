import argparse
import sys

from . import experiments
from .plot import plot, PLOT_KINDS
from ..core.configurator import Configurator, EXPERIMENTS
from ..utils.errors import QfiboundError

EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


def _add_run_arguments(parser):
    optional = parser._action_groups.pop()
    optional.add_argument('--config', dest='config', help='yaml configuration filepath; defaults are used when omitted.', default=None)
    optional.add_argument('--seed', dest='seed', help='master seed; overrides the config file.', type=int, default=None)
    optional.add_argument('--workers', dest='workers', help='number of processes to run.', type=int, default=None)
    optional.add_argument('--out', dest='out', help='output directory; overrides the config file.', default=None)
    optional.add_argument('--shots', dest='shots', help='with this argument, eigenvalues are read out from sampled shots.', default=False, action='store_true')
    optional.add_argument('--save_params', dest='save_params', help='with this argument, the trained circuit parameters are saved to hdf5.', default=False, action='store_true')
    parser._action_groups.append(optional)


def get_args(argv=None):
    parser = argparse.ArgumentParser(prog='qfibound', formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    for experiment in EXPERIMENTS:
        _add_run_arguments(subparsers.add_parser(experiment, formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                                 help='run the %s experiment.' % experiment))

    plot_parser = subparsers.add_parser('plot', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                        help='render a result table as svg.')
    optional = plot_parser._action_groups.pop()
    required = plot_parser.add_argument_group('required arguments')
    required.add_argument('--csv', dest='csv', help='result table filepath.', required=True)
    required.add_argument('--kind', dest='kind', help='plot kind.', choices=PLOT_KINDS, required=True)
    optional.add_argument('--out', dest='out', help='svg filepath; next to the table when omitted.', default=None)
    plot_parser._action_groups.append(optional)

    defaults_parser = subparsers.add_parser('defaults', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                            help='print the fully defaulted configuration.')
    defaults_parser.add_argument('--config', dest='config', help='yaml configuration filepath.', default=None)
    return parser.parse_args(argv)


def run_command(argv=None):
    """Run one subcommand and return its exit code."""
    args = get_args(argv)
    try:
        if args.command == 'defaults':
            print(Configurator(args.config).defaults(), end='')
        elif args.command == 'plot':
            print('Saved', plot(args.csv, args.kind, args.out))
        else:
            config = Configurator(args.config).to_experiment_config(args.command, seed=args.seed, workers=args.workers,
                                                                    out=args.out, shots=args.shots,
                                                                    save_params=args.save_params)
            experiments.RUNNERS[args.command](config)
    except QfiboundError as err:
        # Input errors derive from ValueError; everything else is numerical.
        if isinstance(err, ValueError):
            print('ERROR:', err, file=sys.stderr)
            return EXIT_CONFIG_ERROR
        print('ERROR: numerical invariant violated:', err, file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    return 0


def main():
    sys.exit(run_command())


if __name__ == '__main__':
    """
    Usage:
        qfibound {estimate,optimize,m-sweep,purity-sweep,variance-scan,bound-compare}
                 [--config CONFIG] [--seed SEED] [--workers WORKERS] [--out OUT]
                 [--shots] [--save_params]
        qfibound plot --csv CSV --kind {cost,bounds,variance} [--out OUT]
        qfibound defaults [--config CONFIG]
    """
    main()
