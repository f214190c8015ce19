import argparse

from sparse_fading.harness.experiments import EXPERIMENTS

COMMANDS = ('gen', 'recover', 'sweep', 'bounds', 'design', 'validate')


def add_common_args(parser):
    parser.add_argument('--config', dest='config',
                        help='key = value file overriding the defaults',
                        default=None)
    parser.add_argument('--seed', dest='seed', type=int, default=None,
                        help='Master seed of the run.')
    parser.add_argument('--out', dest='out', default=None,
                        help='Output path (CSV, or directory for gen).')
    parser.add_argument('--trials', dest='trials', type=int, default=None,
                        help='Trials per grid point.')
    parser.add_argument('--experiment', dest='experiment', default=None,
                        choices=EXPERIMENTS, help='Experiment id.')
    parser.add_argument('--prefix', dest='prefix', default=None,
                        help='Prefix for the logging.')
    parser.add_argument('--use_wandb', dest='use_wandb',
                        help='Send metrics to Weights & Biases.',
                        action='store_true')
    parser.set_defaults(use_wandb=None)


def parse_args(args):
    parser = argparse.ArgumentParser(
        description='Sparse recovery over fading multiple access channels')
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('gen', help='Draw a signal and an ensemble.')
    recover = commands.add_parser('recover', help='Recover one signal.')
    sweep = commands.add_parser('sweep', help='Run a Monte Carlo sweep.')
    bounds = commands.add_parser('bounds',
                                 help='Evaluate the measurement bounds.')
    design = commands.add_parser('design',
                                 help='Design transmission probabilities.')
    validate = commands.add_parser('validate',
                                   help='Check the statistical model.')
    for sub in (gen, recover, sweep, bounds, design, validate):
        add_common_args(sub)

    recover.add_argument('--input', dest='input', default=None,
                         help='Directory written by gen, drawn from the '
                              'seed if omitted.')
    recover.add_argument('--oracle', dest='oracle', action='store_true',
                         help='Use support enumeration instead of l1.')
    recover.set_defaults(oracle=False)

    sweep.add_argument('--num_workers', dest='num_workers', type=int,
                       default=None, help='Worker processes.')
    sweep.add_argument('--resume', dest='resume', action='store_true',
                       help='Skip grid points already in the partial file.')
    sweep.set_defaults(resume=None)

    design.add_argument('--nu', dest='nu', default=None,
                        help='Comma separated channel scales.')
    design.add_argument('--nu_file', dest='nu_file', default=None,
                        help='CSV file holding the channel scales.')

    return parser.parse_args(args)


def config_overrides(args) -> dict:
    """Flags that were given on the command line, as config values"""
    names = ('seed', 'out', 'trials', 'experiment', 'prefix', 'use_wandb',
             'num_workers', 'resume')
    return {name: getattr(args, name) for name in names
            if getattr(args, name, None) is not None}
