# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
#
# Copyright 2024 The liseq Developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""Parser."""

from liseq import config

COMMANDS = ('lazy', 'eager', 'run', 'interfaces', 'pds', 'compare', 'corpus', 'normalize')


def _build_parser(**kwargs):
    """Build parser object.

    ``kwargs`` are passed to ``argparse.ArgumentParser`` (mainly useful for debugging).
    """

    from argparse import ArgumentDefaultsHelpFormatter, ArgumentParser
    from functools import partial
    from pathlib import Path

    from packaging.version import Version

    def _is_file(path, parser):
        """Ensure a given path exists and it is a file."""
        path = Path(path)
        if not path.is_file():
            raise parser.error(f'Path should point to a file (or symlink of file): <{path}>.')
        return path.absolute()

    def _min_one(value, parser):
        """Ensure an argument is not lower than 1."""
        value = int(value)
        if value < 1:
            raise parser.error("Argument can't be less than one.")
        return value

    def _int_range(value, parser):
        if value.lower() == 'none':
            return 'none'
        try:
            lo, hi = (int(part) for part in value.split(':'))
        except ValueError:
            raise parser.error(f'Integer range should read LO:HI, got <{value}>.') from None
        if lo > hi:
            raise parser.error(f'Empty integer range <{value}>.')
        return (lo, hi)

    verstr = f'liseq v{config.environment.version}'
    currentv = Version(config.environment.version)

    parser = ArgumentParser(
        description=(
            'liseq: lazy and eager sequentialization of parameterized programs '
            f'v{config.environment.version}'
        ),
        formatter_class=ArgumentDefaultsHelpFormatter,
        **kwargs,
    )
    IsFile = partial(_is_file, parser=parser)
    PositiveInt = partial(_min_one, parser=parser)
    IntRange = partial(_int_range, parser=parser)

    parser.add_argument(
        'command',
        choices=COMMANDS,
        help=(
            'lazy/eager: write the sequential program; run: explore a sequential program; '
            'interfaces: list linear interfaces; pds: pushdown reachability; '
            'compare: cross-check every analysis; corpus: regression over the corpus; '
            'normalize: print the normalized program'
        ),
    )
    parser.add_argument(
        'input_file',
        action='store',
        nargs='?',
        type=IsFile,
        help='The program to analyse (.pp, or .sp for "run"); not used by "corpus"',
    )

    g_bounds = parser.add_argument_group('Options bounding the analyses')
    g_bounds.add_argument(
        '-k',
        '--rounds',
        dest='k',
        action='store',
        type=PositiveInt,
        help=f'Number of rounds (default: {config.bounds.k})',
    )
    g_bounds.add_argument(
        '--ks',
        action='store',
        nargs='+',
        type=PositiveInt,
        help='Round bounds swept by "corpus" (default: those listed by each sidecar)',
    )
    g_bounds.add_argument(
        '--max-threads',
        action='store',
        type=PositiveInt,
        help=f'Largest number of threads (default: {config.bounds.max_threads})',
    )
    g_bounds.add_argument(
        '--max-steps',
        action='store',
        type=PositiveInt,
        help=f'States an exploration may expand (default: {config.bounds.max_steps})',
    )
    g_bounds.add_argument(
        '--max-depth',
        action='store',
        type=PositiveInt,
        help=f'Call-stack depth of one thread (default: {config.bounds.max_depth})',
    )
    g_bounds.add_argument(
        '--int-range',
        action='store',
        type=IntRange,
        metavar='LO:HI',
        help='Range of undecorated int declarations, or "none" for unbounded',
    )
    g_bounds.add_argument(
        '--pds-budget',
        action='store',
        type=PositiveInt,
        help='Largest predicted size of the pushdown system',
    )

    g_outputs = parser.add_argument_group('Options for modulating outputs')
    g_outputs.add_argument(
        '-o',
        '--output',
        dest='output_file',
        action='store',
        type=Path,
        help='Where "lazy"/"eager"/"normalize" write the program (default: standard output)',
    )
    g_outputs.add_argument(
        '--map',
        dest='map_file',
        action='store',
        type=Path,
        help='Instrumentation map written by "lazy"/"eager" and read by "run"',
    )
    g_outputs.add_argument(
        '--json',
        dest='json_file',
        action='store',
        type=Path,
        help='Write the machine-readable report to this file',
    )
    g_outputs.add_argument(
        '--stats',
        action='store_true',
        default=False,
        help='Report sizes and measured constants of the pushdown system',
    )
    g_outputs.add_argument(
        '--with-pds',
        action='store_true',
        default=False,
        help='Add the pushdown backend to "compare" and "corpus"',
    )
    g_outputs.add_argument(
        '--wrapped',
        action='store_true',
        default=False,
        help='"interfaces": only report wrapped interfaces',
    )
    g_outputs.add_argument(
        '--initial',
        action='store_true',
        default=False,
        help='"interfaces": only report interfaces starting in an initial state',
    )
    g_outputs.add_argument(
        '--corpus-dir',
        action='store',
        type=Path,
        help='Corpus root for "corpus" (default: $LISEQ_CORPUS, then the bundled corpus)',
    )

    g_other = parser.add_argument_group('Other options')
    g_other.add_argument('--version', action='version', version=verstr)
    g_other.add_argument(
        '-v',
        '--verbose',
        dest='verbose_count',
        action='count',
        default=0,
        help='Increases log verbosity for each occurrence, debug level is -vvv',
    )
    g_other.add_argument(
        '-w',
        '--work-dir',
        action='store',
        type=Path,
        help='Save the configuration of each run under this directory',
    )
    g_other.add_argument(
        '--config-file',
        action='store',
        metavar='FILE',
        help='Use pre-generated configuration file. Values in file will be overridden '
        'by command-line arguments.',
    )
    g_other.add_argument(
        '--debug',
        action='store',
        nargs='+',
        choices=config.DEBUG_MODES + ('all',),
        help="Debug mode(s) to enable. 'all' is alias for all available modes.",
    )

    if currentv.is_devrelease:
        parser.epilog = 'This is a development version.'
    return parser


def parse_args(args=None, namespace=None):
    """Parse args and run further checks on the command line."""

    import logging

    parser = _build_parser()
    opts = parser.parse_args(args, namespace)

    if opts.config_file:
        config.load(opts.config_file, skip={'execution': ('run_uuid',)}, init=False)
        config.loggers.cli.info(f'Loaded previous configuration file {opts.config_file}')

    if opts.command != 'corpus' and opts.input_file is None:
        parser.error(f'the "{opts.command}" command needs an input file')
    if opts.command == 'run' and opts.with_pds:
        parser.error('"--with-pds" applies to "compare" and "corpus" only')

    unbounded = opts.int_range == 'none'
    if unbounded:
        opts.int_range = None

    config.execution.log_level = int(max(25 - 5 * opts.verbose_count, logging.DEBUG))
    config.from_dict(vars(opts))
    if unbounded:
        config.bounds.int_range = None
    return opts
