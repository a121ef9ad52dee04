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
"""
The subcommands.

Every command reads its inputs from :mod:`liseq.config`, prints its result on
standard output and returns the process exit status:

* 0: success, or every checked property holds,
* 1: a property does not hold,
* 2: the input could not be read or a precondition is unmet,
* 3: inconclusive, because a bound was hit.
"""

from __future__ import annotations

from liseq import config
from liseq.reports.core import comparison_table, corpus_table, dumps, write_json

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def _read_param():
    from liseq.lang import parse_param

    path = config.execution.input_file
    return parse_param(path.read_text(), filename=str(path))


def _bounds():
    return config.bounds.exploration()


def _emit(text):
    """Write a program to ``-o`` or to standard output."""
    output = config.execution.output_file
    if output is None:
        print(text, end='')
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text)
    config.loggers.cli.log(25, 'Program written to %s', output)


def cmd_normalize():
    from liseq.lang import normalize, pretty_print

    _emit(pretty_print(normalize(_read_param())))
    return EXIT_OK


def cmd_transform():
    """``lazy`` and ``eager``: sequentialize the input for ``k`` rounds."""
    from liseq.lang import normalize, pretty_print
    from liseq.seq import sequentialize_eager, sequentialize_lazy

    transform = {'lazy': sequentialize_lazy, 'eager': sequentialize_eager}
    output = transform[config.execution.command](normalize(_read_param()), config.bounds.k)
    _emit(pretty_print(output.program))
    if config.execution.map_file is not None:
        output.instrumentation.to_filename(config.execution.map_file)
        config.loggers.cli.info('Instrumentation map written to %s', config.execution.map_file)
    return EXIT_OK


def cmd_run():
    from liseq.explorer import explore_seq
    from liseq.lang import parse_seq
    from liseq.seq import Instrumentation

    path = config.execution.input_file
    program = parse_seq(path.read_text(), filename=str(path))
    instrumentation = None
    if config.execution.map_file is not None:
        instrumentation = Instrumentation.from_filename(config.execution.map_file)
    report = explore_seq(program, instrumentation, _bounds()).to_dict()
    print(dumps(report), end='')
    write_json(report)
    return EXIT_INCONCLUSIVE if report['truncated'] else EXIT_OK


def cmd_interfaces():
    from liseq.interfaces import InterfaceSearch
    from liseq.lang import normalize

    program = normalize(_read_param())
    search = InterfaceSearch(program, _bounds())
    found = search.enumerate(wrapped=config.execution.wrapped, initial=config.execution.initial)
    report = {
        'k': config.bounds.k,
        'interfaces': [li.to_dict(program.shared) for li in sorted(found)],
        'truncated': sorted(search.truncated),
    }
    print(dumps(report), end='')
    write_json(report)
    return EXIT_INCONCLUSIVE if search.truncated else EXIT_OK


def cmd_pds():
    from liseq.pmpds import BudgetExceededError, build_ak, lower, pds_reach, project

    program = _read_param()
    try:
        system = build_ak(lower(program, _bounds()), config.bounds.k, _bounds())
    except BudgetExceededError as err:
        config.loggers.cli.error('Pushdown system refused: %s', err)
        report = {
            'refused': True,
            'predicted_locations': err.locations,
            'predicted_transitions': err.transitions,
        }
        print(dumps(report), end='')
        write_json(report)
        return EXIT_INCONCLUSIVE
    reached = pds_reach(system)
    hit = reached & system.targets
    report = {
        'k': config.bounds.k,
        'violation': bool(hit),
        'violated_pcs': sorted({view.pc for view in project(system, hit)}),
        'locations': system.locations,
        'transitions': system.transitions,
        'reached': len(reached),
    }
    if config.execution.stats:
        report['stats'] = system.stats
    print(dumps(report), end='')
    write_json(report)
    return EXIT_OK


def cmd_compare():
    from liseq.compare import compare

    comparison = compare(_read_param(), _bounds(), with_pds=config.execution.with_pds)
    print(comparison_table(comparison))
    write_json(comparison.to_dict())
    return comparison.exit_code


def cmd_corpus():
    from liseq.corpus import load_corpus, run_corpus

    entries = load_corpus(config.execution.corpus_dir)
    bounds = _bounds()
    results = run_corpus(
        entries, config.execution.ks, bounds, with_pds=config.execution.with_pds
    )
    print(corpus_table(results))
    write_json([result.to_dict() for result in results])
    statuses = {result.status for result in results}
    if 'mismatch' in statuses:
        return EXIT_MISMATCH
    if 'inconclusive' in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


COMMANDS = {
    'lazy': cmd_transform,
    'eager': cmd_transform,
    'run': cmd_run,
    'interfaces': cmd_interfaces,
    'pds': cmd_pds,
    'compare': cmd_compare,
    'corpus': cmd_corpus,
    'normalize': cmd_normalize,
}


def run_command(command=None):
    """Run ``command`` (default: ``execution.command``) and return its exit status."""
    from liseq.lang import ParseError

    command = command or config.execution.command
    config.execution.command = command
    try:
        return COMMANDS[command]()
    except ParseError as err:
        for diagnostic in err.diagnostics:
            config.loggers.cli.error('%s', diagnostic)
        return EXIT_USAGE
    except (ValueError, FileNotFoundError) as err:
        config.loggers.cli.error('%s', err)
        return EXIT_USAGE

