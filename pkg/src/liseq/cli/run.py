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
"""The ``liseq`` command."""

from liseq import config

EXITCODE: int = -1


def main(args=None):
    """Entry point."""
    from liseq.cli.commands import run_command
    from liseq.cli.parser import parse_args

    parse_args(args)

    if 'pdb' in config.execution.debug:
        from liseq.utils.debug import setup_exceptionhook

        setup_exceptionhook()

    if config.execution.work_dir is not None:
        config_file = config.execution.work_dir / config.execution.run_uuid / 'config.toml'
        config_file.parent.mkdir(exist_ok=True, parents=True)
        config.to_filename(config_file)

    config.loggers.cli.log(
        15,
        '\n'.join(['liseq config:'] + [f'\t\t{s}' for s in config.dumps().splitlines()]),
    )
    config.loggers.cli.log(25, 'liseq %s started', config.execution.command)

    global EXITCODE
    EXITCODE = run_command()
    config.loggers.cli.log(
        25, 'liseq %s finished with exit status %d', config.execution.command, EXITCODE
    )
    raise SystemExit(EXITCODE)


if __name__ == '__main__':
    raise RuntimeError(
        'liseq/cli/run.py should not be run directly;\n'
        'Please `pip install` liseq and use the `liseq` command'
    )
