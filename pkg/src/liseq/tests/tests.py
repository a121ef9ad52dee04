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
"""Utilities and mocks for testing and documentation building."""

import shutil
from contextlib import contextmanager
from pathlib import Path
from tempfile import mkdtemp

from toml import loads

from liseq.data import load as load_data

_RESET = ('input_file', 'output_file', 'map_file', 'json_file', 'corpus_dir', 'ks', 'work_dir')


@contextmanager
def mock_config():
    """Create a mock config for documentation and testing purposes."""
    from liseq import config

    filename = load_data('tests/config.toml').resolve()
    settings = loads(filename.read_text())
    for name in _RESET:
        setattr(config.execution, name, None)
    config.execution.debug = []
    for sectionname, configs in settings.items():
        if sectionname != 'environment':
            section = getattr(config, sectionname)
            section.load(configs, init=False)

    config.bounds.init()
    config.loggers.init()

    config.execution.work_dir = Path(mkdtemp())
    config.execution.init()

    yield

    shutil.rmtree(config.execution.work_dir, ignore_errors=True)
    for name in _RESET:
        setattr(config.execution, name, None)
