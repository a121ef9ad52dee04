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
"""Fixtures for the test suite."""

import importlib.resources

import pytest


@pytest.fixture(scope='session')
def data_dir():
    """Grab data directory."""
    test_data = importlib.resources.files('liseq.data')
    with importlib.resources.as_file(test_data) as data:
        yield data


@pytest.fixture(scope='session')
def corpus_dir(data_dir):
    return data_dir / 'corpus'


@pytest.fixture(scope='session')
def base_config():
    from liseq.tests.tests import mock_config

    return mock_config


@pytest.fixture(autouse=True)
def _mock_config(base_config):
    """Every test starts from the settings in ``data/tests/config.toml``."""
    with base_config():
        yield


@pytest.fixture
def corpus(corpus_dir):
    """Corpus entries by name."""
    from liseq.corpus import load_corpus

    return {entry.name: entry for entry in load_corpus(corpus_dir)}
