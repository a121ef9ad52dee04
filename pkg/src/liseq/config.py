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
r"""
A Python module to maintain unique, run-wide *liseq* settings.

This module implements the memory structures to keep a consistent, singleton config.
Settings can be written out and read back with :abbr:`ToML (Tom's Markup Language)`,
so that an analysis can be re-run with exactly the bounds that produced a report.
The module has a :py:func:`~liseq.config.to_filename` function to allow writing out
the settings to hard disk in *ToML* format, which looks like:

.. literalinclude:: ../liseq/data/tests/config.toml
   :language: toml
   :name: liseq.toml
   :caption: **Example file representation of liseq settings**.

Configuration sections
----------------------
.. autoclass:: environment
   :members:
.. autoclass:: execution
   :members:
.. autoclass:: bounds
   :members:

Usage
-----
.. code-block:: Python

    from liseq import config
    config.load('liseq.toml')
    # Access configs from any code section as:
    value = config.section.setting
    # Exploration bounds for the oracles and the explorer:
    bounds = config.bounds.exploration()

Logging
-------
.. autoclass:: loggers
   :members:

"""

import logging
import os
import sys
from pathlib import Path
from time import strftime
from uuid import uuid4

from . import __version__

CONFIG_FILENAME = 'liseq.toml'

logging.addLevelName(25, 'IMPORTANT')  # Add a new level between INFO and WARNING
logging.addLevelName(15, 'VERBOSE')  # Add a new level between INFO and DEBUG

try:
    from lark import __version__ as _lark_ver
except ImportError:  # pragma: no cover
    _lark_ver = None

# Debug modes are names that influence the exposure of internal details to
# the user, either through additional outputs or increased verbosity
DEBUG_MODES = ('pdb',)


class _Config:
    """An abstract class forbidding instantiation."""

    _paths = ()

    def __init__(self):
        """Avert instantiation."""
        raise RuntimeError('Configuration type is not instantiable.')

    @classmethod
    def load(cls, settings, init=True, ignore=None):
        """Store settings from a dictionary."""
        ignore = ignore or {}
        for k, v in settings.items():
            if k in ignore or v is None:
                continue

            if k in cls._paths:
                setattr(cls, k, Path(v).absolute())
            elif hasattr(cls, k):
                setattr(cls, k, v)

        if init:
            try:
                cls.init()
            except AttributeError:
                pass

    @classmethod
    def get(cls):
        """Return defined settings."""
        out = {}
        for k, v in cls.__dict__.items():
            if k.startswith('_') or v is None:
                continue

            if callable(getattr(cls, k)):
                continue

            if k in cls._paths:
                v = str(v)
            elif isinstance(v, tuple):
                v = list(v)

            out[k] = v
        return out


class environment(_Config):
    """
    Read-only options regarding the platform and environment.

    The ``environment`` section is not loaded in from file,
    only written out when settings are exported.
    This config section is useful when reporting issues.

    """

    cpu_count = os.cpu_count()
    """Number of available CPUs."""
    exec_env = os.name
    """A string representing the execution platform."""
    lark_version = _lark_ver
    """The version of the parsing library."""
    version = __version__
    """*liseq*'s version."""


class execution(_Config):
    """Configure run-level settings."""

    command = None
    """The subcommand being run (``lazy``, ``eager``, ``run``, ``compare``, ...)."""
    input_file = None
    """The program (``.pp`` or ``.sp``) being analysed."""
    output_file = None
    """Where a generated sequential program is written (``-o``)."""
    map_file = None
    """Instrumentation map read by ``run`` or written by ``lazy``/``eager`` (``--map``)."""
    json_file = None
    """Where the machine-readable report is written (``--json``)."""
    corpus_dir = None
    """Root of the regression corpus (``$LISEQ_CORPUS`` or the bundled one)."""
    debug = []
    """Debug mode(s)."""
    log_level = 25
    """Output verbosity."""
    run_uuid = f'{strftime("%Y%m%d-%H%M%S")}_{uuid4()}'
    """Unique identifier of this particular run."""
    stats = False
    """Report sizes and measured constants of the pushdown construction."""
    with_pds = False
    """Include the pushdown cross-check in ``compare``."""
    wrapped = False
    """Only report wrapped interfaces."""
    initial = False
    """Only report initial interfaces."""
    ks = None
    """Round bounds swept by the corpus driver (defaults to the sidecar's keys)."""
    work_dir = None
    """When set, the run's configuration is saved under ``<work_dir>/<run_uuid>``."""

    _paths = (
        'input_file',
        'output_file',
        'map_file',
        'json_file',
        'corpus_dir',
        'work_dir',
    )

    @classmethod
    def init(cls):
        """Resolve the corpus root and expand debug aliases."""
        if cls.corpus_dir is None:
            env_corpus = os.getenv('LISEQ_CORPUS')
            if env_corpus:
                cls.corpus_dir = Path(env_corpus).absolute()
            else:
                from .data import load as load_data

                cls.corpus_dir = load_data('corpus')

        if 'all' in cls.debug:
            cls.debug = list(DEBUG_MODES)


class bounds(_Config):
    """Bounds of the exploration and of the pushdown construction."""

    k = 2
    """Number of rounds of the schedules under analysis."""
    max_threads = 3
    """Largest thread count the oracles quantify over."""
    max_steps = 1_000_000
    """Budget of distinct states an exploration may expand."""
    max_depth = 8
    """Largest call-stack depth of one thread."""
    int_range = (0, 15)
    """Range given to ``int`` declarations without explicit bounds (``None``: unbounded)."""
    pds_budget = 5_000_000
    """Largest predicted number of control locations ``build_ak`` accepts."""

    @classmethod
    def init(cls):
        """Normalize values read from the command line or a ToML file."""
        if cls.int_range is not None:
            lo, hi = cls.int_range
            cls.int_range = (int(lo), int(hi))

    @classmethod
    def exploration(cls):
        """Return the :class:`~liseq.oracle.ExplorationBounds` of these settings."""
        from .oracle import ExplorationBounds

        return ExplorationBounds(
            k=cls.k,
            max_threads=cls.max_threads,
            max_steps=cls.max_steps,
            max_depth=cls.max_depth,
        )


class loggers:
    """Keep loggers easily accessible (see :py:func:`init`)."""

    _fmt = '%(asctime)s,%(msecs)d %(name)-2s %(levelname)-2s:\n\t %(message)s'
    _datefmt = '%y%m%d-%H:%M:%S'

    default = logging.getLogger()
    """The root logger."""
    cli = logging.getLogger('cli')
    """Command-line interface logging."""
    lang = logging.getLogger('liseq.lang')
    """Parsing, checking and normalization."""
    oracle = logging.getLogger('liseq.oracle')
    """The interleaving oracle and the interface enumerator."""
    seq = logging.getLogger('liseq.seq')
    """The lazy and eager transformations."""
    explorer = logging.getLogger('liseq.explorer')
    """The sequential explorer."""
    pds = logging.getLogger('liseq.pds')
    """Pushdown construction and saturation."""

    @classmethod
    def init(cls):
        """
        Set the log level, initialize all loggers into :py:class:`loggers`.

            * Add new logger levels (25: IMPORTANT, and 15: VERBOSE).
            * Add a new sub-logger (``cli``).
            * Logger configuration.

        """
        if not cls.default.hasHandlers():
            _handler = logging.StreamHandler(stream=sys.stderr)
            _handler.setFormatter(logging.Formatter(fmt=cls._fmt, datefmt=cls._datefmt))
            cls.default.addHandler(_handler)
        cls.default.setLevel(execution.log_level)
        for logger in (cls.cli, cls.lang, cls.oracle, cls.seq, cls.explorer, cls.pds):
            logger.setLevel(execution.log_level)


def from_dict(settings, init=True, ignore=None):
    """Read settings from a flat dictionary.

    Arguments
    ---------
    setting : dict
        Settings to apply to any configuration
    init : `bool` or :py:class:`~collections.abc.Container`
        Initialize all, none, or a subset of configurations.
    ignore : :py:class:`~collections.abc.Container`
        Collection of keys in ``setting`` to ignore
    """

    # Accept global True/False or container of configs to initialize
    def initialize(x):
        return init if init in (True, False) else x in init

    execution.load(settings, init=initialize('execution'), ignore=ignore)
    bounds.load(settings, init=initialize('bounds'), ignore=ignore)

    loggers.init()


def load(filename, skip=None, init=True):
    """Load settings from file.

    Arguments
    ---------
    filename : :py:class:`os.PathLike`
        TOML file containing liseq configuration.
    skip : dict or None
        Sets of values to ignore during load, keyed by section name
    init : `bool` or :py:class:`~collections.abc.Container`
        Initialize all, none, or a subset of configurations.
    """
    from toml import loads

    skip = skip or {}

    # Accept global True/False or container of configs to initialize
    def initialize(x):
        return init if init in (True, False) else x in init

    filename = Path(filename)
    settings = loads(filename.read_text())
    for sectionname, configs in settings.items():
        if sectionname != 'environment':
            section = getattr(sys.modules[__name__], sectionname)
            ignore = skip.get(sectionname)
            section.load(configs, ignore=ignore, init=initialize(sectionname))


def get(flat=False):
    """Get config as a dict."""
    settings = {
        'environment': environment.get(),
        'execution': execution.get(),
        'bounds': bounds.get(),
    }
    if not flat:
        return settings

    return {
        '.'.join((section, k)): v
        for section, configs in settings.items()
        for k, v in configs.items()
    }


def dumps():
    """Format config into toml."""
    from toml import dumps

    return dumps(get())


def to_filename(filename):
    """Write settings to file."""
    filename = Path(filename)
    filename.write_text(dumps())
