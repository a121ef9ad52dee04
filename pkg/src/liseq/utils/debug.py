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
"""Post-mortem debugging for ``--debug pdb``."""

import sys


def is_interactive():
    """Return True if all in/outs are tty"""
    return all(stream.isatty() for stream in (sys.stdin, sys.stdout, sys.stderr))


def setup_exceptionhook():
    """Print uncaught exceptions and, on a terminal, open ``pdb`` at the failure."""

    def _pdb_excepthook(exc_type, value, tb):
        import traceback

        traceback.print_exception(exc_type, value, tb)
        if is_interactive():
            import pdb

            pdb.post_mortem(tb)

    sys.excepthook = _pdb_excepthook
