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
"""The program language: syntax trees, reading, checking and printing."""

from .diagnostics import Diagnostic, ParseError
from .normalize import is_normalized, normalize
from .parser import parse_param, parse_seq
from .printer import pretty_print

__all__ = [
    'Diagnostic',
    'ParseError',
    'is_normalized',
    'normalize',
    'parse_param',
    'parse_seq',
    'pretty_print',
]
