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
"""Diagnostics reported while reading programs."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Diagnostic:
    filename: str
    line: int
    column: int
    severity: str
    message: str

    def __str__(self):
        return f'{self.filename}:{self.line}:{self.column}: {self.severity}: {self.message}'


class ParseError(Exception):
    """A program could not be read; carries every diagnostic found."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(sorted(diagnostics))
        super().__init__('\n'.join(str(d) for d in self.diagnostics))

    @property
    def messages(self) -> tuple[str, ...]:
        return tuple(d.message for d in self.diagnostics)


class Reporter:
    """Collects diagnostics for one source file."""

    def __init__(self, filename: str = '<string>'):
        self.filename = filename
        self.diagnostics: list[Diagnostic] = []

    def error(self, node, message: str):
        line = getattr(node, 'line', 0) or 0
        column = getattr(node, 'column', 0) or 0
        self.diagnostics.append(Diagnostic(self.filename, line, column, 'error', message))

    def raise_if_errors(self):
        if any(d.severity == 'error' for d in self.diagnostics):
            raise ParseError(self.diagnostics)
