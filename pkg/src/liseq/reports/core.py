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
Machine-readable and tabular reports.

JSON output is canonical (sorted keys, fixed indentation) so that two runs
with the same configuration write identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from liseq import config


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + '\n'


def write_json(data, filename=None):
    """Write ``data`` to ``filename`` (default: ``execution.json_file``), if any."""
    filename = filename or config.execution.json_file
    if filename is None:
        return None
    filename = Path(filename)
    filename.parent.mkdir(parents=True, exist_ok=True)
    filename.write_text(dumps(data))
    config.loggers.cli.info('Report written to %s', filename)
    return filename


def _cell(value) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    return str(value)


def format_table(headers, rows) -> str:
    """Left-aligned plain-text table."""
    cells = [[_cell(v) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row, strict=True)]
    lines = ['  '.join(h.ljust(w) for h, w in zip(headers, widths, strict=True)).rstrip()]
    lines.append('  '.join('-' * w for w in widths))
    for row in cells:
        lines.append('  '.join(c.ljust(w) for c, w in zip(row, widths, strict=True)).rstrip())
    return '\n'.join(lines)


def comparison_table(comparison) -> str:
    """Verdicts and properties of one :class:`~liseq.compare.Comparison`."""
    verdicts = comparison.verdicts
    rows = [(name, verdicts[name]) for name in verdicts]
    rows.append(('laziness_gap', comparison.laziness_gap))
    rows += [(name, holds) for name, holds in sorted(comparison.properties.items())]
    rows.append(('status', comparison.status))
    return format_table(('check', f'k={comparison.k}'), rows)


def corpus_table(results) -> str:
    rows = [
        (
            result.entry.name,
            result.comparison.k,
            result.comparison.verdicts['oracle'],
            result.comparison.verdicts['lazy'],
            result.comparison.verdicts['eager_validated'],
            result.comparison.verdicts['eager_speculative'],
            result.comparison.verdicts['pds'],
            result.status,
        )
        for result in results
    ]
    headers = ('program', 'k', 'oracle', 'lazy', 'eager', 'speculative', 'pds', 'status')
    return format_table(headers, rows)
