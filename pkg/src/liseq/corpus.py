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
The regression corpus.

A corpus is a directory of parameterized programs (``*.pp``), each next to a
YAML sidecar with the verdicts it is expected to produce::

    description: one thread sets the flag another asserts
    int_range: [0, 3]
    violation: {1: false, 2: true, 3: true}
    runtime_error: false
    eager_speculative: {1: false, 2: true, 3: true}
    pds: true

``violation`` is keyed by the number of rounds; ``runtime_error`` and
``eager_speculative`` are either keyed the same way or hold for every round
bound. ``pds: true`` marks programs small enough for the pushdown
cross-check, which must then agree with the oracle. The optional keys are only
checked when present.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from . import config
from .compare import Comparison, compare
from .lang import ast, parse_param
from .oracle import ExplorationBounds


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    description: str = ''
    int_range: tuple[int, int] | None = None
    violation: dict = field(default_factory=dict)
    runtime_error: bool | dict | None = None
    eager_speculative: bool | dict | None = None
    pds: bool = False

    @classmethod
    def from_sidecar(cls, path: Path) -> CorpusEntry:
        sidecar = path.with_suffix('.yml')
        meta = yaml.safe_load(sidecar.read_text()) if sidecar.exists() else None
        meta = meta or {}
        int_range = meta.get('int_range')
        return cls(
            name=path.stem,
            path=path,
            description=meta.get('description', ''),
            int_range=tuple(int_range) if int_range is not None else None,
            violation={int(k): bool(v) for k, v in (meta.get('violation') or {}).items()},
            runtime_error=_per_round(meta.get('runtime_error')),
            eager_speculative=_per_round(meta.get('eager_speculative')),
            pds=bool(meta.get('pds', False)),
        )

    def program(self) -> ast.ParamProgram:
        int_range = self.int_range if self.int_range is not None else config.bounds.int_range
        return parse_param(self.path.read_text(), filename=str(self.path), int_range=int_range)


@dataclass(frozen=True)
class CorpusResult:
    entry: CorpusEntry
    comparison: Comparison
    differences: tuple[str, ...] = ()

    @property
    def status(self) -> str:
        if self.differences and not self.comparison.truncated:
            return 'mismatch'
        return self.comparison.status

    def to_dict(self) -> dict:
        return {
            'name': self.entry.name,
            'status': self.status,
            'differences': list(self.differences),
            'comparison': self.comparison.to_dict(),
        }


def load_corpus(root: Path | str | None = None) -> list[CorpusEntry]:
    """Every program of the corpus under ``root``, sorted by name."""
    root = Path(root or config.execution.corpus_dir or _bundled())
    if not root.is_dir():
        raise FileNotFoundError(f'corpus directory not found: <{root}>')
    return [CorpusEntry.from_sidecar(path) for path in sorted(root.glob('*.pp'))]


def _bundled() -> Path:
    from .data import load as load_data

    return load_data('corpus')


def _per_round(value):
    if isinstance(value, dict):
        return {int(k): bool(v) for k, v in value.items()}
    return value


def _at(value, k):
    return value.get(k) if isinstance(value, dict) else value


def differences(entry: CorpusEntry, comparison: Comparison) -> tuple[str, ...]:
    """Expected verdicts of ``entry`` that ``comparison`` contradicts."""
    k = comparison.k
    observed = {
        'violation': comparison.verdicts['oracle'],
        'runtime_error': bool(comparison.oracle.errors),
        'eager_speculative': comparison.verdicts['eager_speculative'],
    }
    expected = {
        'violation': entry.violation.get(k),
        'runtime_error': _at(entry.runtime_error, k),
        'eager_speculative': _at(entry.eager_speculative, k),
    }
    found = list(comparison.failed)
    for key, value in expected.items():
        if value is not None and observed[key] != value:
            found.append(f'{key}: expected {value}, got {observed[key]}')
    return tuple(found)


def check_entry(
    entry: CorpusEntry,
    k: int,
    bounds: ExplorationBounds | None = None,
    *,
    with_pds: bool = False,
) -> CorpusResult:
    bounds = replace(bounds or config.bounds.exploration(), k=k)
    comparison = compare(entry.program(), bounds, with_pds=with_pds and entry.pds)
    result = CorpusResult(entry, comparison, differences(entry, comparison))
    config.loggers.cli.log(
        25 if result.status == 'ok' else 30,
        'Corpus program %s at k=%d: %s',
        entry.name,
        k,
        result.status,
    )
    return result


def run_corpus(
    entries: list[CorpusEntry],
    ks=None,
    bounds: ExplorationBounds | None = None,
    *,
    with_pds: bool = False,
) -> list[CorpusResult]:
    """Check every entry at each of ``ks`` (default: the rounds its sidecar lists)."""
    results = []
    for entry in entries:
        for k in ks or sorted(entry.violation) or [config.bounds.k]:
            results.append(check_entry(entry, k, bounds, with_pds=with_pds))
    return results
