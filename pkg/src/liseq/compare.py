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
Differential checks between the oracle and the sequentializations.

:func:`compare` runs, for one program and one round bound, the interleaving
oracle, the explorer on the lazy and on the eager output, and optionally the
pushdown backend. The resulting :class:`Comparison` lists which expected
properties hold; its :attr:`~Comparison.status` is ``ok``, ``mismatch`` or,
when an exploration was truncated, ``inconclusive``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import config
from .explorer import ExplorerReport, SeqExplorer
from .lang import ast
from .lang.normalize import is_normalized, normalize
from .machine import LOCAL, compile_expr, outcomes
from .oracle import ExplorationBounds, LocalizedState, OracleReport, ParamOracle
from .seq.eager import sequentialize_eager
from .seq.lazy import sequentialize_lazy

OK = 'ok'
MISMATCH = 'mismatch'
INCONCLUSIVE = 'inconclusive'

EXIT_CODES = {OK: 0, MISMATCH: 1, INCONCLUSIVE: 3}


def assertions(program: ast.ParamProgram) -> dict[int, ast.Expr]:
    """Conditions of the ``assert`` statements of ``program`` by label."""
    found = {}
    blocks = [program.init]
    blocks += [proc.body for process in program.processes for proc in process.procedures]
    for block in blocks:
        for stmt in ast.walk(block):
            if isinstance(stmt, ast.Assert):
                found[stmt.pc] = stmt.cond
    return found


def fails(cond: ast.Expr, view: LocalizedState) -> bool:
    """Whether ``cond`` can evaluate to false on ``view``."""
    values = dict(view.shared) | dict(view.frame)
    order = sorted(values)
    index = {name: i for i, name in enumerate(order)}
    fn, count = compile_expr(cond, lambda name: (LOCAL, index[name], None))
    env = ((), (), tuple(values[name] for name in order))
    return any(value is False for value in outcomes(fn, count, env))


def speculative(report: ExplorerReport, program: ast.ParamProgram) -> frozenset:
    """Views at which the eager output checks a source assertion and finds it false."""
    conds = assertions(program)
    return frozenset(
        view for view in report.localized if view.pc in conds and fails(conds[view.pc], view)
    )


@dataclass(frozen=True)
class Comparison:
    k: int
    oracle: OracleReport
    lazy: ExplorerReport
    eager: ExplorerReport
    speculative: frozenset
    pds: bool | None = None
    pds_stats: dict = field(default_factory=dict)
    properties: dict = field(default_factory=dict)

    @property
    def truncated(self) -> frozenset:
        return self.oracle.truncated | self.lazy.truncated | self.eager.truncated

    @property
    def verdicts(self) -> dict:
        return {
            'oracle': self.oracle.violated,
            'lazy': self.lazy.violated,
            'eager_validated': self.eager.violated,
            'eager_speculative': bool(self.speculative or self.eager.errors),
            'pds': self.pds,
        }

    @property
    def laziness_gap(self) -> bool:
        """The eager output simulates a source statement on an unreachable view."""
        return not self.eager.localized <= self.oracle.reachable

    @property
    def failed(self) -> list[str]:
        return sorted(name for name, holds in self.properties.items() if not holds)

    @property
    def status(self) -> str:
        if self.truncated:
            return INCONCLUSIVE
        return MISMATCH if self.failed else OK

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return {
            'k': self.k,
            'status': self.status,
            'verdicts': self.verdicts,
            'laziness_gap': self.laziness_gap,
            'properties': dict(sorted(self.properties.items())),
            'failed': self.failed,
            'runtime_errors': {
                'oracle': sorted({e.kind for e in self.oracle.errors}),
                'lazy': sorted({e.kind for e in self.lazy.errors}),
                'eager': sorted({e.kind for e in self.eager.errors}),
            },
            'states': {
                'oracle': self.oracle.states,
                'lazy': self.lazy.states,
                'eager': self.eager.states,
            },
            'pds': self.pds_stats,
            'truncated': sorted(self.truncated),
        }


def _run_pds(program, k, bounds):
    from .pmpds import BudgetExceededError, build_ak, lower, pds_reach

    try:
        system = build_ak(lower(program, bounds), k, bounds)
    except BudgetExceededError as err:
        config.loggers.pds.warning('Pushdown cross-check skipped: %s', err)
        return None, {'skipped': str(err)}
    reached = pds_reach(system)
    stats = dict(system.stats, reached=len(reached))
    return bool(reached & system.targets), stats


def compare(
    program: ast.ParamProgram,
    bounds: ExplorationBounds | None = None,
    *,
    with_pds: bool = False,
) -> Comparison:
    """Cross-check every analysis of ``program`` at ``bounds.k`` rounds."""
    bounds = bounds or config.bounds.exploration()
    if not is_normalized(program):
        program = normalize(program)

    oracle = ParamOracle(program, bounds).explore()
    lazy_output = sequentialize_lazy(program, bounds.k)
    lazy = SeqExplorer(lazy_output.program, lazy_output.instrumentation, bounds).explore()
    eager_output = sequentialize_eager(program, bounds.k)
    eager = SeqExplorer(eager_output.program, eager_output.instrumentation, bounds).explore()

    properties = {
        'lazy_equivalent': oracle.violated == lazy.violated,
        'eager_equivalent': oracle.violated == eager.violated,
        'lazy_is_lazy': lazy.localized <= oracle.reachable,
        'lazy_complete': oracle.reachable <= lazy.localized,
        'runtime_errors_agree': bool(oracle.errors) == bool(lazy.errors),
    }
    pds, pds_stats = None, {}
    if with_pds:
        pds, pds_stats = _run_pds(program, bounds.k, bounds)
        if pds is not None:
            properties['pds_equivalent'] = pds == oracle.violated
            properties['pds_within_envelope'] = pds_stats['within_envelope']

    result = Comparison(
        k=bounds.k,
        oracle=oracle,
        lazy=lazy,
        eager=eager,
        speculative=speculative(eager, program),
        pds=pds,
        pds_stats=pds_stats,
        properties=properties,
    )
    config.loggers.oracle.log(
        25,
        'Comparison at k=%d: %s (oracle=%s, lazy=%s, eager=%s)',
        bounds.k,
        result.status,
        oracle.violated,
        lazy.violated,
        eager.violated,
    )
    for name in result.failed:
        config.loggers.oracle.warning('Property does not hold: %s', name)
    return result
