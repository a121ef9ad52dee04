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
Explicit-state exploration of sequential programs.

:class:`SeqExplorer` enumerates every state of a sequential program over
finite domains, deduplicating on the globals and the full call stack. Given
the :class:`~liseq.seq.common.Instrumentation` of a generated program it also
reports, in terms of the source program:

* the localized states at which copies of source statements execute,
* the calls to the thread procedure and what nested ones return,
* violations and runtime faults at copied statements.

Thread simulations are bounded by ``max_threads`` (nested thread frames for
lazy output, simulated threads for eager output) and each simulated thread's
stack by ``max_depth``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from . import config
from .lang import ast
from .machine import ASSERTION, Fail, compile_seq
from .oracle import (
    TRUNCATED_DEPTH,
    TRUNCATED_STEPS,
    ExplorationBounds,
    LocalizedState,
    RuntimeErrorRecord,
    Violation,
    localized_to_dict,
)
from .seq.common import NESTED, Instrumentation


class ThreadCall(NamedTuple):
    """Inputs of a nested thread call; ``nested`` when made from another thread."""

    u: tuple
    v: tuple
    bound: int
    nested: bool


class ThreadReturn(NamedTuple):
    u: tuple
    v: tuple
    bound: int
    result: tuple


@dataclass(frozen=True)
class ExplorerReport:
    violations: frozenset
    errors: frozenset
    localized: frozenset
    calls: frozenset
    returns: frozenset
    finals: frozenset
    truncated: frozenset
    states: int = 0

    @property
    def violated(self) -> bool:
        return bool(self.violations)

    def to_dict(self) -> dict:
        return {
            'violations': [
                {'pc': v.pc, 'localized': localized_to_dict(v.localized)}
                for v in sorted(self.violations)
            ],
            'errors': [
                {'kind': e.kind, 'pc': e.pc, 'localized': localized_to_dict(e.localized)}
                for e in sorted(self.errors)
            ],
            'localized_count': len(self.localized),
            'thread_calls': len(self.calls),
            'thread_returns': [
                {'u': list(r.u), 'v': list(r.v), 'bound': r.bound, 'result': list(r.result)}
                for r in sorted(self.returns)
            ],
            'states': self.states,
            'truncated': sorted(self.truncated),
        }


class SeqExplorer:
    """Reachability over one sequential program."""

    def __init__(
        self,
        program: ast.SeqProgram,
        instrumentation: Instrumentation | None = None,
        bounds: ExplorationBounds | None = None,
        *,
        order: str = 'bfs',
    ):
        if order not in ('bfs', 'dfs'):
            raise ValueError(f'unknown search order {order!r}')
        for decl in program.globals:
            if not decl.type.finite:
                raise ValueError(f"global '{decl.name}' has an unbounded domain")
        self.program = program
        self.instrumentation = instrumentation
        self.bounds = bounds or config.bounds.exploration()
        self.order = order
        self.machine = compile_seq(program)
        self.global_index = {decl.name: i for i, decl in enumerate(program.globals)}

        self.tags: dict[int, int] = {}
        self.frames: dict[int, tuple] = {}
        self.thread = None
        self.shared_at: tuple[int, ...] = ()
        self.round_at: int | None = None
        self.copies_at: tuple[tuple[int, ...], ...] = ()
        if instrumentation is not None:
            self.tags = instrumentation.tags
            self.thread = self.machine.index[instrumentation.thread_proc]
            if instrumentation.round_var is None:
                self.shared_at = tuple(self.global_index[n] for n in instrumentation.shared)
            else:
                self.round_at = self.global_index[instrumentation.round_var]
                self.copies_at = tuple(
                    tuple(self.global_index[n] for n in copy)
                    for copy in instrumentation.round_copies
                )
            for name, frame in instrumentation.procedures.items():
                proc = self.machine.procedure(name)
                self.frames[proc.pid] = self._frame_layout(proc, frame)

    def _frame_layout(self, proc, frame_names):
        local_index = {decl.name: i for i, decl in enumerate(proc.variables)}
        layout = []
        for name in sorted(frame_names):
            if name in local_index:
                layout.append((name, True, local_index[name]))
            else:
                layout.append((name, False, self.global_index[name]))
        return tuple(layout)

    # Projections

    def shared_of(self, globals_: tuple) -> tuple:
        """Source shared values; with per-round copies, those of the current round."""
        at = self.shared_at
        if self.round_at is not None:
            at = self.copies_at[globals_[self.round_at] - 1]
        return tuple(globals_[i] for i in at)

    def _shared_pairs(self, globals_):
        names = self.instrumentation.shared
        return tuple(sorted(zip(names, self.shared_of(globals_), strict=True)))

    def localized(self, globals_: tuple, stack: tuple) -> LocalizedState | None:
        """Source view of the top frame when it sits at a copied statement."""
        pid, pc, local, _ = stack[-1]
        if pc not in self.tags or pid not in self.frames:
            return None
        frame = tuple(
            (name, local[i] if is_local else globals_[i])
            for name, is_local, i in self.frames[pid]
        )
        return LocalizedState(self.tags[pc], frame, self._shared_pairs(globals_))

    def raw(self, globals_: tuple, stack: tuple) -> LocalizedState:
        """View of the top frame in terms of the program itself."""
        pid, pc, local, _ = stack[-1]
        proc = self.machine.procedures[pid]
        frame = tuple(sorted(zip((d.name for d in proc.variables), local, strict=True)))
        shared = tuple(
            sorted(zip((d.name for d in self.program.globals), globals_, strict=True))
        )
        return LocalizedState(pc, frame, shared)

    def _depth(self, stack):
        """Frames of the running thread, or of the whole stack outside threads."""
        for i in range(len(stack) - 1, -1, -1):
            if stack[i][0] == self.thread:
                return len(stack) - i
        return len(stack)

    def _width(self, stack):
        return sum(1 for frame in stack if frame[0] == self.thread)

    # Search

    def explore(self) -> ExplorerReport:
        violations, errors, localized = set(), set(), set()
        calls, returns, finals = set(), set(), set()
        truncated = set()
        nested = self.instrumentation is not None and self.instrumentation.nesting == NESTED

        start = (self.machine.default_globals(), (self.machine.frame('main'),), 0)
        seen = {start}
        frontier = deque([start])
        pop = frontier.popleft if self.order == 'bfs' else frontier.pop
        expanded = 0
        while frontier:
            if expanded >= self.bounds.max_steps:
                truncated.add(TRUNCATED_STEPS)
                break
            expanded += 1
            globals_, stack, spawned = pop()
            if not stack:
                if self.instrumentation is not None:
                    finals.add(self.shared_of(globals_))
                continue

            view = self.localized(globals_, stack) if self.tags else None
            if view is not None:
                localized.add(view)
            for out in self.machine.step((), globals_, stack):
                if isinstance(out, Fail):
                    where = view or self.raw(globals_, stack)
                    if out.kind == ASSERTION:
                        violations.add(Violation(where.pc, where))
                    else:
                        errors.add(RuntimeErrorRecord(out.kind, where.pc, where))
                    continue

                count = spawned
                if out.event is not None and self.thread is not None:
                    kind, detail = out.event
                    if kind == 'call' and detail == self.thread:
                        if nested:
                            if self._width(out.stack) > self.bounds.max_threads:
                                continue
                            calls.add(self._call(out.stack))
                        else:
                            if spawned >= self.bounds.max_threads:
                                continue
                            count = spawned + 1
                    elif kind == 'return' and detail[0] == self.thread and nested:
                        u, v, bound = self.instrumentation.thread_arguments(detail[3])
                        returns.add(ThreadReturn(u, v, bound, self.shared_of(out.globals)))

                if len(out.stack) > len(stack) and self._depth(out.stack) > self.bounds.max_depth:
                    truncated.add(TRUNCATED_DEPTH)
                    continue
                node = (out.globals, out.stack, count)
                if node not in seen:
                    seen.add(node)
                    frontier.append(node)

        report = ExplorerReport(
            frozenset(violations),
            frozenset(errors),
            frozenset(localized),
            frozenset(calls),
            frozenset(returns),
            frozenset(finals),
            frozenset(truncated),
            expanded,
        )
        config.loggers.explorer.log(
            15,
            'Explorer expanded %d states; %d localized states, %d violations, %d errors',
            report.states,
            len(report.localized),
            len(report.violations),
            len(report.errors),
        )
        for flag in sorted(report.truncated):
            config.loggers.explorer.warning('Exploration truncated: %s bound hit', flag)
        return report

    def _call(self, stack) -> ThreadCall:
        u, v, bound = self.instrumentation.thread_arguments(stack[-1][3])
        return ThreadCall(u, v, bound, self._width(stack) > 1)


def explore_seq(
    program: ast.SeqProgram,
    instrumentation: Instrumentation | None = None,
    bounds: ExplorationBounds | None = None,
) -> ExplorerReport:
    return SeqExplorer(program, instrumentation, bounds).explore()
