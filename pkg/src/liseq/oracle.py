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
Brute-force oracle for parameterized programs under k-round schedules.

An execution with ``m`` threads runs ``init`` from an arbitrary shared state,
then schedules threads ``1..m`` in order, ``k`` times over. Each turn lasts any
number of steps, zero included, and may only end outside atomic blocks.
The oracle explores every such execution over finite domains, for every
assignment of processes to threads, and collects the localized states it
meets.

Threads that never get to run are indistinguishable from missing threads,
so only thread counts equal to ``max_threads`` are enumerated; smaller counts
are covered by the idle tail of the schedule.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from . import config
from .lang import ast
from .machine import (
    ASSERTION,
    EXIT,
    INIT,
    Fail,
    compile_init,
    compile_process,
    require_finite,
    valuations,
)

TRUNCATED_STEPS = 'steps'
TRUNCATED_DEPTH = 'depth'


@dataclass(frozen=True)
class ExplorationBounds:
    """Bounds shared by the oracles and the sequential explorer."""

    k: int = 2
    max_threads: int = 3
    max_steps: int = 1_000_000
    max_depth: int = 8

    def __post_init__(self):
        for name in ('k', 'max_threads', 'max_steps', 'max_depth'):
            if getattr(self, name) < 1:
                raise ValueError(f'{name} must be positive, got {getattr(self, name)}')


class LocalizedState(NamedTuple):
    """What the running thread sees: its pc, its frame and the shared state.

    ``frame`` and ``shared`` are tuples of ``(name, value)`` sorted by name.
    """

    pc: int
    frame: tuple
    shared: tuple


class Violation(NamedTuple):
    pc: int
    localized: LocalizedState


class RuntimeErrorRecord(NamedTuple):
    kind: str
    pc: int
    localized: LocalizedState


class ParamState(NamedTuple):
    """A configuration of ``m`` threads; ``active`` counts from 0, ``round`` from 1."""

    active: int
    round: int
    shared: tuple
    threads: tuple  # (globals, stack) per thread


@dataclass(frozen=True)
class OracleReport:
    reachable: frozenset
    violations: frozenset
    errors: frozenset
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
            'reachable_count': len(self.reachable),
            'states': self.states,
            'truncated': sorted(self.truncated),
        }


def localized_to_dict(state: LocalizedState) -> dict:
    return {'pc': state.pc, 'frame': dict(state.frame), 'shared': dict(state.shared)}


def pairs(decls, values) -> tuple:
    return tuple(sorted(zip((d.name for d in decls), values, strict=True)))


class _Budget:
    def __init__(self, steps):
        self.left = steps
        self.truncated = set()


class ParamOracle:
    """Explicit-state semantics of one parameterized program."""

    def __init__(
        self,
        program: ast.ParamProgram,
        bounds: ExplorationBounds | None = None,
        *,
        order: str = 'bfs',
    ):
        if order not in ('bfs', 'dfs'):
            raise ValueError(f'unknown search order {order!r}')
        self.program = program
        self.bounds = bounds or config.bounds.exploration()
        self.order = order
        require_finite(program.shared, 'shared variable')
        for process in program.processes:
            require_finite(process.globals, 'process global')
            for proc in process.procedures:
                require_finite(proc.variables)
                if proc.returns is not None and not proc.returns.finite:
                    raise ValueError(f"procedure '{proc.name}' returns an unbounded type")
        self.machines = [compile_process(p, program.shared) for p in program.processes]
        self._init = None

    # Init

    def _run_init(self):
        machine = compile_init(self.program)
        finals, reachable, violations, errors = set(), set(), set(), set()
        starts = [(s, (machine.frame(INIT),)) for s in valuations(self.program.shared)]
        seen = set(starts)
        frontier = deque(starts)
        while frontier:
            shared, stack = frontier.popleft()
            if not stack:
                finals.add(shared)
                continue
            view = LocalizedState(stack[-1][1], (), pairs(self.program.shared, shared))
            if view.pc != EXIT:
                reachable.add(view)
            for out in machine.step(shared, (), stack):
                if isinstance(out, Fail):
                    _record(out, view, violations, errors)
                    continue
                node = (out.shared, out.stack)
                if node not in seen:
                    seen.add(node)
                    frontier.append(node)
        self._init = (frozenset(finals), reachable, violations, errors)
        return self._init

    def init_outcomes(self) -> frozenset:
        """Shared states ``init`` can produce from an arbitrary start."""
        return (self._init or self._run_init())[0]

    # Transitions

    def maps(self):
        """Assignments of processes to the ``max_threads`` threads."""
        return itertools.product(range(len(self.machines)), repeat=self.bounds.max_threads)

    def initial_states(self, map_, shared_states=None) -> list[ParamState]:
        threads = tuple(
            (self.machines[p].default_globals(), (self.machines[p].frame('main'),))
            for p in map_
        )
        shared_states = self.init_outcomes() if shared_states is None else shared_states
        return [ParamState(0, 1, s, threads) for s in sorted(shared_states)]

    def localized(self, state: ParamState, map_) -> LocalizedState | None:
        """View of the running thread, or ``None`` once it has finished."""
        globals_, stack = state.threads[state.active]
        if not stack:
            return None
        machine = self.machines[map_[state.active]]
        pid, pc, local, _ = stack[-1]
        proc = machine.procedures[pid]
        frame = pairs(proc.variables, local) + pairs(machine.globals, globals_)
        return LocalizedState(pc, tuple(sorted(frame)), pairs(self.program.shared, state.shared))

    def step_local(self, state: ParamState, map_):
        """Successors by one statement of the running thread.

        Returns ``(successors, failures, deep)``; ``deep`` tells that a call was
        dropped for exceeding ``max_depth``.
        """
        machine = self.machines[map_[state.active]]
        globals_, stack = state.threads[state.active]
        successors, failures, deep = [], [], False
        for out in machine.step(state.shared, globals_, stack):
            if isinstance(out, Fail):
                failures.append(out)
            elif len(out.stack) > self.bounds.max_depth:
                deep = True
            else:
                threads = list(state.threads)
                threads[state.active] = (out.globals, out.stack)
                successors.append(state._replace(shared=out.shared, threads=tuple(threads)))
        return successors, failures, deep

    def context_switch(self, state: ParamState, map_) -> list[ParamState]:
        """Hand control to the next thread, moving to the next round after the last one."""
        machine = self.machines[map_[state.active]]
        if not machine.switchable(state.threads[state.active][1]):
            return []
        if state.active + 1 < len(map_):
            return [state._replace(active=state.active + 1)]
        if state.round < self.bounds.k:
            return [state._replace(active=0, round=state.round + 1)]
        return []

    def completes(self, state: ParamState, map_) -> bool:
        """True when the state may end a k-round execution."""
        return (
            state.round == self.bounds.k
            and state.active == len(map_) - 1
            and self.machines[map_[state.active]].switchable(state.threads[state.active][1])
        )

    # Searches

    def _search(self, starts, expand, budget: _Budget):
        seen = set(starts)
        frontier = deque(starts)
        pop = frontier.popleft if self.order == 'bfs' else frontier.pop
        while frontier:
            if budget.left <= 0:
                budget.truncated.add(TRUNCATED_STEPS)
                return
            budget.left -= 1
            for node in expand(pop()):
                if node not in seen:
                    seen.add(node)
                    frontier.append(node)

    def explore(self) -> OracleReport:
        """Every localized state, violation and runtime error within the bounds."""
        _, init_reachable, init_violations, init_errors = self._init or self._run_init()
        reachable, violations, errors = set(init_reachable), set(init_violations), set(init_errors)
        budget = _Budget(self.bounds.max_steps)

        for map_ in self.maps():

            def expand(state, map_=map_):
                view = self.localized(state, map_)
                if view is not None and view.pc != EXIT:
                    reachable.add(view)
                successors, failures, deep = self.step_local(state, map_)
                for failure in failures:
                    _record(failure, view, violations, errors)
                if deep:
                    budget.truncated.add(TRUNCATED_DEPTH)
                return successors + self.context_switch(state, map_)

            self._search(self.initial_states(map_), expand, budget)
            if TRUNCATED_STEPS in budget.truncated:
                break

        report = OracleReport(
            frozenset(reachable),
            frozenset(violations),
            frozenset(errors),
            frozenset(budget.truncated),
            self.bounds.max_steps - budget.left,
        )
        config.loggers.oracle.log(
            15,
            'Oracle expanded %d states; %d localized states, %d violations, %d errors',
            report.states,
            len(report.reachable),
            len(report.violations),
            len(report.errors),
        )
        for flag in sorted(report.truncated):
            config.loggers.oracle.warning('Oracle exploration truncated: %s bound hit', flag)
        return report

    def conforming(self, interface) -> tuple[bool, bool]:
        """Whether some k-round execution conforms to ``interface``.

        Returns ``(found, truncated)``. Round ``j`` must start on ``u[j]`` and end
        on ``v[j]``; consecutive rounds share their boundary state, so only
        wrapped interfaces starting in an initial state can succeed.
        """
        u, v = tuple(interface.u), tuple(interface.v)
        if len(u) != self.bounds.k or len(v) != self.bounds.k:
            raise ValueError(f'interface length must be k={self.bounds.k}')
        if any(v[j] != u[j + 1] for j in range(len(u) - 1)):
            return False, False
        if u[0] not in self.init_outcomes():
            return False, False

        budget = _Budget(self.bounds.max_steps)
        found = False

        for map_ in self.maps():

            def expand(state, map_=map_):
                if self.completes(state, map_) and state.shared == v[-1]:
                    raise _Found
                successors, _, deep = self.step_local(state, map_)
                if deep:
                    budget.truncated.add(TRUNCATED_DEPTH)
                for nxt in self.context_switch(state, map_):
                    if nxt.round == state.round or state.shared == v[state.round - 1]:
                        successors.append(nxt)
                return successors

            try:
                self._search(self.initial_states(map_, [u[0]]), expand, budget)
            except _Found:
                found = True
                break
            if TRUNCATED_STEPS in budget.truncated:
                break
        return found, bool(budget.truncated) and not found

    def observed_interfaces(self) -> tuple[frozenset, bool]:
        """Interfaces ``(u, v)`` of all complete k-round executions.

        Returns ``(interfaces, truncated)``.
        """
        from .interfaces import LinearInterface

        budget = _Budget(self.bounds.max_steps)
        observed = set()

        for map_ in self.maps():

            def expand(node, map_=map_):
                state, starts = node
                if self.completes(state, map_):
                    observed.add(LinearInterface(starts, starts[1:] + (state.shared,)))
                successors, _, deep = self.step_local(state, map_)
                if deep:
                    budget.truncated.add(TRUNCATED_DEPTH)
                nodes = [(s, starts) for s in successors]
                for nxt in self.context_switch(state, map_):
                    rounds = starts if nxt.round == state.round else starts + (state.shared,)
                    nodes.append((nxt, rounds))
                return nodes

            starts = [(s, (s.shared,)) for s in self.initial_states(map_)]
            self._search(starts, expand, budget)
            if TRUNCATED_STEPS in budget.truncated:
                break
        return frozenset(observed), bool(budget.truncated)


class _Found(Exception):
    pass


def _record(failure: Fail, view, violations, errors):
    if view is None:
        return
    if failure.kind == ASSERTION:
        violations.add(Violation(failure.pc, view))
    else:
        errors.add(RuntimeErrorRecord(failure.kind, failure.pc, view))


def explore(program: ast.ParamProgram, bounds: ExplorationBounds | None = None) -> OracleReport:
    return ParamOracle(program, bounds).explore()


def executions_conforming(program: ast.ParamProgram, interface, bounds=None) -> bool:
    """True when a k-round execution of ``program`` conforms to ``interface``."""
    found, _ = ParamOracle(program, bounds).conforming(interface)
    return found
