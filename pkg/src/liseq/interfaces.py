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
Linear interfaces.

A linear interface ``(u, v)`` of length ``k`` summarizes a block of threads
run for ``k`` rounds: in round ``j`` the first thread starts on the shared
state ``u[j]``, each thread hands its final shared state to the next, and the
last one leaves ``v[j]``. Every thread resumes each round from the local state
it ended the previous round in, and starts round 1 from its initial state.

Searches are built from memoized *segments*: the ``(local', shared')`` pairs a
thread reaches from ``(local, shared)`` by running until a point where it may
be switched out (zero steps included).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import replace
from typing import NamedTuple

from . import config
from .lang import ast
from .machine import Fail, valuations
from .oracle import TRUNCATED_DEPTH, TRUNCATED_STEPS, ExplorationBounds, ParamOracle


class LinearInterface(NamedTuple):
    """Round inputs ``u`` and outputs ``v``, as shared-value tuples."""

    u: tuple
    v: tuple

    def to_dict(self, shared) -> dict:
        names = [decl.name for decl in shared]
        return {
            'u': [dict(zip(names, values, strict=True)) for values in self.u],
            'v': [dict(zip(names, values, strict=True)) for values in self.v],
        }


class Segment(NamedTuple):
    shared_in: tuple
    shared_out: tuple
    local_in: tuple
    local_out: tuple


class InterfaceWitness(NamedTuple):
    """Thread processes and, per thread, one segment per round."""

    map: tuple
    segments: tuple

    @property
    def threads(self) -> int:
        return len(self.map)


def is_wrapped(interface: LinearInterface) -> bool:
    """``v[j] == u[j + 1]`` for every round but the last."""
    return all(interface.v[j] == interface.u[j + 1] for j in range(len(interface.u) - 1))


def is_initial(interface: LinearInterface, program: ast.ParamProgram, bounds=None) -> bool:
    """``u[0]`` is a shared state ``init`` can produce."""
    return interface.u[0] in ParamOracle(program, bounds).init_outcomes()


class InterfaceSearch:
    """Witness search and enumeration for one program and bound set."""

    def __init__(self, program: ast.ParamProgram, bounds: ExplorationBounds | None = None):
        self.oracle = ParamOracle(program, bounds)
        self.program = program
        self.bounds = self.oracle.bounds
        self.truncated: set[str] = set()
        self._steps = self.bounds.max_steps
        self._segments: dict = {}
        self._runs: dict = {}

    @property
    def k(self) -> int:
        return self.bounds.k

    def initial_local(self, process: int) -> tuple:
        machine = self.oracle.machines[process]
        return (machine.default_globals(), (machine.frame('main'),))

    def segments(self, process: int, local: tuple, shared: tuple) -> frozenset:
        """``(local', shared')`` pairs reachable up to a switch point."""
        key = (process, local, shared)
        if key in self._segments:
            return self._segments[key]
        machine = self.oracle.machines[process]
        start = (shared, local)
        seen = {start}
        frontier = deque([start])
        ends = set()
        while frontier:
            if self._steps <= 0:
                self.truncated.add(TRUNCATED_STEPS)
                break
            self._steps -= 1
            node_shared, (globals_, stack) = node = frontier.popleft()
            if machine.switchable(stack):
                ends.add((node[1], node_shared))
            for out in machine.step(node_shared, globals_, stack):
                if isinstance(out, Fail):
                    continue
                if len(out.stack) > self.bounds.max_depth:
                    self.truncated.add(TRUNCATED_DEPTH)
                    continue
                nxt = (out.shared, (out.globals, out.stack))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        result = frozenset(ends)
        self._segments[key] = result
        return result

    def thread_runs(self, process: int, inputs: tuple) -> dict:
        """Outputs of one fresh thread given round inputs, each with one witness."""
        key = (process, inputs)
        if key in self._runs:
            return self._runs[key]
        paths = {(self.initial_local(process), ()): ()}
        for shared in inputs:
            extended = {}
            for (local, outputs), segs in paths.items():
                for local_out, shared_out in sorted(self.segments(process, local, shared)):
                    node = (local_out, outputs + (shared_out,))
                    if node not in extended:
                        extended[node] = segs + (Segment(shared, shared_out, local, local_out),)
            paths = extended
        runs = {}
        for (_, outputs), segs in paths.items():
            runs.setdefault(outputs, segs)
        self._runs[key] = runs
        return runs

    def check(self, interface: LinearInterface) -> InterfaceWitness | None:
        """A witness for ``interface`` with as few threads as possible."""
        u, v = tuple(interface.u), tuple(interface.v)
        if len(u) != self.k or len(v) != self.k:
            raise ValueError(f'interface length must be k={self.k}')
        processes = range(len(self.oracle.machines))
        # breadth-first over thread counts; a node is the vector of current outputs
        parents = {u: None}
        level = [u]
        for _ in range(self.bounds.max_threads):
            following = []
            for outputs in level:
                for process in processes:
                    for produced, segs in self.thread_runs(process, outputs).items():
                        if produced == v:
                            return self._witness(parents, outputs, (process, segs))
                        if produced not in parents:
                            parents[produced] = (outputs, (process, segs))
                            following.append(produced)
            level = following
        return None

    @staticmethod
    def _witness(parents, outputs, last):
        chain = [last]
        while parents[outputs] is not None:
            outputs, step = parents[outputs]
            chain.append(step)
        chain.reverse()
        return InterfaceWitness(tuple(p for p, _ in chain), tuple(s for _, s in chain))

    def enumerate(self, *, wrapped=False, initial=False) -> frozenset:
        """All interfaces with a witness of at most ``max_threads`` threads."""
        shared = valuations(self.program.shared)
        inputs = itertools.product(shared, repeat=self.k)
        if initial:
            init = self.oracle.init_outcomes()
            inputs = (u for u in inputs if u[0] in init)
        processes = range(len(self.oracle.machines))
        found = set()
        for u in inputs:
            seen = set()
            level = {u}
            for _ in range(self.bounds.max_threads):
                following = set()
                for outputs in sorted(level):
                    for process in processes:
                        for produced in self.thread_runs(process, outputs):
                            if produced not in seen:
                                seen.add(produced)
                                following.add(produced)
                level = following
            found.update(LinearInterface(u, v) for v in seen)
        if wrapped:
            found = {li for li in found if is_wrapped(li)}
        config.loggers.oracle.log(15, 'Enumerated %d interfaces of length %d', len(found), self.k)
        return frozenset(found)

    def validate(self, interface: LinearInterface, witness: InterfaceWitness) -> bool:
        """Re-check every condition a witness has to meet."""
        u, v = tuple(interface.u), tuple(interface.v)
        if not witness.map or len(witness.map) != len(witness.segments):
            return False
        for process, segs in zip(witness.map, witness.segments, strict=True):
            if len(segs) != self.k or segs[0].local_in != self.initial_local(process):
                return False
            for j, seg in enumerate(segs):
                if j and seg.local_in != segs[j - 1].local_out:
                    return False
                if (seg.local_out, seg.shared_out) not in self.segments(
                    process, seg.local_in, seg.shared_in
                ):
                    return False
        for j in range(self.k):
            column = [segs[j] for segs in witness.segments]
            if column[0].shared_in != u[j] or column[-1].shared_out != v[j]:
                return False
            if any(a.shared_out != b.shared_in for a, b in itertools.pairwise(column)):
                return False
        return True


def _search(program, bounds, k=None):
    bounds = bounds or config.bounds.exploration()
    if k is not None:
        bounds = replace(bounds, k=k)
    return InterfaceSearch(program, bounds)


def _warn(search):
    for flag in sorted(search.truncated):
        config.loggers.oracle.warning('Interface search truncated: %s bound hit', flag)


def check_interface(program, interface, bounds=None) -> InterfaceWitness | None:
    search = _search(program, bounds, len(interface.u))
    witness = search.check(interface)
    _warn(search)
    return witness


def enumerate_interfaces(program, k, bounds=None, *, wrapped=False, initial=False) -> frozenset:
    search = _search(program, bounds, k)
    result = search.enumerate(wrapped=wrapped, initial=initial)
    _warn(search)
    return result


def validate_witness(program, interface, witness, bounds=None) -> bool:
    return _search(program, bounds, len(interface.u)).validate(interface, witness)
