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
Pushdown-system backend for finite-domain programs.

A control location holds everything of a running procedure except its
callers: ``(globals, frame)`` for a sequential program, and
``(shared, (globals, frame))`` for a component of a parameterized program.
Stack symbols are the suspended caller frames. Push and internal rules do not
depend on the top stack symbol; a pop rule does, since returning resumes the
caller frame found there. The bottom of the stack is never popped, so a
procedure returning to nothing has no rule.

:func:`build_ak` obtains the single-stack system for ``k`` rounds by compiling
the lazy sequentialization of the program, and :func:`pds_reach` decides
reachability of its control locations by post* saturation.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from . import config
from .explorer import SeqExplorer
from .lang import ast
from .lang.normalize import is_normalized, normalize
from .machine import ASSERTION, Fail, Leave, valuations
from .oracle import ExplorationBounds, LocalizedState, ParamOracle
from .seq.lazy import sequentialize_lazy

SIZE_CONSTANT = 4096
"""Envelope constant the measured sizes of :func:`build_ak` are held against."""


class BudgetExceededError(RuntimeError):
    """The pushdown system would not fit within ``bounds.pds_budget``."""

    def __init__(self, locations: int, transitions: int, budget: int):
        super().__init__(
            f'predicted size of {locations} locations and {transitions} transitions '
            f'exceeds the budget of {budget} locations'
        )
        self.locations = locations
        self.transitions = transitions
        self.budget = budget


@dataclass(frozen=True, eq=False)
class Pds:
    """A pushdown system with rules indexed by their source location."""

    initial: frozenset
    controls: frozenset
    internal: dict = field(default_factory=dict)
    push: dict = field(default_factory=dict)
    pop: dict = field(default_factory=dict)
    targets: frozenset = frozenset()
    errors: frozenset = frozenset()
    stats: dict = field(default_factory=dict)
    explorer: SeqExplorer | None = None

    @property
    def locations(self) -> int:
        return len(self.controls)

    @property
    def transitions(self) -> int:
        tables = (self.internal, self.push, self.pop)
        return sum(len(rules) for table in tables for rules in table.values())

    @property
    def symbols(self) -> frozenset:
        pushed = {symbol for rules in self.push.values() for _, symbol in rules}
        return frozenset(pushed | {symbol for _, symbol in self.pop})


@dataclass(frozen=True, eq=False)
class Pmpds:
    """A parameterized multi-stack pushdown system.

    ``components`` maps each process name to a :class:`Pds` whose control
    locations are pairs of a shared state and a local state of that process.
    """

    program: ast.ParamProgram
    states: tuple
    initial: frozenset
    components: dict

    @property
    def ell(self) -> int:
        """Number of local states over all components."""
        return sum(len({local for _, local in pds.controls}) for pds in self.components.values())

    @property
    def d(self) -> int:
        return sum(pds.transitions for pds in self.components.values())


class _Closure:
    """Rules of the pushdown system reachable from some initial locations.

    ``split`` turns a location into the ``(shared, globals, frame)`` a machine
    steps from and ``join`` builds a location from a machine result. Pop rules
    pair every exit of a procedure with every caller frame pushed for it.
    """

    def __init__(self, machine, split, join, budget):
        self.machine = machine
        self.split = split
        self.join = join
        self.budget = budget
        self.controls = set()
        self.frontier = deque()
        self.internal = defaultdict(set)
        self.push = defaultdict(set)
        self.pop = defaultdict(set)
        self.targets = set()
        self.errors = set()
        self.callers = defaultdict(set)
        self.exits = defaultdict(set)

    def visit(self, control):
        if control in self.controls:
            return
        if len(self.controls) >= self.budget:
            raise BudgetExceededError(len(self.controls) + 1, self.transitions(), self.budget)
        self.controls.add(control)
        self.frontier.append(control)

    def transitions(self):
        return sum(len(r) for t in (self.internal, self.push, self.pop) for r in t.values())

    def run(self, initial):
        for control in initial:
            self.visit(control)
        while self.frontier:
            control = self.frontier.popleft()
            shared, globals_, frame = self.split(control)
            pid, pc = frame[0], frame[1]
            for out in self.machine.step(shared, globals_, (frame,)):
                if isinstance(out, Fail):
                    (self.targets if out.kind == ASSERTION else self.errors).add(control)
                elif len(out.stack) == 1:
                    target = self.join(out.shared, out.globals, out.stack[0])
                    self.internal[control].add(target)
                    self.visit(target)
                elif len(out.stack) == 2:
                    caller, callee = out.stack
                    target = self.join(out.shared, out.globals, callee)
                    self.push[control].add((target, caller))
                    self.visit(target)
                    if caller not in self.callers[callee[0]]:
                        self.callers[callee[0]].add(caller)
                        for exit_ in list(self.exits[callee[0]]):
                            self.resume(exit_, caller)
            if isinstance(self.machine.procedures[pid].code[pc], Leave):
                self.exits[pid].add(control)
                for caller in list(self.callers[pid]):
                    self.resume(control, caller)

    def resume(self, control, caller):
        shared, globals_, frame = self.split(control)
        for out in self.machine.step(shared, globals_, (caller, frame)):
            if isinstance(out, Fail):
                self.errors.add(control)
            elif len(out.stack) == 1:
                target = self.join(out.shared, out.globals, out.stack[0])
                self.pop[control, caller].add(target)
                self.visit(target)

    def pds(self, initial, explorer=None) -> Pds:
        return Pds(
            initial=frozenset(initial),
            controls=frozenset(self.controls),
            internal={c: frozenset(r) for c, r in self.internal.items()},
            push={c: frozenset(r) for c, r in self.push.items()},
            pop={c: frozenset(r) for c, r in self.pop.items()},
            targets=frozenset(self.targets),
            errors=frozenset(self.errors),
            explorer=explorer,
        )


class _Component(_Closure):
    """Closure of one process under arbitrary changes of the shared state."""

    def __init__(self, machine, states, budget):
        super().__init__(
            machine,
            lambda control: (control[0], *control[1]),
            lambda shared, globals_, frame: (shared, (globals_, frame)),
            budget,
        )
        self.states = states
        self.locals = set()

    def visit(self, control):
        local = control[1]
        if local in self.locals:
            super().visit(control)
            return
        self.locals.add(local)
        for shared in self.states:
            super().visit((shared, local))


def lower(program: ast.ParamProgram, bounds: ExplorationBounds | None = None) -> Pmpds:
    """Model a finite-domain parameterized program as a :class:`Pmpds`."""
    if not is_normalized(program):
        program = normalize(program)
    oracle = ParamOracle(program, bounds)
    states = tuple(valuations(program.shared))
    initial = oracle.init_outcomes()
    budget = config.bounds.pds_budget
    components = {}
    for machine in oracle.machines:
        start = (machine.default_globals(), machine.frame('main'))
        closure = _Component(machine, states, budget)
        seeds = [(shared, start) for shared in sorted(initial)]
        closure.run(seeds)
        components[machine.name] = closure.pds(seeds)
    pmpds = Pmpds(program, states, initial, components)
    config.loggers.pds.log(
        15,
        'Lowered %d process(es): |S|=%d, l=%d, d=%d',
        len(components),
        len(states),
        pmpds.ell,
        pmpds.d,
    )
    return pmpds


def predicted_size(p: Pmpds, k: int) -> tuple[int, int]:
    """Location and transition envelopes for ``k`` rounds, without the constant."""
    size, ell = len(p.states), max(p.ell, 1)
    return ell * k**2 * size ** (2 * k), ell * max(p.d, 1) * k**3 * size ** (2 * k - 1)


def build_ak(p: Pmpds, k: int, bounds: ExplorationBounds | None = None) -> Pds:
    """The pushdown system encoding ``k``-round reachability of ``p``.

    The result keeps an explorer of the generated program, which projects its
    control locations back to localized states of the source (see :func:`project`).
    """
    if k < 1:
        raise ValueError(f'the number of rounds must be positive, got {k}')
    budget = config.bounds.pds_budget
    locations, transitions = predicted_size(p, k)
    if locations > budget:
        raise BudgetExceededError(locations, transitions, budget)

    output = sequentialize_lazy(p.program, k)
    explorer = SeqExplorer(output.program, output.instrumentation, bounds)
    machine = explorer.machine
    closure = _Closure(
        machine,
        lambda control: ((), *control),
        lambda shared, globals_, frame: (globals_, frame),
        budget,
    )
    start = (machine.default_globals(), machine.frame('main'))
    closure.run([start])
    pds = closure.pds([start], explorer)
    pds.stats.update(
        {
            'k': k,
            'shared_states': len(p.states),
            'ell': p.ell,
            'd': p.d,
            'locations': pds.locations,
            'transitions': pds.transitions,
            'location_envelope': locations,
            'transition_envelope': transitions,
            'location_constant': pds.locations / locations,
            'transition_constant': pds.transitions / transitions,
            'size_constant': SIZE_CONSTANT,
        }
    )
    pds.stats['within_envelope'] = (
        pds.stats['location_constant'] <= SIZE_CONSTANT
        and pds.stats['transition_constant'] <= SIZE_CONSTANT
    )
    config.loggers.pds.log(
        15,
        'Built A_%d: %d locations (constant %.3f), %d transitions (constant %.3f)',
        k,
        pds.locations,
        pds.stats['location_constant'],
        pds.transitions,
        pds.stats['transition_constant'],
    )
    return pds


BOTTOM = '<bottom>'
EPS = None


@dataclass(frozen=True)
class _Mid:
    """Automaton state standing for the stack below a pushed symbol."""

    control: object
    symbol: object


_FINAL = _Mid(None, BOTTOM)


def pds_reach(pds: Pds) -> frozenset:
    """Control locations reachable from ``pds.initial`` with the empty stack.

    Computes post* of the initial configurations as a finite automaton over
    stack symbols. A control location is reachable exactly when it has an
    outgoing transition in the saturated automaton.
    """
    transitions = set()
    outgoing = defaultdict(set)
    incoming_eps = defaultdict(set)
    reached = set()
    worklist = deque()

    def add(source, symbol, target):
        if (source, symbol, target) not in transitions:
            transitions.add((source, symbol, target))
            worklist.append((source, symbol, target))

    for control in pds.initial:
        add(control, BOTTOM, _FINAL)

    while worklist:
        source, symbol, target = worklist.popleft()
        if symbol is EPS:
            incoming_eps[target].add(source)
            reached.add(source)
            for next_symbol, next_target in list(outgoing[target]):
                add(source, next_symbol, next_target)
            continue

        outgoing[source].add((symbol, target))
        if isinstance(source, _Mid):
            for control in list(incoming_eps[source]):
                add(control, symbol, target)
            continue

        reached.add(source)
        for after in pds.internal.get(source, ()):
            add(after, symbol, target)
        for after, pushed in pds.push.get(source, ()):
            mid = _Mid(after, pushed)
            add(after, pushed, mid)
            add(mid, symbol, target)
        if symbol is not BOTTOM:
            for after in pds.pop.get((source, symbol), ()):
                add(after, EPS, target)

    return frozenset(reached)


def project(pds: Pds, controls) -> frozenset[LocalizedState]:
    """Localized states of the source program at the given control locations."""
    if pds.explorer is None:
        raise ValueError("the pushdown system was not built from a program's lazy output")
    views = set()
    for globals_, frame in controls:
        view = pds.explorer.localized(globals_, (frame,))
        if view is not None:
            views.add(view)
    return frozenset(views)
