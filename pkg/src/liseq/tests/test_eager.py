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
"""Tests for the eager sequentialization."""

import pytest

from liseq.compare import speculative
from liseq.explorer import SeqExplorer
from liseq.lang import ast, normalize, parse_seq, pretty_print
from liseq.machine import DIV_ZERO
from liseq.oracle import explore
from liseq.seq import sequentialize_eager
from liseq.seq.common import PREFIX, SEQUENTIAL, havoc
from liseq.seq.eager import ROUND, THREAD
from liseq.tests.utils import bounds, normalized

# A thread waits for another to publish y before dividing by it. Guessing that
# round 2 starts with blocked = F and y = 0 lets the eager output run the
# division on a state no execution reaches.
SPIN_DIVIDE = """
bool blocked;
int x, y;

init:
  blocked := T;
  x := 0;
  y := 0;

process P1:
  main() begin
    while blocked do
      skip;
    od
    assert y != 0;
    x := x / y;
  end

process P2:
  main() begin
    x := 3;
    y := 1;
    blocked := F;
  end
"""


def _explore(output, bounds_):
    return SeqExplorer(output.program, output.instrumentation, bounds_).explore()


def test_requires_normalized(corpus):
    program = corpus['two_procs_flag'].program()
    with pytest.raises(ValueError, match='normalized'):
        sequentialize_eager(program, 2)


@pytest.mark.parametrize('k', [1, 2])
def test_output_is_a_program(corpus, k):
    program = normalize(corpus['mutex_atomic'].program())
    output = sequentialize_eager(program, k)
    assert parse_seq(pretty_print(output.program), int_range=None) == output.program
    info = output.instrumentation
    assert (info.kind, info.nesting, info.thread_proc) == ('eager', SEQUENTIAL, THREAD)
    labels = {stmt.pc for stmt in program.statements()}
    assert set(output.stmt_map) == labels
    assert set(info.aliases.values()) <= labels
    source = {decl.name for decl in program.shared}
    added = {decl.name for decl in output.program.globals} - source
    assert all(name.startswith(PREFIX) for name in added)


def test_asserts_become_checks(corpus):
    program = normalize(corpus['assert_false'].program())
    output = sequentialize_eager(program, 1)
    copied = {stmt.pc: stmt for stmt in output.program.statements()}
    check = copied[output.stmt_map[2]]
    assert isinstance(check, ast.If)
    assert check.cond == ast.Not(ast.FALSE)
    # the only assertion left checks the error flag once guesses are validated
    (final,) = [s for s in output.program.statements() if isinstance(s, ast.Assert)]
    assert final in output.program.procedure('main').body


@pytest.mark.parametrize('name', ['assert_false', 'set_flag', 'flag_init', 'mutex_broken'])
def test_validated_verdict(corpus, name):
    program = normalize(corpus[name].program())
    bounds_ = bounds(k=2, max_threads=2)
    eager = _explore(sequentialize_eager(program, 2), bounds_)
    assert not eager.truncated
    assert eager.violated == explore(program, bounds_).violated


@pytest.mark.parametrize('name', ['toggle', 'mutex_broken', 'recursion'])
def test_covers_oracle_views(corpus, name):
    program = normalize(corpus[name].program())
    bounds_ = bounds(k=2, max_threads=2)
    eager = _explore(sequentialize_eager(program, 2), bounds_)
    assert explore(program, bounds_).reachable <= eager.localized


def test_speculative_only_after_guessing():
    program = normalized(SPIN_DIVIDE)
    bounds_ = bounds(max_threads=2)

    one = _explore(sequentialize_eager(program, 1), bounds_)
    assert not speculative(one, program)
    assert not one.errors

    two = _explore(sequentialize_eager(program, 2), bounds_)
    oracle = explore(program, bounds_)
    assert not oracle.violated
    assert not oracle.errors
    assert not two.violated
    views = speculative(two, program)
    assert views
    assert all(dict(view.shared)['y'] == 0 for view in views)
    assert not two.localized <= oracle.reachable


def test_speculative_runtime_error():
    program = normalized(SPIN_DIVIDE.replace('    assert y != 0;\n', ''))
    two = _explore(sequentialize_eager(program, 2), bounds(max_threads=2))
    assert DIV_ZERO in {e.kind for e in two.errors}
    assert not two.violated


@pytest.mark.parametrize(
    'type_',
    [ast.BOOL, ast.int_type(0, 12), ast.int_type(-3, 4), ast.int_type(5, 5), ast.int_type(0, 15)],
)
def test_havoc_reaches_every_value(type_):
    body = (*havoc(ast.VarDecl('x', type_)), ast.Assert(ast.FALSE))
    main = ast.Procedure('main', (), None, (), body)
    program, _ = ast.relabel(ast.SeqProgram((ast.VarDecl('x', type_),), (main,)))
    report = SeqExplorer(program, None, bounds()).explore()
    assert not report.errors
    assert {dict(v.localized.shared)['x'] for v in report.violations} == set(type_.domain())
    # no loop: every guess takes a bounded number of steps
    assert not any(isinstance(stmt, ast.While) for stmt in program.statements())


def test_rounds_run_on_their_own_copy(corpus):
    program = normalize(corpus['spin_divide'].program())
    output = sequentialize_eager(program, 2)
    copies = {n for copy in output.instrumentation.round_copies for n in copy}
    # switching rounds moves no shared state around
    simulated = [proc for proc in output.program.procedures if proc.name != 'main']
    assert THREAD in {proc.name for proc in simulated}
    for proc in simulated:
        for stmt in ast.walk(proc.body):
            if isinstance(stmt, ast.Assign) and stmt.target in copies:
                assert not isinstance(stmt.value, ast.Var), pretty_print(output.program)
    assert output.instrumentation.round_var == ROUND
    # the division has a copy for each round, the second known by its alias
    (division,) = [
        stmt
        for stmt in program.statements()
        if isinstance(stmt, ast.Assign) and isinstance(stmt.value, ast.Apply)
    ]
    assert division.pc in output.instrumentation.aliases.values()
    # guesses are made without loops; the only loop in main spawns threads
    main = output.program.procedure('main')
    assert sum(isinstance(stmt, ast.While) for stmt in ast.walk(main.body)) == 1


@pytest.mark.integration
def test_spin_divide_explores_few_states(corpus):
    entry = corpus['spin_divide']
    program = normalize(entry.program())
    report = _explore(sequentialize_eager(program, 2), bounds(max_threads=2, max_steps=5_000_000))
    assert not report.truncated
    assert speculative(report, program)
    assert report.states < 800_000
