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
"""Tests for liseq.lang.normalize."""

from liseq.lang import ast, is_normalized, normalize
from liseq.lang.normalize import MERGED_PROCESS, return_global
from liseq.oracle import explore
from liseq.tests.utils import bounds, parse


def test_merge_processes(corpus):
    program = corpus['two_procs_flag'].program()
    assert not is_normalized(program)
    result = normalize(program)
    assert is_normalized(result)
    (process,) = result.processes
    assert process.name == MERGED_PROCESS
    assert [proc.name for proc in process.procedures] == ['main', 'Setter_main', 'Checker_main']
    (choice,) = process.procedure('main').body
    assert isinstance(choice, ast.If)
    assert isinstance(choice.cond, ast.Nondet)
    assert choice.then == (ast.Call('Setter_main'),)
    assert choice.orelse == (ast.Call('Checker_main'),)


def test_process_globals_renamed(corpus):
    result = normalize(corpus['process_globals'].program())
    (process,) = result.processes
    assert [decl.name for decl in process.globals] == ['A_done']
    assigned = {
        stmt.target
        for stmt in ast.walk(process.procedure('A_main').body)
        if isinstance(stmt, ast.Assign)
    }
    assert 'A_done' in assigned


def test_return_values_removed(corpus):
    program = corpus['returns'].program()
    result = normalize(program)
    assert is_normalized(result)
    (process,) = result.processes
    ret = return_global('inc')
    assert ret.startswith(ast.RESERVED_PREFIX)
    assert [decl.name for decl in process.globals] == [ret]
    assert process.globals[0].type == ast.int_type(0, 3)

    inc = process.procedure('inc')
    assert inc.is_void
    # every path returns a value, so no default is stored after the final return
    assert inc.body[-2:] == (ast.Assign(ret, ast.Var('v')), ast.Return())

    main = process.procedure('main').body
    call = next(i for i, stmt in enumerate(main) if isinstance(stmt, ast.Call))
    assert main[call] == ast.Call('inc', (ast.Var('x'),))
    assert main[call + 1] == ast.Assign('t', ast.Var(ret))


def test_labels_preserved(corpus):
    for entry in corpus.values():
        program = entry.program()
        result = normalize(program)
        assert ast.pcs_unique(result), entry.name
        before = {stmt.pc for stmt in program.statements()}
        assert before <= {stmt.pc for stmt in result.statements()}, entry.name


def test_normalize_idempotent(corpus):
    for name in ('returns', 'two_procs_flag', 'recursion'):
        once = normalize(corpus[name].program())
        assert normalize(once) == once


def test_normalize_keeps_verdicts(corpus):
    for name in ('returns', 'two_procs_flag', 'process_globals'):
        program = corpus[name].program()
        original = explore(program, bounds(k=1, max_threads=2))
        normalized = explore(normalize(program), bounds(k=1, max_threads=2))
        assert original.violated == normalized.violated, name
        assert {v.pc for v in original.violations} == {v.pc for v in normalized.violations}


def test_default_return_only_on_fall_through():
    program = parse(
        """
        int[0,3] x;
        init: x := 0;
        process P:
          int[0,3] pick(bool b) begin
            if b then
              return 2;
            fi
          end
          int[0,3] both(bool b) begin
            if b then
              return 1;
            else
              return 3;
            fi
          end
          main() begin
            x := pick(x = 0);
            x := both(x = 1);
          end
        """
    )
    (process,) = normalize(program).processes
    pick = process.procedure('pick').body
    assert pick[-1] == ast.Assign(return_global('pick'), ast.Const(0))
    (both,) = process.procedure('both').body
    assert isinstance(both, ast.If)
