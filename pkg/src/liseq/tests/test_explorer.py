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
"""Tests for the sequential explorer and the statement semantics it runs."""

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from liseq.explorer import SeqExplorer, explore_seq
from liseq.lang import normalize, parse_seq
from liseq.machine import DIV_ZERO, OUT_OF_RANGE
from liseq.oracle import TRUNCATED_DEPTH, TRUNCATED_STEPS, LocalizedState
from liseq.seq import sequentialize_lazy
from liseq.tests.utils import bounds, programs


def _run(text, **kwargs):
    return explore_seq(parse_seq(text), None, bounds(**kwargs))


def test_violation_raw_view():
    report = _run('bool b; void main() begin b := *; assert b; end')
    assert report.violated
    assert {v.localized for v in report.violations} == {
        LocalizedState(2, (), (('b', False),))
    }


def test_division_truncates_toward_zero():
    report = _run(
        'int[-3,3] q, r;'
        'void main() begin q := -3 / 2; r := -3 % 2; assert q = -1 && r = -1; end'
    )
    assert not report.violated
    assert not report.errors


def test_runtime_faults():
    report = _run('int[0,3] x; void main() begin x := 3; x := x + 1; end')
    assert {(e.kind, e.pc) for e in report.errors} == {(OUT_OF_RANGE, 2)}

    report = _run('int[0,3] x; void main() begin x := 2 / x; end')
    assert {(e.kind, e.pc) for e in report.errors} == {(DIV_ZERO, 1)}


def test_short_circuit():
    report = _run(
        'int[0,3] x; bool b;'
        'void main() begin b := x != 0 && 3 / x > 0; b := x = 0 || 3 / x > 0; end'
    )
    assert not report.errors


def test_calls_and_returns():
    report = _run(
        'int[0,3] g;'
        'int[0,3] inc(int[0,3] v) begin return v + 1; end '
        'void main() begin g := inc(2); assert g = 3; g := inc(g); end'
    )
    assert not report.violated
    assert {(e.kind, e.pc) for e in report.errors} == {(OUT_OF_RANGE, 1)}


def test_nondeterministic_arguments():
    report = _run('void f(bool a) begin assert a; end void main() begin call f(*); end')
    (violation,) = report.violations
    assert violation.localized.frame == (('a', False),)


def test_depth_bound():
    text = 'void f() begin call f(); end void main() begin call f(); end'
    report = _run(text, max_depth=3)
    assert report.truncated == {TRUNCATED_DEPTH}


def test_step_bound():
    text = 'int[0,3] x; void main() begin while T do x := (x + 1) % 4; od end'
    report = _run(text)
    assert not report.truncated
    assert report.states < 20
    assert _run(text, max_steps=2).truncated == {TRUNCATED_STEPS}


def test_search_orders_agree():
    text = 'int[0,3] x; void main() begin while * do x := (x + 1) % 4; od assert x != 3; end'
    program = parse_seq(text)
    bfs = SeqExplorer(program, None, bounds()).explore()
    dfs = SeqExplorer(program, None, bounds(), order='dfs').explore()
    assert bfs.violations == dfs.violations
    assert bfs.states == dfs.states


def test_unbounded_globals_refused():
    program = parse_seq('int x; void main() begin skip; end', int_range=None)
    with pytest.raises(ValueError, match='unbounded domain'):
        SeqExplorer(program)


def test_report_to_dict():
    data = _run('bool b; void main() begin assert b; end').to_dict()
    assert data['violations'] == [
        {'pc': 1, 'localized': {'pc': 1, 'frame': {}, 'shared': {'b': False}}}
    ]
    assert data['truncated'] == []
    assert data['thread_returns'] == []


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(programs(), st.integers(2, 4))
def test_coverage_grows_with_depth(program, depth):
    output = sequentialize_lazy(normalize(program), 1)
    shallow, deep = (
        SeqExplorer(
            output.program,
            output.instrumentation,
            bounds(k=1, max_threads=2, max_steps=20_000, max_depth=d),
        ).explore()
        for d in (depth, depth + 1)
    )
    assume(TRUNCATED_STEPS not in shallow.truncated | deep.truncated)
    assert shallow.localized <= deep.localized
    assert shallow.violations <= deep.violations
