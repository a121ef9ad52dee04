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
"""Tests for the interleaving oracle."""

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from liseq.interfaces import LinearInterface
from liseq.lang import normalize
from liseq.machine import DIV_ZERO, OUT_OF_RANGE
from liseq.oracle import (
    TRUNCATED_DEPTH,
    TRUNCATED_STEPS,
    ExplorationBounds,
    LocalizedState,
    ParamOracle,
    RuntimeErrorRecord,
    Violation,
    executions_conforming,
    explore,
)
from liseq.tests.utils import bounds, parse, programs

F, T = False, True


def test_assert_false(corpus):
    report = explore(corpus['assert_false'].program(), bounds(k=1, max_threads=1))
    assert report.violated
    assert report.violations == {Violation(2, LocalizedState(2, (), (('b', F),)))}
    assert not report.truncated


def test_skip_views(corpus):
    report = explore(corpus['skip'].program(), bounds(k=1, max_threads=1))
    assert not report.violated
    assert not report.errors
    assert report.reachable == {
        LocalizedState(1, (), (('b', F),)),
        LocalizedState(1, (), (('b', T),)),
        LocalizedState(2, (), (('b', F),)),
    }


def test_more_threads_reach_more(corpus):
    program = corpus['toggle'].program()
    one = explore(program, bounds(k=1, max_threads=1))
    three = explore(program, bounds(k=1, max_threads=3))
    assert one.reachable < three.reachable
    assert LocalizedState(2, (), (('b', T),)) in three.reachable
    assert LocalizedState(2, (), (('b', T),)) not in one.reachable


def test_more_rounds_reach_more(corpus):
    program = corpus['mutex_broken'].program()
    assert not explore(program, bounds(k=1)).violated
    assert explore(program, bounds(k=2)).violated


def test_runtime_errors(corpus):
    report = explore(corpus['div_zero'].program(), bounds(k=1, max_threads=1))
    view = LocalizedState(3, (), (('x', 1), ('y', 0)))
    assert report.errors == {RuntimeErrorRecord(DIV_ZERO, 3, view)}
    assert not report.violated

    report = explore(corpus['overflow'].program(), bounds(k=1, max_threads=2))
    assert {(e.kind, e.pc, dict(e.localized.shared)['x']) for e in report.errors} == {
        (OUT_OF_RANGE, 2, 2)
    }


def test_init_outcomes(corpus):
    assert ParamOracle(corpus['flag_init'].program()).init_outcomes() == {(T,)}
    assert ParamOracle(corpus['uninit_shared'].program()).init_outcomes() == {(F,), (T,)}
    assert not ParamOracle(corpus['blocked_init'].program()).init_outcomes()


def test_truncation(corpus):
    report = explore(corpus['toggle'].program(), bounds(max_steps=5))
    assert TRUNCATED_STEPS in report.truncated
    assert report.states == 5

    report = explore(corpus['recursion'].program(), bounds(k=1, max_threads=1, max_depth=2))
    assert TRUNCATED_DEPTH in report.truncated


def test_search_orders_agree(corpus):
    program = corpus['mutex_broken'].program()
    bfs = ParamOracle(program, bounds()).explore()
    dfs = ParamOracle(program, bounds(), order='dfs').explore()
    assert bfs.reachable == dfs.reachable
    assert bfs.violations == dfs.violations
    with pytest.raises(ValueError, match='search order'):
        ParamOracle(program, bounds(), order='random')


def test_bounds_validated():
    with pytest.raises(ValueError, match='k must be positive'):
        ExplorationBounds(k=0)
    with pytest.raises(ValueError, match='max_threads'):
        ExplorationBounds(max_threads=0)


def test_unbounded_program_refused():
    program = parse('int x; init: x := 0; process P: main() begin skip; end', int_range=None)
    with pytest.raises(ValueError, match='unbounded domain'):
        ParamOracle(program)


def test_conforming(corpus):
    program = corpus['toggle'].program()
    wrapped = LinearInterface(((F,), (T,)), ((T,), (F,)))
    assert executions_conforming(program, wrapped, bounds(k=2))
    # not wrapped: round 2 does not start where round 1 ended
    assert not executions_conforming(
        program, LinearInterface(((F,), (F,)), ((T,), (T,))), bounds(k=2)
    )
    # b is false after init
    assert not executions_conforming(
        program, LinearInterface(((T,), (F,)), ((F,), (T,))), bounds(k=2)
    )
    with pytest.raises(ValueError, match='interface length'):
        ParamOracle(program, bounds(k=1)).conforming(wrapped)


def test_observed_interfaces(corpus):
    oracle = ParamOracle(corpus['toggle'].program(), bounds(k=1))
    observed, truncated = oracle.observed_interfaces()
    assert not truncated
    assert observed == {
        LinearInterface(((F,),), ((F,),)),
        LinearInterface(((F,),), ((T,),)),
    }


def test_report_to_dict(corpus):
    data = explore(corpus['assert_false'].program(), bounds(k=1, max_threads=1)).to_dict()
    assert data['violations'] == [
        {'pc': 2, 'localized': {'pc': 2, 'frame': {}, 'shared': {'b': False}}}
    ]
    assert data['truncated'] == []


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(programs(), st.integers(1, 3))
def test_coverage_grows_with_depth(program, depth):
    program = normalize(program)
    shallow, deep = (
        explore(program, bounds(k=1, max_threads=2, max_steps=20_000, max_depth=d))
        for d in (depth, depth + 1)
    )
    assume(TRUNCATED_STEPS not in shallow.truncated | deep.truncated)
    assert shallow.reachable <= deep.reachable
    assert shallow.violations <= deep.violations
