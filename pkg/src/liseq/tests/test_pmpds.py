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
"""Tests for the pushdown backend."""

import pytest

from liseq import config
from liseq.pmpds import (
    BudgetExceededError,
    Pds,
    build_ak,
    lower,
    pds_reach,
    predicted_size,
    project,
)
from liseq.tests.utils import bounds

PDS_PROGRAMS = [
    'assert_false',
    'blocked_init',
    'flag_init',
    'set_flag',
    'skip',
    'toggle',
    'uninit_shared',
]


def _pds(initial, internal=None, push=None, pop=None):
    controls = set(initial)
    for table in (internal or {}, push or {}):
        for source, rules in table.items():
            controls.add(source)
            controls.update(r[0] if isinstance(r, tuple) else r for r in rules)
    for (source, _), rules in (pop or {}).items():
        controls.add(source)
        controls.update(rules)
    return Pds(
        initial=frozenset(initial),
        controls=frozenset(controls),
        internal={c: frozenset(r) for c, r in (internal or {}).items()},
        push={c: frozenset(r) for c, r in (push or {}).items()},
        pop={c: frozenset(r) for c, r in (pop or {}).items()},
    )


def test_reach_call_and_return():
    pds = _pds(
        ['a'],
        internal={'a': {'b'}, 'e': {'a'}},
        push={'b': {('c', 'g')}},
        pop={('c', 'g'): {'d'}},
    )
    assert pds_reach(pds) == {'a', 'b', 'c', 'd'}
    assert pds.locations == 5
    assert pds.transitions == 4
    assert pds.symbols == {'g'}


def test_pop_needs_matching_symbol():
    pds = _pds(
        ['a'],
        push={'a': {('b', 'g')}},
        pop={('b', 'g'): {'c'}, ('b', 'h'): {'e'}},
    )
    assert pds_reach(pds) == {'a', 'b', 'c'}


def test_bottom_never_popped():
    pds = _pds(['a'], pop={('a', 'g'): {'b'}})
    assert pds_reach(pds) == {'a'}


def test_unbounded_stack():
    # a pushes forever; popping any number of times reaches b, then c
    pds = _pds(
        ['a'],
        internal={'b': {'c'}},
        push={'a': {('a', 'g')}},
        pop={('a', 'g'): {'b'}, ('b', 'g'): {'b'}},
    )
    assert pds_reach(pds) == {'a', 'b', 'c'}


def test_return_to_every_caller():
    # f is called from two sites and must return to both
    pds = _pds(
        ['m'],
        internal={'m': {'m1', 'm2'}},
        push={'m1': {('f', 'r1')}, 'm2': {('f', 'r2')}},
        pop={('f', 'r1'): {'after1'}, ('f', 'r2'): {'after2'}},
    )
    assert pds_reach(pds) >= {'after1', 'after2'}


def test_lower(corpus):
    program = corpus['two_procs_flag'].program()
    pmpds = lower(program, bounds())
    assert list(pmpds.components) == ['Merged']
    assert pmpds.states == ((False,), (True,))
    assert pmpds.initial == {(False,)}
    assert pmpds.ell > 0
    assert pmpds.d > 0
    (component,) = pmpds.components.values()
    assert component.targets
    # locations pair every local state with every shared state
    locals_ = {local for _, local in component.controls}
    assert len(component.controls) == len(locals_) * len(pmpds.states)


def test_predicted_size(corpus):
    pmpds = lower(corpus['toggle'].program(), bounds())
    size = len(pmpds.states)
    assert predicted_size(pmpds, 1) == (pmpds.ell * size**2, pmpds.ell * pmpds.d * size)
    locations, transitions = predicted_size(pmpds, 2)
    assert locations == pmpds.ell * 4 * size**4
    assert transitions == pmpds.ell * pmpds.d * 8 * size**3


@pytest.mark.parametrize('k', [1, 2])
@pytest.mark.parametrize('name', PDS_PROGRAMS)
def test_agrees_with_oracle(corpus, name, k, caplog):
    caplog.set_level(15, logger='liseq.pds')
    entry = corpus[name]
    system = build_ak(lower(entry.program(), bounds(k=k)), k, bounds(k=k))
    reached = pds_reach(system)
    assert reached <= system.controls
    assert bool(reached & system.targets) == entry.violation[k]
    assert system.stats['within_envelope']
    assert system.stats['k'] == k
    # the measured constants go to the log
    assert f"(constant {system.stats['location_constant']:.3f})" in caplog.text
    assert f"(constant {system.stats['transition_constant']:.3f})" in caplog.text


def test_lower_recursion(corpus):
    pmpds = lower(corpus['recursion'].program(), bounds())
    (component,) = pmpds.components.values()
    assert component.push
    assert component.pop
    popped = {symbol for _, symbol in component.pop}
    assert component.symbols & popped
    # down calls itself
    assert any(
        control[1][1][0] == target[1][1][0]
        for control, rules in component.push.items()
        for target, _ in rules
    )
    reached = pds_reach(component)
    assert any(target in reached for rules in component.pop.values() for target in rules)


def test_project_violations(corpus):
    system = build_ak(lower(corpus['set_flag'].program(), bounds(k=1)), 1, bounds(k=1))
    hit = pds_reach(system) & system.targets
    views = project(system, hit)
    assert {view.pc for view in views} == {4}
    assert all(dict(view.shared) == {'flag': True} for view in views)


def test_project_needs_program():
    with pytest.raises(ValueError, match='lazy output'):
        project(_pds(['a']), {'a'})


def test_budget(corpus):
    pmpds = lower(corpus['toggle'].program(), bounds())
    config.bounds.pds_budget = 10
    with pytest.raises(BudgetExceededError) as err:
        build_ak(pmpds, 2, bounds())
    assert err.value.locations > 10
    assert err.value.budget == 10

    with pytest.raises(ValueError, match='must be positive'):
        build_ak(pmpds, 0, bounds())
