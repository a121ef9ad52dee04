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
"""Tests for linear interfaces."""

import pytest
from hypothesis import HealthCheck, assume, given, settings

from liseq.interfaces import (
    InterfaceSearch,
    LinearInterface,
    check_interface,
    enumerate_interfaces,
    is_initial,
    is_wrapped,
    validate_witness,
)
from liseq.lang import normalize
from liseq.oracle import ParamOracle
from liseq.tests.utils import bounds, corpus_names, programs

F, T = False, True


@pytest.fixture
def toggle(corpus):
    return normalize(corpus['toggle'].program())


def test_is_wrapped():
    assert is_wrapped(LinearInterface(((F,), (T,)), ((T,), (F,))))
    assert not is_wrapped(LinearInterface(((F,), (F,)), ((T,), (F,))))
    assert is_wrapped(LinearInterface(((F,),), ((T,),)))


def test_is_initial(toggle):
    assert is_initial(LinearInterface(((F,),), ((T,),)), toggle, bounds(k=1))
    assert not is_initial(LinearInterface(((T,),), ((T,),)), toggle, bounds(k=1))


def test_enumerate_single_round(toggle):
    # every thread may toggle once or not at all
    found = enumerate_interfaces(toggle, 1, bounds(max_threads=2))
    assert found == {LinearInterface(((u,),), ((v,),)) for u in (F, T) for v in (F, T)}
    initial = enumerate_interfaces(toggle, 1, bounds(max_threads=2), initial=True)
    assert initial == {LinearInterface(((F,),), ((v,),)) for v in (F, T)}


def test_check_and_validate(toggle):
    interface = LinearInterface(((F,), (T,)), ((T,), (F,)))
    witness = check_interface(toggle, interface, bounds(k=2))
    assert witness is not None
    # one thread toggles in round 1, a second one in round 2
    assert witness.threads == 2
    assert validate_witness(toggle, interface, witness, bounds(k=2))

    other = LinearInterface(((F,), (F,)), ((T,), (F,)))
    assert not validate_witness(toggle, other, witness, bounds(k=2))


def test_check_needs_threads(corpus):
    program = normalize(corpus['token_chain'].program())
    interface = LinearInterface(((0,),), ((3,),))
    assert check_interface(program, interface, bounds(k=1, max_threads=2)) is None
    witness = check_interface(program, interface, bounds(k=1, max_threads=3))
    assert witness.threads == 3


def test_check_length(toggle):
    with pytest.raises(ValueError, match='interface length'):
        InterfaceSearch(toggle, bounds(k=2)).check(LinearInterface(((F,),), ((T,),)))


@pytest.mark.parametrize('k', [1, 2])
@pytest.mark.parametrize('name', corpus_names('spin_divide', 'spin_divide_noassert'))
def test_wrapped_initial_match_oracle(corpus, name, k):
    program = normalize(corpus[name].program())
    bounds_ = bounds(k=k, max_threads=2)
    found = enumerate_interfaces(program, k, bounds_, wrapped=True, initial=True)
    observed, truncated = ParamOracle(program, bounds_).observed_interfaces()
    assert not truncated
    assert found == observed


def test_publisher_block_from_init(corpus):
    # one P2 thread publishes x and y, then unblocks
    program = normalize(corpus['spin_divide'].program())
    interface = LinearInterface(((T, 0, 0),), ((F, 12, 2),))
    witness = check_interface(program, interface, bounds(k=1, max_threads=2))
    assert witness is not None
    assert witness.threads == 1
    assert validate_witness(program, interface, witness, bounds(k=1, max_threads=2))


def test_to_dict(toggle):
    interface = LinearInterface(((F,),), ((T,),))
    assert interface.to_dict(toggle.shared) == {'u': [{'b': False}], 'v': [{'b': True}]}


def test_toggle_interfaces_compose(toggle):
    found = enumerate_interfaces(toggle, 2, bounds(max_threads=1))
    composable = [(a, b) for a in found for b in found if a.v == b.u]
    assert composable
    for first, second in composable:
        interface = LinearInterface(first.u, second.v)
        assert check_interface(toggle, interface, bounds(max_threads=2)) is not None


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(programs())
def test_interfaces_compose(program):
    program = normalize(program)
    single = InterfaceSearch(program, bounds(k=1, max_threads=1, max_steps=20_000, max_depth=3))
    found = single.enumerate()
    assume(not single.truncated)
    pair = InterfaceSearch(program, bounds(k=1, max_threads=2, max_steps=20_000, max_depth=3))
    for first in found:
        for second in found:
            if first.v == second.u:
                witness = pair.check(LinearInterface(first.u, second.v))
                assert witness is not None or pair.truncated
