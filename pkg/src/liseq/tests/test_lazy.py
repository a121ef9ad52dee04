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
"""Tests for the lazy sequentialization."""

import pytest

from liseq.explorer import SeqExplorer
from liseq.interfaces import LinearInterface, check_interface
from liseq.lang import ast, normalize, parse_seq, pretty_print
from liseq.oracle import explore
from liseq.seq import Instrumentation, sequentialize_lazy
from liseq.seq.common import NESTED, PREFIX
from liseq.seq.lazy import LINEAR_INT
from liseq.tests.utils import bounds, corpus_names


def _explore(output, bounds_):
    return SeqExplorer(output.program, output.instrumentation, bounds_).explore()


def test_requires_normalized(corpus):
    program = corpus['two_procs_flag'].program()
    with pytest.raises(ValueError, match='normalized'):
        sequentialize_lazy(program, 2)
    with pytest.raises(ValueError, match='must be positive'):
        sequentialize_lazy(normalize(program), 0)


@pytest.mark.parametrize('k', [1, 2, 3])
def test_output_is_a_program(corpus, k):
    program = normalize(corpus['recursion'].program())
    output = sequentialize_lazy(program, k)
    assert parse_seq(pretty_print(output.program), int_range=None) == output.program
    assert ast.pcs_unique(output.program)

    source = {decl.name for decl in program.shared}
    added = {decl.name for decl in output.program.globals} - source
    assert added
    assert all(name.startswith(PREFIX) for name in added)


def test_instrumentation(corpus, tmp_path):
    program = normalize(corpus['returns'].program())
    output = sequentialize_lazy(program, 2)
    info = output.instrumentation
    assert info.kind == 'lazy'
    assert info.nesting == NESTED
    assert info.thread_proc == LINEAR_INT
    assert info.shared == ('x',)
    assert set(output.stmt_map) == {stmt.pc for stmt in program.statements()}

    copied = {stmt.pc: stmt for stmt in output.program.statements()}
    for stmt in program.statements():
        if isinstance(stmt, ast.Assign):
            assert copied[output.stmt_map[stmt.pc]] == stmt

    info.to_filename(tmp_path / 'map.json')
    assert Instrumentation.from_filename(tmp_path / 'map.json') == info


def test_violation_mapped_back(corpus):
    program = normalize(corpus['assert_false'].program())
    report = _explore(sequentialize_lazy(program, 1), bounds(k=1))
    assert report.violated
    assert {v.pc for v in report.violations} == {2}


@pytest.mark.parametrize(
    'name', ['skip', 'toggle', 'set_flag', 'mutex_broken', 'mutex_atomic', 'recursion', 'returns']
)
def test_same_views_as_oracle(corpus, name):
    program = normalize(corpus[name].program())
    bounds_ = bounds(k=2, max_threads=2)
    oracle = explore(program, bounds_)
    lazy = _explore(sequentialize_lazy(program, 2), bounds_)
    assert not oracle.truncated
    assert not lazy.truncated
    assert lazy.localized == oracle.reachable
    assert lazy.violated == oracle.violated


SLOW = ('spin_divide', 'spin_divide_noassert')


@pytest.mark.parametrize('k', [1, 2])
@pytest.mark.parametrize('name', corpus_names(*SLOW))
def test_nested_blocks_are_real(corpus, name, k):
    program = normalize(corpus[name].program())
    report = _explore(sequentialize_lazy(program, k), bounds(k=k, max_threads=2))
    for ret in report.returns:
        interface = LinearInterface(ret.u[: ret.bound], ret.v[: ret.bound - 1] + (ret.result,))
        assert check_interface(program, interface, bounds(k=ret.bound)) is not None, ret


@pytest.mark.parametrize('k', [1, 2])
@pytest.mark.parametrize('name', corpus_names(*SLOW))
def test_nested_calls_extend_real_interfaces(corpus, name, k):
    program = normalize(corpus[name].program())
    report = _explore(sequentialize_lazy(program, k), bounds(k=k, max_threads=2))
    for call in report.calls:
        if not call.nested or call.bound == 1:
            continue
        # the rounds before the bound were already summarized by a returned block
        prefix = LinearInterface(call.u[: call.bound - 1], call.v[: call.bound - 1])
        assert check_interface(program, prefix, bounds(k=call.bound - 1)) is not None, call


def test_toggle_blocks_nest(corpus):
    program = normalize(corpus['toggle'].program())
    report = _explore(sequentialize_lazy(program, 2), bounds(k=2))
    assert any(call.nested for call in report.calls)
    assert any(call.nested and call.bound == 2 for call in report.calls)
    assert report.returns


def test_atomic_blocks_not_interrupted(corpus):
    program = normalize(corpus['atomic_swap'].program())
    report = _explore(sequentialize_lazy(program, 2), bounds(k=2))
    assert not report.violated
    assert not report.truncated
