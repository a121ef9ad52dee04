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
"""Utility functions for tests."""

import importlib.resources

import pytest
from hypothesis import strategies as st

from liseq.lang import ast, normalize, parse_param
from liseq.oracle import ExplorationBounds


def parse(text, int_range=(0, 3)):
    """Read a parameterized program with small default integers."""
    return parse_param(text, int_range=int_range)


def normalized(text, int_range=(0, 3)):
    return normalize(parse(text, int_range))


def bounds(**kwargs):
    """Exploration bounds matching ``data/tests/config.toml``, with overrides."""
    settings = {'k': 2, 'max_threads': 3, 'max_steps': 200_000, 'max_depth': 8}
    settings.update(kwargs)
    return ExplorationBounds(**settings)


def shared(view):
    """Shared part of a localized state, as a dictionary."""
    return dict(view.shared)


def corpus_names(*slow):
    """Names of the bundled corpus programs, with ``slow`` ones marked ``integration``."""
    with importlib.resources.as_file(importlib.resources.files('liseq.data') / 'corpus') as root:
        found = sorted(path.stem for path in root.glob('*.pp'))
    return [
        pytest.param(name, marks=pytest.mark.integration) if name in slow else name
        for name in found
    ]


# Generated programs over ``bool b; int[0,3] x;`` with one process ``P``.

_INT_LEAVES = st.one_of(st.integers(0, 3).map(ast.Const), st.just(ast.Var('x')))


def _int_nodes(children):
    return st.one_of(
        st.builds(
            lambda op, left, right: ast.Apply(op, (left, right)),
            st.sampled_from(ast.ARITHMETIC),
            children,
            children,
        ),
        # "-3" reads back as a constant, so only negate non-constants
        children.filter(lambda e: not isinstance(e, ast.Const)).map(
            lambda e: ast.Apply('neg', (e,))
        ),
    )


int_exprs = st.recursive(_INT_LEAVES, _int_nodes, max_leaves=6)

_BOOL_LEAVES = st.one_of(
    st.booleans().map(ast.Const),
    st.just(ast.Var('b')),
    st.just(ast.Nondet()),
    st.builds(
        lambda op, left, right: ast.Apply(op, (left, right)),
        st.sampled_from(ast.COMPARISONS),
        int_exprs,
        int_exprs,
    ),
)


def _bool_nodes(children):
    return st.one_of(
        st.builds(ast.Not, children),
        st.builds(ast.Or, children, children),
        st.builds(lambda left, right: ast.Apply('&&', (left, right)), children, children),
    )


bool_exprs = st.recursive(_BOOL_LEAVES, _bool_nodes, max_leaves=8)

# small expressions keep the explored state spaces small
_small_ints = st.recursive(_INT_LEAVES, _int_nodes, max_leaves=2)
_small_bools = st.recursive(_BOOL_LEAVES, _bool_nodes, max_leaves=2)

_SIMPLE = st.one_of(
    st.just(ast.Skip()),
    st.builds(lambda e: ast.Assign('b', e), _small_bools),
    st.builds(lambda e: ast.Assign('x', e), _small_ints),
    st.builds(ast.Assume, _small_bools),
    st.builds(ast.Assert, _small_bools),
)
_CALL = st.builds(lambda e: ast.Call('f', (e,)), _small_ints)


def _blocks(stmts):
    return st.lists(stmts, min_size=1, max_size=3).map(tuple)


def _compound(children):
    return st.one_of(
        st.builds(ast.While, _small_bools, _blocks(children)),
        st.builds(ast.If, _small_bools, _blocks(children), st.none() | _blocks(children)),
    )


statements = st.recursive(st.one_of(_SIMPLE, _CALL), _compound, max_leaves=6)
atomic_blocks = st.builds(ast.Atomic, _blocks(st.recursive(_SIMPLE, _compound, max_leaves=3)))
SMALL = ast.int_type(0, 3)


@st.composite
def programs(draw):
    """A parameterized program whose ``main`` may call the recursive procedure ``f``."""
    f_body = draw(_blocks(statements))
    if draw(st.booleans()):
        f_body += (ast.Return(),)
    main_body = draw(st.lists(statements | atomic_blocks, min_size=1, max_size=4).map(tuple))
    procedures = (
        ast.Procedure('f', (ast.VarDecl('a', SMALL),), None, (), f_body),
        ast.Procedure('main', (), None, (ast.VarDecl('n', SMALL),), main_body),
    )
    return ast.ParamProgram(
        (ast.VarDecl('b', ast.BOOL), ast.VarDecl('x', SMALL)),
        (ast.Assign('b', ast.FALSE), ast.Assign('x', ast.Const(0))),
        (ast.Process('P', (ast.VarDecl('g', ast.BOOL),), procedures),),
    )
