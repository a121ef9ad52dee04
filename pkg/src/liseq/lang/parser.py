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
Reading programs.

:func:`parse_param` and :func:`parse_seq` turn source text into scope-checked
ASTs with fresh program counters, or raise
:class:`~liseq.lang.diagnostics.ParseError` carrying every diagnostic found.

>>> prog = parse_seq('bool b; void main() begin assert F; end')
>>> prog.procedures[0].body
(Assert(cond=Const(value=False)),)

"""

from __future__ import annotations

import functools

import lark

from .. import config
from ..data import load as load_data
from . import ast
from .check import check_param, check_seq
from .diagnostics import Diagnostic, ParseError, Reporter

_FROM_CONFIG = object()


@functools.cache
def _parser() -> lark.Lark:
    return lark.Lark(
        load_data.readable('grammar.lark').read_text(),
        parser='lalr',
        lexer='contextual',
        start=['param_program', 'seq_program'],
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _at(meta) -> dict:
    return {'line': getattr(meta, 'line', 0), 'column': getattr(meta, 'column', 0)}


def _tok(token) -> dict:
    return {'line': token.line, 'column': token.column}


def _split(children):
    """Separate declaration lists from the other children of a rule."""
    decls, rest = [], []
    for child in children:
        if isinstance(child, list):
            decls.extend(child)
        else:
            rest.append(child)
    return tuple(decls), rest


class _Transformer(lark.Transformer):
    def __init__(self, int_range):
        super().__init__()
        self.int_range = int_range

    # Programs

    def param_program(self, children):
        shared, rest = _split(children)
        init = tuple(c for c in rest if isinstance(c, ast.Stmt))
        processes = tuple(c for c in rest if isinstance(c, ast.Process))
        return ast.ParamProgram(shared, init, processes)

    def seq_program(self, children):
        decls, procedures = _split(children)
        return ast.SeqProgram(decls, tuple(procedures))

    @lark.v_args(inline=True)
    def process(self, name, *children):
        decls, procedures = _split(children)
        return ast.Process(str(name), decls, tuple(procedures), **_tok(name))

    @lark.v_args(inline=True)
    def var_decl(self, type_, *names):
        return [ast.VarDecl(str(name), type_, **_tok(name)) for name in names]

    def bool_type(self, _):
        return ast.BOOL

    @lark.v_args(inline=True)
    def ranged_int_type(self, lo, hi):
        return ast.int_type(lo, hi)

    def int_type(self, _):
        if self.int_range is None:
            return ast.INT
        return ast.int_type(*self.int_range)

    @lark.v_args(inline=True)
    def pos_int(self, token):
        return int(token)

    @lark.v_args(inline=True)
    def neg_int(self, token):
        return -int(token)

    @lark.v_args(inline=True)
    def typed_procedure(self, returns, name, params, *body):
        return self._procedure(name, params, returns, body)

    @lark.v_args(inline=True)
    def void_procedure(self, name, params, *body):
        return self._procedure(name, params, None, body)

    def _procedure(self, name, params, returns, body):
        decls, stmts = _split(body)
        return ast.Procedure(
            str(name), params or (), returns, decls, tuple(stmts), **_tok(name)
        )

    def params(self, children):
        return tuple(children)

    @lark.v_args(inline=True)
    def param(self, type_, name):
        return ast.VarDecl(str(name), type_, **_tok(name))

    # Statements

    @lark.v_args(inline=True)
    def skip(self, keyword):
        return ast.Skip(**_tok(keyword))

    @lark.v_args(inline=True)
    def assign(self, name, value):
        return ast.Assign(str(name), value, **_tok(name))

    @lark.v_args(inline=True)
    def call_assign(self, target, name, args):
        return ast.Call(str(name), args or (), str(target), **_tok(target))

    @lark.v_args(inline=True)
    def call(self, keyword, name, args):
        return ast.Call(str(name), args or (), **_tok(keyword))

    @lark.v_args(inline=True)
    def assume(self, keyword, cond):
        return ast.Assume(cond, **_tok(keyword))

    @lark.v_args(inline=True)
    def assert_(self, keyword, cond):
        return ast.Assert(cond, **_tok(keyword))

    @lark.v_args(inline=True)
    def return_(self, keyword, value):
        return ast.Return(value, **_tok(keyword))

    @lark.v_args(inline=True)
    def while_(self, keyword, cond, body):
        return ast.While(cond, body, **_tok(keyword))

    @lark.v_args(inline=True)
    def if_(self, keyword, cond, then, orelse):
        return ast.If(cond, then, orelse, **_tok(keyword))

    @lark.v_args(inline=True)
    def atomic(self, keyword, body):
        return ast.Atomic(body, **_tok(keyword))

    def block(self, children):
        return tuple(children)

    def args(self, children):
        return tuple(children)

    # Expressions

    @lark.v_args(meta=True, inline=True)
    def or_(self, meta, left, right):
        return ast.Or(left, right, **_at(meta))

    @lark.v_args(meta=True, inline=True)
    def not_(self, meta, operand):
        return ast.Not(operand, **_at(meta))

    @lark.v_args(meta=True, inline=True)
    def neg(self, meta, operand):
        if isinstance(operand, ast.Const) and not isinstance(operand.value, bool):
            return ast.Const(-operand.value, **_at(meta))
        return ast.Apply('neg', (operand,), **_at(meta))

    @lark.v_args(inline=True)
    def int_const(self, token):
        return ast.Const(int(token), **_tok(token))

    @lark.v_args(meta=True)
    def true(self, meta, _):
        return ast.Const(True, **_at(meta))

    @lark.v_args(meta=True)
    def false(self, meta, _):
        return ast.Const(False, **_at(meta))

    @lark.v_args(meta=True)
    def nondet(self, meta, _):
        return ast.Nondet(**_at(meta))

    @lark.v_args(inline=True)
    def var(self, token):
        return ast.Var(str(token), **_tok(token))


def _binary(op):
    @lark.v_args(meta=True, inline=True)
    def build(self, meta, left, right):
        return ast.Apply(op, (left, right), **_at(meta))

    return build


for _name, _op in (
    ('and_', '&&'),
    ('eq', '='),
    ('ne', '!='),
    ('lt', '<'),
    ('le', '<='),
    ('gt', '>'),
    ('ge', '>='),
    ('add', '+'),
    ('sub', '-'),
    ('mul', '*'),
    ('div', '/'),
    ('mod', '%'),
):
    setattr(_Transformer, _name, _binary(_op))
del _name, _op


def _read(text, start, filename, int_range):
    if int_range is _FROM_CONFIG:
        int_range = config.bounds.int_range
    try:
        tree = _parser().parse(text, start=start)
    except lark.exceptions.UnexpectedInput as exc:
        line = max(getattr(exc, 'line', 0) or 0, 0)
        column = max(getattr(exc, 'column', 0) or 0, 0)
        if isinstance(exc, lark.exceptions.UnexpectedToken):
            what = 'end of input' if exc.token.type == '$END' else repr(str(exc.token))
            message = f'syntax error: unexpected {what}'
        elif isinstance(exc, lark.exceptions.UnexpectedCharacters):
            message = f'syntax error: unexpected character {exc.char!r}'
        else:
            message = 'syntax error: unexpected end of input'
        raise ParseError([Diagnostic(filename, line, column, 'error', message)]) from None
    try:
        program = _Transformer(int_range).transform(tree)
    except lark.exceptions.VisitError as exc:
        if isinstance(exc.orig_exc, ValueError):
            where = _at(getattr(exc.obj, 'meta', None))
            diagnostic = Diagnostic(
                filename, where['line'], where['column'], 'error', str(exc.orig_exc)
            )
            raise ParseError([diagnostic]) from None
        raise
    program, _ = ast.relabel(program)
    return program


def parse_param(
    text: str, *, filename: str = '<string>', int_range=_FROM_CONFIG, allow_reserved=False
):
    """Parse and check a parameterized program.

    ``int_range`` is the range of bare ``int`` declarations; it defaults to
    ``config.bounds.int_range``, and ``None`` makes them unbounded. Reserved
    identifiers are only accepted with ``allow_reserved`` (normalized output).
    """
    program = _read(text, 'param_program', filename, int_range)
    reporter = Reporter(filename)
    check_param(program, reporter, allow_reserved=allow_reserved)
    reporter.raise_if_errors()
    config.loggers.lang.debug(
        'Read %s: %d shared variables, %d processes',
        filename,
        len(program.shared),
        len(program.processes),
    )
    return program


def parse_seq(
    text: str, *, filename: str = '<string>', int_range=_FROM_CONFIG, allow_reserved=True
):
    """Parse and check a sequential program.

    Generated programs use reserved identifiers, so they are accepted here
    unless ``allow_reserved`` is false.
    """
    program = _read(text, 'seq_program', filename, int_range)
    reporter = Reporter(filename)
    check_seq(program, reporter, allow_reserved=allow_reserved)
    reporter.raise_if_errors()
    return program
