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
Printing programs back to source text.

The output of :func:`pretty_print` parses back to an equal AST (labels aside).
Integer declarations always carry their range, so reading the text does not
depend on the configured default range.

>>> from liseq.lang.parser import parse_seq
>>> print(pretty_print(parse_seq('bool b; void main() begin b := !(b || *); end')))
bool b;
<BLANKLINE>
void main()
begin
  b := !(b || *);
end
<BLANKLINE>

"""

from __future__ import annotations

from . import ast

INDENT = '  '

# Binding strength of each operator; atoms bind tightest.
_OR, _AND, _NOT, _CMP, _SUM, _PRODUCT, _UNARY, _ATOM = range(1, 9)
_LEVELS = {
    '&&': _AND,
    '+': _SUM,
    '-': _SUM,
    '*': _PRODUCT,
    '/': _PRODUCT,
    '%': _PRODUCT,
    **{op: _CMP for op in ast.COMPARISONS},
}


def _level(expr: ast.Expr) -> int:
    match expr:
        case ast.Or():
            return _OR
        case ast.Not():
            return _NOT
        case ast.Apply(op='neg'):
            return _UNARY
        case ast.Apply(op=op):
            return _LEVELS[op]
        case ast.Const(value=value) if not isinstance(value, bool) and value < 0:
            return _UNARY
    return _ATOM


def _operands(expr: ast.Expr) -> tuple[int, int]:
    """Minimum levels of the left and right operands of a binary node."""
    level = _level(expr)
    if level == _CMP:
        # comparisons do not chain
        return _SUM, _SUM
    return level, level + 1


def format_expr(expr: ast.Expr, minimum: int = 0) -> str:
    """Source text of ``expr``, parenthesized if it binds looser than ``minimum``."""
    match expr:
        case ast.Var(name=name):
            text = name
        case ast.Const(value=True):
            text = 'T'
        case ast.Const(value=False):
            text = 'F'
        case ast.Const(value=value):
            text = str(value)
        case ast.Nondet():
            text = '*'
        case ast.Not(operand=operand):
            text = '!' + format_expr(operand, _NOT)
        case ast.Apply(op='neg', args=(operand,)):
            text = '-' + format_expr(operand, _UNARY)
        case ast.Or(left=left, right=right) | ast.Apply(args=(left, right)):
            op = '||' if isinstance(expr, ast.Or) else expr.op
            lmin, rmin = _operands(expr)
            text = f'{format_expr(left, lmin)} {op} {format_expr(right, rmin)}'
        case _:
            raise TypeError(f'not an expression: {expr!r}')
    return f'({text})' if _level(expr) < minimum else text


def _args(args) -> str:
    return ', '.join(format_expr(arg) for arg in args)


def format_block(block: ast.Block, depth: int = 0) -> list[str]:
    lines = []
    for stmt in block:
        lines.extend(format_stmt(stmt, depth))
    return lines


def format_stmt(stmt: ast.Stmt, depth: int = 0) -> list[str]:
    """Lines of ``stmt``, indented ``depth`` levels."""
    pad = INDENT * depth
    match stmt:
        case ast.Skip():
            return [f'{pad}skip;']
        case ast.Assign(target=target, value=value):
            return [f'{pad}{target} := {format_expr(value)};']
        case ast.Assume(cond=cond):
            return [f'{pad}assume {format_expr(cond)};']
        case ast.Assert(cond=cond):
            return [f'{pad}assert {format_expr(cond)};']
        case ast.Call(name=name, args=args, target=None):
            return [f'{pad}call {name}({_args(args)});']
        case ast.Call(name=name, args=args, target=target):
            return [f'{pad}{target} := {name}({_args(args)});']
        case ast.Return(value=None):
            return [f'{pad}return;']
        case ast.Return(value=value):
            return [f'{pad}return {format_expr(value)};']
        case ast.While(cond=cond, body=body):
            return [
                f'{pad}while {format_expr(cond)} do',
                *format_block(body, depth + 1),
                f'{pad}od',
            ]
        case ast.If(cond=cond, then=then, orelse=orelse):
            lines = [f'{pad}if {format_expr(cond)} then', *format_block(then, depth + 1)]
            if orelse is not None:
                lines += [f'{pad}else', *format_block(orelse, depth + 1)]
            return lines + [f'{pad}fi']
        case ast.Atomic(body=body):
            return [f'{pad}atomic begin', *format_block(body, depth + 1), f'{pad}end']
    raise TypeError(f'not a statement: {stmt!r}')


def _decls(decls, depth=0) -> list[str]:
    return [f'{INDENT * depth}{decl.type} {decl.name};' for decl in decls]


def _procedure(proc: ast.Procedure, depth: int = 0) -> list[str]:
    pad = INDENT * depth
    params = ', '.join(f'{p.type} {p.name}' for p in proc.params)
    returns = 'void' if proc.is_void else str(proc.returns)
    return [
        f'{pad}{returns} {proc.name}({params})',
        f'{pad}begin',
        *_decls(proc.locals, depth + 1),
        *format_block(proc.body, depth + 1),
        f'{pad}end',
        '',
    ]


def pretty_print(program: ast.Program) -> str:
    """Source text of a parameterized or sequential program."""
    if isinstance(program, ast.SeqProgram):
        lines = _decls(program.globals)
        if lines:
            lines.append('')
        for proc in program.procedures:
            lines.extend(_procedure(proc))
        return '\n'.join(lines)

    lines = _decls(program.shared)
    lines.append('init:')
    lines.extend(format_block(program.init, 1))
    for process in program.processes:
        lines += ['', f'process {process.name}:']
        lines.extend(_decls(process.globals, 1))
        for proc in process.procedures:
            lines.extend(_procedure(proc, 1))
    return '\n'.join(lines) + '\n'
