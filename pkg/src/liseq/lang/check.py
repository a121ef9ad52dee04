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
"""Scope and type checking."""

from __future__ import annotations

from . import ast
from .diagnostics import Reporter


class _Checker:
    def __init__(self, reporter: Reporter, allow_reserved: bool, sequential: bool):
        self.report = reporter
        self.allow_reserved = allow_reserved
        self.sequential = sequential

    def name(self, node, name):
        if not self.allow_reserved and name.startswith(ast.RESERVED_PREFIX):
            self.report.error(
                node, f"identifier '{name}' uses the reserved prefix '{ast.RESERVED_PREFIX}'"
            )

    def declare(self, decls, *outer):
        """Build a scope layer, reporting duplicates and shadowing."""
        layer = {}
        for decl in decls:
            self.name(decl, decl.name)
            if decl.name in layer or any(decl.name in scope for scope in outer):
                self.report.error(decl, f"redeclaration of '{decl.name}'")
                continue
            layer[decl.name] = decl.type
        return layer

    def procedures(self, procs, globals_):
        table = {}
        for proc in procs:
            self.name(proc, proc.name)
            if proc.name in table:
                self.report.error(proc, f"redefinition of procedure '{proc.name}'")
                continue
            table[proc.name] = proc
        main = table.get('main')
        if main is None:
            self.report.error(procs[0] if procs else None, "no procedure named 'main'")
        elif main.params:
            self.report.error(main, "procedure 'main' takes no parameters")
        for proc in table.values():
            frame = self.declare(proc.variables, *globals_)
            self.block(proc.body, (frame, *globals_), table, proc, in_atomic=False)

    # Statements

    def block(self, stmts, scopes, table, proc, in_atomic):
        for stmt in stmts:
            self.stmt(stmt, scopes, table, proc, in_atomic)

    def stmt(self, stmt, scopes, table, proc, in_atomic):
        in_init = proc is None
        match stmt:
            case ast.Assign(target=target, value=value):
                self.store(stmt, target, self.expr(value, scopes), scopes)
            case ast.Assume(cond=cond) | ast.Assert(cond=cond):
                self.condition(cond, scopes)
            case ast.Call():
                self.call(stmt, scopes, table, in_init, in_atomic)
            case ast.Return(value=value):
                if in_init:
                    self.report.error(stmt, 'return is not allowed in init')
                elif in_atomic:
                    self.report.error(stmt, 'return is not allowed inside atomic blocks')
                elif proc.is_void and value is not None:
                    self.report.error(stmt, f"void procedure '{proc.name}' returns a value")
                elif not proc.is_void and value is None:
                    self.report.error(stmt, f"procedure '{proc.name}' must return a value")
                elif value is not None:
                    self.expect(value, self.expr(value, scopes), proc.returns.kind)
            case ast.While(cond=cond, body=body):
                self.condition(cond, scopes)
                self.block(body, scopes, table, proc, in_atomic)
            case ast.If(cond=cond, then=then, orelse=orelse):
                self.condition(cond, scopes)
                self.block(then, scopes, table, proc, in_atomic)
                if orelse is not None:
                    self.block(orelse, scopes, table, proc, in_atomic)
            case ast.Atomic(body=body):
                if self.sequential:
                    self.report.error(
                        stmt, 'syntax error: atomic blocks are not allowed in sequential programs'
                    )
                elif in_init:
                    self.report.error(stmt, 'atomic blocks are not allowed in init')
                elif in_atomic:
                    self.report.error(stmt, 'nested atomic block')
                self.block(body, scopes, table, proc, in_atomic=True)

    def call(self, stmt, scopes, table, in_init, in_atomic):
        if in_init:
            self.report.error(stmt, 'init may not call procedures')
        if in_atomic:
            self.report.error(stmt, 'calls are not allowed inside atomic blocks')
        kinds = [self.expr(arg, scopes) for arg in stmt.args]
        if stmt.name == 'main':
            self.report.error(stmt, 'call to main')
            return
        callee = table.get(stmt.name)
        if callee is None:
            self.report.error(stmt, f"undeclared procedure '{stmt.name}'")
            return
        if len(callee.params) != len(stmt.args):
            self.report.error(
                stmt,
                f"procedure '{callee.name}' takes {len(callee.params)} arguments, "
                f'{len(stmt.args)} given',
            )
        else:
            for arg, kind, param in zip(stmt.args, kinds, callee.params, strict=True):
                self.expect(arg, kind, param.type.kind)
        if stmt.target is not None:
            if callee.is_void:
                self.report.error(stmt, f"procedure '{callee.name}' does not return a value")
            else:
                self.store(stmt, stmt.target, callee.returns.kind, scopes)

    def store(self, node, target, kind, scopes):
        declared = _lookup(target, scopes)
        if declared is None:
            self.report.error(node, f"undeclared variable '{target}'")
        elif kind is not None and kind != declared.kind:
            self.report.error(
                node, f"type error: cannot assign {kind} to {declared.kind} variable '{target}'"
            )

    def condition(self, cond, scopes):
        self.expect(cond, self.expr(cond, scopes), 'bool')

    def expect(self, node, kind, want):
        if kind is not None and kind != want:
            self.report.error(node, f'type error: expected {want}, got {kind}')

    # Expressions

    def expr(self, expr, scopes):
        """Kind of ``expr`` (``'bool'`` or ``'int'``), ``None`` after an error."""
        match expr:
            case ast.Var(name=name):
                declared = _lookup(name, scopes)
                if declared is None:
                    self.report.error(expr, f"undeclared variable '{name}'")
                    return None
                return declared.kind
            case ast.Const(value=value):
                return 'bool' if isinstance(value, bool) else 'int'
            case ast.Nondet():
                return 'bool'
            case ast.Not(operand=operand):
                self.expect(operand, self.expr(operand, scopes), 'bool')
                return 'bool'
            case ast.Or(left=left, right=right):
                self.expect(left, self.expr(left, scopes), 'bool')
                self.expect(right, self.expr(right, scopes), 'bool')
                return 'bool'
            case ast.Apply(op='neg', args=(operand,)):
                self.expect(operand, self.expr(operand, scopes), 'int')
                return 'int'
            case ast.Apply(op=op, args=(left, right)):
                lkind, rkind = self.expr(left, scopes), self.expr(right, scopes)
                if op == '&&':
                    self.expect(left, lkind, 'bool')
                    self.expect(right, rkind, 'bool')
                    return 'bool'
                if op in ('=', '!='):
                    if lkind is not None and rkind is not None and lkind != rkind:
                        self.report.error(
                            expr, f"type error: cannot compare {lkind} with {rkind} using '{op}'"
                        )
                    return 'bool'
                self.expect(left, lkind, 'int')
                self.expect(right, rkind, 'int')
                return 'bool' if op in ast.COMPARISONS else 'int'
        raise TypeError(f'not an expression: {expr!r}')


def _lookup(name, scopes):
    for scope in scopes:
        if name in scope:
            return scope[name]
    return None


def check_param(program: ast.ParamProgram, reporter: Reporter, *, allow_reserved=False):
    """Report scope and type errors of a parameterized program."""
    checker = _Checker(reporter, allow_reserved, sequential=False)
    shared = checker.declare(program.shared)
    checker.block(program.init, (shared,), {}, None, in_atomic=False)
    if not program.processes:
        reporter.error(None, 'a parameterized program needs at least one process')
    names = set()
    for process in program.processes:
        checker.name(process, process.name)
        if process.name in names:
            reporter.error(process, f"redefinition of process '{process.name}'")
        names.add(process.name)
        globals_ = checker.declare(process.globals, shared)
        checker.procedures(process.procedures, (globals_, shared))


def check_seq(program: ast.SeqProgram, reporter: Reporter, *, allow_reserved=True):
    """Report scope and type errors of a sequential program."""
    checker = _Checker(reporter, allow_reserved, sequential=True)
    globals_ = checker.declare(program.globals)
    checker.procedures(program.procedures, (globals_,))
