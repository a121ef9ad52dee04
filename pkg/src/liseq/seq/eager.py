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
Eager sequentialization.

The generated ``main`` guesses the shared state at the start of every round,
then simulates threads one after the other, each through all ``k`` rounds.
Every round has its own copy ``cur_r`` of the shared variables and a thread
reads and writes the copy of the round it is in, so switching to the next
round only increments ``r``. Round ``r`` of a thread thus resumes where the
previous thread left round ``r``. Only at the very end does ``main`` check
that round ``r`` ended where round ``r + 1`` was guessed to start.

User assertions are checked during the simulation, possibly on states no
execution reaches; a failure sets ``err`` and ends the thread, and ``main``
reports it only once the guesses are validated (``assert !err``).
"""

from __future__ import annotations

from dataclasses import replace

from .. import config
from ..lang import ast
from .common import (
    SEQUENTIAL,
    Instrumentation,
    LazyOutput,
    assign,
    assign_vars,
    copy_decls,
    copy_names,
    equal_vars,
    finish,
    gen,
    havoc,
    increment,
    interline,
    is_value,
    names,
    require_normalized,
    reset,
    select,
    var,
)

ATOMIC = gen('atomic')
STOP = gen('stop')
ERROR = gen('err')
ROUND = gen('r')
INIT = gen('init')
THREAD = gen('thread')


def eager_name(proc_name: str) -> str:
    return gen(f'eager_{proc_name}')


def _touched(stmt: ast.Stmt):
    """Variables a simple statement reads or writes."""
    match stmt:
        case ast.Assign(target=target, value=value):
            yield target
            yield from ast.expr_vars(value)
        case ast.Call(args=args, target=target):
            if target is not None:
                yield target
            for arg in args:
                yield from ast.expr_vars(arg)
        case ast.Return(value=value) if value is not None:
            yield from ast.expr_vars(value)


class _Eager:
    def __init__(self, program: ast.ParamProgram, k: int):
        self.program = program
        self.k = k
        (self.process,) = program.processes
        self.shared = program.shared
        self.globals = self.process.globals
        self.g = names(self.globals)
        self.cur = [copy_names('cur', i, self.shared) for i in range(1, k + 1)]
        # guess[i] is the start of round i + 2
        self.guess = [copy_names('guess', i, self.shared) for i in range(2, k + 1)]
        self.rounds = [dict(zip(names(self.shared), cur, strict=True)) for cur in self.cur]
        # copies for rounds past the first are labelled above every source label
        self.span = ast.max_pc(program) + 1
        self.aliases: dict[int, int] = {}

    def is_shared(self, name: str) -> bool:
        return name in self.rounds[0]

    def in_round(self, expr: ast.Expr) -> ast.Expr:
        """``expr`` evaluated on the shared copy of the current round."""
        if not any(self.is_shared(name) for name in ast.expr_vars(expr)):
            return expr
        if self.k == 1:
            return ast.rename(expr, self.rounds[0])
        return ast.disjunction(
            ast.Apply('&&', (is_value(ROUND, r), ast.rename(expr, mapping)))
            for r, mapping in enumerate(self.rounds, start=1)
        )

    def per_round(self, stmt: ast.Stmt) -> list[ast.Stmt]:
        """Run the copy of ``stmt`` that accesses the current round's shared copy."""
        if not any(self.is_shared(name) for name in _touched(stmt)):
            return [stmt]
        cases = {}
        for r, mapping in enumerate(self.rounds, start=1):
            copy = ast.rename_stmt(stmt, mapping)
            if r > 1:
                label = stmt.pc + (r - 1) * self.span
                self.aliases[label] = stmt.pc
                copy = replace(copy, pc=label)
            cases[r] = [copy]
        return select(ROUND, cases)

    def control(self, *, callee: bool = False) -> list[ast.Stmt]:
        """Round switches interlined between user statements."""
        leave = (assign(STOP, True), ast.Return())
        switch = leave
        if self.k > 1:
            switch = (ast.If(is_value(ROUND, self.k), leave, (increment(ROUND),)),)
        cond = ast.Nondet()
        if callee:
            # no switch while a caller is inside an atomic block
            cond = ast.Apply('&&', (ast.Not(var(ATOMIC)), cond))
        return [ast.While(cond, switch)]

    def rewrite(self, stmt: ast.Stmt) -> list[ast.Stmt]:
        match stmt:
            case ast.Call(name=name):
                copies = self.per_round(replace(stmt, name=eager_name(name)))
                return [*copies, ast.If(var(STOP), (ast.Return(),))]
            case ast.Assert(cond=cond):
                failed = (
                    assign(ERROR, True),
                    assign(ATOMIC, False),
                    assign(STOP, True),
                    ast.Return(),
                )
                return [ast.If(ast.Not(self.in_round(cond)), failed, pc=stmt.pc)]
            case ast.Assume(cond=cond):
                return [replace(stmt, cond=self.in_round(cond))]
        return self.per_round(stmt)

    def thread(self) -> ast.Procedure:
        main = self.process.procedure('main')
        body = [assign(STOP, False), *reset(self.globals), assign(ROUND, 1)]
        body += interline(main.body, self.control, self.rewrite, ATOMIC, cond=self.in_round)
        return ast.Procedure(THREAD, (), None, main.locals, tuple(body))

    def eager_procedure(self, proc: ast.Procedure) -> ast.Procedure:
        body = interline(
            proc.body,
            lambda: self.control(callee=True),
            self.rewrite,
            ATOMIC,
            cond=self.in_round,
        )
        return replace(proc, name=eager_name(proc.name), body=body)

    def init(self) -> ast.Procedure:
        body = tuple(ast.rename_stmt(stmt, self.rounds[0]) for stmt in self.program.init)
        return ast.Procedure(INIT, (), None, (), body)

    def main(self) -> ast.Procedure:
        body = [assign(ATOMIC, False), assign(ERROR, False), assign(ROUND, 1)]
        for decl in copy_decls('cur', 1, self.shared):
            body += havoc(decl)
        body.append(ast.Call(INIT))
        for i in range(2, self.k + 1):
            for decl in copy_decls('guess', i, self.shared):
                body += havoc(decl)
        for cur, guess in zip(self.cur[1:], self.guess, strict=True):
            body += assign_vars(cur, guess)
        body += [
            ast.Call(THREAD),
            ast.While(ast.Nondet(), (ast.Call(THREAD),)),
        ]
        for cur, guess in zip(self.cur, self.guess, strict=False):
            body.append(ast.Assume(equal_vars(cur, guess)))
        body.append(ast.Assert(ast.Not(var(ERROR))))
        return ast.Procedure('main', (), None, (), tuple(body))

    def build(self) -> LazyOutput:
        globals_ = [
            *self.globals,
            ast.VarDecl(ATOMIC, ast.BOOL),
            ast.VarDecl(STOP, ast.BOOL),
            ast.VarDecl(ERROR, ast.BOOL),
            ast.VarDecl(ROUND, ast.int_type(1, self.k)),
        ]
        for i in range(1, self.k + 1):
            globals_ += copy_decls('cur', i, self.shared)
        for i in range(2, self.k + 1):
            globals_ += copy_decls('guess', i, self.shared)

        procedures = [self.main(), self.init(), self.thread()]
        main = self.process.procedure('main')
        frames = {INIT: (), THREAD: (*names(main.variables), *self.g)}
        for proc in self.process.procedures:
            if proc.name != 'main':
                procedures.append(self.eager_procedure(proc))
                frames[eager_name(proc.name)] = (*names(proc.variables), *self.g)

        instrumentation = Instrumentation(
            kind='eager',
            k=self.k,
            thread_proc=THREAD,
            nesting=SEQUENTIAL,
            shared=tuple(names(self.shared)),
            globals=tuple(self.g),
            procedures=frames,
            round_var=ROUND,
            round_copies=tuple(tuple(cur) for cur in self.cur),
        )
        return finish(procedures, globals_, instrumentation, self.aliases)


def sequentialize_eager(program: ast.ParamProgram, k: int) -> LazyOutput:
    """The eager sequential program simulating ``k``-round executions of ``program``."""
    require_normalized(program, k)
    output = _Eager(program, k).build()
    config.loggers.seq.debug(
        'Eager sequentialization (k=%d): %d procedures, %d statements',
        k,
        len(output.program.procedures),
        ast.max_pc(output.program),
    )
    return output
