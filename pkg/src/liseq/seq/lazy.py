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
Lazy sequentialization.

The generated program simulates blocks of threads through the recursive
procedure ``__liseq_linear_int``. A call with inputs ``q_1..q_k``, expected
outputs ``q'_1..q'_{k-1}`` and a bound ``i`` runs one fresh thread and, every
time that thread gives up the processor in round ``j``, either jumps to the
next round (when it was guessed to be the last thread of the block) or calls
itself to run the rest of the block on the rounds up to ``j``. Only shared
states that a real block of threads produces are ever resumed from, so user
code only runs on reachable states.

The round counter ``j`` and the tuples ``q``/``q'`` are globals so that the
control code inside every simulated procedure can advance them; the thread's
copy of ``q`` is saved around nested blocks together with the process globals.
The per-thread values ``last`` and ``bound`` are passed to every simulated
procedure as two trailing parameters.
"""

from __future__ import annotations

from dataclasses import replace

from .. import config
from ..lang import ast
from .common import (
    NESTED,
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
TERMINATE = gen('terminate')
ROUND = gen('j')
LAST = gen('last')
BOUND = gen('bound')
INIT = gen('init')
LINEAR_INT = gen('linear_int')


def lazy_name(proc_name: str) -> str:
    return gen(f'lazy_{proc_name}')


class _Lazy:
    def __init__(self, program: ast.ParamProgram, k: int):
        self.program = program
        self.k = k
        (self.process,) = program.processes
        self.shared = program.shared
        self.globals = self.process.globals
        self.q = [copy_names('q', i, self.shared) for i in range(1, k + 1)]
        self.qp = [copy_names('qp', i, self.shared) for i in range(1, k)]
        self.save_q = [copy_names('saveq', i, self.shared) for i in range(1, k + 1)]
        self.save_g = [gen(f'save_{decl.name}') for decl in self.globals]
        self.s = names(self.shared)
        self.g = names(self.globals)
        self.round_type = ast.int_type(1, k)

    # indexing by the round counter

    def q_of_j(self, rounds) -> dict:
        """``s := q_j`` for the given feasible values of ``j``."""
        return {i: assign_vars(self.s, self.q[i - 1]) for i in rounds}

    def store_q_j(self) -> list[ast.Stmt]:
        """``q_j := s``."""
        return select(
            ROUND, {i: assign_vars(self.q[i - 1], self.s) for i in range(1, self.k + 1)}
        )

    def qp_j_is_s(self) -> ast.Expr:
        """``q'_j = s``."""
        return ast.disjunction(
            ast.conjunction([is_value(ROUND, i), equal_vars(self.qp[i - 1], self.s)])
            for i in range(1, self.k)
        )

    def next_round(self) -> list[ast.Stmt]:
        """``j++; s := q_j``."""
        return [increment(ROUND), *select(ROUND, self.q_of_j(range(2, self.k + 1)))]

    def save_q_stmts(self) -> list[ast.Stmt]:
        pairs = zip(self.q, self.save_q, strict=True)
        return [stmt for q, save in pairs for stmt in assign_vars(save, q)]

    def restore_q(self) -> list[ast.Stmt]:
        pairs = zip(self.q, self.save_q, strict=True)
        return [stmt for q, save in pairs for stmt in assign_vars(q, save)]

    def control(self) -> list[ast.Stmt]:
        """Code interlined between user statements."""
        last_thread = ast.If(
            ast.Apply('=', (var(ROUND), var(BOUND))),
            (assign(TERMINATE, True), ast.Return()),
            (ast.Assume(self.qp_j_is_s()), *self.next_round()),
        )
        nested_block = (
            *self.store_q_j(),
            *assign_vars(self.save_g, self.g),
            *self.save_q_stmts(),
            ast.Call(LINEAR_INT, self.linear_int_args()),
            ast.If(
                ast.Apply('=', (var(ROUND), var(BOUND))),
                (ast.Return(),),
                (
                    ast.Assume(self.qp_j_is_s()),
                    *assign_vars(self.g, self.save_g),
                    *self.restore_q(),
                    assign(TERMINATE, False),
                    *self.next_round(),
                ),
            ),
        )
        switch = ast.While(ast.Nondet(), (ast.If(var(LAST), (last_thread,), nested_block),))
        return [
            ast.If(var(TERMINATE), (ast.Return(),)),
            ast.If(ast.Not(var(ATOMIC)), (switch,)),
        ]

    def linear_int_args(self) -> tuple[ast.Expr, ...]:
        return tuple(var(n) for names_ in self.q + self.qp for n in names_) + (var(ROUND),)

    # procedures

    def retarget(self, stmt: ast.Stmt) -> list[ast.Stmt]:
        if isinstance(stmt, ast.Call):
            args = stmt.args + (var(LAST), var(BOUND))
            return [replace(stmt, name=lazy_name(stmt.name), args=args)]
        return [stmt]

    def in_linear_int(self, stmt: ast.Stmt) -> list[ast.Stmt]:
        if isinstance(stmt, ast.Return):
            # the thread may not finish the block early
            return [replace(ast.Assume(ast.FALSE), pc=stmt.pc), ast.Return()]
        return self.retarget(stmt)

    def save_decls(self) -> list[ast.VarDecl]:
        decls = [
            ast.VarDecl(name, decl.type)
            for name, decl in zip(self.save_g, self.globals, strict=True)
        ]
        for i in range(1, self.k + 1):
            decls += copy_decls('saveq', i, self.shared)
        return decls

    def linear_int(self) -> ast.Procedure:
        main = self.process.procedure('main')
        params = []
        for i in range(1, self.k + 1):
            params += copy_decls('pq', i, self.shared)
        for i in range(1, self.k):
            params += copy_decls('pqp', i, self.shared)
        params.append(ast.VarDecl(BOUND, self.round_type))
        pq = [copy_names('pq', i, self.shared) for i in range(1, self.k + 1)]
        pqp = [copy_names('pqp', i, self.shared) for i in range(1, self.k)]

        body = [stmt for i in range(self.k) for stmt in assign_vars(self.q[i], pq[i])]
        body += [stmt for i in range(self.k - 1) for stmt in assign_vars(self.qp[i], pqp[i])]
        body += [
            assign(LAST, ast.Nondet()),
            assign(ROUND, 1),
            *reset(self.globals),
            *assign_vars(self.s, self.q[0]),
        ]
        body += interline(main.body, self.control, self.in_linear_int, ATOMIC)
        body += [*self.control(), ast.Assume(ast.FALSE)]
        locals_ = [ast.VarDecl(LAST, ast.BOOL), *self.save_decls(), *main.locals]
        return ast.Procedure(LINEAR_INT, tuple(params), None, tuple(locals_), tuple(body))

    def lazy_procedure(self, proc: ast.Procedure) -> ast.Procedure:
        params = proc.params + (ast.VarDecl(LAST, ast.BOOL), ast.VarDecl(BOUND, self.round_type))
        locals_ = tuple(self.save_decls()) + proc.locals
        body = interline(proc.body, self.control, self.retarget, ATOMIC)
        return ast.Procedure(lazy_name(proc.name), params, None, locals_, body)

    def main(self) -> ast.Procedure:
        u = [copy_names('u', i, self.shared) for i in range(1, self.k + 1)]
        body = [assign(ATOMIC, False)]
        for decl in self.shared:
            body += havoc(decl)
        body += [ast.Call(INIT), *assign_vars(u[0], self.s)]
        for i in range(1, self.k + 1):
            args = [var(n) for names_ in u + u[1:] for n in names_]
            body += [assign(TERMINATE, False), ast.Call(LINEAR_INT, (*args, ast.Const(i)))]
            if i < self.k:
                body += assign_vars(u[i], self.s)
        locals_ = [d for i in range(1, self.k + 1) for d in copy_decls('u', i, self.shared)]
        return ast.Procedure('main', (), None, tuple(locals_), tuple(body))

    def build(self) -> LazyOutput:
        globals_ = [
            *self.shared,
            *self.globals,
            ast.VarDecl(ATOMIC, ast.BOOL),
            ast.VarDecl(TERMINATE, ast.BOOL),
            ast.VarDecl(ROUND, self.round_type),
        ]
        for i in range(1, self.k + 1):
            globals_ += copy_decls('q', i, self.shared)
        for i in range(1, self.k):
            globals_ += copy_decls('qp', i, self.shared)

        init = ast.Procedure(INIT, (), None, (), self.program.init)
        procedures = [self.main(), init, self.linear_int()]
        main = self.process.procedure('main')
        frames = {INIT: (), LINEAR_INT: (*names(main.variables), *self.g)}
        for proc in self.process.procedures:
            if proc.name != 'main':
                procedures.append(self.lazy_procedure(proc))
                frames[lazy_name(proc.name)] = (*names(proc.variables), *self.g)

        instrumentation = Instrumentation(
            kind='lazy',
            k=self.k,
            thread_proc=LINEAR_INT,
            nesting=NESTED,
            shared=tuple(self.s),
            globals=tuple(self.g),
            procedures=frames,
        )
        return finish(procedures, globals_, instrumentation)


def sequentialize_lazy(program: ast.ParamProgram, k: int) -> LazyOutput:
    """The lazy sequential program simulating ``k``-round executions of ``program``."""
    require_normalized(program, k)
    output = _Lazy(program, k).build()
    config.loggers.seq.debug(
        'Lazy sequentialization (k=%d): %d procedures, %d statements',
        k,
        len(output.program.procedures),
        ast.max_pc(output.program),
    )
    return output
