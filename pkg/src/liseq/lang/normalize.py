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
Normal form of parameterized programs.

The sequentializations take programs with a single process whose procedures
are all void. :func:`normalize` gets there in two steps:

* several processes are merged into one, whose ``main`` picks one of the
  original ``main`` procedures nondeterministically;
* every procedure returning a value writes it to a fresh process global
  instead, which its callers read right after the call.

Statements of the input keep their program counters; statements introduced
here get fresh counters above the largest one of the input.
"""

from __future__ import annotations

import itertools
from dataclasses import replace

from .. import config
from . import ast

MERGED_PROCESS = 'Merged'


def is_normalized(program: ast.ParamProgram) -> bool:
    """True for single-process programs without value-returning procedures."""
    if len(program.processes) != 1:
        return False
    (process,) = program.processes
    for proc in process.procedures:
        if not proc.is_void:
            return False
        for stmt in ast.walk(proc.body):
            if isinstance(stmt, ast.Call) and stmt.target is not None:
                return False
            if isinstance(stmt, ast.Return) and stmt.value is not None:
                return False
    return True


def return_global(proc_name: str) -> str:
    return f'{ast.RESERVED_PREFIX}ret_{proc_name}'


def _fresh(name, taken):
    candidate = name
    for suffix in itertools.count(1):
        if candidate not in taken:
            break
        candidate = f'{name}_{suffix}'
    taken.add(candidate)
    return candidate


def _rename_block(block, names, procs):
    return tuple(_rename_calls(ast.rename_stmt(stmt, names), procs) for stmt in block)


def _rename_calls(stmt, procs):
    """Rename called procedures after ``procs``."""
    stmt = ast.map_blocks(stmt, lambda block: tuple(_rename_calls(s, procs) for s in block))
    if isinstance(stmt, ast.Call):
        return replace(stmt, name=procs.get(stmt.name, stmt.name))
    return stmt


def _variable_names(program):
    names = {d.name for d in program.shared}
    for process in program.processes:
        names.update(d.name for d in process.globals)
        for proc in process.procedures:
            names.update(d.name for d in proc.variables)
    return names


def merge_processes(program: ast.ParamProgram) -> ast.ParamProgram:
    """Fold all processes into one that starts as any of them."""
    if len(program.processes) == 1:
        return program
    taken_vars = _variable_names(program)
    taken_procs = {'main'}
    globals_, procedures, mains = [], [], []
    for process in program.processes:
        names = {}
        for decl in process.globals:
            names[decl.name] = _fresh(f'{process.name}_{decl.name}', taken_vars)
            globals_.append(replace(decl, name=names[decl.name]))
        procs = {
            proc.name: _fresh(f'{process.name}_{proc.name}', taken_procs)
            for proc in process.procedures
        }
        mains.append(procs['main'])
        for proc in process.procedures:
            procedures.append(
                replace(
                    proc,
                    name=procs[proc.name],
                    body=_rename_block(proc.body, names, procs),
                )
            )

    # if * then call A_main(); else if * then call B_main(); else ... fi fi
    choice: ast.Block = (ast.Call(mains[-1]),)
    for name in reversed(mains[:-1]):
        choice = (ast.If(ast.Nondet(), (ast.Call(name),), choice),)
    main = ast.Procedure('main', (), None, (), choice)
    merged = ast.Process(MERGED_PROCESS, tuple(globals_), (main, *procedures))
    return replace(program, processes=(merged,))


def _falls_through(block) -> bool:
    """False when every path through ``block`` ends in ``return``."""
    if not block:
        return True
    match block[-1]:
        case ast.Return():
            return False
        case ast.If(then=then, orelse=orelse) if orelse is not None:
            return _falls_through(then) or _falls_through(orelse)
    return True


def _devalue_block(block, ret):
    out = []
    for stmt in block:
        stmt = ast.map_blocks(stmt, lambda b: _devalue_block(b, ret))
        match stmt:
            case ast.Call(name=name, target=target) if target is not None:
                out.append(replace(stmt, target=None))
                out.append(ast.Assign(target, ast.Var(return_global(name))))
            case ast.Return(value=value) if value is not None:
                out.append(
                    ast.Assign(ret, value, pc=stmt.pc, line=stmt.line, column=stmt.column)
                )
                out.append(ast.Return())
            case _:
                out.append(stmt)
    return tuple(out)


def remove_return_values(program: ast.ParamProgram) -> ast.ParamProgram:
    """Route return values through one process global per procedure."""
    processes = []
    for process in program.processes:
        globals_ = list(process.globals)
        procedures = []
        for proc in process.procedures:
            if proc.is_void:
                body = _devalue_block(proc.body, None)
                procedures.append(replace(proc, body=body))
                continue
            ret = return_global(proc.name)
            globals_.append(ast.VarDecl(ret, proc.returns))
            body = _devalue_block(proc.body, ret)
            if _falls_through(body):
                # falling off the end returns the default
                body += (ast.Assign(ret, ast.Const(proc.returns.default())),)
            procedures.append(replace(proc, returns=None, body=body))
        processes.append(
            replace(process, globals=tuple(globals_), procedures=tuple(procedures))
        )
    return replace(program, processes=tuple(processes))


def number_fresh(program: ast.Program, start: int) -> ast.Program:
    """Give every unlabelled statement a counter from ``start`` upwards."""
    counter = itertools.count(start)

    def block(stmts):
        return tuple(statement(stmt) for stmt in stmts)

    def statement(stmt):
        pc = stmt.pc or next(counter)
        return replace(ast.map_blocks(stmt, block), pc=pc)

    def procedure(proc):
        return replace(proc, body=block(proc.body))

    if isinstance(program, ast.SeqProgram):
        return replace(program, procedures=tuple(procedure(p) for p in program.procedures))
    processes = tuple(
        replace(p, procedures=tuple(procedure(proc) for proc in p.procedures))
        for p in program.processes
    )
    return replace(program, init=block(program.init), processes=processes)


def normalize(program: ast.ParamProgram) -> ast.ParamProgram:
    """Single-process, all-void equivalent of a checked program."""
    start = ast.max_pc(program) + 1
    result = remove_return_values(merge_processes(program))
    result = number_fresh(result, start)
    config.loggers.lang.debug(
        'Normalized %d processes; %d statements added',
        len(program.processes),
        ast.max_pc(result) - start + 1 if ast.max_pc(result) >= start else 0,
    )
    return result
