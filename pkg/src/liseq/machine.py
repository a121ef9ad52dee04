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
Compiled programs and their small-step semantics.

Both the concurrent oracle and the sequential explorer run programs through a
:class:`Machine`: one per process (or per sequential program), holding a
control-flow graph for each procedure. A thread is described by three values,

* ``shared``: the tuple of shared-variable values (empty for sequential
  programs),
* ``globals``: the tuple of process globals (the globals of a sequential
  program),
* ``stack``: a tuple of frames ``(proc_id, pc, locals, args)``, bottom first.

A frame's ``pc`` is the label of the statement it executes next, or ``0`` once
the procedure body is finished. A caller's frame keeps the label of its call
statement until the callee returns.

:meth:`Machine.step` returns every successor of a thread by one statement.
Runtime faults and failed assertions are outcomes (:class:`Fail`), never
exceptions.

"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .lang import ast

ASSERTION = 'assertion'
DIV_ZERO = 'division by zero'
OUT_OF_RANGE = 'out of range'

SHARED, GLOBAL, LOCAL = range(3)
EXIT = 0


class _Fault(Exception):
    def __init__(self, kind):
        super().__init__(kind)
        self.kind = kind


class Next(NamedTuple):
    shared: tuple
    globals: tuple
    stack: tuple
    event: tuple | None = None


class Fail(NamedTuple):
    kind: str
    pc: int


def _bits(count):
    return list(itertools.product((False, True), repeat=count))


_BITS = [_bits(n) for n in range(4)]


def choices(count: int):
    """All assignments to ``count`` nondeterministic Booleans."""
    return _BITS[count] if count < len(_BITS) else _bits(count)


def _div(a, b):
    if b == 0:
        raise _Fault(DIV_ZERO)
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _mod(a, b):
    return a - b * _div(a, b)


_OPS = {
    '=': operator.eq,
    '!=': operator.ne,
    '<': operator.lt,
    '<=': operator.le,
    '>': operator.gt,
    '>=': operator.ge,
    '+': operator.add,
    '-': operator.sub,
    '*': operator.mul,
    '/': _div,
    '%': _mod,
}

Evaluator = Callable[[tuple, tuple], ast.Value]


def compile_expr(expr: ast.Expr, resolve, offset: int = 0) -> tuple[Evaluator, int]:
    """Turn ``expr`` into ``fn(env, bits)`` and the number of ``*`` it reads.

    ``env`` is ``(shared, globals, locals)``; ``bits`` holds one Boolean per
    nondeterministic choice, consumed left to right from ``offset``.
    ``resolve`` maps a variable name to its ``(slot, index, type)``.
    """
    match expr:
        case ast.Var(name=name):
            slot, index, _ = resolve(name)
            return (lambda env, bits: env[slot][index]), 0
        case ast.Const(value=value):
            return (lambda env, bits: value), 0
        case ast.Nondet():
            return (lambda env, bits: bits[offset]), 1
        case ast.Not(operand=operand):
            fn, n = compile_expr(operand, resolve, offset)
            return (lambda env, bits: not fn(env, bits)), n
        case ast.Or(left=left, right=right):
            lfn, ln = compile_expr(left, resolve, offset)
            rfn, rn = compile_expr(right, resolve, offset + ln)
            return (lambda env, bits: lfn(env, bits) or rfn(env, bits)), ln + rn
        case ast.Apply(op='neg', args=(operand,)):
            fn, n = compile_expr(operand, resolve, offset)
            return (lambda env, bits: -fn(env, bits)), n
        case ast.Apply(op='&&', args=(left, right)):
            lfn, ln = compile_expr(left, resolve, offset)
            rfn, rn = compile_expr(right, resolve, offset + ln)
            return (lambda env, bits: lfn(env, bits) and rfn(env, bits)), ln + rn
        case ast.Apply(op=op, args=(left, right)):
            lfn, ln = compile_expr(left, resolve, offset)
            rfn, rn = compile_expr(right, resolve, offset + ln)
            fn = _OPS[op]
            return (lambda env, bits: fn(lfn(env, bits), rfn(env, bits))), ln + rn
    raise TypeError(f'not an expression: {expr!r}')


def outcomes(fn: Evaluator, count: int, env: tuple):
    """Distinct results of ``fn`` over all choices; faults appear as ``_Fault``."""
    seen = []
    for bits in choices(count):
        try:
            value = fn(env, bits)
        except _Fault as fault:
            value = fault
        if not any(_same(value, other) for other in seen):
            seen.append(value)
    return seen


def _same(a, b):
    if isinstance(a, _Fault) or isinstance(b, _Fault):
        return isinstance(a, _Fault) and isinstance(b, _Fault) and a.kind == b.kind
    return type(a) is type(b) and a == b


# Instructions


@dataclass(frozen=True, slots=True)
class Goto:
    next: int


@dataclass(frozen=True, slots=True)
class Store:
    slot: int
    index: int
    type: ast.Type
    value: Evaluator
    nbits: int
    next: int


@dataclass(frozen=True, slots=True)
class Guard:
    """``assume`` (``check=False``) or ``assert`` (``check=True``)."""

    cond: Evaluator
    nbits: int
    check: bool
    next: int


@dataclass(frozen=True, slots=True)
class Branch:
    cond: Evaluator
    nbits: int
    then: int
    orelse: int


@dataclass(frozen=True, slots=True)
class Invoke:
    callee: int
    args: tuple[Evaluator, ...]
    nbits: tuple[int, ...]
    target: tuple[int, int, ast.Type] | None
    next: int


@dataclass(frozen=True, slots=True)
class Leave:
    """``return``, or falling off the end of a body when ``value`` is absent."""

    value: Evaluator | None
    nbits: int


@dataclass
class Procedure:
    """Control-flow graph of one procedure."""

    pid: int
    name: str
    params: tuple[ast.VarDecl, ...]
    locals: tuple[ast.VarDecl, ...]
    returns: ast.Type | None
    entry: int = EXIT
    code: dict[int, object] = field(default_factory=dict)

    @property
    def variables(self):
        return self.params + self.locals

    def local_defaults(self) -> tuple:
        return tuple(decl.type.default() for decl in self.locals)


class Machine:
    """Compiled procedures of one process, sharing ``shared`` and ``globals``."""

    def __init__(self, shared, globals_, procedures, *, name='<program>'):
        self.name = name
        self.shared = tuple(shared)
        self.globals = tuple(globals_)
        self.procedures: list[Procedure] = []
        self.index: dict[str, int] = {}
        self.atomic_pcs: set[int] = set()
        self.asserts: dict[int, ast.Assert] = {}
        self.owner: dict[int, int] = {}
        for proc in procedures:
            compiled = Procedure(
                len(self.procedures), proc.name, proc.params, proc.locals, proc.returns
            )
            self.index[proc.name] = compiled.pid
            self.procedures.append(compiled)
        for proc in procedures:
            self._compile(proc)

    # Compilation

    def _resolver(self, proc):
        frame = {d.name: (LOCAL, i, d.type) for i, d in enumerate(proc.variables)}
        layer_g = {d.name: (GLOBAL, i, d.type) for i, d in enumerate(self.globals)}
        layer_s = {d.name: (SHARED, i, d.type) for i, d in enumerate(self.shared)}

        def resolve(name):
            for layer in (frame, layer_g, layer_s):
                if name in layer:
                    return layer[name]
            raise KeyError(f"undeclared variable '{name}' in '{proc.name}'")

        return resolve

    def _compile(self, proc):
        compiled = self.procedures[self.index[proc.name]]
        resolve = self._resolver(proc)
        compiled.code[EXIT] = Leave(None, 0)
        compiled.entry = self._block(compiled, proc.body, EXIT, resolve, atomic=False)

    def _block(self, compiled, block, after, resolve, atomic):
        for i, stmt in enumerate(block):
            follow = block[i + 1].pc if i + 1 < len(block) else after
            self._stmt(compiled, stmt, follow, resolve, atomic)
        return block[0].pc if block else after

    def _stmt(self, compiled, stmt, follow, resolve, atomic):
        if stmt.pc <= 0 or stmt.pc in self.owner:
            raise ValueError(f'statement labels must be positive and unique (pc {stmt.pc})')
        self.owner[stmt.pc] = compiled.pid
        if atomic:
            self.atomic_pcs.add(stmt.pc)
        code = compiled.code
        match stmt:
            case ast.Skip():
                code[stmt.pc] = Goto(follow)
            case ast.Assign(target=target, value=value):
                slot, index, type_ = resolve(target)
                fn, n = compile_expr(value, resolve)
                code[stmt.pc] = Store(slot, index, type_, fn, n, follow)
            case ast.Assume(cond=cond):
                fn, n = compile_expr(cond, resolve)
                code[stmt.pc] = Guard(fn, n, False, follow)
            case ast.Assert(cond=cond):
                fn, n = compile_expr(cond, resolve)
                code[stmt.pc] = Guard(fn, n, True, follow)
                self.asserts[stmt.pc] = stmt
            case ast.Call(name=name, args=args, target=target):
                compiled_args = [compile_expr(arg, resolve) for arg in args]
                code[stmt.pc] = Invoke(
                    self.index[name],
                    tuple(fn for fn, _ in compiled_args),
                    tuple(n for _, n in compiled_args),
                    None if target is None else resolve(target),
                    follow,
                )
            case ast.Return(value=None):
                code[stmt.pc] = Leave(None, 0)
            case ast.Return(value=value):
                fn, n = compile_expr(value, resolve)
                code[stmt.pc] = Leave(fn, n)
            case ast.While(cond=cond, body=body):
                fn, n = compile_expr(cond, resolve)
                entry = self._block(compiled, body, stmt.pc, resolve, atomic)
                code[stmt.pc] = Branch(fn, n, entry, follow)
            case ast.If(cond=cond, then=then, orelse=orelse):
                fn, n = compile_expr(cond, resolve)
                then_entry = self._block(compiled, then, follow, resolve, atomic)
                else_entry = self._block(compiled, orelse or (), follow, resolve, atomic)
                code[stmt.pc] = Branch(fn, n, then_entry, else_entry)
            case ast.Atomic(body=body):
                code[stmt.pc] = Goto(self._block(compiled, body, follow, resolve, atomic=True))
            case _:
                raise TypeError(f'not a statement: {stmt!r}')

    # Execution

    def procedure(self, name: str) -> Procedure:
        return self.procedures[self.index[name]]

    def frame(self, name: str, args: tuple = ()) -> tuple:
        """A fresh frame entering procedure ``name`` with ``args``."""
        proc = self.procedure(name)
        return (proc.pid, proc.entry, tuple(args) + proc.local_defaults(), tuple(args))

    def default_globals(self) -> tuple:
        return tuple(decl.type.default() for decl in self.globals)

    def switchable(self, stack: tuple) -> bool:
        """True unless the thread is inside an atomic block."""
        return not stack or stack[-1][1] not in self.atomic_pcs

    def step(self, shared: tuple, globals_: tuple, stack: tuple) -> list:
        """Successors of a thread by one statement (empty once it has finished)."""
        if not stack:
            return []
        pid, pc, local, args = stack[-1]
        proc = self.procedures[pid]
        instr = proc.code[pc]
        env = (shared, globals_, local)
        results = []

        match instr:
            case Goto(next=follow):
                results.append(Next(shared, globals_, stack[:-1] + ((pid, follow, local, args),)))
            case Store():
                for value in outcomes(instr.value, instr.nbits, env):
                    if isinstance(value, _Fault):
                        results.append(Fail(value.kind, pc))
                    elif not instr.type.contains(value):
                        results.append(Fail(OUT_OF_RANGE, pc))
                    else:
                        s, g, l = _store(env, instr.slot, instr.index, value)
                        results.append(Next(s, g, stack[:-1] + ((pid, instr.next, l, args),)))
            case Guard():
                for value in outcomes(instr.cond, instr.nbits, env):
                    if isinstance(value, _Fault):
                        results.append(Fail(value.kind, pc))
                    elif value:
                        results.append(
                            Next(shared, globals_, stack[:-1] + ((pid, instr.next, local, args),))
                        )
                    elif instr.check:
                        results.append(Fail(ASSERTION, pc))
            case Branch():
                for value in outcomes(instr.cond, instr.nbits, env):
                    if isinstance(value, _Fault):
                        results.append(Fail(value.kind, pc))
                    else:
                        follow = instr.then if value else instr.orelse
                        results.append(
                            Next(shared, globals_, stack[:-1] + ((pid, follow, local, args),))
                        )
            case Invoke():
                results.extend(self._call(instr, pc, env, stack))
            case Leave():
                results.extend(self._return(instr, pc, proc, env, stack))
        return results

    def _call(self, instr, pc, env, stack):
        callee = self.procedures[instr.callee]
        per_arg = [outcomes(fn, n, env) for fn, n in zip(instr.args, instr.nbits, strict=True)]
        results = []
        for values in itertools.product(*per_arg):
            fault = next((v for v in values if isinstance(v, _Fault)), None)
            if fault is not None:
                results.append(Fail(fault.kind, pc))
                continue
            if not all(p.type.contains(v) for p, v in zip(callee.params, values, strict=True)):
                results.append(Fail(OUT_OF_RANGE, pc))
                continue
            frame = (callee.pid, callee.entry, values + callee.local_defaults(), values)
            results.append(Next(env[SHARED], env[GLOBAL], stack + (frame,), ('call', callee.pid)))
        return results

    def _return(self, instr, pc, proc, env, stack):
        if instr.value is None:
            values = [None if proc.returns is None else proc.returns.default()]
        else:
            values = outcomes(instr.value, instr.nbits, env)
        popped = stack[-1]
        results = []
        for value in values:
            if isinstance(value, _Fault):
                results.append(Fail(value.kind, pc))
                continue
            if proc.returns is not None and not proc.returns.contains(value):
                results.append(Fail(OUT_OF_RANGE, pc))
                continue
            event = ('return', popped)
            if len(stack) == 1:
                results.append(Next(env[SHARED], env[GLOBAL], (), event))
                continue
            cpid, cpc, clocal, cargs = stack[-2]
            site = self.procedures[cpid].code[cpc]
            s, g, l = env[SHARED], env[GLOBAL], clocal
            if site.target is not None:
                slot, index, type_ = site.target
                if not type_.contains(value):
                    results.append(Fail(OUT_OF_RANGE, pc))
                    continue
                s, g, l = _store((s, g, l), slot, index, value)
            results.append(Next(s, g, stack[:-2] + ((cpid, site.next, l, cargs),), event))
        return results


def _store(env, slot, index, value):
    updated = env[slot][:index] + (value,) + env[slot][index + 1 :]
    return tuple(updated if i == slot else part for i, part in enumerate(env))


def compile_process(process: ast.Process, shared=()) -> Machine:
    return Machine(shared, process.globals, process.procedures, name=process.name)


def compile_seq(program: ast.SeqProgram) -> Machine:
    return Machine((), program.globals, program.procedures)


INIT = '<init>'


def compile_init(program: ast.ParamProgram) -> Machine:
    """A machine running the ``init`` block as a procedure without locals."""
    init = ast.Procedure(INIT, (), None, (), program.init)
    return Machine(program.shared, (), (init,), name=INIT)


def require_finite(decls, what='variable'):
    for decl in decls:
        if not decl.type.finite:
            raise ValueError(f"{what} '{decl.name}' has an unbounded domain")


def valuations(decls) -> list[tuple]:
    """Every valuation of ``decls`` in declaration order."""
    require_finite(decls)
    return list(itertools.product(*(decl.type.domain() for decl in decls)))
