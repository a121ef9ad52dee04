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
Abstract syntax of parameterized and sequential programs.

All nodes are frozen dataclasses, so programs are immutable and hashable.
Source positions and program counters are carried as keyword-only fields
excluded from comparison: two programs that differ only in their labels
compare equal, which is what the parse/print round trip relies on.

Every statement carries a program counter (``pc``). Labels produced by the
parser (and by :func:`relabel`) are positive and follow the order in which
statements appear in the source; ``0`` marks a statement that has not been
labelled yet.

"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field, replace
from typing import Union

Value = Union[bool, int]

RESERVED_PREFIX = '__liseq_'

BINARY_OPS = ('&&', '=', '!=', '<', '<=', '>', '>=', '+', '-', '*', '/', '%')
COMPARISONS = ('=', '!=', '<', '<=', '>', '>=')
ARITHMETIC = ('+', '-', '*', '/', '%')

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def _pos():
    return field(default=0, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Type:
    """A Boolean or a (possibly unbounded) integer type."""

    kind: str
    lo: int | None = None
    hi: int | None = None

    def __post_init__(self):
        if self.kind not in ('bool', 'int'):
            raise ValueError(f'unknown type kind {self.kind!r}')
        if self.kind == 'int' and (self.lo is None) != (self.hi is None):
            raise ValueError('integer ranges need both bounds')
        bounds = () if self.lo is None else (self.lo, self.hi)
        if not all(INT64_MIN <= bound <= INT64_MAX for bound in bounds):
            raise ValueError(f'integer range [{self.lo},{self.hi}] does not fit in 64 bits')
        if self.lo is not None and self.lo > self.hi:
            raise ValueError(f'empty integer range [{self.lo},{self.hi}]')

    @property
    def is_bool(self) -> bool:
        return self.kind == 'bool'

    @property
    def finite(self) -> bool:
        return self.kind == 'bool' or self.lo is not None

    def domain(self) -> tuple[Value, ...]:
        """All values of the type, in increasing order."""
        if self.kind == 'bool':
            return (False, True)
        if self.lo is None:
            raise ValueError('unbounded integers have no finite domain')
        return tuple(range(self.lo, self.hi + 1))

    def default(self) -> Value:
        """Initial value of locals and process globals."""
        if self.kind == 'bool':
            return False
        if self.lo is None or self.lo <= 0 <= self.hi:
            return 0
        return self.lo

    def contains(self, value: Value) -> bool:
        if self.kind == 'bool':
            return isinstance(value, bool)
        if self.lo is None:
            return True
        return self.lo <= value <= self.hi

    def __str__(self):
        if self.kind == 'bool':
            return 'bool'
        if self.lo is None:
            return 'int'
        return f'int[{self.lo},{self.hi}]'


BOOL = Type('bool')
INT = Type('int')


def int_type(lo: int, hi: int) -> Type:
    return Type('int', lo, hi)


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: Type
    line: int = _pos()
    column: int = _pos()


# Expressions


@dataclass(frozen=True)
class Expr:
    line: int = _pos()
    column: int = _pos()


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    value: Value


@dataclass(frozen=True)
class Nondet(Expr):
    """The nondeterministic Boolean ``*``."""


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Apply(Expr):
    """An interpreted operator (``&&``, comparisons, arithmetic, unary ``neg``)."""

    op: str
    args: tuple[Expr, ...]


TRUE = Const(True)
FALSE = Const(False)


def binary(op: str, left: Expr, right: Expr) -> Expr:
    if op == '||':
        return Or(left, right)
    return Apply(op, (left, right))


def conjunction(exprs) -> Expr:
    """Left-nested ``&&`` of ``exprs``; ``T`` when empty."""
    result = None
    for expr in exprs:
        result = expr if result is None else Apply('&&', (result, expr))
    return TRUE if result is None else result


def disjunction(exprs) -> Expr:
    """Left-nested ``||`` of ``exprs``; ``F`` when empty."""
    result = None
    for expr in exprs:
        result = expr if result is None else Or(result, expr)
    return FALSE if result is None else result


def negate(expr: Expr) -> Expr:
    return Not(expr)


def expr_vars(expr: Expr) -> Iterator[str]:
    """Names of the variables read by ``expr``."""
    match expr:
        case Var(name=name):
            yield name
        case Not(operand=operand):
            yield from expr_vars(operand)
        case Or(left=left, right=right):
            yield from expr_vars(left)
            yield from expr_vars(right)
        case Apply(args=args):
            for arg in args:
                yield from expr_vars(arg)


def rename(expr: Expr, mapping: dict[str, str]) -> Expr:
    """``expr`` reading ``mapping[name]`` wherever it read ``name``."""
    match expr:
        case Var(name=name):
            return replace(expr, name=mapping.get(name, name))
        case Not(operand=operand):
            return replace(expr, operand=rename(operand, mapping))
        case Or(left=left, right=right):
            return replace(expr, left=rename(left, mapping), right=rename(right, mapping))
        case Apply(args=args):
            return replace(expr, args=tuple(rename(arg, mapping) for arg in args))
    return expr


def has_nondet(expr: Expr) -> bool:
    match expr:
        case Nondet():
            return True
        case Not(operand=operand):
            return has_nondet(operand)
        case Or(left=left, right=right):
            return has_nondet(left) or has_nondet(right)
        case Apply(args=args):
            return any(has_nondet(arg) for arg in args)
    return False


# Statements

Block = tuple['Stmt', ...]


@dataclass(frozen=True)
class Stmt:
    pc: int = _pos()
    line: int = _pos()
    column: int = _pos()


@dataclass(frozen=True)
class Skip(Stmt):
    pass


@dataclass(frozen=True)
class Assign(Stmt):
    target: str
    value: Expr


@dataclass(frozen=True)
class Assume(Stmt):
    cond: Expr


@dataclass(frozen=True)
class Assert(Stmt):
    cond: Expr


@dataclass(frozen=True)
class Call(Stmt):
    """``call f(args)``, or ``target := f(args)`` when ``target`` is set."""

    name: str
    args: tuple[Expr, ...] = ()
    target: str | None = None


@dataclass(frozen=True)
class Return(Stmt):
    value: Expr | None = None


@dataclass(frozen=True)
class While(Stmt):
    cond: Expr
    body: Block


@dataclass(frozen=True)
class If(Stmt):
    cond: Expr
    then: Block
    orelse: Block | None = None


@dataclass(frozen=True)
class Atomic(Stmt):
    body: Block


def children(stmt: Stmt) -> tuple[Block, ...]:
    """Nested blocks of a statement, in source order."""
    match stmt:
        case While(body=body) | Atomic(body=body):
            return (body,)
        case If(then=then, orelse=orelse):
            return (then,) if orelse is None else (then, orelse)
    return ()


def walk(block: Block) -> Iterator[Stmt]:
    """Pre-order traversal of every statement in ``block``."""
    for stmt in block:
        yield stmt
        for child in children(stmt):
            yield from walk(child)


def map_blocks(stmt: Stmt, fn) -> Stmt:
    """Rebuild ``stmt`` with ``fn`` applied to each of its nested blocks."""
    match stmt:
        case While(body=body) | Atomic(body=body):
            return replace(stmt, body=fn(body))
        case If(then=then, orelse=orelse):
            return replace(stmt, then=fn(then), orelse=None if orelse is None else fn(orelse))
    return stmt


def rename_stmt(stmt: Stmt, mapping: dict[str, str]) -> Stmt:
    """``stmt`` and everything nested in it with the variables in ``mapping`` renamed."""
    match stmt:
        case Assign(target=target, value=value):
            stmt = replace(stmt, target=mapping.get(target, target), value=rename(value, mapping))
        case Assume(cond=cond) | Assert(cond=cond) | While(cond=cond) | If(cond=cond):
            stmt = replace(stmt, cond=rename(cond, mapping))
        case Call(args=args, target=target):
            stmt = replace(
                stmt,
                args=tuple(rename(arg, mapping) for arg in args),
                target=None if target is None else mapping.get(target, target),
            )
        case Return(value=value) if value is not None:
            stmt = replace(stmt, value=rename(value, mapping))
    return map_blocks(stmt, lambda block: tuple(rename_stmt(s, mapping) for s in block))


# Programs


@dataclass(frozen=True)
class Procedure:
    name: str
    params: tuple[VarDecl, ...]
    returns: Type | None
    locals: tuple[VarDecl, ...]
    body: Block
    line: int = _pos()
    column: int = _pos()

    @property
    def is_void(self) -> bool:
        return self.returns is None

    @property
    def variables(self) -> tuple[VarDecl, ...]:
        """Parameters followed by locals: the layout of a call frame."""
        return self.params + self.locals


@dataclass(frozen=True)
class Process:
    name: str
    globals: tuple[VarDecl, ...]
    procedures: tuple[Procedure, ...]
    line: int = _pos()
    column: int = _pos()

    def procedure(self, name: str) -> Procedure:
        for proc in self.procedures:
            if proc.name == name:
                return proc
        raise KeyError(name)


@dataclass(frozen=True)
class ParamProgram:
    shared: tuple[VarDecl, ...]
    init: Block
    processes: tuple[Process, ...]

    def statements(self) -> Iterator[Stmt]:
        """Every statement of the program, init first, in source order."""
        yield from walk(self.init)
        for process in self.processes:
            for proc in process.procedures:
                yield from walk(proc.body)


@dataclass(frozen=True)
class SeqProgram:
    globals: tuple[VarDecl, ...]
    procedures: tuple[Procedure, ...]

    def procedure(self, name: str) -> Procedure:
        for proc in self.procedures:
            if proc.name == name:
                return proc
        raise KeyError(name)

    def statements(self) -> Iterator[Stmt]:
        for proc in self.procedures:
            yield from walk(proc.body)


Program = Union[ParamProgram, SeqProgram]


def relabel(program: Program) -> tuple[Program, dict[int, int]]:
    """Assign fresh program counters ``1, 2, ...`` in source order.

    Returns the relabelled program and a map from every positive label of the
    input to its new label. Unlabelled statements (``pc == 0``) get fresh labels
    and do not appear in the map.
    """
    counter = 0
    mapping: dict[int, int] = {}

    def block(stmts: Block) -> Block:
        return tuple(statement(stmt) for stmt in stmts)

    def statement(stmt: Stmt) -> Stmt:
        nonlocal counter
        counter += 1
        label = counter
        if stmt.pc > 0:
            mapping[stmt.pc] = label
        return replace(map_blocks(stmt, block), pc=label)

    # Statements are numbered before their children, so the label of a compound
    # statement is always smaller than the labels inside it.
    def procedure(proc: Procedure) -> Procedure:
        return replace(proc, body=block(proc.body))

    if isinstance(program, ParamProgram):
        init = block(program.init)
        processes = tuple(
            replace(p, procedures=tuple(procedure(proc) for proc in p.procedures))
            for p in program.processes
        )
        return replace(program, init=init, processes=processes), mapping
    procedures = tuple(procedure(proc) for proc in program.procedures)
    return replace(program, procedures=procedures), mapping


def max_pc(program: Program) -> int:
    return max((stmt.pc for stmt in program.statements()), default=0)


def pcs_unique(program: Program) -> bool:
    """True when every statement has a distinct positive label."""
    seen = set()
    for stmt in program.statements():
        if stmt.pc <= 0 or stmt.pc in seen:
            return False
        seen.add(stmt.pc)
    return True
