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
Pieces shared by the lazy and the eager transformations.

Generated identifiers all carry :data:`~liseq.lang.ast.RESERVED_PREFIX`, which
the parser rejects in user programs. Statements copied from the input keep
their program counter until the generated program is relabelled, which is how
:attr:`Instrumentation.stmt_map` is obtained.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..lang import ast
from ..lang.normalize import is_normalized

PREFIX = ast.RESERVED_PREFIX
NESTED = 'nested'
SEQUENTIAL = 'sequential'


def gen(name: str) -> str:
    return f'{PREFIX}{name}'


def copy_names(tag: str, index: int, decls) -> list[str]:
    """Names of the ``index``-th generated copy of ``decls``."""
    return [gen(f'{tag}{index}_{decl.name}') for decl in decls]


def copy_decls(tag: str, index: int, decls) -> list[ast.VarDecl]:
    return [
        ast.VarDecl(name, decl.type)
        for name, decl in zip(copy_names(tag, index, decls), decls, strict=True)
    ]


def names(decls) -> list[str]:
    return [decl.name for decl in decls]


def var(name: str) -> ast.Var:
    return ast.Var(name)


def assign(target: str, value: ast.Expr | ast.Value) -> ast.Assign:
    if not isinstance(value, ast.Expr):
        value = ast.Const(value)
    return ast.Assign(target, value)


def assign_vars(targets, sources) -> list[ast.Stmt]:
    return [assign(t, var(s)) for t, s in zip(targets, sources, strict=True)]


def equal_vars(left, right) -> ast.Expr:
    return ast.conjunction(
        ast.Apply('=', (var(a), var(b))) for a, b in zip(left, right, strict=True)
    )


def is_value(name: str, value: int) -> ast.Expr:
    return ast.Apply('=', (var(name), ast.Const(value)))


def increment(name: str) -> ast.Assign:
    return assign(name, ast.Apply('+', (var(name), ast.Const(1))))


def select(index: str, cases: dict[int, list[ast.Stmt]]) -> list[ast.Stmt]:
    """Run ``cases[v]`` where ``v`` is the value of ``index``.

    The last case is the fallback of the ``if`` chain, so ``index`` must hold
    one of the keys.
    """
    keys = sorted(cases)
    if not keys:
        return [ast.Assume(ast.FALSE)]
    block: ast.Block = tuple(cases[keys[-1]])
    for key in reversed(keys[:-1]):
        block = (ast.If(is_value(index, key), tuple(cases[key]), block),)
    return list(block)


def havoc(decl: ast.VarDecl) -> list[ast.Stmt]:
    """Give ``decl`` an arbitrary value of its type."""
    name, type_ = decl.name, decl.type
    if type_.is_bool:
        return [assign(name, ast.Nondet())]
    if type_.lo is not None:
        # lo plus a sum of distinct powers of two, largest first, capped at hi
        body = [assign(name, type_.lo)]
        span = type_.hi - type_.lo
        for bit in reversed(range(span.bit_length())):
            grown = ast.Apply('+', (var(name), ast.Const(1 << bit)))
            fits = ast.Apply('<=', (grown, ast.Const(type_.hi)))
            body.append(ast.If(ast.Apply('&&', (ast.Nondet(), fits)), (assign(name, grown),)))
        return body
    drift = ast.If(
        ast.Nondet(),
        (increment(name),),
        (assign(name, ast.Apply('-', (var(name), ast.Const(1)))),),
    )
    return [assign(name, 0), ast.While(ast.Nondet(), (drift,))]


def reset(decls) -> list[ast.Stmt]:
    return [assign(decl.name, decl.type.default()) for decl in decls]


def interline(block: ast.Block, control, rewrite, atomic_flag: str, *, atomic=False, cond=None):
    """Insert ``control()`` before every statement and at the end of loop bodies.

    ``rewrite`` turns a copied simple statement into the statements replacing
    it, and ``cond``, when given, rewrites the conditions of loops and
    branches. Atomic blocks become ``atomic := T; body; atomic := F`` with no
    control code inside; the first assignment takes the label of the block.
    """
    out: list[ast.Stmt] = []

    def nested(body, in_atomic):
        return interline(body, control, rewrite, atomic_flag, atomic=in_atomic, cond=cond)

    for stmt in block:
        if not atomic:
            out.extend(control())
        if cond is not None and isinstance(stmt, ast.While | ast.If):
            stmt = replace(stmt, cond=cond(stmt.cond))
        match stmt:
            case ast.While(body=body):
                body = nested(body, atomic)
                if not atomic:
                    body += tuple(control())
                out.append(replace(stmt, body=body))
            case ast.If(then=then, orelse=orelse):
                out.append(
                    replace(
                        stmt,
                        then=nested(then, atomic),
                        orelse=None if orelse is None else nested(orelse, atomic),
                    )
                )
            case ast.Atomic(body=body):
                out.append(replace(assign(atomic_flag, True), pc=stmt.pc))
                out.extend(nested(body, True))
                out.append(assign(atomic_flag, False))
            case _:
                out.extend(rewrite(stmt))
    return tuple(out)


def require_normalized(program: ast.ParamProgram, k: int):
    if k < 1:
        raise ValueError(f'the number of rounds must be positive, got {k}')
    if not is_normalized(program):
        raise ValueError('sequentialization needs a normalized program (see liseq.lang.normalize)')


@dataclass(frozen=True)
class Instrumentation:
    """How a generated program relates to its source.

    ``stmt_map`` sends every statement label of the source to the label of its
    copy, and ``aliases`` sends the labels of further copies back to their
    source label. When ``round_var`` is set, the shared state of round ``r``
    lives in ``round_copies[r - 1]`` rather than in ``shared``, which then only
    names the source variables. ``procedures`` lists, per generated procedure
    simulating user code, the variable names forming the user's frame (locals,
    then process globals). Threads are simulated by calls to ``thread_proc``:
    nested within each other (lazy) or one after the other (eager).
    """

    kind: str
    k: int
    thread_proc: str
    nesting: str
    shared: tuple[str, ...]
    globals: tuple[str, ...]
    procedures: dict[str, tuple[str, ...]] = field(default_factory=dict)
    stmt_map: dict[int, int] = field(default_factory=dict)
    aliases: dict[int, int] = field(default_factory=dict)
    round_var: str | None = None
    round_copies: tuple[tuple[str, ...], ...] = ()

    @property
    def tags(self) -> dict[int, int]:
        """Generated label to source label."""
        return {new: old for old, new in self.stmt_map.items()} | self.aliases

    def thread_arguments(self, args: tuple):
        """Split the arguments of a nested thread call into ``(u, v, bound)``."""
        n = len(self.shared)
        u = tuple(tuple(args[i * n : (i + 1) * n]) for i in range(self.k))
        offset = self.k * n
        v = tuple(tuple(args[offset + i * n : offset + (i + 1) * n]) for i in range(self.k - 1))
        return u, v, args[-1]

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'k': self.k,
            'thread_proc': self.thread_proc,
            'nesting': self.nesting,
            'shared': list(self.shared),
            'globals': list(self.globals),
            'procedures': {name: list(frame) for name, frame in self.procedures.items()},
            'stmt_map': {str(old): new for old, new in sorted(self.stmt_map.items())},
            'aliases': {str(new): old for new, old in sorted(self.aliases.items())},
            'round_var': self.round_var,
            'round_copies': [list(copy) for copy in self.round_copies],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Instrumentation:
        return cls(
            kind=data['kind'],
            k=int(data['k']),
            thread_proc=data['thread_proc'],
            nesting=data['nesting'],
            shared=tuple(data['shared']),
            globals=tuple(data['globals']),
            procedures={name: tuple(frame) for name, frame in data['procedures'].items()},
            stmt_map={int(old): int(new) for old, new in data['stmt_map'].items()},
            aliases={int(new): int(old) for new, old in data.get('aliases', {}).items()},
            round_var=data.get('round_var'),
            round_copies=tuple(tuple(copy) for copy in data.get('round_copies', ())),
        )

    def to_filename(self, filename):
        Path(filename).write_text(json.dumps(self.to_dict(), indent=2) + '\n')

    @classmethod
    def from_filename(cls, filename) -> Instrumentation:
        return cls.from_dict(json.loads(Path(filename).read_text()))


@dataclass(frozen=True)
class LazyOutput:
    """A generated sequential program and its instrumentation."""

    program: ast.SeqProgram
    instrumentation: Instrumentation

    @property
    def stmt_map(self) -> dict[int, int]:
        return self.instrumentation.stmt_map


def finish(procedures, globals_, instrumentation: Instrumentation, aliases=None) -> LazyOutput:
    """Relabel the generated program and record where copied statements went.

    ``aliases`` maps the temporary labels of further copies to their source
    label.
    """
    aliases = aliases or {}
    program, mapping = ast.relabel(ast.SeqProgram(tuple(globals_), tuple(procedures)))
    stmt_map = {old: new for old, new in mapping.items() if old not in aliases}
    copies = {mapping[label]: old for label, old in aliases.items() if label in mapping}
    return LazyOutput(program, replace(instrumentation, stmt_map=stmt_map, aliases=copies))
