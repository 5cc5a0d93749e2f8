"""Symbolic execution of URSA programs.

Variables hold either ground values or formulae.  Reading a variable that
was never assigned binds it to fresh propositional variables and marks it
independent: these are the unknowns the solver determines.  Ground
integers follow the same modulo ``2**width`` arithmetic as symbolic ones,
so a program run on ground inputs computes exactly what its symbolic run
encodes.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Callable, TextIO

from . import bitvec as bv
from .errors import UrsaRuntimeError
from .formula import FALSE, TRUE, FormulaFactory
from .frontend import ast
from .frontend.ast import BOOL, NUM

log = logging.getLogger(__name__)

Key = tuple  # (name, *ground indices)


class Status(Enum):
    GROUND = "ground"
    INDEPENDENT = "independent"
    DEPENDENT = "dependent"


@dataclass(slots=True)
class Value:
    kind: str
    ground: int | bool | None = None
    formula: tuple[int, ...] | int | None = None  # vector for NUM, node for BOOL
    status: Status = Status.GROUND

    @property
    def is_ground(self) -> bool:
        return self.ground is not None


@dataclass(frozen=True)
class Directive:
    direction: str  # "minimize" or "maximize"
    key: Key
    lo: int
    hi: int


class Halt(Exception):
    """Raised by the ``halt`` statement."""


def key_str(key: Key) -> str:
    return key[0] + "".join(f"[{i}]" for i in key[1:])


def ground_num(value: int) -> Value:
    return Value(NUM, value)


def ground_bool(value: bool) -> Value:
    return Value(BOOL, bool(value))


AssertHandler = Callable[["Interpreter", list, bool, "Directive | None"], None]


class Interpreter:
    def __init__(self, width: int = 8, *, on_assert: AssertHandler | None = None,
                 out: TextIO | None = None):
        if not 1 <= width <= 64:
            raise ValueError("bit width must be between 1 and 64")
        self.width = width
        self.mask = (1 << width) - 1
        self.on_assert = on_assert
        self.out = out if out is not None else sys.stdout
        self.procedures: dict[str, ast.Procedure] = {}
        self.assert_log: list[tuple[list[Value], bool, Directive | None]] = []
        self.factory = FormulaFactory()
        self._warned: set[tuple] = set()
        self.clear()

    def clear(self) -> None:
        self.factory.clear()
        self.store: dict[Key, Value] = {}
        self.order: list[Key] = []
        # fresh values of independent variables, kept even after reassignment
        self.independents: list[tuple[Key, Value]] = []
        self.frames: list[tuple[str, dict]] = []
        self.directive: Directive | None = None

    # -- program level ----------------------------------------------------

    def run(self, program: ast.Program) -> None:
        for proc in program.procedures:
            self.define(proc)
        for stmt in program.statements:
            self.execute(stmt)

    def define(self, proc: ast.Procedure) -> None:
        self.procedures[proc.name] = proc

    # -- store ------------------------------------------------------------

    def _fresh(self, kind: str) -> Value:
        f = self.factory
        if kind == NUM:
            return Value(NUM, None, bv.fresh(f, self.width), Status.INDEPENDENT)
        return Value(BOOL, None, f.fresh_var(), Status.INDEPENDENT)

    def _indices(self, var: ast.Var) -> tuple[int, ...]:
        out = []
        for expr in var.indices:
            v = self.evaluate(expr)
            if not v.is_ground:
                raise UrsaRuntimeError(f"index of {var.name} has to be a ground number",
                                       expr.pos.line, expr.pos.col)
            out.append(v.ground)
        return tuple(out)

    def _slot(self, name: str, indices: tuple[int, ...]) -> tuple[dict, Key]:
        if self.frames:
            binding = self.frames[-1][1].get(name)
            if binding is not None:
                container, target, prefix = binding
                return container, (target, *prefix, *indices)
        return self.store, (name, *indices)

    def read(self, container: dict, key: Key) -> Value:
        value = container.get(key)
        if value is None:
            value = self._fresh(ast.var_kind(key[0]))
            container[key] = value
            if container is self.store:
                self.order.append(key)
            self.independents.append((key, value))
        return value

    def write(self, container: dict, key: Key, value: Value) -> None:
        if value.is_ground:
            stored = Value(value.kind, value.ground, None, Status.GROUND)
        else:
            stored = Value(value.kind, None, value.formula, Status.DEPENDENT)
        if container is self.store and key not in container:
            self.order.append(key)
        container[key] = stored

    def read_variable(self, name: str, *indices: int) -> Value:
        container, key = self._slot(name, tuple(indices))
        return self.read(container, key)

    def lookup(self, key: Key) -> Value | None:
        return self.store.get(key)

    # -- lifting ----------------------------------------------------------

    def _truncate(self, value: int, where=None) -> int:
        if value > self.mask:
            tag = (where, value)
            if tag not in self._warned:
                self._warned.add(tag)
                log.warning("constant %d does not fit in %d bits; using %d",
                            value, self.width, value & self.mask)
            value &= self.mask
        return value

    def vec(self, v: Value) -> tuple[int, ...]:
        if v.is_ground:
            return bv.from_const(v.ground, self.width)
        return v.formula

    def node(self, v: Value) -> int:
        if v.is_ground:
            return TRUE if v.ground else FALSE
        return v.formula

    def num_result(self, bits: tuple[int, ...]) -> Value:
        ground = bv.to_ground(bits)
        if ground is not None:
            return ground_num(ground)
        return Value(NUM, None, bits, Status.DEPENDENT)

    def bool_result(self, node: int) -> Value:
        if node == TRUE:
            return ground_bool(True)
        if node == FALSE:
            return ground_bool(False)
        return Value(BOOL, None, node, Status.DEPENDENT)

    # -- expressions ------------------------------------------------------

    def evaluate(self, e: ast.Expr) -> Value:
        if isinstance(e, ast.Num):
            return ground_num(self._truncate(e.value, e.pos))
        if isinstance(e, ast.BoolConst):
            return ground_bool(e.value)
        if isinstance(e, ast.Var):
            container, key = self._slot(e.name, self._indices(e))
            return self.read(container, key)
        if isinstance(e, ast.Binary):
            return self.binary(e.op, self.evaluate(e.left), self.evaluate(e.right))
        if isinstance(e, ast.Unary):
            return self.unary(e.op, self.evaluate(e.operand))
        if isinstance(e, ast.Ite):
            return self.ite(self.evaluate(e.cond), self.evaluate(e.then), self.evaluate(e.other))
        if isinstance(e, ast.Convert):
            return self.convert(e.func, self.evaluate(e.arg))
        raise TypeError(e)

    def unary(self, op: str, v: Value) -> Value:
        f = self.factory
        if op == "!":
            if v.is_ground:
                return ground_bool(not v.ground)
            return self.bool_result(f.mk_not(v.formula))
        if v.is_ground:
            if op == "-":
                return ground_num(-v.ground & self.mask)
            return ground_num(~v.ground & self.mask)
        if op == "-":
            return self.num_result(bv.neg(f, v.formula))
        return self.num_result(bv.bit_not(f, v.formula))

    def binary(self, op: str, a: Value, b: Value) -> Value:
        if op in ast.BOOL_OPS:
            return self._logic(op, a, b)
        if op in ast.REL_OPS:
            return self._relation(op, a, b)
        return self._arith(op, a, b)

    def _arith(self, op: str, a: Value, b: Value) -> Value:
        mask, n = self.mask, self.width
        if a.is_ground and b.is_ground:
            x, y = a.ground, b.ground
            if op == "+":
                r = x + y
            elif op == "-":
                r = x - y
            elif op == "*":
                r = x * y
            elif op == "&":
                r = x & y
            elif op == "|":
                r = x | y
            elif op == "^":
                r = x ^ y
            elif op == "<<":
                r = x << y if y < n else 0
            else:
                r = x >> y if y < n else 0
            return ground_num(r & mask)
        f = self.factory
        if op in ("<<", ">>"):
            amount = b.ground if b.is_ground else b.formula
            return self.num_result(bv.shift(f, self.vec(a), amount, op == "<<"))
        x, y = self.vec(a), self.vec(b)
        if op == "+":
            bits = bv.add(f, x, y)
        elif op == "-":
            bits = bv.sub(f, x, y)
        elif op == "*":
            bits = bv.mul(f, x, y)
        elif op == "&":
            bits = bv.bit_and(f, x, y)
        elif op == "|":
            bits = bv.bit_or(f, x, y)
        else:
            bits = bv.bit_xor(f, x, y)
        return self.num_result(bits)

    def _relation(self, op: str, a: Value, b: Value) -> Value:
        if a.is_ground and b.is_ground:
            x, y = a.ground, b.ground
            return ground_bool({"<": x < y, ">": x > y, "<=": x <= y, ">=": x >= y,
                                "==": x == y, "!=": x != y}[op])
        return self.bool_result(bv.compare(self.factory, op, self.vec(a), self.vec(b)))

    def _logic(self, op: str, a: Value, b: Value) -> Value:
        if a.is_ground and b.is_ground:
            x, y = a.ground, b.ground
            if op == "&&":
                return ground_bool(x and y)
            if op == "||":
                return ground_bool(x or y)
            return ground_bool(x != y)
        f = self.factory
        x, y = self.node(a), self.node(b)
        if op == "&&":
            return self.bool_result(f.mk_and(x, y))
        if op == "||":
            return self.bool_result(f.mk_or(x, y))
        return self.bool_result(f.mk_xor(x, y))

    def ite(self, cond: Value, a: Value, b: Value) -> Value:
        if cond.is_ground:
            picked = a if cond.ground else b
            return Value(picked.kind, picked.ground, picked.formula,
                         Status.GROUND if picked.is_ground else Status.DEPENDENT)
        f = self.factory
        if a.kind == NUM:
            return self.num_result(bv.mux(f, cond.formula, self.vec(a), self.vec(b)))
        return self.bool_result(bv.mux(f, cond.formula, (self.node(a),), (self.node(b),))[0])

    def convert(self, func: str, v: Value) -> Value:
        f = self.factory
        if func == "bool2num":
            if v.is_ground:
                return ground_num(int(v.ground))
            return self.num_result(bv.bool2num(v.formula, self.width))
        if v.is_ground:
            nonzero = v.ground != 0
            return ground_num(int(nonzero)) if func == "sgn" else ground_bool(nonzero)
        if func == "sgn":
            return self.num_result(bv.sgn(f, v.formula))
        return self.bool_result(bv.num2bool(f, v.formula))

    # -- statements -------------------------------------------------------

    def execute(self, stmt: ast.Stmt) -> None:
        try:
            self._execute(stmt)
        except UrsaRuntimeError as exc:
            if exc.line is None:
                exc.line, exc.col = stmt.pos.line, stmt.pos.col
            raise

    def _ground_cond(self, expr: ast.Expr, construct: str) -> bool:
        v = self.evaluate(expr)
        if not v.is_ground:
            raise UrsaRuntimeError(f"condition of '{construct}' has to be ground",
                                   expr.pos.line, expr.pos.col)
        return v.ground

    def _execute(self, s: ast.Stmt) -> None:
        if isinstance(s, ast.Assign):
            container, key = self._slot(s.target.name, self._indices(s.target))
            value = self.evaluate(s.value)
            if s.op != "=":
                value = self.binary(s.op[:-1], self.read(container, key), value)
            self.write(container, key, value)
        elif isinstance(s, ast.Postfix):
            container, key = self._slot(s.target.name, self._indices(s.target))
            value = self.binary("+" if s.op == "++" else "-", self.read(container, key),
                                ground_num(1))
            self.write(container, key, value)
        elif isinstance(s, ast.Block):
            for inner in s.body:
                self.execute(inner)
        elif isinstance(s, ast.For):
            self.execute(s.init)
            while self._ground_cond(s.cond, "for"):
                self.execute(s.body)
                self.execute(s.step)
        elif isinstance(s, ast.While):
            while self._ground_cond(s.cond, "while"):
                self.execute(s.body)
        elif isinstance(s, ast.If):
            if self._ground_cond(s.cond, "if"):
                self.execute(s.then)
            elif s.other is not None:
                self.execute(s.other)
        elif isinstance(s, ast.CallProc):
            self.call(s.name, s.args)
        elif isinstance(s, ast.Assert):
            conds = [self.evaluate(c) for c in s.conds]
            if self.on_assert is None:
                self.assert_log.append((conds, s.all, self.directive))
            else:
                self.on_assert(self, conds, s.all, self.directive)
        elif isinstance(s, ast.Optimize):
            if s.lo > s.hi:
                raise UrsaRuntimeError(f"empty range [{s.lo}, {s.hi}] in {s.direction}")
            container, key = self._slot(s.target.name, self._indices(s.target))
            self.read(container, key)
            self.directive = Directive(s.direction, key, s.lo, s.hi)
        elif isinstance(s, ast.Print):
            self.out.write(self.describe(self.evaluate(s.expr)) + "\n")
        elif isinstance(s, ast.Command):
            if s.name == "halt":
                raise Halt()
            if s.name == "clear":
                self.clear()
            else:
                self.listvars()
        else:
            raise TypeError(s)

    def call(self, name: str, args: tuple[ast.Expr, ...]) -> None:
        proc = self.procedures.get(name)
        if proc is None:
            raise UrsaRuntimeError(f"undefined procedure {name!r}")
        if len(args) != len(proc.params):
            raise UrsaRuntimeError(f"procedure {name!r} takes {len(proc.params)} "
                                   f"argument(s), {len(args)} given")
        if any(frame[0] == name for frame in self.frames):
            raise UrsaRuntimeError(f"recursive call of {name!r} is not supported")
        bindings: dict[str, tuple] = {}
        for param, arg in zip(proc.params, args):
            if arg.kind != ast.var_kind(param):
                raise UrsaRuntimeError(f"argument for {param!r} of {name!r} has the wrong kind")
            if isinstance(arg, ast.Var):
                # by name: alias the caller's variable or array element
                container, key = self._slot(arg.name, self._indices(arg))
                bindings[param] = (container, key[0], key[1:])
            else:
                local: dict = {}
                self.write(local, (param,), self.evaluate(arg))
                bindings[param] = (local, param, ())
        self.frames.append((name, bindings))
        try:
            for stmt in proc.body:
                self.execute(stmt)
        finally:
            self.frames.pop()

    # -- reporting --------------------------------------------------------

    def describe(self, v: Value) -> str:
        if v.is_ground:
            if v.kind == BOOL:
                return "true" if v.ground else "false"
            return str(v.ground)
        width = self.width if v.kind == NUM else 1
        return f"symbolic ({v.status.value}), {width} bit{'s' if width > 1 else ''}"

    def listvars(self) -> None:
        for key in self.order:
            v = self.store[key]
            if v.is_ground:
                self.out.write(f"{key_str(key)} = {self.describe(v)}\n")
            else:
                self.out.write(f"{key_str(key)}: {self.describe(v)}\n")
