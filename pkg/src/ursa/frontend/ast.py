"""Abstract syntax tree.

Nodes are frozen dataclasses; source positions are excluded from
equality so that re-parsed pretty-printed programs compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

NUM = "num"
BOOL = "bool"


def var_kind(name: str) -> str | None:
    if name.startswith("n"):
        return NUM
    if name.startswith("b"):
        return BOOL
    return None


@dataclass(frozen=True)
class Pos:
    line: int = 0
    col: int = 0


def _pos():
    return field(default=Pos(), compare=False, repr=False)


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    pos: Pos = _pos()

    kind = NUM


@dataclass(frozen=True)
class BoolConst:
    value: bool
    pos: Pos = _pos()

    kind = BOOL


@dataclass(frozen=True)
class Var:
    name: str
    indices: tuple["Expr", ...] = ()
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return var_kind(self.name)


@dataclass(frozen=True)
class Unary:
    op: str  # "-", "~" or "!"
    operand: "Expr"
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return BOOL if self.op == "!" else NUM


REL_OPS = frozenset({"<", ">", "<=", ">=", "==", "!="})
BOOL_OPS = frozenset({"&&", "||", "^^"})
NUM_OPS = frozenset({"+", "-", "*", "&", "|", "^", "<<", ">>"})


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return NUM if self.op in NUM_OPS else BOOL


@dataclass(frozen=True)
class Ite:
    cond: "Expr"
    then: "Expr"
    other: "Expr"
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return self.then.kind


@dataclass(frozen=True)
class Convert:
    func: str  # "sgn", "bool2num" or "num2bool"
    arg: "Expr"
    pos: Pos = _pos()

    @property
    def kind(self) -> str:
        return BOOL if self.func == "num2bool" else NUM


Expr = Union[Num, BoolConst, Var, Unary, Binary, Ite, Convert]


# -- statements --------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    body: tuple["Stmt", ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assign:
    target: Var
    op: str  # "=" or a compound operator such as "+=" or "&&="
    value: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Postfix:
    target: Var
    op: str  # "++" or "--"
    pos: Pos = _pos()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: "Stmt"
    pos: Pos = _pos()


@dataclass(frozen=True)
class For:
    init: "Stmt"
    cond: Expr
    step: "Stmt"
    body: "Stmt"
    pos: Pos = _pos()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Stmt"
    other: "Stmt | None" = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class CallProc:
    name: str
    args: tuple[Expr, ...] = ()
    pos: Pos = _pos()


@dataclass(frozen=True)
class Optimize:
    direction: str  # "minimize" or "maximize"
    target: Var
    lo: int
    hi: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assert:
    conds: tuple[Expr, ...]
    all: bool = False
    pos: Pos = _pos()


@dataclass(frozen=True)
class Print:
    expr: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Command:
    name: str  # "listvars", "clear" or "halt"
    pos: Pos = _pos()


Stmt = Union[Block, Assign, Postfix, While, For, If, CallProc, Optimize, Assert, Print, Command]


@dataclass(frozen=True)
class Procedure:
    name: str
    params: tuple[str, ...]
    body: tuple[Stmt, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Program:
    procedures: tuple[Procedure, ...] = ()
    statements: tuple[Stmt, ...] = ()
