"""Recursive-descent parser with parse-time kind checking."""

from __future__ import annotations

from . import ast
from .ast import BOOL, NUM, Pos
from .lexer import Token, tokenize
from ..errors import KindError, ParseError

ASSIGN_NUM_OPS = frozenset({"=", "+=", "-=", "*=", "&=", "|=", "^=", "<<=", ">>="})
ASSIGN_BOOL_OPS = frozenset({"=", "&&=", "||=", "^^="})

# loosest first; every level is left-associative
BINARY_LEVELS: tuple[tuple[str, ...], ...] = (
    ("||",),
    ("^^",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*",),
)

_KIND_NAMES = {NUM: "numeric", BOOL: "Boolean"}


class IncompleteInput(ParseError):
    """The token stream ended in the middle of a construct."""


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, text: str) -> bool:
        tok = self.tok
        return tok.type in ("op", "kw") and tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        if tok.type != "eof":
            self.i += 1
        return tok

    def error(self, expected: str) -> ParseError:
        tok = self.tok
        cls = IncompleteInput if tok.type == "eof" else ParseError
        return cls(f"expected {expected}, found {tok}", tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        return self.advance()

    @staticmethod
    def pos(tok: Token) -> Pos:
        return Pos(tok.line, tok.col)

    def require(self, expr: ast.Expr, kind: str, what: str) -> ast.Expr:
        if expr.kind != kind:
            raise KindError(f"{what} must be {_KIND_NAMES[kind]}, got a "
                            f"{_KIND_NAMES[expr.kind]} expression",
                            expr.pos.line, expr.pos.col)
        return expr

    # -- program structure -------------------------------------------------

    def parse_program(self) -> ast.Program:
        procedures = []
        names = set()
        while self.at("procedure"):
            proc = self.parse_procedure()
            if proc.name in names:
                raise ParseError(f"procedure {proc.name!r} defined twice",
                                 proc.pos.line, proc.pos.col)
            names.add(proc.name)
            procedures.append(proc)
        statements = []
        while self.tok.type != "eof":
            if self.at("procedure"):
                raise ParseError("procedure definitions must precede statements",
                                 self.tok.line, self.tok.col)
            statements.append(self.parse_statement())
        return ast.Program(tuple(procedures), tuple(statements))

    def parse_procedure(self) -> ast.Procedure:
        start = self.expect("procedure")
        name_tok = self.advance()
        if name_tok.type != "ident":
            self.i -= 1
            raise self.error("procedure name")
        params: list[str] = []
        self.expect("(")
        if not self.at(")"):
            while True:
                tok = self.advance()
                if tok.type != "ident" or ast.var_kind(tok.text) is None:
                    self.i -= 1
                    raise self.error("parameter name starting with 'n' or 'b'")
                if tok.text in params:
                    raise ParseError(f"duplicate parameter {tok.text!r}", tok.line, tok.col)
                params.append(tok.text)
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        self.expect("{")
        body = self.parse_statements_until("}")
        self.expect("}")
        return ast.Procedure(name_tok.text, tuple(params), body, self.pos(start))

    def parse_statements_until(self, closer: str) -> tuple[ast.Stmt, ...]:
        body = []
        while not self.at(closer):
            if self.tok.type == "eof":
                raise self.error(repr(closer))
            body.append(self.parse_statement())
        return tuple(body)

    # -- statements --------------------------------------------------------

    def parse_statement(self) -> ast.Stmt:
        tok = self.tok
        pos = self.pos(tok)
        if self.at("{"):
            self.advance()
            body = self.parse_statements_until("}")
            self.expect("}")
            return ast.Block(body, pos)
        if tok.type == "ident":
            stmt = self.parse_simple()
            self.expect(";")
            return stmt
        if tok.type != "kw":
            raise self.error("statement")
        word = tok.text
        if word == "while":
            self.advance()
            self.expect("(")
            cond = self.require(self.parse_expr(), BOOL, "loop condition")
            self.expect(")")
            return ast.While(cond, self.parse_statement(), pos)
        if word == "for":
            self.advance()
            self.expect("(")
            init = self.parse_simple()
            self.expect(";")
            cond = self.require(self.parse_expr(), BOOL, "loop condition")
            self.expect(";")
            step = self.parse_simple()
            self.expect(")")
            return ast.For(init, cond, step, self.parse_statement(), pos)
        if word == "if":
            self.advance()
            self.expect("(")
            cond = self.require(self.parse_expr(), BOOL, "condition")
            self.expect(")")
            then = self.parse_statement()
            other = None
            if self.at("else"):
                self.advance()
                other = self.parse_statement()
            return ast.If(cond, then, other, pos)
        if word == "call":
            self.advance()
            name = self.advance()
            if name.type != "ident":
                self.i -= 1
                raise self.error("procedure name")
            self.expect("(")
            args = []
            if not self.at(")"):
                args.append(self.parse_expr())
                while self.at(","):
                    self.advance()
                    args.append(self.parse_expr())
            self.expect(")")
            self.expect(";")
            return ast.CallProc(name.text, tuple(args), pos)
        if word in ("minimize", "maximize"):
            self.advance()
            self.expect("(")
            target = self.parse_var()
            self.require(target, NUM, f"{word} target")
            self.expect(",")
            lo = self.parse_const()
            self.expect(",")
            hi = self.parse_const()
            self.expect(")")
            self.expect(";")
            return ast.Optimize(word, target, lo, hi, pos)
        if word in ("assert", "assert_all"):
            self.advance()
            self.expect("(")
            conds = [self.require(self.parse_expr(), BOOL, "assertion")]
            while self.at(";"):
                self.advance()
                conds.append(self.require(self.parse_expr(), BOOL, "assertion"))
            self.expect(")")
            self.expect(";")
            return ast.Assert(tuple(conds), word == "assert_all", pos)
        if word == "print":
            self.advance()
            expr = self.parse_expr()
            self.expect(";")
            return ast.Print(expr, pos)
        if word in ("listvars", "clear", "halt"):
            self.advance()
            self.expect(";")
            return ast.Command(word, pos)
        raise self.error("statement")

    def parse_simple(self) -> ast.Stmt:
        """Assignment or postfix increment, without the trailing ';'."""
        pos = self.pos(self.tok)
        target = self.parse_var()
        op_tok = self.tok
        op = op_tok.text if op_tok.type == "op" else ""
        if target.kind == NUM:
            if op in ("++", "--"):
                self.advance()
                return ast.Postfix(target, op, pos)
            if op in ASSIGN_NUM_OPS:
                self.advance()
                value = self.require(self.parse_expr(), NUM, f"right-hand side of {target.name}")
                return ast.Assign(target, op, value, pos)
            if op in ASSIGN_BOOL_OPS or op in ("++", "--"):
                raise KindError(f"operator {op!r} not allowed on numeric variable",
                                op_tok.line, op_tok.col)
        else:
            if op in ASSIGN_BOOL_OPS:
                self.advance()
                value = self.require(self.parse_expr(), BOOL, f"right-hand side of {target.name}")
                return ast.Assign(target, op, value, pos)
            if op in ASSIGN_NUM_OPS or op in ("++", "--"):
                raise KindError(f"operator {op!r} not allowed on Boolean variable",
                                op_tok.line, op_tok.col)
        raise self.error("assignment operator")

    def parse_var(self) -> ast.Var:
        tok = self.tok
        if tok.type != "ident":
            raise self.error("variable")
        if ast.var_kind(tok.text) is None:
            raise ParseError(f"variable names start with 'n' or 'b': {tok.text!r}",
                             tok.line, tok.col)
        self.advance()
        indices = []
        while self.at("[") and len(indices) < 2:
            self.advance()
            indices.append(self.require(self.parse_expr(), NUM, "array index"))
            self.expect("]")
        return ast.Var(tok.text, tuple(indices), self.pos(tok))

    def parse_const(self) -> int:
        tok = self.tok
        if tok.type != "num":
            raise self.error("numeric constant")
        self.advance()
        return int(tok.text)

    # -- expressions -------------------------------------------------------

    def parse_expr(self, level: int = 0) -> ast.Expr:
        if level == len(BINARY_LEVELS):
            return self.parse_unary()
        ops = BINARY_LEVELS[level]
        left = self.parse_expr(level + 1)
        while self.tok.type == "op" and self.tok.text in ops:
            op_tok = self.advance()
            right = self.parse_expr(level + 1)
            operand_kind = BOOL if op_tok.text in ast.BOOL_OPS else NUM
            self.require(left, operand_kind, f"left operand of {op_tok.text!r}")
            self.require(right, operand_kind, f"right operand of {op_tok.text!r}")
            left = ast.Binary(op_tok.text, left, right, self.pos(op_tok))
        return left

    def parse_unary(self) -> ast.Expr:
        tok = self.tok
        if tok.type == "op" and tok.text in ("-", "~", "!"):
            self.advance()
            operand = self.parse_unary()
            self.require(operand, BOOL if tok.text == "!" else NUM,
                         f"operand of {tok.text!r}")
            return ast.Unary(tok.text, operand, self.pos(tok))
        return self.parse_primary()

    def parse_primary(self) -> ast.Expr:
        tok = self.tok
        pos = self.pos(tok)
        if tok.type == "num":
            self.advance()
            return ast.Num(int(tok.text), pos)
        if tok.type == "ident":
            return self.parse_var()
        if self.at("("):
            self.advance()
            expr = self.parse_expr()
            self.expect(")")
            return expr
        if self.at("true") or self.at("false"):
            self.advance()
            return ast.BoolConst(tok.text == "true", pos)
        if self.at("ite"):
            self.advance()
            self.expect("(")
            cond = self.require(self.parse_expr(), BOOL, "ite condition")
            self.expect(",")
            then = self.parse_expr()
            self.expect(",")
            other = self.require(self.parse_expr(), then.kind, "ite branches")
            self.expect(")")
            return ast.Ite(cond, then, other, pos)
        if tok.type == "kw" and tok.text in ("sgn", "bool2num", "num2bool"):
            self.advance()
            self.expect("(")
            arg = self.require(self.parse_expr(), BOOL if tok.text == "bool2num" else NUM,
                               f"argument of {tok.text}")
            self.expect(")")
            return ast.Convert(tok.text, arg, pos)
        raise self.error("expression")


def parse_program(source: str | list[Token]) -> ast.Program:
    tokens = tokenize(source) if isinstance(source, str) else source
    return Parser(tokens).parse_program()


def parse_expression(source: str) -> ast.Expr:
    parser = Parser(tokenize(source))
    expr = parser.parse_expr()
    if parser.tok.type != "eof":
        raise parser.error("end of input")
    return expr
