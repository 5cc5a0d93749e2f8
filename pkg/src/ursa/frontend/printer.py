"""Source regeneration from the AST.

Binary operations are always parenthesized, so the output re-parses to
the same tree regardless of precedence rules.
"""

from __future__ import annotations

from . import ast


def format_expr(e: ast.Expr) -> str:
    if isinstance(e, ast.Num):
        return str(e.value)
    if isinstance(e, ast.BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, ast.Var):
        return e.name + "".join(f"[{format_expr(i)}]" for i in e.indices)
    if isinstance(e, ast.Unary):
        return f"{e.op}{format_expr(e.operand)}" if not isinstance(e.operand, ast.Unary) \
            else f"{e.op}({format_expr(e.operand)})"
    if isinstance(e, ast.Binary):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    if isinstance(e, ast.Ite):
        return f"ite({format_expr(e.cond)}, {format_expr(e.then)}, {format_expr(e.other)})"
    if isinstance(e, ast.Convert):
        return f"{e.func}({format_expr(e.arg)})"
    raise TypeError(e)


def _simple(s: ast.Stmt) -> str:
    if isinstance(s, ast.Assign):
        return f"{format_expr(s.target)} {s.op} {format_expr(s.value)}"
    if isinstance(s, ast.Postfix):
        return f"{format_expr(s.target)}{s.op}"
    raise TypeError(s)


def format_stmt(s: ast.Stmt, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(s, (ast.Assign, ast.Postfix)):
        return [pad + _simple(s) + ";"]
    if isinstance(s, ast.Block):
        lines = [pad + "{"]
        for inner in s.body:
            lines += format_stmt(inner, indent + 1)
        return lines + [pad + "}"]
    if isinstance(s, ast.While):
        return [pad + f"while ({format_expr(s.cond)})"] + format_stmt(s.body, indent + 1)
    if isinstance(s, ast.For):
        head = f"for ({_simple(s.init)}; {format_expr(s.cond)}; {_simple(s.step)})"
        return [pad + head] + format_stmt(s.body, indent + 1)
    if isinstance(s, ast.If):
        # a parsed 'then' branch can only be an else-less if when braced,
        # so printing it verbatim re-binds every 'else' the same way
        lines = [pad + f"if ({format_expr(s.cond)})"] + format_stmt(s.then, indent + 1)
        if s.other is not None:
            lines += [pad + "else"] + format_stmt(s.other, indent + 1)
        return lines
    if isinstance(s, ast.CallProc):
        return [pad + f"call {s.name}({', '.join(format_expr(a) for a in s.args)});"]
    if isinstance(s, ast.Optimize):
        return [pad + f"{s.direction}({format_expr(s.target)}, {s.lo}, {s.hi});"]
    if isinstance(s, ast.Assert):
        word = "assert_all" if s.all else "assert"
        return [pad + f"{word}({'; '.join(format_expr(c) for c in s.conds)});"]
    if isinstance(s, ast.Print):
        return [pad + f"print {format_expr(s.expr)};"]
    if isinstance(s, ast.Command):
        return [pad + f"{s.name};"]
    raise TypeError(s)


def format_program(p: ast.Program) -> str:
    lines: list[str] = []
    for proc in p.procedures:
        lines.append(f"procedure {proc.name}({', '.join(proc.params)}) {{")
        for s in proc.body:
            lines += format_stmt(s, 1)
        lines.append("}")
    for s in p.statements:
        lines += format_stmt(s)
    return "\n".join(lines) + "\n"
