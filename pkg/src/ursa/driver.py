"""Sessions: run a program, and answer each assert with the SAT solver."""

from __future__ import annotations

import io
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from . import bitvec as bv
from .cnf import CnfInstance, rename, transform
from .errors import UrsaError, UrsaRuntimeError
from .formula import FALSE, TRUE
from .frontend import ast, parse_program
from .interpreter import Directive, Halt, Interpreter, Value, key_str
from .sat import Model, Solver, enumerate_models, write_dimacs

BANNER = (
    "*************************************\n"
    "*********  URSA Interpreter *********\n"
    "*************************************\n"
)


@dataclass
class SessionConfig:
    bit_width: int = 8
    mode: str = "solve"  # "solve" or "export"
    quiet: bool = False
    input: str | None = None  # file path; None means interactive
    dimacs_out: str | None = None
    prefer_independents: bool = False

    def __post_init__(self):
        if not 1 <= self.bit_width <= 64:
            raise ValueError("bit width must be between 1 and 64")
        if self.mode not in ("solve", "export"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "export" and not self.dimacs_out:
            raise ValueError("export mode needs an output path")


@dataclass
class Solution:
    values: list[tuple[tuple, int | bool]]

    def as_dict(self) -> dict[str, int | bool]:
        return {key_str(k): v for k, v in self.values}

    def format(self) -> str:
        lines = []
        for key, v in self.values:
            text = ("true" if v else "false") if isinstance(v, bool) else str(v)
            lines.append(f"{key_str(key)}={text}")
        return "\n".join(lines)


@dataclass
class Report:
    all: bool
    solutions: list[Solution] = field(default_factory=list)
    num_vars: int = 0
    num_clauses: int = 0
    generation_time: float = 0.0
    cnf_time: float = 0.0
    solving_time: float = 0.0
    solver_called: bool = False
    directive: Directive | None = None
    optimum: int | None = None
    dimacs_path: str | None = None
    instance: CnfInstance | None = None

    @property
    def count(self) -> int:
        return len(self.solutions)


def decode_model(model: Model, independent_map, width: int | None = None) -> Solution:
    """Read the values of the independent variables off a model."""
    values: dict[tuple, int] = {}
    order: list[tuple] = []
    for key, _, var in independent_map:
        if key not in values:
            values[key] = 0
            order.append(key)
        values[key] = (values[key] << 1) | int(model.value(var))
    out = []
    for key in order:
        v = values[key]
        out.append((key, bool(v) if ast.var_kind(key[0]) == ast.BOOL else v))
    return Solution(out)


class Session:
    def __init__(self, config: SessionConfig | None = None, out: TextIO | None = None):
        self.config = config or SessionConfig()
        self.out = out if out is not None else sys.stdout
        self.interp = Interpreter(self.config.bit_width, on_assert=self._on_assert, out=self.out)
        self.reports: list[Report] = []
        self._mark = time.perf_counter()
        self._exports = 0

    # -- running ----------------------------------------------------------

    def run_program(self, program: ast.Program) -> None:
        self._mark = time.perf_counter()
        try:
            self.interp.run(program)
        except Halt:
            pass

    def run_source(self, source: str) -> None:
        self.run_program(parse_program(source))

    def write(self, text: str) -> None:
        self.out.write(text)

    # -- assert handling --------------------------------------------------

    def _on_assert(self, interp: Interpreter, conds: list[Value], all_: bool,
                   directive: Directive | None) -> None:
        generation = time.perf_counter() - self._mark
        if directive is not None:
            report = self.run_optimize(directive, conds, all_, generation_time=generation)
        else:
            report = self.run_assert(conds, all_, generation_time=generation)
        self.reports.append(report)
        self.print_report(report)
        self._mark = time.perf_counter()

    def _goal(self, conds: list[Value]) -> int:
        f = self.interp.factory
        root = TRUE
        for c in conds:
            node = self.interp.node(c)
            if node == FALSE:
                return FALSE
            root = f.mk_and(root, node)
        return root

    def _independents(self) -> list[tuple]:
        return [(key, v.formula) for key, v in self.interp.independents]

    def _compile(self, root: int, observe=()) -> tuple[CnfInstance, float]:
        start = time.perf_counter()
        instance = rename(transform(self.interp.factory, root, self._independents(), observe))
        return instance, time.perf_counter() - start

    def _solver(self, instance: CnfInstance) -> Solver:
        prefer = instance.independent_vars() if self.config.prefer_independents else ()
        return Solver(instance.num_vars, instance.clauses, prefer=prefer)

    def _export(self, instance: CnfInstance, report: Report) -> None:
        path = Path(self.config.dimacs_out)
        self._exports += 1
        if self._exports > 1:
            # later asserts of the same run go to numbered siblings
            path = path.with_name(f"{path.stem}.{self._exports}{path.suffix}")
        with open(path, "w") as sink:
            write_dimacs(instance, sink, all_solutions=report.all)
        report.dimacs_path = str(path)

    def run_assert(self, conds: list[Value], all_: bool, *,
                   generation_time: float = 0.0) -> Report:
        report = Report(all_, generation_time=generation_time)
        root = self._goal(conds)
        if root == FALSE and self.config.mode == "solve":
            return report
        instance, report.cnf_time = self._compile(root)
        report.instance = instance
        report.num_vars, report.num_clauses = instance.num_vars, len(instance.clauses)
        if self.config.mode == "export":
            self._export(instance, report)
            return report
        start = time.perf_counter()
        solver = self._solver(instance)
        report.solver_called = True
        imap = instance.independent_map
        if all_:
            enumerate_models(instance, lambda m: report.solutions.append(decode_model(m, imap)),
                             solver=solver)
        elif solver.solve():
            report.solutions.append(decode_model(solver.model(), imap))
        report.solving_time = time.perf_counter() - start
        return report

    def run_optimize(self, directive: Directive, conds: list[Value], all_: bool, *,
                     generation_time: float = 0.0) -> Report:
        """Try candidate values of the directive's variable in order and
        stop at the first one that admits a solution."""
        if directive.lo > directive.hi:
            raise UrsaRuntimeError(f"empty range [{directive.lo}, {directive.hi}]")
        report = Report(all_, generation_time=generation_time, directive=directive)
        target = self.interp.lookup(directive.key)
        if target is None:
            raise UrsaRuntimeError(f"{key_str(directive.key)} is not defined")
        root = self._goal(conds)
        if root == FALSE and self.config.mode == "solve":
            return report
        bits = self.interp.vec(target)
        instance, report.cnf_time = self._compile(root, observe=bits)
        report.instance = instance
        report.num_vars, report.num_clauses = instance.num_vars, len(instance.clauses)
        if self.config.mode == "export":
            self._export(instance, report)
            return report
        width = self.interp.width
        if directive.direction == "minimize":
            candidates = range(directive.lo, directive.hi + 1)
        else:
            candidates = range(directive.hi, directive.lo - 1, -1)
        start = time.perf_counter()
        solver = self._solver(instance)
        report.solver_called = True
        imap = instance.independent_map
        for c in candidates:
            if c >> width:
                continue  # not representable, so no solution
            assumptions = []
            feasible = True
            for i, lit in enumerate(instance.observed):
                want = bool((c >> (width - 1 - i)) & 1)
                if isinstance(lit, bool):
                    feasible = feasible and lit == want
                else:
                    assumptions.append(lit if want else -lit)
            if not feasible or not solver.solve(assumptions):
                continue
            report.optimum = c
            if all_:
                enumerate_models(instance,
                                 lambda m: report.solutions.append(decode_model(m, imap)),
                                 solver=solver, assumptions=assumptions)
            else:
                report.solutions.append(decode_model(solver.model(), imap))
            break
        report.solving_time = time.perf_counter() - start
        return report

    # -- output -----------------------------------------------------------

    def print_report(self, report: Report) -> None:
        w = self.write
        if report.dimacs_path is not None:
            w(f"[DIMACS written to {report.dimacs_path}]\n")
        elif report.directive is not None:
            d = report.directive
            if report.optimum is None:
                w(f"\nNo value of {key_str(d.key)} in [{d.lo}, {d.hi}] gives a solution.\n")
            else:
                kind = "Minimal" if d.direction == "minimize" else "Maximal"
                w(f"\n{kind} value of {key_str(d.key)}: {report.optimum}\n")
        if report.dimacs_path is None:
            if not self.config.quiet:
                for k, sol in enumerate(report.solutions, 1):
                    w(f"\n--> Solution {k}\n{sol.format()}\n")
            if not report.solutions:
                w("\nThere are no solutions.\n")
        total = report.generation_time + report.cnf_time
        w(f"\n[Formula generation: {report.generation_time:.2f}s; "
          f"conversion to CNF: {report.cnf_time:.2f}s; total: {total:.2f}s]\n")
        if report.dimacs_path is None:
            w(f"[Solving time: {report.solving_time:.2f}s]\n")
        w(f"[Formula size: {report.num_vars} variables, {report.num_clauses} clauses]\n")
        if report.dimacs_path is None:
            w(f"[Number of solutions: {report.count}]\n")


def run_session(config: SessionConfig, out: TextIO | None = None,
                err: TextIO | None = None, stdin: TextIO | None = None) -> int:
    """Run a file or an interactive session; returns the exit status."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    session = Session(config, out)
    out.write(BANNER)
    if config.input is not None:
        try:
            source = Path(config.input).read_text()
        except OSError as exc:
            err.write(f"ursa: cannot read {config.input}: {exc.strerror}\n")
            return 2
        try:
            session.run_source(source)
        except UrsaError as exc:
            err.write(f"ursa: {config.input}: {exc}\n")
            return 1
        return 0
    return interactive(session, stdin if stdin is not None else sys.stdin, err)


def interactive(session: Session, stdin: TextIO, err: TextIO) -> int:
    """Read and execute one statement (or procedure definition) at a time."""
    from .frontend import IncompleteInput, Parser, tokenize

    prompt = stdin.isatty() if hasattr(stdin, "isatty") else False
    pending = ""
    status = 0
    started = False  # procedure definitions are accepted before any statement
    while True:
        if prompt:
            session.write("... " if pending.strip() else "> ")
            session.out.flush()
        line = stdin.readline()
        if not line:
            if pending.strip():
                err.write("ursa: unexpected end of input\n")
                status = 1
            return status
        pending += line
        while pending.strip():
            try:
                parser = Parser(tokenize(pending))
                if parser.at("procedure"):
                    if started:
                        raise UrsaError("procedure definitions must precede statements",
                                        parser.tok.line, parser.tok.col)
                    proc = parser.parse_procedure()
                    session.interp.define(proc)
                    item = None
                elif parser.tok.type == "eof":
                    pending = ""
                    break
                else:
                    item = parser.parse_statement()
                    started = True
                consumed = parser.tok
            except IncompleteInput:
                break
            except UrsaError as exc:
                err.write(f"ursa: {exc}\n")
                status = 1
                pending = ""
                break
            pending = _rest(pending, consumed)
            if item is None:
                continue
            session._mark = time.perf_counter()
            try:
                session.interp.execute(item)
            except Halt:
                return status
            except UrsaError as exc:
                err.write(f"ursa: {exc}\n")
                status = 1


def _rest(text: str, tok) -> str:
    """Source text from ``tok`` (the first unconsumed token) onward."""
    if tok.type == "eof":
        return ""
    lines = text.split("\n")
    head = lines[tok.line - 1][tok.col - 1:]
    return "\n".join([head] + lines[tok.line:])


def run_text(source: str, width: int = 8, quiet: bool = True) -> tuple[Session, str]:
    """Convenience: run ``source`` in a fresh session, capturing output."""
    buf = io.StringIO()
    session = Session(SessionConfig(bit_width=width, quiet=quiet), buf)
    session.run_source(source)
    return session, buf.getvalue()
