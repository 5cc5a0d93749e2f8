"""DIMACS CNF reading and writing.

Written files carry the independent-variable map as comment lines of the
form ``c ursa independent <key> <bit> <var>`` so that a model found by an
external solver can be decoded into program variables.
"""

from __future__ import annotations

import io
from typing import TextIO

from ..cnf import CnfInstance
from ..interpreter import key_str

ENUMERATE_COMMENT = "c ursa mode all-solutions (block on independent variables)"


def write_dimacs(instance: CnfInstance, sink: TextIO, *, all_solutions: bool = False) -> None:
    for key, bit, var in instance.independent_map:
        sink.write(f"c ursa independent {key_str(key)} {bit} {var}\n")
    if all_solutions:
        sink.write(ENUMERATE_COMMENT + "\n")
    sink.write(f"p cnf {instance.num_vars} {len(instance.clauses)}\n")
    for clause in instance.clauses:
        sink.write(" ".join(map(str, clause)) + " 0\n")


def export_dimacs(instance: CnfInstance, sink: TextIO | None = None, *,
                  all_solutions: bool = False) -> str:
    """Write ``instance`` to ``sink`` (if given) and return the text."""
    buf = io.StringIO()
    write_dimacs(instance, buf, all_solutions=all_solutions)
    text = buf.getvalue()
    if sink is not None:
        sink.write(text)
    return text


def read_dimacs(text: str) -> tuple[int, list[list[int]], list[tuple[str, int, int]]]:
    """Parse DIMACS text; returns (num_vars, clauses, independent comments)."""
    num_vars = None
    num_clauses = None
    clauses: list[list[int]] = []
    independents = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 6 and parts[1:3] == ["ursa", "independent"]:
                independents.append((parts[3], int(parts[4]), int(parts[5])))
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {raw!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError("clause before the problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise ValueError(f"literal {lit} exceeds {num_vars} variables")
                current.append(lit)
    if current:
        clauses.append(current)
    if num_vars is None:
        raise ValueError("missing problem line")
    if num_clauses != len(clauses):
        raise ValueError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return num_vars, clauses, independents
