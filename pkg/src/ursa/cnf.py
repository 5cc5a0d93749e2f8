"""Conversion of a formula DAG into an equisatisfiable clause set.

Every retained connective gets a definitional variable.  Chains of the
same associative connective (AND or OR) are collapsed into one n-ary
definition as long as the inner nodes are not shared.  At the top level
the goal is split into its conjuncts, and conjuncts that already have the
shape of a clause are emitted as they are.

Variables are numbered from 1: first the bits of the independent
variables (in store introduction order, most significant bit first), then
everything else in order of first use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import FALSE, TRUE, FormulaFactory, Kind


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: list[list[int]]
    # (store key, bit position with 0 the most significant bit, CNF variable)
    independent_map: list[tuple[tuple, int, int]] = field(default_factory=list)
    # literal standing for the goal, or 0 when the goal was split into clauses
    root_literal: int = 0
    # per observed node: a literal, or True/False for constant nodes
    observed: tuple = ()

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def independent_vars(self) -> list[int]:
        return [var for _, _, var in self.independent_map]


def _bits(value) -> tuple[int, ...]:
    return tuple(value) if isinstance(value, (tuple, list)) else (value,)


class _Encoder:
    def __init__(self, f: FormulaFactory, roots: Sequence[int]):
        self.f = f
        self.var_of: dict[int, int] = {}  # node id -> CNF variable
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.refs = self._count_refs(roots)

    def _count_refs(self, roots: Sequence[int]) -> dict[int, int]:
        f = self.f
        refs: dict[int, int] = {}
        for node in f.reachable(roots):
            for child in f.children(node):
                refs[child] = refs.get(child, 0) + 1
        return refs

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def bind(self, node: int) -> int:
        var = self.var_of.get(node)
        if var is None:
            var = self.var_of[node] = self.new_var()
        return var

    def emit(self, lits: Iterable[int]) -> None:
        seen: set[int] = set()
        clause = []
        for lit in lits:
            if -lit in seen:
                return
            if lit not in seen:
                seen.add(lit)
                clause.append(lit)
        self.clauses.append(clause)

    def spine(self, node: int) -> list[int]:
        """Leaves of the maximal unshared same-kind tree rooted at ``node``."""
        f = self.f
        kind = f.kind[node]
        leaves = []
        stack = [f.rhs[node], f.lhs[node]]
        while stack:
            child = stack.pop()
            if f.kind[child] == kind and self.refs.get(child, 0) == 1:
                stack.append(f.rhs[child])
                stack.append(f.lhs[child])
            else:
                leaves.append(child)
        return leaves

    def lit(self, node: int) -> int:
        """Literal of an already defined (or variable) node."""
        f = self.f
        sign = 1
        while f.kind[node] == Kind.NOT:
            node = f.lhs[node]
            sign = -sign
        return sign * self.bind(node)

    def define(self, nodes: Iterable[int]) -> None:
        """Give every node in ``nodes`` (and what they depend on) a literal."""
        f = self.f
        kind = f.kind
        needed: set[int] = set()
        leaves_of: dict[int, list[int]] = {}
        stack = list(nodes)
        while stack:
            node = stack.pop()
            while kind[node] == Kind.NOT:
                node = f.lhs[node]
            if node in needed or node in self.var_of or kind[node] == Kind.VAR:
                continue
            needed.add(node)
            if kind[node] in (Kind.AND, Kind.OR):
                leaves = self.spine(node)
            else:
                leaves = [f.lhs[node], f.rhs[node]]
            leaves_of[node] = leaves
            stack.extend(leaves)
        # children always have smaller ids, so increasing id order is bottom-up
        for node in sorted(needed):
            args = [self.lit(c) for c in leaves_of[node]]
            p = self.bind(node)
            k = kind[node]
            if k == Kind.AND:
                self.emit([p] + [-a for a in args])
                for a in args:
                    self.emit([-p, a])
            elif k == Kind.OR:
                self.emit([-p] + args)
                for a in args:
                    self.emit([p, -a])
            else:
                a, b = args
                if k == Kind.EQUIV:
                    b = -b
                # p <-> a xor b
                self.emit([-p, a, b])
                self.emit([-p, -a, -b])
                self.emit([p, -a, b])
                self.emit([p, a, -b])

    def conjuncts(self, root: int) -> list[tuple[int, bool]]:
        """Split the goal into (node, polarity) pairs that must all hold."""
        f = self.f
        out: list[tuple[int, bool]] = []
        seen: set[tuple[int, bool]] = set()
        stack = [(root, True)]
        while stack:
            node, pos = stack.pop()
            if (node, pos) in seen:
                continue
            seen.add((node, pos))
            k = f.kind[node]
            if k == Kind.NOT:
                stack.append((f.lhs[node], not pos))
            elif (k == Kind.AND and pos) or (k == Kind.OR and not pos):
                stack.append((f.rhs[node], pos))
                stack.append((f.lhs[node], pos))
            else:
                out.append((node, pos))
        return out

    def clause_leaves(self, node: int, pos: bool) -> list[tuple[int, bool]]:
        """Disjuncts of a conjunct that is an OR (or a negated AND)."""
        f = self.f
        kind = f.kind[node]
        leaves = []
        stack = [(node, pos)]
        while stack:
            n, p = stack.pop()
            k = f.kind[n]
            if k == Kind.NOT:
                stack.append((f.lhs[n], not p))
            elif k == kind and p == pos:
                stack.append((f.rhs[n], p))
                stack.append((f.lhs[n], p))
            else:
                leaves.append((n, p))
        return leaves

    def assert_goal(self, root: int) -> None:
        f = self.f
        for node, pos in self.conjuncts(root):
            k = f.kind[node]
            if (k == Kind.OR and pos) or (k == Kind.AND and not pos):
                leaves = self.clause_leaves(node, pos)
                self.define(n for n, _ in leaves)
                self.emit([self.lit(n) if p else -self.lit(n) for n, p in leaves])
            else:
                self.define([node])
                self.emit([self.lit(node) if pos else -self.lit(node)])


def transform(f: FormulaFactory, root: int, independents: Iterable[tuple] = (),
              observe: Sequence[int] = ()) -> CnfInstance:
    """Clause set that is satisfiable exactly when ``root`` is.

    ``independents`` lists ``(key, bits)`` pairs, where ``bits`` is a node
    id or a vector of node ids of fresh variables.  Each of those variables
    keeps a CNF variable even if it does not occur in any clause.
    ``observe`` lists further nodes whose value should be readable (and
    constrainable by assumptions) without being asserted.
    """
    enc = _Encoder(f, [root, *observe])
    imap = []
    for key, value in independents:
        for pos, node in enumerate(_bits(value)):
            if f.kind[node] != Kind.VAR:
                raise ValueError(f"independent bit {key}[{pos}] is not a variable")
            imap.append((key, pos, enc.bind(node)))

    root_literal = 0
    if root == FALSE:
        x = enc.new_var()
        enc.clauses += [[x], [-x]]
        root_literal = x
    elif root != TRUE:
        enc.assert_goal(root)

    observed = []
    enc.define(n for n in observe if n not in (TRUE, FALSE))
    for n in observe:
        observed.append(True if n == TRUE else False if n == FALSE else enc.lit(n))
    return CnfInstance(enc.num_vars, enc.clauses, imap, root_literal, tuple(observed))


def rename(instance: CnfInstance) -> CnfInstance:
    """Renumber used and independent variables contiguously from 1.

    Independent variables come first in map order, then the remaining
    variables in order of first occurrence in the clause list.
    """
    mapping: dict[int, int] = {}

    def new(var: int) -> int:
        v = mapping.get(var)
        if v is None:
            v = mapping[var] = len(mapping) + 1
        return v

    for _, _, var in instance.independent_map:
        new(var)
    clauses = [[new(abs(l)) if l > 0 else -new(abs(l)) for l in c] for c in instance.clauses]

    def relit(l):
        if isinstance(l, bool) or l == 0:
            return l
        return new(abs(l)) if l > 0 else -new(abs(l))

    observed = tuple(relit(l) for l in instance.observed)
    imap = [(key, pos, mapping[var]) for key, pos, var in instance.independent_map]
    return CnfInstance(len(mapping), clauses, imap, relit(instance.root_literal), observed)
