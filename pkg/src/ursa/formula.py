"""Hash-consed propositional formulae.

Every formula built during a session lives in one :class:`FormulaFactory`
as a node of a DAG.  Nodes are referred to by integer ids; the factory
guarantees that structurally identical nodes share an id, and that a
node's children always have smaller ids than the node itself.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Mapping


class Kind(IntEnum):
    FALSE = 0
    TRUE = 1
    VAR = 2
    NOT = 3
    AND = 4
    OR = 5
    XOR = 6
    EQUIV = 7


FALSE = 0
TRUE = 1

_SYMBOLS = {Kind.AND: "&", Kind.OR: "|", Kind.XOR: "^", Kind.EQUIV: "<=>"}


class UnassignedVariableError(KeyError):
    """Raised when evaluation reaches a variable with no truth value."""

    def __init__(self, var_index: int):
        super().__init__(var_index)
        self.var_index = var_index

    def __str__(self) -> str:
        return f"propositional variable {self.var_index} has no value"


class FormulaFactory:
    """Append-only node table with structural sharing.

    Node ``0`` is FALSE and node ``1`` is TRUE.  Binary connectives are
    stored with exactly two children; n-ary flattening is left to the CNF
    stage.
    """

    def __init__(self) -> None:
        self.clear()

    def clear(self) -> None:
        # per node: kind, first child (or var index), second child (or -1)
        self.kind: list[int] = [Kind.FALSE, Kind.TRUE]
        self.lhs: list[int] = [-1, -1]
        self.rhs: list[int] = [-1, -1]
        self._cons: dict[tuple[int, int, int], int] = {}
        self.next_var_index = 0

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def node_count(self) -> int:
        return len(self.kind)

    def _node(self, kind: int, a: int, b: int) -> int:
        key = (kind, a, b)
        node = self._cons.get(key)
        if node is None:
            node = len(self.kind)
            self.kind.append(kind)
            self.lhs.append(a)
            self.rhs.append(b)
            self._cons[key] = node
        return node

    # -- construction -----------------------------------------------------

    def fresh_var(self) -> int:
        index = self.next_var_index
        self.next_var_index += 1
        return self._node(Kind.VAR, index, -1)

    def var_index(self, node: int) -> int:
        if self.kind[node] != Kind.VAR:
            raise ValueError(f"node {node} is not a variable")
        return self.lhs[node]

    def mk_not(self, a: int) -> int:
        if a == TRUE:
            return FALSE
        if a == FALSE:
            return TRUE
        if self.kind[a] == Kind.NOT:
            return self.lhs[a]
        return self._node(Kind.NOT, a, -1)

    def mk_and(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        return self._node(Kind.AND, a, b)

    def mk_or(self, a: int, b: int) -> int:
        if a == TRUE or b == TRUE:
            return TRUE
        if a == FALSE:
            return b
        if b == FALSE or a == b:
            return a
        return self._node(Kind.OR, a, b)

    def mk_xor(self, a: int, b: int) -> int:
        if a == b:
            return FALSE
        if a == FALSE:
            return b
        if b == FALSE:
            return a
        if a == TRUE:
            return self.mk_not(b)
        if b == TRUE:
            return self.mk_not(a)
        return self._node(Kind.XOR, a, b)

    def mk_equiv(self, a: int, b: int) -> int:
        if a == b:
            return TRUE
        if a == TRUE:
            return b
        if b == TRUE:
            return a
        if a == FALSE:
            return self.mk_not(b)
        if b == FALSE:
            return self.mk_not(a)
        return self._node(Kind.EQUIV, a, b)

    def mk_connective(self, kind: Kind, a: int, b: int) -> int:
        if kind == Kind.AND:
            return self.mk_and(a, b)
        if kind == Kind.OR:
            return self.mk_or(a, b)
        if kind == Kind.XOR:
            return self.mk_xor(a, b)
        if kind == Kind.EQUIV:
            return self.mk_equiv(a, b)
        raise ValueError(f"not a binary connective: {kind!r}")

    def mk_implies(self, a: int, b: int) -> int:
        return self.mk_or(self.mk_not(a), b)

    def constant(self, value: bool) -> int:
        return TRUE if value else FALSE

    # -- inspection -------------------------------------------------------

    def is_const(self, node: int) -> bool:
        return node == TRUE or node == FALSE

    def children(self, node: int) -> tuple[int, ...]:
        kind = self.kind[node]
        if kind == Kind.NOT:
            return (self.lhs[node],)
        if kind >= Kind.AND:
            return (self.lhs[node], self.rhs[node])
        return ()

    def reachable(self, roots) -> list[int]:
        """Ids of all nodes reachable from ``roots``, in increasing order."""
        seen = set()
        stack = [r for r in roots]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(self.children(node))
        return sorted(seen)

    def evaluate(self, root: int, assignment: Mapping[int, bool],
                 memo: dict[int, bool] | None = None) -> bool:
        """Truth value of ``root`` under ``assignment`` (var index -> bool).

        Each reachable node is evaluated once; pass ``memo`` to share work
        between several roots or to inspect which nodes were visited.
        """
        if memo is None:
            memo = {}
        kind, lhs, rhs = self.kind, self.lhs, self.rhs
        for node in self.reachable([root]):
            if node in memo:
                continue
            k = kind[node]
            if k == Kind.FALSE:
                value = False
            elif k == Kind.TRUE:
                value = True
            elif k == Kind.VAR:
                try:
                    value = bool(assignment[lhs[node]])
                except KeyError:
                    raise UnassignedVariableError(lhs[node]) from None
            elif k == Kind.NOT:
                value = not memo[lhs[node]]
            elif k == Kind.AND:
                value = memo[lhs[node]] and memo[rhs[node]]
            elif k == Kind.OR:
                value = memo[lhs[node]] or memo[rhs[node]]
            elif k == Kind.XOR:
                value = memo[lhs[node]] != memo[rhs[node]]
            else:
                value = memo[lhs[node]] == memo[rhs[node]]
            memo[node] = value
        return memo[root]

    def to_str(self, node: int, names: Mapping[int, str] | None = None) -> str:
        kind = self.kind[node]
        if kind == Kind.FALSE:
            return "F"
        if kind == Kind.TRUE:
            return "T"
        if kind == Kind.VAR:
            index = self.lhs[node]
            return names[index] if names and index in names else f"v{index}"
        if kind == Kind.NOT:
            return "~" + self.to_str(self.lhs[node], names)
        return "({} {} {})".format(self.to_str(self.lhs[node], names), _SYMBOLS[kind],
                                   self.to_str(self.rhs[node], names))
