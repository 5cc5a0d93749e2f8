"""Incremental CDCL solver over DIMACS-style integer clauses."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels as K
from ._accel import BACKEND
from ..cnf import CnfInstance


@dataclass(frozen=True)
class Model:
    """Total assignment; ``assignment[v - 1]`` is the value of variable ``v``."""

    assignment: np.ndarray

    def value(self, var: int) -> bool:
        return bool(self.assignment[var - 1])

    def lit(self, lit: int) -> bool:
        v = self.value(abs(lit))
        return v if lit > 0 else not v

    def satisfies(self, clauses: Iterable[Sequence[int]]) -> bool:
        return all(any(self.lit(l) for l in c) for c in clauses)


def _flatten(clauses: Iterable[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    offsets = [0]
    flat: list[int] = []
    for c in clauses:
        flat.extend(c)
        offsets.append(len(flat))
    return np.asarray(flat, np.int64), np.asarray(offsets, np.int64)


def _to_internal(lit: int) -> int:
    return 2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1


class Solver:
    """Clauses can be added between calls; learnt clauses are kept."""

    backend = BACKEND

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]] = (), *,
                 prefer: Sequence[int] = ()):
        self.num_vars = num_vars
        clauses = list(clauses)
        lits = sum(len(c) for c in clauses)
        self.S = K.new_state(num_vars, 2 * len(clauses) + 1024, 2 * lits + 4 * num_vars + 4096)
        if prefer:
            # branch on these variables first; ties among them by index
            activity = self.S[7]
            for v in prefer:
                activity[v - 1] = 1.0
            K.heapify(self.S)
        self.add_clauses(clauses)

    # -- capacity ---------------------------------------------------------

    def _grow(self, clause_need: int = 0, arena_need: int = 0) -> None:
        S = list(self.S)
        st = S[0]
        ccap, acap = S[14].shape[0], S[18].shape[0]
        new_ccap = max(2 * ccap, st[K.NCL] + clause_need + 1024)
        new_acap = max(2 * acap, st[K.ARENA] + arena_need + 4 * self.num_vars + 4096)
        for i, fill in ((13, -1), (14, 0), (15, 0), (16, 0), (17, 0)):
            old = S[i]
            size = 2 * new_ccap if i == 13 else new_ccap
            new = np.full(size, fill, old.dtype)
            new[:old.shape[0]] = old
            S[i] = new
        arena = np.zeros(new_acap, S[18].dtype)
        arena[:acap] = S[18]
        S[18] = arena
        self.S = tuple(S)

    # -- clauses ----------------------------------------------------------

    def add_clause(self, clause: Sequence[int]) -> None:
        self.add_clauses([clause])

    def add_clauses(self, clauses: Iterable[Sequence[int]]) -> None:
        clauses = list(clauses)
        if not clauses:
            return
        for c in clauses:
            for l in c:
                if l == 0 or abs(l) > self.num_vars:
                    raise ValueError(f"literal {l} out of range 1..{self.num_vars}")
        flat, offsets = _flatten(clauses)
        st = self.S[0]
        if (st[K.NCL] + len(clauses) + 2 > self.S[14].shape[0]
                or st[K.ARENA] + len(flat) + self.num_vars + 2 > self.S[18].shape[0]):
            self._grow(len(clauses), len(flat))
        K.add_clauses(self.S, flat, offsets)

    @property
    def ok(self) -> bool:
        return bool(self.S[0][K.OK])

    # -- solving ----------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        """True if satisfiable under ``assumptions``; the model is then
        available from :meth:`model`."""
        st = self.S[0]
        for i, lit in enumerate(assumptions):
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"assumption {lit} out of range")
        if len(assumptions) > self.num_vars:
            assumptions = list(dict.fromkeys(assumptions))
        buf = self.S[20]
        for i, lit in enumerate(assumptions):
            buf[i] = _to_internal(lit)
        st[K.NASSUMP] = len(assumptions)
        self._model = None
        while True:
            status = K.search(self.S)
            if status != K.GROW:
                break
            self._grow()
        st = self.S[0]
        if status == K.SAT:
            self._model = Model((self.S[2][:self.num_vars] == 1).copy())
        K.cancel_until(self.S, 0)
        st[K.NASSUMP] = 0
        return status == K.SAT

    def model(self) -> Model:
        if self._model is None:
            raise RuntimeError("no model: the last call was not satisfiable")
        return self._model

    def learnt_clauses(self) -> list[list[int]]:
        st = self.S[0]
        out = []
        start, length, learnt, arena = self.S[14], self.S[15], self.S[16], self.S[18]
        for c in range(st[K.NCL]):
            if learnt[c]:
                lits = arena[start[c]:start[c] + length[c]]
                out.append([int(l >> 1) + 1 if not l & 1 else -(int(l >> 1) + 1) for l in lits])
        return out

    @property
    def stats(self) -> dict[str, int]:
        st = self.S[0]
        return {
            "conflicts": int(st[K.CONFLICTS]),
            "decisions": int(st[K.DECISIONS]),
            "propagations": int(st[K.PROPAGATIONS]),
            "restarts": int(st[K.RESTARTS]),
            "learnts": int(st[K.NLEARNTS]),
            "reductions": int(st[K.REDUCES]),
        }


def solve(instance: CnfInstance, assumptions: Sequence[int] = ()) -> Model | None:
    solver = Solver(instance.num_vars, instance.clauses)
    return solver.model() if solver.solve(assumptions) else None


def blocking_clause(model: Model, variables: Sequence[int]) -> list[int]:
    return [-v if model.value(v) else v for v in variables]


def enumerate_models(instance: CnfInstance, on_model: Callable[[Model], object] | None = None,
                     *, solver: Solver | None = None, assumptions: Sequence[int] = (),
                     limit: int | None = None) -> int:
    """Deliver every model once per distinct projection onto the
    independent variables; returns how many were delivered.

    After each model, the clause excluding its projection is added, so the
    next search continues with everything learnt so far.  If the callback
    returns ``False`` enumeration stops early.
    """
    if solver is None:
        solver = Solver(instance.num_vars, instance.clauses)
    keys = instance.independent_vars()
    count = 0
    while limit is None or count < limit:
        if not solver.solve(assumptions):
            break
        model = solver.model()
        count += 1
        if on_model is not None and on_model(model) is False:
            break
        block = blocking_clause(model, keys)
        if not block:
            break
        solver.add_clause(block)
    return count
