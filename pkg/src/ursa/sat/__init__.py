from ._accel import BACKEND
from .dimacs import export_dimacs, read_dimacs, write_dimacs
from .solver import Model, Solver, blocking_clause, enumerate_models, solve

__all__ = [
    "BACKEND", "Model", "Solver", "blocking_clause", "enumerate_models", "export_dimacs",
    "read_dimacs", "solve", "write_dimacs",
]
