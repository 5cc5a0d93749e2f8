"""Interpreter and compiler for the URSA constraint language.

Programs are executed symbolically over vectors of propositional
formulae; asserted conditions are turned into CNF and handed to the
bundled CDCL solver, and solutions are reported in terms of the program's
own variables.
"""

__version__ = "0.1.0"
