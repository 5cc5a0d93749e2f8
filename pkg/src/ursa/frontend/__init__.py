from .ast import Program
from .lexer import Token, tokenize
from .parser import IncompleteInput, Parser, parse_expression, parse_program
from .printer import format_program

__all__ = ["Program", "Token", "tokenize", "IncompleteInput", "Parser",
           "parse_expression", "parse_program", "format_program"]
