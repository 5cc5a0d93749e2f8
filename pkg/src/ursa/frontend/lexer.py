"""Tokenizer for URSA source text."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset({
    "procedure", "call", "while", "for", "if", "else",
    "minimize", "maximize", "assert", "assert_all",
    "print", "listvars", "clear", "halt",
    "true", "false", "ite", "sgn", "bool2num", "num2bool",
})

# longest operators first so that e.g. "<<=" wins over "<<" and "<"
OPERATORS = (
    "<<=", ">>=", "&&=", "||=", "^^=",
    "++", "--", "+=", "-=", "*=", "&=", "|=", "^=",
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "^^",
    "+", "-", "*", "&", "|", "^", "~", "!", "<", ">", "=",
    "(", ")", "[", "]", "{", "}", ",", ";",
)

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>/\*.*?\*/)"
    r"|(?P<num>[0-9]+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>" + "|".join(re.escape(op) for op in OPERATORS) + ")",
    re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    type: str  # "num", "ident", "kw", "op" or "eof"
    text: str
    line: int
    col: int

    def __str__(self) -> str:
        return "end of input" if self.type == "eof" else repr(self.text)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            if source.startswith("/*", pos):
                raise LexError("unterminated comment", line, col)
            raise LexError(f"illegal character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "ident":
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind == "num":
            tokens.append(Token("num", text, line, col))
        elif kind == "op":
            tokens.append(Token("op", text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens
