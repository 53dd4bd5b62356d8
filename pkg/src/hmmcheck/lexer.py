"""Tokenizer for the formula surface syntax."""
from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    """Lexical or syntax error carrying a character offset into the source."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.message = message
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")

    def diagnostic(self) -> str:
        if not self.text:
            return str(self)
        return f"{self}\n  {self.text}\n  {' ' * self.pos}^"


class LexError(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.pos})"


_KW = r"(?![A-Za-z0-9_])"
_TOKEN_SPEC = [
    ("WS", r"\s+"),
    ("NUMBER", r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"),
    ("NEXT_OBS", r"X_\{"),
    ("NEXT", r"X"),
    ("PROB", r"P(?=\s*\[)"),
    ("UNTIL", r"U" + _KW),
    ("TRUE", r"T" + _KW),
    ("FALSE", r"F" + _KW),
    ("IDENT", r"[a-z][a-zA-Z0-9_]*"),
    ("CMP", r"<=|>=|<|>"),
    ("NOT", r"!"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("LBRACK", r"\["),
    ("RBRACK", r"\]"),
    ("RBRACE", r"\}"),
    ("COMMA", r","),
]
_MASTER = re.compile("|".join(f"(?P<{k}>{p})" for k, p in _TOKEN_SPEC))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _MASTER.match(text, pos)
        if m is None:
            raise LexError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "WS":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens
