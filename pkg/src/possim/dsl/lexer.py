from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, KBParseError

# Token kinds
IDENT = "IDENT"
NUMBER = "NUMBER"
NEWLINE = "NEWLINE"
EOF = "EOF"
PUNCT = {"{": "LBRACE", "}": "RBRACE", "[": "LBRACK", "]": "RBRACK", "(": "LPAREN", ")": "RPAREN",
         ",": "COMMA", "=": "EQ", ":": "COLON", "|": "PIPE", "&": "AMP", "!": "BANG"}
_OPEN = {"LBRACE", "LBRACK", "LPAREN"}
_CLOSE = {"RBRACE", "RBRACK", "RPAREN"}

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f]+)"
    r"|(?P<comment>\#[^\n]*)"
    r"|(?P<newline>\n)"
    r"|(?P<number>-?(?:\d+(?:\.\d*)?|\.\d+)(?![A-Za-z0-9_.]))"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[{}\[\](),=:|&!])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    offset: int

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == NEWLINE:
            return "end of line"
        return repr(self.text)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens (1-based line/column).

    Newlines end statements except inside brackets of any kind, where they
    are plain whitespace. Raises :class:`KBParseError` on the first
    character that starts no token.
    """
    tokens: list[Token] = []
    line, line_start, depth = 1, 0, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            bad = re.match(r"\S+", text[pos:]).group(0)
            col = pos - line_start + 1
            raise KBParseError([Diagnostic("E100", f"unexpected character {text[pos]!r}", line, col, bad)])
        kind = m.lastgroup
        value = m.group(0)
        col = pos - line_start + 1
        if kind == "newline":
            if depth == 0 and tokens and tokens[-1].kind != NEWLINE:
                tokens.append(Token(NEWLINE, "\n", line, col, pos))
            line += 1
            line_start = m.end()
        elif kind == "number":
            tokens.append(Token(NUMBER, value, line, col, pos))
        elif kind == "ident":
            tokens.append(Token(IDENT, value, line, col, pos))
        elif kind == "punct":
            pk = PUNCT[value]
            if pk in _OPEN:
                depth += 1
            elif pk in _CLOSE:
                depth = max(depth - 1, 0)
            tokens.append(Token(pk, value, line, col, pos))
        pos = m.end()
    if tokens and tokens[-1].kind != NEWLINE:
        tokens.append(Token(NEWLINE, "\n", line, pos - line_start + 1, pos))
    tokens.append(Token(EOF, "", line, pos - line_start + 1, pos))
    return tokens
