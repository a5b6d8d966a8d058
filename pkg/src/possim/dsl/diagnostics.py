from __future__ import annotations

from dataclasses import dataclass

from ..errors import PossimError

#: Diagnostic codes.
CODES = {
    "E100": "lexical error",
    "E200": "syntax error",
    "E210": "wrong number of arguments",
    "E220": "table kind mismatch",
    "E300": "duplicate declaration",
    "E400": "unresolved reference",
    "E500": "value out of range",
    "E501": "too many fractional digits",
    "E600": "conflicting similarity entry",
    "E700": "empty evidence",
    "E800": "invalid world declaration",
    "E900": "unsupported version",
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int
    col: int
    token: str = ""

    def __str__(self) -> str:
        where = f" near {self.token!r}" if self.token else ""
        return f"{self.line}:{self.col}: {self.code} {self.message}{where}"


class KBParseError(PossimError):
    """Raised with every diagnostic collected while reading a knowledge base or query."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = sorted(diagnostics, key=lambda d: (d.line, d.col))
        super().__init__("\n".join(str(d) for d in self.diagnostics))

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]
