"""Reader for the ``.pkb`` knowledge-base format.

Parsing runs in two passes: statements are first read into a flat list,
then resolved against each other, so declaration order never matters.
Both passes collect diagnostics instead of stopping at the first problem;
:func:`parse_kb` raises :class:`KBParseError` carrying all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..distributions import DistributionTable, TableKind
from ..errors import PossimError
from ..kb import KnowledgeBase
from ..tnorm import TNorm
from ..worlds import And, Atom, Const, EvidentialSet, Not, Or, Proposition, Universe, evaluate_formula
from .diagnostics import Diagnostic, KBParseError
from .lexer import EOF, IDENT, NEWLINE, NUMBER, Token, tokenize

MAX_FRACTION_DIGITS = 9
TABLE_KEYWORDS = {k.value: k for k in TableKind}
BOOLEANS = {"true": True, "false": False}


class _Syntax(Exception):
    def __init__(self, tok: Token, message: str):
        self.tok = tok
        self.message = message


@dataclass
class Stmt:
    kind: str
    tok: Token
    name: Token | None = None
    items: list = field(default_factory=list)
    extra: object = None


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise _Syntax(tok, f"expected {what or kind.lower()} but found {tok.describe()}")
        return self.next()

    def ident_list(self, close: str) -> list[Token]:
        """``IDENT (, IDENT)*`` up to the closing bracket kind (an empty list is allowed)."""
        items = []
        if not self.at(close):
            items.append(self.expect(IDENT, "an identifier"))
            while self.at("COMMA"):
                self.next()
                items.append(self.expect(IDENT, "an identifier"))
        self.expect(close, "a closing bracket")
        return items

    def formula(self):
        node = self._conj()
        while self.at("PIPE"):
            self.next()
            node = Or(node, self._conj())
        return node

    def _conj(self):
        node = self._unary()
        while self.at("AMP"):
            self.next()
            node = And(node, self._unary())
        return node

    def _unary(self):
        tok = self.peek()
        if tok.kind == "BANG":
            self.next()
            return Not(self._unary())
        if tok.kind == "LPAREN":
            self.next()
            node = self.formula()
            self.expect("RPAREN", "')'")
            return node
        if tok.kind == IDENT:
            self.next()
            if tok.text in BOOLEANS:
                return Const(BOOLEANS[tok.text])
            return Atom(tok.text, tok.offset)
        raise _Syntax(tok, f"expected an atom, '!' or '(' but found {tok.describe()}")


class _Reader(TokenStream):
    def statements(self, diags: list[Diagnostic]) -> list[Stmt]:
        out = []
        while not self.at(EOF):
            if self.at(NEWLINE):
                self.next()
                continue
            try:
                out.append(self.statement())
                tok = self.peek()
                if tok.kind not in (NEWLINE, EOF):
                    raise _Syntax(tok, f"expected end of line but found {tok.describe()}")
            except _Syntax as exc:
                diags.append(Diagnostic("E200", exc.message, exc.tok.line, exc.tok.col, exc.tok.text))
                while not self.at(NEWLINE) and not self.at(EOF):
                    self.next()
        return out

    def statement(self) -> Stmt:
        head = self.expect(IDENT, "a declaration keyword")
        kw = head.text
        if kw == "version":
            return Stmt(kw, head, items=[self.expect(NUMBER, "a version number")])
        if kw == "tnorm":
            return Stmt(kw, head, self.expect(IDENT, "a t-norm name"))
        if kw in ("worlds", "atoms"):
            items = [self.expect(IDENT, "an identifier")]
            while self.at(IDENT):
                items.append(self.next())
            return Stmt(kw, head, items=items)
        if kw == "world":
            name = self.expect(IDENT, "a world label")
            self.expect("LBRACE", "'{'")
            items = []
            while not self.at("RBRACE"):
                atom = self.expect(IDENT, "an atom name")
                self.expect("COLON", "':'")
                value = self.expect(IDENT, "true or false")
                if value.text not in BOOLEANS:
                    raise _Syntax(value, f"expected true or false but found {value.describe()}")
                items.append((atom, value))
                if not self.at("RBRACE"):
                    self.expect("COMMA", "',' or '}'")
            self.next()
            return Stmt(kw, head, name, items)
        if kw == "sim":
            self.expect("LBRACE", "'{'")
            items = []
            while not self.at("RBRACE"):
                a = self.expect(IDENT, "a world label")
                b = self.expect(IDENT, "a world label")
                items.append((a, b, self.expect(NUMBER, "a similarity degree")))
                if self.at("COMMA"):
                    self.next()
            self.next()
            return Stmt(kw, head, items=items)
        if kw == "prop":
            name = self.expect(IDENT, "a proposition name")
            self.expect("EQ", "'='")
            if self.at("LBRACE"):
                self.next()
                return Stmt("prop_set", head, name, self.ident_list("RBRACE"))
            return Stmt("prop_formula", head, name, extra=self.formula())
        if kw == "evidence":
            self.expect("EQ", "'='")
            if self.at("LBRACE"):
                self.next()
                return Stmt("evidence_set", head, items=self.ident_list("RBRACE"))
            return Stmt("evidence_ref", head, self.expect(IDENT, "'{' or a proposition name"))
        if kw == "partition":
            name = self.expect(IDENT, "a partition name")
            self.expect("EQ", "'='")
            self.expect("LBRACK", "'['")
            items = self.ident_list("RBRACK")
            if not items:
                raise _Syntax(self.toks[self.i - 1], "a partition needs at least one block")
            return Stmt(kw, head, name, items)
        if kw in TABLE_KEYWORDS:
            kind = TABLE_KEYWORDS[kw]
            name = self.expect(IDENT, "a table name")
            self.expect("LBRACE", "'{'")
            items = []
            while not self.at("RBRACE"):
                first = self.expect(IDENT, "a proposition name")
                if kind.conditional:
                    self.expect("PIPE", "'|'")
                    key = (first, self.expect(IDENT, "a proposition name"))
                else:
                    key = (first,)
                items.append((key, self.expect(NUMBER, "a degree")))
                if self.at("COMMA"):
                    self.next()
            self.next()
            return Stmt("table", head, name, items, kind)
        raise _Syntax(head, f"unknown declaration {kw!r}")


def read_degree(tok: Token, diags: list[Diagnostic]) -> float | None:
    """Convert a NUMBER token to a degree in [0, 1], recording a diagnostic on failure."""
    text = tok.text
    frac = text.split(".", 1)[1] if "." in text else ""
    if len(frac) > MAX_FRACTION_DIGITS:
        diags.append(Diagnostic("E501", f"at most {MAX_FRACTION_DIGITS} fractional digits are allowed",
                                tok.line, tok.col, text))
        return None
    value = float(text)
    if not 0.0 <= value <= 1.0:
        diags.append(Diagnostic("E500", f"value {text} is outside [0, 1]", tok.line, tok.col, text))
        return None
    return value


def _diag(diags, code, message, tok: Token):
    diags.append(Diagnostic(code, message, tok.line, tok.col, tok.text))


def _atoms_in(node):
    if isinstance(node, Atom):
        yield node
    elif isinstance(node, Not):
        yield from _atoms_in(node.arg)
    elif isinstance(node, (And, Or)):
        yield from _atoms_in(node.left)
        yield from _atoms_in(node.right)


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


def _resolve(stmts: list[Stmt], text: str, diags: list[Diagnostic]) -> KnowledgeBase | None:
    by_kind: dict[str, list[Stmt]] = {}
    for s in stmts:
        by_kind.setdefault(s.kind, []).append(s)

    def single(kind: str) -> Stmt | None:
        found = by_kind.get(kind, [])
        for dup in found[1:]:
            _diag(diags, "E300", f"{kind} declared more than once", dup.tok)
        return found[0] if found else None

    version = single("version")
    if version is not None and version.items[0].text not in ("1", "1.0"):
        _diag(diags, "E900", "only version 1 is supported", version.items[0])

    norm = TNorm.MIN
    stmt = single("tnorm")
    if stmt is not None:
        try:
            norm = TNorm.parse(stmt.name.text)
        except ValueError as exc:
            _diag(diags, "E400", str(exc), stmt.name)

    # -- worlds
    universe = _universe(by_kind, single, diags)
    if universe is None:
        return None
    n = len(universe)

    def world_index(tok: Token) -> int | None:
        if tok.text in universe:
            return universe.index(tok.text)
        _diag(diags, "E400", f"undeclared world {tok.text!r}", tok)
        return None

    # -- similarity
    matrix = np.eye(n)
    given: dict[tuple[int, int], tuple[float, Token]] = {}
    for s in by_kind.get("sim", []):
        for a, b, num in s.items:
            i, j = world_index(a), world_index(b)
            value = read_degree(num, diags)
            if i is None or j is None or value is None:
                continue
            key = (min(i, j), max(i, j))
            if key in given and given[key][0] != value:
                prev = given[key][1]
                _diag(diags, "E600", f"similarity of {a.text} and {b.text} is {value:g} here but "
                                     f"{given[key][0]:g} at line {prev.line}", num)
                continue
            given[key] = (value, num)
            matrix[i, j] = matrix[j, i] = value

    # -- propositions
    props: dict[str, Proposition] = {}
    prop_stmts = sorted(by_kind.get("prop_set", []) + by_kind.get("prop_formula", []), key=lambda s: s.tok.offset)
    for s in prop_stmts:
        name = s.name.text
        if name in props:
            _diag(diags, "E300", f"proposition {name!r} declared more than once", s.name)
            continue
        if s.kind == "prop_set":
            idx = [world_index(t) for t in s.items]
            if any(i is None for i in idx):
                continue
            members = np.zeros(n, dtype=bool)
            members[idx] = True
            props[name] = Proposition(universe, members, name)
        else:
            unknown = [a for a in _atoms_in(s.extra) if a.name not in universe.atoms]
            for a in unknown:
                line, col = _line_col(text, a.offset)
                diags.append(Diagnostic("E400", f"unknown atom {a.name!r}", line, col, a.name))
            if not unknown:
                props[name] = evaluate_formula(universe, s.extra, name)

    # -- evidence
    evidence = None
    ev = [*by_kind.get("evidence_set", []), *by_kind.get("evidence_ref", [])]
    ev.sort(key=lambda s: s.tok.offset)
    for dup in ev[1:]:
        _diag(diags, "E300", "evidence declared more than once", dup.tok)
    if ev:
        s = ev[0]
        members = None
        if s.kind == "evidence_set":
            idx = [world_index(t) for t in s.items]
            if all(i is not None for i in idx):
                members = np.zeros(n, dtype=bool)
                members[idx] = True
        elif s.name.text in props:
            members = props[s.name.text].members
        else:
            _diag(diags, "E400", f"undeclared proposition {s.name.text!r}", s.name)
        if members is not None:
            if not members.any():
                _diag(diags, "E700", "the evidential set is empty", s.tok)
            else:
                evidence = EvidentialSet(universe, members)

    def prop_ref(tok: Token) -> bool:
        if tok.text in props:
            return True
        _diag(diags, "E400", f"undeclared proposition {tok.text!r}", tok)
        return False

    # -- partitions
    partitions: dict[str, tuple[str, ...]] = {}
    for s in by_kind.get("partition", []):
        name = s.name.text
        if name in partitions:
            _diag(diags, "E300", f"partition {name!r} declared more than once", s.name)
            continue
        if all([prop_ref(t) for t in s.items]):
            partitions[name] = tuple(t.text for t in s.items)

    # -- tables
    tables: dict[str, DistributionTable] = {}
    for s in by_kind.get("table", []):
        name = s.name.text
        if name in tables:
            _diag(diags, "E300", f"table {name!r} declared more than once", s.name)
            continue
        kind: TableKind = s.extra
        entries = {}
        ok = True
        for key_toks, num in s.items:
            resolved = all([prop_ref(t) for t in key_toks])
            value = read_degree(num, diags)
            key = tuple(t.text for t in key_toks) if kind.conditional else key_toks[0].text
            if key in entries:
                _diag(diags, "E300", f"duplicate entry {'|'.join(t.text for t in key_toks)} in table {name!r}",
                      key_toks[0])
                ok = False
            if not resolved or value is None:
                ok = False
                continue
            entries[key] = value
        if ok:
            tables[name] = DistributionTable(name, kind, entries)

    if diags:
        return None
    return KnowledgeBase(universe, matrix, norm, props, evidence, partitions, tables)


def _universe(by_kind, single, diags) -> Universe | None:
    worlds_stmt = single("worlds")
    atoms_stmt = single("atoms")
    world_stmts = by_kind.get("world", [])
    if worlds_stmt and atoms_stmt:
        _diag(diags, "E300", "declare either 'worlds' or 'atoms', not both", atoms_stmt.tok)
        return None
    if worlds_stmt:
        for s in world_stmts:
            _diag(diags, "E800", "'world' declarations need an 'atoms' declaration", s.tok)
        labels, seen = [], set()
        for t in worlds_stmt.items:
            if t.text in seen:
                _diag(diags, "E300", f"world {t.text!r} declared more than once", t)
            else:
                seen.add(t.text)
                labels.append(t.text)
        return Universe(tuple(labels))
    if atoms_stmt:
        atoms, seen = [], set()
        for t in atoms_stmt.items:
            if t.text in seen:
                _diag(diags, "E300", f"atom {t.text!r} declared more than once", t)
            else:
                seen.add(t.text)
                atoms.append(t.text)
        labels, rows, owner = [], [], {}
        for s in world_stmts:
            if s.name.text in labels:
                _diag(diags, "E300", f"world {s.name.text!r} declared more than once", s.name)
                continue
            values: dict[str, bool] = {}
            for atom, val in s.items:
                if atom.text not in seen:
                    _diag(diags, "E400", f"unknown atom {atom.text!r}", atom)
                elif atom.text in values:
                    _diag(diags, "E300", f"atom {atom.text!r} assigned twice in world {s.name.text!r}", atom)
                else:
                    values[atom.text] = BOOLEANS[val.text]
            missing = [a for a in atoms if a not in values]
            if missing:
                _diag(diags, "E800", f"world {s.name.text!r} assigns no value to {', '.join(missing)}", s.name)
                continue
            row = tuple(values[a] for a in atoms)
            if row in owner:
                _diag(diags, "E800", f"worlds {owner[row]!r} and {s.name.text!r} have identical assignments", s.name)
                continue
            owner[row] = s.name.text
            labels.append(s.name.text)
            rows.append(row)
        if not labels:
            _diag(diags, "E800", "no worlds declared", atoms_stmt.tok)
            return None
        return Universe(tuple(labels), tuple(atoms), tuple(rows))
    for s in world_stmts:
        _diag(diags, "E800", "'world' declarations need an 'atoms' declaration", s.tok)
    diags.append(Diagnostic("E800", "no worlds declared ('worlds' or 'atoms' is required)", 1, 1, ""))
    return None


def parse_kb(text: str) -> KnowledgeBase:
    """Parse knowledge-base source text; raise :class:`KBParseError` with diagnostics on failure."""
    tokens = tokenize(text)
    diags: list[Diagnostic] = []
    stmts = _Reader(tokens).statements(diags)
    try:
        kb = _resolve(stmts, text, diags)
    except PossimError as exc:  # pragma: no cover - resolution is expected to pre-empt these
        diags.append(Diagnostic("E800", str(exc), 1, 1, ""))
        kb = None
    if diags or kb is None:
        raise KBParseError(diags)
    return kb


def load_kb(path) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read())
