"""Query language: parsing, resolution against a knowledge base, and evaluation.

Forms::

    I(p|q)  C(p|q)  pi(alpha, p)  nimp(q, p, alpha)
    nec(p)  poss(p)  nec(q|p)  poss(q|p)
    gmp_nec(P, q)  gmp_poss(P, q)  [with table T1, T2]

Proposition arguments are declared names or literal world sets ``{w0, w1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

from .. import gmp, measures
from ..distributions import (
    TableKind,
    conditional_terms,
    tightest_conditional_necessity,
    tightest_conditional_possibility,
    tightest_necessity,
    tightest_possibility,
)
from ..errors import IncompleteTableError, UnresolvedNameError
from ..kb import KnowledgeBase
from ..tnorm import EPS
from ..worlds import Proposition, block_label
from .diagnostics import Diagnostic, KBParseError
from .lexer import EOF, IDENT, NEWLINE, NUMBER, Token, tokenize
from .parser import TokenStream, _Syntax, read_degree

FORMS = ("I", "C", "pi", "nimp", "nec", "poss", "gmp_nec", "gmp_poss")
_SIGNATURES = {
    "I": [("prop", "|", "prop")],
    "C": [("prop", "|", "prop")],
    "nec": [("prop",), ("prop", "|", "prop")],
    "poss": [("prop",), ("prop", "|", "prop")],
    "pi": [("num", ",", "prop")],
    "nimp": [("prop", ",", "prop", ",", "num")],
    "gmp_nec": [("name", ",", "prop")],
    "gmp_poss": [("name", ",", "prop")],
}
_USAGE = {
    "I": "I(p|q)", "C": "C(p|q)", "nec": "nec(p) or nec(q|p)", "poss": "poss(p) or poss(q|p)",
    "pi": "pi(alpha, p)", "nimp": "nimp(q, p, alpha)", "gmp_nec": "gmp_nec(P, q)", "gmp_poss": "gmp_poss(P, q)",
}


@dataclass(frozen=True)
class Query:
    """A resolved query; ``props`` are the proposition arguments in written order."""

    text: str
    form: str
    props: tuple[Proposition, ...] = ()
    alpha: float | None = None
    partition: str | None = None
    tables: tuple[str, ...] = ()

    @property
    def conditional(self) -> bool:
        return self.form in ("nec", "poss") and len(self.props) == 2


@dataclass
class QueryResult:
    query: Query
    value: object
    display: str
    explain: list[str] = field(default_factory=list)
    witness: dict = field(default_factory=dict)

    def record(self) -> dict:
        value = self.value
        if isinstance(value, Proposition):
            value = value.labels
        return {"query": self.query.text, "form": self.query.form, "value": value,
                "display": self.display, "witness": self.witness}


def format_value(value: float, places: int = 6) -> str:
    """Fixed ``places`` decimals, rounding half to even on the shortest decimal form of ``value``."""
    q = Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    text = f"{q:.{places}f}"
    return text[1:] if text.startswith("-") and float(q) == 0 else text


def _arg(ts: TokenStream):
    tok = ts.peek()
    if tok.kind == NUMBER:
        return ("num", ts.next())
    if tok.kind == IDENT:
        return ("ident", ts.next())
    if tok.kind == "LBRACE":
        ts.next()
        return ("set", tok, ts.ident_list("RBRACE"))
    raise _Syntax(tok, f"expected an argument but found {tok.describe()}")


def parse_query(text: str, kb: KnowledgeBase) -> Query:
    """Parse and resolve ``text``; raise :class:`KBParseError` with diagnostics on failure."""
    toks = [t for t in tokenize(text) if t.kind != NEWLINE]
    ts = TokenStream(toks)
    diags: list[Diagnostic] = []
    try:
        head = ts.expect(IDENT, "a query name")
        if head.text not in FORMS:
            raise _Syntax(head, f"unknown query {head.text!r} (expected one of {', '.join(FORMS)})")
        ts.expect("LPAREN", "'('")
        args, seps = [], []
        if not ts.at("RPAREN"):
            args.append(_arg(ts))
            while ts.at("PIPE") or ts.at("COMMA"):
                seps.append(ts.next())
                args.append(_arg(ts))
        close = ts.expect("RPAREN", "')'")
        tables: list[Token] = []
        if ts.at(IDENT, "with"):
            ts.next()
            kw = ts.expect(IDENT, "'table'")
            if kw.text != "table":
                raise _Syntax(kw, f"expected 'table' but found {kw.describe()}")
            tables.append(ts.expect(IDENT, "a table name"))
            while ts.at("COMMA"):
                ts.next()
                tables.append(ts.expect(IDENT, "a table name"))
        if not ts.at(EOF):
            raise _Syntax(ts.peek(), f"unexpected {ts.peek().describe()} after the query")
    except _Syntax as exc:
        raise KBParseError([Diagnostic("E200", exc.message, exc.tok.line, exc.tok.col, exc.tok.text)]) from None

    form = head.text
    shapes = _SIGNATURES[form]
    if not any(len(s) == 2 * len(args) - 1 for s in shapes) or (not args):
        raise KBParseError([Diagnostic("E210", f"wrong number of arguments, usage: {_USAGE[form]}",
                                       close.line, close.col, close.text)])
    shape = next(s for s in shapes if len(s) == 2 * len(args) - 1)
    for sep, want in zip(seps, shape[1::2]):
        if sep.text != want:
            raise KBParseError([Diagnostic("E200", f"expected {want!r} here, usage: {_USAGE[form]}",
                                           sep.line, sep.col, sep.text)])

    props, alpha, partition = [], None, None
    for arg, want in zip(args, shape[::2]):
        tok = arg[1]
        if want == "num":
            if arg[0] != "num":
                diags.append(Diagnostic("E200", f"expected a number, usage: {_USAGE[form]}", tok.line, tok.col, tok.text))
                continue
            alpha = read_degree(tok, diags)
        elif want == "name":
            if arg[0] != "ident":
                diags.append(Diagnostic("E200", "expected a partition name", tok.line, tok.col, tok.text))
            elif tok.text not in kb.partitions:
                diags.append(Diagnostic("E400", f"undeclared partition {tok.text!r}", tok.line, tok.col, tok.text))
            else:
                partition = tok.text
        else:
            prop = _resolve_prop(arg, kb, diags)
            if prop is not None:
                props.append(prop)

    if tables and not form.startswith("gmp_"):
        t = tables[0]
        diags.append(Diagnostic("E200", "'with table' applies only to gmp_nec and gmp_poss", t.line, t.col, t.text))
    wanted = ({TableKind.NECESSITY, TableKind.COND_NECESSITY} if form == "gmp_nec"
              else {TableKind.POSSIBILITY, TableKind.COND_POSSIBILITY})
    seen_kinds = set()
    for t in tables if form.startswith("gmp_") else ():
        if t.text not in kb.tables:
            diags.append(Diagnostic("E400", f"undeclared table {t.text!r}", t.line, t.col, t.text))
            continue
        kind = kb.tables[t.text].kind
        if kind not in wanted:
            diags.append(Diagnostic("E220", f"table {t.text!r} is a {kind.value} table, not usable by {form}",
                                    t.line, t.col, t.text))
        elif kind in seen_kinds:
            diags.append(Diagnostic("E300", f"more than one {kind.value} table given", t.line, t.col, t.text))
        seen_kinds.add(kind)
    if diags:
        raise KBParseError(diags)
    return Query(text.strip(), form, tuple(props), alpha, partition, tuple(t.text for t in tables))


def _resolve_prop(arg, kb: KnowledgeBase, diags) -> Proposition | None:
    if arg[0] == "ident":
        tok = arg[1]
        if tok.text in kb.propositions:
            return kb.propositions[tok.text]
        diags.append(Diagnostic("E400", f"undeclared proposition {tok.text!r}", tok.line, tok.col, tok.text))
        return None
    if arg[0] == "set":
        members = np.zeros(len(kb.universe), dtype=bool)
        ok = True
        for t in arg[2]:
            if t.text in kb.universe:
                members[kb.universe.index(t.text)] = True
            else:
                diags.append(Diagnostic("E400", f"undeclared world {t.text!r}", t.line, t.col, t.text))
                ok = False
        return Proposition(kb.universe, members) if ok else None
    tok = arg[1]
    diags.append(Diagnostic("E200", "expected a proposition", tok.line, tok.col, tok.text))
    return None


def _name(p: Proposition) -> str:
    return p.name or p.format()


def evaluate(query: Query, kb: KnowledgeBase, eps: float = EPS) -> QueryResult:
    """Evaluate a resolved query; the knowledge base's similarity must be valid."""
    S = kb.similarity(eps)
    E = kb.evidence
    worlds = kb.universe.worlds
    form = query.form

    def wname(i):
        return None if i is None else worlds[i]

    if form in ("I", "C") or (form in ("nec", "poss") and not query.conditional):
        if form in ("I", "C"):
            p, q = query.props
        else:
            p, q = query.props[0], E
        if form in ("I", "nec"):
            w = measures.implication_witness(p, q, S)
            value = w.value if form == "I" else tightest_necessity(p, E, S)
            explain = [f"farthest conditioning world: {wname(w.target)}",
                       f"nearest {_name(p)}-world: {wname(w.source)}"]
        else:
            w = measures.consistence_witness(p, q, S)
            value = w.value if form == "C" else tightest_possibility(p, E, S)
            explain = [f"closest pair: {wname(w.target)} ~ {wname(w.source)}"]
        return QueryResult(query, value, format_value(value), explain,
                           {"target": wname(w.target), "source": wname(w.source)})

    if form in ("nec", "poss"):
        q, p = query.props
        terms = conditional_terms(q, p, E, S, kb.norm, eps)
        ev = E.indices
        if form == "nec":
            value = tightest_conditional_necessity(q, p, E, S, kb.norm, eps)
            at = int(ev[int(np.argmin(terms))])
            explain = [f"argmin evidence world: {worlds[at]}"]
        else:
            value = tightest_conditional_possibility(q, p, E, S, kb.norm, eps)
            at = int(ev[int(np.argmax(terms))])
            explain = [f"argmax evidence world: {worlds[at]}"]
        return QueryResult(query, value, format_value(value), explain, {"evidence_world": worlds[at]})

    if form == "pi":
        (p,) = query.props
        out = measures.alpha_possible(p, query.alpha, S, eps)
        return QueryResult(query, out, out.format(), [f"{len(out)} of {len(worlds)} worlds"])

    if form == "nimp":
        q, p = query.props
        ok = measures.necessarily_implies(q, p, query.alpha, S, eps)
        region = measures.alpha_possible(p, query.alpha, S, eps)
        outside = [worlds[i] for i in q.indices if not region.members[i]]
        explain = [f"worlds of {_name(q)} outside the neighbourhood: {', '.join(outside) or 'none'}"]
        return QueryResult(query, ok, "true" if ok else "false", explain, {"outside": outside})

    # generalized modus ponens
    partition = kb.partition(query.partition)
    (q,) = query.props
    mode = gmp.Mode.NECESSITY if form == "gmp_nec" else gmp.Mode.POSSIBILITY
    prior, cond = gmp.tight_tables(partition, q, E, S, mode, eps)
    for tname in query.tables:
        table = kb.tables[tname]
        labels = [block_label(b, i) for i, b in enumerate(partition.blocks)]
        if table.kind.conditional:
            if q.name is None:
                raise UnresolvedNameError(q.format(), "named consequent (declared tables are keyed by name)")
            missing = [lb for lb in labels if (q.name, lb) not in table.entries]
            if missing:
                raise IncompleteTableError(f"table {tname} has no entry {q.name}|{missing[0]}", missing)
            cond = {lb: table.entries[(q.name, lb)] for lb in labels}
        else:
            missing = [lb for lb in labels if lb not in table.entries]
            if missing:
                raise IncompleteTableError(f"table {tname} has no entry for block {missing[0]}", missing)
            prior = {lb: table.entries[lb] for lb in labels}
    problem = gmp.GmpProblem(partition, q, prior, cond, mode)
    result = gmp.solve(problem, E, S, eps)
    explain = ["block terms: " + ", ".join(f"{lb}={format_value(v)}" for lb, v in result.terms.items()),
               "argmax blocks: " + ", ".join(result.argmax)]
    return QueryResult(query, result.value, format_value(result.value), explain,
                       {"argmax": list(result.argmax), "terms": result.terms})


def run_query(text: str, kb: KnowledgeBase, eps: float = EPS) -> QueryResult:
    return evaluate(parse_query(text, kb), kb, eps)
