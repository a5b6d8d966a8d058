"""Text formats: the ``.pkb`` knowledge-base language, queries and JSON export."""

from .diagnostics import CODES, Diagnostic, KBParseError
from .parser import load_kb, parse_kb
from .query import Query, QueryResult, evaluate, format_value, parse_query, run_query
from .serialize import dumps_json, export_json, format_degree, serialize_kb

__all__ = [
    "CODES", "Diagnostic", "KBParseError", "load_kb", "parse_kb", "Query", "QueryResult", "evaluate",
    "format_value", "parse_query", "run_query", "dumps_json", "export_json", "format_degree", "serialize_kb",
]
