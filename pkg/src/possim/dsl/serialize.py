from __future__ import annotations

import json

import numpy as np

from ..distributions import tightest_necessity, tightest_possibility, tight_value
from ..kb import KnowledgeBase
from ..similarity import check, closure_matrix
from ..tnorm import EPS, TNorm

INDENT = "  "
MAX_DIGITS = 9


def format_degree(value: float) -> str:
    """Fixed-point with at most 9 fractional digits, trailing zeros trimmed: 0.600000000 -> '0.6'."""
    text = f"{value:.{MAX_DIGITS}f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _ceil_to_text(matrix: np.ndarray) -> np.ndarray:
    """Round every entry up to the nearest value ``format_degree`` writes exactly."""
    scale = 10 ** MAX_DIGITS
    return np.ceil(np.round(matrix * scale, 3)) / scale


def representable_closure(matrix, norm: TNorm | str, eps: float = EPS, max_rounds: int = 50) -> np.ndarray:
    """Transitive closure whose entries survive a trip through the text format.

    Closures under product or Lukasiewicz have entries with long decimal
    expansions; rounding them to ``MAX_DIGITS`` places can break transitivity
    by more than ``eps``. Rounding up and re-closing until the rounded matrix
    is itself transitive fixes that, at the cost of raising entries by a few
    units in the last place.
    """
    norm = TNorm.parse(norm)
    tight = eps * 1e-3
    r = _ceil_to_text(closure_matrix(matrix, norm, eps)[0])
    for _ in range(max_rounds):
        if not check(r, norm, tight):
            return r
        r = _ceil_to_text(closure_matrix(r, norm, tight)[0])
    raise RuntimeError("rounded closure did not settle")  # pragma: no cover


def _set(labels) -> str:
    return "{ " + ", ".join(labels) + " }" if labels else "{ }"


def serialize_kb(kb: KnowledgeBase) -> str:
    """Canonical text for ``kb``.

    World order is kept (it fixes matrix indices); every other declaration
    is sorted by name, propositions are written as explicit world sets and
    only the upper triangle of non-zero similarities is emitted.
    """
    u = kb.universe
    lines = ["version 1", f"tnorm {kb.norm.value}"]
    if u.atoms:
        lines.append("atoms " + " ".join(u.atoms))
        for w, row in zip(u.worlds, u.assignments):
            body = ", ".join(f"{a}: {'true' if v else 'false'}" for a, v in zip(u.atoms, row))
            lines.append(f"world {w} {{ {body} }}")
    else:
        lines.append("worlds " + " ".join(u.worlds))

    m = kb.matrix
    n = len(u)
    entries = []
    for i in range(n):
        if m[i, i] != 1.0:
            entries.append(f"{u.worlds[i]} {u.worlds[i]} {format_degree(m[i, i])}")
        for j in range(i + 1, n):
            if m[i, j] != 0.0:
                entries.append(f"{u.worlds[i]} {u.worlds[j]} {format_degree(m[i, j])}")
    if entries:
        lines.append("sim {")
        lines.extend(INDENT + e for e in entries)
        lines.append("}")
    else:
        lines.append("sim { }")

    for name in sorted(kb.propositions):
        lines.append(f"prop {name} = {_set(kb.propositions[name].labels)}")
    lines.append(f"evidence = {_set(kb.evidence.labels)}")
    for name in sorted(kb.partitions):
        lines.append(f"partition {name} = [ {', '.join(kb.partitions[name])} ]")
    for name in sorted(kb.tables):
        table = kb.tables[name]
        rows = []
        for key in sorted(table.entries):
            label = f"{key[0]} | {key[1]}" if table.kind.conditional else key
            rows.append(f"{INDENT}{label} {format_degree(table.entries[key])}")
        if rows:
            lines.append(f"{table.kind.value} {name} {{")
            lines.extend(rows)
            lines.append("}")
        else:
            lines.append(f"{table.kind.value} {name} {{ }}")
    return "\n".join(lines) + "\n"


def export_json(kb: KnowledgeBase, eps: float = EPS) -> dict:
    """JSON-ready document with the model and tight necessity/possibility values.

    Requires a valid similarity relation.
    """
    S = kb.similarity(eps)
    E = kb.evidence
    tight = {
        name: {"necessity": tightest_necessity(p, E, S), "possibility": tightest_possibility(p, E, S)}
        for name, p in sorted(kb.propositions.items())
    }
    tables = {}
    for name in sorted(kb.tables):
        table = kb.tables[name]
        rows = []
        for key in sorted(table.entries):
            row = {"declared": table.entries[key], "tight": tight_value(table.kind, key, kb, eps)}
            if table.kind.conditional:
                row.update(consequent=key[0], antecedent=key[1])
            else:
                row.update(proposition=key)
            rows.append(row)
        tables[name] = {"kind": table.kind.value, "entries": rows}
    return {
        "version": 1,
        "tnorm": kb.norm.value,
        "worlds": list(kb.universe.worlds),
        "atoms": list(kb.universe.atoms),
        "similarity": np.asarray(S.matrix).tolist(),
        "propositions": {name: p.labels for name, p in sorted(kb.propositions.items())},
        "evidence": E.labels,
        "partitions": {name: list(blocks) for name, blocks in sorted(kb.partitions.items())},
        "tight": tight,
        "tables": tables,
    }


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
