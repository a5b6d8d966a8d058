"""Necessity and possibility distributions relative to an evidential set.

A necessity distribution is any lower bound of ``I(·|E)`` and a possibility
distribution any upper bound of ``C(·|E)``. Conditional distributions bound
the residuum of the consequent's closeness by the antecedent's closeness,
taken world by world over ``E``::

    Nec(q|p) <= min_{w in E} I(q|w) ⊙ I(p|w)
    Poss(q|p) >= max_{w in E} I(q|w) ⊙ I(p|w)

The ``tightest_*`` functions return those bounds themselves.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

import numpy as np

from .errors import UnresolvedNameError
from .measures import closeness, degree_of_consistence, degree_of_implication
from .similarity import SimilarityRelation
from .tnorm import EPS, TNorm
from .worlds import EvidentialSet, Proposition

if TYPE_CHECKING:
    from .kb import KnowledgeBase


def tightest_necessity(p: Proposition, E: Proposition, S: SimilarityRelation) -> float:
    return degree_of_implication(p, E, S)


def tightest_possibility(p: Proposition, E: Proposition, S: SimilarityRelation) -> float:
    return degree_of_consistence(p, E, S)


def conditional_terms(q: Proposition, p: Proposition, E: Proposition, S: SimilarityRelation,
                      norm: TNorm | None = None, eps: float = EPS) -> np.ndarray:
    """``I(q|w) ⊙ I(p|w)`` for each evidence world ``w``, in world order."""
    S.check_universe(q, p, E)
    norm = S.norm if norm is None else TNorm.parse(norm)
    ev = E.members
    terms = norm.residuum(closeness(q, S)[ev], closeness(p, S)[ev], eps)
    return np.atleast_1d(terms)


def tightest_conditional_necessity(q: Proposition, p: Proposition, E: Proposition, S: SimilarityRelation,
                                   norm: TNorm | None = None, eps: float = EPS) -> float:
    E = EvidentialSet.of(E)
    return float(conditional_terms(q, p, E, S, norm, eps).min())


def tightest_conditional_possibility(q: Proposition, p: Proposition, E: Proposition, S: SimilarityRelation,
                                     norm: TNorm | None = None, eps: float = EPS) -> float:
    E = EvidentialSet.of(E)
    return float(conditional_terms(q, p, E, S, norm, eps).max())


class TableKind(enum.Enum):
    NECESSITY = "necessity"
    POSSIBILITY = "possibility"
    COND_NECESSITY = "cond_necessity"
    COND_POSSIBILITY = "cond_possibility"

    @property
    def conditional(self) -> bool:
        return self in (TableKind.COND_NECESSITY, TableKind.COND_POSSIBILITY)

    @property
    def lower_bound(self) -> bool:
        """Necessity entries must not exceed their tight value; possibility entries must not fall below it."""
        return self in (TableKind.NECESSITY, TableKind.COND_NECESSITY)


@dataclass
class DistributionTable:
    """Declared values for named propositions.

    Unconditioned tables map a proposition name to a degree; conditional
    tables map ``(consequent, antecedent)`` name pairs.
    """

    name: str
    kind: TableKind
    entries: dict = field(default_factory=dict)

    def key_label(self, key) -> str:
        return f"{key[0]}|{key[1]}" if self.kind.conditional else key


@dataclass(frozen=True)
class TableViolation:
    key: object
    declared: float
    tight: float

    def describe(self, table: DistributionTable) -> str:
        rel = "exceeds the upper bound" if table.kind.lower_bound else "is below the lower bound"
        return f"{table.kind.value} {table.name}: {table.key_label(self.key)} = {self.declared:g} {rel} {self.tight:g}"


def tight_value(kind: TableKind, key, kb: "KnowledgeBase", eps: float = EPS) -> float:
    """The bound an entry of ``kind`` keyed by ``key`` is checked against."""
    S = kb.similarity(eps)
    if kind.conditional:
        q, p = (kb.prop(k) for k in key)
        f = tightest_conditional_necessity if kind is TableKind.COND_NECESSITY else tightest_conditional_possibility
        return f(q, p, kb.evidence, S, kb.norm, eps)
    p = kb.prop(key)
    f = tightest_necessity if kind is TableKind.NECESSITY else tightest_possibility
    return f(p, kb.evidence, S)


def resolve_table(table: DistributionTable, names: Mapping[str, object]) -> None:
    """Raise :class:`UnresolvedNameError` for the first entry naming an undeclared proposition."""
    for key in table.entries:
        for name in (key if table.kind.conditional else (key,)):
            if name not in names:
                raise UnresolvedNameError(name)


def validate_table(table: DistributionTable, kb: "KnowledgeBase", eps: float = EPS) -> list[TableViolation]:
    """Check every entry against its tight bound; an empty list means the table is valid."""
    resolve_table(table, kb.propositions)
    out = []
    for key, declared in table.entries.items():
        tight = tight_value(table.kind, key, kb, eps)
        bad = declared > tight + eps if table.kind.lower_bound else declared < tight - eps
        if bad:
            out.append(TableViolation(key, declared, tight))
    return out


def tightest_table(kind: TableKind, keys, kb: "KnowledgeBase", name: str = "tight", eps: float = EPS) -> DistributionTable:
    return DistributionTable(name, kind, {k: tight_value(kind, k, kb, eps) for k in keys})
