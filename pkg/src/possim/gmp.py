"""Generalized modus ponens over a partition.

Given, for every block ``p`` of a partition, an unconditioned value for
``p`` and a conditional value for the consequent ``q`` given ``p``, the
combined bound is::

    sup_p T(cond(q|p), prior(p))

With necessity tables that respect their hypotheses this never exceeds
``I(q|E)``; with possibility tables it never falls below ``C(q|E)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .distributions import (
    tightest_conditional_necessity,
    tightest_conditional_possibility,
    tightest_necessity,
    tightest_possibility,
)
from .errors import HypothesisViolationError, IncompleteTableError
from .measures import degree_of_implication
from .similarity import SimilarityRelation
from .tnorm import EPS, TNorm
from .worlds import EvidentialSet, Partition, Proposition, block_label


class Mode(enum.Enum):
    NECESSITY = "necessity"
    POSSIBILITY = "possibility"


@dataclass(frozen=True)
class GmpProblem:
    """Tables are keyed by block label (the block's name, or ``#i`` for unnamed blocks)."""

    partition: Partition
    consequent: Proposition
    prior: Mapping[str, float]
    conditional: Mapping[str, float]
    mode: Mode = Mode.NECESSITY

    def labels(self) -> list[str]:
        return [block_label(b, i) for i, b in enumerate(self.partition.blocks)]


@dataclass(frozen=True)
class GmpResult:
    value: float
    terms: dict[str, float]
    argmax: tuple[str, ...]


def tight_tables(partition: Partition, q: Proposition, E: Proposition, S: SimilarityRelation,
                 mode: Mode = Mode.NECESSITY, eps: float = EPS) -> tuple[dict, dict]:
    """Prior and conditional tables set exactly at their hypothesis bounds."""
    E = EvidentialSet.of(E)
    prior, cond = {}, {}
    for i, b in enumerate(partition.blocks):
        label = block_label(b, i)
        if mode is Mode.NECESSITY:
            prior[label] = tightest_necessity(b, E, S)
            cond[label] = tightest_conditional_necessity(q, b, E, S, S.norm, eps)
        else:
            prior[label] = tightest_possibility(b, E, S)
            cond[label] = tightest_conditional_possibility(q, b, E, S, S.norm, eps)
    return prior, cond


def tight_problem(partition: Partition, q: Proposition, E: Proposition, S: SimilarityRelation,
                  mode: Mode = Mode.NECESSITY, eps: float = EPS) -> GmpProblem:
    prior, cond = tight_tables(partition, q, E, S, mode, eps)
    return GmpProblem(partition, q, prior, cond, mode)


def check_hypotheses(problem: GmpProblem, E: Proposition, S: SimilarityRelation, eps: float = EPS) -> None:
    """Raise if a table is incomplete or an entry violates its hypothesis bound."""
    labels = problem.labels()
    for table_name, table in (("prior", problem.prior), ("conditional", problem.conditional)):
        missing = [lb for lb in labels if lb not in table]
        if missing:
            raise IncompleteTableError(f"{table_name} table has no value for block(s) {', '.join(missing)}", missing)
    prior_tight, cond_tight = tight_tables(problem.partition, problem.consequent, E, S, problem.mode, eps)
    bad = []
    for lb in labels:
        for table_name, declared, tight in (("prior", problem.prior[lb], prior_tight[lb]),
                                            ("conditional", problem.conditional[lb], cond_tight[lb])):
            if problem.mode is Mode.NECESSITY and declared > tight + eps:
                bad.append(f"{table_name}[{lb}] = {declared:g} > {tight:g}")
            elif problem.mode is Mode.POSSIBILITY and declared < tight - eps:
                bad.append(f"{table_name}[{lb}] = {declared:g} < {tight:g}")
    if bad:
        raise HypothesisViolationError("hypothesis bounds violated: " + "; ".join(bad), bad)


def solve(problem: GmpProblem, E: Proposition, S: SimilarityRelation, eps: float = EPS,
          check: bool = True) -> GmpResult:
    """Evaluate the combined bound and report which blocks attain it."""
    if check:
        check_hypotheses(problem, E, S, eps)
    norm = S.norm
    terms = {lb: norm.apply(problem.conditional[lb], problem.prior[lb]) for lb in problem.labels()}
    value = max(terms.values())
    argmax = tuple(lb for lb, t in terms.items() if t >= value - eps)
    return GmpResult(value, terms, argmax)


def gmp_necessity(problem: GmpProblem, E: Proposition, S: SimilarityRelation, eps: float = EPS,
                  check: bool = True) -> float:
    """Lower bound on ``I(q|E)``."""
    if problem.mode is not Mode.NECESSITY:
        raise ValueError("gmp_necessity needs a problem in necessity mode")
    return solve(problem, E, S, eps, check).value


def gmp_possibility(problem: GmpProblem, E: Proposition, S: SimilarityRelation, eps: float = EPS,
                    check: bool = True) -> float:
    """Upper bound on ``C(q|E)``."""
    if problem.mode is not Mode.POSSIBILITY:
        raise ValueError("gmp_possibility needs a problem in possibility mode")
    return solve(problem, E, S, eps, check).value


def simple_gmp_chain(p: Proposition, r: Proposition, q: Proposition, S: SimilarityRelation,
                     norm: TNorm | str | None = None) -> float:
    """``T(I(p|r), I(r|q))``, a lower bound on ``I(p|q)`` obtained through ``r``."""
    norm = S.norm if norm is None else TNorm.parse(norm)
    return norm.apply(degree_of_implication(p, r, S), degree_of_implication(r, q, S))
