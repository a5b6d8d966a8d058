"""Degrees of implication and consistence, and the graded possibility operator.

Empty arguments follow complete-lattice conventions: an infimum over no
worlds is 1 and a supremum over no worlds is 0. Hence ``I(p|∅) = 1``,
``I(∅|q) = 0`` for non-empty ``q``, and ``C`` is 0 whenever either argument
is empty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .similarity import SimilarityRelation
from .tnorm import EPS
from .worlds import Proposition


def closeness(p: Proposition, S: SimilarityRelation) -> np.ndarray:
    """For every world ``w``, ``max_{v in p} S(v, w)`` (0 when ``p`` is empty)."""
    if not p.members.any():
        return np.zeros(len(S))
    return S.matrix[p.members].max(axis=0)


def world_similarity_to_set(p: Proposition, world, S: SimilarityRelation) -> float:
    """``I(p|{w})``, which equals ``C(p|{w})`` because the infimum is over one world."""
    S.check_universe(p)
    i = world if isinstance(world, (int, np.integer)) else S.universe.index(world)
    return float(closeness(p, S)[i])


def degree_of_implication(p: Proposition, q: Proposition, S: SimilarityRelation) -> float:
    """``I(p|q) = min_{w' in q} max_{w in p} S(w, w')``: how far ``p`` must stretch to cover ``q``."""
    S.check_universe(p, q)
    if not q.members.any():
        return 1.0
    return float(closeness(p, S)[q.members].min())


def degree_of_consistence(p: Proposition, q: Proposition, S: SimilarityRelation) -> float:
    """``C(p|q) = max_{w' in q} max_{w in p} S(w, w')``: how far ``p`` must stretch to meet ``q``."""
    S.check_universe(p, q)
    if not q.members.any():
        return 0.0
    return float(closeness(p, S)[q.members].max())


def alpha_possible(p: Proposition, alpha: float, S: SimilarityRelation, eps: float = EPS) -> Proposition:
    """Worlds from which some ``p``-world is at least ``alpha``-similar."""
    S.check_universe(p)
    if not p.members.any():
        return Proposition(S.universe, np.zeros(len(S), dtype=bool))
    return Proposition(S.universe, closeness(p, S) >= alpha - eps)


def necessarily_implies(q: Proposition, p: Proposition, alpha: float, S: SimilarityRelation,
                        eps: float = EPS) -> bool:
    """True when every ``q``-world lies in the ``alpha``-neighbourhood of ``p``."""
    S.check_universe(q)
    return q.issubset(alpha_possible(p, alpha, S, eps))


@dataclass(frozen=True)
class Witness:
    """Worlds realising an extremal value: ``target`` from the conditioning set, ``source`` from the other."""

    value: float
    target: int | None
    source: int | None


def implication_witness(p: Proposition, q: Proposition, S: SimilarityRelation) -> Witness:
    """The ``q``-world farthest from ``p`` and its nearest ``p``-world."""
    value = degree_of_implication(p, q, S)
    if not q.members.any() or not p.members.any():
        return Witness(value, None if not q.members.any() else int(q.indices[0]), None)
    close = closeness(p, S)
    qi = q.indices
    target = int(qi[np.argmin(close[qi])])
    pi = p.indices
    source = int(pi[np.argmax(S.matrix[pi, target])])
    return Witness(value, target, source)


def consistence_witness(p: Proposition, q: Proposition, S: SimilarityRelation) -> Witness:
    """The closest pair ``(q-world, p-world)``."""
    value = degree_of_consistence(p, q, S)
    if not q.members.any() or not p.members.any():
        return Witness(value, None, None)
    sub = S.matrix[np.ix_(q.indices, p.indices)]
    a, b = np.unravel_index(int(np.argmax(sub)), sub.shape)
    return Witness(value, int(q.indices[a]), int(p.indices[b]))
