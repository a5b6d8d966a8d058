"""Brute-force reference implementations used to certify the engine in tests.

Nothing here calls the engine's measures, distributions or GMP code: every
quantity is recomputed with plain nested loops over world indices, and the
residuum is found by grid search rather than closed form. Only data types
and the transitive closure (to build random valid models) are shared.
"""

from __future__ import annotations

import numpy as np

from .similarity import SimilarityRelation, transitive_closure
from .worlds import Universe

GRID_STEP = 1e-3
_GRID = [k / 1000 for k in range(1001)]
_TOL = 1e-9

_NORMS = {
    "min": lambda a, b: a if a < b else b,
    "lukasiewicz": lambda a, b: a + b - 1.0 if a + b - 1.0 > 0.0 else 0.0,
    "product": lambda a, b: a * b,
}


def _members(prop) -> list[int]:
    return [i for i, inside in enumerate(prop.members) if inside]


def _norm(norm) -> callable:
    return _NORMS[getattr(norm, "value", norm)]


def oracle_tnorm(norm, a: float, b: float) -> float:
    return _norm(norm)(a, b)


def oracle_residuum(norm, a: float, b: float) -> float:
    """``sup{c on a 0.001 grid : T(b, c) <= a}``."""
    t = _norm(norm)
    best = 0.0
    for c in _GRID:
        if t(b, c) <= a + _TOL:
            best = c
    return best


def oracle_implication(p, q, S: SimilarityRelation) -> float:
    m = S.matrix
    lowest = 1.0
    for v in _members(q):
        highest = 0.0
        for w in _members(p):
            if m[w][v] > highest:
                highest = m[w][v]
        if highest < lowest:
            lowest = highest
    return float(lowest)


def oracle_consistence(p, q, S: SimilarityRelation) -> float:
    m = S.matrix
    highest = 0.0
    for v in _members(q):
        for w in _members(p):
            if m[w][v] > highest:
                highest = m[w][v]
    return float(highest)


def oracle_alpha_possible(p, alpha: float, S: SimilarityRelation) -> set[int]:
    m = S.matrix
    return {v for v in range(len(m)) if any(m[v][w] >= alpha - _TOL for w in _members(p))}


def oracle_necessarily_implies(q, p, alpha: float, S: SimilarityRelation) -> bool:
    region = oracle_alpha_possible(p, alpha, S)
    return all(v in region for v in _members(q))


def oracle_implication_via_modal(p, q, S: SimilarityRelation) -> float:
    """Largest candidate ``alpha`` (matrix entries, 0 and 1) with ``q`` inside the ``alpha``-neighbourhood of ``p``."""
    candidates = sorted({0.0, 1.0, *(float(x) for row in S.matrix for x in row)}, reverse=True)
    for alpha in candidates:
        if oracle_necessarily_implies(q, p, alpha, S):
            return alpha
    return 0.0


def _closeness(prop, world: int, S: SimilarityRelation) -> float:
    best = 0.0
    for w in _members(prop):
        if S.matrix[w][world] > best:
            best = S.matrix[w][world]
    return float(best)


def oracle_conditional(q, p, E, S: SimilarityRelation, norm, mode: str) -> float:
    """Grid-residuum version of the tightest conditional necessity (``min``) or possibility (``max``)."""
    terms = [oracle_residuum(norm, _closeness(q, w, S), _closeness(p, w, S)) for w in _members(E)]
    return min(terms) if mode == "necessity" else max(terms)


def oracle_gmp_bound(partition, q, E, S: SimilarityRelation, norm, mode: str) -> float:
    """The GMP value with tightest tables, recomputed from first principles."""
    t = _norm(norm)
    best = 0.0
    for block in partition:
        if mode == "necessity":
            prior = oracle_implication(block, E, S)
        else:
            prior = oracle_consistence(block, E, S)
        cond = oracle_conditional(q, block, E, S, norm, mode)
        best = max(best, t(cond, prior))
    return best


def two_valued_modus_ponens(partition, q, E, mode: str) -> float:
    """Classical reading of the GMP with crisp tables.

    Necessity: some block contains all evidence and the rule ``block -> q``
    holds on every evidence world. Possibility: some block meets the
    evidence and the rule holds on at least one evidence world.
    """
    ev = set(_members(E))
    target = set(_members(q))
    for block in partition:
        b = set(_members(block))
        rule = [w not in b or w in target for w in ev]
        if mode == "necessity" and ev <= b and all(rule):
            return 1.0
        if mode == "possibility" and ev & b and any(rule):
            return 1.0
    return 0.0


def random_matrix(rng: np.random.Generator, n: int, high: float = 0.95) -> np.ndarray:
    """Symmetric, reflexive, off-diagonal entries uniform in ``[0, high]``."""
    upper = np.triu(rng.uniform(0.0, high, size=(n, n)), 1)
    return upper + upper.T + np.eye(n)


def random_valid_model(seed: int, n: int, norm) -> tuple[Universe, SimilarityRelation]:
    """Random similarity relation for ``norm``: a random matrix closed under max-T composition."""
    rng = np.random.default_rng(seed)
    universe = Universe.of_size(n)
    S = transitive_closure(random_matrix(rng, n), norm, universe)
    return universe, S
