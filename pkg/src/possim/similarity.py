"""Similarity relations between possible worlds.

A similarity relation is a square matrix ``S`` of degrees that is
reflexive, symmetric, strictly below 1 off the diagonal, and transitive with
respect to a t-norm ``T``::

    S[i, k] >= T(S[i, j], S[j, k])   for all i, j, k
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SimilarityError, UniverseMismatchError
from .tnorm import EPS, TNorm
from .worlds import Proposition, Universe

PROPERTIES = ("range", "reflexivity", "discernibility", "symmetry", "transitivity")


@dataclass(frozen=True)
class Violation:
    """One failed property with its first witness (world indices) and a count of offenders."""

    prop: str
    witness: tuple[int, ...]
    detail: str
    count: int = 1

    def describe(self, labels=None) -> str:
        names = [labels[i] for i in self.witness] if labels is not None else list(self.witness)
        return f"{self.prop}: {self.detail} (witness {tuple(names)}, {self.count} offending)"


def _as_matrix(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"similarity matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("similarity matrix contains non-finite values")
    return m


def compose(a: np.ndarray, b: np.ndarray, norm: TNorm) -> np.ndarray:
    """Max-T composition: ``out[i, k] = max_j T(a[i, j], b[j, k])``."""
    return norm.apply(a[:, :, None], b[None, :, :]).max(axis=1)


def transitivity_defects(m: np.ndarray, norm: TNorm, eps: float = EPS) -> np.ndarray:
    """Indices ``(i, j, k)`` with ``m[i, k] < T(m[i, j], m[j, k]) - eps``, in lexicographic order."""
    bound = norm.apply(m[:, :, None], m[None, :, :])  # [i, j, k]
    return np.argwhere(m[:, None, :] < bound - eps)


def check(matrix, norm: TNorm | str, eps: float = EPS) -> list[Violation]:
    """Return every violated similarity property, one :class:`Violation` each."""
    norm = TNorm.parse(norm)
    m = _as_matrix(matrix)
    n = m.shape[0]
    out = []

    bad = np.argwhere((m < -eps) | (m > 1 + eps))
    if bad.size:
        i, j = map(int, bad[0])
        out.append(Violation("range", (i, j), f"S = {m[i, j]:g} is outside [0, 1]", len(bad)))

    diag = np.flatnonzero(np.abs(np.diag(m) - 1.0) > eps)
    if diag.size:
        i = int(diag[0])
        out.append(Violation("reflexivity", (i, i), f"S = {m[i, i]:g}, expected 1", diag.size))

    off = ~np.eye(n, dtype=bool)
    bad = np.argwhere(off & (m > 1.0 - eps))
    if bad.size:
        i, j = map(int, bad[0])
        out.append(Violation("discernibility", (i, j), f"S = {m[i, j]:g} between distinct worlds", len(bad)))

    bad = np.argwhere(np.triu(np.abs(m - m.T) > eps))
    if bad.size:
        i, j = map(int, bad[0])
        out.append(Violation("symmetry", (i, j), f"S = {m[i, j]:g} but reversed S = {m[j, i]:g}", len(bad)))

    bad = transitivity_defects(m, norm, eps)
    if bad.size:
        i, j, k = map(int, bad[0])
        bound = norm.apply(m[i, j], m[j, k])
        out.append(Violation(
            "transitivity", (i, j, k),
            f"S(w, w'') = {m[i, k]:g} < {norm}(S(w, w') = {m[i, j]:g}, S(w', w'') = {m[j, k]:g}) = {bound:g}",
            len(bad),
        ))
    return out


class SimilarityRelation:
    """A validated similarity matrix over a universe, tied to the t-norm it was checked against.

    Build instances with :func:`validate` or :func:`transitive_closure`.
    """

    __slots__ = ("universe", "matrix", "norm")

    def __init__(self, universe: Universe, matrix: np.ndarray, norm: TNorm):
        matrix = np.array(matrix, dtype=float)
        matrix.setflags(write=False)
        self.universe = universe
        self.matrix = matrix
        self.norm = norm

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, w, v) -> float:
        i = w if isinstance(w, (int, np.integer)) else self.universe.index(w)
        j = v if isinstance(v, (int, np.integer)) else self.universe.index(v)
        return float(self.matrix[i, j])

    def check_universe(self, *props: Proposition) -> None:
        for p in props:
            if p.universe is not self.universe and p.universe != self.universe:
                raise UniverseMismatchError("proposition and similarity relation use different universes")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimilarityRelation):
            return NotImplemented
        return (self.universe == other.universe and self.norm is other.norm
                and bool(np.array_equal(self.matrix, other.matrix)))

    __hash__ = None

    def __repr__(self) -> str:
        return f"SimilarityRelation(n={len(self)}, norm={self.norm})"


def validate(matrix, norm: TNorm | str = TNorm.MIN, universe: Universe | None = None,
             eps: float = EPS) -> SimilarityRelation:
    """Validate ``matrix`` as a similarity relation or raise :class:`SimilarityError`."""
    norm = TNorm.parse(norm)
    m = _as_matrix(matrix)
    if universe is None:
        universe = Universe.of_size(m.shape[0])
    elif len(universe) != m.shape[0]:
        raise ValueError(f"matrix is {m.shape[0]}x{m.shape[0]} but the universe has {len(universe)} worlds")
    violations = check(m, norm, eps)
    if violations:
        raise SimilarityError(violations, universe.worlds)
    return SimilarityRelation(universe, np.clip(m, 0.0, 1.0), norm)


def identity(universe: Universe | int, norm: TNorm | str = TNorm.MIN) -> SimilarityRelation:
    """The crisp similarity: 1 on the diagonal, 0 elsewhere."""
    if isinstance(universe, int):
        universe = Universe.of_size(universe)
    return SimilarityRelation(universe, np.eye(len(universe)), TNorm.parse(norm))


def alpha_accessible(S: SimilarityRelation, world, alpha: float, eps: float = EPS) -> Proposition:
    """Worlds ``v`` with ``S(world, v) >= alpha`` (up to ``eps``)."""
    i = world if isinstance(world, (int, np.integer)) else S.universe.index(world)
    return Proposition(S.universe, S.matrix[i] >= alpha - eps)


def distance_view(S: SimilarityRelation) -> np.ndarray:
    """The dual distance ``1 - S``."""
    return 1.0 - S.matrix


def closure_matrix(matrix, norm: TNorm | str, eps: float = EPS) -> tuple[np.ndarray, int]:
    """Smallest T-transitive matrix above ``matrix``, plus the number of compositions used.

    Repeated squaring ``R <- max(R, R∘R)``; since ``R`` is reflexive the
    composition already dominates ``R``. The count includes the final
    composition that confirms the fixpoint.
    """
    norm = TNorm.parse(norm)
    r = _as_matrix(matrix)
    n = r.shape[0]
    cap = max(n - 1, 1)
    steps = 0
    while n > 1:
        nxt = np.maximum(r, compose(r, r, norm))
        steps += 1
        if np.all(nxt <= r + eps):
            break
        r = nxt
        # Repeated squaring needs about log2(n) compositions; hitting n-1 means a defect.
        assert steps < cap, "closure did not reach a fixpoint within n-1 compositions"
    return r, steps


def transitive_closure(matrix, norm: TNorm | str = TNorm.MIN, universe: Universe | None = None,
                       eps: float = EPS) -> SimilarityRelation:
    """Raise entries of ``matrix`` until it is T-transitive.

    The input must already be reflexive, symmetric and strictly below 1 off
    the diagonal: closure cannot repair those, so their violations raise
    :class:`SimilarityError`.
    """
    norm = TNorm.parse(norm)
    m = _as_matrix(matrix)
    fatal = [v for v in check(m, norm, eps) if v.prop != "transitivity"]
    if fatal:
        raise SimilarityError(fatal, None if universe is None else universe.worlds)
    closed, _ = closure_matrix(np.clip(m, 0.0, 1.0), norm, eps)
    return validate(closed, norm, universe, eps)
