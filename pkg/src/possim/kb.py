"""The knowledge base: universe, similarity, named propositions, evidence, partitions and tables."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import similarity as sim
from .distributions import DistributionTable, resolve_table, validate_table
from .errors import PartitionError, PossimError, SimilarityError, UnresolvedNameError
from .tnorm import EPS, TNorm
from .worlds import EvidentialSet, Partition, Proposition, Universe, validate_partition


@dataclass
class KnowledgeBase:
    """A resolved knowledge base.

    ``matrix`` is stored as declared; :meth:`similarity` validates it
    against ``norm``. Partitions are stored as lists of proposition names
    and validated on demand by :meth:`partition`.
    """

    universe: Universe
    matrix: np.ndarray
    norm: TNorm = TNorm.MIN
    propositions: dict[str, Proposition] = field(default_factory=dict)
    evidence: EvidentialSet | None = None
    partitions: dict[str, tuple[str, ...]] = field(default_factory=dict)
    tables: dict[str, DistributionTable] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.matrix = np.array(self.matrix, dtype=float)
        self.matrix.setflags(write=False)
        self.norm = TNorm.parse(self.norm)
        if self.evidence is None:
            self.evidence = EvidentialSet(self.universe, np.ones(len(self.universe), dtype=bool))
        else:
            self.evidence = EvidentialSet.of(self.evidence)

    def prop(self, name: str) -> Proposition:
        try:
            return self.propositions[name]
        except KeyError:
            raise UnresolvedNameError(name) from None

    def similarity(self, eps: float = EPS) -> sim.SimilarityRelation:
        """The validated similarity relation; raises :class:`SimilarityError` if the matrix is not one."""
        key = ("sim", eps)
        if key not in self._cache:
            try:
                self._cache[key] = sim.validate(self.matrix, self.norm, self.universe, eps)
            except SimilarityError as exc:
                self._cache[key] = exc
        out = self._cache[key]
        if isinstance(out, SimilarityError):
            raise out
        return out

    def partition(self, name: str) -> Partition:
        try:
            names = self.partitions[name]
        except KeyError:
            raise UnresolvedNameError(name, "partition") from None
        return validate_partition([self.prop(n) for n in names], name)

    def table(self, name: str) -> DistributionTable:
        try:
            return self.tables[name]
        except KeyError:
            raise UnresolvedNameError(name, "table") from None

    def with_norm(self, norm: TNorm | str) -> "KnowledgeBase":
        return replace(self, norm=TNorm.parse(norm))

    def closed(self, eps: float = EPS) -> tuple["KnowledgeBase", int]:
        """A copy whose matrix is the transitive closure, and how many entries were raised."""
        S = sim.transitive_closure(self.matrix, self.norm, self.universe, eps)
        raised = int(np.count_nonzero(np.triu(S.matrix > self.matrix + eps)))
        return replace(self, matrix=S.matrix), raised

    def __eq__(self, other) -> bool:
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return (
            self.universe == other.universe
            and self.norm is other.norm
            and np.array_equal(self.matrix, other.matrix)
            and self.propositions == other.propositions
            and self.evidence == other.evidence
            and self.partitions == other.partitions
            and self.tables == other.tables
        )


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    messages: tuple[str, ...] = ()


def diagnose(kb: KnowledgeBase, eps: float = EPS) -> list[Check]:
    """Run every semantic check: similarity properties, partitions and table bounds."""
    out = []
    violations = {v.prop: v for v in sim.check(kb.matrix, kb.norm, eps)}
    labels = kb.universe.worlds
    for prop in sim.PROPERTIES:
        name = f"transitivity ({kb.norm})" if prop == "transitivity" else prop
        v = violations.get(prop)
        out.append(Check(name, v is None, () if v is None else (v.describe(labels),)))
    for pname in sorted(kb.partitions):
        try:
            kb.partition(pname)
            out.append(Check(f"partition {pname}", True))
        except (PartitionError, UnresolvedNameError) as exc:
            out.append(Check(f"partition {pname}", False, (str(exc),)))
    similarity_ok = not violations
    for tname in sorted(kb.tables):
        table = kb.tables[tname]
        label = f"{table.kind.value} {tname}"
        try:
            resolve_table(table, kb.propositions)
        except UnresolvedNameError as exc:
            out.append(Check(label, False, (str(exc),)))
            continue
        if not similarity_ok:
            out.append(Check(label, False, ("not checked: the similarity relation is invalid",)))
            continue
        try:
            bad = validate_table(table, kb, eps)
        except PossimError as exc:
            out.append(Check(label, False, (str(exc),)))
            continue
        out.append(Check(label, not bad, tuple(v.describe(table) for v in bad)))
    return out
