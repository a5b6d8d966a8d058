"""Finite universes of possible worlds and crisp propositions over them."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyEvidenceError,
    FormulaSyntaxError,
    PartitionError,
    UniverseMismatchError,
    UnknownAtomError,
)

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Universe:
    """Ordered, non-empty set of world labels.

    When ``atoms`` is given, ``assignments[i][k]`` is the truth value of
    ``atoms[k]`` in ``worlds[i]`` and no two worlds share an assignment.
    """

    worlds: tuple[str, ...]
    atoms: tuple[str, ...] = ()
    assignments: tuple[tuple[bool, ...], ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "assignments", tuple(tuple(bool(v) for v in row) for row in self.assignments))
        if not self.worlds:
            raise ValueError("a universe needs at least one world")
        index = {}
        for i, w in enumerate(self.worlds):
            if w in index:
                raise ValueError(f"duplicate world label {w!r}")
            index[w] = i
        object.__setattr__(self, "_index", index)
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("duplicate atom name")
        if self.atoms:
            if len(self.assignments) != len(self.worlds):
                raise ValueError("every world needs a truth assignment")
            seen = {}
            for w, row in zip(self.worlds, self.assignments):
                if len(row) != len(self.atoms):
                    raise ValueError(f"world {w!r} does not assign every atom")
                if row in seen:
                    raise ValueError(f"worlds {seen[row]!r} and {w!r} have identical assignments")
                seen[row] = w
        elif self.assignments:
            raise ValueError("assignments given without atoms")

    @classmethod
    def from_atoms(cls, atoms: Sequence[str], prefix: str = "w") -> "Universe":
        """All 2**k assignments of ``atoms``; world ``i`` encodes ``i`` in binary, first atom most significant."""
        atoms = tuple(atoms)
        rows = list(itertools.product((False, True), repeat=len(atoms)))
        return cls(tuple(f"{prefix}{i}" for i in range(len(rows))), atoms, tuple(rows))

    @classmethod
    def of_size(cls, n: int, prefix: str = "w") -> "Universe":
        return cls(tuple(f"{prefix}{i}" for i in range(n)))

    def __len__(self) -> int:
        return len(self.worlds)

    def index(self, world: str) -> int:
        try:
            return self._index[world]
        except KeyError:
            raise KeyError(f"unknown world {world!r}") from None

    def __contains__(self, world) -> bool:
        return world in self._index

    def prop(self, worlds: Iterable[str] = (), name: str | None = None) -> "Proposition":
        members = np.zeros(len(self), dtype=bool)
        for w in worlds:
            members[self.index(w)] = True
        return Proposition(self, members, name)

    def full(self, name: str | None = None) -> "Proposition":
        return Proposition(self, np.ones(len(self), dtype=bool), name)

    def empty(self, name: str | None = None) -> "Proposition":
        return Proposition(self, np.zeros(len(self), dtype=bool), name)

    def singleton(self, world: int | str) -> "Proposition":
        i = world if isinstance(world, (int, np.integer)) else self.index(world)
        members = np.zeros(len(self), dtype=bool)
        members[i] = True
        return Proposition(self, members)

    def all_propositions(self) -> list["Proposition"]:
        """Every subset of worlds, indexed by bitmask (bit ``i`` is world ``i``)."""
        n = len(self)
        bits = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
        return [Proposition(self, row.astype(bool)) for row in bits]

    def truth(self, world: int, atom: str) -> bool:
        try:
            k = self.atoms.index(atom)
        except ValueError:
            raise UnknownAtomError(atom) from None
        return self.assignments[world][k]


class Proposition:
    """A crisp set of worlds, stored as a read-only boolean membership array.

    Equality and hashing ignore ``name``.
    """

    __slots__ = ("universe", "members", "name")

    def __init__(self, universe: Universe, members, name: str | None = None):
        members = np.array(members, dtype=bool)
        if members.shape != (len(universe),):
            raise ValueError(f"membership array has shape {members.shape}, expected ({len(universe)},)")
        members.setflags(write=False)
        self.universe = universe
        self.members = members
        self.name = name

    def _check(self, other: "Proposition") -> None:
        if other.universe is not self.universe and other.universe != self.universe:
            raise UniverseMismatchError("propositions are defined over different universes")

    def union(self, other: "Proposition") -> "Proposition":
        self._check(other)
        return Proposition(self.universe, self.members | other.members)

    def intersection(self, other: "Proposition") -> "Proposition":
        self._check(other)
        return Proposition(self.universe, self.members & other.members)

    def complement(self) -> "Proposition":
        return Proposition(self.universe, ~self.members)

    __or__ = union
    __and__ = intersection
    __invert__ = complement

    def issubset(self, other: "Proposition") -> bool:
        self._check(other)
        return not bool(np.any(self.members & ~other.members))

    __le__ = issubset

    def renamed(self, name: str | None) -> "Proposition":
        return Proposition(self.universe, self.members, name)

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    @property
    def labels(self) -> list[str]:
        return [self.universe.worlds[i] for i in self.indices]

    def is_empty(self) -> bool:
        return not self.members.any()

    def __bool__(self) -> bool:
        return bool(self.members.any())

    def __len__(self) -> int:
        return int(self.members.sum())

    def __iter__(self):
        return iter(self.indices.tolist())

    def __contains__(self, world) -> bool:
        i = world if isinstance(world, (int, np.integer)) else self.universe.index(world)
        return bool(self.members[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Proposition):
            return NotImplemented
        return self.universe == other.universe and bool(np.array_equal(self.members, other.members))

    def __hash__(self) -> int:
        return hash((self.universe, self.members.tobytes()))

    def __repr__(self) -> str:
        label = f"{self.name}=" if self.name else ""
        return f"Proposition({label}{{{', '.join(self.labels)}}})"

    def format(self) -> str:
        return "{" + ", ".join(self.labels) + "}"


class EvidentialSet(Proposition):
    """The worlds consistent with the available evidence; never empty."""

    __slots__ = ()

    def __init__(self, universe: Universe, members, name: str | None = None):
        super().__init__(universe, members, name)
        if not self.members.any():
            raise EmptyEvidenceError("the evidential set is empty (contradictory evidence)")

    @classmethod
    def of(cls, prop: Proposition) -> "EvidentialSet":
        if isinstance(prop, EvidentialSet):
            return prop
        return cls(prop.universe, prop.members, prop.name)


@dataclass(frozen=True)
class Partition:
    """Pairwise disjoint, non-empty blocks covering the universe."""

    blocks: tuple[Proposition, ...]
    name: str | None = None

    @property
    def universe(self) -> Universe:
        return self.blocks[0].universe

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, world: int) -> Proposition:
        for b in self.blocks:
            if b.members[world]:
                return b
        raise AssertionError("validated partition does not cover a world")


def block_label(block: Proposition, i: int) -> str:
    return block.name if block.name else f"#{i}"


def validate_partition(blocks: Sequence[Proposition], name: str | None = None) -> Partition:
    """Check that ``blocks`` form a partition; raise :class:`PartitionError` otherwise."""
    blocks = tuple(blocks)
    if not blocks:
        raise PartitionError("empty", "a partition needs at least one block")
    universe = blocks[0].universe
    for b in blocks[1:]:
        blocks[0]._check(b)
    for i, b in enumerate(blocks):
        if b.is_empty():
            label = block_label(b, i)
            raise PartitionError("empty", f"block {label} is empty", (label,))
    owner = np.full(len(universe), -1)
    for i, b in enumerate(blocks):
        clash = np.flatnonzero(b.members & (owner >= 0))
        if clash.size:
            w = int(clash[0])
            first, second = block_label(blocks[owner[w]], owner[w]), block_label(b, i)
            raise PartitionError(
                "overlap",
                f"blocks {first} and {second} overlap at world {universe.worlds[w]}",
                (first, second),
                universe.worlds[w],
            )
        owner[b.members] = i
    missing = np.flatnonzero(owner < 0)
    if missing.size:
        w = universe.worlds[int(missing[0])]
        raise PartitionError("coverage", f"world {w} is not covered by any block", (), w)
    return Partition(blocks, name)


def set_partitions(n: int):
    """Yield every partition of ``range(n)`` as a list of index lists."""
    if n == 0:
        yield []
        return
    for smaller in set_partitions(n - 1):
        for i in range(len(smaller)):
            yield smaller[:i] + [smaller[i] + [n - 1]] + smaller[i + 1:]
        yield smaller + [[n - 1]]


# --- propositional formulas over atoms --------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str
    offset: int = 0


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


_FORMULA_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([&|!()]))")


def parse_formula(text: str):
    """Parse ``text`` with ``!`` binding tighter than ``&``, which binds tighter than ``|``.

    ``true`` and ``false`` are constants; any other identifier is an atom.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _FORMULA_TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = "id" if m.group(1) else m.group(2)
        tokens.append((kind, m.group(1) or m.group(2), m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take(kind):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            what = "end of formula" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind!r} but found {what}", tok[2])
        i += 1
        return tok

    def disj():
        node = conj()
        while peek()[0] == "|":
            take("|")
            node = Or(node, conj())
        return node

    def conj():
        node = unary()
        while peek()[0] == "&":
            take("&")
            node = And(node, unary())
        return node

    def unary():
        kind, value, off = peek()
        if kind == "!":
            take("!")
            return Not(unary())
        if kind == "(":
            take("(")
            node = disj()
            take(")")
            return node
        if kind == "id":
            take("id")
            if value in ("true", "false"):
                return Const(value == "true")
            return Atom(value, off)
        what = "end of formula" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"expected an atom, '!' or '(' but found {what}", off)

    node = disj()
    take("end")
    return node


def _eval(node, universe: Universe, columns: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(node, Atom):
        if node.name not in columns:
            raise UnknownAtomError(node.name, node.offset)
        return columns[node.name]
    if isinstance(node, Const):
        return np.full(len(universe), node.value)
    if isinstance(node, Not):
        return ~_eval(node.arg, universe, columns)
    if isinstance(node, And):
        return _eval(node.left, universe, columns) & _eval(node.right, universe, columns)
    if isinstance(node, Or):
        return _eval(node.left, universe, columns) | _eval(node.right, universe, columns)
    raise TypeError(f"not a formula node: {node!r}")


def evaluate_formula(universe: Universe, formula, name: str | None = None) -> Proposition:
    """Return the worlds of ``universe`` whose assignment satisfies ``formula``.

    ``formula`` is either source text or a tree from :func:`parse_formula`.
    """
    if isinstance(formula, str):
        formula = parse_formula(formula)
    table = np.array(universe.assignments, dtype=bool).reshape(len(universe), len(universe.atoms))
    columns = {a: table[:, k] for k, a in enumerate(universe.atoms)}
    return Proposition(universe, _eval(formula, universe, columns), name)
