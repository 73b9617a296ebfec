"""Foreseen-event spaces: characteristics, atoms, and atom subsets.

An event space is a finite partition of the foreseeable future into atomic
events.  Each atom carries a profile of m categorical characteristic values;
utilities are assumed to depend on an atom only through that profile.  The
characteristics are ordered by importance (how much utility can swing when
only that characteristic varies), and that order drives both prefix matching
and the labelling of unforeseen events.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence

from foresight.errors import (
    EmptySubsetError,
    NoReferenceSweepWarning,
    SchemaError,
    UnknownAtomError,
)

if TYPE_CHECKING:
    from foresight.decisions import UtilityTable

# Characteristic values are exact-match categorical labels.  Integers and
# strings are allowed; floats are not (equality on floats is a trap).
Value = int | str
Profile = tuple[Value, ...]


class Subset:
    """An immutable set of atom positions, canonically sorted.

    Positions index into the owning :class:`EventSpace`'s atom order, so two
    subsets over the same space compare and hash structurally.  The empty
    subset is a legal value (it is the no-match label); operations that
    require members raise :class:`EmptySubsetError` themselves.
    """

    __slots__ = ("indices",)

    indices: tuple[int, ...]

    def __init__(self, indices: Iterable[int] = ()):
        seen = set()
        for i in indices:
            if isinstance(i, bool) or not isinstance(i, int) or i < 0:
                raise ValueError(f"atom positions must be nonnegative ints, got {i!r}")
            seen.add(i)
        object.__setattr__(self, "indices", tuple(sorted(seen)))

    def __setattr__(self, name, value):
        raise AttributeError("Subset is immutable")

    @classmethod
    def _wrap(cls, sorted_unique: tuple[int, ...]) -> "Subset":
        # Trusted fast path: caller guarantees sorted/unique/nonnegative.
        self = object.__new__(cls)
        object.__setattr__(self, "indices", sorted_unique)
        return self

    @classmethod
    def from_mask(cls, mask: int) -> "Subset":
        """Build from a bitmask (bit i set means atom position i)."""
        if mask < 0:
            raise ValueError("mask must be nonnegative")
        ixs = []
        while mask:
            low = mask & -mask
            ixs.append(low.bit_length() - 1)
            mask ^= low
        return cls._wrap(tuple(ixs))

    @classmethod
    def empty(cls) -> "Subset":
        return cls._wrap(())

    def mask(self) -> int:
        """Bitmask form; intended for small spaces (dense lattice work)."""
        m = 0
        for i in self.indices:
            m |= 1 << i
        return m

    def __len__(self) -> int:
        return len(self.indices)

    def __bool__(self) -> bool:
        return bool(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, position: int) -> bool:
        return position in self.indices

    def __eq__(self, other) -> bool:
        return isinstance(other, Subset) and self.indices == other.indices

    def __hash__(self) -> int:
        return hash(self.indices)

    def __repr__(self) -> str:
        return f"Subset({list(self.indices)!r})"

    def union(self, other: "Subset") -> "Subset":
        return Subset._wrap(tuple(sorted(set(self.indices) | set(other.indices))))

    __or__ = union

    def intersection(self, other: "Subset") -> "Subset":
        return Subset._wrap(tuple(sorted(set(self.indices) & set(other.indices))))

    __and__ = intersection

    def intersection_size(self, other: "Subset") -> int:
        return len(set(self.indices) & set(other.indices))

    def issubset(self, other: "Subset") -> bool:
        return set(self.indices) <= set(other.indices)

    def issuperset(self, other: "Subset") -> bool:
        return set(self.indices) >= set(other.indices)

    def complement(self, n: int) -> "Subset":
        members = set(self.indices)
        return Subset._wrap(tuple(i for i in range(n) if i not in members))


@dataclass(frozen=True)
class Characteristic:
    """One categorical attribute: name, finite range, and reference level."""

    name: str
    range: frozenset[Value]
    reference: Value

    def __post_init__(self):
        if not self.range:
            raise SchemaError(f"characteristic {self.name!r} has an empty range")
        for v in self.range:
            _check_value(self.name, v)
        if self.reference not in self.range:
            raise SchemaError(
                f"reference {self.reference!r} of characteristic {self.name!r} "
                f"is outside its range"
            )


def _check_value(name: str, v: object) -> None:
    # bool is an int subclass; reject it to keep profiles unambiguous.
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError(
            f"characteristic {name!r}: value {v!r} must be an int or str"
        )


@dataclass(frozen=True)
class CharacteristicSchema:
    """The m characteristics plus their importance order (most important first).

    ``importance_order`` holds 0-based positions into ``characteristics``.
    Omitting it means the characteristics are already listed most important
    first.
    """

    characteristics: tuple[Characteristic, ...]
    importance_order: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.characteristics:
            raise SchemaError("a schema needs at least one characteristic")
        names = [c.name for c in self.characteristics]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate characteristic names: {names}")
        m = len(self.characteristics)
        if self.importance_order is None:
            object.__setattr__(self, "importance_order", tuple(range(m)))
        order = tuple(self.importance_order)
        if sorted(order) != list(range(m)):
            raise SchemaError(
                f"importance_order {order} is not a permutation of 0..{m - 1}"
            )
        object.__setattr__(self, "importance_order", order)

    @property
    def m(self) -> int:
        return len(self.characteristics)

    def reference_profile(self) -> Profile:
        return tuple(c.reference for c in self.characteristics)

    def index_of(self, name: str) -> int:
        for i, c in enumerate(self.characteristics):
            if c.name == name:
                return i
        raise SchemaError(f"unknown characteristic {name!r}")


@dataclass(frozen=True)
class Atom:
    """An indivisible foreseen event with its characteristic profile."""

    id: str
    profile: Profile


class EventSpace:
    """The n foreseen atoms over a characteristic schema.

    Construction enforces that each characteristic's declared range equals
    exactly the set of values observed across atoms (the range is defined as
    the values a characteristic assumes on foreseen events).  Use
    :meth:`build` to derive the ranges instead of declaring them.
    """

    __slots__ = ("schema", "atoms", "_index")

    def __init__(self, schema: CharacteristicSchema, atoms: Sequence[Atom]):
        atoms = tuple(atoms)
        if not atoms:
            raise SchemaError("an event space needs at least one atom")
        m = schema.m
        index: dict[str, int] = {}
        observed: list[set[Value]] = [set() for _ in range(m)]
        for pos, atom in enumerate(atoms):
            if atom.id in index:
                raise SchemaError(f"duplicate atom id {atom.id!r}")
            index[atom.id] = pos
            if len(atom.profile) != m:
                raise SchemaError(
                    f"atom {atom.id!r} has {len(atom.profile)} characteristic "
                    f"values, schema has {m}"
                )
            for k, v in enumerate(atom.profile):
                _check_value(schema.characteristics[k].name, v)
                observed[k].add(v)
        for k, c in enumerate(schema.characteristics):
            if observed[k] != set(c.range):
                raise SchemaError(
                    f"characteristic {c.name!r}: declared range "
                    f"{sorted(map(repr, c.range))} differs from values observed "
                    f"across atoms {sorted(map(repr, observed[k]))}"
                )
        self.schema = schema
        self.atoms = atoms
        self._index = index

    @classmethod
    def build(
        cls,
        characteristics: Sequence[tuple[str, Value]],
        atoms: Sequence[tuple[str, Sequence[Value]]],
        importance_order: Sequence[int] | None = None,
    ) -> "EventSpace":
        """Build a space from (name, reference) pairs and (id, profile) pairs.

        Ranges are derived from the atom profiles; references must therefore
        be values some atom actually takes.
        """
        if not characteristics:
            raise SchemaError("a schema needs at least one characteristic")
        m = len(characteristics)
        observed: list[set[Value]] = [set() for _ in range(m)]
        for _, profile in atoms:
            if len(profile) != m:
                continue  # the EventSpace constructor reports this precisely
            for k, v in enumerate(profile):
                observed[k].add(v)
        chars = tuple(
            Characteristic(name, frozenset(observed[k]), reference)
            for k, (name, reference) in enumerate(characteristics)
        )
        order = tuple(importance_order) if importance_order is not None else None
        schema = CharacteristicSchema(chars, order)
        return cls(schema, [Atom(aid, tuple(p)) for aid, p in atoms])

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def m(self) -> int:
        return self.schema.m

    def index_of(self, atom_id: str) -> int:
        try:
            return self._index[atom_id]
        except KeyError:
            raise UnknownAtomError(f"unknown atom id {atom_id!r}") from None

    def subset_of(self, atom_ids: Iterable[str]) -> Subset:
        return Subset(self.index_of(a) for a in atom_ids)

    def ids_of(self, subset: Subset) -> tuple[str, ...]:
        return tuple(self.atoms[i].id for i in subset)

    def full_set(self) -> Subset:
        return Subset._wrap(tuple(range(self.n)))

    def profile_at(self, position: int) -> Profile:
        return self.atoms[position].profile


def rank_characteristics(space: EventSpace, utilities: "UtilityTable") -> tuple[int, ...]:
    """Order characteristic positions by decreasing importance.

    The importance of characteristic j is the max-minus-min spread of
    u(d | E) over every decision d and every atom E whose profile equals the
    reference profile except possibly at position j.  Only assessed atoms
    enter the sweep; a characteristic with no sweep atoms gets importance 0
    and a :class:`NoReferenceSweepWarning`.  Ties break toward the lower
    original position.
    """
    m = space.m
    ref = space.schema.reference_profile()
    spreads: list[float] = []
    for j in range(m):
        sweep = [
            atom
            for atom in space.atoms
            if all(atom.profile[k] == ref[k] for k in range(m) if k != j)
        ]
        if not sweep:
            warnings.warn(
                f"characteristic {space.schema.characteristics[j].name!r}: no atom "
                f"matches the reference profile except at that position; "
                f"importance set to 0",
                NoReferenceSweepWarning,
                stacklevel=2,
            )
            spreads.append(0.0)
            continue
        values = [
            utilities.utility(d, atom.id)
            for d in utilities.decisions
            for atom in sweep
        ]
        spreads.append(max(values) - min(values))
    return tuple(sorted(range(m), key=lambda j: (-spreads[j], j)))


def shared_prefix_length(space: EventSpace, subset: Subset) -> int:
    """Longest importance-ordered prefix on which all member atoms agree.

    Returns m for singletons; 0 when members already differ on the most
    important characteristic.
    """
    if not subset:
        raise EmptySubsetError("shared_prefix_length needs a nonempty subset")
    profiles = [space.atoms[i].profile for i in subset]
    first = profiles[0]
    r = 0
    for k in space.schema.importance_order:
        if all(p[k] == first[k] for p in profiles):
            r += 1
        else:
            break
    return r


def group_atoms_by_profile(space: EventSpace) -> Mapping[Profile, Subset]:
    """Partition atom positions by full characteristic profile.

    Atoms sharing all m values are indistinguishable to any utility that
    depends only on characteristics, so they form one block; an atom with a
    unique profile is its own block.
    """
    blocks: dict[Profile, list[int]] = {}
    for pos, atom in enumerate(space.atoms):
        blocks.setdefault(atom.profile, []).append(pos)
    return {prof: Subset._wrap(tuple(ixs)) for prof, ixs in blocks.items()}
