"""Naive reference implementations for cross-checking the optimized paths.

Everything here enumerates the full subset lattice and shares no traversal
code with the main modules.  That makes these functions slow on purpose;
they are capped at small spaces and exist so that tests can compare two
independently written answers.
"""

from __future__ import annotations

from typing import Sequence

from foresight.belief import MassFunction
from foresight.decisions import UtilityTable
from foresight.errors import (
    EmptySubsetError,
    ProfileLengthMismatchError,
    SpaceTooLargeError,
)
from foresight.events import EventSpace, Subset, Value

ORACLE_ATOM_CAP = 12


def _require_small(n: int) -> None:
    if n > ORACLE_ATOM_CAP:
        raise SpaceTooLargeError(
            f"oracle enumeration is capped at {ORACLE_ATOM_CAP} atoms, got {n}"
        )


def _focal_by_mask(mf: MassFunction) -> dict[int, float]:
    table: dict[int, float] = {}
    for subset, mass in mf.focal.items():
        mask = 0
        for i in subset.indices:
            mask |= 1 << i
        table[mask] = table.get(mask, 0.0) + mass
    return table


def oracle_commonality(mf: MassFunction, subset: Subset) -> float:
    """Walk all 2**n subsets, keeping the masses of supersets of ``subset``."""
    n = mf.space.n
    _require_small(n)
    if not subset:
        raise EmptySubsetError("commonality is defined on nonempty subsets")
    focal = _focal_by_mask(mf)
    wanted = 0
    for i in subset.indices:
        wanted |= 1 << i
    total = 0.0
    for mask in range(1 << n):
        if mask & wanted == wanted:
            total += focal.get(mask, 0.0)
    return total


def oracle_normalized_commonality(mf: MassFunction, subset: Subset) -> float:
    """Like :func:`oracle_commonality` with each mass divided by set size."""
    n = mf.space.n
    _require_small(n)
    if not subset:
        raise EmptySubsetError("normalized commonality is defined on nonempty subsets")
    focal = _focal_by_mask(mf)
    wanted = 0
    for i in subset.indices:
        wanted |= 1 << i
    total = 0.0
    for mask in range(1 << n):
        if mask & wanted == wanted and mask in focal:
            total += focal[mask] / mask.bit_count()
    return total


def oracle_label(space: EventSpace, profile: Sequence[Value]) -> Subset:
    """Label by literally enumerating every nonempty event in the lattice.

    Each subset's own characteristics are the importance-ordered prefix its
    members agree on.  At each depth r (from m down), every atomic or
    compound event whose first r characteristics equal the profile's first r
    values is collected, and their union is the label; the depth relaxes
    until the union is nonempty.
    """
    n, m = space.n, space.m
    _require_small(n)
    profile = tuple(profile)
    if len(profile) != m:
        raise ProfileLengthMismatchError(
            f"profile has {len(profile)} values, schema has {m}"
        )
    order = space.schema.importance_order
    events: list[tuple[list[int], int, list[Value]]] = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        first = space.atoms[members[0]].profile
        shared: list[Value] = []
        for k in order:
            if all(space.atoms[i].profile[k] == first[k] for i in members):
                shared.append(first[k])
            else:
                break
        events.append((members, len(shared), shared))
    for r in range(m, 0, -1):
        union: set[int] = set()
        for members, prefix_len, shared in events:
            if prefix_len >= r and all(
                shared[t] == profile[order[t]] for t in range(r)
            ):
                union.update(members)
        if union:
            return Subset(union)
    return Subset.empty()


def oracle_expected_utility(
    mf: MassFunction, utilities: UtilityTable, decision: str
) -> float:
    """Direct focal-element summation, no shared helpers."""
    _require_small(mf.space.n)
    total = 0.0
    for subset, mass in mf.focal.items():
        member_sum = 0.0
        for i in subset.indices:
            member_sum += utilities.utility(decision, mf.space.atoms[i].id)
        total += mass * (member_sum / len(subset.indices))
    return total
