"""Labelling of unforeseen events and conditioning of raw assessments.

An unforeseen event enters only through its characteristic profile.  The
labelling rule matches it against the foreseen atoms on the r most important
characteristics, with r starting at m and relaxing one step at a time; the
label is the set of all atoms matching at the deepest r that matches anything
at all, or the empty set (the no-match label) when even the most important
characteristic matches nothing.

A raw assessment distributes subjective probability over such labels plus
the no-match label.  Since utilities are constant on no-match, decisions are
evaluated conditional on its non-occurrence, which turns the labelled
probabilities into a basic probability assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, isfinite
from typing import Iterable, Mapping, Sequence

from foresight.belief import EPS_NORM, MassFunction, make_mass
from foresight.errors import (
    AllMassUnforeseeableError,
    NegativeMassError,
    NotNormalizedError,
    ProfileLengthMismatchError,
    SchemaError,
)
from foresight.events import EventSpace, Profile, Subset, Value, group_atoms_by_profile

# An unforeseen event's profile: m values aligned with the schema positions.
# Values may fall outside every foreseen range; they then simply never match.
UnforeseenProfile = tuple[Value, ...]


@dataclass(frozen=True)
class LabelResult:
    """A label plus the match depth r at which it was found (0 for no match)."""

    subset: Subset
    depth: int

    @property
    def is_unforeseeable(self) -> bool:
        return not self.subset


def label_with_depth(space: EventSpace, profile: Sequence[Value]) -> LabelResult:
    """Label an unforeseen profile and report the match depth achieved.

    For r = m down to 1, the candidate set is every atom agreeing with the
    profile on the r most important characteristics; the first nonempty
    candidate set wins.  Any atomic or compound event sharing those first r
    characteristics consists entirely of such atoms, so their union is
    exactly this set.
    """
    profile = tuple(profile)
    m = space.m
    if len(profile) != m:
        raise ProfileLengthMismatchError(
            f"profile has {len(profile)} values, schema has {m}"
        )
    for k, v in enumerate(profile):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise SchemaError(
                f"profile value {v!r} at position {k} must be an int or str"
            )
    order = space.schema.importance_order
    best = 0
    depths = []
    for atom in space.atoms:
        d = 0
        for k in order:
            if atom.profile[k] != profile[k]:
                break
            d += 1
        depths.append(d)
        if d > best:
            best = d
    if best == 0:
        return LabelResult(Subset.empty(), 0)
    members = tuple(i for i, d in enumerate(depths) if d >= best)
    return LabelResult(Subset._wrap(members), best)


def label_unforeseen(space: EventSpace, profile: Sequence[Value]) -> Subset:
    """The subset of foreseen atoms standing in for an unforeseen profile.

    Empty result means no atom matches even on the most important
    characteristic (the no-match label).
    """
    return label_with_depth(space, profile).subset


def relabel_atomic(space: EventSpace, atom_id: str) -> Subset:
    """The full-profile block an atom belongs to.

    A singleton when the atom's profile is unique; otherwise the set of all
    atoms sharing every characteristic value with it.
    """
    position = space.index_of(atom_id)
    return group_atoms_by_profile(space)[space.atoms[position].profile]


class RawAssessment:
    """Subjective probabilities on labels, before conditioning.

    ``entries`` may repeat subsets (merged by summation) and may include the
    empty subset, whose probability folds into ``empty_probability``.  The
    grand total must be one.
    """

    __slots__ = ("space", "labelled", "empty_probability")

    def __init__(
        self,
        space: EventSpace,
        entries: Iterable[tuple[Subset, float]] | Mapping[Subset, float],
        empty_probability: float = 0.0,
    ):
        if isinstance(entries, Mapping):
            entries = entries.items()
        if not isfinite(empty_probability) or empty_probability < 0:
            raise NegativeMassError(
                f"no-match probability {empty_probability!r} is not a nonnegative real"
            )
        labelled: dict[Subset, float] = {}
        n = space.n
        for subset, p in entries:
            if not isinstance(subset, Subset):
                raise TypeError(f"entry key {subset!r} is not a Subset")
            if not isfinite(p) or p < 0:
                raise NegativeMassError(
                    f"probability {p!r} on {subset!r} is not a nonnegative real"
                )
            if not subset:
                empty_probability += p
                continue
            if subset.indices[-1] >= n:
                raise SchemaError(
                    f"subset {subset!r} cites atom position {subset.indices[-1]} "
                    f"but the space has {n} atoms"
                )
            labelled[subset] = labelled.get(subset, 0.0) + p
        total = fsum(labelled.values()) + empty_probability
        if abs(total - 1.0) > EPS_NORM:
            raise NotNormalizedError(
                f"assessment probabilities sum to {total!r}, expected 1"
            )
        self.space = space
        self.labelled = labelled
        self.empty_probability = empty_probability

    def __repr__(self) -> str:
        return (
            f"RawAssessment({len(self.labelled)} labels, "
            f"no-match={self.empty_probability!r})"
        )


def condition_on_foreseeable(raw: RawAssessment) -> MassFunction:
    """Divide the labelled probabilities by the chance something matches.

    The result is the basic probability assignment used everywhere
    downstream.  When ``empty_probability`` is zero this is the identity on
    the labelled map.
    """
    if raw.empty_probability >= 1.0 - EPS_NORM:
        raise AllMassUnforeseeableError(
            "the whole assessment sits on the no-match label; conditioning "
            "on a match is undefined"
        )
    # The labelled total equals 1 - empty_probability within EPS_NORM by the
    # assessment invariant; dividing by the actual total keeps the result
    # exactly normalized.
    denominator = fsum(raw.labelled.values())
    return make_mass(
        raw.space,
        [(s, p / denominator) for s, p in raw.labelled.items() if p > 0],
    )
