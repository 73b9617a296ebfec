"""Mass functions on subsets of foreseen atoms and their set functions.

A mass function is a basic probability assignment: nonnegative masses on
nonempty atom subsets that sum to one.  From it we derive Shafer
commonalities, normalized commonalities (each superset's mass split evenly
over its atoms), belief/plausibility bounds, and the additive probability
measure obtained by summing per-atom normalized commonalities.

Per-atom vectors have two interchangeable algorithms: a sparse pass over the
focal elements (cost proportional to total membership), and a dense
sum-over-supersets transform on the full subset lattice (cost n * 2**n),
worthwhile when most of the lattice carries mass.
"""

from __future__ import annotations

from itertools import chain
from math import fsum, isfinite
from typing import Iterable, Literal, Mapping

import numpy as np

from foresight import kernels
from foresight.errors import (
    EmptyFocalSetError,
    EmptySubsetError,
    LatticeTooLargeError,
    NegativeMassError,
    NotNormalizedError,
    SchemaError,
)
from foresight.events import EventSpace, Subset

# Masses/probabilities must sum to 1 within EPS_NORM; EPS_NUM is the slack
# allowed on algebraic identities between two float computations.
EPS_NORM = 1e-9
EPS_NUM = 1e-12

# The dense lattice path allocates 2**n doubles; refuse beyond this.
DENSE_LATTICE_CAP = 24


class MassFunction:
    """An immutable basic probability assignment over one event space.

    ``focal`` maps nonempty :class:`Subset` keys to positive masses summing
    to one (within ``EPS_NORM``).  Build instances through
    :func:`make_mass`, which merges duplicate subsets and drops zeros.
    """

    __slots__ = ("space", "focal", "_flat")

    def __init__(self, space: EventSpace, focal: Mapping[Subset, float]):
        n = space.n
        for subset, mass in focal.items():
            if not isinstance(subset, Subset):
                raise TypeError(f"focal key {subset!r} is not a Subset")
            if not subset:
                raise EmptyFocalSetError("the empty subset cannot carry mass")
            if subset.indices[-1] >= n:
                raise SchemaError(
                    f"subset {subset!r} cites atom position {subset.indices[-1]} "
                    f"but the space has {n} atoms"
                )
            if not isfinite(mass) or mass < 0:
                raise NegativeMassError(
                    f"mass {mass!r} on {subset!r} is not a nonnegative real"
                )
        total = fsum(focal.values())
        if abs(total - 1.0) > EPS_NORM:
            raise NotNormalizedError(f"masses sum to {total!r}, expected 1")
        self.space = space
        self.focal = dict(focal)
        self._flat = None

    def __len__(self) -> int:
        return len(self.focal)

    def __repr__(self) -> str:
        return f"MassFunction({len(self.focal)} focal elements over {self.space.n} atoms)"

    def flattened(self):
        """Concatenated member positions, group offsets, masses, and sizes.

        Cached numpy form of the focal elements, shared by the sparse and
        dense per-atom algorithms.
        """
        if self._flat is None:
            k = len(self.focal)
            sizes = np.empty(k, dtype=np.int64)
            masses = np.empty(k, dtype=np.float64)
            for pos, (subset, mass) in enumerate(self.focal.items()):
                sizes[pos] = len(subset)
                masses[pos] = mass
            offsets = np.zeros(k + 1, dtype=np.int64)
            np.cumsum(sizes, out=offsets[1:])
            indices = np.fromiter(
                chain.from_iterable(s.indices for s in self.focal),
                dtype=np.int64,
                count=int(offsets[-1]),
            )
            self._flat = (indices, offsets, masses, sizes)
        return self._flat


def make_mass(space: EventSpace, entries: Iterable[tuple[Subset, float]]) -> MassFunction:
    """Validate and assemble a mass function.

    Duplicate subsets are merged by summing their masses (input order must
    not matter), and exact-zero entries are dropped so that every focal
    element carries strictly positive mass.
    """
    merged: dict[Subset, float] = {}
    empty = True
    for subset, mass in entries:
        empty = False
        if not isinstance(subset, Subset):
            raise TypeError(f"entry key {subset!r} is not a Subset")
        if not subset:
            raise EmptyFocalSetError("the empty subset cannot carry mass")
        if not isfinite(mass) or mass < 0:
            raise NegativeMassError(f"mass {mass!r} on {subset!r} is not a nonnegative real")
        merged[subset] = merged.get(subset, 0.0) + mass
    if empty:
        raise EmptyFocalSetError("a mass function needs at least one entry")
    return MassFunction(space, {s: m for s, m in merged.items() if m != 0.0})


class CommonalityVector:
    """Per-atom commonality values, either Shafer or normalized kind.

    Normalized values sum to one over the atoms and act as the probability
    weights in the expected-utility rule; Shafer values carry no sum
    constraint (each is the total mass on sets containing the atom).
    """

    __slots__ = ("space", "values", "kind")

    def __init__(
        self,
        space: EventSpace,
        values,
        kind: Literal["shafer", "normalized"],
    ):
        if kind not in ("shafer", "normalized"):
            raise ValueError(f"unknown commonality kind {kind!r}")
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (space.n,):
            raise ValueError(f"expected {space.n} values, got shape {arr.shape}")
        if arr.min(initial=0.0) < -EPS_NORM or arr.max(initial=0.0) > 1.0 + EPS_NORM:
            raise ValueError(f"commonality values outside [0, 1]: {arr!r}")
        if kind == "normalized":
            total = float(arr.sum())
            if abs(total - 1.0) > EPS_NORM:
                raise NotNormalizedError(
                    f"normalized commonalities sum to {total!r}, expected 1"
                )
        arr.setflags(write=False)
        self.space = space
        self.values = arr
        self.kind = kind

    def value(self, atom_id: str) -> float:
        return float(self.values[self.space.index_of(atom_id)])

    def as_dict(self) -> dict[str, float]:
        return {atom.id: float(v) for atom, v in zip(self.space.atoms, self.values)}

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"CommonalityVector({self.kind}, {self.as_dict()!r})"


def commonality(mf: MassFunction, subset: Subset) -> float:
    """Shafer commonality: total mass on supersets of ``subset``."""
    if not subset:
        raise EmptySubsetError("commonality is defined on nonempty subsets")
    target = set(subset.indices)
    return fsum(m for s, m in mf.focal.items() if target.issubset(s.indices))


def normalized_commonality(mf: MassFunction, subset: Subset) -> float:
    """Superset masses, each divided by the superset's atom count."""
    if not subset:
        raise EmptySubsetError("normalized commonality is defined on nonempty subsets")
    target = set(subset.indices)
    return fsum(
        m / len(s) for s, m in mf.focal.items() if target.issubset(s.indices)
    )


def atom_commonalities(mf: MassFunction) -> CommonalityVector:
    """Shafer commonalities of every singleton, as one vector."""
    indices, offsets, masses, _sizes = mf.flattened()
    out = np.zeros(mf.space.n, dtype=np.float64)
    kernels.accumulate_membership(indices, offsets, masses, out)
    return CommonalityVector(mf.space, out, "shafer")


def atom_normalized_commonalities(
    mf: MassFunction,
    method: Literal["auto", "sparse", "dense"] = "auto",
    *,
    dense_threshold: float | None = None,
    dense_cap: int = DENSE_LATTICE_CAP,
) -> CommonalityVector:
    """Normalized commonalities of every atom; they sum to one.

    ``sparse`` iterates the focal elements, adding mass/size to each member
    atom.  ``dense`` runs a sum-over-supersets transform on the full 2**n
    lattice and reads off the singletons; ``auto`` picks it when the focal
    count exceeds ``dense_threshold`` (default ``2**n / n``) and n is within
    ``dense_cap``.
    """
    n = mf.space.n
    if method == "auto":
        threshold = (2**n) / n if dense_threshold is None else dense_threshold
        method = "dense" if n <= dense_cap and len(mf.focal) > threshold else "sparse"
    elif method == "dense":
        if n > dense_cap:
            raise LatticeTooLargeError(
                f"dense lattice with {n} atoms exceeds the cap of {dense_cap}"
            )
    elif method != "sparse":
        raise ValueError(f"unknown method {method!r}")

    indices, offsets, masses, sizes = mf.flattened()
    per_set = masses / sizes
    if method == "sparse":
        out = np.zeros(n, dtype=np.float64)
        kernels.accumulate_membership(indices, offsets, per_set, out)
    else:
        masks = np.add.reduceat(np.left_shift(np.int64(1), indices), offsets[:-1])
        lattice = np.zeros(1 << n, dtype=np.float64)
        np.add.at(lattice, masks, per_set)
        kernels.superset_sum_inplace(lattice)
        out = lattice[np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))].copy()
    return CommonalityVector(mf.space, out, "normalized")


def belief(mf: MassFunction, subset: Subset) -> float:
    """Lower bound: total mass on focal elements contained in ``subset``."""
    target = set(subset.indices)
    return fsum(m for s, m in mf.focal.items() if target.issuperset(s.indices))


def plausibility(mf: MassFunction, subset: Subset) -> float:
    """Upper bound: total mass on focal elements meeting ``subset``."""
    target = set(subset.indices)
    return fsum(m for s, m in mf.focal.items() if not target.isdisjoint(s.indices))


def additive_probability(mf: MassFunction, subset: Subset) -> float:
    """The additive measure: each mass weighted by its overlap fraction.

    Equals the sum of per-atom normalized commonalities over ``subset``, and
    sits between :func:`belief` and :func:`plausibility`.
    """
    target = set(subset.indices)
    return fsum(
        m * len(target.intersection(s.indices)) / len(s)
        for s, m in mf.focal.items()
    )
