"""Shared builders for unit and acceptance tests."""

from pathlib import Path

import numpy as np
import pytest

from foresight import EventSpace, MassFunction, Subset, UtilityTable, make_mass

DATA = Path(__file__).parent / "data"

_simple_spaces: dict[int, EventSpace] = {}


def simple_space(n: int) -> EventSpace:
    """n atoms over one characteristic with n distinct values (cached)."""
    if n not in _simple_spaces:
        _simple_spaces[n] = EventSpace.build(
            [("level", 0)], [(f"e{i}", (i,)) for i in range(n)]
        )
    return _simple_spaces[n]


def paper_space() -> EventSpace:
    return EventSpace.build(
        [("c1", 1), ("c2", 1), ("c3", 1)],
        [("e1", (1, 1, 1)), ("e2", (1, 1, 0)), ("e3", (0, 0, 1))],
    )


def random_space(rng: np.random.Generator, n: int, m: int = 3, values=(0, 1, 2)) -> EventSpace:
    """Random profiles; ranges derive from whatever values the atoms take."""
    profiles = [tuple(int(v) for v in rng.choice(values, size=m)) for _ in range(n)]
    characteristics = [(f"c{k}", profiles[0][k]) for k in range(m)]
    order = [int(i) for i in rng.permutation(m)]
    return EventSpace.build(
        characteristics, [(f"e{i}", p) for i, p in enumerate(profiles)], order
    )


def random_mass(space: EventSpace, rng: np.random.Generator, max_focal: int = 24) -> MassFunction:
    n = space.n
    count = int(rng.integers(1, min(2**n - 1, max_focal) + 1))
    masks = rng.choice(2**n - 1, size=count, replace=False) + 1
    weights = rng.random(count) + 1e-3
    weights /= weights.sum()
    return make_mass(
        space, [(Subset.from_mask(int(m)), float(w)) for m, w in zip(masks, weights)]
    )


def random_singleton_mass(space: EventSpace, rng: np.random.Generator) -> MassFunction:
    weights = rng.dirichlet(np.ones(space.n))
    return make_mass(
        space, [(Subset([i]), float(w)) for i, w in enumerate(weights)]
    )


def random_nonempty_subset(rng: np.random.Generator, n: int) -> Subset:
    return Subset.from_mask(int(rng.integers(1, 2**n)))


def random_subset(rng: np.random.Generator, n: int) -> Subset:
    return Subset.from_mask(int(rng.integers(0, 2**n)))


def random_utilities(
    space: EventSpace, rng: np.random.Generator, decisions: int = 2, u0: float | None = None
) -> UtilityTable:
    names = [f"d{j}" for j in range(decisions)]
    values = {
        d: {atom.id: float(rng.uniform(-1, 1)) for atom in space.atoms} for d in names
    }
    return UtilityTable(names, values, float(rng.uniform(-1, 1)) if u0 is None else u0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
