"""Event spaces, subsets, characteristic ranking, and profile grouping."""

import pytest

from conftest import paper_space, random_space, simple_space
from foresight import (
    Atom,
    Characteristic,
    CharacteristicSchema,
    EventSpace,
    Subset,
    UtilityTable,
    group_atoms_by_profile,
    rank_characteristics,
    shared_prefix_length,
)
from foresight.errors import (
    EmptySubsetError,
    NoReferenceSweepWarning,
    SchemaError,
    UnknownAtomError,
)


class TestSubset:
    def test_canonical_order_and_dedup(self):
        assert Subset([3, 1, 1, 2]).indices == (1, 2, 3)
        assert Subset([2, 1]) == Subset((1, 2))
        assert hash(Subset([2, 1])) == hash(Subset([1, 2]))

    def test_mask_round_trip(self):
        for mask in range(64):
            assert Subset.from_mask(mask).mask() == mask

    def test_set_algebra(self):
        a, b = Subset([0, 1]), Subset([1, 2])
        assert (a | b).indices == (0, 1, 2)
        assert (a & b).indices == (1,)
        assert a.intersection_size(b) == 1
        assert a.issubset(a | b) and (a | b).issuperset(b)
        assert a.complement(4).indices == (2, 3)
        assert 1 in a and 2 not in a

    def test_empty(self):
        assert not Subset.empty()
        assert len(Subset.empty()) == 0
        assert Subset.empty() == Subset([])

    def test_rejects_bad_positions(self):
        with pytest.raises(ValueError):
            Subset([-1])
        with pytest.raises(ValueError):
            Subset(["a"])

    def test_immutable(self):
        s = Subset([1])
        with pytest.raises(AttributeError):
            s.indices = (2,)


class TestSchemaInvariants:
    def test_empty_range(self):
        with pytest.raises(SchemaError):
            Characteristic("c", frozenset(), 0)

    def test_reference_outside_range(self):
        with pytest.raises(SchemaError):
            Characteristic("c", frozenset({0, 1}), 2)

    def test_float_values_rejected(self):
        with pytest.raises(SchemaError):
            Characteristic("c", frozenset({0.5}), 0.5)

    def test_bool_values_rejected(self):
        with pytest.raises(SchemaError):
            Characteristic("c", frozenset({True}), True)

    def test_importance_order_must_be_permutation(self):
        c = Characteristic("c", frozenset({0}), 0)
        d = Characteristic("d", frozenset({0}), 0)
        with pytest.raises(SchemaError):
            CharacteristicSchema((c, d), (0, 0))
        assert CharacteristicSchema((c, d)).importance_order == (0, 1)

    def test_duplicate_names(self):
        c = Characteristic("c", frozenset({0}), 0)
        with pytest.raises(SchemaError):
            CharacteristicSchema((c, c))

    def test_needs_a_characteristic(self):
        with pytest.raises(SchemaError):
            CharacteristicSchema(())


class TestEventSpace:
    def test_duplicate_atom_ids(self):
        with pytest.raises(SchemaError):
            EventSpace.build([("c", 0)], [("a", (0,)), ("a", (1,))])

    def test_profile_length(self):
        with pytest.raises(SchemaError):
            EventSpace.build([("c", 0), ("d", 0)], [("a", (0,))])

    def test_declared_range_must_match_observed(self):
        schema = CharacteristicSchema(
            (Characteristic("c", frozenset({0, 1, 2}), 0),)
        )
        with pytest.raises(SchemaError):
            EventSpace(schema, [Atom("a", (0,)), Atom("b", (1,))])

    def test_reference_must_be_observed(self):
        # derived range is {0, 1}; reference 7 falls outside it
        with pytest.raises(SchemaError):
            EventSpace.build([("c", 7)], [("a", (0,)), ("b", (1,))])

    def test_needs_an_atom(self):
        with pytest.raises(SchemaError):
            EventSpace.build([("c", 0)], [])

    def test_id_index_round_trip(self):
        space = paper_space()
        assert space.index_of("e2") == 1
        assert space.ids_of(space.subset_of(["e3", "e1"])) == ("e1", "e3")
        assert space.full_set() == Subset([0, 1, 2])
        with pytest.raises(UnknownAtomError):
            space.index_of("nope")


def _constant_utilities(space, value=3.0):
    return UtilityTable(
        ["d"], {"d": {atom.id: value for atom in space.atoms}}, 0.0
    )


class TestRankCharacteristics:
    def test_constant_utility_gives_identity(self):
        space = EventSpace.build(
            [("c1", 0), ("c2", 0)],
            [("a", (0, 0)), ("b", (1, 0)), ("c", (0, 1))],
        )
        assert rank_characteristics(space, _constant_utilities(space)) == (0, 1)

    def test_single_characteristic(self):
        space = simple_space(3)
        assert rank_characteristics(space, _constant_utilities(space)) == (0,)

    def test_reference_sweep_spreads(self):
        # atoms (0,0), (1,0), (0,1) with reference (0,0); u = 10, 0, 5:
        # sweeping the first characteristic spans {10, 0}, the second {10, 5}
        space = EventSpace.build(
            [("c1", 0), ("c2", 0)],
            [("a", (0, 0)), ("b", (1, 0)), ("c", (0, 1))],
        )
        u = UtilityTable(["d"], {"d": {"a": 10.0, "b": 0.0, "c": 5.0}}, 0.0)
        assert rank_characteristics(space, u) == (0, 1)

    def test_no_sweep_atoms_warns_and_scores_zero(self):
        # sweeping the third characteristic needs an atom at (0, 0, *) and
        # none exists, so that characteristic scores zero with a warning
        space = EventSpace.build(
            [("c1", 0), ("c2", 0), ("c3", 1)],
            [("a", (0, 1, 1)), ("b", (1, 0, 1))],
        )
        u = UtilityTable(["d"], {"d": {"a": 1.0, "b": 9.0}}, 0.0)
        with pytest.warns(NoReferenceSweepWarning):
            order = rank_characteristics(space, u)
        assert order == (0, 1, 2)

    def test_presorted_space_ranks_identity(self, rng):
        space = random_space(rng, 6, m=3)
        u = UtilityTable(
            ["d1", "d2"],
            {
                d: {atom.id: float(rng.uniform(-5, 5)) for atom in space.atoms}
                for d in ("d1", "d2")
            },
            0.0,
        )
        order = rank_characteristics(space, u)
        assert sorted(order) == list(range(space.m))
        # rebuild the space with characteristics permuted into ranked order
        chars = [space.schema.characteristics[k] for k in order]
        atoms = [
            (atom.id, tuple(atom.profile[k] for k in order)) for atom in space.atoms
        ]
        resorted = EventSpace.build([(c.name, c.reference) for c in chars], atoms)
        assert rank_characteristics(resorted, u) == tuple(range(space.m))


class TestSharedPrefixLength:
    def test_singleton_is_full_depth(self):
        space = paper_space()
        assert shared_prefix_length(space, Subset([0])) == 3

    def test_paper_pair_shares_two(self):
        space = paper_space()
        assert shared_prefix_length(space, Subset([0, 1])) == 2

    def test_divergent_pair_shares_zero(self):
        space = paper_space()
        assert shared_prefix_length(space, Subset([0, 2])) == 0

    def test_empty_subset_rejected(self):
        with pytest.raises(EmptySubsetError):
            shared_prefix_length(paper_space(), Subset.empty())

    def test_respects_importance_order(self):
        # same profiles, but the least important characteristic is ranked
        # first: agreement on it alone yields a prefix of 1, not 0
        space = EventSpace.build(
            [("c1", 1), ("c2", 1), ("c3", 1)],
            [("e1", (1, 1, 1)), ("e2", (1, 1, 0)), ("e3", (0, 0, 1))],
            importance_order=[2, 0, 1],
        )
        assert shared_prefix_length(space, Subset([0, 2])) == 1
        assert shared_prefix_length(space, Subset([0, 1])) == 0

    def test_monotone_under_inclusion(self, rng):
        for _ in range(200):
            space = random_space(rng, int(rng.integers(2, 7)))
            big = rng.integers(1, 2**space.n)
            small = big & rng.integers(1, 2**space.n)
            if small == 0:
                continue
            assert shared_prefix_length(space, Subset.from_mask(int(small))) >= (
                shared_prefix_length(space, Subset.from_mask(int(big)))
            )


class TestGroupAtomsByProfile:
    def test_distinct_profiles_make_singletons(self):
        space = paper_space()
        blocks = group_atoms_by_profile(space)
        assert sorted(b.indices for b in blocks.values()) == [(0,), (1,), (2,)]

    def test_shared_profile_groups(self):
        space = EventSpace.build(
            [("c1", 1), ("c2", 1), ("c3", 0)],
            [("a", (1, 1, 0)), ("b", (1, 1, 0)), ("c", (0, 0, 1))],
        )
        blocks = group_atoms_by_profile(space)
        assert blocks[(1, 1, 0)] == Subset([0, 1])
        assert blocks[(0, 0, 1)] == Subset([2])

    def test_partition_property(self, rng):
        for _ in range(100):
            space = random_space(rng, int(rng.integers(1, 9)), m=2, values=(0, 1))
            blocks = list(group_atoms_by_profile(space).values())
            seen = [i for b in blocks for i in b]
            assert sorted(seen) == list(range(space.n))
