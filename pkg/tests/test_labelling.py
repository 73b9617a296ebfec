"""Labelling of unforeseen profiles and conditioning of raw assessments."""

import pytest

from conftest import paper_space, random_space, simple_space
from foresight import (
    EventSpace,
    RawAssessment,
    Subset,
    condition_on_foreseeable,
    label_unforeseen,
    label_with_depth,
    relabel_atomic,
    shared_prefix_length,
)
from foresight.errors import (
    AllMassUnforeseeableError,
    NegativeMassError,
    NotNormalizedError,
    ProfileLengthMismatchError,
    SchemaError,
    UnknownAtomError,
)


class TestLabelUnforeseen:
    def test_worked_example(self):
        # space (1,1,1), (1,1,0), (0,0,1); profile (1,0,0) matches the first
        # two atoms on the most important characteristic only
        space = paper_space()
        result = label_with_depth(space, (1, 0, 0))
        assert space.ids_of(result.subset) == ("e1", "e2")
        assert result.depth == 1
        assert not result.is_unforeseeable

    def test_exact_profile_match_reaches_full_depth(self):
        space = paper_space()
        result = label_with_depth(space, (1, 1, 0))
        assert space.ids_of(result.subset) == ("e2",)
        assert result.depth == 3

    def test_fully_novel_profile_is_unforeseeable(self):
        space = paper_space()
        result = label_with_depth(space, (2, 2, 2))
        assert result.subset == Subset.empty()
        assert result.depth == 0
        assert result.is_unforeseeable
        assert label_unforeseen(space, (2, 2, 2)) == Subset.empty()

    def test_profile_length_checked(self):
        with pytest.raises(ProfileLengthMismatchError):
            label_unforeseen(paper_space(), (1, 0))

    def test_profile_value_types_checked(self):
        with pytest.raises(SchemaError):
            label_unforeseen(paper_space(), (1.5, 0, 0))

    def test_values_outside_ranges_are_legal(self):
        # a novel value on a less important characteristic only blocks the
        # deeper match levels
        space = paper_space()
        result = label_with_depth(space, (1, 9, 9))
        assert space.ids_of(result.subset) == ("e1", "e2")
        assert result.depth == 1

    def test_importance_order_drives_matching(self):
        atoms = [("a", (0, 0)), ("b", (1, 1))]
        chars = [("x", 0), ("y", 0)]
        head_first = EventSpace.build(chars, atoms, importance_order=[0, 1])
        tail_first = EventSpace.build(chars, atoms, importance_order=[1, 0])
        probe = (0, 1)
        assert head_first.ids_of(label_unforeseen(head_first, probe)) == ("a",)
        assert tail_first.ids_of(label_unforeseen(tail_first, probe)) == ("b",)

    def test_members_agree_on_prefix_and_excluded_do_not(self, rng):
        for _ in range(300):
            space = random_space(rng, int(rng.integers(1, 9)))
            order = space.schema.importance_order
            profile = tuple(int(v) for v in rng.choice((0, 1, 2, 3), size=space.m))
            result = label_with_depth(space, profile)
            if result.is_unforeseeable:
                assert all(
                    space.atoms[i].profile[order[0]] != profile[order[0]]
                    for i in range(space.n)
                )
                continue
            r = result.depth
            assert shared_prefix_length(space, result.subset) >= r
            members = set(result.subset)
            for i in range(space.n):
                agrees = all(
                    space.atoms[i].profile[order[t]] == profile[order[t]]
                    for t in range(r)
                )
                assert agrees == (i in members)

    def test_deeper_match_sets_nest(self, rng):
        # the depth-(r+1) matching set is contained in the depth-r one, and
        # the label is the deepest nonempty of them
        for _ in range(100):
            space = random_space(rng, int(rng.integers(1, 9)))
            order = space.schema.importance_order
            profile = tuple(int(v) for v in rng.choice((0, 1, 2), size=space.m))
            levels = []
            for r in range(space.m + 1):
                levels.append(
                    {
                        i
                        for i in range(space.n)
                        if all(
                            space.atoms[i].profile[order[t]] == profile[order[t]]
                            for t in range(r)
                        )
                    }
                )
            for shallow, deep in zip(levels, levels[1:]):
                assert deep <= shallow
            result = label_with_depth(space, profile)
            nonempty = [r for r in range(1, space.m + 1) if levels[r]]
            if nonempty:
                assert result.depth == max(nonempty)
                assert set(result.subset) == levels[max(nonempty)]
            else:
                assert result.is_unforeseeable

    def test_atom_input_order_does_not_matter(self):
        atoms = [("a", (1, 1, 1)), ("b", (1, 1, 0)), ("c", (0, 0, 1))]
        chars = [("c1", 1), ("c2", 1), ("c3", 1)]
        forward = EventSpace.build(chars, atoms)
        backward = EventSpace.build(chars, atoms[::-1])
        ids_f = set(forward.ids_of(label_unforeseen(forward, (1, 0, 0))))
        ids_b = set(backward.ids_of(label_unforeseen(backward, (1, 0, 0))))
        assert ids_f == ids_b == {"a", "b"}


class TestRelabelAtomic:
    def test_unique_profile_is_singleton(self):
        space = paper_space()
        for i, atom in enumerate(space.atoms):
            assert relabel_atomic(space, atom.id) == Subset([i])

    def test_shared_profile_block(self):
        space = EventSpace.build(
            [("c1", 1), ("c2", 0)],
            [("a", (1, 0)), ("b", (1, 0)), ("c", (0, 1))],
        )
        assert relabel_atomic(space, "a") == Subset([0, 1])
        assert relabel_atomic(space, "b") == Subset([0, 1])
        assert relabel_atomic(space, "c") == Subset([2])

    def test_unknown_atom(self):
        with pytest.raises(UnknownAtomError):
            relabel_atomic(paper_space(), "ghost")


class TestRawAssessment:
    def test_empty_labels_fold_into_no_match(self):
        space = simple_space(2)
        raw = RawAssessment(
            space,
            [(Subset([0]), 0.5), (Subset.empty(), 0.3), (Subset([0]), 0.1)],
            0.1,
        )
        assert raw.labelled == {Subset([0]): 0.6}
        assert raw.empty_probability == pytest.approx(0.4, abs=1e-15)

    def test_negative_probability_rejected(self):
        with pytest.raises(NegativeMassError):
            RawAssessment(simple_space(1), [(Subset([0]), -0.5)], 1.5)
        with pytest.raises(NegativeMassError):
            RawAssessment(simple_space(1), [(Subset([0]), 1.5)], -0.5)

    def test_total_must_be_one(self):
        with pytest.raises(NotNormalizedError):
            RawAssessment(simple_space(1), [(Subset([0]), 0.5)], 0.3)

    def test_subset_outside_space_rejected(self):
        with pytest.raises(SchemaError):
            RawAssessment(simple_space(1), [(Subset([5]), 1.0)], 0.0)


class TestConditioning:
    def test_no_unforeseeable_mass_is_identity(self):
        space = simple_space(2)
        raw = RawAssessment(space, [(Subset([0]), 0.4), (Subset([0, 1]), 0.6)], 0.0)
        mf = condition_on_foreseeable(raw)
        assert mf.focal == {Subset([0]): 0.4, Subset([0, 1]): 0.6}

    def test_divides_by_match_probability(self):
        space = simple_space(2)
        raw = RawAssessment(space, [(Subset([0]), 0.4), (Subset([0, 1]), 0.4)], 0.2)
        mf = condition_on_foreseeable(raw)
        assert mf.focal[Subset([0])] == pytest.approx(0.5, abs=1e-15)
        assert mf.focal[Subset([0, 1])] == pytest.approx(0.5, abs=1e-15)

    def test_all_mass_unforeseeable_rejected(self):
        raw = RawAssessment(simple_space(1), [], 1.0)
        with pytest.raises(AllMassUnforeseeableError):
            condition_on_foreseeable(raw)

    def test_zero_probability_labels_dropped(self):
        space = simple_space(2)
        raw = RawAssessment(space, [(Subset([0]), 1.0), (Subset([1]), 0.0)], 0.0)
        mf = condition_on_foreseeable(raw)
        assert mf.focal == {Subset([0]): 1.0}

    def test_output_is_valid_mass_function(self, rng):
        for _ in range(200):
            space = simple_space(int(rng.integers(1, 7)))
            count = int(rng.integers(1, 6))
            masks = rng.choice(2**space.n - 1, size=min(count, 2**space.n - 1), replace=False) + 1
            weights = rng.random(len(masks)) + 1e-6
            p0 = float(rng.uniform(0, 0.9))
            weights = weights / weights.sum() * (1 - p0)
            raw = RawAssessment(
                space,
                [(Subset.from_mask(int(m)), float(w)) for m, w in zip(masks, weights)],
                p0,
            )
            mf = condition_on_foreseeable(raw)
            assert abs(sum(mf.focal.values()) - 1.0) <= 1e-9
