"""Utility tables and expected-utility ranking of decisions.

Three evaluators produce the same preferences on their common ground:

* the baseline rule over foreseen atoms plus a constant-utility no-match
  event (``expected_utility_eq1``);
* the focal-element rule: mass times mean member utility
  (``expected_utility_eq2``), the mean being the lifting of atom utilities
  to compound labels;
* the atom rule: normalized commonalities as probability weights
  (``expected_utility_commonality``).

The last two are algebraically identical, which is the library's central
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, isfinite
from typing import Literal, Mapping, Sequence

from foresight.belief import (
    EPS_NORM,
    CommonalityVector,
    MassFunction,
    atom_normalized_commonalities,
)
from foresight.errors import (
    EmptySubsetError,
    KindMismatchError,
    MissingUtilityError,
    NegativeMassError,
    NotNormalizedError,
)
from foresight.events import EventSpace, Subset

# Expected utilities closer than this are reported as indifference rather
# than an arbitrary strict order.
EPS_TIE = 1e-9


class UtilityTable:
    """Utilities u(decision | atom) plus the constant no-match utility u0.

    ``values`` maps each decision to its per-atom-id utility row.  Rows must
    cover every atom of whatever space the table is used with; u0 is always
    required, even when the no-match probability is zero.
    """

    __slots__ = ("decisions", "u0", "_rows")

    def __init__(
        self,
        decisions: Sequence[str],
        values: Mapping[str, Mapping[str, float]],
        u0: float,
    ):
        decisions = tuple(decisions)
        if not decisions:
            raise ValueError("a utility table needs at least one decision")
        if len(set(decisions)) != len(decisions):
            raise ValueError(f"duplicate decision ids: {decisions}")
        if not isfinite(u0):
            raise ValueError(f"no-match utility {u0!r} is not finite")
        rows: dict[str, dict[str, float]] = {}
        for d in decisions:
            if d not in values:
                raise MissingUtilityError(f"no utility row for decision {d!r}")
            row = dict(values[d])
            for atom_id, u in row.items():
                if not isfinite(u):
                    raise ValueError(
                        f"utility {u!r} for ({d!r}, {atom_id!r}) is not finite"
                    )
            rows[d] = row
        unknown = set(values) - set(decisions)
        if unknown:
            raise ValueError(f"utility rows for undeclared decisions: {sorted(unknown)}")
        self.decisions = decisions
        self.u0 = float(u0)
        self._rows = rows

    def utility(self, decision: str, atom_id: str) -> float:
        try:
            return self._rows[decision][atom_id]
        except KeyError:
            raise MissingUtilityError(
                f"no utility for decision {decision!r} given atom {atom_id!r}"
            ) from None

    def row(self, decision: str) -> Mapping[str, float]:
        try:
            return dict(self._rows[decision])
        except KeyError:
            raise MissingUtilityError(f"no utility row for decision {decision!r}") from None

    def validate_for_space(self, space: EventSpace) -> None:
        """Check every (decision, atom) pair is assessed; raise on the first hole."""
        for d in self.decisions:
            for atom in space.atoms:
                self.utility(d, atom.id)


@dataclass(frozen=True)
class RankedDecision:
    decision: str
    expected_utility: float
    rank: int


@dataclass(frozen=True)
class DecisionRanking:
    """Decisions sorted by decreasing expected utility, with tie groups.

    Every decision appears in exactly one entry and one tie group; tied
    decisions share the rank of their best position (1, 1, 3, ...).
    """

    entries: tuple[RankedDecision, ...]
    tie_groups: tuple[tuple[str, ...], ...]

    @property
    def best(self) -> str:
        return self.entries[0].decision

    def order(self) -> tuple[str, ...]:
        return tuple(e.decision for e in self.entries)


def compound_utility(
    space: EventSpace, utilities: UtilityTable, decision: str, subset: Subset
) -> float:
    """Mean utility over the atoms of a compound label.

    A degenerate mean reproduces single-atom utilities; when all member
    atoms agree, the common value is inherited unchanged.
    """
    if not subset:
        raise EmptySubsetError("compound utility is defined on nonempty subsets")
    return fsum(
        utilities.utility(decision, space.atoms[i].id) for i in subset
    ) / len(subset)


def expected_utility_eq2(
    mf: MassFunction, utilities: UtilityTable, decision: str
) -> float:
    """Sum over focal elements of mass times mean member utility."""
    space = mf.space
    return fsum(
        mass * compound_utility(space, utilities, decision, subset)
        for subset, mass in mf.focal.items()
    )


def expected_utility_commonality(
    cn: CommonalityVector, utilities: UtilityTable, decision: str
) -> float:
    """Per-atom normalized commonalities as the probability weights."""
    if cn.kind != "normalized":
        raise KindMismatchError(
            f"expected a normalized commonality vector, got kind {cn.kind!r}"
        )
    atoms = cn.space.atoms
    return fsum(
        float(c) * utilities.utility(decision, atoms[i].id)
        for i, c in enumerate(cn.values)
    )


def expected_utility_eq1(
    space: EventSpace,
    atom_probabilities: Mapping[str, float],
    prob_unforeseen: float,
    utilities: UtilityTable,
    decision: str,
) -> float:
    """Baseline rule: atom probabilities plus a lumped no-match event at u0.

    ``atom_probabilities`` is keyed by atom id (missing atoms count as zero)
    and must total one together with ``prob_unforeseen``.
    """
    if not isfinite(prob_unforeseen) or prob_unforeseen < 0:
        raise NegativeMassError(
            f"no-match probability {prob_unforeseen!r} is not a nonnegative real"
        )
    for atom_id, p in atom_probabilities.items():
        space.index_of(atom_id)  # unknown ids raise
        if not isfinite(p) or p < 0:
            raise NegativeMassError(
                f"probability {p!r} for atom {atom_id!r} is not a nonnegative real"
            )
    total = fsum(atom_probabilities.values()) + prob_unforeseen
    if abs(total - 1.0) > EPS_NORM:
        raise NotNormalizedError(f"probabilities sum to {total!r}, expected 1")
    return (
        fsum(
            p * utilities.utility(decision, atom_id)
            for atom_id, p in atom_probabilities.items()
        )
        + prob_unforeseen * utilities.u0
    )


def rank_decisions(
    mf: MassFunction,
    utilities: UtilityTable,
    method: Literal["eq2", "commonality"] = "eq2",
    *,
    tie_epsilon: float = EPS_TIE,
) -> DecisionRanking:
    """Rank all decisions of the table by the chosen evaluator.

    Both methods yield the same ranking (up to float noise far below
    ``tie_epsilon``); exposing the choice keeps the identity testable
    end to end.
    """
    if method == "eq2":
        scores = [
            (d, expected_utility_eq2(mf, utilities, d)) for d in utilities.decisions
        ]
    elif method == "commonality":
        cn = atom_normalized_commonalities(mf)
        scores = [
            (d, expected_utility_commonality(cn, utilities, d))
            for d in utilities.decisions
        ]
    else:
        raise ValueError(f"unknown ranking method {method!r}")
    return assemble_ranking(scores, tie_epsilon=tie_epsilon)


def rank_decisions_baseline(
    space: EventSpace,
    atom_probabilities: Mapping[str, float],
    prob_unforeseen: float,
    utilities: UtilityTable,
    *,
    tie_epsilon: float = EPS_TIE,
) -> DecisionRanking:
    """Rank all decisions by the baseline (atom probability) rule."""
    scores = [
        (
            d,
            expected_utility_eq1(
                space, atom_probabilities, prob_unforeseen, utilities, d
            ),
        )
        for d in utilities.decisions
    ]
    return assemble_ranking(scores, tie_epsilon=tie_epsilon)


def assemble_ranking(
    scores: Sequence[tuple[str, float]], *, tie_epsilon: float = EPS_TIE
) -> DecisionRanking:
    """Sort (decision, expected utility) pairs into a ranking with ties.

    Sorting is by decreasing value, then by input position, so reports are
    deterministic.  Successive values closer than ``tie_epsilon`` join the
    same tie group.
    """
    order = sorted(range(len(scores)), key=lambda i: (-scores[i][1], i))
    groups: list[list[int]] = []
    previous = None
    for i in order:
        value = scores[i][1]
        if previous is not None and previous - value < tie_epsilon:
            groups[-1].append(i)
        else:
            groups.append([i])
        previous = value
    entries: list[RankedDecision] = []
    position = 1
    for group in groups:
        for i in group:
            entries.append(RankedDecision(scores[i][0], scores[i][1], position))
        position += len(group)
    return DecisionRanking(
        entries=tuple(entries),
        tie_groups=tuple(tuple(scores[i][0] for i in g) for g in groups),
    )
