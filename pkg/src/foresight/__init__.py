"""Decision ranking under unforeseen events via belief-function commonalities.

The pipeline: describe foreseen atomic events by categorical characteristic
profiles; map unforeseen events onto subsets of atoms by prefix matching on
the most important characteristics; condition the assessed probabilities on
something foreseeable happening, which yields a basic probability
assignment; rank decisions by expected utility, where per-atom normalized
commonalities play the role of probabilities.
"""

from foresight.belief import (
    DENSE_LATTICE_CAP,
    EPS_NORM,
    EPS_NUM,
    CommonalityVector,
    MassFunction,
    additive_probability,
    atom_commonalities,
    atom_normalized_commonalities,
    belief,
    commonality,
    make_mass,
    normalized_commonality,
    plausibility,
)
from foresight.decisions import (
    EPS_TIE,
    DecisionRanking,
    RankedDecision,
    UtilityTable,
    assemble_ranking,
    compound_utility,
    expected_utility_commonality,
    expected_utility_eq1,
    expected_utility_eq2,
    rank_decisions,
    rank_decisions_baseline,
)
from foresight.events import (
    Atom,
    Characteristic,
    CharacteristicSchema,
    EventSpace,
    Subset,
    group_atoms_by_profile,
    rank_characteristics,
    shared_prefix_length,
)
from foresight.labelling import (
    LabelResult,
    RawAssessment,
    condition_on_foreseeable,
    label_unforeseen,
    label_with_depth,
    relabel_atomic,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Characteristic",
    "CharacteristicSchema",
    "CommonalityVector",
    "DecisionRanking",
    "DENSE_LATTICE_CAP",
    "EPS_NORM",
    "EPS_NUM",
    "EPS_TIE",
    "EventSpace",
    "LabelResult",
    "MassFunction",
    "RankedDecision",
    "RawAssessment",
    "Subset",
    "UtilityTable",
    "additive_probability",
    "assemble_ranking",
    "atom_commonalities",
    "atom_normalized_commonalities",
    "belief",
    "commonality",
    "compound_utility",
    "condition_on_foreseeable",
    "expected_utility_commonality",
    "expected_utility_eq1",
    "expected_utility_eq2",
    "group_atoms_by_profile",
    "label_unforeseen",
    "label_with_depth",
    "make_mass",
    "normalized_commonality",
    "plausibility",
    "rank_characteristics",
    "rank_decisions",
    "rank_decisions_baseline",
    "relabel_atomic",
    "shared_prefix_length",
]
