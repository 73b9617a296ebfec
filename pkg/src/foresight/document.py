"""Problem documents: the JSON file format behind the CLI.

A document is a JSON object with named sections:

``schema``
    ``characteristics``: list of ``{"name", "reference", "range"?}``; the
    range may be omitted and is then derived from the atom profiles.
    ``importance_order``: optional list of characteristic names (or 0-based
    positions), most important first.  When omitted it is derived from the
    utilities section if present, else the listed order is used.
``atoms``
    list of ``{"id", "profile"}`` with profiles aligned to the schema.
``assessment``
    either ``{"labelled": [{"atoms": [ids], "probability": p}, ...],
    "unforeseeable": p0}`` (an empty atom list also counts toward the
    no-match probability), or a pre-conditioned ``{"mass": [{"atoms": [...],
    "mass": v}, ...]}``.
``utilities``
    ``{"decisions": [...], "values": {decision: {atom: u}},
    "unforeseeable_utility": u0}``.
``unforeseen``
    optional list of ``{"profile": [...], "name"?}`` to label.

Characteristic values are JSON integers or strings; floats and booleans are
rejected because matching is exact.  ``parse_document`` never raises on bad
content: it collects :class:`Diagnostic` records (the document is valid iff
none has error severity) and builds whatever sections it can.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from math import isfinite
from typing import Any, Mapping

from foresight.belief import MassFunction, make_mass
from foresight.decisions import UtilityTable
from foresight.errors import (
    DocumentError,
    ForesightError,
    NoReferenceSweepWarning,
    UnknownAtomError,
)
from foresight.events import (
    Atom,
    Characteristic,
    CharacteristicSchema,
    EventSpace,
    Profile,
    Subset,
    Value,
    rank_characteristics,
)
from foresight.labelling import RawAssessment

SECTIONS = ("schema", "atoms", "assessment", "utilities", "unforeseen")


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding, named after the violated invariant."""

    code: str
    section: str
    message: str
    severity: str = "error"  # "error" | "warning"

    def __str__(self) -> str:
        return f"{self.severity}: [{self.section}] {self.code}: {self.message}"


@dataclass(frozen=True)
class UnforeseenEntry:
    profile: Profile
    name: str | None = None


@dataclass
class ProblemDocument:
    """Parsed sections of a problem document; None where absent or broken."""

    space: EventSpace | None = None
    raw_assessment: RawAssessment | None = None
    mass: MassFunction | None = None
    utilities: UtilityTable | None = None
    unforeseen: tuple[UnforeseenEntry, ...] = ()
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)

    def require_space(self) -> EventSpace:
        if self.space is None:
            raise DocumentError(
                "the document has no usable schema/atoms sections", self.diagnostics
            )
        return self.space

    def conditioned_mass(self) -> MassFunction:
        """The assessment as a mass function, conditioning first if raw."""
        if self.mass is not None:
            return self.mass
        if self.raw_assessment is not None:
            from foresight.labelling import condition_on_foreseeable

            return condition_on_foreseeable(self.raw_assessment)
        raise DocumentError("the document has no assessment section", self.diagnostics)

    def baseline_inputs(self) -> tuple[dict[str, float], float]:
        """Atom probabilities plus no-match probability, for the baseline rule.

        Requires a raw assessment whose labels are all single atoms.
        """
        if self.raw_assessment is None:
            raise DocumentError(
                "the baseline rule needs a raw (labelled) assessment with "
                "per-atom probabilities, not a pre-conditioned mass function"
            )
        space = self.require_space()
        probabilities: dict[str, float] = {}
        for subset, p in self.raw_assessment.labelled.items():
            if len(subset) != 1:
                raise DocumentError(
                    "the baseline rule needs singleton labels; "
                    f"found one over atoms {list(space.ids_of(subset))}"
                )
            atom_id = space.atoms[subset.indices[0]].id
            probabilities[atom_id] = probabilities.get(atom_id, 0.0) + p
        return probabilities, self.raw_assessment.empty_probability


def load_document(path: str) -> ProblemDocument:
    """Read and parse a document file.

    I/O problems and malformed JSON raise :class:`DocumentError` (the CLI's
    exit-2 class); content problems land in the result's diagnostics.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path!r}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_document(data)


def parse_document(data: Any) -> ProblemDocument:
    """Validate a JSON tree and build every section that holds together."""
    doc = ProblemDocument()
    diags = doc.diagnostics
    if not isinstance(data, Mapping):
        diags.append(
            Diagnostic("InvalidType", "document", "the top level must be a JSON object")
        )
        return doc
    for key in data:
        if key not in SECTIONS:
            diags.append(
                Diagnostic(
                    "UnknownSection", str(key), f"unknown section {key!r}"
                )
            )

    characteristics, explicit_order = _parse_schema(data.get("schema"), diags)
    atom_pairs = _parse_atoms(data.get("atoms"), diags)
    if characteristics is not None and atom_pairs is not None:
        doc.space = _build_space(characteristics, atom_pairs, explicit_order, diags)

    if "utilities" in data:
        doc.utilities = _parse_utilities(data["utilities"], doc.space, diags)

    if doc.space is not None and explicit_order is None and doc.utilities is not None:
        doc.space = _derive_importance(doc.space, doc.utilities, diags)

    if "assessment" in data:
        doc.raw_assessment, doc.mass = _parse_assessment(
            data["assessment"], doc.space, diags
        )

    if "unforeseen" in data:
        doc.unforeseen = _parse_unforeseen(
            data["unforeseen"],
            None if characteristics is None else len(characteristics),
            diags,
        )
    return doc


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and isfinite(v)


def _parse_value(v: Any, section: str, where: str, diags: list[Diagnostic]):
    """A characteristic value: int or str, nothing else."""
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        diags.append(
            Diagnostic(
                "InvalidValue",
                section,
                f"{where}: characteristic values must be integers or strings, "
                f"got {v!r}",
            )
        )
        return None
    return v


def _parse_schema(raw: Any, diags: list[Diagnostic]):
    """Returns (characteristics spec list, explicit importance order or None)."""
    if raw is None:
        diags.append(Diagnostic("MissingSection", "schema", "no schema section"))
        return None, None
    if not isinstance(raw, Mapping):
        diags.append(Diagnostic("InvalidType", "schema", "schema must be an object"))
        return None, None
    entries = raw.get("characteristics")
    if not isinstance(entries, list) or not entries:
        diags.append(
            Diagnostic(
                "InvalidType",
                "schema",
                "schema.characteristics must be a nonempty list",
            )
        )
        return None, None
    characteristics: list[tuple[str, Value, frozenset[Value] | None]] = []
    ok = True
    for pos, entry in enumerate(entries):
        if not isinstance(entry, Mapping) or "name" not in entry or "reference" not in entry:
            diags.append(
                Diagnostic(
                    "InvalidType",
                    "schema",
                    f"characteristic #{pos}: expected an object with name and reference",
                )
            )
            ok = False
            continue
        name = entry["name"]
        if not isinstance(name, str):
            diags.append(
                Diagnostic("InvalidType", "schema", f"characteristic #{pos}: name must be a string")
            )
            ok = False
            continue
        reference = _parse_value(entry["reference"], "schema", f"characteristic {name!r} reference", diags)
        if reference is None:
            ok = False
            continue
        declared = None
        if "range" in entry:
            values = entry["range"]
            if not isinstance(values, list):
                diags.append(
                    Diagnostic("InvalidType", "schema", f"characteristic {name!r}: range must be a list")
                )
                ok = False
                continue
            parsed = [_parse_value(v, "schema", f"characteristic {name!r} range", diags) for v in values]
            if any(v is None for v in parsed):
                ok = False
                continue
            declared = frozenset(parsed)
        characteristics.append((name, reference, declared))
    if not ok:
        return None, None

    order = None
    if "importance_order" in raw:
        order = _parse_importance(raw["importance_order"], [c[0] for c in characteristics], diags)
        if order is None:
            return None, None
    return characteristics, order


def _parse_importance(raw: Any, names: list[str], diags: list[Diagnostic]):
    if not isinstance(raw, list):
        diags.append(
            Diagnostic("InvalidType", "schema", "importance_order must be a list")
        )
        return None
    positions: list[int] = []
    for item in raw:
        if isinstance(item, str):
            if item not in names:
                diags.append(
                    Diagnostic(
                        "SchemaError",
                        "schema",
                        f"importance_order names unknown characteristic {item!r}",
                    )
                )
                return None
            positions.append(names.index(item))
        elif isinstance(item, int) and not isinstance(item, bool):
            positions.append(item)
        else:
            diags.append(
                Diagnostic(
                    "InvalidType",
                    "schema",
                    f"importance_order entries must be names or positions, got {item!r}",
                )
            )
            return None
    if sorted(positions) != list(range(len(names))):
        diags.append(
            Diagnostic(
                "SchemaError",
                "schema",
                f"importance_order {raw!r} is not a permutation of the characteristics",
            )
        )
        return None
    return tuple(positions)


def _parse_atoms(raw: Any, diags: list[Diagnostic]):
    if raw is None:
        diags.append(Diagnostic("MissingSection", "atoms", "no atoms section"))
        return None
    if not isinstance(raw, list) or not raw:
        diags.append(Diagnostic("InvalidType", "atoms", "atoms must be a nonempty list"))
        return None
    pairs: list[tuple[str, tuple[Value, ...]]] = []
    ok = True
    for pos, entry in enumerate(raw):
        if not isinstance(entry, Mapping) or "id" not in entry or "profile" not in entry:
            diags.append(
                Diagnostic(
                    "InvalidType", "atoms", f"atom #{pos}: expected an object with id and profile"
                )
            )
            ok = False
            continue
        atom_id, profile = entry["id"], entry["profile"]
        if not isinstance(atom_id, str):
            diags.append(Diagnostic("InvalidType", "atoms", f"atom #{pos}: id must be a string"))
            ok = False
            continue
        if not isinstance(profile, list):
            diags.append(
                Diagnostic("InvalidType", "atoms", f"atom {atom_id!r}: profile must be a list")
            )
            ok = False
            continue
        values = [
            _parse_value(v, "atoms", f"atom {atom_id!r} profile", diags) for v in profile
        ]
        if any(v is None for v in values):
            ok = False
            continue
        pairs.append((atom_id, tuple(values)))
    return pairs if ok else None


def _build_space(characteristics, atom_pairs, explicit_order, diags: list[Diagnostic]):
    observed: list[set[Value]] = [set() for _ in characteristics]
    m = len(characteristics)
    for _, profile in atom_pairs:
        if len(profile) == m:
            for k, v in enumerate(profile):
                observed[k].add(v)
    try:
        chars = tuple(
            Characteristic(name, declared if declared is not None else frozenset(observed[k]), reference)
            for k, (name, reference, declared) in enumerate(characteristics)
        )
        schema = CharacteristicSchema(chars, explicit_order)
        return EventSpace(schema, [Atom(a, p) for a, p in atom_pairs])
    except ForesightError as exc:
        diags.append(Diagnostic(type(exc).__name__.removesuffix("Error"), "schema", str(exc)))
        return None


def _derive_importance(space: EventSpace, utilities: UtilityTable, diags: list[Diagnostic]):
    """No explicit order: rank characteristics from the utilities."""
    try:
        utilities.validate_for_space(space)
    except ForesightError:
        return space  # incomplete utilities already produced a diagnostic
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NoReferenceSweepWarning)
        order = rank_characteristics(space, utilities)
    for w in caught:
        diags.append(
            Diagnostic("NoReferenceSweep", "schema", str(w.message), severity="warning")
        )
    schema = CharacteristicSchema(space.schema.characteristics, order)
    return EventSpace(schema, space.atoms)


def _parse_subset(entry: Any, space: EventSpace | None, section: str, pos: int, diags):
    atoms = entry.get("atoms")
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        diags.append(
            Diagnostic(
                "InvalidType", section, f"entry #{pos}: atoms must be a list of atom ids"
            )
        )
        return None
    if space is None:
        return None
    try:
        return space.subset_of(atoms)
    except UnknownAtomError as exc:
        diags.append(Diagnostic("UnknownAtom", section, f"entry #{pos}: {exc}"))
        return None


def _parse_assessment(raw: Any, space: EventSpace | None, diags: list[Diagnostic]):
    if not isinstance(raw, Mapping):
        diags.append(Diagnostic("InvalidType", "assessment", "assessment must be an object"))
        return None, None
    has_labelled = "labelled" in raw
    has_mass = "mass" in raw
    if has_labelled == has_mass:
        diags.append(
            Diagnostic(
                "InvalidType",
                "assessment",
                "assessment needs exactly one of 'labelled' or 'mass'",
            )
        )
        return None, None

    key, weight_key = ("labelled", "probability") if has_labelled else ("mass", "mass")
    entries = raw[key]
    if not isinstance(entries, list) or not entries:
        diags.append(
            Diagnostic("InvalidType", "assessment", f"assessment.{key} must be a nonempty list")
        )
        return None, None
    allowed = {key, "unforeseeable"} if has_labelled else {key}
    for extra in set(raw) - allowed:
        diags.append(
            Diagnostic("InvalidType", "assessment", f"unexpected assessment field {extra!r}")
        )

    pairs: list[tuple[Subset, float]] = []
    ok = True
    for pos, entry in enumerate(entries):
        if not isinstance(entry, Mapping) or "atoms" not in entry or weight_key not in entry:
            diags.append(
                Diagnostic(
                    "InvalidType",
                    "assessment",
                    f"entry #{pos}: expected an object with atoms and {weight_key}",
                )
            )
            ok = False
            continue
        weight = entry[weight_key]
        if not _is_number(weight):
            diags.append(
                Diagnostic("InvalidType", "assessment", f"entry #{pos}: {weight_key} must be a number")
            )
            ok = False
            continue
        if weight < 0:
            diags.append(
                Diagnostic(
                    "NegativeMass", "assessment", f"entry #{pos}: {weight_key} {weight!r} is negative"
                )
            )
            ok = False
            continue
        subset = _parse_subset(entry, space, "assessment", pos, diags)
        if subset is None:
            ok = False
            continue
        if not subset and has_mass:
            diags.append(
                Diagnostic(
                    "EmptyFocalSet", "assessment", f"entry #{pos}: a mass entry cannot be empty"
                )
            )
            ok = False
            continue
        pairs.append((subset, float(weight)))

    empty_probability = 0.0
    if has_labelled and "unforeseeable" in raw:
        p0 = raw["unforeseeable"]
        if not _is_number(p0) or p0 < 0:
            diags.append(
                Diagnostic(
                    "NegativeMass",
                    "assessment",
                    f"unforeseeable probability must be a nonnegative number, got {p0!r}",
                )
            )
            ok = False
        else:
            empty_probability = float(p0)

    if not ok or space is None:
        return None, None
    try:
        if has_labelled:
            return RawAssessment(space, pairs, empty_probability), None
        return None, make_mass(space, pairs)
    except ForesightError as exc:
        diags.append(
            Diagnostic(type(exc).__name__.removesuffix("Error"), "assessment", str(exc))
        )
        return None, None


def _parse_utilities(raw: Any, space: EventSpace | None, diags: list[Diagnostic]):
    if not isinstance(raw, Mapping):
        diags.append(Diagnostic("InvalidType", "utilities", "utilities must be an object"))
        return None
    decisions = raw.get("decisions")
    values = raw.get("values")
    if not isinstance(decisions, list) or not all(isinstance(d, str) for d in decisions):
        diags.append(
            Diagnostic("InvalidType", "utilities", "utilities.decisions must be a list of ids")
        )
        return None
    if not isinstance(values, Mapping):
        diags.append(
            Diagnostic("InvalidType", "utilities", "utilities.values must be an object")
        )
        return None
    if "unforeseeable_utility" not in raw:
        diags.append(
            Diagnostic(
                "MissingField",
                "utilities",
                "unforeseeable_utility is required (it is inert when the "
                "no-match probability is zero)",
            )
        )
        return None
    u0 = raw["unforeseeable_utility"]
    if not _is_number(u0):
        diags.append(
            Diagnostic("InvalidType", "utilities", f"unforeseeable_utility must be a number, got {u0!r}")
        )
        return None
    ok = True
    known_ids = None if space is None else {a.id for a in space.atoms}
    rows: dict[str, dict[str, float]] = {}
    for d, row in values.items():
        if not isinstance(row, Mapping):
            diags.append(
                Diagnostic("InvalidType", "utilities", f"row for {d!r} must be an object")
            )
            ok = False
            continue
        parsed: dict[str, float] = {}
        for atom_id, u in row.items():
            if not _is_number(u):
                diags.append(
                    Diagnostic(
                        "InvalidType", "utilities", f"utility ({d!r}, {atom_id!r}) must be a number"
                    )
                )
                ok = False
                continue
            if known_ids is not None and atom_id not in known_ids:
                diags.append(
                    Diagnostic(
                        "UnknownAtom", "utilities", f"row for {d!r} cites unknown atom {atom_id!r}"
                    )
                )
                ok = False
                continue
            parsed[atom_id] = float(u)
        rows[d] = parsed
    if not ok:
        return None
    try:
        table = UtilityTable(decisions, rows, float(u0))
        if space is not None:
            table.validate_for_space(space)
        return table
    except ForesightError as exc:
        diags.append(
            Diagnostic(type(exc).__name__.removesuffix("Error"), "utilities", str(exc))
        )
        return None
    except ValueError as exc:
        diags.append(Diagnostic("InvalidType", "utilities", str(exc)))
        return None


def _parse_unforeseen(raw: Any, m: int | None, diags: list[Diagnostic]):
    if not isinstance(raw, list):
        diags.append(Diagnostic("InvalidType", "unforeseen", "unforeseen must be a list"))
        return ()
    entries: list[UnforeseenEntry] = []
    for pos, entry in enumerate(raw):
        if not isinstance(entry, Mapping) or "profile" not in entry:
            diags.append(
                Diagnostic(
                    "InvalidType", "unforeseen", f"entry #{pos}: expected an object with a profile"
                )
            )
            continue
        name = entry.get("name")
        if name is not None and not isinstance(name, str):
            diags.append(
                Diagnostic("InvalidType", "unforeseen", f"entry #{pos}: name must be a string")
            )
            continue
        profile = entry["profile"]
        if not isinstance(profile, list):
            diags.append(
                Diagnostic("InvalidType", "unforeseen", f"entry #{pos}: profile must be a list")
            )
            continue
        values = [
            _parse_value(v, "unforeseen", f"entry #{pos} profile", diags) for v in profile
        ]
        if any(v is None for v in values):
            continue
        if m is not None and len(values) != m:
            diags.append(
                Diagnostic(
                    "ProfileLengthMismatch",
                    "unforeseen",
                    f"entry #{pos}: profile has {len(values)} values, schema has {m}",
                )
            )
            continue
        entries.append(UnforeseenEntry(tuple(values), name))
    return tuple(entries)


def _sorted_values(values) -> list[Value]:
    return sorted(values, key=lambda v: (isinstance(v, str), v))


def echo_document(doc: ProblemDocument) -> dict[str, Any]:
    """The normalized JSON form of a parsed document.

    Ranges are explicit and sorted, the importance order is spelled out by
    name, assessment entries are sorted by subset, and the no-match
    probability is always present for labelled assessments.  Parsing the
    echo reproduces an equivalent model.
    """
    if doc.space is None:
        raise DocumentError("cannot echo a document without a valid space")
    space = doc.space
    names = [c.name for c in space.schema.characteristics]
    out: dict[str, Any] = {
        "schema": {
            "characteristics": [
                {
                    "name": c.name,
                    "range": _sorted_values(c.range),
                    "reference": c.reference,
                }
                for c in space.schema.characteristics
            ],
            "importance_order": [names[k] for k in space.schema.importance_order],
        },
        "atoms": [
            {"id": atom.id, "profile": list(atom.profile)} for atom in space.atoms
        ],
    }
    if doc.raw_assessment is not None:
        labelled = sorted(doc.raw_assessment.labelled.items(), key=lambda kv: kv[0].indices)
        out["assessment"] = {
            "labelled": [
                {"atoms": list(space.ids_of(s)), "probability": p} for s, p in labelled
            ],
            "unforeseeable": doc.raw_assessment.empty_probability,
        }
    elif doc.mass is not None:
        focal = sorted(doc.mass.focal.items(), key=lambda kv: kv[0].indices)
        out["assessment"] = {
            "mass": [{"atoms": list(space.ids_of(s)), "mass": v} for s, v in focal]
        }
    if doc.utilities is not None:
        out["utilities"] = {
            "decisions": list(doc.utilities.decisions),
            "values": {
                d: {atom.id: doc.utilities.utility(d, atom.id) for atom in space.atoms}
                for d in doc.utilities.decisions
            },
            "unforeseeable_utility": doc.utilities.u0,
        }
    if doc.unforeseen:
        out["unforeseen"] = [
            ({"name": e.name} if e.name is not None else {})
            | {"profile": list(e.profile)}
            for e in doc.unforeseen
        ]
    return out
