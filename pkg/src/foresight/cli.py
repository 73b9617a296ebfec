"""Command-line front end.

Subcommands: ``validate``, ``label``, ``rank``, ``bounds``,
``commonalities``.  Exit status: 0 success, 1 validation failure, 2 I/O or
parse failure.  Tables print reals with 6 significant digits; json and csv
keep full precision.  ``FORESIGHT_EPSILON`` overrides the default tie
epsilon for ``rank``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from typing import Any, Sequence

from foresight.belief import (
    additive_probability,
    atom_commonalities,
    atom_normalized_commonalities,
    belief,
    plausibility,
)
from foresight.decisions import EPS_TIE, rank_decisions, rank_decisions_baseline
from foresight.document import ProblemDocument, echo_document, load_document
from foresight.errors import DocumentError, ForesightError
from foresight.events import Subset
from foresight.labelling import label_with_depth

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2

_INT_TOKEN = re.compile(r"^[+-]?\d+$")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foresight",
        description="Label unforeseen events onto foreseen-event subsets and "
        "rank decisions by expected utility with normalized commonalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a problem document")
    p.add_argument("input", help="problem document (JSON)")
    p.add_argument("--echo", action="store_true", help="print the normalized document")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("label", help="label unforeseen profiles")
    p.add_argument("input")
    p.add_argument(
        "--profile",
        help="label this profile instead of the document's unforeseen section "
        "(comma-separated values; integer-looking tokens are integers)",
    )
    _output_options(p)
    p.set_defaults(handler=cmd_label)

    p = sub.add_parser("rank", help="rank decisions by expected utility")
    p.add_argument("input")
    p.add_argument(
        "--method",
        choices=["eq2", "commonality", "eq1-baseline"],
        default="eq2",
        help="evaluator: focal-element rule, normalized-commonality rule, or "
        "the baseline atom-probability rule",
    )
    p.add_argument(
        "--epsilon",
        type=float,
        default=None,
        help=f"tie-grouping epsilon (default {EPS_TIE}, or FORESIGHT_EPSILON)",
    )
    _output_options(p)
    p.set_defaults(handler=cmd_rank)

    p = sub.add_parser("bounds", help="belief/probability/plausibility of a subset")
    p.add_argument("input")
    p.add_argument(
        "subset",
        help="atom ids joined by '+' (e.g. 'flood+quake'); empty string for "
        "the empty subset",
    )
    _output_options(p)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("commonalities", help="per-atom commonalities")
    p.add_argument("input")
    _output_options(p)
    p.set_defaults(handler=cmd_commonalities)
    return parser


def _output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.add_argument("--output", help="write the report here instead of stdout")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_document(args.input)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.command != "validate":
        errors = [d for d in doc.diagnostics if d.severity == "error"]
        if errors:
            for d in errors:
                print(d, file=sys.stderr)
            return EXIT_INVALID
    try:
        return args.handler(args, doc)
    except ForesightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def cmd_validate(args, doc: ProblemDocument) -> int:
    if args.format == "json":
        payload: dict[str, Any] = {
            "valid": doc.is_valid,
            "diagnostics": [
                {
                    "code": d.code,
                    "section": d.section,
                    "severity": d.severity,
                    "message": d.message,
                }
                for d in doc.diagnostics
            ],
        }
        if args.echo and doc.is_valid:
            payload["document"] = echo_document(doc)
        print(json.dumps(payload, indent=2))
    else:
        for d in doc.diagnostics:
            print(d)
        if args.echo and doc.is_valid:
            print(json.dumps(echo_document(doc), indent=2))
        elif not doc.diagnostics:
            print("ok")
    return EXIT_OK if doc.is_valid else EXIT_INVALID


def _parse_profile_option(text: str) -> tuple[int | str, ...]:
    tokens = [t.strip() for t in text.split(",")]
    return tuple(int(t) if _INT_TOKEN.match(t) else t for t in tokens)


def cmd_label(args, doc: ProblemDocument) -> int:
    space = doc.require_space()
    if args.profile is not None:
        targets = [(None, _parse_profile_option(args.profile))]
    else:
        targets = [(e.name, e.profile) for e in doc.unforeseen]
    if not targets:
        print(
            "error: nothing to label (no unforeseen section and no --profile)",
            file=sys.stderr,
        )
        return EXIT_INVALID
    rows = []
    for name, profile in targets:
        result = label_with_depth(space, profile)
        rows.append(
            {
                "name": name,
                "profile": list(profile),
                "atoms": list(space.ids_of(result.subset)),
                "depth": result.depth,
                "unforeseeable": result.is_unforeseeable,
            }
        )
    report = {"labels": rows}
    header = ("name", "profile", "atoms", "depth", "unforeseeable")
    table_rows = [
        (
            r["name"] or "-",
            json.dumps(r["profile"]),
            "+".join(r["atoms"]) if r["atoms"] else "(none)",
            str(r["depth"]),
            "yes" if r["unforeseeable"] else "no",
        )
        for r in rows
    ]
    csv_rows = [
        (
            r["name"] or "",
            json.dumps(r["profile"]),
            "+".join(r["atoms"]),
            r["depth"],
            r["unforeseeable"],
        )
        for r in rows
    ]
    return _emit(args, report, header, table_rows, csv_rows)


def cmd_rank(args, doc: ProblemDocument) -> int:
    space = doc.require_space()
    if doc.utilities is None:
        raise DocumentError("ranking needs a utilities section")
    epsilon = args.epsilon
    if epsilon is None:
        env = os.environ.get("FORESIGHT_EPSILON")
        epsilon = float(env) if env else EPS_TIE
    mf = doc.conditioned_mass()
    if args.method == "eq1-baseline":
        probabilities, p0 = doc.baseline_inputs()
        ranking = rank_decisions_baseline(
            space, probabilities, p0, doc.utilities, tie_epsilon=epsilon
        )
    else:
        ranking = rank_decisions(mf, doc.utilities, args.method, tie_epsilon=epsilon)
    cn = atom_normalized_commonalities(mf)
    report = {
        "method": args.method,
        "tie_epsilon": epsilon,
        "ranking": [
            {
                "rank": e.rank,
                "decision": e.decision,
                "expected_utility": e.expected_utility,
            }
            for e in ranking.entries
        ],
        "tie_groups": [list(g) for g in ranking.tie_groups],
        "normalized_commonalities": cn.as_dict(),
    }
    lines = []
    lines.append(_render_table(
        ("rank", "decision", "expected-utility"),
        [(str(e.rank), e.decision, _fmt(e.expected_utility)) for e in ranking.entries],
    ))
    ties = [g for g in ranking.tie_groups if len(g) > 1]
    lines.append("ties: " + ("; ".join("{" + ", ".join(g) + "}" for g in ties) if ties else "none"))
    lines.append("")
    lines.append(_render_table(
        ("atom", "normalized-commonality"),
        [(atom_id, _fmt(v)) for atom_id, v in cn.as_dict().items()],
    ))
    text = "\n".join(lines) + "\n"
    if args.format == "csv":
        return _write(args, _render_csv(
            ("rank", "decision", "expected_utility"),
            [(e.rank, e.decision, e.expected_utility) for e in ranking.entries],
        ))
    if args.format == "json":
        return _write(args, json.dumps(report, indent=2) + "\n")
    return _write(args, text)


def _parse_subset_expression(space, expression: str) -> Subset:
    expression = expression.strip()
    if not expression:
        return Subset.empty()
    ids = [token.strip() for token in expression.split("+")]
    if any(not token for token in ids):
        raise DocumentError(f"unparseable subset expression {expression!r}")
    return space.subset_of(ids)


def cmd_bounds(args, doc: ProblemDocument) -> int:
    space = doc.require_space()
    mf = doc.conditioned_mass()
    subset = _parse_subset_expression(space, args.subset)
    low = belief(mf, subset)
    mid = additive_probability(mf, subset)
    high = plausibility(mf, subset)
    report = {
        "atoms": list(space.ids_of(subset)),
        "belief": low,
        "additive_probability": mid,
        "plausibility": high,
        "sandwich_ok": low <= mid + 1e-12 and mid <= high + 1e-12,
    }
    header = ("quantity", "value")
    table_rows = [
        ("subset", "+".join(report["atoms"]) if report["atoms"] else "(empty)"),
        ("belief", _fmt(low)),
        ("additive-probability", _fmt(mid)),
        ("plausibility", _fmt(high)),
        ("sandwich", "belief <= probability <= plausibility"
         if report["sandwich_ok"] else "VIOLATED"),
    ]
    csv_rows = [("+".join(report["atoms"]), low, mid, high, report["sandwich_ok"])]
    if args.format == "csv":
        return _write(args, _render_csv(
            ("subset", "belief", "additive_probability", "plausibility", "sandwich_ok"),
            csv_rows,
        ))
    if args.format == "json":
        return _write(args, json.dumps(report, indent=2) + "\n")
    return _write(args, _render_table(header, table_rows) + "\n")


def cmd_commonalities(args, doc: ProblemDocument) -> int:
    mf = doc.conditioned_mass()
    shafer = atom_commonalities(mf)
    normalized = atom_normalized_commonalities(mf)
    atoms = [atom.id for atom in mf.space.atoms]
    report = {
        "commonalities": [
            {
                "atom": a,
                "shafer": shafer.value(a),
                "normalized": normalized.value(a),
            }
            for a in atoms
        ]
    }
    header = ("atom", "shafer", "normalized")
    table_rows = [
        (a, _fmt(shafer.value(a)), _fmt(normalized.value(a))) for a in atoms
    ]
    csv_rows = [(a, shafer.value(a), normalized.value(a)) for a in atoms]
    return _emit(args, report, header, table_rows, csv_rows)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _render_table(header: tuple[str, ...], rows: list[tuple[str, ...]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return "  ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip()
    return "\n".join([line(header)] + [line(r) for r in rows])


def _render_csv(header: tuple[str, ...], rows: list[tuple] ) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _emit(args, report, header, table_rows, csv_rows) -> int:
    if args.format == "json":
        return _write(args, json.dumps(report, indent=2) + "\n")
    if args.format == "csv":
        return _write(args, _render_csv(header, csv_rows))
    return _write(args, _render_table(header, table_rows) + "\n")


def _write(args, text: str) -> int:
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output!r}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
