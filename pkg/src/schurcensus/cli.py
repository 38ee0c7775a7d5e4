"""Command-line front end.

Seven subcommands cover the pipeline end to end: verify a partition's
Schur ring, evaluate the non-schurian prediction, print structure
constants, run the schurian oracle, compute the invariant slopes of a
linear map, cross-validate prediction against oracle over a whole field,
and tabulate the prediction census.

Reports are emitted as canonical bytes so repeated runs diff clean: JSON
is sorted-key with two-space indent and a trailing newline, TSV has a
fixed documented column order.  Group orders are serialized as decimal
strings; they overflow 64-bit integers as early as the rank-2 scheme on
5^2 points.  Exit status is 0 on success, 1 when a verification claim
fails (a failed axiom check, an inconsistent schurian-test, a
cross-validation contradiction), and 2 for usage, parse, and sizing
problems.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .analysis import (
    NO_PREDICTION,
    PREDICTS_NONSCHURIAN,
    Census,
    CrossValidation,
    analyze_partition,
    census,
    coerce_matrix,
    cross_validate,
    invariant_slopes,
    nonschurian_criterion,
)
from .errors import InconsistencyError, PartitionFormatError
from .gf import Field, field_from_literal
from .lines import (
    DEFAULT_CENSUS_CAP,
    LinePartition,
    load_partition,
    partition_to_json_dict,
    singleton_slopes,
    slope_literal,
)
from .perms import DEFAULT_ORACLE_CAP
from .schur import SchurBasis, structure_constants, verify_line_sum_identities, \
    verify_schur_axioms

TABLE_COMMANDS = ("census", "cross-validate")


# ---------------------------------------------------------------------------
# canonical emission
# ---------------------------------------------------------------------------

def emit_report(report, fmt: str = "json") -> bytes:
    """Serialize a report deterministically.

    JSON accepts any plain document and is byte-stable because keys are
    sorted.  TSV accepts only the two table types; everything else has no
    sensible column order.
    """
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt != "tsv":
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(report, Census):
        lines = ["partition\tcriterion_verdict"]
        lines += [f"{row.partition}\t{_verdict(row.predicts)}" for row in report.rows]
    elif isinstance(report, CrossValidation):
        lines = ["partition\tcriterion_verdict\toracle_verdict\taut_order"]
        lines += ["\t".join((row.partition, _verdict(row.predicts),
                             "schurian" if row.schurian else "non_schurian",
                             str(row.aut_order)))
                  for row in report.rows]
    else:
        raise ValueError(f"no tsv rendering for {type(report).__name__}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _verdict(predicts: bool) -> str:
    return PREDICTS_NONSCHURIAN if predicts else NO_PREDICTION


def _provenance(field: Field) -> dict:
    # modulus coefficients run constant term first; the element with
    # index p is the residue of x, the chosen generator
    return {"field": field.literal, "modulus": list(field.modulus)}


def _partition_doc(pi: LinePartition) -> list[list[str]]:
    return partition_to_json_dict(pi)["classes"]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_verify_schur_ring(args) -> tuple[bytes, int]:
    pi = load_partition(args.partition)
    axioms = verify_schur_axioms(SchurBasis.from_partition(pi))
    identities = verify_line_sum_identities(pi)
    ok = axioms.ok and identities.ok
    doc = dict(_provenance(pi.field),
               partition=_partition_doc(pi),
               schur_axioms_ok=axioms.ok,
               line_identities_ok=identities.ok,
               failures=list(axioms.failures) + list(identities.failures),
               ok=ok)
    return emit_report(doc, args.format), 0 if ok else 1


def _cmd_check_condition(args) -> tuple[bytes, int]:
    pi = load_partition(args.partition)
    report = nonschurian_criterion(pi)
    doc = dict(_provenance(pi.field),
               partition=_partition_doc(pi),
               singleton_slopes=[slope_literal(pi.field, s)
                                 for s in sorted(singleton_slopes(pi))],
               condition_holds=report.holds,
               criterion_verdict=_verdict(report.holds),
               normalized_partition=(None if report.normalized is None
                                     else _partition_doc(report.normalized)),
               normalized_condition_holds=report.normalized_holds,
               witness_matrix=(None if report.matrix is None
                               else [list(row) for row in report.matrix]))
    return emit_report(doc, args.format), 0


def _cmd_structure_constants(args) -> tuple[bytes, int]:
    pi = load_partition(args.partition)
    basis = SchurBasis.from_partition(pi)
    tensor = structure_constants(basis)
    doc = dict(_provenance(pi.field),
               partition=_partition_doc(pi),
               rank=len(basis.blocks),
               class_sizes=[len(block) for block in basis.blocks],
               tensor=tensor.tolist())
    return emit_report(doc, args.format), 0


def _cmd_schurian_test(args) -> tuple[bytes, int]:
    pi = load_partition(args.partition)
    report = analyze_partition(pi, oracle_cap=args.oracle_cap)
    doc = dict(_provenance(pi.field),
               partition=_partition_doc(pi),
               scheme_rank=report.scheme_rank,
               aut_order=str(report.aut_order),
               stabilizer_orbit_sizes=list(report.stabilizer_orbit_sizes),
               class_sizes=list(report.class_sizes),
               oracle_verdict=report.oracle_verdict,
               criterion_verdict=report.criterion_verdict,
               consistent=report.consistent)
    return emit_report(doc, args.format), 0 if report.consistent else 1


def _cmd_invariant_slopes(args) -> tuple[bytes, int]:
    field = field_from_literal(args.field)
    matrix = _load_matrix(args.partition, field)
    fixed = sorted(invariant_slopes(field, matrix))
    doc = dict(_provenance(field),
               matrix=matrix.tolist(),
               invariant_slopes=[slope_literal(field, s) for s in fixed],
               count=len(fixed))
    return emit_report(doc, args.format), 0


def _cmd_cross_validate(args) -> tuple[bytes, int]:
    field = field_from_literal(args.field)
    table = cross_validate(field, scope="all", oracle_cap=args.oracle_cap,
                           census_cap=args.census_cap, workers=args.workers)
    if args.format == "tsv":
        return emit_report(table, "tsv"), 0
    doc = dict(_provenance(field),
               scope=table.scope,
               total=table.total,
               predicted_nonschurian=table.predicted_nonschurian,
               predicted_schurian=table.predicted_schurian,
               unpredicted_nonschurian=table.unpredicted_nonschurian,
               unpredicted_schurian=table.unpredicted_schurian,
               rows=[dict(partition=row.partition,
                          criterion_verdict=_verdict(row.predicts),
                          oracle_verdict="schurian" if row.schurian else "non_schurian",
                          aut_order=str(row.aut_order))
                     for row in table.rows])
    return emit_report(doc), 0


def _cmd_census(args) -> tuple[bytes, int]:
    field = field_from_literal(args.field)
    table = census(field, census_cap=args.census_cap)
    if args.format == "tsv":
        return emit_report(table, "tsv"), 0
    doc = dict(_provenance(field),
               total=table.total,
               predicted_nonschurian=table.predicted,
               rows=[dict(partition=row.partition,
                          criterion_verdict=_verdict(row.predicts))
                     for row in table.rows])
    return emit_report(doc), 0


def _load_matrix(path: str, field: Field):
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict) or "matrix" not in data:
        raise PartitionFormatError(
            f"{path}: expected a JSON object with a 'matrix' key")
    if "field" in data and data["field"] != field.literal:
        raise PartitionFormatError(
            f"{path}: file names field {data['field']!r} but --field "
            f"says {field.literal!r}")
    return coerce_matrix(field, data["matrix"])


_HANDLERS = {
    "verify-schur-ring": _cmd_verify_schur_ring,
    "check-condition": _cmd_check_condition,
    "structure-constants": _cmd_structure_constants,
    "schurian-test": _cmd_schurian_test,
    "invariant-slopes": _cmd_invariant_slopes,
    "cross-validate": _cmd_cross_validate,
    "census": _cmd_census,
}


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schur-census",
        description="Schur rings over F_q^2 from line partitions: "
                    "verification, schurian oracle, and census.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name, help_text, *, field=False, partition=None, oracle=False,
                census_cap=False, workers=False):
        cmd = sub.add_parser(name, help=help_text, description=help_text)
        if field:
            cmd.add_argument("--field", required=True, metavar="p^e",
                             help="field literal such as 5^1 or 3^2")
        if partition:
            cmd.add_argument("--partition", required=True, metavar="FILE",
                             help=partition)
        if oracle:
            cmd.add_argument("--oracle-cap", type=int, metavar="N",
                             default=DEFAULT_ORACLE_CAP,
                             help="largest point count the oracle will accept "
                                  f"(default {DEFAULT_ORACLE_CAP})")
        if census_cap:
            cmd.add_argument("--census-cap", type=int, metavar="N",
                             default=DEFAULT_CENSUS_CAP,
                             help="largest slope count to enumerate over "
                                  f"(default {DEFAULT_CENSUS_CAP})")
        if workers:
            cmd.add_argument("--workers", type=int, metavar="N", default=None,
                             help="worker processes (default: all cores; "
                                  "1 runs fully sequential)")
        cmd.add_argument("--format", choices=("json", "tsv"), default="json",
                         help="output format (tsv only for the table commands)")
        cmd.add_argument("--output", metavar="PATH", default=None,
                         help="write the report here instead of stdout")
        return cmd

    partition_help = "partition file: " \
                     '{"field": "5^1", "classes": [["inf"], ["0"], ...]}'
    command("verify-schur-ring",
            "check the Schur ring axioms and the closed product formulas "
            "for a partition's class sums",
            partition=partition_help)
    command("check-condition",
            "evaluate the non-schurian prediction on a partition, as given "
            "and after moving its three least singleton slopes to 0, 1, inf",
            partition=partition_help)
    command("structure-constants",
            "print the full structure constant tensor of a partition's "
            "Schur ring",
            partition=partition_help)
    command("schurian-test",
            "decide schurianness by automorphism group oracle and compare "
            "with the prediction",
            partition=partition_help, oracle=True)
    command("invariant-slopes",
            "list the lines a linear map carries onto themselves",
            field=True,
            partition='matrix file: {"matrix": [[...]]} with rows over F_p')
    command("cross-validate",
            "run prediction and oracle over every partition of a field's "
            "slopes and tabulate the verdict pairs",
            field=True, oracle=True, census_cap=True, workers=True)
    command("census",
            "tabulate the prediction over every partition of a field's "
            "slopes (no oracle runs)",
            field=True, census_cap=True)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format == "tsv" and args.command not in TABLE_COMMANDS:
        print("error: tsv output is only available for census and "
              "cross-validate", file=sys.stderr)
        return 2
    for flag in ("oracle_cap", "census_cap"):
        cap = getattr(args, flag, None)
        if cap is not None and cap <= 0:
            print(f"error: --{flag.replace('_', '-')} must be positive",
                  file=sys.stderr)
            return 2
    workers = getattr(args, "workers", None)
    if workers is not None and workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return 2

    try:
        data, code = _HANDLERS[args.command](args)
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, OSError) as exc:
        # covers parse errors, sizing errors, bad literals, unreadable files
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.output is None:
            sys.stdout.write(data.decode("utf-8"))
        else:
            with open(args.output, "wb") as handle:
                handle.write(data)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
