"""Command-line front end.

Usage sketch:

    entcomb gen --kind ghz --m 2 --out ghz3.json
    entcomb table ghz3.json
    entcomb region ghz3.json --alice 0
    entcomb member ghz3.json --point 0.5,0.5
    entcomb volume ghz3.json
    entcomb comb ghz3.json --order 2,1
    entcomb decompose ghz3.json --point 0.5,0.5
    entcomb ledger state.json --point 0.2,0.8 --n0 1 --rounds 10
    entcomb rate source.json target.json --best
    entcomb overlap ghz3.json --constraints cons.json

Commands that read an input file accept either a state file or an entropy
table export. Output goes to stdout unless ``--out`` is given, and is
byte-deterministic: JSON keys sorted, floats with 12 significant digits.
Exit codes: 0 success, 1 domain error (JSON diagnostics on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys

from .bounds import (
    best_rate_over_parties,
    load_constraints,
    rate_lower_bound,
    region_overlap,
)
from .entropy import build_table, table_from_payload, table_to_payload
from .errors import EntcombError, InvalidInput
from .ioutil import canonical_json, load_json, mask_to_str, write_text_atomic
from .ledger import breeding_schedule, caratheodory_decompose, greedy_comb, ledger_csv
from .region import (
    affine_dimension,
    build_region,
    contains,
    degenerate,
    region_to_payload,
    region_vertices_csv,
    volume,
)
from .states import (
    STANDARD_KINDS,
    load_state,
    standard_state,
    state_from_payload,
    state_to_payload,
    with_alice,
)


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats: {exc}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints: {exc}")


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _table_from_input(path: str, alice: int):
    payload = load_json(path)
    if isinstance(payload, dict) and "parties" in payload:
        return build_table(with_alice(state_from_payload(payload), alice))
    if isinstance(payload, dict) and "entropies" in payload:
        if alice != 0:
            raise InvalidInput(
                "--alice applies to state files; an entropy table is already "
                "rooted at its distinguished party"
            )
        return table_from_payload(payload)
    raise InvalidInput(f"{path} is neither a state file nor an entropy table")


def _cmd_gen(args) -> str:
    state = standard_state(args.kind, args.m, local_dim=args.local_dim, seed=args.seed)
    return canonical_json(state_to_payload(state))


def _cmd_table(args) -> str:
    table = _table_from_input(args.input, args.alice)
    return canonical_json(table_to_payload(table))


def _cmd_region(args) -> str:
    region = build_region(_table_from_input(args.input, args.alice))
    if args.format == "csv":
        return region_vertices_csv(region)
    return canonical_json(region_to_payload(region))


def _cmd_member(args) -> str:
    region = build_region(_table_from_input(args.input, args.alice))
    member, witness = contains(region, args.point, mode=args.mode, tol=args.tol)
    return canonical_json(
        {
            "member": member,
            "mode": args.mode,
            "point": [float(v) for v in args.point],
            "witness": None if witness is None else witness.to_payload(region.m),
        }
    )


def _cmd_volume(args) -> str:
    region = build_region(_table_from_input(args.input, args.alice))
    return canonical_json(
        {
            "volume": volume(region),
            "dimension": affine_dimension(region),
            "degenerate": degenerate(region),
            "s_A": region.s_A,
            "m": region.m,
        }
    )


def _cmd_comb(args) -> str:
    table = _table_from_input(args.input, args.alice)
    final, steps = greedy_comb(table, args.order)
    return canonical_json(
        {
            "order": list(args.order),
            "final": [float(v) for v in final],
            "steps": [
                {
                    "bob": step.bob,
                    "branch": step.branch,
                    "gain": step.gain,
                    "a_side_entropy_after": step.a_side_entropy_after,
                    "approximate": step.approximate,
                }
                for step in steps
            ],
        }
    )


def _cmd_decompose(args) -> str:
    region = build_region(_table_from_input(args.input, args.alice))
    decomp = caratheodory_decompose(region, args.point)
    return canonical_json(
        {
            "target": [float(v) for v in args.point],
            "vertices": [list(map(float, v)) for v in decomp.vertices],
            "weights": [float(w) for w in decomp.weights],
        }
    )


def _cmd_ledger(args) -> str:
    region = build_region(_table_from_input(args.input, args.alice))
    decomp = caratheodory_decompose(region, args.point)
    report = breeding_schedule(decomp, n0=args.n0, rounds=args.rounds, copies=args.copies)
    if args.format == "csv":
        return ledger_csv(report)
    return canonical_json(
        {
            "n0": report.n0,
            "rounds": report.rounds,
            "x": report.x,
            "borrowed_rates": [float(v) for v in report.borrowed_rates],
            "produced_rates": [float(v) for v in report.produced_rates],
            "ratios": [None if math.isinf(v) else float(v) for v in report.ratios],
            "total_consumed": report.total_consumed,
            "borrowed_weight": report.borrowed_weight,
            "rows": [
                {
                    "round": row.index,
                    "consumed": row.consumed,
                    "borrowed": [float(v) for v in row.borrowed],
                    "produced": [float(v) for v in row.produced],
                    "cumulative_consumed": row.cumulative_consumed,
                    "borrowed_weight": row.borrowed_weight,
                }
                for row in report.rows
            ],
        }
    )


def _cmd_rate(args) -> str:
    source = load_state(args.source)
    target = load_state(args.target)
    if args.best:
        bound = best_rate_over_parties(source, target)
    else:
        bound = rate_lower_bound(source, target, alice=args.alice or 0)
    m = source.layout.n_parties - 1
    return canonical_json(
        {
            "r": bound.r,
            "alice_choice": bound.alice_choice,
            "binding_subset": mask_to_str(bound.binding_subset, m),
        }
    )


def _cmd_overlap(args) -> str:
    region = build_region(_table_from_input(args.input, args.alice))
    constraints = load_constraints(args.constraints)
    feasible, witness = region_overlap(region, constraints)
    return canonical_json(
        {
            "feasible": feasible,
            "witness": None if witness is None else [float(v) for v in witness],
        }
    )


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="state file or entropy-table JSON")
    parser.add_argument(
        "--alice",
        type=int,
        default=0,
        metavar="K",
        help="index of the distinguished party in the state file (default 0)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entcomb",
        description="Pairwise entanglement distribution regions and related queries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a standard state file")
    p.add_argument("--kind", required=True, choices=STANDARD_KINDS)
    p.add_argument("--m", required=True, type=int, help="number of non-distinguished parties")
    p.add_argument("--local-dim", type=int, default=2, dest="local_dim")
    p.add_argument("--seed", type=int, default=None, help="required for haar_random")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("table", help="subset entropies of a state")
    _add_input(p)
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("region", help="full region: corners, halfspaces, positive part")
    _add_input(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(handler=_cmd_region)

    p = sub.add_parser("member", help="membership verdict with witness")
    _add_input(p)
    p.add_argument("--point", required=True, type=_float_list)
    p.add_argument(
        "--mode", choices=("exact_region", "down_closure"), default="exact_region"
    )
    p.add_argument("--tol", type=_positive_float, default=None)
    p.set_defaults(handler=_cmd_member)

    p = sub.add_parser("volume", help="region volume and degeneracy")
    _add_input(p)
    p.set_defaults(handler=_cmd_volume)

    p = sub.add_parser("comb", help="greedy comb trace for a processing order")
    _add_input(p)
    p.add_argument("--order", required=True, type=_int_list)
    p.set_defaults(handler=_cmd_comb)

    p = sub.add_parser("decompose", help="corner decomposition of a member point")
    _add_input(p)
    p.add_argument("--point", required=True, type=_float_list)
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("ledger", help="breeding schedule for a member point")
    _add_input(p)
    p.add_argument("--point", required=True, type=_float_list)
    p.add_argument("--n0", type=_positive_float, default=1.0)
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--copies", type=_positive_float, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(handler=_cmd_ledger)

    p = sub.add_parser("rate", help="LOCC rate lower bound from source to target")
    p.add_argument("source")
    p.add_argument("target")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--alice", type=int, default=None)
    group.add_argument("--best", action="store_true", help="optimize over party choices")
    p.set_defaults(handler=_cmd_rate)

    p = sub.add_parser("overlap", help="feasibility of region vs constraint file")
    _add_input(p)
    p.add_argument("--constraints", required=True)
    p.set_defaults(handler=_cmd_overlap)

    for sp in sub.choices.values():
        sp.add_argument("--out", default=None, help="write output here (atomic)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and args.kind == "haar_random" and args.seed is None:
        parser.error("--seed is required for --kind haar_random")
    if args.command == "ledger" and args.rounds < 0:
        parser.error("--rounds must be nonnegative")
    try:
        text = args.handler(args)
        if args.out:
            write_text_atomic(args.out, text)
        else:
            sys.stdout.write(text)
    except EntcombError as exc:
        sys.stderr.write(
            canonical_json({"error": type(exc).__name__, "message": str(exc)})
        )
        return 1
    except OSError as exc:
        sys.stderr.write(canonical_json({"error": "IOError", "message": str(exc)}))
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
