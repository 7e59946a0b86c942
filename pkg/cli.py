"""
Command-line interface for pseudometric space analysis

Reads space and relation documents, runs the classification, IP, group,
similarity and construction operations, and prints reports as sorted JSON
documents or plain key/value lines.

Usage:
    python cli.py [--bound N] [--structural-only] [--format document|plain]
                  [--log-level LEVEL] <command> ...

Exit codes:
    0  success
    1  a property check or cross-check failed
    2  the input could not be parsed
    3  the distance matrix violates a pseudometric axiom
    4  the brute-force bound was exceeded
    5  construction, relation or point-set error
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from classify import (
    classify,
    ip_oracle,
    is_ip,
    metric_reflection,
    reflection_sym_full,
    zero_block_sizes,
)
from config import DEFAULTS, ConfigValidationError, load_relation, load_space, space_to_document
from construct import (
    ConstructionError,
    discrete_from_relation,
    pseudorectangle_from_relation,
    strongly_rigid_from_relation,
)
from core import SpaceValidationError, TheoremViolation
from groups import GroupError, TooLarge, pi_group, reflection_hom
from partition import PartitionError
from propcheck import run_campaign
from similarity import SimilarityError, find_similarity, rejection_reason

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_TOO_LARGE = 4
EXIT_CONSTRUCTION = 5

KINDS = ("discrete", "strongly-rigid", "pseudorectangle")


def _plain(payload: Dict[str, Any]) -> str:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, separators=(",", ":"))
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def emit(payload: Dict[str, Any], fmt: str) -> None:
    """Print a report in the requested format"""
    if fmt == "plain":
        print(_plain(payload))
    else:
        print(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))


def cmd_classify(args: argparse.Namespace) -> int:
    space = load_space(args.input)
    report = classify(space, bound=args.bound, structural_only=args.structural_only)
    payload = report.to_dict()
    payload["points"] = space.n
    emit(payload, args.format)
    return EXIT_OK


def cmd_ip(args: argparse.Namespace) -> int:
    space = load_space(args.input)
    payload: Dict[str, Any] = {
        "ip_member": is_ip(space),
        "zero_block_sizes": zero_block_sizes(space),
        "reflection_sym_full": reflection_sym_full(space),
        "method": "structural",
    }
    if not args.structural_only and space.n <= args.bound:
        oracle = ip_oracle(space, args.bound)
        if oracle != payload["ip_member"]:
            raise TheoremViolation(f"IP: structural {payload['ip_member']}, brute force {oracle}")
        payload["method"] = "both-agree"
    emit(payload, args.format)
    return EXIT_OK


def cmd_groups(args: argparse.Namespace) -> int:
    space = load_space(args.input)
    reflection = metric_reflection(space).space
    if args.structural_only:
        emit({
            "points": space.n,
            "reflection_size": reflection.n,
            "reflection_sym_full": reflection_sym_full(space),
            "ip_member": is_ip(space),
        }, args.format)
        return EXIT_OK

    hom = reflection_hom(space, args.bound)
    pi = pi_group(space, args.bound)
    image = hom.image()
    emit({
        "cs": [phi.label(space.points) for phi in hom.source],
        "cs_order": hom.source.order,
        "pi": [phi.label(space.points) for phi in pi],
        "pi_order": pi.order,
        "reflection_cs_order": hom.target.order,
        "h_table": [[phi.label(space.points), img.label(reflection.points)] for phi, img in hom.table()],
        "h_image_order": image.order,
        "h_surjective": image.order == hom.target.order,
    }, args.format)
    return EXIT_OK


def cmd_similar(args: argparse.Namespace) -> int:
    space_x = load_space(args.input_a)
    space_y = load_space(args.input_b)
    witness = find_similarity(space_x, space_y, bound=args.search_bound)
    if witness is None:
        reason = rejection_reason(space_x, space_y) or "exhaustive search found no witness"
        if args.format == "plain":
            print(f"NOT SIMILAR: {reason}")
        else:
            emit({"result": "NOT SIMILAR", "reason": reason}, args.format)
        return EXIT_OK
    emit({
        "result": "SIMILAR",
        "psi": [list(row) for row in witness.psi_table()],
        "f": [list(row) for row in witness.f_table()],
    }, args.format)
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    rel = load_relation(args.relation)
    if args.kind == "discrete":
        space = discrete_from_relation(rel)
    elif args.kind == "strongly-rigid":
        space = strongly_rigid_from_relation(rel, args.seed)
    else:
        space = pseudorectangle_from_relation(rel, args.seed)
    emit(space_to_document(space, name=f"{args.kind} space"), args.format)
    return EXIT_OK


def cmd_propcheck(args: argparse.Namespace) -> int:
    report = run_campaign(args.seed, args.count, args.max_n, bound=args.bound)
    emit(report.to_dict(), args.format)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudometric",
        description="Analyze finite pseudometric spaces."
    )
    parser.add_argument("--bound", type=int, default=DEFAULTS["bound"],
                        help="Brute-force cap on the number of points (default: %(default)s)")
    parser.add_argument("--search-bound", type=int, default=DEFAULTS["search_bound"],
                        help="Cap for the similarity search (default: %(default)s)")
    parser.add_argument("--structural-only", action="store_true",
                        help="Never enumerate permutations")
    parser.add_argument("--format", choices=["document", "plain"], default=DEFAULTS["format"])
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Classification report for a space")
    p.add_argument("input")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("ip", help="Membership in the class IP")
    p.add_argument("input")
    p.set_defaults(handler=cmd_ip)

    p = sub.add_parser("groups", help="Cs, PI and the homomorphism onto the reflection")
    p.add_argument("input")
    p.set_defaults(handler=cmd_groups)

    p = sub.add_parser("similar", help="Search a combinatorial similarity witness")
    p.add_argument("input_a")
    p.add_argument("input_b")
    p.set_defaults(handler=cmd_similar)

    p = sub.add_parser("construct", help="Realize a relation as a zero-relation")
    p.add_argument("relation")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("propcheck", help="Run the seeded property campaign")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--max-n", type=int, default=6)
    p.set_defaults(handler=cmd_propcheck)
    return parser


def _error(e: Exception) -> None:
    kind = type(e).__name__
    message = str(e)
    line = message if message.startswith(kind) else f"{kind}: {message}"
    print(f"error: {line}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s"
    )

    if args.command == "construct" and args.kind != "discrete" and args.seed is None:
        _error(ConstructionError(f"--seed is required for {args.kind} spaces"))
        return EXIT_PARSE

    try:
        return args.handler(args)
    except ConfigValidationError as e:
        _error(e)
        return EXIT_PARSE
    except SpaceValidationError as e:
        _error(e)
        return EXIT_VALIDATION
    except TooLarge as e:
        _error(e)
        return EXIT_TOO_LARGE
    except (ConstructionError, PartitionError, SimilarityError) as e:
        _error(e)
        return EXIT_CONSTRUCTION
    except (TheoremViolation, GroupError) as e:
        _error(e)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
