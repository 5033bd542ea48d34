"""
Command-line front end of the toolkit (``dpk``).

    dpk exc --degree D                 exceptional classes of E_{9-D}
    dpk roots --degree D               roots of E_{9-D}
    dpk embed --type T --degree D      embedding classes of a root lattice
    dpk reduce --type T --degree D     blow-down criterion per embedding class
    dpk tables --char P [--diff]       non-equivariant RDP configurations
    dpk verify --char P [--id ID]      verify the bundled surfaces
    dpk all                            everything above that has a fixed answer
    dpk catalog --char P               Artin normal forms with Tjurina numbers
    dpk classify --char P EQUATION     classify a local equation in x, y, z

Every command takes ``--format json|text``. Exit status: 0 pass,
1 verification failure, 2 usage or input error, 130 interrupted.
"""

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv

from src.config.logging import setup_logging
from src.config.settings import get_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130


def _emit(args: argparse.Namespace, payload: object, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ============================================================================
# LATTICE COMMANDS
# ============================================================================

def cmd_exc(args: argparse.Namespace) -> int:
    """List the exceptional classes of E_{9-d}."""
    from src.lattice.core import QuadraticSpace, enumerate_exceptional

    space = QuadraticSpace.for_degree(args.degree)
    vectors = enumerate_exceptional(space)
    lines = [f"|Exc| = {len(vectors)} for d={args.degree}"]
    if args.list:
        lines.extend(f"  {v.coords}" for v in vectors)
    _emit(args, {"degree": args.degree, "count": len(vectors), "vectors": [list(v.coords) for v in vectors]}, "\n".join(lines))
    return EXIT_OK


def cmd_roots(args: argparse.Namespace) -> int:
    """List the roots of E_{9-d}."""
    from src.lattice.core import QuadraticSpace, enumerate_roots

    space = QuadraticSpace.for_degree(args.degree)
    roots = enumerate_roots(space)
    lines = [f"|R| = {len(roots)} for d={args.degree}"]
    if args.list:
        lines.extend(f"  {r.coords}" for r in roots)
    _emit(args, {"degree": args.degree, "count": len(roots), "roots": [list(r.coords) for r in roots]}, "\n".join(lines))
    return EXIT_OK


def cmd_embed(args: argparse.Namespace) -> int:
    """Show the embedding classes of a root lattice with a representative each."""
    from src.lattice.dynkin import DynkinType
    from src.services.verification_service import VerificationService

    report = VerificationService().run_reduce(DynkinType.parse(args.type), args.degree)
    lines = [f"{report.dynkin} in E_{9 - args.degree}: {len(report.classes)} embedding class(es)"]
    for i, c in enumerate(report.classes, 1):
        lines.append(f"  class {i}: orthogonal type {c['orthogonal_type']}, {c['orthogonal_exceptional']} orthogonal exceptional vectors")
        lines.extend(f"      {tuple(r)}" for r in c["representative"])
    _emit(args, report.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    """Report the blow-down criterion for every embedding class."""
    from src.lattice.dynkin import DynkinType
    from src.services.verification_service import VerificationService

    report = VerificationService().run_reduce(DynkinType.parse(args.type), args.degree)
    _emit(args, report.to_dict(), report.render_text())
    return EXIT_OK if report.criteria_agree else EXIT_FAILURE


# ============================================================================
# CATALOG AND TABLE COMMANDS
# ============================================================================

def cmd_tables(args: argparse.Namespace) -> int:
    """Regenerate the configuration tables, optionally diffing against the bundled ones."""
    from src.services.verification_service import VerificationService

    degrees = [args.degree] if args.degree else None
    report = VerificationService().run_tables(args.char, degrees, diff=args.diff)
    _emit(args, report.to_dict(), report.render_text())
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_catalog(args: argparse.Namespace) -> int:
    """Print the RDP types of a characteristic with normal forms and Tjurina numbers."""
    from src.services.catalog_service import (
        catalog_types,
        check_characteristic,
        is_nonequivariant,
        normal_form,
        tjurina_reference,
    )

    check_characteristic(args.char)
    rows = []
    for t in catalog_types(args.char):
        rows.append({
            "type": str(t),
            "normal_form": normal_form(t, args.char),
            "tjurina": tjurina_reference(t, args.char),
            "nonequivariant": is_nonequivariant(t, args.char),
        })
    lines = [f"RDP catalog in characteristic {args.char}"]
    for row in rows:
        marker = "*" if row["nonequivariant"] else " "
        lines.append(f"  {marker} {row['type']:<6} tau={row['tjurina']:<3} {row['normal_form']}")
    lines.append("  (* not tangent-equivariant)")
    _emit(args, {"characteristic": args.char, "types": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    """Classify the germ at the origin of a local equation."""
    from src.services.catalog_service import check_characteristic
    from src.services.singularity_service import classify_rdp, local_germ

    check_characteristic(args.char)
    result = classify_rdp(local_germ(args.equation, args.char))
    payload = {
        "equation": args.equation,
        "characteristic": args.char,
        "type": str(result.rdp),
        "corank": result.corank,
        "tjurina": result.tjurina,
        "trace": list(result.trace),
    }
    lines = [f"{result.rdp}  (corank {result.corank}, tau = {result.tjurina})"]
    lines.extend(f"  {step}" for step in result.trace)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# ============================================================================
# VERIFICATION COMMANDS
# ============================================================================

def cmd_verify(args: argparse.Namespace) -> int:
    """Verify the bundled surfaces of one characteristic."""
    from src.services.verification_service import VerificationService

    summary = VerificationService().verify_characteristics((args.char,), args.id, args.jobs)
    if args.id and not summary.records:
        logger.error("No record %s in characteristic %s", args.id, args.char)
        return EXIT_USAGE
    _emit(args, json.loads(summary.to_json()), summary.render_text())
    return EXIT_OK if summary.passed else EXIT_FAILURE


def cmd_all(args: argparse.Namespace) -> int:
    """Lattice counts, table diffs and the whole dataset."""
    from src.services.catalog_service import SUPPORTED_CHARACTERISTICS
    from src.services.verification_service import VerificationService

    service = VerificationService()
    counts = service.lattice_counts()
    counts_ok = service.lattice_counts_match()
    tables = [service.run_tables(p, diff=True) for p in SUPPORTED_CHARACTERISTICS]
    summary = service.verify_characteristics(SUPPORTED_CHARACTERISTICS, jobs=args.jobs)
    passed = counts_ok and all(t.passed for t in tables) and summary.passed

    lines = ["Lattice counts (n: |Exc|, |R|)"]
    lines.extend(f"  {n}: {exc}, {roots}" for n, (exc, roots) in counts.items())
    lines.append("  match" if counts_ok else "  MISMATCH")
    for table in tables:
        lines.append(table.render_text())
    lines.append(summary.render_text())
    payload = {
        "counts": {str(n): {"exceptional": e, "roots": r} for n, (e, r) in counts.items()},
        "counts_passed": counts_ok,
        "tables": [t.to_dict() for t in tables],
        "verification": json.loads(summary.to_json()),
        "passed": passed,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAILURE


# ============================================================================
# MAIN CLI
# ============================================================================

COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "exc": cmd_exc,
    "roots": cmd_roots,
    "embed": cmd_embed,
    "reduce": cmd_reduce,
    "tables": cmd_tables,
    "verify": cmd_verify,
    "all": cmd_all,
    "catalog": cmd_catalog,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpk",
        description="Verification toolkit for RDP del Pezzo surfaces in small characteristic",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    app = get_settings().app
    parser.add_argument("--version", action="version", version=f"{app.APP_NAME} {app.APP_VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format")
    common.add_argument("--loglevel", default=None, choices=["debug", "info", "warning", "error"])

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    for name, helptext in (("exc", "Exceptional classes"), ("roots", "Roots")):
        sub = subparsers.add_parser(name, parents=[common], help=helptext)
        sub.add_argument("--degree", type=int, required=True, help="Degree d in 1..8")
        sub.add_argument("--list", action="store_true", help="Print the vectors")

    for name, helptext in (("embed", "Embedding classes of a root lattice"), ("reduce", "Reduction criterion per class")):
        sub = subparsers.add_parser(name, parents=[common], help=helptext)
        sub.add_argument("--type", required=True, help="Dynkin type, e.g. A4+A1")
        sub.add_argument("--degree", type=int, required=True, help="Degree d in 1..8")

    tables = subparsers.add_parser("tables", parents=[common], help="Non-equivariant configuration tables")
    tables.add_argument("--char", type=int, required=True, help="Characteristic 3, 5 or 7")
    tables.add_argument("--degree", type=int, help="Only this degree")
    tables.add_argument("--diff", action="store_true", help="Compare against the bundled tables")

    verify = subparsers.add_parser("verify", parents=[common], help="Verify the bundled surfaces")
    verify.add_argument("--char", type=int, required=True, help="Characteristic 3, 5 or 7")
    verify.add_argument("--id", help="Only this record")
    verify.add_argument("--jobs", type=int, default=None, help="Worker processes")

    everything = subparsers.add_parser("all", parents=[common], help="Run every check")
    everything.add_argument("--jobs", type=int, default=None, help="Worker processes")

    catalog = subparsers.add_parser("catalog", parents=[common], help="RDP catalog of a characteristic")
    catalog.add_argument("--char", type=int, required=True, help="Characteristic 3, 5 or 7")

    classify = subparsers.add_parser("classify", parents=[common], help="Classify a local equation")
    classify.add_argument("--char", type=int, required=True, help="Characteristic 3, 5 or 7")
    classify.add_argument("equation", help="Equation in x, y, z with a singular point at the origin")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    setup_logging(service_name="cli", log_level=args.loglevel)

    from src.services.base_service import BaseServiceError

    try:
        return COMMANDS[args.command](args)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_INTERRUPTED
    except (BaseServiceError, OSError) as e:
        logger.error("Error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
