"""CLI module for apn-forge."""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from apnforge import application
from apnforge._version import __version__
from apnforge.domain.base import ForgeBaseModel
from apnforge.domain.campaign import CampaignKind, OutputFormat
from apnforge.exceptions import ApnForgeError
from apnforge.infrastructure.stdio import write_stderr, write_stdout

LOG_LEVEL_ENV = "APN_FORGE_LOG_LEVEL"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FINDINGS = 2


def _hex(text: str) -> int:
    return int(text.removeprefix("0x"), 16)


def _add_field_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-m", type=int, required=True, help="extension degree")
    modulus = parser.add_mutually_exclusive_group()
    modulus.add_argument(
        "--red-poly",
        type=_hex,
        default=None,
        help="reduction polynomial in hex (default: smallest irreducible)",
    )
    modulus.add_argument(
        "--field-poly",
        type=Path,
        default=None,
        help="m:hex reduction polynomial file, as used by campaigns",
    )


def _add_allow_large(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--allow-large",
        dest="allow_large",
        action="store_true",
        help="lift the field size limit of the exhaustive scan",
    )


def generate_cli_parser() -> argparse.ArgumentParser:
    """Generate the argument parser for the apn-forge CLI."""
    parser = argparse.ArgumentParser(
        description="apn-forge: APN checks, surface point counts and bounds "
        "for x^(q-2)+g(x) over GF(2^m)."
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log debug output to stderr"
    )
    subparsers = parser.add_subparsers(dest="subcommand", help="Available subcommands")

    # 'field' subcommand
    field_parser = subparsers.add_parser("field", help="Field information")
    field_sub = field_parser.add_subparsers(dest="action")
    _add_field_args(field_sub.add_parser("info", help="Describe GF(2^m)"))

    # 'apn' subcommand
    apn_parser = subparsers.add_parser("apn", help="Differential uniformity")
    apn_sub = apn_parser.add_subparsers(dest="action")
    for name, text in (
        ("check", "Differential uniformity and APN verdict"),
        ("spectrum", "Differential spectrum"),
    ):
        action = apn_sub.add_parser(name, help=text)
        action.add_argument("poly", help="g, e.g. 'x^6+3*x^5+x^3' (hex coefficients)")
        _add_field_args(action)
        action.add_argument(
            "--plain",
            action="store_true",
            help="analyse g itself instead of x^(q-2)+g",
        )

    # 'surface' subcommand
    surface_parser = subparsers.add_parser("surface", help="Surface of g")
    surface_sub = surface_parser.add_subparsers(dest="action")
    count_parser = surface_sub.add_parser("count", help="Rational point counts")
    count_parser.add_argument("poly", help="g in the polynomial grammar")
    _add_field_args(count_parser)
    count_parser.add_argument("--threads", type=int, default=1)
    _add_allow_large(count_parser)
    singular_parser = surface_sub.add_parser("singular", help="Singular points")
    singular_parser.add_argument("poly", help="g in the polynomial grammar")
    _add_field_args(singular_parser)
    _add_allow_large(singular_parser)

    # 'bounds' subcommand
    bounds_parser = subparsers.add_parser("bounds", help="Point bounds")
    bounds_sub = bounds_parser.add_subparsers(dest="action")
    profile_parser = bounds_sub.add_parser("profile", help="All bounds for (d, m)")
    profile_parser.add_argument("-d", type=int, required=True)
    profile_parser.add_argument("-m", type=int, required=True)
    crossover_parser = bounds_sub.add_parser(
        "crossover", help="Smallest m with guaranteed non-APN"
    )
    crossover_parser.add_argument("-d", type=int, required=True)
    crossover_parser.add_argument("--isolated", action="store_true")

    # 'campaign' subcommand
    campaign_parser = subparsers.add_parser("campaign", help="Run a search campaign")
    campaign_parser.add_argument("kind", choices=[k.value for k in CampaignKind])
    campaign_parser.add_argument("--config", type=Path, default=None)
    campaign_parser.add_argument("--m-min", dest="m_min", type=int, default=None)
    campaign_parser.add_argument("--m-max", dest="m_max", type=int, default=None)
    campaign_parser.add_argument("--threads", type=int, default=None)
    campaign_parser.add_argument("--checkpoint", type=Path, default=None)
    campaign_parser.add_argument("--output", type=Path, default=None)
    campaign_parser.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=None
    )
    campaign_parser.add_argument("--field-poly", type=Path, default=None)
    campaign_parser.add_argument("--seed", type=int, default=None)
    campaign_parser.add_argument(
        "--allow-large", dest="allow_large", action="store_true", default=None
    )
    campaign_parser.add_argument(
        "--timings", action="store_true", default=None, help="record elapsed_ms"
    )
    return parser


def configure_logging(*, verbose: bool) -> None:
    """Send log records to stderr; stdout stays reserved for results."""
    level = "DEBUG" if verbose else os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        level = "WARNING"
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _emit(result: ForgeBaseModel | int) -> None:
    if isinstance(result, ForgeBaseModel):
        write_stdout(json.dumps(result.model_dump(mode="json"), indent=2))
    else:
        write_stdout(str(result))


def _run_campaign(args: argparse.Namespace) -> int:
    overrides = {
        "m_min": args.m_min,
        "m_max": args.m_max,
        "threads": args.threads,
        "checkpoint": args.checkpoint,
        "output": args.output,
        "format": args.format,
        "seed": args.seed,
        "allow_large": args.allow_large,
        "timings": args.timings,
    }
    cfg = application.load_campaign_config(
        CampaignKind(args.kind), args.config, overrides, args.field_poly
    )
    report = application.RUNNERS[cfg.kind](cfg)
    text = application.render_report(report, cfg)
    if text is not None:
        write_stdout(text)
    if report.has_findings:
        write_stderr(f"{len(report.summary.findings)} units reported findings")
        return EXIT_FINDINGS
    return EXIT_OK


def _red_poly(args: argparse.Namespace) -> int | None:
    return application.red_poly_for(args.m, args.red_poly, args.field_poly)


def dispatch(args: argparse.Namespace) -> int | None:
    """Run the selected command; ``None`` when no command was selected."""
    command = (args.subcommand, getattr(args, "action", None))
    if command == ("field", "info"):
        _emit(application.field_info(args.m, _red_poly(args)))
    elif command == ("apn", "check"):
        _emit(
            application.check_apn(
                args.poly, args.m, _red_poly(args), plain=args.plain
            )
        )
    elif command == ("apn", "spectrum"):
        _emit(
            application.spectrum(args.poly, args.m, _red_poly(args), plain=args.plain)
        )
    elif command == ("surface", "count"):
        _emit(
            application.count_surface(
                args.poly,
                args.m,
                _red_poly(args),
                workers=args.threads,
                allow_large=args.allow_large,
            )
        )
    elif command == ("surface", "singular"):
        _emit(
            application.singular_points(
                args.poly, args.m, _red_poly(args), allow_large=args.allow_large
            )
        )
    elif command == ("bounds", "profile"):
        _emit(application.bound_profile(args.d, args.m))
    elif command == ("bounds", "crossover"):
        _emit(application.crossover(args.d, isolated=args.isolated))
    elif args.subcommand == "campaign":
        return _run_campaign(args)
    else:
        return None
    return EXIT_OK


def main() -> None:
    """Entry point for the apn-forge command-line interface."""
    parser = generate_cli_parser()
    args = parser.parse_args()
    configure_logging(verbose=args.verbose)
    try:
        code = dispatch(args)
    except ApnForgeError as e:
        write_stderr(f"apn-forge: {e}")
        code = EXIT_ERROR
    if code is None:
        # Show help if no subcommand or no action provided
        parser.print_help()
        code = EXIT_ERROR
    sys.exit(code)
