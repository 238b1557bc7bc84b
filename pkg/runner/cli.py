#!/usr/bin/env python3
"""
Command line entry point.

    python -m runner verify-contact scenario.json
    python -m runner gallery t2s2-k1 --resolution-scale 0.5
    python -m runner gallery --list
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from forms.config import POSITIVITY_TOL
from forms.errors import GeometryError

from .config import LOG_LEVEL, REPORTS_DIR, RESOLUTION_SCALE
from .errors import ScenarioError
from .gallery import gallery_names, gallery_scenario
from .report import CheckRecorder, Report
from .run import run
from .scenario import RECIPE_KINDS, Scenario, load_scenario
from .summary import print_summary

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_SCENARIO = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--resolution-scale", type=float, default=RESOLUTION_SCALE, help="multiply every sample resolution")
    common.add_argument("--tol", type=float, default=POSITIVITY_TOL, help="positivity tolerance")
    common.add_argument("--out", default=None, help="report path (default: the scenario's output or reports/<name>.json)")
    common.add_argument("--jobs", type=int, default=None, help="sweep worker threads (default: CONTACT_JOBS)")
    common.add_argument("--log-level", default=LOG_LEVEL, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--quiet", action="store_true", help="skip the summary table")

    parser = argparse.ArgumentParser(prog="runner", description="Check invariant contact structures on circle bundles")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in RECIPE_KINDS:
        p = sub.add_parser(kind, parents=[common], help=f"run a {kind} scenario")
        p.add_argument("scenario", help="scenario JSON file")
    p = sub.add_parser("run", parents=[common], help="run a scenario with any recipe")
    p.add_argument("scenario", help="scenario JSON file")
    p = sub.add_parser("gallery", parents=[common], help="run a built-in scenario")
    p.add_argument("name", nargs="?", help=f"one of: {', '.join(gallery_names())}")
    p.add_argument("--list", action="store_true", help="list the gallery entries")
    return parser


def error_report(name: str, recipe: str, exc: BaseException) -> Report:
    recorder = CheckRecorder()
    recorder.error("scenario", exc)
    return Report(scenario=name, recipe=recipe, passed=False, checks=recorder.entries)


def _load(args) -> Scenario:
    if args.command == "gallery":
        if not args.name:
            raise ScenarioError("gallery needs an entry name")
        return gallery_scenario(args.name)
    scenario = load_scenario(args.scenario)
    if args.command != "run" and scenario.recipe.kind != args.command:
        raise ScenarioError(f"scenario recipe is {scenario.recipe.kind}, not {args.command}", "/recipe/kind")
    return scenario


def _emit(report: Report, out: Optional[str], quiet: bool) -> None:
    if out:
        report.write(out)
    if not quiet:
        print_summary(report)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(asctime)s - %(levelname)s - %(message)s")

    if args.command == "gallery" and args.list:
        for name in gallery_names():
            print(name)
        return EXIT_PASS

    try:
        scenario = _load(args)
    except GeometryError as e:
        label = getattr(args, "name", None) or getattr(args, "scenario", "scenario")
        print(f"❌ {e}", file=sys.stderr)
        _emit(error_report(str(label), args.command, e), args.out, quiet=True)
        return EXIT_SCENARIO

    report = run(scenario, args.resolution_scale, args.tol, args.jobs)
    out = args.out or scenario.output or os.path.join(REPORTS_DIR, f"{scenario.name}.json")
    _emit(report, out, args.quiet)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
