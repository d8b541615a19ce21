"""Command-line front end: ``validate``, ``run`` and ``paper-suite``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ParseError, PccError, ValidationError
from .numerics import DEFAULT_TOL, Tolerance
from .observables import value_label
from .scenarios import library
from .scenarios.document import Scenario, parse_scenario, scenario_from_document
from .scenarios.report import Report, render_report
from .scenarios.runner import execute

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), path) from None


def _tolerance(value: float | None) -> Tolerance | None:
    if value is None:
        return None
    try:
        return Tolerance(abs=value, rel=DEFAULT_TOL.rel)
    except ValueError as exc:
        raise ValidationError(f"--tol: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(sc: Scenario) -> str:
    lines = [f"{sc.name}: dimension {sc.dim}" + (f" = {' x '.join(map(str, sc.factors))}" if sc.factors else "")]
    width = max((len(n) for n in sc.observables), default=0)
    for name, obs in sc.observables.items():
        spectrum = ", ".join(f"{value_label(v)} (rank {obs.eigenspace(v).rank})" for v in obs.values)
        lines.append(f"  {name.ljust(width)}  dim {obs.dim}  outcomes {spectrum}  ok")
    for name in sc.states:
        lines.append(f"  state {name}: normalized")
    lines.append(f"  {len(sc.queries)} queries")
    return "\n".join(lines) + "\n"


def cmd_validate(args) -> int:
    sc = parse_scenario(_read(args.file))
    sys.stdout.write(_summary(sc))
    return EXIT_OK


def cmd_run(args) -> int:
    sc = parse_scenario(_read(args.file), _tolerance(args.tol))
    report = execute(sc, seed=args.seed)
    _emit(render_report(report, args.format), args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def _suite_text(reports: list[Report]) -> str:
    rows = [["scenario", "#", "claim", "result"]]
    for rep in reports:
        for r in rep.results:
            rows.append([rep.scenario, str(r.index), r.claim or r.kind, "pass" if r.passed else "FAIL"])
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    total = sum(len(rep.results) for rep in reports)
    failed = sum(len(rep.failures) for rep in reports)
    lines.append("")
    lines.append(f"{len(reports)} scenarios, {total} claims, {failed} failed")
    for rep in reports:
        for r in rep.failures:
            detail = r.expectation["failures"] if r.expectation else [r.error["message"]]
            for d in detail:
                lines.append(f"  {rep.scenario}[{r.index}]: {d}")
    return "\n".join(lines) + "\n"


def cmd_paper_suite(args) -> int:
    docs = library.library_documents()
    names = library.select(docs, args.filter)
    reports = [execute(scenario_from_document(docs[n])) for n in names]
    if args.format == "json":
        text = json.dumps(
            {"passed": all(r.passed for r in reports), "reports": [r.to_dict() for r in reports]},
            indent=2, ensure_ascii=False,
        ) + "\n"
    else:
        text = _suite_text(reports)
    sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pccsolve", description="Find and check states with perfect conditional correlations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and invariant-check a scenario file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="execute a scenario and print its report")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=None, help="absolute tolerance for the whole run (default: from file, else 1e-9)")
    p.add_argument("--seed", type=int, default=None, help="seed for witnesses and random draws (default: from file, else 42)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("paper-suite", help="run every built-in scenario against its expected outcomes")
    p.add_argument("--filter", default=None, metavar="GLOB", help="only scenarios whose name matches")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_paper_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PccError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
