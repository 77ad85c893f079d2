#!/usr/bin/env python3
"""Command-line front end for Čebyšev functional bounds."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from rich import box
from rich.panel import Panel
from rich.table import Table

from config.settings import get_setting, get_tolerance
from core.bounds import BoundResult, catalog, resolve_theorems
from core.calculus import chebyshev_T
from core.expr import ChebyError, Interval
from core.families import Family, FamilySpec
from core.parser import parse
from core.report import (
    Report,
    bound_report,
    falsify_report,
    hcurve_report,
    read_reports,
    sharpness_report,
    suite_report,
    write_hcurve_csv,
    write_report,
)
from core.verify import (
    SUITES,
    h_curve,
    linear_grid,
    resolve_suite,
    run_suite,
    sharpness_suite,
    summarize,
    tightness_search,
)
from scripts.cli_utils import (
    console,
    err_console,
    format_status,
    format_value,
    setup_logging,
    show_error_with_solution,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _parse_inner(text: Optional[str]) -> Optional[Interval]:
    if not text:
        return None
    try:
        c, d = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--inner expects 'c,d', got '{text}'")
    return Interval(c, d)


def _advisory_levels(result: BoundResult):
    suite = SUITES.get(result.label) or SUITES.get(result.theorem_id.value)
    return suite.advisory_levels if suite else ()


# --- commands ------------------------------------------------------------------


def cmd_bound(args) -> Report:
    """T(f, g) on [a, b] and every requested bound."""
    tol = args.tol or get_tolerance()
    f, g = parse(args.f), parse(args.g)
    iv = Interval(args.a, args.b)
    inner = _parse_inner(args.inner)
    theorem_ids = resolve_theorems(args.theorems.split(",") if args.theorems else None)

    T = chebyshev_T(f, g, iv, tol)
    registry = catalog()
    results: List[BoundResult] = []
    verdicts = []
    for theorem_id in theorem_ids:
        for result in registry[theorem_id].compute(f, g, iv, inner=inner, alpha=args.alpha, tol=tol):
            results.append(result)
            verdicts.extend(result.verdicts(result.label, _advisory_levels(result)))
    logger.debug(f"bound: T={T!r}, {len(results)} results")
    return bound_report(args.f, args.g, args.a, args.b, T, results, [t.value for t in theorem_ids], args.alpha, verdicts)


def cmd_verify(args) -> Report:
    """Randomized suite for one theorem id."""
    cases = args.cases or int(get_setting("suites.default_cases", 1000))
    suite = resolve_suite(args.theorem)
    verdicts = run_suite(suite.suite_id, cases, seed=args.seed, workers=args.workers, tol=args.tol)
    return suite_report(suite.suite_id, cases, args.seed, verdicts, summarize(verdicts))


def cmd_sharpness(args) -> Report:
    """Equality checks for every extremal pair."""
    verdicts = sharpness_suite(args.tol)
    return sharpness_report(verdicts, summarize(verdicts))


def cmd_hcurve(args) -> Report:
    """h(β) and its forward difference on a linear β grid, optionally written as CSV."""
    points = h_curve(linear_grid(args.beta_from, args.beta_to, args.steps))
    if args.out:
        write_hcurve_csv(points, Path(args.out))
    return hcurve_report(points, args.beta_from, args.beta_to, args.steps, args.out)


def cmd_falsify(args) -> Report:
    """Tightness search for T/bound > 1."""
    suite = resolve_suite(args.theorem)
    lo, hi = get_setting("families.coefficient_range", [0.0, 3.0])
    family = Family(args.family) if args.family else suite.f_family
    degree_key = "families.segments" if family == Family.STEP_FUNCTION else "families.degree"
    spec = FamilySpec(family, int(get_setting(degree_key, 3)), (float(lo), float(hi)), args.seed)
    search = tightness_search(suite.suite_id, spec, iterations=args.iterations, level=args.level, tol=args.tol)
    return falsify_report(search, args.seed)


# --- rendering -------------------------------------------------------------------


def render_bound(report: Report):
    inputs = report.inputs
    console.print(
        Panel(
            f"f(x) = [cyan]{inputs.f}[/cyan]\ng(x) = [cyan]{inputs.g}[/cyan]\n"
            f"[a, b] = [{inputs.a:g}, {inputs.b:g}]\n"
            f"[bold]T(f, g) = {format_value(report.T)}[/bold]",
            title="Čebyšev functional",
            border_style="cyan",
        )
    )
    table = Table(box=box.ROUNDED, show_header=True, header_style="bold cyan")
    table.add_column("Theorem", style="cyan")
    table.add_column("Bound", justify="right")
    table.add_column("Second level", justify="right")
    table.add_column("|T| / measured", justify="right")
    table.add_column("Slack", justify="right")
    table.add_column("Status")
    table.add_column("Hypotheses")

    by_label = {}
    for v in report.verdicts:
        label, _, level = v.case_id.partition("/")
        by_label.setdefault(label, {})[level] = v
    for entry in report.bounds:
        level1 = by_label.get(entry.label, {}).get("level1")
        value = format_value(entry.value) + (" [bold green]=[/bold green]" if entry.equality else "")
        second = format_value(entry.secondary_value) if entry.secondary_value is not None else ""
        if entry.secondary_equality:
            second += " [bold green]=[/bold green]"
        measured = abs(entry.measured) if entry.measured is not None and entry.direction == "|T|<=bound" else entry.measured
        failed = [h.name for h in entry.hypotheses if not h.passed]
        table.add_row(
            entry.label,
            value,
            second,
            format_value(measured),
            format_value(level1.slack, 4) if level1 else "—",
            format_status(level1.status, level1.advisory) if level1 else "—",
            "[green]ok[/green]" if not failed else "[yellow]fails: " + ", ".join(failed) + "[/yellow]",
        )
    console.print(table)
    console.print("[dim]= marks a bound met with equality[/dim]")


def _render_verdicts(report: Report, title: str, limit: int = 20):
    summary = report.summary
    style = "green" if report.exit_code == 0 else "red"
    lines = [
        f"Total: {summary.get('total', 0)}",
        f"Holds: [green]{summary.get('holds', 0)}[/green]",
        f"Violated: [red]{summary.get('hard_violations', 0)}[/red] hard, "
        f"[yellow]{summary.get('advisory_violations', 0)}[/yellow] advisory",
        f"Hypotheses not met: {summary.get('not_met', 0)}",
        f"Errors: [red]{summary.get('errors', 0)}[/red]",
    ]
    if summary.get("max_ratio") is not None:
        lines.append(f"Max ratio: {format_value(summary['max_ratio'])} ({summary.get('worst_case')})")
    console.print(Panel("\n".join(lines), title=title, border_style=style))

    shown = [v for v in report.verdicts if v.status != "holds"][:limit] if report.kind == "verify" else report.verdicts
    if not shown:
        return
    table = Table(box=box.SIMPLE, header_style="bold cyan")
    table.add_column("Case", style="cyan")
    table.add_column("T", justify="right")
    table.add_column("Bound", justify="right")
    table.add_column("Direction")
    table.add_column("Status")
    for v in shown:
        table.add_row(v.case_id, format_value(v.T), format_value(v.bound), v.direction, format_status(v.status, v.advisory))
    console.print(table)


def render_verify(report: Report):
    _render_verdicts(report, f"Suite {report.inputs.theorems[0]} (seed {report.seed})")


def render_sharpness(report: Report):
    _render_verdicts(report, "Sharpness witnesses")


def render_hcurve(report: Report):
    s = report.summary
    console.print(
        f"h(β) on [{report.inputs.beta_from:g}, {report.inputs.beta_to:g}], {s['points']} points: "
        f"min {format_value(s['h_min'])}, max {format_value(s['h_max'])}, "
        f"increasing: {'[green]yes[/green]' if s['dh_positive'] else '[red]no[/red]'}"
    )
    if report.inputs.out:
        console.print(f"[green]✓[/green] CSV written to {report.inputs.out}")
        return
    table = Table(box=box.SIMPLE, header_style="bold cyan")
    for column in ("β", "h(β)", "dh"):
        table.add_column(column, justify="right")
    for beta, h, dh in report.details["points"]:
        table.add_row(f"{beta:g}", format_value(h), f"{dh:.6g}")
    console.print(table)


def render_falsify(report: Report):
    s = report.details
    style = "red" if s["exceeded"] else "green"
    lines = [
        f"Suite: {s['theorem_id']} ({s['level']})",
        f"Iterations: {s['iterations']} (evaluated {s['evaluated']}, skipped {s['skipped']})",
        f"Best ratio: [{style}]{format_value(s['best_ratio'])}[/{style}]  ceiling {s['ceiling']}",
    ]
    if s.get("best_f"):
        lines.append(f"f = {s['best_f']}")
        lines.append(f"g = {s['best_g']}")
    console.print(Panel("\n".join(lines), title="Tightness search", border_style=style))


def _headline(report: Report) -> str:
    if report.kind == "bound":
        return f"f={report.inputs.f}  g={report.inputs.g}  T={format_value(report.T, 8)}"
    if report.kind == "falsify":
        return f"{report.details.get('theorem_id')}  best ratio {format_value(report.summary.get('best_ratio'), 8)}"
    if report.kind == "hcurve":
        return f"{report.summary.get('points')} points"
    theorems = ",".join(report.inputs.theorems)
    return f"{theorems}  {report.summary.get('holds', 0)}/{report.summary.get('total', 0)} hold".strip()


def show_reports(limit: int, directory: Optional[str] = None):
    """Table of the most recent saved reports."""
    reports = read_reports(Path(directory) if directory else None, limit)
    if not reports:
        console.print("[yellow]No saved reports found[/yellow] (run a command with --save)")
        return
    table = Table(box=box.SIMPLE, header_style="bold cyan", title=f"Last {len(reports)} reports")
    table.add_column("Created", style="dim")
    table.add_column("Kind", style="cyan")
    table.add_column("Exit", justify="right")
    table.add_column("Summary")
    for report in reports:
        exit_style = "green" if report.exit_code == 0 else "red"
        table.add_row(
            report.created_at[:19].replace("T", " "),
            report.kind,
            f"[{exit_style}]{report.exit_code}[/{exit_style}]",
            _headline(report),
        )
    console.print(table)


RENDERERS = {
    "bound": render_bound,
    "verify": render_verify,
    "sharpness": render_sharpness,
    "hcurve": render_hcurve,
    "falsify": render_falsify,
}

COMMANDS = {
    "bound": cmd_bound,
    "verify": cmd_verify,
    "sharpness": cmd_sharpness,
    "hcurve": cmd_hcurve,
    "falsify": cmd_falsify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the JSON report instead of tables")
    common.add_argument("--save", action="store_true", help="Also write the report to data/REPORTS/")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    common.add_argument("--tol", type=float, default=None, help="Quadrature tolerance (default: CHEBY_TOL or 1e-10)")

    parser = argparse.ArgumentParser(
        description="Evaluate the Čebyšev functional and its bounds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s bound --f "x" --g "x" --a 0 --b 1
  %(prog)s bound --f "piecewise{[0,0.5]: -1; [0.5,1]: 1}" --g "x^2/2" --a 0 --b 1 --theorems thm23
  %(prog)s verify --theorem thm21 --cases 200 --seed 7
  %(prog)s sharpness --json
  %(prog)s hcurve --from 0.5 --to 10 --steps 100 --out h.csv
  %(prog)s falsify --theorem thm23 --iterations 2000 --seed 1
  %(prog)s reports --limit 5

Exit codes: 0 holds, 1 violation found, 2 usage or input error.
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="T(f,g) and the bound table")
    p.add_argument("--f", required=True, help="Expression in x")
    p.add_argument("--g", required=True, help="Expression in x")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--theorems", help="Comma-separated theorem ids (default: all)")
    p.add_argument("--alpha", type=float, default=2.0, help="Exponent for thm24 (default: 2)")
    p.add_argument("--inner", help="Inner interval 'c,d' for the mean-difference bounds")

    p = sub.add_parser("verify", parents=[common], help="Randomized suite for one theorem")
    p.add_argument("--theorem", required=True, choices=sorted(SUITES) + ["thm24", "cerone"])
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)

    sub.add_parser("sharpness", parents=[common], help="Equality checks for the extremal pairs")

    p = sub.add_parser("hcurve", parents=[common], help="h(β) data as CSV")
    p.add_argument("--from", dest="beta_from", type=float, default=0.5)
    p.add_argument("--to", dest="beta_to", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--out", help="CSV path (beta,h,dh)")

    p = sub.add_parser("falsify", parents=[common], help="Search for T/bound above 1")
    p.add_argument("--theorem", required=True, choices=sorted(s for s, suite in SUITES.items() if suite.searchable))
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--level", choices=["level1", "level2"], default="level1")
    p.add_argument("--family", choices=[f.value for f in Family])

    sub.add_parser("schema", parents=[common], help="Print the JSON report schema")

    p = sub.add_parser("reports", parents=[common], help="List recently saved reports")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--dir", dest="directory", help="Report directory (default: data/REPORTS)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    if args.command == "schema":
        print(json.dumps(Report.json_schema(), indent=2, ensure_ascii=False))
        return EXIT_OK

    if args.command == "reports":
        show_reports(args.limit, args.directory)
        return EXIT_OK

    try:
        report = COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as e:
        show_error_with_solution(str(e), "ArgumentError")
        return EXIT_USAGE
    except ChebyError as e:
        logger.debug("command failed", exc_info=True)
        show_error_with_solution(str(e), type(e).__name__)
        return EXIT_USAGE

    if args.json:
        print(report.to_json())
    else:
        RENDERERS[report.kind](report)

    if args.save:
        path = write_report(report)
        err_console.print(f"[green]✓[/green] Report saved to {path}")

    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
