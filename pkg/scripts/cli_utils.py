#!/usr/bin/env python3
"""Shared CLI utilities for cheby_cli.py."""

import logging
import math
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from core.report import rational_annotation

console = Console()
err_console = Console(stderr=True)

STATUS_STYLES = {
    "holds": "green",
    "violated": "bold red",
    "hypotheses-not-met": "yellow",
    "error": "bold magenta",
}


def setup_logging(verbose: bool = False) -> None:
    """Route library logging through rich on stderr (WARNING, or DEBUG with --verbose)."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=verbose, show_path=verbose)],
        force=True,
    )


def format_value(value: Optional[float], digits: int = 10) -> str:
    """Raw float plus the "≈ p/q" annotation when one applies."""
    if value is None:
        return "—"
    if not math.isfinite(value):
        return str(value)
    text = f"{value:.{digits}g}"
    note = rational_annotation(value)
    return f"{text} ({note})" if note else text


def format_status(status: str, advisory: bool = False) -> str:
    style = STATUS_STYLES.get(status, "white")
    suffix = " (advisory)" if advisory and status == "violated" else ""
    return f"[{style}]{status}{suffix}[/{style}]"


def show_error_with_solution(error_msg: str, error_type: str = ""):
    """Display error with context-aware solution."""
    err_console.print(f"\n[bold red]❌ Error:[/bold red] {error_msg}")
    error_lower = error_msg.lower()

    if error_type in ("ExprSyntaxError", "UnknownIdentifierError") or "position" in error_lower:
        err_console.print("\n[bold cyan]💡 Solution:[/bold cyan]")
        err_console.print("Check the expression grammar:")
        err_console.print("  • variable [green]x[/green], constants [green]pi[/green] and [green]e[/green]")
        err_console.print("  • functions: abs exp ln sin cos sqrt sgn")
        err_console.print("  • powers need a constant exponent: [green]x^2[/green], [green]x^(1/2)[/green]")
        err_console.print("  • pieces: [green]piecewise{[0,0.5]: -1; [0.5,1]: 1}[/green]")

    elif error_type in ("PiecewiseGuardError", "OverlappingPiecesError"):
        err_console.print("\n[bold cyan]💡 Solution:[/bold cyan]")
        err_console.print("Piecewise guards must tile the interval:")
        err_console.print("  • adjacent pieces share exactly one endpoint")
        err_console.print("  • no gaps and no overlaps between pieces")

    elif error_type == "DomainError":
        err_console.print("\n[bold cyan]💡 Solution:[/bold cyan]")
        err_console.print("The function is undefined somewhere on [a, b]:")
        err_console.print("  • ln and sqrt need a positive (non-negative) argument")
        err_console.print("  • denominators must not vanish")
        err_console.print("  • piecewise guards must cover the whole interval")

    elif error_type == "QuadratureError" or "tolerance" in error_lower:
        err_console.print("\n[bold cyan]💡 Solution:[/bold cyan]")
        err_console.print("The integral did not reach the requested tolerance. Options:")
        err_console.print("  • loosen it: [green]CHEBY_TOL[/green]=1e-8")
        err_console.print("  • raise [yellow]numerics.max_subdivisions[/yellow] in config/cheby.yaml")

    elif error_type == "ArgumentError":
        err_console.print("\n[bold cyan]💡 Solution:[/bold cyan]")
        err_console.print("Check the numeric arguments:")
        err_console.print("  • the interval needs a < b")
        err_console.print("  • inner intervals must lie inside [a, b] and be shorter")
        err_console.print("  • α >= 1, β > 0, counts >= 1")

    else:
        err_console.print("\n[bold cyan]💡 Need Help?[/bold cyan]")
        err_console.print("Rerun with [yellow]--verbose[/yellow] for debug logging.")
