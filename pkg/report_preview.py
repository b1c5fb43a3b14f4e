"""
Report document and its two renderings

JSON mode rounds every float to 12 significant digits and writes inf/NaN as
null. Text mode prints the same numbers with format .12g, residuals in
scientific notation.
"""
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Union

import numpy as np
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from linalg_kernel import Tolerance

# Reports go to stdout; diagnostics use utils.console on stderr
console = Console()

SIGNIFICANT_DIGITS = 12


def round_sig(value: float):
    """Round to 12 significant digits; non-finite values become None"""
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}") + 0.0


def normalize(value: Any) -> Any:
    """Turn engine results into plain JSON values with rounded floats"""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round_sig(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [round_sig(value.real), round_sig(value.imag)]
    if isinstance(value, np.ndarray):
        return [normalize(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(v) for v in value]
    return value


@dataclass
class Report:
    command: str
    input_digest: str
    results: Dict[str, Any]
    tolerance: Tolerance
    # Paths of files written by the command; shown in text mode only
    outputs: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "results": normalize(self.results),
            "tolerance": normalize(self.tolerance.describe()),
        }


def render_json(document: Union[Report, list, dict]) -> str:
    if isinstance(document, Report):
        document = document.to_dict()
    elif isinstance(document, list):
        document = [d.to_dict() if isinstance(d, Report) else d for d in document]
    return json.dumps(document, indent=2) + "\n"


def format_value(key: str, value: Any) -> str:
    """Text-mode rendering of one result entry"""
    if value is None:
        return "-"
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return "inf" if value > 0 else str(value)
        if "residual" in key:
            return f"{value:.{SIGNIFICANT_DIGITS - 1}e}"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return ", ".join(format_value(key, v) for v in value)
    return str(value)


def show_report(report: Report):
    """Print a report as a rich table"""
    console.print(Panel.fit(
        f"[bold blue]{report.command}[/bold blue]  [dim]{report.input_digest}[/dim]",
        border_style="blue",
    ))

    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="white", justify="right")
    for key, value in report.results.items():
        table.add_row(key, format_value(key, value))
    console.print(table)

    tolerance = report.tolerance.describe()
    console.print(
        f"[dim]rank_rel = {tolerance['rank_rel']}, residual_abs = {tolerance['residual_abs']:g}[/dim]"
    )
    for path in report.outputs:
        console.print(f"[dim]written: {path}[/dim]")
