"""
Utility functions shared by the CLI, the batch runner and the engine
"""
import hashlib
import os
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn, BarColumn, TimeElapsedColumn
from rich.markup import escape
from rich.text import Text

# Diagnostics go to stderr so --json output on stdout stays machine readable
console = Console(stderr=True)

OUTPUT_DIR = "output"


def file_digest(raw: bytes) -> str:
    """Content hash of an input file as "sha256:<hex>" """
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def read_input(path: str) -> bytes:
    """Read an input file, expanding ~

    Raises:
        FileNotFoundError / IsADirectoryError / PermissionError from open()
    """
    with open(os.path.expanduser(path), "rb") as f:
        return f.read()


def default_output_path(input_path: str, command: str) -> str:
    """output/<stem>_<command>.json"""
    return os.path.join(OUTPUT_DIR, f"{Path(input_path).stem}_{command}.json")


def write_output(path: str, payload: bytes) -> str:
    """Write payload to path, creating the parent directory on demand"""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "wb") as f:
        f.write(payload)
    return path


def format_file_size(size_bytes: int) -> str:
    """
    Format file size in bytes to human-readable format

    Args:
        size_bytes: File size in bytes

    Returns:
        str: Formatted file size (e.g., "2.3 KB")
    """
    for unit in ['B', 'KB', 'MB', 'GB']:
        if size_bytes < 1024.0:
            return f"{size_bytes:.1f} {unit}"
        size_bytes /= 1024.0
    return f"{size_bytes:.1f} TB"


def print_header(title: str, detail: Optional[str] = None):
    """Print a styled header"""
    if detail:
        text = Text(f"{title}\n{detail}", style="bold blue")
    else:
        text = Text(title, style="bold blue")

    console.print(Panel(text, style="blue"))


def print_success(message: str):
    console.print(f"✅ [green]{escape(message)}[/green]")


def print_error(message: str):
    console.print(f"❌ [red]{escape(message)}[/red]")


def print_warning(message: str):
    console.print(f"⚠️ [yellow]{escape(message)}[/yellow]")


def print_info(message: str):
    console.print(f"ℹ️ [blue]{escape(message)}[/blue]")


def create_progress_bar():
    """Create a styled progress bar"""
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        "[progress.percentage]{task.percentage:>3.0f}%",
        TimeElapsedColumn(),
        console=console
    )
