"""
Batch analysis of several frame files
"""
import glob
import os
from pathlib import Path
from typing import Callable, List, NamedTuple, Optional

from rich.table import Table

from errors import FrameError
from report_preview import Report
from utils import console, create_progress_bar, format_file_size, print_error, print_header, print_info, print_success


class BatchResult(NamedTuple):
    path: str
    exit_code: int
    report: Optional[Report]
    error: Optional[str]

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "exit_code": self.exit_code,
            "report": self.report.to_dict() if self.report else None,
            "error": self.error,
        }


class FrameBatch:
    """Runs one command over many frame files and collects per-file exit codes"""

    def __init__(self):
        self.supported_extensions = {'.json'}
        self.results: List[BatchResult] = []

    def find_frame_files(self, paths: List[str], recursive: bool = False) -> List[str]:
        """
        Expand files, directories and glob patterns into frame files

        Args:
            paths: List of file paths, directory paths, or glob patterns
            recursive: Whether to search directories recursively

        Returns:
            Sorted list of unique file paths
        """
        frame_files = []

        for path in paths:
            path = os.path.expanduser(path)

            if os.path.isfile(path):
                # explicitly named files are taken whatever their suffix
                frame_files.append(path)

            elif os.path.isdir(path):
                pattern = "**/*" if recursive else "*"
                for ext in self.supported_extensions:
                    frame_files.extend(glob.glob(os.path.join(path, f"{pattern}{ext}"), recursive=recursive))

            elif '*' in path or '?' in path:
                for file_path in glob.glob(path, recursive=recursive):
                    if os.path.isfile(file_path) and Path(file_path).suffix.lower() in self.supported_extensions:
                        frame_files.append(file_path)

            else:
                # kept so that the missing file is reported with exit code 1
                print_error(f"Path not found: {path}")
                frame_files.append(path)

        return sorted(set(frame_files))

    def show_batch_summary(self, frame_files: List[str]):
        """Display the files about to be analyzed"""
        print_header("📁 Batch Analysis", f"{len(frame_files)} frame files")

        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("#", style="dim", width=4)
        table.add_column("File", style="cyan")
        table.add_column("Size", style="yellow", justify="right")

        for i, file_path in enumerate(frame_files, 1):
            try:
                size_str = format_file_size(os.path.getsize(file_path))
            except OSError:
                size_str = "unknown"
            table.add_row(str(i), file_path, size_str)

        console.print(table)

    def process_batch(self, frame_files: List[str], process_function: Callable[[str], Report],
                      exit_code_of: Callable[[Report], int]) -> List[BatchResult]:
        """
        Analyze every file; failures are recorded, never raised

        Args:
            frame_files: paths to process
            process_function: builds the report for one path
            exit_code_of: exit code implied by a successful report

        Returns:
            One BatchResult per file, in input order
        """
        results = []

        with create_progress_bar() as progress:
            batch_task = progress.add_task("Overall Progress", total=len(frame_files))

            for i, frame_file in enumerate(frame_files, 1):
                progress.update(batch_task, description=f"Analyzing {Path(frame_file).name} ({i}/{len(frame_files)})")
                try:
                    report = process_function(frame_file)
                    results.append(BatchResult(frame_file, exit_code_of(report), report, None))
                except FrameError as e:
                    results.append(BatchResult(frame_file, e.exit_code, None, str(e)))
                except OSError as e:
                    results.append(BatchResult(frame_file, 1, None, str(e)))
                progress.advance(batch_task)

        self.results = results
        return results

    @property
    def exit_code(self) -> int:
        """Largest per-file exit code, 0 for an empty batch"""
        return max((r.exit_code for r in self.results), default=0)

    def show_batch_results(self):
        if not self.results:
            return

        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("File", style="cyan")
        table.add_column("Exit", justify="right")
        table.add_column("A", justify="right")
        table.add_column("B", justify="right")
        table.add_column("Note", style="dim")

        for result in self.results:
            if result.report is not None:
                lower = result.report.results["lower_bound"]
                upper = result.report.results["upper_bound"]
                note = "frame" if result.report.results["is_frame"] else "not a frame"
                table.add_row(result.path, str(result.exit_code), f"{lower:.12g}", f"{upper:.12g}", note)
            else:
                table.add_row(result.path, str(result.exit_code), "-", "-", result.error or "")
        console.print(table)

        frames = sum(1 for r in self.results if r.exit_code == 0)
        if frames == len(self.results):
            print_success(f"All {frames} files are g-fusion frames")
        else:
            print_info(f"📈 Frames: {frames}/{len(self.results)}")
