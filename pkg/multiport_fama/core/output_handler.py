"""Output handler for writing sweep results, plot data and run manifests."""

import json
import logging
import platform
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy
import scipy

from multiport_fama._version import __version__
from multiport_fama.models.experiment import SweepResult
from multiport_fama.utils.exceptions import OutputExistsError

logger = logging.getLogger(__name__)

TOOL_NAME = "multiport-fama"
RESULTS_FILE = "results.csv"
MANIFEST_FILE = "manifest.json"
CSV_HEADER = "sweep_value,strategy,mean_se,std_se,trials,seed"
PLOT_FILES = {"snr_db": "se_vs_snr.dat", "L": "se_vs_ports.dat", "N": "se_vs_density.dat"}


def format_float(value: float) -> str:
    """Twelve significant digits."""
    return format(float(value), ".12g")


def format_sweep_value(axis: str, value: float) -> str:
    return str(int(value)) if axis in ("L", "N") else format_float(value)


class OutputHandler:
    """Writes a finished sweep into an output directory."""

    def __init__(self, output_dir: Union[str, Path], force: bool = False):
        """Initialize OutputHandler.

        Args:
            output_dir: Directory for result files, created if absent
            force: Overwrite existing result files
        """
        self.output_dir = Path(output_dir)
        self.force = force
        self.formatters = {
            RESULTS_FILE: self._format_csv,
            MANIFEST_FILE: self._format_manifest,
        }

    def targets(self, axis: str) -> List[Path]:
        """Files a sweep along ``axis`` will write."""
        return [self.output_dir / name for name in (RESULTS_FILE, PLOT_FILES[axis], MANIFEST_FILE)]

    def prepare(self, axis: str) -> None:
        """Create the directory and refuse to clobber existing results.

        Raises:
            OutputExistsError: If a target exists and ``force`` is off
        """
        if not self.force:
            existing = [str(p) for p in self.targets(axis) if p.exists()]
            if existing:
                raise OutputExistsError(
                    f"refusing to overwrite {', '.join(existing)} (use --force)"
                )
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def write(
        self,
        result: SweepResult,
        config: Optional[Dict[str, Any]] = None,
        wall_time: float = 0.0,
    ) -> List[Path]:
        """Write results.csv, the plot-data file and manifest.json.

        Args:
            result: Finished sweep
            config: Config-file contents that produced the run
            wall_time: Run time in seconds

        Returns:
            Paths written, in order
        """
        self.prepare(result.axis)
        results_path, plot_path, manifest_path = self.targets(result.axis)
        self._write_text(results_path, self._format_csv(result))
        self._write_text(plot_path, self._format_plot_data(result))
        files = [results_path.name, plot_path.name]
        self._write_text(manifest_path, self._format_manifest(result, config, wall_time, files))
        written = [results_path, plot_path, manifest_path]
        for path in written:
            logger.info("wrote %s", path)
        return written

    def export(self, result: SweepResult, name: str) -> str:
        """Render one of the text outputs without writing it."""
        formatter = self.formatters.get(name, self._format_csv)
        return formatter(result)

    @staticmethod
    def _write_text(path: Path, text: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)

    def _format_csv(self, result: SweepResult) -> str:
        """Results table, one row per (sweep value, strategy)."""
        seed = "" if result.seed is None else str(result.seed)
        lines = [CSV_HEADER]
        for cell in result.cells:
            lines.append(",".join([
                format_sweep_value(result.axis, cell.sweep_value),
                cell.strategy,
                format_float(cell.mean_se),
                format_float(cell.std_se),
                str(cell.trials),
                seed,
            ]))
        return "\n".join(lines) + "\n"

    def _format_plot_data(self, result: SweepResult) -> str:
        """Whitespace-separated columns: sweep value, then mean and std per strategy."""
        strategies = result.strategies()
        header = [result.axis] + [f"{s}_{stat}" for s in strategies for stat in ("mean", "std")]
        lines = ["# " + " ".join(header)]
        for value in result.values():
            row = [format_sweep_value(result.axis, value)]
            for name in strategies:
                cell = result.cell(value, name)
                row += [format_float(cell.mean_se), format_float(cell.std_se)]
            lines.append(" ".join(row))
        return "\n".join(lines) + "\n"

    def _format_manifest(
        self,
        result: SweepResult,
        config: Optional[Dict[str, Any]] = None,
        wall_time: float = 0.0,
        files: Optional[List[str]] = None,
    ) -> str:
        """Provenance record; its ``config`` member reloads as a config file."""
        manifest = {
            "tool": TOOL_NAME,
            "version": __version__,
            "axis": result.axis,
            "config": config,
            "spec": None if result.spec is None else result.spec.to_dict(),
            "wall_time_s": round(wall_time, 3),
            "files": files or [],
            "environment": {
                "python": platform.python_version(),
                "numpy": numpy.__version__,
                "scipy": scipy.__version__,
                "platform": platform.platform(),
            },
        }
        return json.dumps(manifest, indent=2) + "\n"
