"""Render the four standard figures from the race/histogram CSV files.

Consumes the fixed filenames written by the gaussrace CLI (race.csv, hist.csv,
hist_tilde.csv) and produces PNGs: two race trajectories on a linear x-axis
(optionally logarithmic) and two deviation histograms with the secondary-term
overlay on a twin axis, clipped to ±5 since the true term is unbounded at its
poles.  Rendering is deterministic for a pinned Agg backend.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib.figure import Figure

OVERLAY_CLIP = 5.0
DPI = 110

KINDS = ("race_d1", "race_d2", "hist_theta", "hist_theta_tilde")

# kind -> (input filename, columns the CSV must carry)
_INPUTS = {
    "race_d1": ("race.csv", ("x", "D1")),
    "race_d2": ("race.csv", ("x", "D2")),
    "hist_theta": ("hist.csv", ("bin_center", "count", "deviation", "prediction")),
    "hist_theta_tilde": ("hist_tilde.csv", ("bin_center", "count", "deviation", "prediction")),
}


@dataclass(frozen=True)
class FigureJob:
    kind: str
    input_csv: Path
    output_png: Path
    log_x: bool = False

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")


def _read_columns(path: Path, wanted: tuple[str, ...]) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = [c for c in wanted if c not in fields]
        if missing:
            raise ValueError(f"{path}: missing columns {missing} (found {fields})")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    try:
        return {c: np.array([float(r[c]) for r in rows]) for c in wanted}
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: non-numeric data ({exc})") from exc


def build_figure(job: FigureJob) -> Figure:
    """Figure for one job; separated from disk output for testability."""
    _, wanted = _INPUTS[job.kind]
    cols = _read_columns(job.input_csv, wanted)
    fig = Figure(figsize=(8.0, 4.5), dpi=DPI)
    ax = fig.add_subplot()

    if job.kind.startswith("race_"):
        name = "D1" if job.kind == "race_d1" else "D2"
        ax.plot(cols["x"], cols[name], lw=0.8, color="#1f3b73")
        ax.axhline(0.0, color="0.6", lw=0.6)
        if job.log_x:
            ax.set_xscale("log")
        ax.set_xlabel("x")
        ax.set_ylabel(f"{name}(x)")
        ax.set_title(f"{name}(x) up to {int(cols['x'][-1]):,}")
    else:
        centers = cols["bin_center"]
        width = np.pi / len(centers)
        ax.bar(centers, cols["deviation"], width=width, color="0.55", edgecolor="none")
        ax.axhline(0.0, color="red", lw=0.8)
        ax.set_xlabel("angle")
        ax.set_ylabel("count - mean")
        which = "theta" if job.kind == "hist_theta" else "theta~"
        ax.set_title(f"deviation from equidistribution ({which})")
        overlay = fig.axes[0].twinx()
        clipped = np.clip(cols["prediction"], -OVERLAY_CLIP, OVERLAY_CLIP)
        overlay.plot(centers, clipped, color="#2060c0", lw=1.2)
        overlay.set_ylabel("secondary term (clipped)")
    fig.tight_layout()
    return fig


def render(job: FigureJob) -> Path:
    fig = build_figure(job)
    job.output_png.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(job.output_png, format="png")
    return job.output_png


def render_figures(out_dir: Path, log_x: bool = False) -> list[Path]:
    """Render all four figures from the fixed CSV filenames in out_dir."""
    out_dir = Path(out_dir)
    written = []
    for kind in KINDS:
        input_name, _ = _INPUTS[kind]
        job = FigureJob(kind, out_dir / input_name, out_dir / f"{kind}.png", log_x=log_x)
        written.append(render(job))
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="render race/histogram figures from gaussrace CSV outputs",
    )
    parser.add_argument("out_dir", type=Path,
                        help="directory holding race.csv, hist.csv, hist_tilde.csv")
    parser.add_argument("--log-x", action="store_true",
                        help="logarithmic x-axis for the race plots")
    args = parser.parse_args(argv)
    try:
        for path in render_figures(args.out_dir, log_x=args.log_x):
            print(path)
    except (OSError, ValueError) as exc:
        print(f"render_figures: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
