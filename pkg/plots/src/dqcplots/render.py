"""Render benchmark results CSVs into per-strategy comparison figures.

Input is the results CSV written by the benchmark harness (exact 12-column
schema below); this package never recomputes circuit metrics, the CSV is the
single source of truth. Each figure plots the mean of one metric against the
power-of-two width bin, one line per strategy, once without the
non-optimised baseline and once including it.
"""
from __future__ import annotations

import argparse
import csv
import math
import statistics
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

CSV_COLUMNS = ("circuit_id", "width", "strategy", "k", "n1q", "n2q", "n3q",
               "depth_max", "depth_mean", "n_nonlocal", "conn_minus_1",
               "compile_time_s")

NUMERIC_COLUMNS = CSV_COLUMNS[3:]

# series colours follow the reference assignment: global yellow, local blue,
# hybrid pink, baseline (non-optimised) green
STRATEGY_COLORS = {
    "global": "#f1c40f",
    "local": "#1f77b4",
    "hybrid": "#e75480",
    "baseline": "#2ca02c",
}

OPTIMISED_STRATEGIES = ("global", "local", "hybrid")

COMPUTATIONAL_METRICS = ("depth_max", "n3q", "n2q", "n1q")
COMMUNICATION_METRICS = ("n_nonlocal",)


class SchemaError(ValueError):
    """CSV shape problems: wrong header, empty file, unknown metric."""


def width_bin(width: int) -> int:
    """Nearest power-of-two bucket, rounding in log space."""
    return 2 ** round(math.log2(width))


@dataclass(frozen=True)
class PlotSpec:
    metric: str
    binning: object = width_bin  # width -> bin id
    colors: dict = field(default_factory=lambda: dict(STRATEGY_COLORS))
    formats: tuple = ("png",)

    def __post_init__(self):
        if self.metric not in NUMERIC_COLUMNS:
            raise SchemaError(
                f"unknown metric column '{self.metric}'; "
                f"choose from {NUMERIC_COLUMNS}")
        bad = set(self.formats) - {"png", "svg"}
        if bad:
            raise SchemaError(f"unsupported output formats: {sorted(bad)}")


def load_rows(csv_path: str | Path) -> list[dict]:
    """Read the results CSV; rejects wrong headers and empty files."""
    path = Path(csv_path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise SchemaError(
                f"{path} does not match the results schema: "
                f"got header {reader.fieldnames}")
        rows = [row for row in reader]
    if not rows:
        raise SchemaError(f"{path} contains a header but no data rows")
    return rows


def series_means(rows: list[dict], metric: str,
                 binning=width_bin) -> dict[str, dict[int, float]]:
    """Mean of `metric` per (strategy, width bin), over circuits and k."""
    if metric not in NUMERIC_COLUMNS:
        raise SchemaError(f"unknown metric column '{metric}'")
    groups: dict[str, dict[int, list[float]]] = {}
    for row in rows:
        bin_ = binning(int(row["width"]))
        groups.setdefault(row["strategy"], {}).setdefault(bin_, []).append(
            float(row[metric]))
    return {strategy: {bin_: statistics.fmean(vals)
                       for bin_, vals in sorted(bins.items())}
            for strategy, bins in sorted(groups.items())}


_TITLES = {
    "depth_max": "distributed circuit depth",
    "depth_mean": "mean subcircuit depth",
    "n1q": "single-qubit gate count",
    "n2q": "two-qubit gate count",
    "n3q": "three-qubit gate count",
    "n_nonlocal": "inter-QPU communication cost",
    "conn_minus_1": "connectivity-1 cut cost",
    "compile_time_s": "compilation time (s)",
}


def build_figure(rows: list[dict], spec: PlotSpec, with_baseline: bool):
    """One figure: mean metric vs width bin, one line per strategy."""
    means = series_means(rows, spec.metric, spec.binning)
    strategies = [s for s in ("global", "local", "hybrid", "baseline")
                  if s in means and (with_baseline or s != "baseline")]
    if not strategies:
        raise SchemaError("no plottable strategies in the CSV")
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for strategy in strategies:
        bins = means[strategy]
        xs = sorted(bins)
        ax.plot(xs, [bins[x] for x in xs], marker="o", label=strategy,
                color=spec.colors.get(strategy))
    ax.set_xscale("log", base=2)
    ax.set_xlabel("circuit width (qubits, binned)")
    ax.set_ylabel(f"mean {_TITLES.get(spec.metric, spec.metric)}")
    title = f"Mean {_TITLES.get(spec.metric, spec.metric)}"
    ax.set_title(title + (" incl. baseline" if with_baseline else ""))
    ax.legend()
    fig.tight_layout()
    return fig


def render_metric(rows: list[dict], spec: PlotSpec, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for with_baseline in (False, True):
        fig = build_figure(rows, spec, with_baseline)
        suffix = "_baseline" if with_baseline else ""
        for fmt in spec.formats:
            path = out_dir / f"fig_{spec.metric}{suffix}.{fmt}"
            fig.savefig(path)
            written.append(path)
        plt.close(fig)
    return written


def render(csv_path: str | Path, out_dir: str | Path,
           formats: tuple = ("png",)) -> list[Path]:
    """All comparison figures: four computational metrics and the
    communication cost, each with and without the baseline series."""
    rows = load_rows(csv_path)
    out = Path(out_dir)
    written: list[Path] = []
    for metric in COMPUTATIONAL_METRICS + COMMUNICATION_METRICS:
        written.extend(render_metric(rows, PlotSpec(metric, formats=formats), out))
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dqcplots",
        description="Render a dqcbench results CSV into comparison figures.")
    parser.add_argument("--in", dest="in_path", required=True,
                        help="results CSV path")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--formats", default="png",
                        help="comma list from png,svg (default png)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
        written = render(args.in_path, args.out, formats)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(written)} figures to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
