import csv
import math
import statistics
from pathlib import Path

import pytest

from dqcplots.render import (CSV_COLUMNS, PlotSpec, SchemaError,
                             STRATEGY_COLORS, build_figure, load_rows, main,
                             render, series_means, width_bin)

HEADER = ",".join(CSV_COLUMNS)


def write_csv(path: Path, rows: list[tuple]):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)
    return path


def row(circuit="c1", width=8, strategy="global", k=2, n1q=10, n2q=5, n3q=1,
        depth_max=7, depth_mean=6.5, n_nonlocal=3, conn=3, t=0.01):
    return (circuit, width, strategy, k, n1q, n2q, n3q, depth_max, depth_mean,
            n_nonlocal, conn, t)


@pytest.fixture
def fixture_csv(tmp_path):
    # three rows per strategy across two width bins, values chosen by hand
    rows = []
    for strategy, base in (("baseline", 30), ("global", 20), ("local", 18),
                           ("hybrid", 16)):
        rows.append(row(strategy=strategy, width=8, k=2, n2q=base, n_nonlocal=base - 10))
        rows.append(row(strategy=strategy, width=8, k=3, n2q=base + 2, n_nonlocal=base - 8))
        rows.append(row(strategy=strategy, width=16, k=2, n2q=base + 4, n_nonlocal=base - 6))
    return write_csv(tmp_path / "results.csv", rows)


class TestLoad:
    def test_header_enforced(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(SchemaError, match="schema"):
            load_rows(bad)

    def test_empty_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(HEADER + "\n")
        with pytest.raises(SchemaError, match="no data rows"):
            load_rows(empty)


class TestSeriesMeans:
    def test_three_row_fixture_hand_computed(self, tmp_path):
        rows = [row(width=8, k=2, n2q=10), row(width=8, k=3, n2q=20),
                row(width=16, k=2, n2q=7)]
        path = write_csv(tmp_path / "r.csv", rows)
        means = series_means(load_rows(path), "n2q")
        assert means == {"global": {8: 15.0, 16: 7.0}}

    def test_unknown_metric_named(self, fixture_csv):
        with pytest.raises(SchemaError, match="bogus"):
            series_means(load_rows(fixture_csv), "bogus")
        with pytest.raises(SchemaError, match="bogus"):
            PlotSpec("bogus")

    def test_matches_independent_groupby_within_1e12(self, fixture_csv):
        rows = load_rows(fixture_csv)
        for metric in ("n1q", "n2q", "n3q", "depth_max", "n_nonlocal"):
            means = series_means(rows, metric)
            # independent recomputation straight off the dict rows
            for strategy in {r["strategy"] for r in rows}:
                for bin_ in {width_bin(int(r["width"])) for r in rows}:
                    group = [float(r[metric]) for r in rows
                             if r["strategy"] == strategy
                             and width_bin(int(r["width"])) == bin_]
                    if group:
                        want = statistics.fmean(group)
                        assert math.isclose(means[strategy][bin_], want,
                                            abs_tol=1e-12)


class TestFigures:
    def test_plotted_series_equal_recomputed_means(self, fixture_csv):
        rows = load_rows(fixture_csv)
        spec = PlotSpec("n_nonlocal")
        fig = build_figure(rows, spec, with_baseline=True)
        means = series_means(rows, "n_nonlocal")
        lines = {line.get_label(): line for line in fig.axes[0].get_lines()}
        assert set(lines) == {"baseline", "global", "local", "hybrid"}
        for strategy, line in lines.items():
            xs = list(line.get_xdata())
            ys = list(line.get_ydata())
            assert xs == sorted(means[strategy])
            for x, y in zip(xs, ys):
                assert math.isclose(y, means[strategy][x], abs_tol=1e-12)

    def test_color_mapping_matches_reference_assignment(self, fixture_csv):
        fig = build_figure(load_rows(fixture_csv), PlotSpec("n2q"),
                           with_baseline=True)
        for line in fig.axes[0].get_lines():
            assert line.get_color() == STRATEGY_COLORS[line.get_label()]
        # yellow global, blue local, pink hybrid, green baseline
        assert STRATEGY_COLORS["global"] == "#f1c40f"
        assert STRATEGY_COLORS["local"] == "#1f77b4"
        assert STRATEGY_COLORS["hybrid"] == "#e75480"
        assert STRATEGY_COLORS["baseline"] == "#2ca02c"

    def test_baseline_excluded_without_flag(self, fixture_csv):
        fig = build_figure(load_rows(fixture_csv), PlotSpec("n2q"),
                           with_baseline=False)
        labels = {line.get_label() for line in fig.axes[0].get_lines()}
        assert labels == {"global", "local", "hybrid"}

    def test_single_strategy_csv(self, tmp_path):
        path = write_csv(tmp_path / "one.csv",
                         [row(strategy="local", width=8),
                          row(strategy="local", width=16)])
        fig = build_figure(load_rows(path), PlotSpec("depth_max"),
                           with_baseline=True)
        assert len(fig.axes[0].get_lines()) == 1


class TestRender:
    def test_writes_ten_figures_with_exact_names(self, fixture_csv, tmp_path):
        out = tmp_path / "figs"
        written = render(fixture_csv, out)
        names = sorted(p.name for p in written)
        expected = sorted(
            f"fig_{metric}{suffix}.png"
            for metric in ("depth_max", "n3q", "n2q", "n1q", "n_nonlocal")
            for suffix in ("", "_baseline"))
        assert names == expected
        assert all(p.stat().st_size > 0 for p in written)

    def test_svg_format(self, fixture_csv, tmp_path):
        from dqcplots.render import render_metric
        files = render_metric(load_rows(fixture_csv),
                              PlotSpec("n1q", formats=("svg",)),
                              tmp_path)
        assert [p.suffix for p in files] == [".svg", ".svg"]

    def test_cli_roundtrip(self, fixture_csv, tmp_path, capsys):
        assert main(["--in", str(fixture_csv), "--out", str(tmp_path / "o")]) == 0
        assert "10 figures" in capsys.readouterr().out

    def test_cli_schema_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n")
        assert main(["--in", str(bad), "--out", str(tmp_path)]) == 1
        assert "error" in capsys.readouterr().err
