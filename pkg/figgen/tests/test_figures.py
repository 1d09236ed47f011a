import numpy as np
import pytest
from matplotlib.container import BarContainer

from figgen import FigureSpec, MissingConditionError, build_figure, load_aggregate, render
from figgen.cli import main

HEADER = "algorithm,f,strategy,checkpoint,mean,std\n"


def write_fixture_csv(path):
    rows = []
    for algorithm, base in (("knn", 0.1), ("pe", 0.2), ("ap", 0.3), ("cwp", 0.4)):
        for f in (0.0, 1.0):
            for strategy in ("discriminative", "descriptive"):
                for i, checkpoint in enumerate((0, 10, 100)):
                    mean = round(base + 0.1 * i + 0.05 * f, 3)
                    std = round(0.01 * (i + 1), 3)
                    rows.append(f"{algorithm},{f},{strategy},{checkpoint},{mean},{std}")
    path.write_text(HEADER + "\n".join(rows) + "\n")
    return path


@pytest.fixture
def csv_path(tmp_path):
    return write_fixture_csv(tmp_path / "aggregate.csv")


def series_by_label(ax):
    out = {}
    for container in ax.containers:
        line = container.lines[0]
        yerr_segments = container.lines[2][0].get_segments()
        stds = [abs(seg[1][1] - seg[0][1]) / 2 for seg in yerr_segments]
        out[container.get_label()] = (
            list(line.get_xdata()),
            list(line.get_ydata()),
            stds,
        )
    return out


def test_curves_by_algorithm_plot_values_equal_csv(csv_path):
    frame = load_aggregate(csv_path)
    spec = FigureSpec(
        kind="learning-curves-by-algorithm", csv=csv_path, out=csv_path, f=1.0
    )
    fig = build_figure(spec, frame)
    series = series_by_label(fig.axes[0])
    assert set(series) == {"knn", "pe", "ap", "cwp"}
    for algorithm, (xs, ys, stds) in series.items():
        sub = frame[
            (frame["algorithm"] == algorithm)
            & (frame["f"] == 1.0)
            & (frame["strategy"] == "discriminative")
        ].sort_values("checkpoint")
        assert xs == sub["checkpoint"].tolist()
        assert ys == sub["mean"].tolist()
        assert np.allclose(stds, sub["std"].tolist(), atol=1e-12)


def test_curves_by_f_plot_values_equal_csv(csv_path):
    frame = load_aggregate(csv_path)
    spec = FigureSpec(kind="learning-curves-by-f", csv=csv_path, out=csv_path,
                      algorithm="cwp")
    fig = build_figure(spec, frame)
    series = series_by_label(fig.axes[0])
    assert set(series) == {"f=0", "f=1"}
    sub = frame[
        (frame["algorithm"] == "cwp")
        & (frame["f"] == 0.0)
        & (frame["strategy"] == "discriminative")
    ].sort_values("checkpoint")
    assert series["f=0"][1] == sub["mean"].tolist()


def test_strategy_comparison_bars_equal_csv(csv_path):
    frame = load_aggregate(csv_path)
    spec = FigureSpec(kind="strategy-comparison", csv=csv_path, out=csv_path, f=0.0)
    fig = build_figure(spec, frame)
    ax = fig.axes[0]
    bars = {
        c.get_label(): list(c.datavalues)
        for c in ax.containers
        if isinstance(c, BarContainer)
    }
    # default column is the last checkpoint shared by every condition
    for strategy in ("discriminative", "descriptive"):
        expected = [
            float(
                frame[
                    (frame["algorithm"] == algorithm)
                    & (frame["f"] == 0.0)
                    & (frame["strategy"] == strategy)
                    & (frame["checkpoint"] == 100)
                ]["mean"].iloc[0]
            )
            for algorithm in ("knn", "pe", "ap", "cwp")
        ]
        assert bars[strategy] == expected


def test_strategy_comparison_honors_checkpoint_filter(csv_path):
    frame = load_aggregate(csv_path)
    spec = FigureSpec(kind="strategy-comparison", csv=csv_path, out=csv_path,
                      f=1.0, checkpoint=10)
    fig = build_figure(spec, frame)
    bar_groups = [c for c in fig.axes[0].containers if isinstance(c, BarContainer)]
    first_bar = bar_groups[0].datavalues[0]
    expected = frame[
        (frame["algorithm"] == "knn")
        & (frame["f"] == 1.0)
        & (frame["strategy"] == "discriminative")
        & (frame["checkpoint"] == 10)
    ]["mean"].iloc[0]
    assert first_bar == expected


def test_missing_condition_error_lists_available_keys(csv_path):
    frame = load_aggregate(csv_path)
    spec = FigureSpec(kind="learning-curves-by-algorithm", csv=csv_path, out=csv_path,
                      f=0.5)
    with pytest.raises(MissingConditionError, match="available conditions") as err:
        build_figure(spec, frame)
    assert "(knn, f=0, discriminative)" in str(err.value)


def test_filters_are_required_per_kind(csv_path):
    frame = load_aggregate(csv_path)
    with pytest.raises(ValueError, match="requires an f"):
        build_figure(
            FigureSpec(kind="learning-curves-by-algorithm", csv=csv_path, out=csv_path),
            frame,
        )
    with pytest.raises(ValueError, match="requires an algorithm"):
        build_figure(
            FigureSpec(kind="learning-curves-by-f", csv=csv_path, out=csv_path), frame
        )


def test_logx_flag_switches_axis_scale(csv_path):
    frame = load_aggregate(csv_path)
    fig = build_figure(
        FigureSpec(kind="learning-curves-by-algorithm", csv=csv_path, out=csv_path,
                   f=1.0, logx=True),
        frame,
    )
    assert fig.axes[0].get_xscale() == "symlog"


def test_render_emits_png_and_svg(tmp_path, csv_path):
    out = tmp_path / "figs" / "il-comparison"
    written = render(
        FigureSpec(kind="learning-curves-by-algorithm", csv=csv_path, out=out, f=1.0)
    )
    assert [p.suffix for p in written] == [".png", ".svg"]
    assert all(p.exists() and p.stat().st_size > 0 for p in written)


def test_repeated_renders_are_byte_identical(tmp_path, csv_path):
    spec1 = FigureSpec(kind="learning-curves-by-f", csv=csv_path,
                       out=tmp_path / "a" / "fig", algorithm="pe")
    spec2 = FigureSpec(kind="learning-curves-by-f", csv=csv_path,
                       out=tmp_path / "b" / "fig", algorithm="pe")
    first = render(spec1)
    second = render(spec2)
    for p1, p2 in zip(first, second):
        assert p1.read_bytes() == p2.read_bytes()


def test_loader_rejects_foreign_csv(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="lacks columns"):
        load_aggregate(bad)


def test_invalid_kind_is_rejected(csv_path):
    with pytest.raises(ValueError, match="kind"):
        FigureSpec(kind="pie-chart", csv=csv_path, out=csv_path)


def test_cli_renders_and_reports_paths(tmp_path, csv_path, capsys):
    out = tmp_path / "fig"
    code = main([
        "--kind", "learning-curves-by-algorithm", "--csv", str(csv_path),
        "--out", str(out), "--f", "1",
    ])
    assert code == 0
    printed = capsys.readouterr().out.splitlines()
    assert printed == [str(out.with_suffix(".png")), str(out.with_suffix(".svg"))]


def test_cli_missing_condition_exits_nonzero(tmp_path, csv_path, capsys):
    code = main([
        "--kind", "learning-curves-by-algorithm", "--csv", str(csv_path),
        "--out", str(tmp_path / "fig"), "--f", "0.75",
    ])
    assert code == 1
    assert "available conditions" in capsys.readouterr().err
