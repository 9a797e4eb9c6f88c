import dataclasses
import math

import numpy as np
import pytest
from conftest import PHI_DEFAULT, R_MATCHED

from squeezed_readout import (
    NumericalError,
    SweepFixed,
    SweepSpec,
    ValidationError,
    contrast,
    find_peak,
    integrated_variance,
    optimal_squeezing,
    render_figure_csv,
    render_sweep_csv,
    reproduce_figure2,
    reproduce_figure3,
    run_sweep,
    snr,
    write_sweep_csv,
)

SNR_MATCHED_REF = 3.580922280271772


@pytest.fixture()
def fixed(t_matched, probe_matched, params_k2) -> SweepFixed:
    return SweepFixed(
        params=params_k2, probe=probe_matched, phi=PHI_DEFAULT, t=t_matched
    )


def test_time_sweep_skips_undefined_origin(fixed):
    spec = SweepSpec(
        variable="t", lo=0.0, hi=2.0, points=41, fixed=fixed, metric="snr"
    )
    result = run_sweep(spec)
    assert len(result.rows) == 41
    assert result.rows[0].skipped
    assert math.isnan(result.rows[0].metric_value)
    for row in result.rows[1:]:
        assert not row.skipped
        assert math.isfinite(row.metric_value)
        assert row.metric_value > 0.0
    assert result.rows[-1].value == 2.0


def test_mismatch_sweep_is_even(fixed):
    spec = SweepSpec(
        variable="delta_theta",
        lo=-math.pi,
        hi=math.pi,
        points=81,
        fixed=fixed,
        metric="snr",
    )
    rows = run_sweep(spec).rows
    for i in range(len(rows)):
        assert rows[i].metric_value == pytest.approx(
            rows[len(rows) - 1 - i].metric_value, rel=1e-10
        )
    assert rows[0].metric_value == pytest.approx(rows[-1].metric_value, rel=1e-12)
    # the mismatch enters only through the noise: contrast stays put
    mid = len(rows) // 2
    assert rows[mid].metric_value == pytest.approx(SNR_MATCHED_REF, rel=1e-10)


def test_amplitude_sweep_increases_snr(fixed):
    spec = SweepSpec(
        variable="alpha", lo=0.5, hi=12.0, points=40, fixed=fixed, metric="snr"
    )
    values = [row.metric_value for row in run_sweep(spec).rows]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_squeezing_sweep_peaks_at_optimum(fixed, t_matched, params_k2):
    spec = SweepSpec(
        variable="r", lo=0.5, hi=1.0, points=200, fixed=fixed, metric="snr"
    )
    result = run_sweep(spec)
    values = [row.metric_value for row in result.rows]
    best = result.rows[int(np.argmax(values))].value
    step = 0.5 / 199
    assert abs(best - optimal_squeezing(t_matched, params_k2)) <= step


def test_variance_metric_symmetrizes(fixed, t_matched, params_k2, probe_matched):
    spec = SweepSpec(
        variable="delta_theta",
        lo=-1.5,
        hi=1.5,
        points=11,
        fixed=fixed,
        metric="variance",
    )
    for row in run_sweep(spec).rows:
        assert row.metric_value == pytest.approx(
            0.5 * (row.variance_plus + row.variance_minus), rel=1e-14
        )


def test_sweep_spec_validation(fixed):
    with pytest.raises(ValidationError, match="kappa"):
        SweepSpec(variable="kappa", lo=0.0, hi=2.0, points=10, fixed=fixed, metric="snr")
    with pytest.raises(ValidationError, match="lo >= 0"):
        SweepSpec(variable="r", lo=-0.5, hi=1.0, points=10, fixed=fixed, metric="snr")
    with pytest.raises(ValidationError, match="points"):
        SweepSpec(variable="r", lo=0.0, hi=1.0, points=1, fixed=fixed, metric="snr")
    with pytest.raises(ValidationError, match="lo < hi"):
        SweepSpec(variable="r", lo=1.0, hi=0.5, points=10, fixed=fixed, metric="snr")
    with pytest.raises(ValidationError, match="variable"):
        SweepSpec(variable="phi", lo=0.0, hi=1.0, points=10, fixed=fixed, metric="snr")
    with pytest.raises(ValidationError, match="metric"):
        SweepSpec(variable="r", lo=0.0, hi=1.0, points=10, fixed=fixed, metric="bitrate")


def test_find_peak_locates_squeezing_optimum(fixed, t_matched, params_k2):
    peak = find_peak("snr", "r", (0.0, 2.0), fixed)
    r_star = optimal_squeezing(t_matched, params_k2)
    assert not peak.flat
    assert abs(peak.location - r_star) < 1e-5
    assert peak.value == pytest.approx(
        snr(
            t_matched,
            dataclasses.replace(fixed.probe, r=r_star),
            params_k2,
            PHI_DEFAULT,
        ),
        rel=1e-9,
    )


def test_find_peak_locates_zero_mismatch(fixed):
    peak = find_peak("snr", "delta_theta", (-0.5 * math.pi, 0.5 * math.pi), fixed)
    assert abs(peak.location) < 2e-6
    assert peak.value == pytest.approx(SNR_MATCHED_REF, rel=1e-9)


def test_find_peak_agrees_with_dense_grid(fixed):
    peak = find_peak("snr", "r", (0.5, 1.0), fixed)
    spec = SweepSpec(
        variable="r", lo=0.5, hi=1.0, points=10001, fixed=fixed, metric="snr"
    )
    rows = run_sweep(spec).rows
    grid_best = rows[int(np.argmax([row.metric_value for row in rows]))].value
    assert abs(peak.location - grid_best) <= 0.5 / 10000


def test_find_peak_reports_flat_metric(fixed, t_matched, params_k2, probe_matched):
    # contrast does not depend on the squeezing strength
    peak = find_peak("contrast", "r", (0.0, 2.0), fixed)
    assert peak.flat
    assert peak.location == 0.0
    assert peak.value == pytest.approx(
        contrast(t_matched, probe_matched, params_k2, PHI_DEFAULT), rel=1e-12
    )


def test_find_peak_rejects_multimodal_range(fixed):
    # the mismatch metric repeats with period pi, so this window holds
    # two equivalent maxima
    with pytest.raises(NumericalError, match="local maxima"):
        find_peak("snr", "delta_theta", (-0.5, math.pi + 0.5), fixed)


def test_find_peak_rejects_undefined_points(fixed):
    with pytest.raises(NumericalError, match="undefined"):
        find_peak("snr", "t", (0.0, 1.0), fixed)


def test_find_peak_validation(fixed):
    with pytest.raises(ValidationError, match="bounds"):
        find_peak("snr", "r", (1.0, 0.5), fixed)
    with pytest.raises(ValidationError, match="tol"):
        find_peak("snr", "r", (0.0, 1.0), fixed, tol=0.0)


def test_sweep_csv_round_trip(fixed, tmp_path):
    spec = SweepSpec(
        variable="r", lo=0.0, hi=1.5, points=7, fixed=fixed, metric="snr"
    )
    result = run_sweep(spec)
    text = render_sweep_csv(result)
    assert text == render_sweep_csv(run_sweep(spec))
    assert "\r" not in text
    assert text.endswith("\n")

    lines = text.splitlines()
    meta_lines = [line for line in lines if line.startswith("# ")]
    assert meta_lines == sorted(meta_lines)
    header_index = len(meta_lines)
    header = lines[header_index].split(",")
    assert header[0] == "r"
    assert header[1] == "snr"
    first_row = lines[header_index + 1].split(",")
    assert float(first_row[0]) == 0.0
    assert float(first_row[1]) == pytest.approx(
        result.rows[0].metric_value, rel=1e-15
    )

    path = tmp_path / "sweep.csv"
    write_sweep_csv(result, path)
    assert path.read_text(encoding="utf-8") == text


def test_figure2_structure_and_values():
    # 201 points puts the reference times exactly on the grid
    table = reproduce_figure2("panel_ab", points=201)
    assert len(table.rows) == 4 * 201
    assert table.columns == ("t_us", "r", "snr", "fidelity")
    assert table.meta["variant"] == "panel_ab"
    by_key = {(round(t, 10), r): (s, f) for t, r, s, f in table.rows}
    s, f = by_key[(1.0, 0.85)]
    assert s == pytest.approx(2.3053658002172113, rel=1e-12)
    assert f == pytest.approx(0.9786907760824057, rel=1e-12)
    s0, _ = by_key[(1.0, 0.0)]
    assert s0 == pytest.approx(1.6745219347098794, rel=1e-12)
    s9, _ = by_key[(0.9, 0.85)]
    s9_0, _ = by_key[(0.9, 0.0)]
    assert s9 / s9_0 == pytest.approx(1.4425446792098073, rel=1e-12)
    # zero-time rows carry the continuous limit instead of a gap
    assert by_key[(0.0, 0.85)] == (0.0, 0.0)


def test_figure2_other_panel():
    table = reproduce_figure2("panel_cd", r_values=(0.85,), points=201)
    assert len(table.rows) == 201
    assert table.meta["kappa_over_chi"] == 2.0
    by_t = {round(t, 10): (s, f) for t, _, s, f in table.rows}
    s, f = by_t[0.8]
    assert s == pytest.approx(2.3499880876146935, rel=1e-12)
    assert f == pytest.approx(0.9810951666934825, rel=1e-12)


def test_figure2_validation():
    with pytest.raises(ValidationError, match="params_variant"):
        reproduce_figure2("panel_xy")
    with pytest.raises(ValidationError, match="r values"):
        reproduce_figure2("panel_ab", r_values=(0.5, -0.1))


def test_figure3_table():
    table = reproduce_figure3()
    assert len(table.rows) == 800
    assert table.name == "figure3"
    coherent = {(row[4], row[5]) for row in table.rows}
    assert len(coherent) == 1

    mismatch_rows = [row for row in table.rows if row[0] == "delta_theta"]
    assert len(mismatch_rows) == 400
    first = mismatch_rows[0]
    assert first[1] == -math.pi
    # a half-turn mismatch lands back on the matched ellipse
    assert first[2] == pytest.approx(SNR_MATCHED_REF, rel=1e-9)

    r_rows = [row for row in table.rows if row[0] == "r"]
    r_zero = next(row for row in r_rows if row[1] == 0.0)
    assert r_zero[2] == r_zero[4]
    assert r_zero[3] == r_zero[5]
    fid_by_r = {row[1]: row[3] for row in r_rows}
    assert fid_by_r[2.0] < max(fid_by_r.values())
    best_r = max(fid_by_r, key=fid_by_r.get)
    assert abs(best_r - R_MATCHED) < 0.05


def test_figure_csv_is_stable():
    text = render_figure_csv(reproduce_figure3(points=40))
    again = render_figure_csv(reproduce_figure3(points=40))
    assert text == again
    lines = text.splitlines()
    meta_lines = [line for line in lines if line.startswith("# ")]
    assert meta_lines == sorted(meta_lines)
    assert lines[len(meta_lines)].startswith("panel,x,snr,")
