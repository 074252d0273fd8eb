import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repeatscan.costmodel import (REF_DETECT_TICKS, REF_READ_CELLS,
                                  CostReport, CycleCountMismatch, CycleCounts,
                                  EnergyParams, TimingParams, build_report,
                                  energy, energy_shares, geometry_for_text,
                                  latency, latency_shares)

DEFAULTS = TimingParams()


def test_default_geometry():
    assert DEFAULTS.mem_rows == 64
    assert DEFAULTS.mem_cols == 128
    assert DEFAULTS.total_cols == 130


def test_latency_reference_instance_exact():
    fig = latency(DEFAULTS)
    assert fig.t_load_ns == 4096.0
    assert fig.dt12_ns == 128.5
    assert fig.dt23_ns == 1024.625
    assert fig.dt34_ns == 1.0
    assert fig.per_block_ns == 1154.125


def test_total_composition():
    fig = latency(replace(DEFAULTS, searched_blocks=128))
    assert fig.t_total_ns == fig.t_load_ns + 128 * fig.per_block_ns
    assert fig.t_total_ns - fig.t_load_ns == 147728.0


def test_million_char_sizing():
    p3 = geometry_for_text(1_000_000, 3)
    assert (p3.data_width, p3.searched_blocks) == (128, 128)
    p5 = geometry_for_text(1_000_000, 5)
    assert (p5.data_width, p5.searched_blocks) == (126, 128)
    p10 = geometry_for_text(1_000_000, 10)
    assert (p10.data_width, p10.searched_blocks) == (121, 136)
    assert latency(p10).t_total_ns - latency(p10).t_load_ns == 148393.0


def test_closed_form_cycles():
    cyc = CycleCounts.closed_form(DEFAULTS)
    k = DEFAULTS.searched_blocks
    assert cyc.search == k * 128
    assert cyc.write_columns == k * 128
    assert cyc.read_groups == k * 1024
    assert cyc.detector_ticks == k * 8197
    assert cyc.resets == k
    assert cyc.read_cells == k * 8192


def test_energy_reference_instance():
    fig = energy(EnergyParams(), CycleCounts.closed_form(
        replace(DEFAULTS, searched_blocks=1)))
    assert fig.write_nj == pytest.approx(1.228)
    assert fig.reset_nj == pytest.approx(1.228)
    assert fig.read_nj == pytest.approx(0.82)
    assert fig.search_nj == pytest.approx(1.1769)
    assert fig.detect_nj == pytest.approx(0.7709)
    assert fig.total_nj == pytest.approx(5.2238)
    assert fig.per_char_pj == pytest.approx(5223.8 / 8192)


def test_energy_phases_sum_to_total():
    fig = energy(EnergyParams(), CycleCounts.closed_form(DEFAULTS))
    assert fig.total_nj == pytest.approx(
        fig.write_nj + fig.reset_nj + fig.read_nj + fig.search_nj + fig.detect_nj)


def test_energy_scaled_pattern_lengths():
    p10 = TimingParams(data_width=121, pattern_len=10, searched_blocks=1)
    fig = energy(EnergyParams(), CycleCounts.closed_form(p10))
    assert fig.search_nj == pytest.approx(1.1769 * 121 / 128)
    assert abs(fig.total_nj - 4.9) / 4.9 < 0.03
    p5 = TimingParams(data_width=126, pattern_len=5, searched_blocks=1)
    fig5 = energy(EnergyParams(), CycleCounts.closed_form(p5))
    assert abs(fig5.total_nj - 5.09) / 5.09 < 0.05


def test_energy_linear_in_cycles():
    base = TimingParams(rows=64, data_width=32, pattern_len=3, blocks=4,
                        searched_blocks=4)
    doubled = replace(base, data_width=64)
    e1 = energy(EnergyParams(), CycleCounts.closed_form(base))
    e2 = energy(EnergyParams(), CycleCounts.closed_form(doubled))
    assert e2.search_nj == pytest.approx(2 * e1.search_nj)
    assert e2.write_nj == pytest.approx(2 * e1.write_nj)
    assert e2.read_nj == pytest.approx(2 * e1.read_nj)
    assert e2.reset_nj == pytest.approx(e1.reset_nj)


def test_breakdown_shares():
    fig = latency(DEFAULTS)
    shares = latency_shares(fig)
    assert shares["reset"] == pytest.approx(1 / 1154.125)
    assert shares["read_detect"] == pytest.approx(1024.625 / 1154.125)
    assert sum(shares.values()) == pytest.approx(1.0, abs=1e-9)
    eshares = energy_shares(energy(EnergyParams(), CycleCounts.closed_form(DEFAULTS)))
    assert sum(eshares.values()) == pytest.approx(1.0, abs=1e-9)


def test_build_report_accepts_matching_meter():
    metered = CycleCounts.closed_form(DEFAULTS)
    report = build_report(DEFAULTS, EnergyParams(), metered)
    assert isinstance(report, CostReport)
    assert report.cycles == metered


def test_build_report_rejects_mismatched_meter():
    metered = CycleCounts.closed_form(DEFAULTS)
    wrong = replace(metered, search=metered.search + 1)
    with pytest.raises(CycleCountMismatch):
        build_report(DEFAULTS, EnergyParams(), wrong)


def test_params_validation():
    with pytest.raises(ValueError):
        TimingParams(rows=10, blocks=4)
    with pytest.raises(ValueError):
        TimingParams(clock_ns=0)
    with pytest.raises(ValueError):
        TimingParams(data_width=2, pattern_len=3)
    with pytest.raises(ValueError):
        geometry_for_text(100, 100)


geometries = st.builds(
    TimingParams,
    clock_ns=st.just(1.0),
    write_ns=st.just(1.0),
    rows=st.integers(1, 64).map(lambda x: x * 8),
    data_width=st.integers(4, 256),
    pattern_len=st.integers(1, 4),
    blocks=st.sampled_from([1, 2, 4, 8]),
    searched_blocks=st.integers(1, 256),
)


@given(geometries, st.data())
@settings(max_examples=200, deadline=None)
def test_latency_monotone(params, data):
    fig = latency(params)
    grow = data.draw(st.sampled_from(["rows", "data_width", "searched_blocks"]))
    bumped = replace(params, **{grow: getattr(params, grow) +
                                (params.blocks if grow == "rows" else 1)})
    other = latency(bumped)
    assert other.t_total_ns >= fig.t_total_ns


@given(geometries)
@settings(max_examples=100, deadline=None)
def test_metered_closed_form_consistency(params):
    cyc = CycleCounts.closed_form(params)
    k, m, n = params.searched_blocks, params.mem_rows, params.mem_cols
    assert cyc.search == k * params.data_width
    assert cyc.detector_ticks == k * (m * n + 5)
    assert cyc.read_groups == k * m * math.ceil(n / 8)
    assert cyc.resets == k


def test_reference_constants_describe_the_64x128_instance():
    assert REF_READ_CELLS == 8192
    assert REF_DETECT_TICKS == 8197
