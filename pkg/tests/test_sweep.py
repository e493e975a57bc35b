"""Sweep orchestration tests: grids, ordering, parallelism, CSV artifacts."""

import csv
import json

import numpy as np
import pytest

from chaincavity import (
    LatticeSpec,
    SweepAxis,
    SweepPlan,
    SweepResult,
    SweepTask,
    g_from_rabi,
    run_sweep,
    steady_row,
    write_events_csv,
    write_manifest,
    write_spectrum_csv,
    write_steady_csv,
)
from chaincavity.lattice import ConfigurationKind
from chaincavity.sweep import (
    EVENT_COLUMNS,
    SPECTRUM_COLUMNS,
    STEADY_COLUMNS,
    THREADS_ENV_VAR,
    default_threads,
)


BASE = LatticeSpec(kind=ConfigurationKind.HE_ST, L=2, N=4, g=g_from_rabi(1.0, 2, 4))


def steady_plan(axes):
    return SweepPlan(base=BASE, axes=axes, task=SweepTask.STEADY)


def test_linear_axis_construction():
    ax = SweepAxis.linear("zeta", -1.0, 1.0, 5)
    assert ax.name == "zeta"
    np.testing.assert_allclose(ax.values, [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert ax.continuous


def test_linear_axis_rejects_integer_parameters_and_short_grids():
    with pytest.raises(ValueError):
        SweepAxis.linear("L", 1, 4, 4)
    with pytest.raises(ValueError):
        SweepAxis.linear("zeta", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        SweepAxis.linear("h", 0.0, 1.0, 3)


def test_integer_axis_construction():
    ax = SweepAxis.integers("L", [2, 3, 4])
    assert not ax.continuous
    assert list(ax.values) == [2, 3, 4]
    with pytest.raises(ValueError):
        SweepAxis.integers("zeta", [1, 2])


def test_plan_validation():
    with pytest.raises(ValueError):
        SweepPlan(base=BASE, axes=(), task=SweepTask.STEADY)
    three = (SweepAxis.linear("zeta", 0, 1, 3),
             SweepAxis.linear("delta", 0, 1, 3),
             SweepAxis.linear("Delta", 0, 1, 3))
    with pytest.raises(ValueError):
        SweepPlan(base=BASE, axes=three, task=SweepTask.STEADY)
    # spectral tasks want exactly one continuous axis
    with pytest.raises(ValueError):
        SweepPlan(base=BASE, axes=(SweepAxis.integers("L", [2, 3]),),
                  task=SweepTask.DETECT)


def test_steady_row_carries_full_provenance():
    row = steady_row(BASE)
    assert set(row) == set(STEADY_COLUMNS)
    assert row["config"] == "he_st"
    assert row["L"] == 2 and row["N"] == 4
    assert row["OmegaR"] == pytest.approx(1.0)
    assert row["status"] == "ok"
    assert row["flux_residual"] < 1e-10


def test_steady_row_records_solver_failure_without_raising():
    dead = LatticeSpec(kind=ConfigurationKind.HO_ST, L=1, N=2, cavity=False,
                       g=0.0, xi_T=0.0, gamma_d=0.0, gamma_R=0.0, kappa=0.0)
    row = steady_row(dead)
    assert row["status"].startswith("error:")
    assert np.isnan(row["eta"])


def test_sweep_rows_in_row_major_order():
    plan = SweepPlan(base=BASE,
                     axes=(SweepAxis.linear("zeta", 0.0, 0.2, 3),
                           SweepAxis.linear("delta", 0.1, 0.3, 2)),
                     task=SweepTask.STEADY)
    res = run_sweep(plan, threads=2)
    zs = [row["zeta"] for row in res.steady_rows]
    ds = [row["delta"] for row in res.steady_rows]
    assert zs == pytest.approx([0.0, 0.0, 0.1, 0.1, 0.2, 0.2])
    assert ds == pytest.approx([0.1, 0.3, 0.1, 0.3, 0.1, 0.3])


def test_sweep_is_deterministic_and_thread_invariant():
    plan = steady_plan((SweepAxis.linear("zeta", -0.4, 0.4, 9),))
    a = run_sweep(plan, threads=1)
    b = run_sweep(plan, threads=4)
    for ra, rb in zip(a.steady_rows, b.steady_rows):
        assert ra == rb


def test_pinned_rabi_recomputes_coupling_per_point():
    axis = SweepAxis.integers("L", [2, 3])
    pinned = SweepPlan(base=BASE, axes=(axis,), task=SweepTask.STEADY, pin_rabi=1.0)
    rows = run_sweep(pinned, threads=1).steady_rows
    assert [r["OmegaR"] for r in rows] == pytest.approx([1.0, 1.0])
    direct = steady_row(LatticeSpec(kind=ConfigurationKind.HE_ST, L=3, N=4,
                                    g=g_from_rabi(1.0, 3, 4)))
    assert rows[1]["eta"] == pytest.approx(direct["eta"], abs=1e-12)

    fixed = SweepPlan(base=BASE, axes=(axis,), task=SweepTask.STEADY)
    frows = run_sweep(fixed, threads=1).steady_rows
    # g held, so the collective splitting grows with the array
    assert frows[1]["OmegaR"] == pytest.approx(2 * BASE.g * np.sqrt(3 * 4))


def test_detect_task_emits_spectrum_and_event_rows():
    plan = SweepPlan(base=LatticeSpec(kind=ConfigurationKind.HE_ST, L=2, N=8, g=0.125),
                     axes=(SweepAxis.linear("zeta", 0.02, 0.12, 51),),
                     task=SweepTask.DETECT)
    res = run_sweep(plan, threads=2)
    assert len(res.spectrum_rows) == 51 * 17  # branches x grid points
    assert set(res.spectrum_rows[0]) == set(SPECTRUM_COLUMNS)
    assert res.event_rows, "expected at least one event in this window"
    assert set(res.event_rows[0]) == set(EVENT_COLUMNS)
    kinds = {r["kind"] for r in res.event_rows}
    assert kinds <= {"crossing", "anticrossing"}


def test_csv_round_trip_and_line_endings(tmp_path):
    plan = steady_plan((SweepAxis.linear("zeta", -0.1, 0.1, 3),))
    res = run_sweep(plan, threads=1)
    out = tmp_path / "steady.csv"
    write_steady_csv(out, res.steady_rows)
    raw = out.read_bytes()
    assert b"\r" not in raw
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    assert list(rows[0]) == list(STEADY_COLUMNS)
    # %.17g formatting survives a float round trip exactly
    for disk, mem in zip(rows, res.steady_rows):
        assert float(disk["eta"]) == mem["eta"]
        assert float(disk["I_o"]) == mem["I_o"]


def test_spectrum_and_event_csv_writers(tmp_path):
    plan = SweepPlan(base=LatticeSpec(kind=ConfigurationKind.HE_ST, L=2, N=8, g=0.125),
                     axes=(SweepAxis.linear("zeta", 0.02, 0.12, 26),),
                     task=SweepTask.DETECT)
    res = run_sweep(plan, threads=1)
    spath = tmp_path / "spectrum.csv"
    epath = tmp_path / "events.csv"
    write_spectrum_csv(spath, res.spectrum_rows)
    write_events_csv(epath, res.event_rows)
    with open(spath, newline="") as fh:
        srows = list(csv.DictReader(fh))
    assert len(srows) == len(res.spectrum_rows)
    branches = {int(r["branch"]) for r in srows}
    assert branches == set(range(17))
    with open(epath, newline="") as fh:
        erows = list(csv.DictReader(fh))
    assert len(erows) == len(res.event_rows)


def test_manifest_contents(tmp_path):
    plan = steady_plan((SweepAxis.linear("zeta", 0.0, 0.1, 2),))
    res = run_sweep(plan, threads=1)
    mpath = tmp_path / "manifest.json"
    write_manifest(mpath, plan, res)
    doc = json.loads(mpath.read_text())
    assert doc["task"] == "steady"
    assert doc["axes"][0]["name"] == "zeta"
    assert doc["rows"]["steady"] == 2
    assert doc["base"]["kind"] == "he_st"
    assert "wall_time_s" in doc


def test_default_threads_env_override(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    assert default_threads() == 3
    monkeypatch.setenv(THREADS_ENV_VAR, "zero")
    with pytest.raises(ValueError):
        default_threads()
    monkeypatch.delenv(THREADS_ENV_VAR)
    assert default_threads() >= 1
