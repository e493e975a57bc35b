"""Render every panel kind from artifacts produced by the simulator CLI.

The simulator is driven as an external subprocess; nothing from it is
imported here.
"""

import json
import subprocess
import sys

import pandas as pd
import pytest

from chaincavity_plots.cli import main
from chaincavity_plots.panels import build_panel

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def run_sim(tmp, name, config, command, out):
    cfg = tmp / f"{name}.json"
    cfg.write_text(json.dumps(config))
    subprocess.run([sys.executable, "-m", "chaincavity.cli", command,
                    "--config", str(cfg), "--out", str(out)], check=True)
    return out


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("sim")
    arts = {}
    arts["spectrum_dir"] = run_sim(
        tmp, "spec", {
            "configuration": "ho_st",
            "sweep": {"axes": [
                {"param": "zeta", "min": -1.0, "max": 1.0, "steps": 201}]},
        }, "spectrum", tmp / "spec_out")
    arts["steady_1d"] = run_sim(
        tmp, "s1", {
            "configuration": "he_st",
            "sweep": {"axes": [
                {"param": "delta", "min": 0.1, "max": 0.4, "steps": 16}]},
        }, "steady", tmp / "s1_out") / "steady.csv"
    arts["steady_1d_nocav"] = run_sim(
        tmp, "s1n", {
            "configuration": "he_st", "cavity": False,
            "sweep": {"axes": [
                {"param": "delta", "min": 0.1, "max": 0.4, "steps": 16}]},
        }, "steady", tmp / "s1n_out") / "steady.csv"
    arts["steady_2d"] = run_sim(
        tmp, "s2", {
            "configuration": "he_st",
            "sweep": {"axes": [
                {"param": "zeta", "min": -0.3, "max": 0.3, "steps": 9},
                {"param": "Delta", "min": -0.2, "max": 0.2, "steps": 7}]},
        }, "steady", tmp / "s2_out") / "steady.csv"
    arts["steady_L"] = run_sim(
        tmp, "sL", {
            "configuration": "he_st", "N": 4,
            "sweep": {"axes": [{"param": "L", "values": [2, 3, 4, 5]}]},
        }, "steady", tmp / "sL_out") / "steady.csv"
    return arts


def test_all_panels_render_from_simulator_artifacts(artifacts, tmp_path):
    spectrum = artifacts["spectrum_dir"] / "spectrum.csv"
    events = artifacts["spectrum_dir"] / "events.csv"
    jobs = [
        ("spectrum_map", [str(spectrum)], str(events)),
        ("entropy_lines", [str(spectrum)], None),
        ("d2_scatter", [str(spectrum)], None),
        ("steady_lines", [str(artifacts["steady_1d"]),
                          str(artifacts["steady_1d_nocav"])], None),
        ("eta_heatmap", [str(artifacts["steady_2d"])], None),
        ("oddeven_bars", [str(artifacts["steady_L"])], None),
    ]
    for kind, inputs, ev in jobs:
        args = ["render", "--panel", kind, "--out",
                str(tmp_path / f"{kind}.png")]
        for p in inputs:
            args += ["--in", p]
        if ev:
            args += ["--events", ev]
        assert main(args) == 0, kind
        assert (tmp_path / f"{kind}.png").read_bytes().startswith(PNG_MAGIC)


def test_spectrum_map_marks_every_detected_event(artifacts):
    spectrum = artifacts["spectrum_dir"] / "spectrum.csv"
    events = artifacts["spectrum_dir"] / "events.csv"
    n_events = len(pd.read_csv(events))
    assert n_events > 0, "simulator found no events on the reference scan"
    fig = build_panel("spectrum_map", [spectrum], events)
    assert len(fig.axes[0].lines) == n_events
