import pandas as pd
import pytest

from chaincavity_plots.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def render(args):
    return main(["render"] + args)


def test_every_panel_kind_renders(spectrum_csv, events_csv, steady_1d_csv,
                                  steady_2d_csv, steady_L_csv, tmp_path):
    jobs = [
        ("spectrum_map", ["--in", str(spectrum_csv),
                          "--events", str(events_csv)]),
        ("entropy_lines", ["--in", str(spectrum_csv)]),
        ("d2_scatter", ["--in", str(spectrum_csv)]),
        ("steady_lines", ["--in", str(steady_1d_csv)]),
        ("eta_heatmap", ["--in", str(steady_2d_csv)]),
        ("oddeven_bars", ["--in", str(steady_L_csv)]),
    ]
    for kind, args in jobs:
        out = tmp_path / f"{kind}.png"
        assert render(["--panel", kind, "--out", str(out)] + args) == 0
        assert out.read_bytes().startswith(PNG_MAGIC)


def test_repeated_in_overlays(steady_1d_csv, steady_two_config_csv, tmp_path):
    out = tmp_path / "overlay.png"
    code = render(["--panel", "steady_lines", "--in", str(steady_1d_csv),
                   "--in", str(steady_two_config_csv), "--out", str(out)])
    assert code == 0 and out.exists()


def test_schema_mismatch_exits_nonzero(spectrum_csv, tmp_path, capsys):
    df = pd.read_csv(spectrum_csv).drop(columns=["entropy_bits"])
    bad = tmp_path / "bad.csv"
    df.to_csv(bad, index=False)
    code = render(["--panel", "entropy_lines", "--in", str(bad),
                   "--out", str(tmp_path / "x.png")])
    assert code == 2
    assert "entropy_bits" in capsys.readouterr().err


def test_missing_file_exits_nonzero(tmp_path):
    code = render(["--panel", "steady_lines", "--in", str(tmp_path / "no.csv"),
                   "--out", str(tmp_path / "x.png")])
    assert code == 2


def test_events_rejected_for_other_panels(steady_1d_csv, events_csv, tmp_path):
    code = render(["--panel", "steady_lines", "--in", str(steady_1d_csv),
                   "--events", str(events_csv),
                   "--out", str(tmp_path / "x.png")])
    assert code == 2


def test_unknown_panel_kind_is_a_usage_error(spectrum_csv, tmp_path):
    with pytest.raises(SystemExit) as exc:
        render(["--panel", "waterfall", "--in", str(spectrum_csv),
                "--out", str(tmp_path / "x.png")])
    assert exc.value.code == 2
