import pandas as pd
import pytest
from conftest import make_steady

from chaincavity_plots.io import (SchemaError, drop_failed_rows, load_table,
                                  varying_axes)


def test_load_table_accepts_conforming_files(spectrum_csv, steady_1d_csv):
    spec = load_table(spectrum_csv, "spectrum")
    assert len(spec) == 42
    steady = load_table(steady_1d_csv, "steady")
    # extra columns beyond the frozen schema are tolerated
    assert "status" in steady.columns


def test_missing_column_is_named(tmp_path, spectrum_csv):
    df = pd.read_csv(spectrum_csv).drop(columns=["photon_weight"])
    bad = tmp_path / "bad.csv"
    df.to_csv(bad, index=False)
    with pytest.raises(SchemaError, match="photon_weight"):
        load_table(bad, "spectrum")
    with pytest.raises(SchemaError, match="bad.csv"):
        load_table(bad, "spectrum")


def test_empty_file_is_a_schema_error(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text("")
    with pytest.raises(SchemaError, match="empty"):
        load_table(bad, "events")


def test_header_only_events_load_as_zero_rows(empty_events_csv):
    assert len(load_table(empty_events_csv, "events")) == 0


def test_varying_axes_follow_column_order(steady_2d_csv, steady_1d_csv):
    assert varying_axes(load_table(steady_2d_csv, "steady")) == ["zeta", "Delta"]
    assert varying_axes(load_table(steady_1d_csv, "steady")) == ["delta"]


def test_drop_failed_rows(tmp_path):
    path = make_steady(tmp_path / "s.csv",
                       [{"delta": 0.1}, {"delta": 0.2, "_status": "error: x"}])
    df = load_table(path, "steady")
    assert len(drop_failed_rows(df)) == 1
    assert len(drop_failed_rows(df.drop(columns=["status"]))) == 2
