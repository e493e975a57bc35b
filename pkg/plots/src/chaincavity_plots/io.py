"""CSV loading with loud schema validation.

The simulator's file contracts are frozen here as required column sets;
extra columns are tolerated so the producer may extend its output, but
a missing column is always a hard error.
"""

from __future__ import annotations

import pandas as pd

__all__ = ["SchemaError", "SCHEMAS", "SWEEP_COLUMNS", "load_table",
           "varying_axes", "drop_failed_rows"]


class SchemaError(ValueError):
    """An input file does not conform to the producer's schema."""


SCHEMAS = {
    "spectrum": ("param_name", "param_value", "branch", "energy_eV",
                 "photon_weight", "entropy_bits"),
    "events": ("kind", "param_value", "gap_eV", "branch_lo", "branch_hi",
               "photon_weight"),
    "steady": ("config", "L", "N", "h", "delta", "zeta", "Delta", "OmegaR",
               "kappa", "gamma_d", "gamma_R", "drive", "xi_T", "xi_c",
               "p_11", "p_bulk", "p_N", "p_c", "I_i", "I_o", "eta",
               "flux_residual"),
}

# Columns a sweep can vary; used to infer what a steady table was run over.
SWEEP_COLUMNS = ("zeta", "delta", "Delta", "L", "N")


def load_table(path, schema: str) -> pd.DataFrame:
    required = SCHEMAS[schema]
    try:
        df = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path}: empty file, expected {schema} columns "
                          f"{', '.join(required)}") from None
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise SchemaError(f"{path}: not a {schema} table, missing columns "
                          f"{', '.join(missing)}")
    return df


def varying_axes(df: pd.DataFrame) -> list[str]:
    """Sweep columns that take more than one value in this table."""
    return [c for c in SWEEP_COLUMNS if df[c].nunique() > 1]


def drop_failed_rows(df: pd.DataFrame) -> pd.DataFrame:
    """Remove rows a producer marked as failed (optional status column)."""
    if "status" in df.columns:
        return df[df["status"] == "ok"]
    return df
