"""Render figure-style panels from chaincavity CSV artifacts.

This package only reads the CSV/JSON files the simulator writes; it
never imports the simulator or recomputes physics.
"""

from .io import SchemaError, load_table, varying_axes
from .panels import PANEL_KINDS, build_panel, save_panel

__all__ = ["SchemaError", "load_table", "varying_axes",
           "PANEL_KINDS", "build_panel", "save_panel"]

__version__ = "0.1.0"
