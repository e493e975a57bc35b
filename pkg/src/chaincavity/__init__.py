"""Polariton spectra and steady-state exciton transport of cavity-coupled
multichain two-level arrays."""

__version__ = "0.1.0"

from .lattice import (ConfigurationKind, DriveKind, LatticeSpec, Bond,
                      BondList, SiteIndex, index_of, site_of, build_bonds)
from .hamiltonian import (HamiltonianMatrix, g_from_rabi, rabi_from_g,
                          build_h0, build_h_total)
from .spectrum import (EigenSolution, TrackedBands, CrossingEvent, EventKind,
                       diagonalize, entropy_of_state, binary_entropy,
                       track_bands, hopfield_second_derivative, detect_events,
                       scan_spectrum, scan_and_detect)
from .dynamics import (LiouvillianOperator, SteadyResult, PropagationResult,
                       SteadyStateError, build_liouvillian, steady_state,
                       propagate, max_stable_dt)
from .observables import (SteadyReport, occupations, input_current,
                          outgoing_current, efficiency, steady_report)
from .sweep import (SweepAxis, SweepTask, SweepPlan, SweepResult, run_sweep,
                    steady_row, write_steady_csv, write_spectrum_csv,
                    write_events_csv, write_manifest)

__all__ = [
    "ConfigurationKind", "DriveKind", "LatticeSpec", "Bond", "BondList",
    "SiteIndex", "index_of", "site_of", "build_bonds",
    "HamiltonianMatrix", "g_from_rabi", "rabi_from_g", "build_h0",
    "build_h_total",
    "EigenSolution", "TrackedBands", "CrossingEvent", "EventKind",
    "diagonalize", "entropy_of_state", "binary_entropy", "track_bands",
    "hopfield_second_derivative", "detect_events", "scan_spectrum",
    "scan_and_detect",
    "LiouvillianOperator", "SteadyResult", "PropagationResult",
    "SteadyStateError", "build_liouvillian", "steady_state", "propagate",
    "max_stable_dt",
    "SteadyReport", "occupations", "input_current", "outgoing_current",
    "efficiency", "steady_report",
    "SweepAxis", "SweepTask", "SweepPlan", "SweepResult", "run_sweep",
    "steady_row", "write_steady_csv", "write_spectrum_csv",
    "write_events_csv", "write_manifest",
]
