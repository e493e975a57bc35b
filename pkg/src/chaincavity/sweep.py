"""Parameter sweeps over deterministic grids, with CSV/JSON emission.

A plan is a base sample plus one or two axes drawn from {zeta, delta,
Delta, L, N}.  Steady-state sweeps accept any axis combination; spectral
scans and event detection are one-dimensional and restricted to the
continuous axes.  Grid points are independent, so they are dispatched to
a thread pool, but rows are always emitted in row-major grid order and a
failing point only marks its own row.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from . import __version__
from .dynamics import build_liouvillian, steady_state
from .hamiltonian import g_from_rabi, rabi_from_g
from .lattice import ConfigurationKind, DriveKind, LatticeSpec
from .observables import steady_report
from .spectrum import (ENERGY_WINDOW, EPS_CROSS, PHOTON_WEIGHT_MIN,
                       REFINE_FACTOR, SWEEPABLE_AXES, scan_and_detect)

__all__ = [
    "SweepAxis",
    "SweepTask",
    "SweepPlan",
    "SweepResult",
    "run_sweep",
    "steady_row",
    "write_steady_csv",
    "write_spectrum_csv",
    "write_events_csv",
    "write_manifest",
    "STEADY_COLUMNS",
    "SPECTRUM_COLUMNS",
    "EVENT_COLUMNS",
    "default_threads",
]

AXIS_NAMES = ("zeta", "delta", "Delta", "L", "N")

STEADY_COLUMNS = ("config", "L", "N", "h", "delta", "zeta", "Delta", "OmegaR",
                  "kappa", "gamma_d", "gamma_R", "drive", "xi_T", "xi_c",
                  "p_11", "p_bulk", "p_N", "p_c", "I_i", "I_o", "eta",
                  "flux_residual", "status")
SPECTRUM_COLUMNS = ("param_name", "param_value", "branch", "energy_eV",
                    "photon_weight", "entropy_bits")
EVENT_COLUMNS = ("kind", "param_value", "gap_eV", "branch_lo", "branch_hi",
                 "photon_weight")

THREADS_ENV_VAR = "CHAINCAVITY_THREADS"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}")
        if n < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepAxis:
    """One grid dimension: either a uniform float range or explicit values."""

    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown sweep axis {self.name!r}; expected one of {AXIS_NAMES}")
        if len(self.values) < 1:
            raise ValueError(f"axis {self.name!r} needs at least one value")
        if self.name in ("L", "N"):
            bad = [v for v in self.values if not isinstance(v, int) or v < 1]
            if bad:
                raise ValueError(f"axis {self.name!r} takes positive integers, got {bad}")

    @classmethod
    def linear(cls, name: str, lo: float, hi: float, steps: int) -> "SweepAxis":
        if name not in SWEEPABLE_AXES:
            raise ValueError(f"axis {name!r} is not continuous; give explicit values")
        if steps < 2:
            raise ValueError(f"a linear axis needs >= 2 steps, got {steps}")
        return cls(name, tuple(float(v) for v in np.linspace(lo, hi, steps)))

    @classmethod
    def integers(cls, name: str, values) -> "SweepAxis":
        if name in SWEEPABLE_AXES:
            raise ValueError(f"axis {name!r} is continuous; use linear()")
        return cls(name, tuple(int(v) for v in values))

    @property
    def continuous(self) -> bool:
        return self.name in SWEEPABLE_AXES


class SweepTask(enum.Enum):
    SPECTRUM = "spectrum"
    STEADY = "steady"
    DETECT = "detect"


@dataclass(frozen=True)
class SweepPlan:
    base: LatticeSpec
    axes: tuple[SweepAxis, ...]
    task: SweepTask
    literal_eq13: bool = False
    # Hold the collective Rabi splitting fixed across L/N points instead of
    # the per-site coupling; None keeps base.g as given.
    pin_rabi: float | None = None
    energy_window: float = ENERGY_WINDOW
    photon_weight_min: float = PHOTON_WEIGHT_MIN
    eps_cross: float = EPS_CROSS
    refine_factor: int = REFINE_FACTOR

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError(f"a sweep takes 1 or 2 axes, got {len(self.axes)}")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate sweep axis in {names}")
        if self.task in (SweepTask.SPECTRUM, SweepTask.DETECT):
            if len(self.axes) != 1 or not self.axes[0].continuous:
                raise ValueError(
                    f"{self.task.value} sweeps take exactly one continuous axis "
                    f"(one of {SWEEPABLE_AXES}), got {names}")


@dataclass
class SweepResult:
    plan: SweepPlan
    steady_rows: list = field(default_factory=list)
    spectrum_rows: list = field(default_factory=list)
    event_rows: list = field(default_factory=list)
    wall_time_s: float = 0.0


def _point_spec(base: LatticeSpec, axes, values, pin_rabi) -> LatticeSpec:
    spec = base
    for ax, v in zip(axes, values):
        if ax.name == "zeta":
            spec = dc_replace(spec, zeta=float(v))
        elif ax.name == "delta":
            spec = dc_replace(spec, delta=float(v))
        elif ax.name == "Delta":
            spec = dc_replace(spec, Delta_a=float(v), Delta_c=float(v))
        elif ax.name == "L":
            spec = dc_replace(spec, L=int(v))
        elif ax.name == "N":
            spec = dc_replace(spec, N=int(v))
    if pin_rabi is not None:
        spec = dc_replace(spec, g=g_from_rabi(pin_rabi, spec.L, spec.N))
    return spec


def steady_row(spec: LatticeSpec, literal_eq13: bool = False) -> dict:
    """Solve one steady state and flatten it to the steady CSV schema."""
    row = {
        "config": spec.kind.value,
        "L": spec.L,
        "N": spec.N,
        "h": spec.h,
        "delta": spec.delta,
        "zeta": spec.zeta,
        "Delta": spec.Delta_a,
        "OmegaR": rabi_from_g(spec.g, spec.L, spec.N) if spec.cavity else 0.0,
        "kappa": spec.kappa,
        "gamma_d": spec.gamma_d,
        "gamma_R": spec.gamma_R,
        "drive": spec.drive.value,
        "xi_T": spec.xi_T,
        "xi_c": spec.xi_c,
    }
    try:
        liouv = build_liouvillian(spec, literal_eq13=literal_eq13)
        sol = steady_state(liouv)
        rep = steady_report(sol.rho, spec,
                            cavity_decay_factor=spec.L if literal_eq13 else 1.0)
        row.update(p_11=rep.p_11, p_bulk=rep.p_bulk, p_N=rep.p_N, p_c=rep.p_c,
                   I_i=rep.I_i, I_o=rep.I_o, eta=rep.eta,
                   flux_residual=rep.flux_residual,
                   status="eta_floored" if rep.eta_floored else "ok")
    except Exception as exc:  # a bad grid point must not kill the sweep
        row.update(p_11=math.nan, p_bulk=math.nan, p_N=math.nan, p_c=math.nan,
                   I_i=math.nan, I_o=math.nan, eta=math.nan,
                   flux_residual=math.nan, status=f"error: {exc}")
    return row


def run_sweep(plan: SweepPlan, threads: int | None = None) -> SweepResult:
    """Execute a plan; the result tables depend only on the plan."""
    t0 = time.perf_counter()
    if threads is None:
        threads = default_threads()
    result = SweepResult(plan=plan)

    if plan.task is SweepTask.STEADY:
        points = list(itertools.product(*(ax.values for ax in plan.axes)))
        specs = [_point_spec(plan.base, plan.axes, vals, plan.pin_rabi)
                 for vals in points]

        def work(spec):
            return steady_row(spec, literal_eq13=plan.literal_eq13)

        if threads > 1 and len(specs) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                rows = list(pool.map(work, specs))
        else:
            rows = [work(s) for s in specs]
        result.steady_rows = rows
    else:
        ax = plan.axes[0]
        base = plan.base if plan.pin_rabi is None else dc_replace(
            plan.base, g=g_from_rabi(plan.pin_rabi, plan.base.L, plan.base.N))
        tb, events = scan_and_detect(
            base, ax.name, ax.values,
            energy_window=plan.energy_window,
            photon_weight_min=plan.photon_weight_min,
            eps_cross=plan.eps_cross,
            refine_factor=plan.refine_factor,
            threads=threads,
        )
        for m, x in enumerate(tb.grid):
            for b in range(tb.n_branches):
                result.spectrum_rows.append({
                    "param_name": ax.name,
                    "param_value": float(x),
                    "branch": b,
                    "energy_eV": float(tb.energies[b, m]),
                    "photon_weight": float(tb.photon_weight[b, m]),
                    "entropy_bits": float(tb.entropy[b, m]),
                })
        if plan.task is SweepTask.DETECT:
            result.event_rows = [{
                "kind": ev.kind.value,
                "param_value": ev.param_value,
                "gap_eV": ev.gap,
                "branch_lo": ev.branch_lo,
                "branch_hi": ev.branch_hi,
                "photon_weight": ev.photon_weight,
            } for ev in events]

    result.wall_time_s = time.perf_counter() - t0
    return result


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{value:.17g}"
    return str(value)


def _write_csv(path, columns, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in columns) + "\n")


def write_steady_csv(path, rows) -> None:
    _write_csv(path, STEADY_COLUMNS, rows)


def write_spectrum_csv(path, rows) -> None:
    _write_csv(path, SPECTRUM_COLUMNS, rows)


def write_events_csv(path, rows) -> None:
    _write_csv(path, EVENT_COLUMNS, rows)


def spec_to_dict(spec: LatticeSpec) -> dict:
    d = {}
    for name in ("kind", "L", "N", "h", "delta", "zeta", "Delta_a", "Delta_c",
                 "g", "kappa", "gamma_d", "gamma_R", "nbar_R", "drive",
                 "xi_T", "xi_c", "cavity"):
        v = getattr(spec, name)
        d[name] = v.value if isinstance(v, (ConfigurationKind, DriveKind)) else v
    return d


def write_manifest(path, plan: SweepPlan, result: SweepResult) -> None:
    manifest = {
        "version": __version__,
        "task": plan.task.value,
        "base": spec_to_dict(plan.base),
        "axes": [{"name": ax.name, "values": list(ax.values)} for ax in plan.axes],
        "literal_eq13": plan.literal_eq13,
        "pin_rabi": plan.pin_rabi,
        "detection": {
            "energy_window": plan.energy_window,
            "photon_weight_min": plan.photon_weight_min,
            "eps_cross": plan.eps_cross,
            "refine_factor": plan.refine_factor,
        },
        "rows": {
            "steady": len(result.steady_rows),
            "spectrum": len(result.spectrum_rows),
            "events": len(result.event_rows),
        },
        "wall_time_s": result.wall_time_s,
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
