"""Single-excitation spectra, band continuity and (anti)crossing detection.

The drive-free Hamiltonian block spanned by the site and photon states is
diagonalized on a parameter grid.  Per eigenstate we keep the photon weight
|<c|psi>|^2 and the bipartite entanglement entropy between the photon mode
and the exciton register, which for a single shared excitation reduces to
the binary entropy of the photon weight.

Level (anti)crossings are located as local minima of the gap between
energy-adjacent levels.  A parabola through the squared gap separates true
degeneracies (vertex at zero gap) from avoided ones; candidates are then
re-resolved on a locally refined grid before classification.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace as dc_replace
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .hamiltonian import HamiltonianMatrix, build_h0
from .lattice import LatticeSpec

__all__ = [
    "EventKind",
    "EigenSolution",
    "TrackedBands",
    "CrossingEvent",
    "diagonalize",
    "entropy_of_state",
    "binary_entropy",
    "track_bands",
    "hopfield_second_derivative",
    "detect_events",
    "scan_spectrum",
    "scan_and_detect",
    "SWEEPABLE_AXES",
]

# Detection defaults: energy window around the (rotating-frame) zero where
# transport-relevant levels live, minimum photon dressing for an event to
# count, and the gap below which a refined minimum is called a crossing.
ENERGY_WINDOW = 0.3
PHOTON_WEIGHT_MIN = 0.05
EPS_CROSS = 1e-4
REFINE_FACTOR = 10
# Exactly degenerate bands stay gapped at the eigensolver noise floor and
# would otherwise spray spurious one-ulp "minima" along the whole sweep.
GAP_JITTER = 1e-9

SWEEPABLE_AXES = ("zeta", "delta", "Delta")


class EventKind(enum.Enum):
    CROSSING = "crossing"
    ANTICROSSING = "anticrossing"


@dataclass(frozen=True)
class EigenSolution:
    """Eigensystem of the single-excitation block at one parameter value."""

    param_value: float
    energies: np.ndarray        # ascending, shape (M,)
    states: np.ndarray          # columns are eigenvectors, shape (M, M)
    photon_weight: np.ndarray   # |<c|psi>|^2 per state, zeros without cavity
    entropy: np.ndarray         # binary entropy of the photon weight, bits


@dataclass
class TrackedBands:
    """Band energies/weights on a grid with a fixed branch bookkeeping.

    method "overlap" connects consecutive grid points by maximum
    eigenvector overlap (branches keep their character through degeneracy
    points); method "sorted" keeps plain ascending-energy order at every
    point, which is the bookkeeping under which crossings show up as jumps
    in the per-branch photon weight.
    """

    param_name: str
    grid: np.ndarray            # shape (M,)
    energies: np.ndarray        # shape (B, M)
    photon_weight: np.ndarray   # shape (B, M)
    entropy: np.ndarray         # shape (B, M)
    method: str = "overlap"
    warnings: list = field(default_factory=list)

    @property
    def n_branches(self) -> int:
        return self.energies.shape[0]


@dataclass(frozen=True)
class CrossingEvent:
    kind: EventKind
    param_value: float
    gap: float
    branch_lo: int
    branch_hi: int
    photon_weight: float


def binary_entropy(w: float) -> float:
    """Entropy in bits of the distribution (w, 1-w); 0*log0 = 0."""
    w = min(max(float(w), 0.0), 1.0)
    s = 0.0
    if 0.0 < w < 1.0:
        s = -(w * math.log2(w) + (1.0 - w) * math.log2(1.0 - w))
    return s


def entropy_of_state(state: np.ndarray, has_cavity: bool = True) -> float:
    """Photon/exciton entanglement entropy of a single-excitation state.

    The state vector spans the single-excitation basis with the photon
    amplitude as its last component.  Tracing out either subsystem leaves
    the spectrum {w, 1-w} with w the photon weight, so the entropy is the
    binary entropy of w.
    """
    nrm = float(np.vdot(state, state).real)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"state must be normalized, got |psi|^2 = {nrm}")
    if not has_cavity:
        return 0.0
    return binary_entropy(abs(state[-1]) ** 2)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    idx = np.argmax(np.abs(vecs), axis=0)
    piv = vecs[idx, np.arange(vecs.shape[1])]
    mag = np.abs(piv)
    phase = np.where(mag > 0, piv / np.where(mag > 0, mag, 1.0), 1.0)
    return vecs / phase


def diagonalize(h0: HamiltonianMatrix, param_value: float = math.nan) -> EigenSolution:
    """Eigensystem of the single-excitation block of a drive-free Hamiltonian."""
    if h0.includes_drive:
        raise ValueError("spectra are defined for the drive-free Hamiltonian")
    block = h0.matrix[1:, 1:]
    energies, vecs = np.linalg.eigh(block)
    vecs = _fix_phases(vecs)
    if h0.cavity_index is not None:
        weight = np.abs(vecs[-1, :]) ** 2
    else:
        weight = np.zeros_like(energies)
    entropy = np.array([binary_entropy(w) for w in weight])
    return EigenSolution(param_value, energies, vecs, weight, entropy)


def _apply_axis(spec: LatticeSpec, axis: str, value: float) -> LatticeSpec:
    if axis == "zeta":
        return dc_replace(spec, zeta=float(value))
    if axis == "delta":
        return dc_replace(spec, delta=float(value))
    if axis == "Delta":
        return dc_replace(spec, Delta_a=float(value), Delta_c=float(value))
    raise ValueError(f"unknown spectral axis {axis!r}; expected one of {SWEEPABLE_AXES}")


def scan_spectrum(spec: LatticeSpec, axis: str, values: Sequence[float],
                  threads: int | None = None) -> list[EigenSolution]:
    """Diagonalize along one parameter axis; grid points are independent."""
    values = np.asarray(values, dtype=float)

    def solve(v: float) -> EigenSolution:
        return diagonalize(build_h0(_apply_axis(spec, axis, v)), param_value=float(v))

    if threads is not None and threads > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(solve, values))
    return [solve(v) for v in values]


ASSIGNMENT_QUALITY_FLOOR = 0.5


def track_bands(solutions: Sequence[EigenSolution], method: str = "overlap") -> TrackedBands:
    """Connect grid-point eigensystems into bands.

    With method "overlap" the branch at grid point m+1 is the eigenvector
    with the largest |<psi_m|psi_{m+1}>|^2, resolved globally by optimal
    assignment so that degenerate clusters are matched as a block.  Steps
    whose worst matched overlap falls below 0.5 are recorded in
    `warnings` as (step index, score): the grid is too coarse there for
    the identification to be trustworthy.
    """
    if len(solutions) < 2:
        raise ValueError("band tracking needs at least two grid points")
    dims = {sol.energies.shape[0] for sol in solutions}
    if len(dims) != 1:
        raise ValueError("all grid points must share one Hilbert-space dimension")
    if method not in ("overlap", "sorted"):
        raise ValueError(f"unknown tracking method {method!r}")

    B = solutions[0].energies.shape[0]
    M = len(solutions)
    grid = np.array([sol.param_value for sol in solutions])
    energies = np.empty((B, M))
    weight = np.empty((B, M))
    entropy = np.empty((B, M))
    warnings: list = []

    perm = np.arange(B)
    for m, sol in enumerate(solutions):
        if method == "overlap" and m > 0:
            prev = solutions[m - 1]
            ov = np.abs(prev.states.conj().T @ sol.states) ** 2
            row, col = linear_sum_assignment(1.0 - ov)
            step = np.empty(B, dtype=int)
            step[row] = col
            score = float(ov[row, col].min())
            if score < ASSIGNMENT_QUALITY_FLOOR:
                warnings.append((m, score))
            perm = step[perm]
        energies[:, m] = sol.energies[perm]
        weight[:, m] = sol.photon_weight[perm]
        entropy[:, m] = sol.entropy[perm]

    return TrackedBands("", grid, energies, weight, entropy, method=method,
                        warnings=warnings)


def hopfield_second_derivative(tb: TrackedBands) -> tuple[np.ndarray, np.ndarray]:
    """Central second difference of the photon weight along each branch.

    Returns (interior grid, d2) with d2 of shape (branches, points-2).
    Requires a uniform grid.
    """
    grid = tb.grid
    if grid.size < 3:
        raise ValueError("second derivative needs at least three grid points")
    steps = np.diff(grid)
    dx = steps[0]
    if not np.allclose(steps, dx, rtol=0, atol=1e-8 * max(abs(dx), 1e-300)):
        raise ValueError("second derivative requires a uniform grid")
    w = tb.photon_weight
    d2 = (w[:, :-2] - 2.0 * w[:, 1:-1] + w[:, 2:]) / dx**2
    return grid[1:-1], d2


def _parabola_min(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Vertex of the parabola through three points; falls back to the middle."""
    denom = y[0] - 2.0 * y[1] + y[2]
    if denom <= 0:
        return float(x[1]), float(y[1])
    t = 0.5 * (y[0] - y[2]) / denom
    t = min(max(t, -1.0), 1.0)
    xv = x[1] + t * (x[2] - x[1] if t > 0 else x[1] - x[0])
    yv = y[1] - 0.25 * (y[0] - y[2]) * t
    return float(xv), float(max(yv, 0.0))


def detect_events(tb: TrackedBands,
                  energy_window: float = ENERGY_WINDOW,
                  photon_weight_min: float = PHOTON_WEIGHT_MIN,
                  eps_cross: float = EPS_CROSS) -> list[CrossingEvent]:
    """Locate gap minima between energy-adjacent levels on the grid.

    Candidates must lie within `energy_window` of zero energy and at least
    one of the two levels must carry photon weight >= `photon_weight_min`.
    The event location and minimal gap come from a parabola through the
    squared gap around the discrete minimum; a vertex gap below
    `eps_cross` is classified as a crossing, anything larger as an
    anticrossing.  An empty list is a valid outcome.
    """
    B, M = tb.energies.shape
    if B < 2 or M < 3:
        return []

    order = np.argsort(tb.energies, axis=0, kind="stable")
    e_sorted = np.take_along_axis(tb.energies, order, axis=0)
    w_sorted = np.take_along_axis(tb.photon_weight, order, axis=0)

    events: list[CrossingEvent] = []
    for r in range(B - 1):
        gap = e_sorted[r + 1, :] - e_sorted[r, :]
        for m in range(1, M - 1):
            if not (gap[m] < gap[m - 1] - GAP_JITTER and gap[m] < gap[m + 1] - GAP_JITTER):
                continue
            if abs(e_sorted[r, m]) > energy_window or abs(e_sorted[r + 1, m]) > energy_window:
                continue
            pw = float(max(w_sorted[r, m], w_sorted[r + 1, m]))
            if pw < photon_weight_min:
                continue
            xv, g2 = _parabola_min(tb.grid[m - 1:m + 2], gap[m - 1:m + 2] ** 2)
            gmin = math.sqrt(g2)
            kind = EventKind.CROSSING if gmin < eps_cross else EventKind.ANTICROSSING
            events.append(CrossingEvent(
                kind=kind,
                param_value=xv,
                gap=gmin,
                branch_lo=int(order[r, m]),
                branch_hi=int(order[r + 1, m]),
                photon_weight=pw,
            ))

    events.sort(key=lambda ev: (ev.param_value, ev.gap))
    return events


def _refine_event(spec: LatticeSpec, axis: str, ev: CrossingEvent, dx: float,
                  lo: float, hi: float,
                  energy_window: float, photon_weight_min: float,
                  eps_cross: float, refine_factor: int) -> CrossingEvent:
    a = max(lo, ev.param_value - 2.0 * dx)
    b = min(hi, ev.param_value + 2.0 * dx)
    n = max(int(round((b - a) / dx * refine_factor)) + 1, 5)
    local = scan_spectrum(spec, axis, np.linspace(a, b, n))
    ltb = track_bands(local, method="sorted")
    found = detect_events(ltb, energy_window, photon_weight_min, eps_cross)
    if not found:
        return ev
    best = min(found, key=lambda e: abs(e.param_value - ev.param_value))
    # Keep the coarse-grid branch labels: the local window has its own ids.
    return CrossingEvent(best.kind, best.param_value, best.gap,
                         ev.branch_lo, ev.branch_hi, best.photon_weight)


def scan_and_detect(spec: LatticeSpec, axis: str, values: Sequence[float],
                    energy_window: float = ENERGY_WINDOW,
                    photon_weight_min: float = PHOTON_WEIGHT_MIN,
                    eps_cross: float = EPS_CROSS,
                    refine_factor: int = REFINE_FACTOR,
                    threads: int | None = None,
                    method: str = "sorted") -> tuple[TrackedBands, list[CrossingEvent]]:
    """Scan one axis, then detect and locally refine (anti)crossing events.

    Each coarse candidate is re-resolved on a grid `refine_factor` times
    denser covering two coarse steps on either side, which is what decides
    between a crossing and a narrowly avoided one.  Events that refine to
    the same location and branch pair are merged (smallest gap wins).
    """
    values = np.asarray(values, dtype=float)
    solutions = scan_spectrum(spec, axis, values, threads=threads)
    tb = track_bands(solutions, method=method)
    tb.param_name = axis
    coarse = detect_events(tb, energy_window, photon_weight_min, eps_cross)
    if not coarse:
        return tb, []

    dx = float(np.median(np.diff(values)))
    lo, hi = float(values[0]), float(values[-1])
    refined = [
        _refine_event(spec, axis, ev, dx, lo, hi, energy_window,
                      photon_weight_min, eps_cross, refine_factor)
        for ev in coarse
    ]

    merged: list[CrossingEvent] = []
    for ev in sorted(refined, key=lambda e: (e.param_value, e.gap)):
        dup = next(
            (m for m in merged
             if {m.branch_lo, m.branch_hi} == {ev.branch_lo, ev.branch_hi}
             and abs(m.param_value - ev.param_value) < 0.5 * dx),
            None,
        )
        if dup is None:
            merged.append(ev)
        elif ev.gap < dup.gap:
            merged[merged.index(dup)] = ev
    merged.sort(key=lambda ev: ev.param_value)
    return tb, merged
