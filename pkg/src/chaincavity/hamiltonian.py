"""Hamiltonian assembly in the zero- plus single-excitation basis.

Everything is written in the frame rotating at the drive frequency, so only
the exciton and cavity detunings Delta_a and Delta_c survive on the
diagonal (with a minus sign).  In the truncated basis the raising operator
of site (k,i) is |k,i><0| and the photon creation operator is |c><0|, which
makes every term of the model a dense (L*N + 2) x (L*N + 2) matrix element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import BondList, DriveKind, LatticeSpec, build_bonds

__all__ = [
    "HamiltonianMatrix",
    "g_from_rabi",
    "rabi_from_g",
    "build_h0",
    "build_h_total",
]


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Hermitian matrix plus the bookkeeping the solvers need."""

    matrix: np.ndarray
    includes_drive: bool
    cavity_index: int | None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def g_from_rabi(omega_R: float, L: int, N: int) -> float:
    """Per-site coupling from the collective Rabi splitting Omega_R = 2*g*sqrt(L*N)."""
    if L < 1 or N < 1:
        raise ValueError(f"need L, N >= 1, got L={L}, N={N}")
    if omega_R < 0:
        raise ValueError(f"Omega_R must be >= 0, got {omega_R}")
    return omega_R / (2.0 * math.sqrt(L * N))


def rabi_from_g(g: float, L: int, N: int) -> float:
    return 2.0 * g * math.sqrt(L * N)


def build_h0(spec: LatticeSpec, bonds: BondList | None = None) -> HamiltonianMatrix:
    """Drive-free Hamiltonian: detunings, hopping network, cavity coupling."""
    if bonds is None:
        bonds = build_bonds(spec)
    D = spec.dim
    H = np.zeros((D, D), dtype=complex)

    for s in range(1, spec.n_sites + 1):
        H[s, s] = -spec.Delta_a
    for a, b, amp in bonds:
        H[a, b] += amp
        H[b, a] += amp

    c = spec.cavity_index
    if c is not None:
        H[c, c] = -spec.Delta_c
        for s in range(1, spec.n_sites + 1):
            H[s, c] += spec.g
            H[c, s] += spec.g

    return HamiltonianMatrix(H, includes_drive=False, cavity_index=c)


def build_h_total(spec: LatticeSpec, bonds: BondList | None = None) -> HamiltonianMatrix:
    """Hamiltonian including the coherent drive out of the vacuum.

    The laser pumps site (1,1) with amplitude xi_T; in the tls_cavity drive
    scheme it also pumps the photon state with amplitude xi_c.
    """
    h0 = build_h0(spec, bonds)
    H = h0.matrix.copy()
    s11 = spec.site(1, 1)
    H[0, s11] += spec.xi_T
    H[s11, 0] += spec.xi_T
    if spec.drive is DriveKind.TLS_CAVITY and h0.cavity_index is not None:
        H[0, h0.cavity_index] += spec.xi_c
        H[h0.cavity_index, 0] += spec.xi_c
    return HamiltonianMatrix(H, includes_drive=True, cavity_index=h0.cavity_index)
