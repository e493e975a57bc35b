"""Geometry and parameter set for multichain two-level arrays in a cavity.

A sample is L parallel chains of N two-level sites.  Within the zero- plus
single-excitation subspace the basis is the shared vacuum |0>, one state
|k,i> per site (chain k = 1..L, site i = 1..N) and, when the cavity mode is
kept, a single photon state |c>.  Flat indices: |0> -> 0, |k,i> ->
(k-1)*N + i, |c> -> L*N + 1.

Chains are dimerized in the bond-alternating sense: the bond between sites
i and i+1 of chain k carries amplitude -h*(1 + (-1)**i * delta_k).  A chain
with delta_k = 0 is homogeneous (HO); delta_k = delta gives the alternating
(HE) chain.  Neighbouring chains are tied together either site-by-site
(square tiling, ST) or in the staggered triangular tiling (TT), both with
amplitude zeta.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "ConfigurationKind",
    "DriveKind",
    "LatticeSpec",
    "SiteIndex",
    "Bond",
    "BondList",
    "index_of",
    "site_of",
    "chain_delta",
    "build_bonds",
]


class ConfigurationKind(enum.Enum):
    """Chain composition (HO / HE / alternating rows) x tiling (ST / TT)."""

    HO_ST = "ho_st"
    HO_TT = "ho_tt"
    HE_ST = "he_st"
    HE_TT = "he_tt"
    HOHE_ST = "hohe_st"
    HOHE_TT = "hohe_tt"

    @property
    def triangular(self) -> bool:
        return self in (ConfigurationKind.HO_TT, ConfigurationKind.HE_TT,
                        ConfigurationKind.HOHE_TT)


class DriveKind(enum.Enum):
    TLS = "tls"
    TLS_CAVITY = "tls_cavity"


class SiteIndex(NamedTuple):
    k: int
    i: int


class Bond(NamedTuple):
    """Undirected hopping term H[a,b] = H[b,a] = amplitude (flat indices)."""

    a: int
    b: int
    amplitude: float


def index_of(k: int, i: int, N: int) -> int:
    """Flat basis index of site i on chain k (both 1-based)."""
    if N < 1:
        raise IndexError(f"N must be >= 1, got {N}")
    if k < 1:
        raise IndexError(f"chain index k must be >= 1, got {k}")
    if not 1 <= i <= N:
        raise IndexError(f"site index i must be in 1..{N}, got {i}")
    return (k - 1) * N + i


def site_of(index: int, N: int) -> SiteIndex:
    """Inverse of index_of for a flat site index (1 <= index <= L*N)."""
    if index < 1:
        raise IndexError(f"flat site index must be >= 1, got {index}")
    k, r = divmod(index - 1, N)
    return SiteIndex(k + 1, r + 1)


@dataclass(frozen=True)
class LatticeSpec:
    """Full parameter set of one sample.  Energies in eV, hbar = 1.

    delta is the dimerization strength used by the HE chains; which chains
    actually receive it is fixed by `kind`.  `g` is the per-site cavity
    coupling (see hamiltonian.g_from_rabi for the collective Rabi relation).
    With cavity=False the photon state is dropped from the basis entirely
    and g, kappa and xi_c are inert.
    """

    kind: ConfigurationKind
    L: int
    N: int
    h: float = 1.0
    delta: float = 0.5
    zeta: float = 0.1
    Delta_a: float = 0.0
    Delta_c: float = 0.0
    g: float = 0.125
    kappa: float = 0.01
    gamma_d: float = 0.01
    gamma_R: float = 0.1
    nbar_R: float = 0.0
    drive: DriveKind = DriveKind.TLS
    xi_T: float = 0.1
    xi_c: float = 0.1
    cavity: bool = True

    def __post_init__(self):
        if not isinstance(self.L, int) or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if abs(self.delta) > 1.0:
            raise ValueError(f"|delta| must not exceed 1, got {self.delta}")
        for name in ("kappa", "gamma_d", "gamma_R", "nbar_R"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def n_sites(self) -> int:
        return self.L * self.N

    @property
    def dim(self) -> int:
        """Hilbert-space dimension of the truncated model."""
        return self.L * self.N + (2 if self.cavity else 1)

    @property
    def cavity_index(self) -> int | None:
        return self.L * self.N + 1 if self.cavity else None

    def site(self, k: int, i: int) -> int:
        if k > self.L:
            raise IndexError(f"chain index k must be in 1..{self.L}, got {k}")
        return index_of(k, i, self.N)


def chain_delta(kind: ConfigurationKind, delta: float, k: int) -> float:
    """Dimerization of chain k: HO rows get 0, HE rows get delta.

    For the mixed configurations the odd-numbered chains are HO and the
    even-numbered ones HE.
    """
    if kind in (ConfigurationKind.HO_ST, ConfigurationKind.HO_TT):
        return 0.0
    if kind in (ConfigurationKind.HE_ST, ConfigurationKind.HE_TT):
        return delta
    return 0.0 if k % 2 == 1 else delta


@dataclass(frozen=True)
class BondList:
    """Deterministically ordered hopping terms of one sample."""

    bonds: tuple[Bond, ...]

    def __iter__(self):
        return iter(self.bonds)

    def __len__(self):
        return len(self.bonds)


def build_bonds(spec: LatticeSpec) -> BondList:
    """Enumerate every hopping term once, in a fixed deterministic order.

    Intra-chain bonds come first (chain by chain, left to right), then the
    inter-chain bonds.  Square tiling ties site i of chain k to site i of
    chain k+1.  The triangular tiling alternates orientation: between an
    odd chain 2k-1 and the even chain 2k below it, site i couples to sites
    i and i+1, with one straight bond at the right edge; between an even
    chain 2k and the odd chain 2k+1, site i couples to sites i-1 and i,
    with one straight bond at the left edge.  Each edge bond appears
    exactly once.
    """
    L, N = spec.L, spec.N
    bonds: list[Bond] = []

    for k in range(1, L + 1):
        dk = chain_delta(spec.kind, spec.delta, k)
        for i in range(1, N):
            amp = -spec.h * (1.0 + (-1.0) ** i * dk)
            bonds.append(Bond(spec.site(k, i), spec.site(k, i + 1), amp))

    z = spec.zeta
    if not spec.kind.triangular:
        for k in range(1, L):
            for i in range(1, N + 1):
                bonds.append(Bond(spec.site(k, i), spec.site(k + 1, i), z))
    else:
        P = L // 2
        Q = (L - 1) // 2
        for k in range(1, P + 1):
            up, dn = 2 * k - 1, 2 * k
            for i in range(1, N):
                bonds.append(Bond(spec.site(up, i), spec.site(dn, i), z))
                bonds.append(Bond(spec.site(up, i), spec.site(dn, i + 1), z))
            bonds.append(Bond(spec.site(up, N), spec.site(dn, N), z))
        for k in range(1, Q + 1):
            up, dn = 2 * k, 2 * k + 1
            bonds.append(Bond(spec.site(up, 1), spec.site(dn, 1), z))
            for i in range(2, N + 1):
                bonds.append(Bond(spec.site(up, i), spec.site(dn, i - 1), z))
                bonds.append(Bond(spec.site(up, i), spec.site(dn, i), z))

    return BondList(tuple(bonds))
