"""Open-system dynamics: Liouvillian, steady state, time propagation.

The master equation is rho' = i[rho, H] + sum_j r_j * D[x_j] rho with
D[x] rho = x rho x^dag - (x^dag x rho + rho x^dag x)/2.  Jump operators:
radiative decay |0><k,i| on every site (rate gamma_d), cavity leakage
|0><c| (rate kappa, counted once for the shared mode), and the drain
attached to the last site of each chain, |0><k,N| at gamma_R*(nbar_R+1)
plus the reverse |k,N><0| at gamma_R*nbar_R.

The superoperator acts on column-stacked density matrices, vec(rho) =
rho.flatten(order="F"), so vec(A rho B) = kron(B.T, A) vec(rho) and the
trace functional is the row vector picking out vec indices j*D + j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import build_h_total
from .lattice import LatticeSpec

__all__ = [
    "LiouvillianOperator",
    "SteadyResult",
    "PropagationResult",
    "SteadyStateError",
    "build_liouvillian",
    "steady_state",
    "propagate",
    "max_stable_dt",
    "vec",
    "unvec",
]


class SteadyStateError(RuntimeError):
    pass


@dataclass(frozen=True)
class LiouvillianOperator:
    matrix: np.ndarray          # (D*D, D*D) complex
    dim: int
    spec: LatticeSpec
    h_scale: float              # largest |eigenvalue| of H including drive
    rate_scale: float
    literal_eq13: bool = False


def vec(rho: np.ndarray) -> np.ndarray:
    return rho.flatten(order="F")


def unvec(v: np.ndarray, D: int) -> np.ndarray:
    return v.reshape((D, D), order="F")


def _add_projector_dissipator(L: np.ndarray, D: int, a: int, b: int, rate: float) -> None:
    """Accumulate rate * D[|a><b|] directly; every jump here is rank one.

    For x = |a><b|: x rho x^dag feeds rho_bb into rho_aa', and the
    anticommutator drains every matrix element sharing the index b.
    """
    if rate == 0.0:
        return
    j = np.arange(D)
    L[a * D + a, b * D + b] += rate
    L[j * D + b, j * D + b] -= 0.5 * rate
    L[b * D + j, b * D + j] -= 0.5 * rate


def build_liouvillian(spec: LatticeSpec, literal_eq13: bool = False) -> LiouvillianOperator:
    """Assemble the dense generator for the driven, damped array.

    literal_eq13=True multiplies the cavity leakage by L, the reading in
    which the shared mode's decay is repeated inside the per-chain sum;
    the default counts the single mode once.
    """
    H = build_h_total(spec).matrix
    D = H.shape[0]
    eye = np.eye(D)
    L = 1j * (np.kron(H.T, eye) - np.kron(eye, H))

    for s in range(1, spec.n_sites + 1):
        _add_projector_dissipator(L, D, 0, s, spec.gamma_d)

    kappa_eff = spec.kappa * (spec.L if literal_eq13 else 1)
    if spec.cavity:
        _add_projector_dissipator(L, D, 0, spec.cavity_index, kappa_eff)

    for k in range(1, spec.L + 1):
        drain = spec.site(k, spec.N)
        _add_projector_dissipator(L, D, 0, drain, spec.gamma_R * (spec.nbar_R + 1.0))
        _add_projector_dissipator(L, D, drain, 0, spec.gamma_R * spec.nbar_R)

    h_scale = float(np.max(np.abs(np.linalg.eigvalsh(H))))
    rate_scale = max(spec.gamma_d, kappa_eff if spec.cavity else 0.0,
                     spec.gamma_R * (spec.nbar_R + 1.0))
    return LiouvillianOperator(L, D, spec, h_scale, rate_scale, literal_eq13)


@dataclass(frozen=True)
class SteadyResult:
    rho: np.ndarray
    residual: float             # max |L vec(rho)| of the unconstrained generator


def steady_state(liouv: LiouvillianOperator, residual_tol: float = 1e-6) -> SteadyResult:
    """Solve L vec(rho) = 0 with tr(rho) = 1 by dense LU.

    The trace condition replaces the rho_00 row, which is linearly
    dependent on the other diagonal rows because the generator is
    trace-preserving.  If the solve fails or leaves a residual above
    `residual_tol` the kernel of L is inspected and the failure is
    reported with its dimension.
    """
    D = liouv.dim
    Lmat = liouv.matrix
    diag = np.arange(D) * D + np.arange(D)

    A = Lmat.copy()
    A[0, :] = 0.0
    A[0, diag] = 1.0
    b = np.zeros(D * D, dtype=complex)
    b[0] = 1.0

    x = None
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        pass
    residual = float(np.max(np.abs(Lmat @ x))) if x is not None else np.inf

    if x is None or residual > residual_tol:
        s = np.linalg.svd(Lmat, compute_uv=False)
        null_dim = int(np.sum(s < max(s[0], 1.0) * 1e-10))
        raise SteadyStateError(
            f"steady state is not unique or not reachable: generator kernel "
            f"dimension {null_dim}, solve residual {residual:.3e}")

    rho = unvec(x, D)
    rho = 0.5 * (rho + rho.conj().T)
    return SteadyResult(rho=rho, residual=residual)


@dataclass(frozen=True)
class PropagationResult:
    rho: np.ndarray
    trace_drift: float
    n_steps: int


def max_stable_dt(liouv: LiouvillianOperator) -> float:
    """Largest step accepted by propagate for this generator."""
    return 0.1 / max(liouv.h_scale, liouv.rate_scale, 1e-300)


def propagate(liouv: LiouvillianOperator, rho0: np.ndarray, t_final: float,
              dt: float) -> PropagationResult:
    """Fixed-step fourth-order Runge-Kutta integration of vec(rho).

    dt must not exceed 0.1 over the larger of the Hamiltonian spectral
    scale and the decay rates; the final step is shortened to land on
    t_final exactly.  The reported trace drift is the largest |tr rho - 1|
    seen along the path.
    """
    if t_final < 0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    limit = max_stable_dt(liouv)
    if dt > limit * (1 + 1e-12):
        raise ValueError(f"dt = {dt} exceeds stability bound {limit:.6g}")

    D = liouv.dim
    if rho0.shape != (D, D):
        raise ValueError(f"rho0 must be {D}x{D}, got {rho0.shape}")
    Lmat = liouv.matrix
    diag = np.arange(D) * D + np.arange(D)

    v = vec(rho0).astype(complex)
    n_full, rem = divmod(t_final, dt)
    steps = [dt] * int(n_full) + ([rem] if rem > 1e-15 * max(t_final, 1.0) else [])
    drift = abs(float(np.sum(v[diag]).real) - 1.0)

    for h in steps:
        k1 = Lmat @ v
        k2 = Lmat @ (v + 0.5 * h * k1)
        k3 = Lmat @ (v + 0.5 * h * k2)
        k4 = Lmat @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = max(drift, abs(float(np.sum(v[diag]).real) - 1.0))

    return PropagationResult(rho=unvec(v, D), trace_drift=drift, n_steps=len(steps))
