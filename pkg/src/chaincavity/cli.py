"""Command-line front end: JSON run configs in, CSV/JSON artifacts out.

Three subcommands: `spectrum` scans one continuous axis and writes the
band table plus detected (anti)crossings, `steady` solves the driven
steady state over the requested grid (or the single configured point),
and `verify` runs the internal consistency checks on a configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace as dc_replace

import numpy as np

from .dynamics import build_liouvillian, max_stable_dt, propagate, steady_state
from .hamiltonian import g_from_rabi
from .lattice import ConfigurationKind, DriveKind, LatticeSpec
from .observables import steady_report
from .spectrum import SWEEPABLE_AXES, binary_entropy
from .sweep import (SweepAxis, SweepPlan, SweepResult, SweepTask,
                    default_threads, run_sweep, steady_row, write_events_csv,
                    write_manifest, write_spectrum_csv, write_steady_csv)

__all__ = ["RunConfig", "ConfigError", "load_config", "main"]


class ConfigError(ValueError):
    pass


CONFIG_KEYS = {
    "configuration", "L", "N", "h_eV", "delta", "zeta_eV", "Delta_eV",
    "OmegaR_eV", "g_eV", "kappa_eV", "gamma_d_eV", "gamma_R_eV", "nbar_R",
    "drive", "xi_T_eV", "xi_c_eV", "sweep", "cavity",
}

DEFAULTS = {
    "L": 2, "N": 8, "h_eV": 1.0, "delta": 0.5, "zeta_eV": 0.1,
    "Delta_eV": 0.0, "kappa_eV": 0.01, "gamma_d_eV": 0.01,
    "gamma_R_eV": 0.1, "nbar_R": 0.0, "drive": "tls", "xi_T_eV": 0.1,
    "xi_c_eV": 0.1, "cavity": True,
}
DEFAULT_OMEGA_R = 1.0

AXIS_KEY_MAP = {"zeta": "zeta", "delta": "delta", "Delta": "Delta",
                "L": "L", "N": "N"}


class RunConfig:
    """Validated run configuration: a LatticeSpec plus sweep instructions."""

    def __init__(self, spec: LatticeSpec, axes: tuple[SweepAxis, ...],
                 pin_rabi: float | None):
        self.spec = spec
        self.axes = axes
        self.pin_rabi = pin_rabi


def _number(raw: dict, key: str, default):
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number, got {v!r}")
    return float(v)


def _integer(raw: dict, key: str, default):
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"config key {key!r} must be an integer, got {v!r}")
    return v


def _parse_axis(obj) -> SweepAxis:
    if not isinstance(obj, dict):
        raise ConfigError(f"each sweep axis must be an object, got {obj!r}")
    if "param" not in obj:
        raise ConfigError("sweep axis is missing the 'param' key")
    name = obj["param"]
    if name not in AXIS_KEY_MAP:
        raise ConfigError(f"unknown sweep axis param {name!r}")
    extra = set(obj) - {"param", "min", "max", "steps", "values"}
    if extra:
        raise ConfigError(f"unknown sweep axis key {sorted(extra)[0]!r}")
    if "values" in obj:
        if any(k in obj for k in ("min", "max", "steps")):
            raise ConfigError(
                f"sweep axis {name!r}: give either 'values' or 'min'/'max'/'steps'")
        try:
            if name in ("L", "N"):
                return SweepAxis.integers(name, obj["values"])
            return SweepAxis(name, tuple(float(v) for v in obj["values"]))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"sweep axis {name!r}: {exc}")
    for k in ("min", "max", "steps"):
        if k not in obj:
            raise ConfigError(f"sweep axis {name!r} is missing {k!r}")
    try:
        return SweepAxis.linear(name, float(obj["min"]), float(obj["max"]),
                                int(obj["steps"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sweep axis {name!r}: {exc}")


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("run config must be a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key {sorted(unknown)[0]!r}")
    if "configuration" not in raw:
        raise ConfigError("config key 'configuration' is required")
    try:
        kind = ConfigurationKind(str(raw["configuration"]).lower())
    except ValueError:
        valid = ", ".join(k.value for k in ConfigurationKind)
        raise ConfigError(
            f"config key 'configuration' must be one of {valid}, "
            f"got {raw['configuration']!r}")
    try:
        drive = DriveKind(str(raw.get("drive", DEFAULTS["drive"])).lower())
    except ValueError:
        raise ConfigError(f"config key 'drive' must be 'tls' or 'tls_cavity', "
                          f"got {raw['drive']!r}")

    L = _integer(raw, "L", DEFAULTS["L"])
    N = _integer(raw, "N", DEFAULTS["N"])
    cavity = raw.get("cavity", DEFAULTS["cavity"])
    if not isinstance(cavity, bool):
        raise ConfigError(f"config key 'cavity' must be a boolean, got {cavity!r}")

    if "OmegaR_eV" in raw and "g_eV" in raw:
        raise ConfigError("config keys 'OmegaR_eV' and 'g_eV' are mutually exclusive")
    pin_rabi: float | None = None
    if not cavity:
        g = 0.0
    elif "g_eV" in raw:
        g = _number(raw, "g_eV", None)
    else:
        pin_rabi = _number(raw, "OmegaR_eV", DEFAULT_OMEGA_R)
        g = g_from_rabi(pin_rabi, L, N)

    Delta = _number(raw, "Delta_eV", DEFAULTS["Delta_eV"])
    try:
        spec = LatticeSpec(
            kind=kind, L=L, N=N,
            h=_number(raw, "h_eV", DEFAULTS["h_eV"]),
            delta=_number(raw, "delta", DEFAULTS["delta"]),
            zeta=_number(raw, "zeta_eV", DEFAULTS["zeta_eV"]),
            Delta_a=Delta, Delta_c=Delta, g=g,
            kappa=_number(raw, "kappa_eV", DEFAULTS["kappa_eV"]),
            gamma_d=_number(raw, "gamma_d_eV", DEFAULTS["gamma_d_eV"]),
            gamma_R=_number(raw, "gamma_R_eV", DEFAULTS["gamma_R_eV"]),
            nbar_R=_number(raw, "nbar_R", DEFAULTS["nbar_R"]),
            drive=drive,
            xi_T=_number(raw, "xi_T_eV", DEFAULTS["xi_T_eV"]),
            xi_c=_number(raw, "xi_c_eV", DEFAULTS["xi_c_eV"]),
            cavity=cavity,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))

    axes: tuple[SweepAxis, ...] = ()
    if "sweep" in raw:
        sweep = raw["sweep"]
        if not isinstance(sweep, dict) or set(sweep) != {"axes"}:
            raise ConfigError("config key 'sweep' must be an object with an 'axes' list")
        if not isinstance(sweep["axes"], list) or not 1 <= len(sweep["axes"]) <= 2:
            raise ConfigError("'sweep.axes' must list one or two axes")
        axes = tuple(_parse_axis(a) for a in sweep["axes"])

    return RunConfig(spec, axes, pin_rabi)


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}")
    return parse_config(raw)


def cmd_spectrum(cfg: RunConfig, out_dir: str, threads: int | None,
                 literal_eq13: bool) -> int:
    if len(cfg.axes) != 1 or not cfg.axes[0].continuous:
        raise ConfigError(
            f"the spectrum command needs a sweep over exactly one of {SWEEPABLE_AXES}")
    plan = SweepPlan(base=cfg.spec, axes=cfg.axes, task=SweepTask.DETECT,
                     literal_eq13=literal_eq13, pin_rabi=cfg.pin_rabi)
    result = run_sweep(plan, threads=threads)
    os.makedirs(out_dir, exist_ok=True)
    write_spectrum_csv(os.path.join(out_dir, "spectrum.csv"), result.spectrum_rows)
    write_events_csv(os.path.join(out_dir, "events.csv"), result.event_rows)
    write_manifest(os.path.join(out_dir, "manifest.json"), plan, result)
    print(f"spectrum: {len(result.spectrum_rows)} band samples, "
          f"{len(result.event_rows)} events, {result.wall_time_s:.2f} s -> {out_dir}")
    return 0


def cmd_steady(cfg: RunConfig, out_dir: str, threads: int | None,
               literal_eq13: bool) -> int:
    os.makedirs(out_dir, exist_ok=True)
    if cfg.axes:
        plan = SweepPlan(base=cfg.spec, axes=cfg.axes, task=SweepTask.STEADY,
                         literal_eq13=literal_eq13, pin_rabi=cfg.pin_rabi)
        result = run_sweep(plan, threads=threads)
    else:
        point = SweepAxis("zeta", (cfg.spec.zeta,))
        plan = SweepPlan(base=cfg.spec, axes=(point,), task=SweepTask.STEADY,
                         literal_eq13=literal_eq13, pin_rabi=cfg.pin_rabi)
        result = SweepResult(plan=plan,
                             steady_rows=[steady_row(cfg.spec, literal_eq13)])
    write_steady_csv(os.path.join(out_dir, "steady.csv"), result.steady_rows)
    write_manifest(os.path.join(out_dir, "manifest.json"), plan, result)
    bad = sum(1 for r in result.steady_rows if r["status"].startswith("error"))
    print(f"steady: {len(result.steady_rows)} rows ({bad} failed), "
          f"{result.wall_time_s:.2f} s -> {out_dir}")
    return 0 if bad == 0 else 1


def _verify_checks(cfg: RunConfig, literal_eq13: bool):
    spec = cfg.spec
    liouv = build_liouvillian(spec, literal_eq13=literal_eq13)
    D = liouv.dim
    diag = np.arange(D) * D + np.arange(D)

    tr_rows = np.zeros(D * D, dtype=complex)
    tr_rows[diag] = 1.0
    defect = float(np.max(np.abs(tr_rows @ liouv.matrix)))
    yield "trace_preserving", defect <= 1e-12, f"left-kernel defect {defect:.2e}"

    sol = steady_state(liouv)
    rep = steady_report(sol.rho, spec,
                        cavity_decay_factor=spec.L if literal_eq13 else 1.0)
    if spec.nbar_R == 0:
        ok = rep.flux_residual <= 1e-8
        yield "flux_balance", ok, f"residual {rep.flux_residual:.2e}"
    else:
        yield "flux_balance", True, "skipped (thermal drain occupation)"

    bare = dc_replace(spec, cavity=False, g=0.0)
    eta_p = steady_report(steady_state(build_liouvillian(bare)).rho, bare).eta
    flipped = dc_replace(bare, zeta=-bare.zeta)
    eta_m = steady_report(steady_state(build_liouvillian(flipped)).rho, flipped).eta
    yield "zeta_mirror_no_cavity", abs(eta_p - eta_m) <= 1e-8, \
        f"|eta(z) - eta(-z)| = {abs(eta_p - eta_m):.2e} without the cavity"

    rng = np.random.default_rng(7)
    M = spec.n_sites + (1 if spec.cavity else 0)
    worst = 0.0
    for _ in range(200):
        psi = rng.normal(size=M) + 1j * rng.normal(size=M)
        psi /= np.linalg.norm(psi)
        w = abs(psi[-1]) ** 2 if spec.cavity else 0.0
        # Partial trace over the photon factor: exciton register of
        # dimension n_sites+1 (slot 0 = no exciton) times a 0/1 photon.
        full = np.zeros((spec.n_sites + 1, 2), dtype=complex)
        if spec.cavity:
            full[1:, 0] = psi[:-1]
            full[0, 1] = psi[-1]
        else:
            full[1:, 0] = psi
        red = full @ full.conj().T
        evals = np.linalg.eigvalsh(red)
        evals = evals[evals > 1e-300]
        oracle = float(-(evals * np.log2(evals)).sum())
        worst = max(worst, abs(binary_entropy(w) - oracle))
    yield "entropy_identity", worst <= 1e-12, f"max |S - S_oracle| = {worst:.2e}"

    rates = [r for r in (spec.gamma_d, spec.kappa if spec.cavity else 0.0,
                         spec.gamma_R) if r > 0]
    if rates:
        # The solved state must be a fixed point of the integrator: RK4 on a
        # linear generator is a polynomial in dt*Liouvillian, so an exact
        # kernel vector stays put and any error drifts at its residual rate.
        t_final = 5.0 / min(rates)
        prop = propagate(liouv, sol.rho, t_final, max_stable_dt(liouv))
        dev = float(np.max(np.abs(prop.rho - sol.rho)))
        yield "propagation_vs_solve", dev <= 1e-8, \
            f"max-norm drift {dev:.2e} off the solved state over t = {t_final:g}"
    else:
        yield "propagation_vs_solve", False, "no nonzero decay rate to relax with"


def cmd_verify(cfg: RunConfig, literal_eq13: bool) -> int:
    failures = 0
    for name, ok, detail in _verify_checks(cfg, literal_eq13):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chaincavity",
        description="Spectra and steady-state exciton transport of "
                    "cavity-coupled multichain arrays.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("spectrum", "scan bands and detect (anti)crossings"),
                           ("steady", "solve driven steady states on a grid"),
                           ("verify", "run internal consistency checks")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="path to a JSON run config")
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default: $CHAINCAVITY_THREADS or CPU count)")
        p.add_argument("--literal-eq13", action="store_true",
                       help="count the cavity leakage once per chain instead of once")
        if name != "verify":
            p.add_argument("--out", required=True, help="output directory")

    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("config error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args.config)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.out, args.threads, args.literal_eq13)
        if args.command == "steady":
            return cmd_steady(cfg, args.out, args.threads, args.literal_eq13)
        return cmd_verify(cfg, args.literal_eq13)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
