import numpy as np
import pandas as pd
import pytest


def binary_entropy(w):
    w = np.clip(w, 1e-12, 1 - 1e-12)
    return -(w * np.log2(w) + (1 - w) * np.log2(1 - w))


@pytest.fixture
def spectrum_csv(tmp_path):
    # two mirror branches on a uniform grid; quadratic photon weight so the
    # second difference is exactly 0.4 everywhere
    x = np.linspace(-1.0, 1.0, 21)
    rows = []
    for branch, sign in ((0, -1.0), (1, 1.0)):
        for xi in x:
            w = 0.2 * xi * xi
            rows.append({"param_name": "zeta", "param_value": xi,
                         "branch": branch, "energy_eV": sign * (xi * xi + 0.1),
                         "photon_weight": w, "entropy_bits": binary_entropy(w)})
    path = tmp_path / "spectrum.csv"
    pd.DataFrame(rows).to_csv(path, index=False)
    return path


@pytest.fixture
def events_csv(tmp_path):
    rows = [
        {"kind": "crossing", "param_value": 0.0, "gap_eV": 1e-9,
         "branch_lo": 0, "branch_hi": 1, "photon_weight": 0.3},
        {"kind": "anticrossing", "param_value": 0.3, "gap_eV": 0.02,
         "branch_lo": 0, "branch_hi": 1, "photon_weight": 0.4},
    ]
    path = tmp_path / "events.csv"
    pd.DataFrame(rows).to_csv(path, index=False)
    return path


@pytest.fixture
def empty_events_csv(tmp_path):
    path = tmp_path / "empty_events.csv"
    path.write_text("kind,param_value,gap_eV,branch_lo,branch_hi,photon_weight\n")
    return path


STEADY_BASE = {"config": "he_st", "L": 2, "N": 8, "h": 1.0, "delta": 0.5,
               "zeta": 0.1, "Delta": 0.0, "OmegaR": 1.0, "kappa": 0.01,
               "gamma_d": 0.01, "gamma_R": 0.1, "drive": "tls",
               "xi_T": 0.1, "xi_c": 0.1}


def make_steady(path, updates):
    rows = []
    for i, up in enumerate(updates):
        row = dict(STEADY_BASE)
        row.update(up)
        eta = row.pop("_eta", 0.30 + 0.01 * i)
        out = 0.001 * (1 + i)
        row.update({"p_11": 0.01, "p_bulk": 0.02, "p_N": 0.01, "p_c": 0.005,
                    "I_i": out / max(eta, 1e-9), "I_o": out, "eta": eta,
                    "flux_residual": 1e-16,
                    "status": row.pop("_status", "ok")})
        rows.append(row)
    pd.DataFrame(rows).to_csv(path, index=False)
    return path


@pytest.fixture
def steady_1d_csv(tmp_path):
    deltas = np.round(np.linspace(0.1, 0.4, 11), 10)
    return make_steady(tmp_path / "steady_1d.csv",
                       [{"delta": d} for d in deltas])


@pytest.fixture
def steady_two_config_csv(tmp_path):
    deltas = np.round(np.linspace(0.1, 0.4, 7), 10)
    ups = ([{"delta": d, "config": "he_st"} for d in deltas]
           + [{"delta": d, "config": "ho_st", "_eta": 0.2} for d in deltas])
    return make_steady(tmp_path / "steady_two.csv", ups)


@pytest.fixture
def steady_2d_csv(tmp_path):
    ups = [{"zeta": z, "Delta": d, "_eta": 0.1 + 0.1 * iz + 0.01 * idl}
           for idl, d in enumerate(np.linspace(-0.2, 0.2, 4))
           for iz, z in enumerate(np.linspace(-0.3, 0.3, 5))]
    return make_steady(tmp_path / "steady_2d.csv", ups)


@pytest.fixture
def steady_L_csv(tmp_path):
    return make_steady(tmp_path / "steady_L.csv",
                       [{"L": L, "_eta": 0.3 + (0.02 if L % 2 else 0.0)}
                        for L in (2, 3, 4, 5, 6)])
