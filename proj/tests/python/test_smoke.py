import json
import math

import numpy as np
import pytest

import holoqed as hq


def test_params_roundtrip():
    p = hq.DeviceParams({"cutoff": 6, "chi": -2194.0})
    assert p.cutoff == 6 and p.dim == 12
    assert p.chi == pytest.approx(-2 * math.pi * 2194e-6)
    assert p.to_dict()["chi"] == pytest.approx(-2194.0)


def test_propagate_is_unitary():
    p = hq.DeviceParams({"cutoff": 5})
    rng = np.random.default_rng(3)
    drive = 0.5 * p.omega_max * (rng.normal(size=(20, 2)) + 1j * rng.normal(size=(20, 2))) / 2
    u = hq.propagate(p, drive)
    assert u.shape == (10, 10)
    assert np.abs(u.conj().T @ u - np.eye(10)).max() < 1e-10


def test_zero_drive_is_diagonal_phase():
    p = hq.DeviceParams({"cutoff": 4})
    u = hq.propagate(p, np.zeros((7, 2), dtype=complex))
    h = hq.static_hamiltonian(p)
    assert np.allclose(u, np.diag(np.exp(-1j * np.diag(h) * 70.0)), atol=1e-12)


def test_amplitude_bound_raises():
    p = hq.DeviceParams()
    with pytest.raises(hq.HoloqedError):
        hq.propagate(p, np.full((3, 2), 10 * p.omega_max, dtype=complex))


def test_embed_extract_roundtrip():
    rng = np.random.default_rng(5)
    z = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    q, _ = np.linalg.qr(z)
    a0, a1 = q[:2].T, q[2:].T
    u = hq.embed_isometry(a0, a1, 3)
    b0, b1 = hq.extract_tensor(u, 2)
    assert np.abs(b0 - a0).max() < 1e-12 and np.abs(b1 - a1).max() < 1e-12


def test_tfim_energies():
    model = hq.SpinChainModel(1.0, 1.0, 0.0)
    e, _ = hq.exact_ground_state(model, 2)
    assert e == pytest.approx(-math.sqrt(5.0), abs=1e-10)
    res = hq.dmrg(model, chain_length=12, bond_dim=32)
    e12, _ = hq.exact_ground_state(model, 12)
    assert res.energy == pytest.approx(e12, abs=1e-8)


def test_product_state_correlation():
    a0 = np.ones((1, 1), dtype=complex)
    a1 = np.zeros((1, 1), dtype=complex)
    assert hq.correlation(a0, a1, "z", "z", 3) == pytest.approx(1.0)
    assert hq.energy_density(a0, a1, hq.SpinChainModel(1.0, 1.0, 0.5)) == pytest.approx(-0.5)


def test_sampling_shapes():
    rng = np.random.default_rng(2)
    z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u, _ = np.linalg.qr(z)
    s = hq.sample_chain(u, "zzxz", 50, seed=4, burn_in=5)
    assert s.shape == (50, 4) and set(np.unique(s)) <= {0, 1}


def test_noise_preserves_trace():
    p = hq.DeviceParams({"cutoff": 3})
    rho = np.zeros((6, 6), dtype=complex)
    rho[3, 3] = 1.0
    out = hq.noisy_step(p, {"scale": 1.0}, hq.static_hamiltonian(p), rho)
    assert abs(np.trace(out) - 1.0) < 1e-10
    assert out[0, 0].real > 0


def test_manifest_validation_and_templates(tmp_path):
    t = hq.templates()
    assert sorted(t) == ["fig1b", "fig1c", "fig2a", "fig2b", "fig2c"]
    for manifest in t.values():
        assert hq.validate_manifest(manifest) == []
    bad = {"experiment": "nope", "output_dir": "x"}
    assert any("unknown experiment" in v for v in hq.validate_manifest(bad))


def test_run_manifest(tmp_path):
    manifest = {
        "experiment": "dmrg_reference",
        "output_dir": str(tmp_path / "out"),
        "model": {"J": 1.0, "h": 1.0, "V": 0.0},
        "problem": {"chain_length": 16, "bond_dim": 8},
    }
    summary = hq.run_manifest(manifest)
    assert summary["experiment"] == "dmrg_reference"
    written = json.loads((tmp_path / "out" / "results.json").read_text())
    assert written["manifest_hash"] == summary["manifest_hash"]
    assert (tmp_path / "out" / "dmrg_sweeps.csv").read_text().startswith("sweep,energy,manifest_hash")
