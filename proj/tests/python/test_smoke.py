import math

import numpy as np
import pytest

import saltlab


def test_brownian_path_and_stratonovich_identity():
    grid = saltlab.TimeGrid(0.0, 1.0, 256)
    path = saltlab.sample_brownian(grid, 2, 7)
    values = path.values
    assert values.shape == (3, 257)
    assert values[0, -1] == pytest.approx(1.0)
    W = values[1]
    s = saltlab.strat_integral(W, path, 1, 0.0, 1.0)
    assert s == pytest.approx(0.5 * W[-1] ** 2, abs=1e-12)


def test_refine_keeps_coarse_nodes():
    path = saltlab.sample_brownian(saltlab.TimeGrid(0.0, 1.0, 32), 1, 3)
    fine = saltlab.refine(path, 4, 11)
    assert fine.grid.n_steps == 128
    np.testing.assert_array_equal(fine.values[:, ::4], path.values)


def test_lemma_harness_reports_errors():
    path = saltlab.sample_brownian(saltlab.TimeGrid(0.0, 1.0, 2000), 1, 5)
    r = saltlab.fundamental_lemma_check(path.values[1], path, 1, 0.25, 0.75, 6)
    assert len(r["errors"]) == 6
    assert r["widths"][0] == pytest.approx(0.25)


def test_taylor_green_is_steady():
    state = saltlab.make_vorticity_state(saltlab.taylor_green_vorticity(32))
    w0 = state.omega
    for _ in range(20):
        state = saltlab.step_deterministic(state, 1e-3)
    assert np.max(np.abs(state.omega - w0)) < 1e-12
    assert state.diagnostics["enstrophy"] == pytest.approx(2 * math.pi**2, rel=1e-12)


def test_velocity_step_channels_are_divergence_free():
    basis = saltlab.make_fourier_basis(32, 32, 4)
    u, v = saltlab.taylor_green_velocity(32)
    state = saltlab.make_velocity_state(u, v)
    state, div = saltlab.step_velocity(state, basis, [1e-3, 0.03, -0.02, 0.01, 0.04])
    assert len(div) == 5
    assert max(div) < 1e-10
    _, div_raw = saltlab.step_velocity(state, basis, [1e-3, 0.03, -0.02, 0.01, 0.04], project_noise_channels=False)
    assert min(div_raw[1:]) > 1e-6


def test_pressure_of_taylor_green():
    u, v = saltlab.taylor_green_velocity(32)
    p0, pk = saltlab.pressure_components(u, v)
    x = np.arange(32) * 2 * np.pi / 32
    X, Y = np.meshgrid(x, x, indexing="ij")
    np.testing.assert_allclose(p0, 0.25 * (np.cos(2 * X) + np.cos(2 * Y)), atol=1e-13)
    assert pk == []


def test_rsw_mass_conserved():
    n = 32
    params = saltlab.RswParams(0.1, 1.0, np.ones((n, n)), np.zeros((n, n)))
    state = saltlab.balanced_rsw_state(params)
    basis = saltlab.make_fourier_basis(n, n, 2)
    m0 = saltlab.rsw_diagnostics(state, params)["mass"]
    for _ in range(10):
        state = saltlab.step_rsw(state, params, basis, [5e-4, 0.01, -0.02])
    assert saltlab.rsw_diagnostics(state, params)["mass"] == pytest.approx(m0, rel=1e-12)


def test_config_round_trip_and_errors():
    text = "mode = euler-vorticity\n[grid]\nnx = 32\nny = 32\n[time]\ndt = 0.001\nT = 0.01\n"
    cfg = saltlab.parse_config(text)
    assert saltlab.parse_config(saltlab.serialize_config(cfg)) == cfg
    with pytest.raises(saltlab.ConfigError, match="time.dt"):
        saltlab.parse_config(text.replace("dt = 0.001", "dt = -1"))


def test_run_writes_member_directories(tmp_path):
    text = "mode = euler-velocity\n[grid]\nnx = 16\nny = 16\n[time]\ndt = 0.001\nT = 0.005\n[noise]\nK = 2\n"
    cfg = saltlab.parse_config(text)
    cfg.out = str(tmp_path)
    cfg.members = 2
    out = saltlab.run(cfg)
    assert out["exit_code"] == 0
    assert (tmp_path / "manifest.json").exists()
    assert (tmp_path / "member_001" / "diagnostics.csv").exists()


def test_check_registry():
    assert saltlab.check_count() == 11
    r = saltlab.run_check(5)
    assert r["passed"], r["detail"]
