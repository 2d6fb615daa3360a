# SPDX-License-Identifier: Apache-2.0
import numpy as np
import pytest

import irsmba

TOY = """
seed = 3
n_t = 2
irs_rows = 2
irs_cols = 4
n_subcarriers = 4
b = 4
pattern = proposed
width = 4
attention_dim = 2
"""


def test_dft_is_unimodular_and_orthogonal():
    psi = irsmba.dft_matrix(8)
    assert psi.shape == (8, 8)
    np.testing.assert_allclose(np.abs(psi), 1.0, atol=1e-14)
    np.testing.assert_allclose(psi @ psi.conj().T, 8 * np.eye(8), atol=1e-12)


def test_hadamard_objective_matches_dft():
    d = irsmba.ls_mse_objective(irsmba.dft_matrix(16), 4, 0.5)
    h = irsmba.ls_mse_objective(irsmba.hadamard_matrix(16), 4, 0.5)
    assert d == pytest.approx(4 * 0.5 * 16 / 16, rel=1e-12)
    assert h == pytest.approx(d, abs=1e-12)


def test_hadamard_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        irsmba.hadamard_matrix(12)


def test_ls_estimate_noiseless_matches_numpy():
    rng = np.random.default_rng(0)
    h = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    psi = irsmba.dft_matrix(4)
    est = irsmba.ls_estimate(h @ psi, psi)
    np.testing.assert_allclose(est, h, atol=1e-12)
    assert irsmba.nmse(h, est) < 1e-20


def test_pattern_mask_counts():
    mask = irsmba.make_pattern("proposed", 4, 4, 8)
    assert mask.shape == (4, 4)
    assert mask.sum() == 8
    assert mask[:, 0].all()


def test_channels_are_deterministic():
    a = irsmba.draw_cascaded_channels(TOY, 5)
    b = irsmba.draw_cascaded_channels(TOY, 5)
    assert len(a) == 4
    assert a[0].shape == (2, 8)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


def test_config_round_trip_and_errors():
    text = irsmba.config_from_text(TOY, ["b=2"])
    assert "b = 2" in text.splitlines()
    with pytest.raises(ValueError):
        irsmba.config_from_text(TOY, ["no_such_key=1"])
    with pytest.raises(ValueError):
        irsmba.config_from_text("n_t = 2\n")


def test_gain_report_first_power_identity():
    g = irsmba.gain_report(0.5, 0.3, 0.2)
    assert g.lambda_can == pytest.approx(0.4)
    assert g.first_power_nmse == pytest.approx(0.2, abs=1e-15)


def test_model_predict_shape_and_checkpoint(tmp_path):
    model = irsmba.MbaModel(width=4, attention_dim=2, seed=1)
    x = np.random.default_rng(1).normal(size=(3, 2, 2, 8))
    y = model.predict(x)
    assert y.shape == x.shape
    path = str(tmp_path / "m.irsw")
    model.save(path)
    other = irsmba.MbaModel(width=4, attention_dim=2, seed=99)
    other.load(path)
    np.testing.assert_array_equal(other.predict(x), y)


def test_results_round_trip():
    rows = [dict(method="mba", b=8, snr_db=10.0, nmse=0.123456789012, wall_time_ms=0.0, flop_estimate=1e6)]
    text = irsmba.format_results(rows)
    assert text.startswith("method,b,snr_db,nmse,wall_time_ms,flop_estimate\n")
    assert irsmba.parse_results(text) == rows


def test_flops_linear_in_m():
    a = irsmba.flop_estimate(8, 4, 4, 16, 16)["mba"]
    b = irsmba.flop_estimate(8, 4, 4, 32, 16)["mba"]
    assert b == 2 * a


def test_cli_config_error_exit_code(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(TOY + f"output_dir = {tmp_path}\n")
    code, out, _ = irsmba.run_cli(["design-psi", "--config", str(cfg)])
    assert code == 0
    assert "ls_mse_objective" in out
    code, _, err = irsmba.run_cli(["design-psi", "--config", str(cfg), "--set", "b=99"])
    assert code == 1
    assert "config error" in err
    code, _, _ = irsmba.run_cli(["eval", "--config", str(cfg), "-q"])
    assert code == 3
