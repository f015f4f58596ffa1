"""CLI scenarios: artifacts, determinism, validation, sweeps, presets."""

import json

import pytest

from majorasim import cli


def _write_config(path, **overrides):
    cfg = {
        "scenario": "braid",
        "n_wires": 2,
        "length": 4,
        "T": 6.0,
        "dt": 0.05,
        "sample_stride": 10,
        "alpha": 0.05,
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg))
    return cfg


def test_braid_run_artifacts(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path)
    out = tmp_path / "run"
    assert cli.main(["braid", "--config", str(cfg_path), "--out", str(out)]) == 0
    csv = (out / "trajectory.csv").read_text().splitlines()
    assert csv[0] == (
        "time,segment_index,step_label,phi,iGL1GR1,iGL2GR2,iGL2GR1,iGL1GR2,"
        "gap,purity_residual,total_parity"
    )
    summary = json.loads((out / "summary.json").read_text())
    assert summary["checks"]["all_pass"] is True
    assert summary["word"]["time_order"] == "s1"
    assert set(summary["endpoints"]["observed"]) == {
        "iGL1GR1", "iGL1GR2", "iGL2GR1", "iGL2GR2",
    }


def test_braid_csv_is_deterministic(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path)
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert cli.main(["braid", "--config", str(cfg_path), "--out", str(out)]) == 0
        outs.append((out / "trajectory.csv").read_bytes())
    assert outs[0] == outs[1]


def test_unknown_config_key_rejected(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path, typo_key=1.0)
    assert cli.main(["braid", "--config", str(cfg_path), "--out", str(tmp_path)]) == 2


def test_scenario_mismatch_rejected(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path)
    assert cli.main(["spectrum", "--config", str(cfg_path), "--out", str(tmp_path)]) == 2


def test_invalid_length_rejected(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path, length=1)
    assert cli.main(["braid", "--config", str(cfg_path), "--out", str(tmp_path)]) == 2


def test_bad_observable_rejected(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path, observables=["L1 R7"])
    assert cli.main(["braid", "--config", str(cfg_path), "--out", str(tmp_path)]) == 2


def test_missing_config_and_double_source(tmp_path):
    assert cli.main(["braid", "--out", str(tmp_path)]) == 2
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path)
    assert (
        cli.main(
            ["braid", "--config", str(cfg_path), "--preset", "fig3_alpha000",
             "--out", str(tmp_path)]
        )
        == 2
    )
    assert cli.main(["braid", "--config", str(tmp_path / "nope.json")]) == 2


def test_empty_word_rejected(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "scenario": "braid-word", "length": 4, "word": "  ", "n_wires": 3,
        "T": 4.0, "dt": 0.05,
    }))
    assert cli.main(["braid-word", "--config", str(cfg_path), "--out", str(tmp_path)]) == 2


def test_braid_word_summary_orders(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "scenario": "braid-word", "length": 3, "word": "s1 s2", "n_wires": 3,
        "T": 3.0, "dt": 0.05, "sample_stride": 20, "compute_gap": False,
    }))
    out = tmp_path / "run"
    assert cli.main(["braid-word", "--config", str(cfg_path), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["word"]["time_order"] == "s1 s2"
    assert summary["word"]["operator_order"] == "s2 s1"
    csv = (out / "trajectory.csv").read_text().splitlines()
    assert csv[0].count("iGL") == 9


def test_deutsch_jozsa_fock_mode(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"scenario": "deutsch-jozsa", "oracle": "g0", "mode": "fock"}))
    out = tmp_path / "dj"
    assert cli.main(["deutsch-jozsa", "--config", str(cfg_path), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["verdict"] == "constant"
    assert summary["fock"]["p00"] == pytest.approx(1.0, abs=1e-12)
    assert "gaussian" not in summary


def test_deutsch_jozsa_unknown_oracle(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"scenario": "deutsch-jozsa", "oracle": "g9"}))
    assert cli.main(["deutsch-jozsa", "--config", str(cfg_path), "--out", str(tmp_path)]) == 2


def test_deutsch_jozsa_gaussian_trace(tmp_path):
    out = tmp_path / "dj"
    assert cli.main(["deutsch-jozsa", "--preset", "dj_g2", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["gaussian"]["signature_match"] is True
    assert summary["verdict"] == "balanced"
    trace = (out / "dj_trace.csv").read_text().splitlines()
    assert trace[0].startswith("braid,iGL1GR1")
    assert len(trace) == 2 + 10  # header + start + ten braids (g2 word)


def test_spectrum_artifacts(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "scenario": "spectrum", "n_wires": 2, "length": 6, "n_phi": 11,
        "delta": 1.5, "zero_tol": 0.1,
    }))
    out = tmp_path / "spec"
    assert cli.main(["spectrum", "--config", str(cfg_path), "--out", str(out)]) == 0
    lines = (out / "spectrum_phi.csv").read_text().splitlines()
    assert lines[0].startswith("step,phi,gap,zero_count,eps0")
    assert len(lines) == 1 + 4 * 11
    profile = (out / "zero_mode_profile.csv").read_text().splitlines()
    assert profile[0] == "wire,site,weight_left,weight_right"
    rows = [line.split(",") for line in profile[1:]]
    w1 = [float(r[2]) for r in rows if r[0] == "1"]
    # at mu = 0 the left mode lives on every other site and decays
    # exponentially along that sublattice
    assert w1[0] > 0.5 and w1[0] > w1[2] > w1[4]
    assert w1[1] <= 1e-12 and w1[3] <= 1e-12


def test_spectrum_ideal_profiles_delta_localized(tmp_path):
    out = tmp_path / "spec"
    assert cli.main(["spectrum", "--preset", "spectrum_ideal", "--out", str(out)]) == 0
    profile = (out / "zero_mode_profile.csv").read_text().splitlines()[1:]
    for line in profile:
        wire, site, wl, wr = line.split(",")
        expect_left = 1.0 if site == "0" else 0.0
        expect_right = 1.0 if site == "5" else 0.0
        assert float(wl) == pytest.approx(expect_left, abs=1e-12)
        assert float(wr) == pytest.approx(expect_right, abs=1e-12)


def test_sweep_fans_out(tmp_path, monkeypatch):
    monkeypatch.setenv("MAJORASIM_THREADS", "2")
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path)
    out = tmp_path / "sweep"
    code = cli.main([
        "braid", "--config", str(cfg_path), "--out", str(out),
        "--sweep", "alpha=0,0.1",
    ])
    assert code == 0
    assert (out / "alpha=0" / "summary.json").exists()
    assert (out / "alpha=0.1" / "summary.json").exists()
    sweep = json.loads((out / "sweep_summary.json").read_text())
    assert sweep["exit_codes"] == [0, 0]
    a0 = json.loads((out / "alpha=0" / "summary.json").read_text())
    a1 = json.loads((out / "alpha=0.1" / "summary.json").read_text())
    assert a0["config"]["alpha"] == 0
    assert a1["config"]["alpha"] == 0.1


def test_bad_sweep_spec(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path)
    assert cli.main(["braid", "--config", str(cfg_path), "--sweep", "alpha"]) == 2


def test_exit_code_one_on_consistency_failure(tmp_path, monkeypatch):
    # force an unreachable purity limit to exercise the failure path
    monkeypatch.setattr(cli, "PURITY_LIMIT", 1e-30)
    cfg_path = tmp_path / "cfg.json"
    _write_config(cfg_path)
    out = tmp_path / "run"
    assert cli.main(["braid", "--config", str(cfg_path), "--out", str(out)]) == 1
    summary = json.loads((out / "summary.json").read_text())
    assert summary["checks"]["all_pass"] is False


def test_presets_listing_and_validity(capsys):
    assert cli.main(["presets"]) == 0
    listed = capsys.readouterr().out.split()
    expected = {
        "fig3_alpha000", "fig3_alpha005", "fig3_alpha010",
        "fig4a", "fig4b", "fig4c",
        "dj_g0", "dj_g1", "dj_g2", "dj_g3", "spectrum_ideal",
    }
    assert expected.issubset(set(listed))
    for name in expected:
        raw = cli.load_preset(name)
        cli.validate_config(raw, raw["scenario"])
