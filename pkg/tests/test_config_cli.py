import json
import subprocess
import sys

import numpy as np
import pytest

from atomcavity.cli import main
from atomcavity.config import SCENARIOS, default_config_dict, load_config, parse_config_dict
from atomcavity.errors import ConfigError
from atomcavity.tableio import parse_csv, read_document


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


# -- config parsing -----------------------------------------------------------


def test_every_default_config_parses():
    for scenario in SCENARIOS:
        cfg = parse_config_dict(default_config_dict(scenario))
        assert cfg.scenario == scenario


def test_unknown_scenario_named_in_error():
    with pytest.raises(ConfigError) as err:
        parse_config_dict({"scenario": "banana"})
    assert "scenario" in str(err.value) and "banana" in str(err.value)


def test_unknown_keys_rejected():
    doc = default_config_dict("population")
    doc["typo_key"] = 1
    with pytest.raises(ConfigError) as err:
        parse_config_dict(doc)
    assert "typo_key" in str(err.value)


def test_unknown_param_rejected():
    doc = default_config_dict("population")
    doc["params"]["mass"] = 1.0
    with pytest.raises(ConfigError) as err:
        parse_config_dict(doc)
    assert "mass" in str(err.value)


def test_alpha_truncation_precondition_enforced():
    doc = default_config_dict("population")
    doc["alphas"] = [5.0]
    doc["photon_truncation"] = 8
    with pytest.raises(ConfigError) as err:
        parse_config_dict(doc)
    assert "alphas" in str(err.value)


def test_entanglement_requires_positive_detuning():
    doc = default_config_dict("entanglement-time")
    doc["params"]["Omega"] = doc["params"]["omega"]
    with pytest.raises(ConfigError) as err:
        parse_config_dict(doc)
    assert "detuning" in str(err.value)


def test_grid_validation_messages():
    doc = default_config_dict("entanglement-time")
    doc["grid"] = {"t_start": 1.0, "t_end": 0.5, "n_steps": 10}
    with pytest.raises(ConfigError) as err:
        parse_config_dict(doc)
    assert "t_end" in str(err.value)
    doc["grid"] = {"t_end": 1.0, "unist": "seconds"}
    with pytest.raises(ConfigError):
        parse_config_dict(doc)


def test_alpha_forms():
    doc = default_config_dict("population")
    doc["alphas"] = [1.0, [0.5, 0.5]]
    cfg = parse_config_dict(doc)
    assert cfg.alphas == [complex(1.0), complex(0.5, 0.5)]
    doc["alphas"] = ["one"]
    with pytest.raises(ConfigError):
        parse_config_dict(doc)


def test_load_config_reports_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


# -- CLI ------------------------------------------------------------------------


def test_cli_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out.split()
    assert list(SCENARIOS) == out


def test_cli_validate_ok_and_failure(tmp_path, capsys):
    path = write_config(tmp_path, default_config_dict("dressed-table"))
    assert main(["validate", "--config", str(path)]) == 0
    bad = write_config(tmp_path, {"scenario": "nope"}, "bad.json")
    assert main(["validate", "--config", str(bad)]) == 2
    assert "scenario" in capsys.readouterr().err


def test_cli_scenario_mismatch_is_config_error(tmp_path):
    path = write_config(tmp_path, default_config_dict("dressed-table"))
    assert main(["population", "--config", str(path)]) == 2


def test_cli_capacity_error_exit_code(tmp_path):
    doc = default_config_dict("population")
    doc["alphas"] = [0.0]
    doc["photon_truncation"] = 10000  # atom x photon exceeds the dimension cap
    path = write_config(tmp_path, doc)
    assert main(["population", "--config", str(path), "--out", str(tmp_path / "x.csv")]) == 3


def test_cli_population_emits_per_alpha_files(tmp_path):
    doc = default_config_dict("population")
    doc["alphas"] = [0.0, 1.0]
    doc["grid"] = {"t_start": 0.0, "t_end": 1e25, "n_steps": 40}
    path = write_config(tmp_path, doc)
    out = tmp_path / "pop.csv"
    assert main(["population", "--config", str(path), "--out", str(out)]) == 0
    f0, f1 = tmp_path / "pop.alpha0.csv", tmp_path / "pop.alpha1.csv"
    assert f0.exists() and f1.exists()
    doc0 = parse_csv(f0.read_text(encoding="utf-8"))
    assert doc0.columns == ["t", "population", "norm", "leakage"]
    assert len(doc0.rows) == 40
    assert doc0.metadata["scenario"] == "population"


def test_cli_single_alpha_uses_exact_path(tmp_path):
    doc = default_config_dict("population")
    doc["alphas"] = [0.0]
    doc["grid"] = {"t_start": 0.0, "t_end": 1e25, "n_steps": 16}
    path = write_config(tmp_path, doc)
    out = tmp_path / "single.csv"
    assert main(["population", "--config", str(path), "--out", str(out)]) == 0
    assert out.exists()


def test_cli_json_format(tmp_path):
    doc = default_config_dict("dressed-table")
    path = write_config(tmp_path, doc)
    out = tmp_path / "table.json"
    assert main(["dressed-table", "--config", str(path), "--out", str(out), "--format", "json"]) == 0
    parsed = read_document(out)
    assert "theta" in parsed.columns


def test_cli_reproducible_bytes(tmp_path):
    doc = default_config_dict("entanglement-time")
    doc["truncations"] = {"c": 4, "b": 6}
    doc["rwa"] = True
    doc["rwa_resonance"] = True
    doc["grid"] = {"t_start": 0.0, "t_end": 2e7, "n_steps": 60}
    path = write_config(tmp_path, doc)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["entanglement-time", "--config", str(path), "--out", str(out1)]) == 0
    assert main(["entanglement-time", "--config", str(path), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_threads_match_serial(tmp_path):
    doc = default_config_dict("entanglement-gsweep")
    doc["truncations"] = {"c": 4, "b": 5}
    doc["G_list"] = [0.0, 2e5, 4e5, 6e5]
    path = write_config(tmp_path, doc)
    out1, out2 = tmp_path / "s.csv", tmp_path / "p.csv"
    assert main(["entanglement-gsweep", "--config", str(path), "--out", str(out1)]) == 0
    assert main(
        ["entanglement-gsweep", "--config", str(path), "--out", str(out2), "--threads", "4"]
    ) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc1 = parse_csv(out1.read_text(encoding="utf-8"))
    assert doc1.column("entropy")[0] == pytest.approx(0.0, abs=1e-9)  # G = 0 row


def test_cli_adiabatic_check_emits_two_reports(tmp_path):
    path = write_config(tmp_path, default_config_dict("adiabatic-check"))
    out = tmp_path / "adia.csv"
    assert main(["adiabatic-check", "--config", str(path), "--out", str(out)]) == 0
    mirror = parse_csv((tmp_path / "adia.mirror.csv").read_text(encoding="utf-8"))
    bo = parse_csv((tmp_path / "adia.bo.csv").read_text(encoding="utf-8"))
    # Non-adjacent phonon pair rows are exactly zero.
    pair_02 = [r for r in mirror.rows if (r[0], r[1]) == (0.0, 2.0)]
    assert pair_02 and pair_02[0][2] == 0.0
    np.testing.assert_allclose(bo.column("ratio_analytic"), bo.column("ratio_fd"), rtol=1e-6)


def test_cli_potential_scan_identities(tmp_path):
    path = write_config(tmp_path, default_config_dict("potential-scan"))
    out = tmp_path / "scan.csv"
    assert main(["potential-scan", "--config", str(path), "--out", str(out)]) == 0
    doc = parse_csv(out.read_text(encoding="utf-8"))
    assert len(doc.rows) == 2500
    scale = np.abs(doc.column("U_plus_exact")).max()
    np.testing.assert_allclose(doc.column("branch_sum_residual"), 0.0, atol=1e-13 * scale)
    assert doc.column("residual_rel").max() <= 1e-3


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "atomcavity.cli", "list-scenarios"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "population" in proc.stdout
