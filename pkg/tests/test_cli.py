import json
import math

import pytest

from qrcost.cli import main

_FAST_SPACE = [
    "--set", "search.gen1.max_levels=3",
    "--set", "search.gen1.max_rounds=1",
    "--set", "search.gen2.segment_counts=4,16,64",
    "--set", "search.gen2.memories=4,16",
    "--set", "search.gen2.gen_rounds=1,2",
    "--set", "search.gen3.spacings_km=1,2",
    "--set", "search.gen3.max_n=8",
    "--set", "search.gen3.max_m=8",
]

_PERFECT_CHANNEL = [
    "--set", "hardware.eta_c=1.0",
    "--set", "hardware.eps_g=0.0",
    "--set", "hardware.l_att=1e18",
]


def test_evaluate_emits_json_record(capsys):
    assert main(["evaluate"] + _PERFECT_CHANNEL) == 0
    first = capsys.readouterr().out
    record = json.loads(first)
    assert record["schema_version"] == 1
    assert record["tool"] == "qrcost" and record["command"] == "evaluate"
    assert record["family"] == "gen3"
    assert record["config"] == {"n": 5, "m": 5, "spacing_km": 1.0}
    assert record["hardware"]["eta_c"] == 1.0
    assert record["l_tot_km"] == 1000.0
    assert record["result"]["feasible"] is True
    assert math.isclose(record["result"]["rate_sbits_per_s"], 1e6, rel_tol=1e-9)
    assert math.isclose(record["result"]["cost"], 0.05, rel_tol=1e-9)
    assert math.isclose(record["result"]["cost_coeff"], 5e-5, rel_tol=1e-9)
    assert main(["evaluate"] + _PERFECT_CHANNEL) == 0
    assert capsys.readouterr().out == first


def test_error_exits(capsys):
    for argv in [
        ["evaluate", "--set", "hardware.eta_c=1.5"],
        ["evaluate", "--set", "hardware.bogus=1"],
        ["evaluate", "--set", "nosuchsection.x=1"],
        ["evaluate", "--set", "hardware.eta_c"],  # missing '='
        ["evaluate", "--config", "/nonexistent/qrcost.ini"],
        ["sweep", "--set", "sweep.axis=bogus"],
        ["sweep", "--set", "sweep.values=-1,1e-3"],
        ["validate", "nosuchsuite"],
    ]:
        assert main(argv) == 2, argv
        err = capsys.readouterr().err
        assert "error" in err.lower(), argv


def test_config_file_and_set_precedence(tmp_path, capsys):
    ini = tmp_path / "site.ini"
    ini.write_text("[hardware]\neta_c = 0.7\nt0 = 2e-6\n")
    assert main(["evaluate", "--config", str(ini), "--set", "hardware.t0=4e-6"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["hardware"]["eta_c"] == 0.7  # file beats default
    assert record["hardware"]["t0"] == 4e-6  # flag beats file
    assert record["hardware"]["eps_g"] == 1e-3  # untouched default survives


def test_env_config_honored(tmp_path, capsys, monkeypatch):
    env_ini = tmp_path / "env.ini"
    env_ini.write_text("[hardware]\neta_c = 0.6\n")
    monkeypatch.setenv("QRCOST_CONFIG", str(env_ini))
    assert main(["evaluate"]) == 0
    assert json.loads(capsys.readouterr().out)["hardware"]["eta_c"] == 0.6
    explicit = tmp_path / "explicit.ini"
    explicit.write_text("[hardware]\neta_c = 0.7\n")
    assert main(["evaluate", "--config", str(explicit)]) == 0
    assert json.loads(capsys.readouterr().out)["hardware"]["eta_c"] == 0.7


def test_sweep_dataset_layout(capsys):
    argv = ["sweep", "--set", "sweep.values=1e-3,2e-3,5e-3"] + _FAST_SPACE
    assert main(argv) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0] == "# schema_version: 1"
    assert lines[1].startswith("# tool: qrcost ")
    assert lines[2] == "# command: sweep"
    assert lines[3].startswith("# units: ")
    assert lines[4].startswith("# seed_policy: ")
    assert lines[5].startswith("# grid_hash: sha256:")
    header = lines[6].split(",")
    assert header[:5] == ["eta_c", "eps_g", "t0", "l_tot_km", "winner"]
    rows = lines[7:]
    assert len(rows) == 3
    assert [row.split(",")[1] for row in rows] == ["0.001", "0.002", "0.005"]


def test_optimize_dataset_single_row(capsys):
    assert main(["optimize"] + _FAST_SPACE) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[2] == "# command: optimize"
    assert len(lines) == 8  # 6 comment lines, column row, one data row
    winner = lines[7].split(",")[4]
    assert winner in ("gen1", "gen2_noenc", "gen2_enc", "gen3")


def test_region_map_deterministic_across_runs_and_threads(tmp_path):
    grids = [
        "--set", "region.eta_c=0.6,0.9",
        "--set", "region.eps_g=1e-3",
        "--set", "region.t0=1e-6",
    ]
    paths = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
    argvs = [
        ["region-map", "--out", str(paths[0])] + grids + _FAST_SPACE,
        ["region-map", "--out", str(paths[1])] + grids + _FAST_SPACE,
        ["region-map", "--out", str(paths[2]), "--threads", "2"] + grids + _FAST_SPACE,
    ]
    for argv in argvs:
        assert main(argv) == 0
    first = paths[0].read_bytes()
    assert paths[1].read_bytes() == first
    assert paths[2].read_bytes() == first
    assert len(first.decode().splitlines()) == 6 + 1 + 2


def test_output_path_config_and_flag(tmp_path, capsys):
    target = tmp_path / "record.json"
    ini = tmp_path / "out.ini"
    ini.write_text(f"[output]\npath = {target}\n")
    assert main(["evaluate", "--config", str(ini)] + _PERFECT_CHANNEL) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["family"] == "gen3"
    override = tmp_path / "other.json"
    assert main(["evaluate", "--config", str(ini), "--out", str(override)] + _PERFECT_CHANNEL) == 0
    assert json.loads(override.read_text())["family"] == "gen3"


def test_validate_qpc_suite(capsys):
    assert main(["validate", "qpc", "--trials", "20000"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    # tiny samples are flagged as underpowered instead of failing
    assert main(["validate", "qpc", "--trials", "10"]) == 0
    assert "UNDERPOWERED" in capsys.readouterr().out


def test_validate_gen1_time_suite(capsys):
    assert main(["validate", "gen1-time", "--trials", "3000"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert "INFO" in out  # deep-ladder bias is reported, not asserted
