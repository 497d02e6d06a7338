import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from cavspin.cli import main
from cavspin.config import ConfigError, parse_config, parse_config_text, parse_value
from cavspin.scenarios import REGISTRY, known_keys

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SCENARIOS = {"budget", "jc_spectrum", "oat", "qnd_squeeze", "parity_cat", "fock_collapse", "w_state", "paint",
             "echo", "allan", "floquet_graph", "quench_geometry", "graph_state", "dicke_meanfield", "sy_build"}


def write(tmp_path, text, name="cfg.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_registry_covers_all_scenarios():
    assert set(REGISTRY) == SCENARIOS
    assert {p.stem for p in CONFIGS.glob("*.ini")} == SCENARIOS


def test_minimal_oat_config_parses():
    cfg = parse_config_text("[oat]\nN = 40\nchi = 1.0\nt_max = 2.0\nseed = 7\n", known=known_keys())
    assert cfg.scenario == "oat"
    assert cfg.params == {"N": 40, "chi": 1.0, "t_max": 2.0}
    assert cfg.seed == 7


def test_value_grammar():
    assert parse_value("[20, 40, 80]") == [20, 40, 80]
    assert parse_value("[]") == []
    assert parse_value("true") is True and parse_value("False") is False
    assert parse_value("inf") == math.inf and parse_value("pi") == math.pi
    assert parse_value("mobius") == "mobius"
    assert parse_value("'quoted'") == "quoted"
    assert parse_value("1e-3") == 1e-3
    with pytest.raises(ValueError):
        parse_value("[1, 2")
    with pytest.raises(ValueError):
        parse_value("[1,,2]")


@pytest.mark.parametrize("text,line,key,fragment", [
    ("[oat]\nN = 40\nfoo = 1\n", 3, "foo", "foo"),
    ("N = 40\n", 1, None, "header"),
    ("[oat]\nN = 40\nthis line is wrong\n", 3, None, "key = value"),
    ("[oat]\nN = 40\nN = 41\n", 3, "N", "duplicate"),
    ("[oat]\nchi = 1.0\n", None, "N", "missing required key 'N'"),
    ("[nope]\nx = 1\n", None, "nope", "unknown scenario"),
    ("[oat]\nN = 40\nseed = -1\n", 3, "seed", "seed"),
    ("[oat]\nN = [1, 2\n", 2, "N", "unterminated"),
    ("[oat]\nN = 40\n[oat]\nN = 40\n", 3, None, "duplicate section"),
    ("[oat]\nN = 4\n[echo]\n", None, None, "exactly one"),
])
def test_config_errors(text, line, key, fragment):
    with pytest.raises(ConfigError) as e:
        parse_config_text(text, known=known_keys())
    assert fragment in str(e.value)
    assert e.value.line == line
    assert e.value.key == key
    d = e.value.to_dict()
    assert d["error"] == "config"


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(tmp_path / "absent.ini")


def test_list_and_validate(capsys):
    code, out, _ = run(["list-scenarios"], capsys)
    assert code == 0
    assert {ln.split()[0] for ln in out.strip().splitlines()} == SCENARIOS
    code, out, _ = run(["validate", CONFIGS / "oat.ini"], capsys)
    assert code == 0 and json.loads(out) == {"ok": True, "scenario": "oat"}


def test_exit_codes(tmp_path, capsys):
    code, _, err = run(["run", write(tmp_path, "[oat]\nN = 40\nfoo = 1\n")], capsys)
    assert code == 2
    assert json.loads(err) == {"error": "config", "key": "foo", "line": 3,
                               "message": f"{tmp_path / 'cfg.ini'}:3: unknown key 'foo' for scenario 'oat'"}
    code, _, err = run(["run", tmp_path / "nothing.ini"], capsys)
    assert code == 2
    code, _, err = run(["run", write(tmp_path, "[oat]\nN = 1.5\n")], capsys)
    assert code == 2 and json.loads(err)["key"] == "N"
    code, _, err = run(["run", write(tmp_path, "[floquet_graph]\nM = 7\n"), "--out", tmp_path / "o"], capsys)
    assert code == 3
    e = json.loads(err)
    assert e["error"] == "numeric" and e["scenario"] == "floquet_graph"
    code, _, _ = run(["run", CONFIGS / "oat.ini", "--format", "xml", "--out", tmp_path / "o"], capsys)
    assert code == 2
    code, _, _ = run(["run", CONFIGS / "oat.ini", "--seed", "-3", "--out", tmp_path / "o"], capsys)
    assert code == 2


def test_oat_outputs_and_determinism(tmp_path, capsys):
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        code, out, _ = run(["run", CONFIGS / "oat.ini", "--out", d], capsys)
        assert code == 0
        assert json.loads(out)["files"] == ["results.json", "timing.json", "xi2_vs_t.csv"]
        outs.append(d)
    for name in ("xi2_vs_t.csv", "results.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    lines = (outs[0] / "xi2_vs_t.csv").read_text().splitlines()
    assert lines[0] == "t,xi2,Vmin,Vmax"
    assert len(lines) == 102
    res = json.loads((outs[0] / "results.json").read_text())
    assert res["seed"] == 7 and res["params"]["N"] == 40
    assert set(res["versions"]) == {"cavspin", "numpy", "scipy"}
    assert res["results"]["closed_form_max_error"] < 1e-9
    assert "wall_time_s" in json.loads((outs[0] / "timing.json").read_text())


def test_budget_reports_cooperativity(tmp_path, capsys):
    code, _, _ = run(["run", CONFIGS / "budget.ini", "--out", tmp_path], capsys)
    assert code == 0
    res = json.loads((tmp_path / "results.json").read_text())["results"]
    assert abs(res["eta"] - 5.23) < 0.01


def test_seed_override_changes_stochastic_output(tmp_path, capsys):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    cfg = CONFIGS / "sy_build.ini"
    assert run(["run", cfg, "--out", a], capsys)[0] == 0
    assert run(["run", cfg, "--out", b, "--seed", "8"], capsys)[0] == 0
    assert run(["run", cfg, "--out", c, "--seed", "8"], capsys)[0] == 0
    assert (a / "couplings.csv").read_bytes() != (b / "couplings.csv").read_bytes()
    assert (b / "couplings.csv").read_bytes() == (c / "couplings.csv").read_bytes()
    assert json.loads((b / "results.json").read_text())["seed"] == 8


def test_format_selection(tmp_path, capsys):
    code, out, _ = run(["run", CONFIGS / "w_state.ini", "--out", tmp_path / "j", "--format", "json"], capsys)
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "j").iterdir()) == ["curves.json", "results.json", "timing.json"]
    code, out, _ = run(["run", CONFIGS / "w_state.ini", "--out", tmp_path / "c", "--format", "csv"], capsys)
    assert sorted(p.name for p in (tmp_path / "c").iterdir()) == ["w_herald.csv"]


def test_non_finite_values_serialize(tmp_path, capsys):
    cfg = write(tmp_path, "[oat]\nN = 10\nt_max = 0.5\nn_t = 5\nd = 2.0\n")
    assert run(["run", cfg, "--out", tmp_path / "o"], capsys)[0] == 0
    res = json.loads((tmp_path / "o" / "results.json").read_text())
    assert res["results"]["closed_form_max_error"] == "nan"
    assert res["params"]["d"] == 2.0


def test_thread_cap_environment(tmp_path):
    env = dict(os.environ, CAVSPIN_THREADS="0")
    p = subprocess.run([sys.executable, "-m", "cavspin.cli", "list-scenarios"], env=env,
                       capture_output=True, text=True)
    assert p.returncode == 2 and json.loads(p.stderr)["key"] == "CAVSPIN_THREADS"
    env["CAVSPIN_THREADS"] = "1"
    p = subprocess.run([sys.executable, "-m", "cavspin.cli", "validate", str(CONFIGS / "echo.ini")], env=env,
                       capture_output=True, text=True)
    assert p.returncode == 0
