import json

import pytest

from momentricci.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main, run_scenario
from momentricci.config import ConfigError, load_config
from momentricci.reports import MANIFEST
from momentricci.scenarios import get_scenario, list_scenarios, parse_action, parse_polytope

NAMES = ["lemma1", "lemma2", "einstein", "calabi", "theorem2", "example3", "gao", "full"]


def _ini(tmp_path, text, name="c.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_catalog_lists_every_scenario_with_anchor():
    cat = list_scenarios()
    assert [e["name"] for e in cat] == NAMES
    assert all(e["anchor"] and e["description"] and isinstance(e["params"], dict) for e in cat)


def test_list_json(capsys):
    assert main(["list", "--json"]) == EXIT_OK
    assert [e["name"] for e in json.loads(capsys.readouterr().out)] == NAMES


def test_unknown_scenario_exit_code(tmp_path, capsys):
    cfg = _ini(tmp_path, "[lemma1]\n")
    assert main(["run", "nosuch", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "nosuch" in err and "lemma1" in err


@pytest.mark.parametrize("text", [
    "[lemma1]\nn_max = 1\n",
    "[lemma1]\nn_max = six\n",
    "[lemma1]\nbogus = 3\n",
    "[theorem2]\nR = 3\n",
    "[example3]\neps = 0.5\n",
    "[lemma1]\nseed = -1\n",
])
def test_bad_values_exit_code(tmp_path, text):
    cfg = _ini(tmp_path, text)
    name = text.split("]")[0][1:]
    assert main(["run", name, "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_CONFIG


def test_missing_config_exit_code(tmp_path):
    assert main(["run", "lemma1", "--config", str(tmp_path / "none.ini"), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_bad_custom_action_is_config_error():
    with pytest.raises(ConfigError):
        parse_action("u1: 1 x 0")
    with pytest.raises(ConfigError):
        parse_polytope("dodecahedron")


def test_theorem2_without_bending_fails(tmp_path, capsys):
    cfg = _ini(tmp_path, "[theorem2]\nnu = 0\nnum = 1001\nprofile_points = 11\n")
    assert main(["run", "theorem2", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_FAIL
    assert "FAIL" in capsys.readouterr().out


def test_lemma1_writes_report(tmp_path):
    cfg = _ini(tmp_path, "[lemma1]\nn_max = 4\n")
    out = tmp_path / "o"
    assert main(["run", "lemma1", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    for f in MANIFEST:
        assert (out / f).is_file(), f
    s = json.loads((out / "summary.json").read_text())
    assert s["scenario"] == "lemma1" and s["pass"] and s["params"]["n_max"] == 4


def test_default_section_and_seed(tmp_path):
    sc = get_scenario("example3")
    cfg = _ini(tmp_path, "[DEFAULT]\neps = 0.05\nn_max = 3\nseed = 7\n[example3]\ngrid = 4\n")
    c = load_config(cfg, "example3", sc.schema, tmp_path)
    # n_max belongs to another scenario and is ignored here
    assert c.params["eps"] == 0.05 and c.params["grid"] == 4 and c.seed == 7
    assert load_config(cfg, "example3", sc.schema, tmp_path, seed=3).seed == 3
    # section values win over [DEFAULT]
    cfg2 = _ini(tmp_path, "[DEFAULT]\neps = 0.05\n[example3]\neps = 0.2\n", "d.ini")
    assert load_config(cfg2, "example3", sc.schema, tmp_path).params["eps"] == 0.2


def test_custom_action_and_polytope(tmp_path):
    cfg = _ini(tmp_path, "[lemma2]\naction = u1: 1 0 0; v1: -1 0 0; u2: 0 1 0; v2: 0 -1 0; u3: 0 0 1; v3: 0 0 -1\n"
                         "n_max = 3\npolytopes = cube; cube | x0 y0\n")
    summary, code = run_scenario("lemma2", cfg, tmp_path / "o")
    # coordinate-wise action: free, and the F1/F2 checks only apply to the named example
    assert code == EXIT_OK
    assert summary["results"]["nontrivial"] == {}
    assert "strata_are_F1_F2" not in summary["checks"]
    mz = summary["results"]["moment_angle"]
    assert mz["cube"] == {"m": 6, "dim_Z": 9, "torus_rank": 3}
    assert mz["cube | x0 y0"] == {"m": 7, "dim_Z": 10, "torus_rank": 4}
    assert summary["params"]["polytopes"] == "cube; cube | x0 y0"
