import json
import subprocess
import sys

import pytest

from fqadditive.cli import ExperimentConfig, UsageError, cmd_dispatch, parse_args


def run(tmp_path, *argv, name="out.jsonl"):
    out = tmp_path / name
    status = cmd_dispatch(list(argv) + ["--out", str(out)])
    lines = out.read_text().splitlines() if out.exists() else []
    return status, [json.loads(x) for x in lines], lines


def test_count_example(tmp_path):
    status, recs, _ = run(tmp_path, "count", "--q", "3", "--N", "1", "--eq", "1,1,1", "--set", "0,1")
    assert status == 0
    header, rec = recs
    assert header["type"] == "header" and "timestamp" in header
    assert rec["raw"] == 2 and rec["lambda"] == "2/9"
    assert rec["config_hash"] == header["config_hash"]
    assert header["config"]["eq"] == "1,1,1"


def test_verify_parseval(tmp_path):
    status, recs, _ = run(tmp_path, "verify", "--suite", "parseval", "--q", "2", "--N", "8",
                          "--trials", "50")
    assert status == 0
    assert recs[-1]["ok"] and recs[-1]["max_error"] <= 1e-9


@pytest.mark.parametrize("suite", ["naive", "convolution", "dilation", "chang", "counting"])
def test_verify_suites(tmp_path, suite):
    status, recs, _ = run(tmp_path, "verify", "--suite", suite, "--q", "3", "--N", "3",
                          "--trials", "5")
    assert status == 0 and recs[-1]["ok"]


def test_verification_failure_exit_code(tmp_path):
    status, recs, _ = run(tmp_path, "verify", "--suite", "parseval", "--q", "3", "--N", "4",
                          "--trials", "3", "--tol", "1e-300")
    assert status == 1
    assert not recs[-1]["ok"]


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    [],
    ["count", "--q", "3", "--eq", "1,1,1", "--set", "0"],
    ["count", "--q", "3", "--N", "1", "--eq", "1,1,1", "--set", "0,7"],
    ["count", "--q", "6", "--N", "1", "--eq", "1,1,1", "--set", "0"],
    ["verify", "--q", "2", "--N", "2"],
    ["increment", "--q", "3", "--N", "4", "--eq", "1,1,1", "--tune", "bogus=1"],
])
def test_usage_errors_exit_2(tmp_path, argv, capsys):
    assert cmd_dispatch(argv + ["--out", str(tmp_path / "x.jsonl")] if argv else argv) == 2
    assert "usage error" in capsys.readouterr().err


def test_transform_and_bohr(tmp_path):
    status, recs, _ = run(tmp_path, "transform", "--q", "2", "--N", "4", "--set", "0,1,01,11")
    assert status == 0
    spec = [r for r in recs if r["type"] != "header"]
    assert spec
    status, recs, _ = run(tmp_path, "bohr", "--q", "3", "--N", "3", "--gamma", "001",
                          "--kappa", "1", "--dilate", "01", "--list", name="b.jsonl")
    assert status == 0
    sizes = [r["size"] for r in recs if "size" in r]
    assert sizes and sizes[0] == 9


def test_search_and_store(tmp_path):
    store = tmp_path / "records.txt"
    status, recs, _ = run(tmp_path, "search", "--q", "3", "--N", "2", "--eq", "1,1,1",
                          "--mode", "exhaustive", "--store", str(store))
    assert status == 0 and recs[-1]["size"] == 4 and recs[-1]["certified"]
    assert store.read_text().startswith("3 2 1,1,1 4 exhaustive 1")


def test_znz_actions(tmp_path):
    status, recs, _ = run(tmp_path, "znz", "--N", "10", "--gammas", "1", "--rho", "1.0",
                          "--action", "build")
    assert status == 0 and recs[-1]["members"] == [0, 1, 9]
    status, recs, _ = run(tmp_path, "znz", "--N", "200", "--gammas", "1,7", "--rho", "0.8",
                          "--action", "identity", name="z.jsonl")
    assert status == 0
    assert recs[1]["regular"] and 0.5 <= recs[1]["eps"] < 1
    assert recs[2]["type"] == "znz-identity"


def test_increment_runs(tmp_path):
    status, recs, _ = run(tmp_path, "increment", "--q", "3", "--N", "4", "--eq", "1,1,1")
    assert status == 0
    term = recs[-1]
    assert term["type"] == "terminal" and term["invariants"]["ok"]


def test_config_text_round_trip():
    cfg = parse_args(["increment", "--q", "3", "--N", "4", "--eq", "1,1,1", "--seed", "7",
                      "--tune", "C_chang=4"])
    back = ExperimentConfig.from_text(cfg.to_text())
    assert back.resolved() == cfg.resolved()
    assert back.digest() == cfg.digest()


def test_config_file_matches_flags(tmp_path):
    argv = ["search", "--q", "3", "--N", "2", "--eq", "1,1,1", "--budget", "5", "--seed", "3"]
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(parse_args(argv).to_text())
    _, _, a = run(tmp_path, *argv, name="a.jsonl")
    _, _, b = run(tmp_path, "search", "--config", str(cfg_path), name="b.jsonl")
    assert a[1:] == b[1:]
    # explicit flags override the file
    cfg = parse_args(["search", "--config", str(cfg_path), "--seed", "9"])
    assert cfg.seed == 9 and cfg.budget == 5


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("subcommand = search\nno equals sign\n")
    with pytest.raises(UsageError):
        parse_args(["search", "--config", str(bad)])
    other = tmp_path / "other.cfg"
    other.write_text("subcommand = count\n")
    with pytest.raises(UsageError):
        parse_args(["search", "--config", str(other)])


@pytest.mark.parametrize("argv", [
    ["increment", "--q", "3", "--N", "4", "--eq", "1,1,1", "--seed", "2"],
    ["search", "--q", "3", "--N", "2", "--eq", "1,1,1", "--budget", "10", "--seed", "4"],
    ["transform", "--q", "3", "--N", "3", "--seed", "1"],
])
def test_deterministic_records(tmp_path, argv):
    _, _, a = run(tmp_path, *argv, name="a.jsonl")
    _, _, b = run(tmp_path, *argv, name="b.jsonl")
    assert a[1:] == b[1:] and len(a) > 1


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FQADDITIVE_OUTPUT_DIR", str(tmp_path))
    assert cmd_dispatch(["count", "--q", "3", "--N", "1", "--eq", "1,1,1", "--set", "0,1"]) == 0
    lines = (tmp_path / "count.jsonl").read_text().splitlines()
    assert json.loads(lines[1])["raw"] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fqadditive", "count", "--q", "3", "--N", "1",
                           "--eq", "1,1,1", "--set", "0,1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout.splitlines()[1])["raw"] == 2
