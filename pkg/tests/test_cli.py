import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "ceopt.cli"]


def run_cli(*args):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, timeout=300
    )


def test_solve_chicken(games_dir, tmp_path):
    out = tmp_path / "sol.json"
    res = run_cli("solve", str(games_dir / "chicken.json"), "--concept", "ce", "--out", str(out))
    assert res.returncode == 0, res.stderr
    doc = json.loads(out.read_text())
    assert doc["value"] == pytest.approx(10.5, abs=1e-9)


def test_solve_writes_stdout(games_dir):
    res = run_cli("solve", str(games_dir / "pd.json"), "--concept", "maxmin")
    assert res.returncode == 0, res.stderr
    doc = json.loads(res.stdout)
    assert doc["value"] == pytest.approx(1.0, abs=1e-9)


def test_solve_verify_roundtrip(games_dir, tmp_path):
    for name in ("pd.json", "chicken.json", "tree4.json", "scg3.json"):
        out = tmp_path / f"{name}.sol"
        res = run_cli("solve", str(games_dir / name), "--concept", "ce", "--out", str(out))
        assert res.returncode == 0, (name, res.stderr)
        res = run_cli("verify", str(games_dir / name), str(out))
        assert res.returncode == 0, (name, res.stdout, res.stderr)


def test_solve_verify_roundtrip_other_concepts(games_dir, tmp_path):
    jobs = [
        ("pd.json", ["--concept", "maxmin"]),
        ("scg3.json", ["--concept", "cce", "--oracle", "scg-symmetric"]),
    ]
    for name, flags in jobs:
        out = tmp_path / f"{name}-{flags[1]}.sol"
        res = run_cli("solve", str(games_dir / name), *flags, "--out", str(out))
        assert res.returncode == 0, (name, res.stderr)
        res = run_cli("verify", str(games_dir / name), str(out))
        assert res.returncode == 0, (name, res.stdout, res.stderr)


def test_solve_with_weights(games_dir):
    res = run_cli(
        "solve", str(games_dir / "chicken.json"), "--concept", "ce",
        "--weights", "1,0",
    )
    assert res.returncode == 0, res.stderr
    doc = json.loads(res.stdout)
    assert doc["objective"]["weights"] == [1.0, 0.0]
    # player 0's best CE payoff in chicken: the full LP agrees
    res = run_cli(
        "solve", str(games_dir / "chicken.json"), "--concept", "ce",
        "--weights", "1,0", "--method", "full",
    )
    assert json.loads(res.stdout)["value"] == pytest.approx(doc["value"], abs=1e-6)
    res = run_cli("solve", str(games_dir / "chicken.json"), "--weights", "1,oops")
    assert res.returncode == 2


def test_verify_rejects_wrong_solution(games_dir, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps({"concept": "ce", "support": [{"profile": [0, 0], "p": 1.0}]})
    )
    res = run_cli("verify", str(games_dir / "pd.json"), str(bad))
    assert res.returncode == 1


def test_poa(games_dir):
    res = run_cli("poa", str(games_dir / "pd.json"), "--concept", "ce")
    assert res.returncode == 0, res.stderr
    assert json.loads(res.stdout)["ratio"] == pytest.approx(3.0, abs=1e-6)


def test_methods_agree_on_bundled_games(games_dir):
    for path in sorted(games_dir.glob("*.json")):
        values = {}
        for method in ("colgen", "full"):
            res = run_cli(
                "solve", str(path), "--concept", "ce", "--method", method
            )
            assert res.returncode == 0, (path.name, method, res.stderr)
            values[method] = json.loads(res.stdout)["value"]
        assert values["colgen"] == pytest.approx(values["full"], abs=1e-6), path.name


def test_scg_symmetric_matches_full(games_dir):
    res = run_cli(
        "solve", str(games_dir / "scg3.json"), "--concept", "cce",
        "--oracle", "scg-symmetric",
    )
    assert res.returncode == 0, res.stderr
    sym = json.loads(res.stdout)["value"]
    res = run_cli(
        "solve", str(games_dir / "scg3.json"), "--concept", "cce", "--method", "full"
    )
    full = json.loads(res.stdout)["value"]
    assert sym == pytest.approx(full, abs=1e-6)


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        res = run_cli(
            "gen", "--kind", "tree-polymatrix", "--seed", "7",
            "--players", "4", "--actions", "2", "--out", str(out),
        )
        assert res.returncode == 0, res.stderr
    assert a.read_bytes() == b.read_bytes()


def test_solve_deterministic(games_dir, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        res = run_cli(
            "solve", str(games_dir / "chicken.json"), "--concept", "cce",
            "--out", str(out),
        )
        assert res.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_exit_code_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("solve", str(bad)).returncode == 2
    schema = tmp_path / "schema.json"
    schema.write_text(json.dumps({"type": "mystery", "players": 1, "actions": [1]}))
    assert run_cli("solve", str(schema)).returncode == 2
    assert run_cli("solve", str(tmp_path / "missing.json")).returncode == 2


def test_exit_code_unsupported_oracle(games_dir):
    res = run_cli("solve", str(games_dir / "pd.json"), "--oracle", "tree")
    assert res.returncode == 2


def test_exit_code_nonconvergence(games_dir):
    res = run_cli(
        "solve", str(games_dir / "chicken.json"), "--max-iters", "1"
    )
    assert res.returncode == 3


def test_exit_code_resource_limit(games_dir):
    res = run_cli(
        "solve", str(games_dir / "chicken.json"), "--method", "full",
        "--profile-cap", "2",
    )
    assert res.returncode == 4


def test_exit_code_undefined_ratio(tmp_path):
    zero = tmp_path / "zero.json"
    zero.write_text(
        json.dumps(
            {"type": "normal_form", "players": 1, "actions": [1], "utilities": [[0.0]]}
        )
    )
    res = run_cli("poa", str(zero))
    assert res.returncode == 5
