"""Command-line contract: exit codes, help text, config handling, and
byte-identical reruns of seeded subcommands."""

import os
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"


def run_cli(args, cwd=None, env_extra=None):
    env = dict(os.environ)
    env["COLUMNS"] = "100"
    env.update(env_extra or {})
    return subprocess.run([sys.executable, "-m", "gkdvlab.cli", *args],
                          capture_output=True, text=True, cwd=cwd, env=env)


def test_help_golden():
    # Pinned: the top-level help plus every subcommand's full flag list.
    out = run_cli(["--help"])
    assert out.returncode == 0
    golden = (GOLDEN / "help.txt").read_text()
    assert out.stdout.strip() == golden.split("=" * 72)[0].strip()


def test_help_golden_subcommands():
    golden = (GOLDEN / "help.txt").read_text()
    sections = [s.strip() for s in golden.split("=" * 72)][1:]
    subs = ["solve", "verify-symbols", "scan-N", "gn-check", "diff-check",
            "threshold", "globalize", "bench"]
    assert len(sections) == len(subs)
    for sub, section in zip(subs, sections):
        out = run_cli([sub, "--help"])
        assert out.returncode == 0
        assert out.stdout.strip() == section


@pytest.mark.parametrize("sub", ["solve", "verify-symbols", "scan-N", "gn-check",
                                 "diff-check", "threshold", "globalize", "bench"])
def test_subcommand_help_lists_flags(sub):
    out = run_cli([sub, "--help"])
    assert out.returncode == 0
    assert "--out" in out.stdout


def test_threshold_prints_root():
    out = run_cli(["threshold"])
    assert out.returncode == 0
    assert "6/13" in out.stdout
    assert "3/5" in out.stdout


def test_invalid_dt_exit_1():
    out = run_cli(["solve", "--dt", "0", "--t-end", "0.001"])
    assert out.returncode == 1
    assert "dt" in out.stderr


def test_unknown_config_key_exit_1():
    out = run_cli(["threshold", "--set", "grid.bogus=1"])
    assert out.returncode == 1
    assert "grid.bogus" in out.stderr


def test_missing_seed_rejected():
    out = run_cli(["gn-check"])
    assert out.returncode == 2  # argparse missing-required exit code
    assert "--seed" in out.stderr


def test_blowup_exit_2(tmp_path):
    out = run_cli(["solve", "--profile", "gaussian", "--amplitude", "5.0",
                   "--n", "256", "--L", "32", "--dt", "1e-4", "--t-end", "0.5",
                   "--mu", "-1", "--out", str(tmp_path),
                   "--set", "solver.blowup_cap=20"])
    # Focusing data far above the ground-state mass trips the cap.
    assert out.returncode == 2
    assert "blow-up" in out.stderr


def test_solve_soliton_writes_records(tmp_path):
    out = run_cli(["solve", "--profile", "soliton", "--t-end", "0.01",
                   "--dt", "1e-3", "--samples", "2", "--out", str(tmp_path)])
    assert out.returncode == 0, out.stderr
    assert (tmp_path / "solve.csv").exists()
    assert (tmp_path / "solve.json").exists()
    header = (tmp_path / "solve.csv").read_text().splitlines()[0]
    assert header == ("experiment,seed,s,N_index,lambda,t_window,e1_inc_sup,"
                      "e2_inc_sup,lam6_sup,h1_iu_sup,slope_e1,slope_e2,"
                      "guard_frac,wall_ms")


def test_verify_symbols_deterministic_bytes(tmp_path):
    args = ["verify-symbols", "--samples", "20000", "--seed", "7",
            "--N", "32,64", "--s", "0.5"]
    out1 = run_cli([*args, "--out", str(tmp_path / "a")])
    out2 = run_cli([*args, "--out", str(tmp_path / "b")])
    assert out1.returncode == 0, out1.stderr
    assert out2.returncode == 0, out2.stderr
    csv_a = (tmp_path / "a" / "verify_symbols.csv").read_bytes()
    csv_b = (tmp_path / "b" / "verify_symbols.csv").read_bytes()
    assert csv_a == csv_b


def test_verify_symbols_seed_changes_output(tmp_path):
    a = run_cli(["verify-symbols", "--samples", "5000", "--seed", "1",
                 "--N", "64", "--out", str(tmp_path / "a")])
    b = run_cli(["verify-symbols", "--samples", "5000", "--seed", "2",
                 "--N", "64", "--out", str(tmp_path / "b")])
    assert a.returncode == 0 and b.returncode == 0
    assert (tmp_path / "a" / "verify_symbols.csv").read_bytes() != \
        (tmp_path / "b" / "verify_symbols.csv").read_bytes()


def test_gn_check_cli(tmp_path):
    out = run_cli(["gn-check", "--samples", "20", "--seed", "3",
                   "--out", str(tmp_path)])
    assert out.returncode == 0, out.stderr
    assert "R(ground state)" in out.stdout
    assert (tmp_path / "gn_check.csv").exists()


def test_config_file_roundtrip(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[verify]\noctaves = 4\n\n[thresholds]\nk_much = 16\n")
    out = run_cli(["verify-symbols", "--samples", "2000", "--seed", "5",
                   "--N", "64", "--config", str(cfg), "--out", str(tmp_path)])
    assert out.returncode == 0, out.stderr


def test_config_file_unknown_section(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[nonsense]\nx = 1\n")
    out = run_cli(["threshold", "--config", str(cfg)])
    assert out.returncode == 1
    assert "nonsense" in out.stderr


def test_numpy_backend_smoke(tmp_path):
    out = run_cli(["verify-symbols", "--samples", "2000", "--seed", "5",
                   "--N", "64", "--out", str(tmp_path)],
                  env_extra={"GKDVLAB_KERNELS": "numpy"})
    assert out.returncode == 0, out.stderr
