import math
import subprocess
import sys

import numpy as np
import pytest

from kboot import load_image, load_kspace, shepp_logan
from kboot.cli import main, parse_angle


def run_cli(*args, cwd=None, env=None):
    return subprocess.run([sys.executable, "-m", "kboot", *map(str, args)],
                          capture_output=True, text=True, cwd=cwd, env=env)


def test_parse_angle():
    assert parse_angle("0.1pi") == pytest.approx(math.pi / 10)
    assert parse_angle("pi") == math.pi
    assert parse_angle("-0.5pi") == pytest.approx(-math.pi / 2)
    assert parse_angle("0.25") == 0.25
    with pytest.raises(ValueError):
        parse_angle("two pi")


def test_help_lists_commands_and_flags():
    top = run_cli("--help")
    assert top.returncode == 0
    for cmd in ("simulate", "correct", "evaluate", "propcheck"):
        assert cmd in top.stdout
    sim = run_cli("simulate", "--help")
    for flag in ("--phantom", "--motion", "--k0", "--delta-max", "--seed",
                 "--output", "--dump-trace", "--save-kspace", "--format"):
        assert flag in sim.stdout
    cor = run_cli("correct", "--help")
    for flag in ("--branches", "--accel", "--acs-frac", "--direction", "--recon",
                 "--lambda", "--iters", "--levels", "--dump-intermediates",
                 "--dump-masks"):
        assert flag in cor.stdout


def test_unknown_flag_fails():
    assert run_cli("simulate", "--bogus").returncode != 0
    assert run_cli("explode").returncode != 0


def test_simulate_zero_motion_identity(tmp_path):
    out = tmp_path / "c.png"
    r = run_cli("simulate", "--phantom", "shepp", "--size", "128",
                "--motion", "rigid", "--delta-max", "0", "--seed", "1",
                "--output", out)
    assert r.returncode == 0
    assert "psnr_db=inf" in r.stdout
    loaded = load_image(out)
    clean = shepp_logan(128)
    assert np.abs(loaded - clean).max() <= clean.max() / 65535


def test_simulate_periodic_boundary_beta_succeeds(tmp_path):
    out = tmp_path / "p.png"
    r = run_cli("simulate", "--phantom", "shepp", "--size", "64",
                "--motion", "periodic", "--delta", "10", "--alpha", "1",
                "--beta", "0", "--k0", "0.1pi", "--output", out)
    assert r.returncode == 0
    assert np.abs(load_image(out) - shepp_logan(64)).max() > 0.01


def test_simulate_reruns_byte_identical(tmp_path):
    args = ("simulate", "--phantom", "shepp", "--size", "64", "--motion", "rigid",
            "--delta-max", "8", "--seed", "3", "--dump-trace", tmp_path / "t.csv",
            "--save-kspace", tmp_path / "k.ksp", "--output", tmp_path / "a.png")
    r1 = run_cli(*args)
    blobs1 = [(tmp_path / n).read_bytes() for n in ("a.png", "a.png.meta", "t.csv", "k.ksp")]
    r2 = run_cli(*args)
    blobs2 = [(tmp_path / n).read_bytes() for n in ("a.png", "a.png.meta", "t.csv", "k.ksp")]
    assert r1.stdout == r2.stdout
    assert blobs1 == blobs2


def test_correct_single_full_branch_identity(tmp_path):
    clean = tmp_path / "clean.png"
    run_cli("simulate", "--phantom", "shepp", "--size", "64", "--motion", "rigid",
            "--delta-max", "0", "--output", clean)
    out = tmp_path / "fixed.png"
    r = run_cli("correct", "--input", clean, "--output", out, "--branches", "1",
                "--accel", "1", "--recon", "zf", "--reference", clean)
    assert r.returncode == 0
    a = load_image(clean)
    b = load_image(out)
    assert np.abs(a - b).max() <= 2 * a.max() / 65535
    assert "corrected psnr_db=" in r.stdout


def test_correct_dumps_and_kspace_input(tmp_path):
    ksp = tmp_path / "c.ksp"
    run_cli("simulate", "--phantom", "shepp", "--size", "64", "--motion", "rigid",
            "--delta-max", "6", "--seed", "2", "--save-kspace", ksp,
            "--output", tmp_path / "c.png")
    out = tmp_path / "fixed.png"
    inter = tmp_path / "branches"
    r = run_cli("correct", "--input-kspace", ksp, "--output", out,
                "--branches", "3", "--iters", "4", "--seed", "11",
                "--dump-masks", tmp_path / "m.txt", "--dump-intermediates", inter)
    assert r.returncode == 0
    masks = (tmp_path / "m.txt").read_text().splitlines()
    assert len(masks) == 3 and all(len(line) == 64 for line in masks)
    assert sorted(p.name for p in inter.iterdir()) == [
        "branch_01.png", "branch_01.png.meta", "branch_02.png",
        "branch_02.png.meta", "branch_03.png", "branch_03.png.meta", "masks.txt"]
    assert load_kspace(ksp).shape == (64, 64)


def test_correct_direction_flag(tmp_path):
    corr = tmp_path / "c.png"
    run_cli("simulate", "--phantom", "shepp", "--size", "64", "--motion", "rigid",
            "--delta-max", "6", "--seed", "2", "--output", corr)
    r_pe = run_cli("correct", "--input", corr, "--output", tmp_path / "pe.png",
                   "--branches", "2", "--iters", "3", "--direction", "pe")
    r_fe = run_cli("correct", "--input", corr, "--output", tmp_path / "fe.png",
                   "--branches", "2", "--iters", "3", "--direction", "fe")
    assert r_pe.returncode == 0 and r_fe.returncode == 0
    assert (tmp_path / "pe.png").read_bytes() != (tmp_path / "fe.png").read_bytes()


def test_evaluate_identical_dirs_all_ssim_one(tmp_path):
    ref = tmp_path / "ref"
    tst = tmp_path / "tst"
    ref.mkdir(), tst.mkdir()
    for d in (ref, tst):
        run_cli("simulate", "--phantom", "texture", "--size", "32", "--seed", "4",
                "--motion", "rigid", "--delta-max", "5", "--output", d / "x.png")
    r = run_cli("evaluate", "--reference-dir", ref, "--test-dir", tst)
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "file,psnr_db,ssim"
    name, psnr_s, ssim_s = lines[1].split(",")
    assert name == "x.png"
    assert psnr_s == "inf"
    assert float(ssim_s) == 1.0


def test_evaluate_mismatch_names_missing_file(tmp_path):
    ref = tmp_path / "ref"
    tst = tmp_path / "tst"
    ref.mkdir(), tst.mkdir()
    run_cli("simulate", "--phantom", "shepp", "--size", "32", "--motion", "rigid",
            "--delta-max", "0", "--output", ref / "only.png")
    r = run_cli("evaluate", "--reference-dir", ref, "--test-dir", tst)
    assert r.returncode != 0
    assert "only.png" in r.stderr


def test_evaluate_writes_csv_file(tmp_path):
    ref = tmp_path / "ref"
    ref.mkdir()
    run_cli("simulate", "--phantom", "shepp", "--size", "32", "--motion", "rigid",
            "--delta-max", "0", "--output", ref / "a.png")
    out = tmp_path / "scores.csv"
    r = run_cli("evaluate", "--reference-dir", ref, "--test-dir", ref, "--output", out)
    assert r.returncode == 0
    assert out.read_text().splitlines()[0] == "file,psnr_db,ssim"


def test_propcheck_passes_and_writes_rows(tmp_path):
    csv_path = tmp_path / "rows.csv"
    r = run_cli("propcheck", "--trials", "200", "--seed", "3", "--csv", csv_path)
    assert r.returncode == 0
    assert "all_hold=true" in r.stdout
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "lhs,rhs,holds"
    assert len(lines) == 201
    assert all(line.endswith("true") for line in lines[1:])


def test_config_file_preloads_defaults_and_flags_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sim settings\nphantom=shepp\nsize=48\nmotion=rigid\n"
                   "delta-max=0\nseed=9\n")
    out1 = tmp_path / "one.png"
    r = run_cli("simulate", "--config", cfg, "--output", out1)
    assert r.returncode == 0
    assert load_image(out1).shape == (48, 48)
    # explicit flag wins over the file value
    out2 = tmp_path / "two.png"
    r = run_cli("simulate", "--config", cfg, "--size", "32", "--output", out2)
    assert r.returncode == 0
    assert load_image(out2).shape == (32, 32)
    bad = tmp_path / "bad.cfg"
    bad.write_text("not-a-flag=1\n")
    assert run_cli("simulate", "--config", bad, "--phantom", "shepp",
                   "--output", tmp_path / "x.png").returncode != 0


def test_main_returns_error_code_for_missing_file():
    assert main(["correct", "--input", "/nonexistent.png", "--output", "/tmp/o.png"]) == 1
