import csv
import json
import math
import subprocess
import sys

import pytest

from gaussrace.cli import main, parse_count


def run_cli(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_count_scientific():
    assert parse_count("1e5") == 100_000
    assert parse_count("250") == 250
    with pytest.raises(Exception):
        parse_count("1.5e0")


def test_race_outputs(tmp_path):
    assert run_cli("race", "--limit", "1e5", "--out-dir", tmp_path) == 0
    rows = read_csv(tmp_path / "race.csv")
    assert rows and list(rows[0]) == ["x", "D1", "D2", "E_phi1", "F_phi2"]
    xs = [int(r["x"]) for r in rows]
    assert xs == sorted(xs) and len(set(xs)) == len(xs)
    # geometric grid starts at 100; earlier rows are exact sign-change events
    assert 100 in xs and xs[-1] <= 10**5
    # D2 stays non-negative at this scale and the E/F identities hold to
    # the 9-significant-digit precision of the file
    for r in rows:
        x, d1, d2 = int(r["x"]), int(r["D1"]), int(r["D2"])
        assert d2 >= 0
        scale = math.log(x) / math.sqrt(x)
        assert float(r["E_phi1"]) == pytest.approx(scale * d1, abs=1e-8 * max(1, abs(d1)))
        assert float(r["F_phi2"]) == pytest.approx(scale * d2, abs=1e-8 * max(1, abs(d2)))
    changes = read_csv(tmp_path / "signchanges.csv")
    assert {c["function"] for c in changes} <= {"D1", "D2"}
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "race"
    assert manifest["split_primes"] > 0 and manifest["version"]


def test_race_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_cli("race", "--limit", "2e4", "--out-dir", out1)
    run_cli("race", "--limit", "2e4", "--out-dir", out2)
    assert (out1 / "race.csv").read_bytes() == (out2 / "race.csv").read_bytes()
    assert (out1 / "signchanges.csv").read_bytes() == (out2 / "signchanges.csv").read_bytes()


def test_race_prefix_property(tmp_path):
    small, big = tmp_path / "s", tmp_path / "b"
    run_cli("race", "--limit", "1e5", "--out-dir", small)
    run_cli("race", "--limit", "2e5", "--out-dir", big)
    small_rows = (small / "race.csv").read_text().splitlines()
    big_rows = (big / "race.csv").read_text().splitlines()
    prefix = [ln for ln in big_rows[1:] if int(ln.split(",")[0]) <= 10**5]
    assert small_rows[1:] == prefix


def test_race_rejects_small_limit(tmp_path, capsys):
    assert run_cli("race", "--limit", "50", "--out-dir", tmp_path) == 1


def test_cli_bad_usage_exits_1():
    with pytest.raises(SystemExit) as exc:
        main(["race", "--limit", "abc"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1


def test_hist_outputs(tmp_path):
    assert run_cli("hist", "--limit", "1e5", "--out-dir", tmp_path) == 0
    for name in ("hist.csv", "hist_tilde.csv"):
        rows = read_csv(tmp_path / name)
        assert len(rows) == 200
        assert list(rows[0]) == ["bin_center", "count", "deviation", "prediction"]
        total = sum(int(r["count"]) for r in rows)
        assert total == 4783  # pi(1e5; 4, 1)
    # prediction column carries the secondary term
    rows = read_csv(tmp_path / "hist.csv")
    c0 = float(rows[0]["bin_center"])
    assert float(rows[0]["prediction"]) == pytest.approx(
        math.cos(c0) / math.cos(2 * c0) - 0.5, rel=1e-6)


def test_decompose_outputs(tmp_path):
    assert run_cli("decompose", "--limit", "1e4", "--out-dir", tmp_path) == 0
    rows = read_csv(tmp_path / "angles.csv")
    assert list(rows[0]) == ["p", "a", "two_b", "theta", "theta_tilde", "class8"]
    assert len(rows) == 609  # split primes below 1e4
    first = rows[0]
    assert first["p"] == "5" and first["a"] == "-1" and first["two_b"] == "2"
    assert first["theta"] == "2.03444394"  # 9 significant digits
    assert first["class8"] == "5"


def test_signs_cli(capsys):
    assert run_cli("signs", "--family", "xi", "--max-m", "16") == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "family,m,conductor_norm,W,ord_half,ord_one_second_moment"
    rows = [ln.split(",") for ln in out[1:]]
    assert len(rows) == 16
    negatives = [int(r[1]) for r in rows if r[3] == "-1"]
    assert negatives == [5, 7, 13, 15]


def test_signs_psi_starts_at_zero(capsys):
    run_cli("signs", "--family", "psi", "--max-m", "4")
    lines = capsys.readouterr().out.strip().splitlines()
    assert [ln.split(",")[1] for ln in lines[1:]] == ["0", "1", "2", "3", "4"]
    assert all(ln.split(",")[2] == "16" for ln in lines[1:])


def test_mean_cli(capsys):
    assert run_cli("mean", "--family", "xi", "--phi", "phi1", "--N", "1000") == 0
    out = capsys.readouterr().out
    value = float(out.splitlines()[0].split("=")[1])
    assert abs(value + 0.5) <= 8 / (1000 * math.pi)
    assert "integral_form=" in out


def test_mean_cli_divergent(capsys):
    assert run_cli("mean", "--family", "psi", "--phi", "phi2", "--N", "100") == 0
    out = capsys.readouterr().out
    assert "integral_form=divergent(+inf)" in out


def test_mean_cli_custom_phi(tmp_path, capsys):
    coeffs = tmp_path / "phi.csv"
    coeffs.write_text("m,c_m\n2,1.0\n")
    assert run_cli("mean", "--family", "xi", "--phi", coeffs, "--no-cross-check") == 0
    out = capsys.readouterr().out
    assert float(out.splitlines()[0].split("=")[1]) == pytest.approx(-0.5)


def test_dist_cli(tmp_path, capsys):
    zeros = tmp_path / "zeros.csv"
    lines = ["m,gamma,mult"] + [f"1,{6.0 + 3.1 * k:.4f},1" for k in range(20)]
    zeros.write_text("\n".join(lines) + "\n")
    rc = run_cli("dist", "--zeros", zeros, "--family", "xi", "--phi", "phi1",
                 "--N", "50", "--samples", "5000", "--out-dir", tmp_path)
    assert rc == 0
    out = capsys.readouterr().out
    assert "mean=" in out and "variance=" in out and "bias=" in out
    rows = read_csv(tmp_path / "dist.csv")
    assert list(rows[0]) == ["bin_lo", "bin_hi", "mass"]
    assert sum(float(r["mass"]) for r in rows) == pytest.approx(1.0, abs=1e-9)


def test_dist_missing_zeros_file_exits_2(tmp_path):
    rc = run_cli("dist", "--zeros", tmp_path / "nope.csv", "--family", "xi",
                 "--phi", "phi1", "--out-dir", tmp_path)
    assert rc == 2


def test_dist_invalid_zeros_exits_1(tmp_path):
    bad = tmp_path / "zeros.csv"
    bad.write_text("m,gamma,mult\n1,-3.0,1\n")
    rc = run_cli("dist", "--zeros", bad, "--family", "xi", "--phi", "phi1",
                 "--out-dir", tmp_path)
    assert rc == 1


def test_console_script_entrypoint(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gaussrace.cli", "signs", "--family", "xi", "--max-m", "3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "xi,1,8,1,0,1"
