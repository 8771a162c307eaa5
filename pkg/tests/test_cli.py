import re

import pytest

from ndnoma.cli import main
from ndnoma.harness import CSV_HEADER, read_csv


def test_point_prints_table(capsys):
    rc = main(["point", "--scheme", "uplink-ndnoma", "--k-db", "10",
               "--n", "100", "--delta-db", "0", "--bits", "10000",
               "--j-points", "2000", "--seed", "9"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == CSV_HEADER
    assert len(out) == 3  # one row per user at the single point
    assert out[1].startswith("uplink-ndnoma,u1,")


def test_sweep_writes_csv(tmp_path, capsys):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(
        "scheme = oma-noisemod\nk_db_list = 0\nn_list = 50\n"
        "delta_db_grid = 0\nbits_per_point = 10000\nj_points = 2000\n"
        "master_seed = 3\n")
    out = tmp_path / "rows.csv"
    rc = main(["sweep", str(cfg), "--out", str(out)])
    assert rc == 0
    rows = read_csv(str(out))
    assert len(rows) == 2
    assert {r.user for r in rows} == {"u1", "u2"}


def test_sweep_missing_config_exits_2(tmp_path, capsys):
    rc = main(["sweep", str(tmp_path / "missing.cfg"), "--out",
               str(tmp_path / "x.csv")])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_sweep_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("scheme = uplink-ndnoma\nnonsense_key = 1\n")
    rc = main(["sweep", str(cfg), "--out", str(tmp_path / "x.csv")])
    assert rc == 2


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["point", "--scheme", "uplink-ndnoma", "--frobnicate", "1"])
    assert exc.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["render"])
    assert exc.value.code == 2


def test_selftest_determinism_twice_identical_digests(capsys):
    assert main(["selftest-determinism"]) == 0
    first = capsys.readouterr().out
    assert main(["selftest-determinism"]) == 0
    second = capsys.readouterr().out
    digests_a = re.findall(r"sha256 ([0-9a-f]{64})", first)
    digests_b = re.findall(r"sha256 ([0-9a-f]{64})", second)
    assert len(digests_a) == 3
    assert len(set(digests_a)) == 1
    assert digests_a == digests_b


def test_validate_passes(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.count("PASS") >= 6
