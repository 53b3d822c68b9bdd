import json
import os
import subprocess
import sys

import pytest
from filelock import FileLock

from hamming_harmonic import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_int_list():
    assert cli.parse_int_list("2,3") == [2, 3]
    assert cli.parse_int_list("3..8") == [3, 4, 5, 6, 7, 8]
    assert cli.parse_int_list("2..10:4") == [2, 6, 10]
    assert cli.parse_int_list("16..256:*2") == [16, 32, 64, 128, 256]
    for bad in ("", "a", "1..x", "2..9:0"):
        with pytest.raises(cli.UsageError):
            cli.parse_int_list(bad)


def test_parse_thresholds():
    assert cli.parse_thresholds(["norms=2.5", "decay=1"]) == {"norms": 2.5, "decay": 1.0}
    with pytest.raises(cli.UsageError):
        cli.parse_thresholds(["nope=1"])
    with pytest.raises(cli.UsageError):
        cli.parse_thresholds(["norms"])


def test_verify_decay_writes_csv_and_manifest(tmp_path, capsys):
    code, out, _ = run(["verify", "decay", "--m", "2,3", "--n", "16..64:*2", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert out.startswith("decay: PASS")
    csv = (tmp_path / "decay" / "decay.csv").read_text().splitlines()
    assert csv[0].startswith("m,N,d_min")
    assert len(csv) == 1 + 2 * 3
    assert (tmp_path / "decay" / "decay.plt").exists()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["suite"] == "decay"
    assert "version" in manifest and manifest["wall_time_s"] >= 0
    assert manifest["outputs"][0]["verdict"] == "pass"


def test_verify_oracle_small(tmp_path, capsys):
    code, out, _ = run(["verify", "oracle", "--m", "2", "--n", "3..5", "--out", str(tmp_path)], capsys)
    assert code == 0 and "oracle: PASS" in out


def test_failing_certificate_exits_one(tmp_path, capsys):
    code, out, _ = run(["verify", "dominant", "--m", "2", "--n", "2..20", "--threshold", "dominant=1.0",
                        "--out", str(tmp_path)], capsys)
    assert code == 1
    assert "dominant: FAIL" in out and "first failure" in out


def test_unknown_suite_is_usage_error(tmp_path, capsys):
    code, _, err = run(["verify", "bogus", "--out", str(tmp_path)], capsys)
    assert code == 2 and "unknown suite" in err


def test_bad_range_is_usage_error(capsys):
    code, _, err = run(["verify", "decay", "--n", "1..x", "--dry-run"], capsys)
    assert code == 2


def test_dry_run_prints_grid_without_outputs(tmp_path, capsys):
    code, out, _ = run(["verify", "all", "--dry-run", "--out", str(tmp_path / "x")], capsys)
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert [d["suite"] for d in lines] == list(cli.SUITES)
    assert not (tmp_path / "x").exists()
    code, out, _ = run(["eval", "M", "--m", "2", "--n", "4", "--dry-run"], capsys)
    assert code == 0 and json.loads(out)["op"] == "M"


def test_eval_builtin_inputs(tmp_path, capsys):
    code, out, _ = run(["eval", "MSL", "--m", "2", "--n", "6", "--input", "ball:2", "--out", str(tmp_path)], capsys)
    assert code == 0
    text = (tmp_path / "eval" / "MSL.csv").read_text().splitlines()
    assert text[0] == "r,num,den" and len(text) == 8
    code, _, _ = run(["eval", "Sstar:1/2:1", "--m", "2", "--n", "6", "--input", "delta", "--out", str(tmp_path)],
                     capsys)
    assert code == 0
    assert (tmp_path / "eval" / "Sstar_1_2_1.csv").read_text().startswith("r,value\n0,1.0")
    code, _, _ = run(["eval", "M", "--m", "2", "--n", "5", "--input", "uniform", "--out", str(tmp_path)], capsys)
    lines = (tmp_path / "eval" / "M.csv").read_text().splitlines()[1:]
    assert all(line.endswith(",1,1") for line in lines)


def test_eval_from_file_and_malformed(tmp_path, capsys):
    good = tmp_path / "f.csv"
    good.write_text("r,value\n0,1.0\n1,0.5\n2,0.25\n3,0\n")
    code, _, _ = run(["eval", "Rt:1", "--m", "2", "--n", "3", "--input", str(good), "--out", str(tmp_path)], capsys)
    assert code == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("r,value\n0,1.0\n1,oops\n2,0\n3,0\n")
    code, _, err = run(["eval", "M", "--m", "2", "--n", "3", "--input", str(bad), "--out", str(tmp_path)], capsys)
    assert code == 2 and "row 3" in err
    code, _, err = run(["eval", "M", "--m", "2", "--n", "3", "--input", "nofile", "--out", str(tmp_path)], capsys)
    assert code == 2


def test_eval_unknown_operator(tmp_path, capsys):
    code, _, _ = run(["eval", "Q", "--m", "2", "--n", "3", "--out", str(tmp_path)], capsys)
    assert code == 2


def test_table_commands(tmp_path, capsys):
    code, out, _ = run(["table", "bweights", "--m", "2", "--k", "2", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert out.splitlines()[1:] == ["2,2,0,1,4", "2,2,1,1,2", "2,2,2,1,4"]
    code, out, _ = run(["table", "krawtchouk", "--m", "2", "--n", "4", "--out", str(tmp_path)], capsys)
    assert code == 0 and "2,4,2,2,-1,8" in out
    code, out, _ = run(["table", "summand", "--m", "2", "--n", "4", "--r", "2", "--k", "2", "--out", str(tmp_path)],
                       capsys)
    assert code == 0 and out.splitlines()[1].endswith(",0,1/6")
    code, _, err = run(["table", "krawtchouk", "--m", "2", "--n", "300", "--out", str(tmp_path)], capsys)
    assert code == 2 and "float" in err
    code, out, _ = run(["table", "krawtchouk", "--m", "2", "--n", "300", "--precision", "float",
                        "--out", str(tmp_path)], capsys)
    assert code == 0


def test_locked_output_directory(tmp_path, capsys):
    with FileLock(os.path.join(tmp_path, ".lock")):
        code, _, err = run(["verify", "reparam", "--out", str(tmp_path)], capsys)
    assert code == 2 and "in use" in err


def test_svg_output(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    code, _, _ = run(["verify", "decay", "--m", "2", "--n", "8..32:*2", "--svg", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert (tmp_path / "decay" / "decay.svg").read_text().lstrip().startswith("<?xml")


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "hamming_harmonic.cli", "verify", "reparam", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("reparam: PASS")
