"""CLI surface tests: parsing, formats, exit codes, config, determinism."""

import csv
import json

import pytest

from xilab import cli


def run(argv):
    return cli.main(argv)


def test_parse_complex():
    assert cli.parse_complex("1+0i") == 1.0
    assert cli.parse_complex("0.3+12i") == 0.3 + 12.0j
    assert cli.parse_complex("-2i") == -2.0j
    assert cli.parse_complex("0.5") == 0.5
    with pytest.raises(cli.UsageError):
        cli.parse_complex("bogus")


def test_parse_region():
    assert cli.parse_region("0:1:0:100") == (0.0, 1.0, 0.0, 100.0)
    with pytest.raises(cli.UsageError):
        cli.parse_region("0:1:2")
    with pytest.raises(cli.UsageError):
        cli.parse_region("a:b:c:d")


def test_eval_ok(capsys):
    assert run(["eval", "--z", "1+0i"]) == 0
    out = capsys.readouterr().out
    assert "via_G" in out and "oracle_xi" in out


def test_eval_near_zero(capsys):
    assert run(["eval", "--z", "0+28.2694502i"]) == 0
    out = capsys.readouterr().out
    mod = float(out.strip().splitlines()[-1].split("=")[1])
    assert mod < 1e-8


def test_eval_bad_z():
    assert run(["eval", "--z", "bogus"]) == 2


def test_zeros_csv(tmp_path):
    out = tmp_path / "zeros.csv"
    assert run(["zeros", "--y-max", "100", "--out", str(out),
                "--no-plot"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10
    assert all(r["simple"] == "True" for r in rows)
    assert abs(float(rows[0]["y"]) - 28.2694502835) < 1e-5


def test_zeros_empty_below_first(tmp_path):
    out = tmp_path / "zeros.csv"
    assert run(["zeros", "--y-max", "20", "--out", str(out),
                "--no-plot"]) == 0
    assert len(list(csv.DictReader(out.open()))) == 0


def test_zeros_json_parity(tmp_path):
    out = tmp_path / "zeros.json"
    assert run(["zeros", "--y-max", "100", "--format", "json",
                "--out", str(out), "--no-plot"]) == 0
    data = json.loads(out.read_text())
    assert len(data) == 10


def test_zeros_plot_emitted(tmp_path):
    out = tmp_path / "zeros.csv"
    assert run(["zeros", "--y-max", "35", "--out", str(out)]) == 0
    assert (tmp_path / "zeros.png").stat().st_size > 0


def test_zeros_y_max_limit():
    assert run(["zeros", "--y-max", "2000"]) == 2


def test_pq_header_and_values(tmp_path):
    out = tmp_path / "pq.csv"
    assert run(["pq", "--y", "30,100", "--out", str(out), "--no-plot"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "y,p,q,diff,scaled_p"
    row = dict(zip(lines[0].split(","), lines[2].split(",")))
    assert abs(float(row["scaled_p"]) - 1.0) <= 0.05


def test_pq_below_floor():
    assert run(["pq", "--y", "3"]) == 2


def test_map_outputs(tmp_path):
    out = tmp_path / "mapdir"
    assert run(["map", "--region", "0.05:1:25:45", "--nx", "16",
                "--ny", "40", "--out", str(out)]) == 0
    assert (out / "grid.csv").exists()
    assert (out / "curves.csv").exists()
    assert (out / "map.png").stat().st_size > 0
    report = json.loads((out / "anomalies.json").read_text())
    assert report["joins"] == [] and report["bifurcations"] == []
    curve_ids = {r["curve_id"] for r in csv.DictReader((out / "curves.csv").open())}
    assert len(curve_ids) >= 1


def test_map_degenerate(tmp_path):
    out = tmp_path / "tiny"
    assert run(["map", "--region", "0.4:0.6:10:11", "--nx", "2",
                "--ny", "2", "--out", str(out), "--no-plot"]) == 0
    assert len((out / "grid.csv").read_text().splitlines()) == 5


def test_io_error_exit():
    assert run(["zeros", "--y-max", "30", "--no-plot",
                "--out", "/nonexistent/dir/z.csv"]) == 4


def test_bad_tol():
    assert run(["eval", "--z", "1+0i", "--tol", "1.0"]) == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"y_max": 30.0, "format": "json"}))
    out = tmp_path / "z.json"
    assert run(["zeros", "--config", str(cfg), "--out", str(out),
                "--no-plot"]) == 0
    data = json.loads(out.read_text())
    assert len(data) == 1  # only the first zero lies below 30


def test_config_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"y_max": 100.0}))
    out = tmp_path / "z.csv"
    assert run(["zeros", "--config", str(cfg), "--y-max", "20",
                "--out", str(out), "--no-plot"]) == 0
    assert len(list(csv.DictReader(out.open()))) == 0


def test_env_threads(tmp_path, monkeypatch):
    monkeypatch.setenv("XILAB_THREADS", "2")
    out = tmp_path / "z.csv"
    assert run(["zeros", "--y-max", "60", "--out", str(out),
                "--no-plot"]) == 0
    monkeypatch.setenv("XILAB_THREADS", "junk")
    assert run(["zeros", "--y-max", "30", "--no-plot"]) == 2


def test_oracle_compare(tmp_path):
    out = tmp_path / "oc.csv"
    assert run(["oracle-compare", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 20
    assert all(float(r["dGO"]) < 1e-9 for r in rows)


def test_kernel_table(tmp_path):
    out = tmp_path / "kernel.csv"
    assert run(["kernel", "--out", str(out), "--no-plot"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 251
    mid = rows[len(rows) // 2]
    assert float(mid["G"]) > 0.0


def test_byte_determinism_across_threads(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(["zeros", "--y-max", "60", "--threads", "1",
                "--out", str(a), "--no-plot"]) == 0
    assert run(["zeros", "--y-max", "60", "--threads", "2",
                "--out", str(b), "--no-plot"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_quick(tmp_path, capsys):
    out = tmp_path / "verify.json"
    assert run(["verify", "--quick", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    names = [c["name"] for c in report["checks"]]
    assert "F_prime_zero_is_minus_half" in names
