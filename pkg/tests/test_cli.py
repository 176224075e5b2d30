import csv
import io

import pytest

from sgmixed import cli
from sgmixed.assembly import MaterialParams
from sgmixed.norms import rate_table

REFERENCE = [4.252e-02, 1.159e-02, 2.784e-03, 6.918e-04]
HS = [1 / 8, 1 / 16, 1 / 32, 1 / 64]


def test_lame_labels():
    assert cli.lame_label(MaterialParams(nu=0.3)) == "nu=0.3,lambda=0.5769,mu=0.3846"
    assert cli.lame_label(MaterialParams(nu=0.4999)) == "nu=0.4999,lambda=1.6664e3,mu=0.3334"


def test_csv_round_trip():
    t = rate_table(REFERENCE, HS, 1e-6)
    rows = list(csv.DictReader(io.StringIO(cli.emit_table(t, "csv"))))
    assert list(rows[0]) == ["iota", "h", "rel_error", "rate"]
    assert [float(r["rel_error"]) for r in rows] == REFERENCE
    assert [float(r["h"]) for r in rows] == HS
    assert rows[0]["rate"] == ""
    assert [round(float(r["rate"]), 2) for r in rows[1:]] == [1.88, 2.06, 2.01]


def test_markdown_table():
    t = rate_table(REFERENCE, HS, 1e-6, "nu=0.3")
    md = cli.emit_table(t, "markdown")
    body = [ln for ln in md.splitlines() if ln.startswith("| 0.")]
    assert len(body) == 4
    assert sum(1 for ln in body if not ln.endswith("|  |")) == 3
    assert "4.252e-02" in md and "1.88" in md
    with pytest.raises(ValueError):
        cli.emit_table(t, "xml")


@pytest.fixture(scope="module")
def small_result():
    cfg = cli.RunConfig(example=1, nus=(0.3, 0.4999), iotas=(1.0, 1e-6), levels=(4, 8))
    return cli.run_experiment(cfg)


def test_grid_layout(small_result):
    md = cli.emit_grid(small_result)
    lines = md.splitlines()
    assert lines[0] == "| iota \\ h | 1/4 | 1/8 |"
    errors = [ln for ln in lines if ln.startswith("| 1e")]
    rates = [ln for ln in lines if ln.startswith("| rate")]
    assert len(errors) == 4 and len(rates) == 4
    assert "lambda=1.6664e3" in md


def test_manifest_contents(small_result, tmp_path):
    written = cli.write_outputs(small_result, tmp_path)
    assert len(written) == 6
    man = dict(ln.split("=", 1) for ln in
               (tmp_path / "example1_manifest.txt").read_text().splitlines())
    for key in ("version", "backend", "example", "levels", "perturb", "seed",
                "mesh.n8.min_angle", "run.nu0.3.iota1.n8.solve.residual"):
        assert key in man
    assert float(man["run.nu0.3.iota1.n8.solve.residual"]) < 1e-8


def test_deterministic_output(small_result):
    again = cli.run_experiment(small_result.config)
    assert cli.emit_all(again, "csv") == cli.emit_all(small_result, "csv")


def test_main_zero_forcing(capsys):
    code = cli.main(["--example", "1", "--levels", "4", "8", "--nu", "0.3", "--iota", "1",
                     "--zero-forcing", "--format", "csv"])
    assert code == 0
    rows = [r for r in csv.reader(io.StringIO(capsys.readouterr().out))
            if r and not r[0].startswith("#") and r[0] != "iota"]
    assert [float(r[2]) for r in rows] == [0.0, 0.0]


def test_main_reports_failing_solve(monkeypatch, capsys):
    def boom(system):
        raise RuntimeError("factorization broke")
    monkeypatch.setattr(cli, "solve_saddle", boom)
    code = cli.main(["--example", "3", "--levels", "4", "--nu", "0.3", "--iota", "1e-4"])
    assert code != 0
    err = capsys.readouterr().err
    assert "nu=0.3" in err and "iota=0.0001" in err and "h=" in err


def test_invalid_arguments(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--example", "5"])
    assert cli.main(["--example", "1", "--nu", "0.5"]) == 1


def test_example3_warns_for_large_iota(caplog):
    cfg = cli.RunConfig(example=3, nus=(0.3,), iotas=(0.1,), levels=(4,))
    cli.run_experiment(cfg)
    assert any("iota << h" in r.message for r in caplog.records)
