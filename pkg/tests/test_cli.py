import csv
import io
import json
import subprocess
import sys

import pytest

from ekmtail import fixture_path
from ekmtail.cli import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from ekmtail.io import ingest_csv, records_to_sample, write_sample_csv

FIXTURE = str(fixture_path("pareto_fixture.csv"))
CLAIMS = str(fixture_path("claims_fixture.csv"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_select_rule_of_thumb_on_fixture(capsys):
    code, out, _ = run(capsys, "select", "--input", FIXTURE, "--rule", "rot")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["schema_version"] == "1"
    assert doc["n"] == 2000 and doc["k_selected"] == 400 and doc["used_fallback"] is False


@pytest.mark.parametrize("rule, L, column", [("ks", "1.75", "ks"), ("cvm", "0.5", "cvm"), ("ks", "0.3", "ks")])
def test_gof_curve_and_select_agree(capsys, rule, L, column):
    code, out, _ = run(capsys, "gof-curve", "--input", FIXTURE, "--k-min", "20")
    assert code == EXIT_OK
    rows = read_csv(out)
    assert rows[0]["k"] == "20" and rows[-1]["k"] == "1000"
    hits = [int(r["k"]) for r in rows if float(r[column]) < float(L)]
    code, out, _ = run(capsys, "select", "--input", FIXTURE, "--rule", rule, "--L", L)
    doc = json.loads(out)
    if hits:
        assert doc["k_selected"] == max(hits) and not doc["used_fallback"]
    else:
        assert doc["used_fallback"] and doc["k_selected"] == 400


def test_select_trace_and_bounds(capsys):
    code, out, _ = run(capsys, "select", "--input", FIXTURE, "--rule", "cvm", "--L", "0.01",
                       "--k-min", "50", "--k-max", "300", "--k-step", "10", "--trace")
    doc = json.loads(out)
    assert code == EXIT_OK and [t["k"] for t in doc["trace"]] == list(range(300, 49, -10))


def test_estimate_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "estimate", "--input", FIXTURE, "--k", "100", "--ena")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["k"] == 100
    assert len(doc["ekm"]["x"]) == len(doc["ekm"]["F"]) == len(doc["ena"]["x"])
    target = tmp_path / "est.csv"
    code, _, _ = run(capsys, "estimate", "--input", FIXTURE, "--k", "100", "--format", "csv", "-o", str(target))
    lines = target.read_text().splitlines()
    assert lines[0].startswith("# k=100") and lines[1] == "x,F"


def test_simulate_limit_is_seeded(capsys, tmp_path):
    args = ("simulate-limit", "--p", "0.75", "--paths", "300", "--grid", "200", "--seed", "4")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and read_csv(a)[2]["quantile"] == "0.95"
    samples = tmp_path / "s.csv"
    run(capsys, *args, "--samples", str(samples))
    assert len(samples.read_text().splitlines()) == 301


def test_mc_commands(capsys):
    cfg = str(fixture_path("burr_table_small.json"))
    code, out, _ = run(capsys, "mc-table", "--config", cfg, "--reps", "4")
    rows = read_csv(out)
    assert code == EXIT_OK and [r["rule"] for r in rows] == ["rot", "ks", "cvm", "ks", "cvm", "ks", "cvm"]
    assert rows[0]["L"] == "" and rows[1]["L"] == "1.5" and rows[0]["reps"] == "4"
    _, again, _ = run(capsys, "mc-table", "--config", cfg, "--reps", "4", "--threads", "2")
    assert again == out
    _, other, _ = run(capsys, "mc-table", "--config", cfg, "--reps", "4", "--seed", "1")
    assert other != out
    code, out, _ = run(capsys, "mc-curves", "--config", str(fixture_path("pareto_curves.json")), "--reps", "2")
    rows = read_csv(out)
    assert code == EXIT_OK and {r["n"] for r in rows} == {"1000", "10000"}


def test_window_command(capsys):
    code, out, _ = run(capsys, "window", "--input", CLAIMS, "--mode", "growing", "--years", "4")
    rows = read_csv(out)
    assert code == EXIT_OK and len(rows) == 36
    assert rows[-1]["first_year"] == "1992" and rows[-1]["last_year"] == "2007"
    assert {r["rule"] for r in rows} == {"rot", "ks", "cvm"}


def test_generate_round_trip(capsys, tmp_path):
    target = tmp_path / "g.csv"
    code, _, _ = run(capsys, "generate", "--n", "500", "--seed", "3", "--years", "2000-2003", "-o", str(target))
    recs = ingest_csv(target, year_col="year")
    assert code == EXIT_OK and len(recs) == 500 and {r.year for r in recs} <= set(range(2000, 2004))


def test_fixture_csv_round_trip_is_exact():
    sample = records_to_sample(ingest_csv(FIXTURE))
    buf = io.StringIO()
    write_sample_csv(buf, sample)
    assert buf.getvalue() == open(FIXTURE).read()


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "select", "--input", str(tmp_path / "none.csv"), "--rule", "rot")[0] == EXIT_IO
    bad = tmp_path / "bad.csv"
    bad.write_text("z,delta\n1.0,1\nabc,0\n")
    code, _, err = run(capsys, "select", "--input", str(bad), "--rule", "rot")
    assert code == EXIT_IO and "row 3" in err
    assert run(capsys, "select", "--input", FIXTURE, "--rule", "ks")[0] == EXIT_USAGE
    assert run(capsys, "estimate", "--input", FIXTURE, "--k", "5000")[0] == EXIT_NUMERIC
    assert run(capsys, "simulate-limit", "--p", "1.5")[0] == EXIT_NUMERIC
    for argv in (["bogus"], ["select", "--input", FIXTURE, "--rule", "hill"], ["select", "--unknown"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == EXIT_USAGE
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert run(capsys, "mc-table", "--config", str(cfg))[0] == EXIT_IO


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ekmtail.cli", "select", "--input", FIXTURE, "--rule", "rot"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["k_selected"] == 400
