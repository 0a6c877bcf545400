import io
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ekmtail import CensoredSample, SelectionConfig
from ekmtail.io import (
    ClaimRecord,
    IngestError,
    dump_json,
    fmt,
    ingest_csv,
    ingest_text,
    records_to_sample,
    write_sample_csv,
)
from ekmtail.windows import WindowSpec, run_window


def test_ingest_examples():
    recs = ingest_text("z,delta\n2.5,1\n3.0,0\n")
    assert recs == [ClaimRecord(2.5, 1), ClaimRecord(3.0, 0)]
    with pytest.raises(IngestError) as err:
        ingest_text("z,delta\nabc,1\n")
    assert err.value.row == 2 and err.value.column == "z" and "row 2" in str(err.value)
    recs = ingest_text("amount,open,yr\n2.5,0,1994\n", z_col="amount", delta_col="open", year_col="yr")
    assert recs[0].year == 1994


@pytest.mark.parametrize(
    "text, row, column",
    [
        ("z,delta\n1,1\n-2,1\n", 3, "z"),
        ("z,delta\n1,2\n", 2, "delta"),
        ("z,delta\n1,1\n2\n", 3, None),
        ("z,delta\n1,1\nnan,1\n", 3, "z"),
        ("x,delta\n1,1\n", None, "z"),
    ],
)
def test_ingest_errors_carry_context(text, row, column):
    with pytest.raises(IngestError) as err:
        ingest_text(text)
    assert err.value.row == row and err.value.column == column


def test_ingest_rejects_empty_and_missing(tmp_path):
    with pytest.raises(IngestError):
        ingest_text("")
    with pytest.raises(IngestError):
        ingest_text("z,delta\n")
    with pytest.raises(FileNotFoundError):
        ingest_csv(tmp_path / "absent.csv")


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.integers(1, 50), elements=st.floats(1e-300, 1e300)), st.integers(0, 2**32 - 1))
def test_csv_round_trip_is_exact(z, seed):
    d = np.random.default_rng(seed).random(z.size) < 0.5
    sample = CensoredSample(z, d)
    buf = io.StringIO()
    write_sample_csv(buf, sample)
    back = records_to_sample(ingest_text(buf.getvalue()))
    assert np.array_equal(back.z, sample.z) and np.array_equal(back.delta, sample.delta)


def test_number_format():
    assert fmt(1 / 3) == "0.3333333333"
    assert fmt(123456789012.0) == "1.23456789e+11"
    assert fmt(None) == "" and fmt(float("nan")) == ""
    assert fmt(True) == "1" and fmt(np.int64(7)) == "7" and fmt("ks") == "ks"
    buf = io.StringIO()
    dump_json(buf, {"x": np.float64(np.pi), "v": np.arange(2), "flag": np.bool_(True)})
    assert buf.getvalue().startswith('{\n  "schema_version": "1"')
    assert '"x": 3.141592654' in buf.getvalue()


def test_window_counts():
    years = range(1992, 2008)
    assert len(WindowSpec("rolling", 4).windows(years)) == 12
    assert WindowSpec("rolling", 4).windows(years)[0] == (1992, 1996)
    assert WindowSpec("rolling", 4).windows(years)[-1] == (2003, 2007)
    grow = WindowSpec("growing", 4).windows(years)
    assert len(grow) == 12 and grow[0] == (1992, 1996) and grow[-1] == (1992, 2007)
    assert WindowSpec("rolling", 4, 1992, 1992).windows() == []
    with pytest.raises(ValueError):
        WindowSpec("sliding")
    with pytest.raises(ValueError):
        WindowSpec("rolling", 0)
    with pytest.raises(ValueError):
        WindowSpec("rolling", 4, 2000, 1990)


def _records(n, years, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.pareto(2.0, n) + 1.0
    d = rng.random(n) < 0.7
    y = rng.choice(years, n)
    return [ClaimRecord(float(a), int(b), int(c)) for a, b, c in zip(z, d, y)]


def test_run_window_restricts_records():
    recs = _records(3000, np.arange(1992, 2008))
    rules = [SelectionConfig("rot"), SelectionConfig("ks", 1.75)]
    out = run_window(recs, WindowSpec("rolling", 4), rules)
    assert len(out) == 24
    first = [r for r in recs if 1992 <= r.year <= 1996]
    assert out[0].n == len(first) and out[0].k == int(0.2 * len(first))
    assert out[0].censoring_rate == pytest.approx(1 - np.mean([r.delta for r in first]))


def test_run_window_single_year_warns(caplog):
    recs = _records(200, [2001])
    with caplog.at_level(logging.WARNING):
        assert run_window(recs, WindowSpec("rolling", 4), [SelectionConfig("rot")]) == []
    assert "no complete" in caplog.text


def test_run_window_skips_empty_and_small(caplog):
    recs = _records(300, [1992, 1993]) + _records(5, [1999])
    with caplog.at_level(logging.WARNING):
        out = run_window(recs, WindowSpec("rolling", 1, 1992, 1999), [SelectionConfig("rot")])
    # a 1-year window spans [a, a + 1]
    assert [r.first_year for r in out] == [1992, 1993]
    assert "empty" in caplog.text and "skipped" in caplog.text
    with pytest.raises(ValueError):
        run_window([ClaimRecord(1.0, 1)], WindowSpec(), [SelectionConfig("rot")])
