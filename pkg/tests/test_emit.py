from __future__ import annotations

import json

import numpy as np
import pytest

from tlsho.emit import (
    Table,
    emit,
    format_csv,
    format_float,
    format_json,
    render,
    sidecar_path,
    write_output,
)


@pytest.fixture
def table():
    return Table(
        columns=("t", "P_numeric"),
        rows=[(0.0, 1.0), (0.5, np.float64(0.25))],
        metadata={"solver": "numeric", "epsilon": 0.0},
    )


def test_format_float():
    assert format_float(1.0) == "1.00000000000e+00"
    assert format_float(-0.125) == "-1.25000000000e-01"
    assert format_float(float("nan")) == "nan"
    assert format_float(float("-inf")) == "-inf"


def test_csv_layout(table):
    lines = format_csv(table, "abc123").splitlines()
    assert lines[0] == "# config_hash=abc123"
    assert lines[1] == "t,P_numeric"
    assert lines[2] == "0.00000000000e+00,1.00000000000e+00"
    assert lines[3] == "5.00000000000e-01,2.50000000000e-01"


def test_csv_cells_keep_integers_and_strings():
    text = format_csv(Table(("check", "n", "ok"), [("x_table", np.int64(3), True)]), "h")
    assert text.splitlines()[-1] == "x_table,3,true"


def test_json_is_sorted_and_parseable(table):
    text = format_json(table, "abc123")
    assert text == format_json(table, "abc123")
    payload = json.loads(text)
    assert list(payload) == sorted(payload)
    assert payload["config_hash"] == "abc123"
    assert payload["columns"] == ["t", "P_numeric"]
    assert payload["rows"][1] == [0.5, 0.25]
    assert list(payload["metadata"]) == ["epsilon", "solver"]


def test_json_non_finite_becomes_null():
    payload = json.loads(format_json(Table(("x",), [(float("nan"),)]), "h"))
    assert payload["rows"] == [[None]]


def test_render_dispatches_on_format(table):
    assert render(table, "csv", "h").startswith("# config_hash=h")
    assert render(table, "json", "h").startswith("{")


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        Table(("a", "b"), [(1.0,)])


def test_sidecar_path(tmp_path):
    assert sidecar_path(tmp_path / "fourier.csv") == tmp_path / "fourier.peaks.csv"
    assert sidecar_path(tmp_path / "run.json").name == "run.peaks.json"


def test_write_output_atomic_creates_parents(tmp_path):
    target = tmp_path / "nested" / "out.csv"
    write_output("first\n", target)
    write_output("second\n", target)
    assert target.read_text() == "second\n"
    assert [p.name for p in target.parent.iterdir()] == ["out.csv"]


def test_write_output_to_stdout(capsys):
    write_output("hello\n", None)
    assert capsys.readouterr().out == "hello\n"


def test_emit_writes_peaks_sidecar(tmp_path, table):
    peaks = Table(("solver", "position", "weight"), [("numeric", 0.0, 0.5)])
    target = tmp_path / "fourier.csv"
    emit(table, "csv", "h", target, peaks)
    assert target.read_text().splitlines()[1] == "t,P_numeric"
    sidecar = (tmp_path / "fourier.peaks.csv").read_text().splitlines()
    assert sidecar[1] == "solver,position,weight"
    assert sidecar[2].startswith("numeric,")


def test_emit_embeds_peaks_in_json_on_stdout(capsys, table):
    peaks = Table(("solver", "position", "weight"), [("fsa", 1.0, 2.0)])
    emit(table, "json", "h", None, peaks)
    payload = json.loads(capsys.readouterr().out)
    assert payload["peaks"]["columns"] == ["solver", "position", "weight"]
    assert payload["peaks"]["rows"] == [["fsa", 1.0, 2.0]]


def test_csv_quotes_cells_with_commas():
    text = format_csv(Table(("check", "detail"), [("rates", "a=1, b=2")]), "h")
    assert text.splitlines()[-1] == 'rates,"a=1, b=2"'
