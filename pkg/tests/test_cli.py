from __future__ import annotations

import csv
import json
import math

import numpy as np
import pytest

from tlsho.cli import build_parser, run

BIASED_OMEGA = repr(math.hypot(0.5, 1.0))


def _csv(text: str) -> tuple[str, list[str], list[list[str]]]:
    first, _, body = text.partition("\n")
    assert first.startswith("# config_hash=")
    header, *rows = csv.reader(body.splitlines())
    return first, header, rows


def test_no_command_prints_help(capsys):
    assert run([]) == 1
    assert "usage" in capsys.readouterr().out


def test_every_subcommand_is_registered():
    parser = build_parser()
    for name in ("spectrum", "dynamics", "fourier", "rates", "correlation", "validate"):
        args = parser.parse_args([name, "--epsilon", "0.25"])
        assert args.command == name
        assert args.epsilon == 0.25
        assert args.g is None


def test_spectrum_sweep(capsys):
    assert run(["spectrum", "--sweep", "omega:0.5:1.5:11"]) == 0
    _, header, rows = _csv(capsys.readouterr().out)
    assert header[0] == "omega"
    assert header[1:6] == [f"vv_E{i}" for i in range(5)]
    assert header[-1] == "max_abs_diff"
    assert len(rows) == 11
    assert all(len(row) == len(header) for row in rows)
    resonant = rows[5]
    assert float(resonant[0]) == pytest.approx(1.0)
    assert float(resonant[-1]) < 3 * 0.18**3


def test_output_ignores_worker_count(capsys):
    argv = ["spectrum", "--epsilon", "0.5", "--sweep", "omega:0.8:1.4:7"]
    assert run(argv + ["--workers", "1"]) == 0
    sequential = capsys.readouterr().out
    assert run(argv + ["--workers", "4"]) == 0
    assert capsys.readouterr().out == sequential


def test_rates_peak_at_resonance(capsys):
    assert run(["rates", "--sweep", "omega:0.9:1.1:21"]) == 0
    _, header, rows = _csv(capsys.readouterr().out)
    assert header[:2] == ["omega", "gamma_r"]
    omegas = np.array([float(row[0]) for row in rows])
    gamma_r = np.array([float(row[1]) for row in rows])
    assert abs(omegas[np.argmax(gamma_r)] - 1.0) <= 0.04


def test_jc_solver_rejects_bias(capsys):
    assert run(["dynamics", "--solver", "jc-numeric", "--epsilon", "0.5"]) == 2
    assert "Config error" in capsys.readouterr().err


def test_unknown_config_key_is_a_config_error(tmp_path, capsys):
    path = tmp_path / "run.yaml"
    path.write_text("temperature: 3\n")
    assert run(["dynamics", "--config", str(path)]) == 2
    assert "temperature" in capsys.readouterr().err


def test_resonance_point_is_reported(capsys):
    sweep = f"omega:{math.hypot(0.5, 1.0) / 2!r}:{math.hypot(0.5, 1.0) / 2!r}:1"
    assert run(["spectrum", "--epsilon", "0.5", "--sweep", sweep]) == 3
    err = capsys.readouterr().err
    assert "Numerical failure" in err
    assert "sweep point 0" in err


def test_correlation_needs_damping(capsys):
    assert run(["correlation", "--kappa", "0"]) == 2


def test_correlation_is_even_in_bias(capsys):
    argv = [
        "correlation",
        "--omega", BIASED_OMEGA,
        "--sweep", "epsilon:-0.5:0.5:2",
        "--t-max", "300",
        "--t-points", "3001",
        "--omega-max", "2",
        "--omega-points", "101",
    ]
    assert run(argv) == 0
    _, header, rows = _csv(capsys.readouterr().out)
    assert header == ["epsilon", "omega", "S"]
    assert len(rows) == 202
    negative, positive = rows[:101], rows[101:]
    assert float(negative[0][0]) == -0.5
    assert float(positive[0][0]) == 0.5
    assert [row[1:] for row in negative] == [row[1:] for row in positive]


def test_dynamics_json(capsys):
    argv = ["dynamics", "--solver", "free,longtime", "--t-max", "10", "--t-points", "11", "--format", "json"]
    assert run(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["columns"] == ["t", "P_free", "P_longtime"]
    assert len(payload["rows"]) == 11
    assert payload["metadata"]["command"] == "dynamics"


def test_fourier_writes_peaks_sidecar(tmp_path, capsys):
    out = tmp_path / "fourier.csv"
    argv = [
        "fourier",
        "--epsilon", "0.5",
        "--omega", BIASED_OMEGA,
        "--solver", "longtime",
        "--omega-points", "31",
        "--out", str(out),
    ]
    assert run(argv) == 0
    assert capsys.readouterr().out == ""
    _, header, rows = _csv(out.read_text())
    assert header == ["omega", "F_longtime", "F_longtime_broadened"]
    assert len(rows) == 31
    _, peak_header, peaks = _csv((tmp_path / "fourier.peaks.csv").read_text())
    assert peak_header == ["solver", "position", "weight"]
    assert peaks and all(row[0] == "longtime" for row in peaks)


def test_validate_without_damping_skips(capsys):
    assert run(["validate", "--kappa", "0"]) == 0
    _, header, rows = _csv(capsys.readouterr().out)
    assert header == ["check", "status", "value", "limit", "detail"]
    statuses = {row[0]: row[1] for row in rows}
    assert statuses["trace_conservation"] == "skip"
    assert statuses["free_vs_numeric"] == "pass"
    assert "fail" not in statuses.values()


def test_fourier_window_covers_slow_detuned_decay(capsys):
    argv = ["fourier", "--omega", "0.75", "--solver", "numeric", "--omega-max", "1.5", "--omega-points", "16"]
    assert run(argv) == 0
    _, header, rows = _csv(capsys.readouterr().out)
    assert header == ["omega", "F_numeric", "F_numeric_broadened"]
    assert len(rows) == 16


def test_short_fourier_window_names_the_needed_t_max(capsys):
    argv = ["fourier", "--omega", "0.75", "--solver", "numeric", "--t-max", "200", "--omega-points", "16"]
    assert run(argv) == 2
    err = capsys.readouterr().err
    assert "has not decayed" in err
    assert "extend t_max to about" in err
