from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from shilnikov_switching.cli import COMMANDS, build_parser, run_command
from shilnikov_switching.records import parse_jsonl, sha256


def run(argv):
    out, err = io.BytesIO(), io.StringIO()
    code = run_command(argv, stdout=out, stderr=err, timestamp="2000-01-01T00:00:00+00:00")
    return code, out.getvalue(), err.getvalue()


SMOKE = {
    "map": ["--x", "0.2", "--y", "0.01"],
    "crossings": ["--k", "3"],
    "realize": ["--path", "121"],
    "itinerary": ["--x", "0", "--y", "0.5", "--n-max", "4"],
    "suspend": ["--x", "0", "--y", "0.5", "--horizon", "5"],
    "verify-follows": ["--path", "12"],
    "audit-stability": ["--n", "200"],
    "audit-contraction": ["--y-grid", "1e-6,1e-4,1e-2"],
    "periodic-search": ["--max-period", "1", "--grid", "16,16", "--mu", "0.01"],
    "attractors": ["--mus", "0.01", "--n-starts", "128"],
    "contrast-horseshoe": ["--rect=-1,1,1e-7,1e-3", "--strips", "100"],
}


def test_every_command_has_a_smoke_case():
    assert set(SMOKE) == set(COMMANDS)


@pytest.mark.parametrize("cmd", COMMANDS)
def test_smoke(cmd):
    code, out, err = run([cmd, *SMOKE[cmd]])
    assert code == 0, err
    recs = parse_jsonl(out)
    assert recs and all(set(r) == set(recs[0]) for r in recs)


def test_map_values():
    _, out, _ = run(["map", "--x", "0", "--y", "0.01"])
    (rec,) = parse_jsonl(out)
    assert rec["r"] == pytest.approx(1e-4) and rec["symbol"] == "1"


def test_realize_record():
    _, out, _ = run(["realize", "--path", "1211", "--mode", "reseeded"])
    (rec,) = parse_jsonl(out)
    assert rec["realized"] == "1211" and rec["precision"] == "log64"


def test_csv_output():
    code, out, _ = run(["crossings", "--k", "2", "--format", "csv"])
    assert code == 0 and out.decode().splitlines()[0] == "k,a_k,residual"


def test_out_and_manifest(tmp_path):
    target = tmp_path / "stab.jsonl"
    code, out, _ = run(["audit-stability", "--n", "100", "--seed", "3", "--out", str(target)])
    assert code == 0 and out == b""
    man = json.loads((tmp_path / "stab.jsonl.manifest.json").read_text())
    assert man["output_digests"]["records"] == sha256(target.read_bytes())
    assert man["config"]["run"]["seed"] == 3
    assert man["summary"]["fraction_attracted"] == 1.0


def test_explicit_manifest_path(tmp_path):
    m = tmp_path / "m.json"
    code, _, _ = run(["map", "--x", "0", "--y", "0.1", "--manifest", str(m)])
    assert code == 0 and json.loads(m.read_text())["command"][0] == "map"


@pytest.mark.parametrize(
    "argv, code, error",
    [
        (["map", "--x", "0", "--y", "0"], 5, "StableManifoldInput"),
        (["map", "--x", "0", "--y", "0.1", "--C", "0.5"], 4, "HypothesisViolation"),
        (["realize", "--path", "1111111111", "--precision", "binary64"], 3, "PrecisionExhausted"),
        (["map", "--x", "0", "--y", "0.1", "--tau", "-1"], 2, "ConfigError"),
        (["map", "--x", "0", "--y", "0.1", "--bits", "abc"], 2, "ConfigError"),
    ],
)
def test_exit_codes(argv, code, error):
    got, out, err = run(argv)
    assert got == code and out == b""
    payload = json.loads(err)
    assert payload["error"] == error and payload["exit_code"] == code


def test_precision_error_reports_progress():
    _, _, err = run(["realize", "--path", "1111111111", "--precision", "binary64"])
    assert json.loads(err)["k_found"] >= 1


def test_config_file(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[spectrum]\nC = 3\n")
    _, out, _ = run(["map", "--x", "0", "--y", "0.1", "--config", str(cfg)])
    assert parse_jsonl(out)[0]["r"] == pytest.approx(1e-3)


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit) as ei:
        build_parser().parse_args(["bogus"])
    assert ei.value.code == 2


def test_separate_processes_are_byte_identical(tmp_path):
    argv = [sys.executable, "-m", "shilnikov_switching", "attractors", "--n-starts", "256", "--seed", "9"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
