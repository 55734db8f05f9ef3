from __future__ import annotations

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shilnikov_switching.config import ENV_CONFIG, load_config, parse_config, with_mu
from shilnikov_switching.errors import ConfigError, HypothesisViolation, InternalError
from shilnikov_switching.records import emit_records, manifest, parse_jsonl, sha256

DOC = """
[spectrum]
C = 3
E = 1.5
alpha = 0.5

[transition]
A = 1, 0.1; -0.1, 1
mu = 0.001

[run]
seed = 42
precision = log64
"""


class TestConfig:
    def test_defaults(self):
        cfg = parse_config("")
        assert cfg.spectrum.delta == 2.0 and cfg.transition.mu == 0.0
        assert cfg.precision == "binary64" and cfg.seed == 0

    def test_document(self):
        cfg = parse_config(DOC)
        assert cfg.spectrum.delta == 2.0 and cfg.spectrum.twist == pytest.approx(1 / 3)
        assert cfg.transition.A == ((1.0, 0.1), (-0.1, 1.0))
        assert cfg.seed == 42 and cfg.precision == "log64"

    def test_overrides_win(self):
        cfg = parse_config(DOC, {"run.seed": "7", "transition.mu": None})
        assert cfg.seed == 7 and cfg.transition.mu == 0.001

    @pytest.mark.parametrize(
        "text, key",
        [
            ("[spectrum]\nC = abc\n", "spectrum.C"),
            ("[spectrum]\nD = 1\n", "spectrum.D"),
            ("[colour]\nx = 1\n", "colour"),
            ("[transition]\nA = 1, 2\n", "transition.A"),
            ("[transition]\nA = 1, 2, 2, 4\n", "transition"),
            ("[run]\nprecision = quad\n", "run.precision"),
            ("[run]\nbits = 10\n", "run.bits"),
            ("[tolerances]\nstable_tol = -1\n", "tolerances.stable_tol"),
            ("[spectrum]\ncontrast = maybe\n", "spectrum.contrast"),
            ("[spectrum]\nC = nan\n", "spectrum.C"),
        ],
    )
    def test_errors_name_the_key(self, text, key):
        with pytest.raises(ConfigError) as ei:
            parse_config(text)
        assert ei.value.key == key and ei.value.exit_code == 2

    def test_malformed(self):
        with pytest.raises(ConfigError):
            parse_config("not a section")

    def test_hypothesis_violation_passes_through(self):
        with pytest.raises(HypothesisViolation):
            parse_config("[spectrum]\nC = 0.5\n")
        cfg = parse_config("[spectrum]\nC = 0.5\ncontrast = yes\n")
        assert cfg.spectrum.delta == 0.5

    def test_env_default(self, tmp_path, monkeypatch):
        p = tmp_path / "run.ini"
        p.write_text(DOC)
        monkeypatch.setenv(ENV_CONFIG, str(p))
        assert load_config().seed == 42

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.ini"))

    def test_echo_round_trip(self):
        cfg = parse_config(DOC)
        echo = cfg.echo()
        json.dumps(echo)
        assert echo["transition"]["A"] == [[1.0, 0.1], [-0.1, 1.0]]
        assert with_mu(cfg, 0.5).transition.mu == 0.5 and cfg.transition.mu == 0.001


finite = st.floats(allow_nan=False, allow_infinity=False)
records = st.lists(
    st.builds(
        lambda k, v, name, ok, vals: {"k": k, "v": v, "name": name, "ok": ok, "vals": vals},
        st.integers(-(2**53), 2**53),
        finite,
        st.text(max_size=8),
        st.booleans(),
        st.lists(finite, max_size=3),
    ),
    max_size=10,
)


class TestRecords:
    @given(records)
    def test_jsonl_round_trip(self, recs):
        data = emit_records(recs, "jsonl")
        back = parse_jsonl(data)
        assert back == recs
        for r, b in zip(recs, back):
            assert all(math.copysign(1, x) == math.copysign(1, y) for x, y in zip(r["vals"], b["vals"]))

    @given(records)
    def test_emission_is_deterministic(self, recs):
        assert emit_records(recs) == emit_records([dict(r) for r in recs])

    def test_float_format(self):
        line = emit_records([{"a": 1.0, "b": 0.1, "c": 1e-300}]).decode()
        assert line == '{"a":1.0,"b":0.10000000000000001,"c":1e-300}\n'

    def test_csv(self):
        data = emit_records([{"k": 1, "v": 0.5, "l": [1.0, 2.0]}], "csv").decode()
        assert data == "k,v,l\n1,0.5,1.0 2.0\n"

    def test_mixed_schema(self):
        with pytest.raises(InternalError):
            emit_records([{"a": 1}, {"b": 2}])

    def test_manifest(self):
        m = manifest({"x": 1}, "0.1.0", ["map"], sha256(b"in"), {"records": sha256(b"")}, {"n": 0}, "T")
        assert m["timestamp"] == "T" and m["artifact_version"] == "0.1.0"
        assert m["output_digests"]["records"] == sha256(b"")
