"""Deterministic record emission (JSON lines or CSV) and run manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from datetime import datetime, timezone
from typing import Iterable

from .errors import InternalError

FORMATS = ("jsonl", "csv")


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    text = format(v, ".17g")
    if all(c not in text for c in ".eE"):
        text += ".0"
    return text


def _json_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_json_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_json_value(x)}" for k, x in v.items()) + "}"
    if hasattr(v, "__float__"):
        return _fmt_float(float(v))
    raise InternalError(f"cannot serialise {type(v).__name__}")


def _csv_value(v) -> str:
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_value(x) for x in v)
    if v is None:
        return ""
    return str(v)


def emit_records(records: Iterable[dict], fmt: str = "jsonl") -> bytes:
    """Serialise homogeneous records; floats keep 17 significant digits.

    Every record must have the same keys in the same order as the first one.
    """
    if fmt not in FORMATS:
        raise InternalError(f"unknown format {fmt!r}")
    records = list(records)
    keys = list(records[0].keys()) if records else []
    for r in records:
        if list(r.keys()) != keys:
            raise InternalError(f"mixed record schemas: {list(r.keys())} vs {keys}")
    if fmt == "jsonl":
        return "".join(_json_value(r) + "\n" for r in records).encode("utf-8")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in records:
        w.writerow([_csv_value(r[k]) for k in keys])
    return buf.getvalue().encode("utf-8")


def parse_jsonl(data: bytes) -> list[dict]:
    return [json.loads(line) for line in data.decode("utf-8").split("\n") if line]


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def manifest(
    config_echo: dict,
    version: str,
    command: list[str],
    input_digest: str,
    output_digests: dict,
    summary: dict | None = None,
    timestamp: str | None = None,
) -> dict:
    return {
        "artifact_version": version,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "config": config_echo,
        "input_digest": input_digest,
        "output_digests": output_digests,
        "summary": summary or {},
    }
