"""Run configuration: a sectioned ``key = value`` document parsed with configparser.

Recognised sections and keys (all optional)::

    [spectrum]       C, E, alpha, contrast
    [transition]     A = "a11, a12, a21, a22", mu, tau, r_max
    [tolerances]     bisection_rtol, stable_tol, underflow
    [run]            seed, precision, bits
    [neighbourhoods] tube_radius, network_radius
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import asdict, dataclass, field, replace

from .errors import ConfigError
from .geometry import SaddleSpectrum
from .maps import TransitionSpec
from .numerics import PRECISION_MODES

ENV_CONFIG = "SHILNIKOV_SWITCHING_CONFIG"

_SCHEMA = {
    "spectrum": {"C": float, "E": float, "alpha": float, "contrast": bool},
    "transition": {"A": "matrix", "mu": float, "tau": float, "r_max": float},
    "tolerances": {"bisection_rtol": float, "stable_tol": float, "underflow": float},
    "run": {"seed": int, "precision": str, "bits": int},
    "neighbourhoods": {"tube_radius": float, "network_radius": float},
}


@dataclass(frozen=True)
class Tolerances:
    bisection_rtol: float = 1e-15
    stable_tol: float = 1e-14
    underflow: float = 2.2250738585072014e-308


@dataclass(frozen=True)
class Neighbourhoods:
    tube_radius: float = 0.1
    network_radius: float = 1.0


@dataclass(frozen=True)
class RunConfig:
    spectrum: SaddleSpectrum = field(default_factory=SaddleSpectrum)
    transition: TransitionSpec = field(default_factory=TransitionSpec)
    tolerances: Tolerances = field(default_factory=Tolerances)
    neighbourhoods: Neighbourhoods = field(default_factory=Neighbourhoods)
    seed: int = 0
    precision: str = "binary64"
    bits: int = 256

    def echo(self) -> dict:
        """Plain-data view of the configuration for manifests."""
        sp, ts = self.spectrum, self.transition
        return {
            "spectrum": {"C": sp.C, "E": sp.E, "alpha": sp.alpha, "contrast": sp.contrast},
            "transition": {"A": [list(r) for r in ts.A], "mu": ts.mu, "tau": ts.tau, "r_max": ts.r_max},
            "tolerances": asdict(self.tolerances),
            "neighbourhoods": asdict(self.neighbourhoods),
            "run": {"seed": self.seed, "precision": self.precision, "bits": self.bits},
        }


def _convert(section: str, key: str, raw: str, kind):
    path = f"{section}.{key}"
    try:
        if kind is bool:
            v = raw.strip().lower()
            if v in ("1", "true", "yes", "on"):
                return True
            if v in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "matrix":
            vals = [float(t) for t in raw.replace(";", ",").split(",") if t.strip()]
            if len(vals) != 4:
                raise ValueError("expected four entries")
            return ((vals[0], vals[1]), (vals[2], vals[3]))
        if kind is float:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError("not finite")
            return v
        return kind(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot read {raw!r} ({exc})", key=path) from None


def parse_config(text: str = "", overrides: dict | None = None) -> RunConfig:
    """Parse and validate a configuration document.

    ``overrides`` maps ``"section.key"`` to raw string values (as given on the
    command line) and takes precedence over the document.
    """
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text or "")
    except configparser.Error as exc:
        raise ConfigError(f"malformed document: {exc}") from None
    values: dict[str, dict] = {s: {} for s in _SCHEMA}
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError("unknown section", key=section)
        for key, raw in cp.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError("unknown key", key=f"{section}.{key}")
            values[section][key] = _convert(section, key, raw, _SCHEMA[section][key])
    for dotted, raw in (overrides or {}).items():
        if raw is None:
            continue
        section, _, key = dotted.partition(".")
        if section not in _SCHEMA or key not in _SCHEMA[section]:
            raise ConfigError("unknown key", key=dotted)
        values[section][key] = _convert(section, key, str(raw), _SCHEMA[section][key])

    spectrum = SaddleSpectrum(**values["spectrum"])
    try:
        transition = TransitionSpec(**values["transition"])
    except ValueError as exc:
        raise ConfigError(str(exc), key="transition") from None
    tol = Tolerances(**values["tolerances"])
    for k, v in asdict(tol).items():
        if not v > 0:
            raise ConfigError("must be positive", key=f"tolerances.{k}")
    nb = Neighbourhoods(**values["neighbourhoods"])
    run = values["run"]
    precision = run.get("precision", "binary64")
    if precision not in PRECISION_MODES:
        raise ConfigError(f"expected one of {PRECISION_MODES}", key="run.precision")
    bits = run.get("bits", 256)
    if bits < 53:
        raise ConfigError("must be at least 53", key="run.bits")
    seed = run.get("seed", 0)
    if not 0 <= seed < 2**64:
        raise ConfigError("must be a 64-bit unsigned integer", key="run.seed")
    return RunConfig(spectrum, transition, tol, nb, seed, precision, bits)


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Read ``path`` (or the file named by the environment default) and parse it."""
    path = path or os.environ.get(ENV_CONFIG)
    text = ""
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot open config file: {exc}", key=path) from None
    return parse_config(text, overrides)


def with_mu(cfg: RunConfig, mu: float) -> RunConfig:
    return replace(cfg, transition=replace(cfg.transition, mu=mu))
