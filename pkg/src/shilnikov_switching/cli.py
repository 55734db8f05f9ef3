"""Command-line interface: ``python -m shilnikov_switching <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .audit import (
    attractor_scan,
    contraction_profile,
    horseshoe_contrast,
    horseshoe_search,
    periodic_orbit_search,
    stability_sample,
    trapping_height,
)
from .config import RunConfig, load_config
from .errors import SwitchingError
from .follows import verify_follows
from .geometry import WallPoint, local_map, time_of_flight
from .maps import return_map
from .orbits import iterate, suspend_orbit
from .paths import ItineraryPath
from .records import emit_records, manifest, sha256
from .switching import Segment, crossing_residual, find_crossings, realize_path

COMMANDS = (
    "map",
    "crossings",
    "realize",
    "itinerary",
    "suspend",
    "verify-follows",
    "audit-stability",
    "audit-contraction",
    "periodic-search",
    "attractors",
    "contrast-horseshoe",
)

# flag -> config key
_OVERRIDES = {
    "C": "spectrum.C",
    "E": "spectrum.E",
    "alpha": "spectrum.alpha",
    "contrast": "spectrum.contrast",
    "A": "transition.A",
    "mu": "transition.mu",
    "tau": "transition.tau",
    "r_max": "transition.r_max",
    "bisection_rtol": "tolerances.bisection_rtol",
    "stable_tol": "tolerances.stable_tol",
    "seed": "run.seed",
    "precision": "run.precision",
    "bits": "run.bits",
    "tube_radius": "neighbourhoods.tube_radius",
    "network_radius": "neighbourhoods.network_radius",
}


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("output")
    g.add_argument("--config", help="config file (default: $SHILNIKOV_SWITCHING_CONFIG)")
    g.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    g.add_argument("--out", help="write records here instead of stdout")
    g.add_argument("--manifest", help="manifest path (default: <out>.manifest.json when --out is set)")
    m = common.add_argument_group("model overrides")
    m.add_argument("--C")
    m.add_argument("--E")
    m.add_argument("--alpha")
    m.add_argument("--contrast", action="store_const", const="true", help="acknowledge C <= E")
    m.add_argument("--A", help="a11,a12,a21,a22")
    m.add_argument("--mu")
    m.add_argument("--tau")
    m.add_argument("--r-max", dest="r_max")
    m.add_argument("--bisection-rtol", dest="bisection_rtol")
    m.add_argument("--stable-tol", dest="stable_tol")
    m.add_argument("--seed")
    m.add_argument("--precision", choices=("binary64", "log64", "extended"))
    m.add_argument("--bits")
    m.add_argument("--tube-radius", dest="tube_radius")
    m.add_argument("--network-radius", dest="network_radius")

    p = argparse.ArgumentParser(prog="shilnikov-switching", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("map", "local map and return map of one wall point")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float, required=True)

    s = add("crossings", "parameters where the seed segment returns onto the stable circle")
    s.add_argument("--k", type=int, default=6)
    _seed_args(s)

    s = add("realize", "find a witness for a finite path")
    s.add_argument("--path", required=True, help='symbols "1"/"2", e.g. 1211')
    s.add_argument("--mode", choices=("nested", "reseeded"), default="nested")
    s.add_argument("--rings", type=_ints, default=(), help="ring rank per depth, 0 = outermost")
    _seed_args(s)

    s = add("itinerary", "iterate the return map from one point")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float, required=True)
    s.add_argument("--n-max", dest="n_max", type=int, default=100)

    s = add("suspend", "boundary events of the continuous-time trajectory")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float, required=True)
    s.add_argument("--horizon", type=float, default=50.0)
    s.add_argument("--dt", type=float, default=0.1)

    s = add("verify-follows", "check that a trajectory follows a path")
    s.add_argument("--path", required=True)
    s.add_argument("--against", help="path to test instead of --path (the witness still realizes --path)")
    s.add_argument("--x", type=float)
    s.add_argument("--y", type=float)
    s.add_argument("--horizon", type=float)

    s = add("audit-stability", "attraction statistics for random starts")
    s.add_argument("--n", type=int, default=10_000)
    s.add_argument("--y-max", dest="y_max", type=float, default=0.5)
    s.add_argument("--n-max", dest="n_max", type=int, default=7)
    s.add_argument("--threshold", type=float, default=1e-12)

    s = add("audit-contraction", "Jacobian norm profile and fitted slope")
    s.add_argument("--y-grid", dest="y_grid", type=_floats)

    s = add("periodic-search", "periodic points of the return map")
    s.add_argument("--max-period", dest="max_period", type=int, default=4)
    s.add_argument("--y-floor", dest="y_floor", type=float, default=1e-6)
    s.add_argument("--grid", type=_ints, default=(128, 128))

    s = add("attractors", "attractors and transients of the split network")
    s.add_argument("--mus", type=_floats, default=(1e-3, 1e-2))
    s.add_argument("--n-starts", dest="n_starts", type=int, default=4096)

    s = add("contrast-horseshoe", "topological crossing check on wall rectangles")
    s.add_argument("--rect", type=_floats, help="x_lo,x_hi,y_lo,y_hi (default: search a family)")
    s.add_argument("--strips", type=int, default=400)
    return p


def _seed_args(s):
    s.add_argument("--x0", type=float, default=0.0, help="seed segment abscissa")
    s.add_argument("--y0", type=float, default=1.0, help="seed segment top height")


def _wall(x, y) -> dict:
    return {"x": x, "y": y}


# ---------------------------------------------------------------- commands


def cmd_map(a, cfg: RunConfig):
    w = WallPoint(a.x, a.y)
    cap = local_map(w, cfg.spectrum)
    nxt, sym = return_map(w, cfg.spectrum, cfg.transition)
    rec = {
        "x": w.x,
        "y": w.y,
        "flight_time": time_of_flight(w, cfg.spectrum),
        "cap": cap.cap.value,
        "r": cap.r,
        "phi": cap.phi,
        "revolutions": cap.revolutions,
        "symbol": str(int(sym)),
        "x_next": nxt.x,
        "y_next": nxt.y,
    }
    return [rec], {}


def cmd_crossings(a, cfg):
    seg = Segment.vertical(a.x0, a.y0)
    cs = find_crossings(seg, a.k, cfg.spectrum, cfg.transition, cfg.tolerances.bisection_rtol, cfg.precision)
    recs = [
        {"k": i, "a_k": float(c), "residual": crossing_residual(seg, float(c), cfg.spectrum, cfg.transition)}
        for i, c in enumerate(cs, 1)
    ]
    return recs, {"found": len(recs)}


def _realization(path, mode, cfg, rings=(), seed=None):
    precision = None if (mode == "reseeded" and cfg.precision == "binary64") else cfg.precision
    return realize_path(
        path,
        seed or Segment(),
        mode,
        cfg.spectrum,
        cfg.transition,
        precision=precision,
        bits=cfg.bits,
        rings=rings,
        rtol=cfg.tolerances.bisection_rtol,
    )


def cmd_realize(a, cfg):
    r = _realization(ItineraryPath.parse(a.path), a.mode, cfg, a.rings, Segment.vertical(a.x0, a.y0))
    rec = {
        "path": str(r.path),
        "mode": r.mode,
        "precision": r.precision,
        "witness_x": r.witness_x,
        "witness_y": r.witness_y,
        "seed_param": float(r.seed_param),
        "realized": str(r.realized),
        "widths": list(r.widths),
        "revolutions": list(r.revolutions),
    }
    return [rec], {"ok": r.ok}


def cmd_itinerary(a, cfg):
    rec = iterate(WallPoint(a.x, a.y), a.n_max, cfg.tolerances.stable_tol, cfg.spectrum, cfg.transition)
    recs = [
        {
            "n": i,
            "x": s.point.x,
            "y": s.point.y,
            "symbol": str(int(s.symbol)),
            "flight_time": s.flight_time,
            "revolutions": s.revolutions,
        }
        for i, s in enumerate(rec.steps)
    ]
    return recs, {"termination": rec.termination.value, "steps": len(rec.steps), "symbols": str(rec.symbols)}


def _event_records(susp):
    out = []
    for e in susp.events:
        p = e.point
        if isinstance(p, WallPoint):
            c1, c2, where = p.x, p.y, "wall"
        else:
            c1, c2, where = p.r, p.phi, p.cap.value
        out.append(
            {
                "t": e.t,
                "section": e.section.value,
                "symbol": "" if e.symbol is None else str(int(e.symbol)),
                "chart": where,
                "u": c1,
                "v": c2,
            }
        )
    return out


def cmd_suspend(a, cfg):
    s = suspend_orbit(WallPoint(a.x, a.y), a.horizon, a.dt, cfg.spectrum, cfg.transition)
    return _event_records(s), {"termination": s.termination, "events": len(s.events)}


def cmd_verify_follows(a, cfg):
    path = ItineraryPath.parse(a.path)
    against = ItineraryPath.parse(a.against) if a.against else path
    if a.x is None or a.y is None:
        w = _realization(path, "nested", cfg).witness
    else:
        w = WallPoint(a.x, a.y)
    horizon = a.horizon
    if horizon is None:
        # enough time for len(path) passages plus the final entry
        rec = iterate(w, len(path), 0.0, cfg.spectrum, cfg.transition)
        horizon = sum(s.flight_time for s in rec.steps) + cfg.transition.tau * (len(path) + 1)
    s = suspend_orbit(w, horizon, 0.1, cfg.spectrum, cfg.transition)
    nb = cfg.neighbourhoods
    rep = verify_follows(s, against, nb.tube_radius, nb.network_radius)
    rec = {
        "path": str(against),
        "x": w.x,
        "y": w.y,
        "follows": rep.follows,
        "t": rep.t,
        "z": rep.z,
        "violations": [f"{j}: {msg}" for j, msg in rep.violations],
    }
    return [rec], {"follows": rep.follows}


def cmd_audit_stability(a, cfg):
    r = stability_sample(a.n, a.y_max, cfg.seed, cfg.spectrum, cfg.transition, threshold=a.threshold, n_max=a.n_max)
    rec = {
        "n": r.n,
        "attracted": r.attracted,
        "escaped": r.escaped,
        "undecided": r.undecided,
        "fraction_attracted": r.fraction_attracted,
        "max_excursion": r.max_excursion,
        "max_steps": int(r.steps.max()) if r.n else 0,
        "trapping_height": trapping_height(cfg.spectrum, cfg.transition),
        "seed": r.seed,
    }
    return [rec], {"fraction_attracted": r.fraction_attracted}


def cmd_audit_contraction(a, cfg):
    p = contraction_profile(a.y_grid, cfg.spectrum, cfg.transition)
    recs = [{"y": float(y), "norm": float(n), "worst_x": float(x)} for y, n, x in zip(p.y, p.norms, p.worst_x)]
    return recs, {"slope": p.slope, "expected": p.expected, "within_tolerance": p.within_tolerance}


def _orbit_records(rep):
    pair = rep.pairing()
    recs = []
    for i, o in enumerate(rep.orbits):
        recs.append(
            {
                "mu": rep.mu,
                "period": o.period,
                "word": str(o.word),
                "x": o.points[0][0],
                "y": o.points[0][1],
                "amplitude": o.amplitude,
                "kind": o.kind,
                "multiplier_moduli": sorted(abs(m) for m in o.multipliers),
                "residual": o.residual,
                "mirror": -1 if pair[i] is None else pair[i],
            }
        )
    return recs


def cmd_periodic_search(a, cfg):
    rep = periodic_orbit_search(a.max_period, a.y_floor, cfg.spectrum, cfg.transition, grid=tuple(a.grid))
    kinds = {}
    for o in rep.orbits:
        kinds[o.kind] = kinds.get(o.kind, 0) + 1
    return _orbit_records(rep), {"orbits": len(rep.orbits), "kinds": kinds}


def cmd_attractors(a, cfg):
    recs = []
    for rep in attractor_scan(a.mus, cfg.spectrum, cfg.transition, n_starts=a.n_starts, seed=cfg.seed):
        att = rep.attracting
        recs.append(
            {
                "mu": rep.mu,
                "count": rep.count,
                "symmetric": rep.symmetric,
                "words": [str(o.word) for o in att],
                "amplitudes": [o.amplitude for o in att],
                "transient_word": rep.transient["word"],
                "transient_switches": rep.transient["switches"],
                "transient_robust": rep.transient["robust"],
            }
        )
    return recs, {"reports": len(recs)}


def cmd_contrast_horseshoe(a, cfg):
    if a.rect:
        if len(a.rect) != 4:
            raise ValueError("--rect needs four numbers")
        evs = [horseshoe_contrast(tuple(a.rect), cfg.spectrum, cfg.transition, n_strips=a.strips)]
    else:
        evs = horseshoe_search(cfg.spectrum, cfg.transition)
    recs = [
        {
            "x_lo": e.rect[0],
            "x_hi": e.rect[1],
            "y_lo": e.rect[2],
            "y_hi": e.rect[3],
            "double_crossing": e.double_crossing,
            "n_components": len(e.components),
            "components": [v for c in e.components for v in c],
        }
        for e in evs
    ]
    return recs, {"double_crossings": sum(e.double_crossing for e in evs)}


HANDLERS = {
    "map": cmd_map,
    "crossings": cmd_crossings,
    "realize": cmd_realize,
    "itinerary": cmd_itinerary,
    "suspend": cmd_suspend,
    "verify-follows": cmd_verify_follows,
    "audit-stability": cmd_audit_stability,
    "audit-contraction": cmd_audit_contraction,
    "periodic-search": cmd_periodic_search,
    "attractors": cmd_attractors,
    "contrast-horseshoe": cmd_contrast_horseshoe,
}


def run_command(argv: list[str] | None = None, stdout=None, stderr=None, timestamp: str | None = None) -> int:
    """Parse ``argv``, run the command and write records; returns the exit status."""
    stdout = stdout or sys.stdout.buffer
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        overrides = {key: getattr(args, flag) for flag, key in _OVERRIDES.items()}
        cfg = load_config(args.config, overrides)
        records, summary = HANDLERS[args.command](args, cfg)
        data = emit_records(records, args.format)
    except SwitchingError as exc:
        return _fail(stderr, exc, exc.exit_code)
    except ValueError as exc:
        return _fail(stderr, exc, 2)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        stdout.write(data)
        stdout.flush()
    mpath = args.manifest or (f"{args.out}.manifest.json" if args.out else None)
    if mpath:
        echo = cfg.echo()
        inp = sha256(json.dumps({"command": argv, "config": echo}, sort_keys=True).encode())
        man = manifest(echo, __version__, [args.command] + argv[1:], inp, {"records": sha256(data)}, summary, timestamp)
        with open(mpath, "w", encoding="utf-8") as fh:
            json.dump(man, fh, indent=2, sort_keys=True, default=_jsonable)
            fh.write("\n")
    return 0


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(type(v).__name__)


def _fail(stderr, exc: Exception, code: int) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if hasattr(exc, "k_found"):
        err["k_found"] = exc.k_found
    stderr.write(json.dumps(err) + "\n")
    return code


def main() -> None:
    sys.exit(run_command())
