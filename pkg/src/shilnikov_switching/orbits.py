"""Orbit iteration of the return map and its continuous-time suspension."""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import LeftNeighbourhood, OutsideFlowBox, StableManifoldInput
from .geometry import (
    CANONICAL,
    CapPoint,
    CylinderPoint,
    SaddleSpectrum,
    WallPoint,
    angle_diff,
    local_flow,
    local_map,
    time_of_flight,
)
from .maps import DEFAULT_TRANSITION, TransitionSpec, transition
from .paths import ItineraryPath, Symbol


class Termination(enum.Enum):
    MAX_STEPS = "MaxSteps"
    HIT_STABLE_MANIFOLD = "HitStableManifold"
    LEFT_NEIGHBOURHOOD = "LeftNeighbourhood"
    UNDERFLOW = "Underflow"


@dataclass(frozen=True)
class OrbitStep:
    """One passage: the wall point entered, the connection followed next and the passage data."""

    point: WallPoint
    symbol: Symbol
    flight_time: float
    revolutions: float

    @property
    def log_abs_y(self) -> float:
        return math.log(abs(self.point.y))


@dataclass
class OrbitRecord:
    initial: WallPoint
    steps: list[OrbitStep] = field(default_factory=list)
    termination: Termination = Termination.MAX_STEPS
    final: WallPoint | None = None
    stable_tol: float = 0.0

    @property
    def symbols(self) -> ItineraryPath:
        return ItineraryPath(tuple(s.symbol for s in self.steps))

    @property
    def heights(self) -> np.ndarray:
        return np.array([s.point.y for s in self.steps])

    def __len__(self) -> int:
        return len(self.steps)


def iterate(
    w: WallPoint,
    n_max: int = 100,
    stable_tol: float = 0.0,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
) -> OrbitRecord:
    """Apply the return map until ``n_max`` steps or a termination event.

    ``|y| <= stable_tol`` (or an exact zero) counts as reaching the stable
    manifold; a subnormal or flushed height caused by an underflowing cap
    radius is reported as ``UNDERFLOW``.
    """
    rec = OrbitRecord(initial=w, stable_tol=stable_tol)
    cur = w
    while True:
        if cur.y == 0 or abs(cur.y) <= stable_tol:
            rec.termination = Termination.HIT_STABLE_MANIFOLD
            break
        if abs(cur.y) < sys.float_info.min:
            rec.termination = Termination.UNDERFLOW
            break
        if len(rec.steps) >= n_max:
            rec.termination = Termination.MAX_STEPS
            break
        cap = local_map(cur, spectrum)
        try:
            nxt = transition(cap, tspec)
        except (LeftNeighbourhood, OutsideFlowBox):
            rec.steps.append(_step(cur, cap, spectrum))
            rec.termination = Termination.LEFT_NEIGHBOURHOOD
            cur = None
            break
        rec.steps.append(_step(cur, cap, spectrum))
        if nxt.y == 0 and cap.r < sys.float_info.min:
            rec.termination = Termination.UNDERFLOW
            cur = nxt
            break
        cur = nxt
    rec.final = cur
    return rec


def _step(w: WallPoint, cap: CapPoint, spectrum: SaddleSpectrum) -> OrbitStep:
    return OrbitStep(w, Symbol.from_sign(w.y), time_of_flight(w, spectrum), cap.revolutions)


class Section(enum.Enum):
    SIGMA_IN = "SigmaIn"
    SIGMA_OUT = "SigmaOut"


@dataclass(frozen=True)
class SectionEvent:
    """A crossing of the block boundary; ``symbol`` names the connection entered or just left."""

    t: float
    section: Section
    point: WallPoint | CapPoint
    symbol: Symbol | None


@dataclass(frozen=True)
class TubePassage:
    """Travel along connection ``symbol`` between ``t_out`` and ``t_in``.

    ``d_out`` is the exit distance from the connection on the cap and ``d_in``
    the entry distance from the connection's entry point on the wall; the
    export interpolates between them linearly in time.
    """

    t_out: float
    t_in: float
    symbol: Symbol
    d_out: float
    d_in: float

    def distance(self, t: float) -> float:
        u = (t - self.t_out) / (self.t_in - self.t_out)
        return (1 - u) * self.d_out + u * self.d_in

    @property
    def max_distance(self) -> float:
        return max(self.d_out, self.d_in)


@dataclass
class Suspension:
    """Timed trajectory: block samples, tube passages and the boundary event log."""

    samples: list[tuple[float, CylinderPoint | None, str]] = field(default_factory=list)
    events: list[SectionEvent] = field(default_factory=list)
    tubes: list[TubePassage] = field(default_factory=list)
    horizon: float = 0.0
    tau: float = 1.0
    termination: str = "Horizon"


def _entry_distance(w: WallPoint, sym: Symbol) -> float:
    entry = 0.0 if sym is Symbol.G1 else math.pi
    return math.hypot(angle_diff(w.x, entry), w.y)


def suspend_orbit(
    w: WallPoint,
    horizon: float,
    sample_dt: float = 0.1,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
) -> Suspension:
    """Follow ``w`` in continuous time up to ``horizon``.

    Inside the block the closed-form linear flow is sampled every
    ``sample_dt``; each connection is traversed in exactly ``tspec.tau``.
    """
    if w.y == 0:
        raise StableManifoldInput("suspension of a point on the stable manifold never leaves the block")
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    out = Suspension(horizon=horizon, tau=tspec.tau)
    t = 0.0
    cur = w
    out.events.append(SectionEvent(0.0, Section.SIGMA_IN, w, None))
    while True:
        sym = Symbol.from_sign(cur.y)
        T = time_of_flight(cur, spectrum)
        p0 = cur.to_cylinder()
        for s in np.arange(0.0, min(T, horizon - t), sample_dt):
            out.samples.append((t + float(s), local_flow(p0, float(s), spectrum), "V"))
        if t + T > horizon:
            out.termination = "Horizon"
            break
        t += T
        cap = local_map(cur, spectrum)
        out.events.append(SectionEvent(t, Section.SIGMA_OUT, cap, sym))
        try:
            nxt = transition(cap, tspec)
        except (LeftNeighbourhood, OutsideFlowBox):
            out.termination = "LeftNeighbourhood"
            break
        t_in = t + tspec.tau
        out.tubes.append(TubePassage(t, t_in, sym, cap.r, _entry_distance(nxt, sym)))
        tag = f"tube{int(sym)}"
        for s in np.arange(0.0, min(tspec.tau, horizon - t), sample_dt):
            out.samples.append((t + float(s), None, tag))
        if t_in > horizon:
            out.termination = "Horizon"
            break
        t = t_in
        out.events.append(SectionEvent(t, Section.SIGMA_IN, nxt, sym))
        if nxt.y == 0:
            out.termination = "HitStableManifold"
            break
        cur = nxt
    return out
