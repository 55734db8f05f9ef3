"""Segments, spirals and the realization of switching itineraries.

A segment ``beta: (0, 1] -> wall`` accumulates on the stable circle at
``beta(0)``. Its image under the local map winds infinitely often around the
cap centre, so the return map cuts it into rings separated by the parameters
``a_1 > a_2 > ...`` where ``R(beta(a_i))`` lands on the stable circle.

Realization of a path works on parameter intervals:

* nested mode keeps a closed interval on the seed parameter and, at each
  depth, picks a ring of the right sign for the next return inside it;
* reseeded mode restarts the ring search on the image of the previously
  chosen ring, parametrized from its endpoint on the stable circle to its
  apex, so every level sees the same accumulating geometry.

Probes are refined until consecutive exit angles differ by at most ``pi/32``,
which leaves at most one zero of the next height between neighbours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidSegment, PrecisionExhausted
from .geometry import CANONICAL, Cap, SaddleSpectrum, WallPoint, local_map
from .maps import DEFAULT_TRANSITION, TransitionSpec
from .numerics import Backend, Binary64, Log64, make_backend
from .orbits import iterate
from .paths import ItineraryPath, Symbol, take

ADMISSIBLE_FRACTION = 0.8
DEFAULT_RTOL = 1e-15
PROBES_PER_RING = 32
MAX_PROBES = 200_000
MAX_RINGS = 400


# ---------------------------------------------------------------- segments


@dataclass(frozen=True, eq=False)
class Segment:
    """Monotone curve on one side of the wall with ``beta(0)`` on the stable circle.

    The default is the vertical segment ``beta(s) = (x0, s * y0)``. A sampled
    table ``(s, x, y)`` with ``s`` running from 0 to 1 is interpolated
    linearly.
    """

    x0: float = 0.0
    y0: float = 1.0
    table: tuple | None = None

    def __post_init__(self):
        if self.table is None:
            if self.y0 == 0 or abs(self.y0) > 1:
                raise InvalidSegment("vertical segment needs 0 < |y0| <= 1")
            return
        s, x, y = (np.asarray(a, dtype=float) for a in self.table)
        if not (s.ndim == 1 and s.shape == x.shape == y.shape and len(s) >= 2):
            raise InvalidSegment("table columns must be 1-d and of equal length >= 2")
        if s[0] != 0 or s[-1] != 1 or np.any(np.diff(s) <= 0):
            raise InvalidSegment("table parameter must increase strictly from 0 to 1")
        if y[0] != 0:
            raise InvalidSegment("beta(0) must lie on the stable circle y = 0")
        if np.any(y[1:] == 0) or abs(np.sign(y[1:]).sum()) != len(y) - 1:
            raise InvalidSegment("beta((0, 1]) must stay on one side of the stable circle")
        if np.any(np.abs(y) > 1):
            raise InvalidSegment("table heights exceed the wall")
        for name, col in (("x", x), ("y", y)):
            d = np.diff(col)
            if not (np.all(d >= 0) or np.all(d <= 0)):
                raise InvalidSegment(f"table coordinate {name} is not monotone")
        if np.all(np.diff(y) == 0):
            raise InvalidSegment("table heights are constant")
        object.__setattr__(self, "table", (s, x, y))

    @classmethod
    def vertical(cls, x0: float = 0.0, y0: float = 1.0) -> "Segment":
        return cls(x0=float(x0), y0=float(y0))

    @classmethod
    def from_table(cls, s, x, y) -> "Segment":
        return cls(table=(s, x, y))

    @property
    def sign(self) -> int:
        if self.table is None:
            return 1 if self.y0 > 0 else -1
        return 1 if self.table[2][-1] > 0 else -1

    @property
    def endpoint(self) -> WallPoint:
        """``beta(0)``, kept apart from the open parameter domain."""
        if self.table is None:
            return WallPoint(self.x0, 0.0)
        return WallPoint(float(self.table[1][0]), 0.0)

    def coords(self, s) -> tuple[float, float]:
        s = float(s)
        if self.table is None:
            return self.x0, s * self.y0
        ts, xs, ys = self.table
        return float(np.interp(s, ts, xs)), float(np.interp(s, ts, ys))

    def point(self, s) -> WallPoint:
        if not 0 < float(s) <= 1:
            raise ValueError("segment parameter must lie in (0, 1]")
        return WallPoint(*self.coords(s))

    def state(self, be: Backend, s):
        """Backend state of ``beta(s)``; the vertical case avoids underflow for tiny ``s``."""
        if self.table is None:
            if isinstance(be, Log64):
                return be.make_log(self.x0, self.sign, math.log(float(s)) + math.log(abs(self.y0)))
            if isinstance(be, Binary64):
                return be.make(self.x0, float(s) * self.y0)
            return be.make(self.x0, be.param(s) * self.y0)
        return be.make(*self.coords(s))

    def mirrored(self) -> "Segment":
        """Image of the segment under the symmetry, with the same parameter."""
        if self.table is None:
            return Segment(x0=self.x0 + math.pi, y0=-self.y0)
        s, x, y = self.table
        return Segment(table=(s, x + math.pi, -y))


DEFAULT_SEED = Segment()


@dataclass(frozen=True)
class SpiralSamples:
    s: np.ndarray
    r: np.ndarray
    phi: np.ndarray
    cap: Cap
    r_decreasing: bool
    phi_monotone: bool

    @property
    def winding(self) -> float:
        """Revolutions swept between the first and last sample."""
        return abs(self.phi[-1] - self.phi[0]) / (2 * math.pi)


def segment_image(
    seg: Segment = DEFAULT_SEED,
    n_rings: int = 8,
    probes_per_ring: int = PROBES_PER_RING,
    spectrum: SaddleSpectrum = CANONICAL,
) -> SpiralSamples:
    """Sample the local-map image of ``seg`` on a grid geometric toward ``s = 0``.

    The ratio between probes is ``exp(-pi / (probes_per_ring * alpha/E))``, so
    each half turn of the spiral receives ``probes_per_ring`` samples.
    """
    h = math.pi / (probes_per_ring * spectrum.twist)
    s = np.exp(-h * np.arange(n_rings * probes_per_ring + 1))
    caps = [local_map(seg.point(v), spectrum) for v in s]
    r = np.array([c.r for c in caps])
    phi = np.array([c.phi for c in caps])
    dphi = np.diff(phi)
    return SpiralSamples(
        s=s,
        r=r,
        phi=phi,
        cap=caps[0].cap,
        r_decreasing=bool(np.all(np.diff(r) < 0)),
        phi_monotone=bool(np.all(dphi > 0) or np.all(dphi < 0)),
    )


# ---------------------------------------------------------------- scanning


@dataclass(frozen=True)
class _Probe:
    t: object
    sign: int
    amp: float  # log of the height whose sign is tested
    phase: float  # exit angle of the passage producing that height


@dataclass
class _Run:
    """Maximal run of probes with one sign; brackets are ``(outside, inside)`` parameters."""

    sign: int
    probes: list
    left: tuple | None = None
    right: tuple | None = None
    open_left: bool = False
    open_right: bool = False

    @property
    def amp(self) -> float:
        return max(p.amp for p in self.probes)

    @property
    def apex(self):
        return max(self.probes, key=lambda p: p.amp).t


@dataclass(frozen=True)
class Component:
    """A closed parameter interval on which the tested height keeps one sign."""

    lo: object
    hi: object
    sign: int
    amp: float
    apex: object
    zeros: tuple  # bisected boundaries (inner ends)
    zero_lo: bool
    zero_hi: bool


class _Scanner:
    def __init__(self, f, be: Backend, rtol: float, probes_per_ring: int):
        self.f = f
        self.be = be
        self.rtol = rtol
        self.ppr = probes_per_ring
        self.dphi = math.pi / probes_per_ring
        self.cache: dict = {}

    def probe(self, t) -> _Probe:
        p = self.cache.get(t)
        if p is None:
            sign, amp, phase = self.f(t)
            p = self.cache[t] = _Probe(t, sign, amp, phase)
        return p

    def refine(self, ts: list) -> list:
        """Insert midpoints until neighbouring exit angles differ by at most ``dphi``."""
        probes = [self.probe(t) for t in sorted(ts)]
        changed = True
        while changed:
            changed = False
            out = [probes[0]]
            for p, q in zip(probes, probes[1:]):
                if abs(q.phase - p.phase) > self.dphi:
                    m = self.be.mid(p.t, q.t)
                    if p.t < m < q.t:
                        out.append(self.probe(m))
                        changed = True
                out.append(q)
            probes = out
            if len(probes) > MAX_PROBES:
                raise PrecisionExhausted("probe refinement did not resolve the exit angle")
        return probes

    @staticmethod
    def runs(probes: list, accumulate: bool) -> list[_Run]:
        """Group ascending probes into sign runs; exact zeros act as boundaries."""
        runs: list[_Run] = []
        prev = None
        for p in probes:
            if p.sign == 0:
                if prev is not None and prev.sign == 0:
                    raise PrecisionExhausted("consecutive probes evaluate to the stable manifold")
                prev = p
                continue
            if runs and runs[-1].sign == p.sign and prev.sign != 0:
                runs[-1].probes.append(p)
            else:
                run = _Run(p.sign, [p])
                if prev is not None:
                    run.left = (prev.t, p.t)
                    if runs:
                        runs[-1].right = (prev.t if prev.sign == 0 else p.t, runs[-1].probes[-1].t)
                runs.append(run)
            prev = p
        if accumulate and runs:
            runs[0].open_left = True
        return runs

    def bisect(self, outside, inside, sign: int) -> tuple:
        """Shrink a bracket around a sign change; returns ``(outside, inside)``."""
        be = self.be
        for _ in range(400):
            if abs(inside - outside) <= self.rtol * max(abs(inside), abs(outside)):
                break
            m = be.mid(outside, inside)
            if not (min(outside, inside) < m < max(outside, inside)):
                break
            if self.probe(m).sign == sign:
                inside = m
            else:
                outside = m
        return outside, inside

    def component(self, run: _Run, lo, hi) -> Component:
        zeros = []
        if run.left is not None:
            _, a = self.bisect(run.left[0], run.left[1], run.sign)
            zeros.append(a)
        else:
            a = lo
        if run.right is not None:
            _, b = self.bisect(run.right[0], run.right[1], run.sign)
            zeros.append(b)
        else:
            b = hi
        return Component(a, b, run.sign, run.amp, run.apex, tuple(zeros), run.left is not None, run.right is not None)

    def scan_open(self, lo, hi, done: Callable[[list[_Run]], bool], n0: int = 33) -> tuple[list[_Run], int]:
        """Probe the open ring ``(lo, hi)`` whose ends lie on the stable circle.

        Sub-rings accumulate at both ends, so probes are added geometrically
        toward each end until ``done(runs)`` holds. Runs touching an end are
        incomplete.
        """
        be = self.be
        w = hi - lo
        half = w / 2
        h = math.pi / (self.ppr * be.spectrum.twist)
        ts = [lo + w * be.param(i) / (n0 - 1) for i in range(1, n0 - 1)]
        i = 0
        while True:
            for _ in range(self.ppr):
                i += 1
                d = half * _exp(be, -h * i)
                ts += [lo + d, hi - d]
            probes = self.refine([t for t in ts if lo < t < hi])
            ts = [p.t for p in probes]
            runs = self.runs(probes, accumulate=True)
            if runs:
                runs[-1].open_right = True
            if done(runs):
                return runs, len(probes)
            if i > MAX_RINGS * self.ppr:
                raise PrecisionExhausted("ring search reached the probe budget")

    def scan_accumulating(self, hi, done: Callable[[list[_Run]], bool]) -> tuple[list[_Run], int]:
        """Probe ``(0, hi]`` geometrically toward 0 until ``done(runs)`` holds."""
        be = self.be
        h = math.pi / (self.ppr * be.spectrum.twist)
        ts = [hi]
        i = 0
        while True:
            for _ in range(self.ppr):
                i += 1
                ts.append(hi * _exp(be, -h * i))
            probes = self.refine(ts)
            ts = [p.t for p in probes]
            # leading zero at the domain end is the endpoint itself
            runs = self.runs(probes[:-1] if probes[-1].sign == 0 else probes, accumulate=True)
            if done(runs):
                return runs, len(probes)
            if i > MAX_RINGS * self.ppr:
                raise PrecisionExhausted("ring search reached the probe budget", k_found=max(len(runs) - 1, 0))


def _exp(be: Backend, v: float):
    if hasattr(be, "ctx"):
        return be.ctx.exp(v)
    return math.exp(v)


def _complete(runs: list[_Run]) -> list[_Run]:
    return [r for r in runs if not (r.open_left or r.open_right)]


# ---------------------------------------------------------------- crossings


def _level_probe(seg: Segment, be: Backend, depth: int, to_seed=None):
    """Probe function for the sign of the ``depth``-th return of ``beta``."""

    def f(t):
        s = to_seed(t) if to_seed is not None else t
        st = seg.state(be, s)
        for _ in range(depth - 1):
            st = be.step(st)
        phase = be.phase(st)
        st = be.step(st)
        return be.sign(st), be.log_abs_y(st), phase

    return f


def find_crossings(
    seg: Segment = DEFAULT_SEED,
    k_max: int = 6,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    rtol: float = DEFAULT_RTOL,
    precision: str = "binary64",
    probes_per_ring: int = PROBES_PER_RING,
) -> list[float]:
    """Parameters ``a_1 > a_2 > ...`` where ``R(beta(a))`` lies on the stable circle.

    Sign changes are bracketed on a geometric grid and bisected until the
    bracket is narrower than ``rtol`` relative. A probe landing exactly on
    the stable circle is itself a crossing. The endpoint ``s = 1`` is never
    counted.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    be = make_backend(precision, spectrum, tspec)
    sc = _Scanner(_level_probe(seg, be, 1), be, rtol, probes_per_ring)
    runs, _ = sc.scan_accumulating(be.param(1), lambda rs: len(rs) - 1 >= k_max)
    out = []
    for run in runs[1:]:
        outside, inside = sc.bisect(run.left[0], run.left[1], run.sign)
        if sc.probe(outside).sign == 0:
            out.append(outside)
        else:
            out.append(be.mid(outside, inside))
    out = sorted(out, reverse=True)[:k_max]
    return [float(a) if not hasattr(be, "ctx") else a for a in out]


def crossing_residual(
    seg: Segment, a, spectrum: SaddleSpectrum = CANONICAL, tspec: TransitionSpec = DEFAULT_TRANSITION
) -> float:
    """Height of ``R(beta(a))``."""
    be = Binary64(spectrum, tspec)
    return be.step(seg.state(be, a))[1]


# ---------------------------------------------------------------- admissible intervals


@dataclass(frozen=True)
class BracketLog:
    depth: int
    symbol: Symbol
    zeros: tuple
    ring: tuple
    n_probes: int
    n_components: int


@dataclass(frozen=True)
class AdmissibleInterval:
    """Closed ring ``[lo, hi]`` of seed parameters realizing ``prefix``.

    Every parameter in the ring has the realized itinerary; its ends lie
    within the bisection tolerance of the stable-circle crossings. ``core``
    is the closed middle fraction of the ring from which witnesses are taken.
    """

    seed: Segment
    lo: object
    hi: object
    prefix: ItineraryPath
    core: tuple = ()
    brackets: tuple = ()
    precision: str = "binary64"
    bits: int | None = None
    widths: tuple = ()
    ranks: tuple = ()

    @classmethod
    def root(cls, seed: Segment = DEFAULT_SEED, precision: str = "binary64", bits: int | None = None):
        return cls(seed, 0.0, 1.0, ItineraryPath(), (0.0, 1.0), precision=precision, bits=bits)

    @property
    def depth(self) -> int:
        return len(self.prefix)

    @property
    def width(self) -> float:
        return float(self.hi - self.lo)

    @property
    def midpoint(self):
        return self.lo + (self.hi - self.lo) / 2

    def contains(self, other: "AdmissibleInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


def _core(c: Component):
    pad = (c.hi - c.lo) * (1 - ADMISSIBLE_FRACTION) / 2
    return c.lo + pad, c.hi - pad


def _pick(comps: list[Component], target: Symbol, rank: int, depth: int) -> Component:
    cands = sorted((c for c in comps if c.sign == target.sign), key=lambda c: -c.amp)
    if len(cands) <= rank:
        raise PrecisionExhausted(
            f"no ring of rank {rank} for symbol {int(target)} at depth {depth}", k_found=depth - 1
        )
    return cands[rank]


def _samples_ok(f, lo, hi, sign: int, be: Backend, n: int = 5) -> bool:
    for i in range(n):
        t = lo + (hi - lo) * be.param(2 * i + 1) / (2 * n)
        if f(t)[0] != sign:
            return False
    return True


def _choose(scanner_factory, scan, f, be, target, rank, depth, lo_dom, hi_dom):
    """Scan, pick the ring and confirm its interior; tighten the probe grid on failure."""
    ppr = PROBES_PER_RING
    for _ in range(4):
        sc = scanner_factory(ppr)
        runs, n = scan(sc)
        comps = [sc.component(r, lo_dom, hi_dom) for r in _complete(runs) if r.sign == target.sign]
        c = _pick(comps, target, rank, depth)
        lo, hi = _core(c)
        if lo < hi and _samples_ok(f, lo, hi, target.sign, be):
            return c, lo, hi, n, len(runs)
        ppr *= 2
    raise PrecisionExhausted(f"ring interior for depth {depth} could not be confirmed", k_found=depth - 1)


def _with_depth(depth: int, fn, *args):
    """Run ``fn``; a precision failure reports the ``depth - 1`` levels already resolved."""
    try:
        return fn(*args)
    except PrecisionExhausted as exc:
        if exc.k_found < depth - 1:
            raise PrecisionExhausted(str(exc), k_found=depth - 1) from exc
        raise


def refine_once(
    current: AdmissibleInterval,
    target: Symbol,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    rank: int = 0,
    rtol: float = DEFAULT_RTOL,
    backend: Backend | None = None,
) -> AdmissibleInterval:
    """Append ``target`` to the realized prefix of ``current``.

    At depth 0 the rings of the first return are searched along the whole
    seed; deeper levels search the rings of the next return inside the open
    ring ``(current.lo, current.hi)``, where they accumulate on both ends.
    Rank 0 is the outermost ring, meaning the
    one with the largest image radius; rank 1 the next, and so on.
    """
    target = Symbol.parse(target)
    be = backend or make_backend(current.precision, spectrum, tspec, current.bits or 256)
    depth = current.depth + 1
    f = _level_probe(current.seed, be, depth)

    def factory(ppr):
        return _Scanner(f, be, rtol, ppr)

    need = rank + 2

    def done(rs):
        return sum(r.sign == target.sign for r in _complete(rs)) >= need

    if current.depth == 0:
        lo_dom, hi_dom = be.param(0), be.param(1)

        def scan(sc):
            return sc.scan_accumulating(hi_dom, done)

    else:
        lo_dom, hi_dom = current.lo, current.hi

        def scan(sc):
            return sc.scan_open(lo_dom, hi_dom, done)

    c, lo, hi, n, ncomp = _with_depth(depth, _choose, factory, scan, f, be, target, rank, depth, lo_dom, hi_dom)
    log = BracketLog(depth, target, tuple(float(z) for z in c.zeros), (float(c.lo), float(c.hi)), n, ncomp)
    return AdmissibleInterval(
        seed=current.seed,
        lo=c.lo,
        hi=c.hi,
        prefix=current.prefix.extended(target),
        core=(lo, hi),
        brackets=current.brackets + (log,),
        precision=current.precision,
        bits=current.bits,
        widths=current.widths + (float(c.hi - c.lo),),
        ranks=current.ranks + (rank,),
    )


# ---------------------------------------------------------------- realization


@dataclass(frozen=True)
class Realization:
    """A witness ``w = R(beta(s))`` whose itinerary starts with ``path``."""

    path: ItineraryPath
    mode: str
    precision: str
    seed_param: object
    witness_x: float
    witness_y: float
    realized: ItineraryPath
    widths: tuple
    revolutions: tuple
    interval: AdmissibleInterval | None = None
    bits: int | None = None

    @property
    def witness(self) -> WallPoint:
        return WallPoint(self.witness_x, self.witness_y)

    @property
    def ok(self) -> bool:
        return self.realized == self.path

    @property
    def revolution_counts(self) -> tuple[int, ...]:
        return tuple(math.floor(r) for r in self.revolutions)

    @property
    def widths_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.widths, self.widths[1:]))


@dataclass
class _ReseedNode:
    chain: tuple  # affine maps (end, apex) from local to parent parameter
    lo: object
    hi: object
    widths: tuple
    brackets: tuple
    ring_segment: tuple = ()


class SwitchingEngine:
    """Realizes many paths from one seed, sharing work between common prefixes."""

    def __init__(
        self,
        seed: Segment = DEFAULT_SEED,
        mode: str = "nested",
        spectrum: SaddleSpectrum = CANONICAL,
        tspec: TransitionSpec = DEFAULT_TRANSITION,
        precision: str | None = None,
        bits: int = 256,
        rtol: float = DEFAULT_RTOL,
    ):
        if mode not in ("nested", "reseeded"):
            raise ValueError(f"unknown realization mode {mode!r}")
        if tspec.mu != 0:
            raise ValueError("switching is realized for the intact network only (mu = 0)")
        self.seed = seed
        self.mode = mode
        self.spectrum = spectrum
        self.tspec = tspec
        self.precision = precision or ("binary64" if mode == "nested" else "log64")
        self.bits = bits if self.precision == "extended" else None
        self.rtol = rtol
        self.be = make_backend(self.precision, spectrum, tspec, bits)
        self._nested: dict = {}
        self._reseeded: dict = {}

    # nested ------------------------------------------------------------

    def nested(self, path: ItineraryPath, ranks: Sequence[int] = ()) -> AdmissibleInterval:
        key = (path.symbols, tuple(ranks[: len(path)]))
        hit = self._nested.get(key)
        if hit is not None:
            return hit
        if len(path) == 0:
            node = AdmissibleInterval.root(self.seed, self.precision, self.bits)
        else:
            parent = self.nested(path.prefix(len(path) - 1), ranks)
            rank = ranks[len(path) - 1] if len(ranks) >= len(path) else 0
            node = refine_once(parent, path[-1], self.spectrum, self.tspec, rank=rank, rtol=self.rtol, backend=self.be)
        self._nested[key] = node
        return node

    # reseeded ----------------------------------------------------------

    def _to_seed(self, chain):
        def g(t):
            for end, apex in reversed(chain):
                t = end + t * (apex - end)
            return t

        return g

    def reseeded(self, path: ItineraryPath, ranks: Sequence[int] = ()) -> _ReseedNode:
        key = (path.symbols, tuple(ranks[: len(path)]))
        hit = self._reseeded.get(key)
        if hit is not None:
            return hit
        be = self.be
        if len(path) == 0:
            node = _ReseedNode((), be.param(0), be.param(1), (), ())
            self._reseeded[key] = node
            return node
        parent = self.reseeded(path.prefix(len(path) - 1), ranks)
        depth = len(path)
        target = path[-1]
        rank = ranks[depth - 1] if len(ranks) >= depth else 0
        chain = parent.chain
        if depth > 1:
            # new segment: image of the parent ring from its stable-circle end to its apex
            chain = chain + (parent.ring_segment,)
        f = _level_probe(self.seed, be, depth, self._to_seed(chain))
        need = rank + 2

        def scan(sc):
            return sc.scan_accumulating(
                be.param(1), lambda rs: sum(r.sign == target.sign for r in _complete(rs)) >= need
            )

        c, lo, hi, n, ncomp = _with_depth(
            depth,
            _choose,
            lambda ppr: _Scanner(f, be, self.rtol, ppr), scan, f, be, target, rank, depth, be.param(0), be.param(1)
        )
        end = c.lo if c.zero_lo else c.hi
        node = _ReseedNode(
            chain,
            lo,
            hi,
            parent.widths + (float(c.hi - c.lo),),
            parent.brackets
            + (BracketLog(depth, target, tuple(float(z) for z in c.zeros), (float(c.lo), float(c.hi)), n, ncomp),),
            (end, c.apex),
        )
        self._reseeded[key] = node
        return node

    # common ------------------------------------------------------------

    def realize(self, path: ItineraryPath, ranks: Sequence[int] = ()) -> Realization:
        path = path if isinstance(path, ItineraryPath) else ItineraryPath.parse(str(path))
        if len(path) == 0:
            raise ValueError("path must have order at least 1")
        interval = None
        if self.mode == "nested":
            interval = self.nested(path, ranks)
            s = interval.midpoint
            widths = interval.widths
        else:
            node = self.reseeded(path, ranks)
            s = self._to_seed(node.chain)(node.lo + (node.hi - node.lo) / 2)
            widths = node.widths
        return self._witness(path, s, widths, interval)

    def _witness(self, path, s, widths, interval) -> Realization:
        be = self.be
        k = len(path)
        st = self.seed.state(be, s)
        revs = [be.phase(st) / (2 * math.pi)]
        st = be.step(st)
        wx, wy = be.wall(st)
        if self.precision == "binary64":
            rec = iterate(WallPoint(wx, wy), n_max=k, spectrum=self.spectrum, tspec=self.tspec)
            realized = rec.symbols
            revs += [step.revolutions for step in rec.steps[:-1]]
        else:
            symbols = []
            cur = st
            for i in range(k):
                sg = be.sign(cur)
                if sg == 0:
                    break
                symbols.append(Symbol.from_sign(sg))
                if i < k - 1:
                    revs.append(be.phase(cur) / (2 * math.pi))
                    cur = be.step(cur)
            realized = ItineraryPath(tuple(symbols))
        out = Realization(
            path=path,
            mode=self.mode,
            precision=self.precision,
            seed_param=s,
            witness_x=wx,
            witness_y=wy,
            realized=realized,
            widths=tuple(widths),
            revolutions=tuple(revs),
            interval=interval,
            bits=self.bits,
        )
        if not out.ok:
            raise PrecisionExhausted(
                f"witness itinerary {out.realized} does not match requested path {path}",
                k_found=_common_prefix(out.realized, path),
            )
        return out


def _common_prefix(a: ItineraryPath, b: ItineraryPath) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def realize_path(
    path: ItineraryPath | str,
    seed: Segment = DEFAULT_SEED,
    mode: str = "nested",
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    precision: str | None = None,
    bits: int = 256,
    rings: Sequence[int] = (),
    rtol: float = DEFAULT_RTOL,
) -> Realization:
    """Find a wall point whose itinerary begins with ``path``.

    ``rings`` optionally selects, per depth, which matching ring to use
    (0 = outermost). Nested mode defaults to binary64 and reseeded mode to
    the log-height backend.
    """
    eng = SwitchingEngine(seed, mode, spectrum, tspec, precision, bits, rtol)
    return eng.realize(path if isinstance(path, ItineraryPath) else ItineraryPath.parse(path), rings)


def realize_all(
    paths: Iterable[ItineraryPath],
    seed: Segment = DEFAULT_SEED,
    mode: str = "nested",
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    precision: str | None = None,
    bits: int = 256,
    rtol: float = DEFAULT_RTOL,
) -> list[Realization]:
    eng = SwitchingEngine(seed, mode, spectrum, tspec, precision, bits, rtol)
    return [eng.realize(p) for p in paths]


def realize_infinite_prefix(
    stream: Iterable,
    depth: int,
    seed: Segment = DEFAULT_SEED,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    precision: str = "log64",
    bits: int = 256,
    rings: Sequence[int] = (),
    rtol: float = DEFAULT_RTOL,
) -> Realization:
    """Nested realization of the first ``depth`` symbols of an infinite stream.

    The interval midpoint approximates a point of the intersection of all
    admissible sets; ``widths`` lists the interval width after each depth.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    path = take(stream, depth)
    if len(path) < depth:
        raise ValueError("stream ended before the requested depth")
    return realize_path(path, seed, "nested", spectrum, tspec, precision=precision, bits=bits, rings=rings, rtol=rtol)
