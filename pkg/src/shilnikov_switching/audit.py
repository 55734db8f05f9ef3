"""Numerical evidence for attraction and for the absence of horseshoes.

Nothing here is a proof. Each routine measures a necessary consequence of the
attracting regime (``C > E``) so it can fail loudly, and the same routines in
the expanding contrast regime (``C < E``) show what failure looks like.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidRectangle
from .geometry import CANONICAL, SaddleSpectrum, TWO_PI, wrap_angle
from .maps import DEFAULT_TRANSITION, NUMPY, TransitionSpec, _kernel, return_jacobian_arrays, return_map_arrays
from .paths import ItineraryPath, Symbol


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; one 64-bit seed fixes every draw."""
    return np.random.Generator(np.random.Philox(seed))


def trapping_height(spectrum: SaddleSpectrum = CANONICAL, tspec: TransitionSpec = DEFAULT_TRANSITION) -> float:
    """Largest ``y0 <= 1`` with ``|A| * y**delta < y`` on ``(0, y0)``.

    Only meaningful for ``mu = 0`` and ``delta > 1``; returns 0 otherwise.
    """
    d = spectrum.delta
    if d <= 1 or tspec.mu != 0:
        return 0.0
    return min(1.0, tspec.norm ** (-1.0 / (d - 1.0)))


# ---------------------------------------------------------------- stability


@dataclass(frozen=True)
class StabilityReport:
    n: int
    attracted: int
    escaped: int
    undecided: int
    max_excursion: float
    steps: np.ndarray  # returns needed to fall below the threshold, -1 if never
    decreasing_onset: np.ndarray  # first step from which |y| decreases strictly
    threshold: float
    n_max: int
    seed: int
    y_max: float

    @property
    def fraction_attracted(self) -> float:
        return self.attracted / self.n if self.n else 1.0


def stability_sample(
    n: int = 10_000,
    y_max: float = 0.5,
    seed: int = 0,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    threshold: float = 1e-12,
    n_max: int = 7,
) -> StabilityReport:
    """Iterate ``n`` random wall points with ``|y| <= y_max`` for up to ``n_max`` returns.

    ``x`` is uniform on the circle and ``|y|`` uniform on ``[0, y_max]`` with a
    random side. An orbit is attracted once ``|y| < threshold`` and escapes once
    ``|y| > 1``.
    """
    if tspec.mu != 0:
        raise ValueError("stability sampling applies to the intact network (mu = 0)")
    ystar = trapping_height(spectrum, tspec)
    if not 0 < y_max <= ystar:
        raise ValueError(f"y_max={y_max} must lie in (0, {ystar}], the trapping height")
    rng = make_rng(seed)
    x = rng.uniform(0.0, TWO_PI, n)
    y = rng.uniform(0.0, y_max, n) * rng.choice((-1.0, 1.0), n)
    steps = np.full(n, -1)
    hist = np.empty((n_max + 1, n))
    hist[0] = np.abs(y)
    steps[np.abs(y) < threshold] = 0
    escaped = np.zeros(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
        for k in range(1, n_max + 1):
            live = steps < 0
            xn, yn = return_map_arrays(x, y, spectrum, tspec)
            x = np.where(live, xn, x)
            y = np.where(live, yn, y)
            hist[k] = np.abs(y)
            escaped |= live & (np.abs(y) > 1)
            steps[live & (np.abs(y) < threshold) & ~escaped] = k
    dec = np.diff(hist, axis=0) < 0
    # onset: first k such that |y| decreases at every later recorded step (or the orbit stopped)
    onset = np.full(n, n_max)
    ok = np.ones(n, dtype=bool)
    for k in range(n_max - 1, -1, -1):
        stopped = (steps >= 0) & (steps <= k)
        ok &= dec[k] | stopped
        onset[ok] = k
    attracted = int(np.sum(steps >= 0))
    n_esc = int(escaped.sum())
    return StabilityReport(
        n=n,
        attracted=attracted,
        escaped=n_esc,
        undecided=n - attracted - n_esc,
        max_excursion=float(hist[1:].max()) if n else 0.0,
        steps=steps,
        decreasing_onset=onset,
        threshold=threshold,
        n_max=n_max,
        seed=seed,
        y_max=y_max,
    )


# ---------------------------------------------------------------- contraction


@dataclass(frozen=True)
class ContractionProfile:
    y: np.ndarray
    norms: np.ndarray
    worst_x: np.ndarray
    slope: float
    expected: float

    @property
    def relative_error(self) -> float:
        if self.expected == 0:
            return abs(self.slope)
        return abs(self.slope - self.expected) / abs(self.expected)

    @property
    def within_tolerance(self) -> bool:
        return self.relative_error <= 0.05


def contraction_profile(
    y_grid=None,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    n_x: int = 64,
) -> ContractionProfile:
    """Worst-case operator norm of the return-map Jacobian along ``y_grid``.

    The slope of ``log norm`` against ``log y`` tends to ``delta - 1``.
    """
    y = np.logspace(-8, -2, 25) if y_grid is None else np.asarray(y_grid, dtype=float)
    if np.any((y <= 0) | (y >= 1)):
        raise ValueError("y grid must lie in (0, 1)")
    xs = np.arange(n_x) * (TWO_PI / n_x)
    X, Y = np.meshgrid(xs, y)
    J = return_jacobian_arrays(X, Y, spectrum, tspec)
    norms = np.linalg.norm(J, 2, axis=(-2, -1))
    worst = norms.argmax(axis=1)
    nmax = norms.max(axis=1)
    slope = float(np.polyfit(np.log(y), np.log(nmax), 1)[0])
    return ContractionProfile(y, nmax, xs[worst], slope, spectrum.delta - 1.0)


# ---------------------------------------------------------------- periodic orbits


@dataclass(frozen=True)
class PeriodicOrbit:
    period: int
    points: tuple  # ((x, y), ...)
    word: ItineraryPath
    multipliers: tuple  # complex eigenvalues of the period map Jacobian
    residual: float

    @property
    def amplitude(self) -> float:
        return max(abs(p[1]) for p in self.points)

    @property
    def spectral_radius(self) -> float:
        return max(abs(m) for m in self.multipliers)

    @property
    def kind(self) -> str:
        a = sorted(abs(m) for m in self.multipliers)
        if a[-1] < 1:
            return "attracting"
        if a[0] > 1:
            return "repelling"
        if a[0] < 1 < a[-1]:
            return "saddle"
        return "neutral"

    @property
    def attracting(self) -> bool:
        return self.kind == "attracting"

    def mirrored_points(self) -> list:
        return [(wrap_angle(x + math.pi), -y) for x, y in self.points]

    def same_orbit(self, other: "PeriodicOrbit", tol: float = 1e-7) -> bool:
        return self.period == other.period and _points_match(self.points, other.points, tol)

    def is_mirror_of(self, other: "PeriodicOrbit", tol: float = 1e-7) -> bool:
        return self.period == other.period and _points_match(self.mirrored_points(), other.points, tol)

    @property
    def self_symmetric(self) -> bool:
        return self.is_mirror_of(self)


def _close(p, q, tol) -> bool:
    dx = abs((p[0] - q[0] + math.pi) % TWO_PI - math.pi)
    return dx < tol and abs(p[1] - q[1]) <= tol * max(abs(p[1]), abs(q[1]), 1e-300)


def _points_match(ps, qs, tol) -> bool:
    return all(any(_close(p, q, tol) for q in qs) for p in ps)


def _wrap_diff(a):
    return (a + np.pi) % TWO_PI - np.pi


def _period_map(x, y, p, spectrum, tspec):
    """``R^p`` with its Jacobian and the smallest height met; arrays."""
    J = np.broadcast_to(np.eye(2), x.shape + (2, 2)).copy()
    xc, yc = x, y
    ymin = np.abs(y)
    ymax = np.abs(y)
    for _ in range(p):
        J = return_jacobian_arrays(xc, yc, spectrum, tspec) @ J
        xc, yc, _, _ = _kernel(xc, yc, spectrum, tspec, NUMPY)
        ymin = np.minimum(ymin, np.abs(yc))
        ymax = np.maximum(ymax, np.abs(yc))
    return xc, yc, J, ymin, ymax


def _newton(x, sg, ly, p, spectrum, tspec, iters: int = 60):
    """Damped Newton on ``R^p - id`` in the chart ``(x, ln|y|)`` with the side held fixed."""
    alive = np.ones(x.shape, dtype=bool)
    for _ in range(iters):
        y = sg * np.exp(ly)
        xp, yp, J, _, ymax = _period_map(x, y, p, spectrum, tspec)
        alive &= np.isfinite(xp) & np.isfinite(yp) & (ymax <= 1) & (np.sign(yp) == sg)
        if not alive.any():
            break
        lyp = np.log(np.abs(np.where(alive, yp, 1.0)))
        G = np.stack([_wrap_diff(xp - x), lyp - ly], axis=-1)
        ypp = np.where(alive, yp, 1.0)
        D = np.empty(J.shape)
        D[..., 0, 0] = J[..., 0, 0] - 1
        D[..., 0, 1] = J[..., 0, 1] * y
        D[..., 1, 0] = J[..., 1, 0] / ypp
        D[..., 1, 1] = J[..., 1, 1] * y / ypp - 1
        det = D[..., 0, 0] * D[..., 1, 1] - D[..., 0, 1] * D[..., 1, 0]
        alive &= np.isfinite(det) & (det != 0)
        safe = np.where(alive, det, 1.0)
        dx = -(D[..., 1, 1] * G[..., 0] - D[..., 0, 1] * G[..., 1]) / safe
        dl = -(-D[..., 1, 0] * G[..., 0] + D[..., 0, 0] * G[..., 1]) / safe
        scale = np.minimum(1.0, np.minimum(0.5 / np.maximum(np.abs(dx), 1e-300), 1.0 / np.maximum(np.abs(dl), 1e-300)))
        x = np.where(alive, x + scale * dx, x)
        ly = np.where(alive, np.minimum(ly + scale * dl, 0.0), ly)
        # drop seeds that converge: keep iterating harmlessly
    return x, ly, alive


def _orbit_from(x0, y0, p, spectrum, tspec) -> tuple:
    pts = []
    x, y = x0, y0
    for _ in range(p):
        pts.append((wrap_angle(float(x)), float(y)))
        x, y = return_map_arrays(np.float64(x), np.float64(y), spectrum, tspec)
    return tuple(pts)


def _refine_candidates(x, y, p, spectrum, tspec, y_floor, tol):
    """Newton-polish candidate points and build distinct orbits of minimal period ``p``."""
    sg = np.sign(y)
    keep = sg != 0
    x, y, sg = x[keep], y[keep], sg[keep]
    if x.size == 0:
        return []
    xr, lyr, alive = _newton(x, sg, np.log(np.abs(y)), p, spectrum, tspec)
    yr = sg * np.exp(lyr)
    with np.errstate(all="ignore"):
        xp, yp, J, ymin, _ = _period_map(xr, yr, p, spectrum, tspec)
    res = np.hypot(_wrap_diff(xp - xr), yp - yr)
    good = alive & np.isfinite(res) & (res < tol) & (ymin > y_floor)
    if not good.any():
        return []
    # coarse dedupe before the exact comparison
    key = np.stack([np.round(np.mod(xr[good], TWO_PI), 6), np.round(lyr[good], 6), sg[good]], axis=1)
    _, idx = np.unique(key, axis=0, return_index=True)
    cands = np.flatnonzero(good)[np.sort(idx)]
    out: list[PeriodicOrbit] = []
    for i in cands:
        pts = _orbit_from(xr[i], yr[i], p, spectrum, tspec)
        if _has_smaller_period(pts, p):
            continue
        orb = PeriodicOrbit(
            period=p,
            points=pts,
            word=ItineraryPath(tuple(Symbol.from_sign(q[1]) for q in pts)),
            multipliers=tuple(complex(v) for v in np.linalg.eigvals(J[i])),
            residual=float(res[i]),
        )
        if not any(orb.same_orbit(o) for o in out):
            out.append(orb)
    return out


def _has_smaller_period(pts, p) -> bool:
    for d in range(1, p):
        if p % d == 0 and _close(pts[0], pts[d], 1e-7):
            return True
    return False


@dataclass
class AttractorReport:
    """Periodic orbits of the return map found for one parameter set."""

    mu: float
    orbits: list = field(default_factory=list)
    discarded: int = 0
    transient: dict | None = None

    @property
    def attracting(self) -> list:
        return [o for o in self.orbits if o.attracting]

    @property
    def count(self) -> int:
        return len(self.attracting)

    @property
    def symmetric(self) -> bool:
        """The set of attracting orbits is mapped to itself by the symmetry."""
        att = self.attracting
        return all(any(o.is_mirror_of(q) for q in att) for o in att)

    def pairing(self) -> list:
        """For each orbit: index of its mirror image, or ``None``."""
        out = []
        for o in self.orbits:
            j = next((k for k, q in enumerate(self.orbits) if o.is_mirror_of(q)), None)
            out.append(j)
        return out


def periodic_orbit_search(
    max_period: int = 4,
    y_floor: float = 1e-6,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    grid: tuple[int, int] = (128, 128),
    tol: float = 1e-10,
) -> AttractorReport:
    """Grid-seeded damped Newton search for periodic points of ``R``.

    Seeds cover ``x`` uniformly and ``ln|y|`` uniformly on
    ``[ln y_floor, 0]`` on both sides. Orbits with a point below ``y_floor``
    or a residual above ``tol`` are discarded.
    """
    if not 1 <= max_period <= 6:
        raise ValueError("max_period must lie in 1..6")
    if y_floor < 1e-6:
        raise ValueError("y_floor must be at least 1e-6")
    nx, ny = grid
    xs = (np.arange(nx) + 0.5) * (TWO_PI / nx)
    ls = np.linspace(math.log(y_floor), 0.0, ny + 1)[:-1] + 0.5 * (-math.log(y_floor) / ny)
    X, L = np.meshgrid(xs, ls)
    X = np.concatenate([X.ravel(), X.ravel()])
    Y = np.concatenate([np.exp(L.ravel()), -np.exp(L.ravel())])
    report = AttractorReport(mu=tspec.mu)
    with np.errstate(all="ignore"):
        for p in range(1, max_period + 1):
            for orb in _refine_candidates(X, Y, p, spectrum, tspec, y_floor, tol):
                if not any(orb.same_orbit(o) for o in report.orbits):
                    report.orbits.append(orb)
    return report


# ---------------------------------------------------------------- splitting scan


def _switches(signs) -> int:
    return int(np.sum(np.diff(signs) != 0))


def attractor_scan(
    mus=(1e-3, 1e-2),
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    n_starts: int = 4096,
    n_transient: int = 200,
    max_period: int = 4,
    seed: int = 0,
    perturbation: float = 1e-9,
) -> list[AttractorReport]:
    """Attractors and transients of the split network, one report per ``mu``.

    Random starts on the whole wall are iterated for ``n_transient`` returns;
    their end points seed the periodic-orbit refinement. The transient kept
    in each report is the start with the most symbol switches before
    settling, together with whether perturbing the start by ``perturbation``
    in every direction preserves its itinerary (an open set of starts).
    """
    out = []
    for mu in mus:
        ts = replace(tspec, mu=float(mu))
        rng = make_rng(seed)
        x0 = rng.uniform(0.0, TWO_PI, n_starts)
        y0 = rng.uniform(-1.0, 1.0, n_starts)
        words, xe, ye, alive = _transients(x0, y0, n_transient, spectrum, ts)
        rep = AttractorReport(mu=float(mu))
        with np.errstate(all="ignore"):
            for p in range(1, max_period + 1):
                xp, yp, _, _, _ = _period_map(xe[alive], ye[alive], p, spectrum, ts)
                close = np.hypot(_wrap_diff(xp - xe[alive]), yp - ye[alive]) < 1e-8
                for orb in _refine_candidates(xe[alive][close], ye[alive][close], p, spectrum, ts, 0.0, 1e-10):
                    if not any(orb.same_orbit(o) for o in rep.orbits):
                        rep.orbits.append(orb)
        sw = np.array([_switches(w) if a else -1 for w, a in zip(words, alive)])
        best = int(np.argmax(sw))
        word = words[best]
        settle = _settle_index(word)
        robust = _robust(x0[best], y0[best], word, n_transient, spectrum, ts, perturbation)
        rep.transient = {
            "x0": float(x0[best]),
            "y0": float(y0[best]),
            "word": str(ItineraryPath(tuple(Symbol.from_sign(s) for s in word[: settle + 1]))),
            "switches": int(sw[best]),
            "robust": robust,
            "escaped_starts": int(np.sum(~alive)),
        }
        out.append(rep)
    return out


def _transients(x, y, n, spectrum, ts):
    signs = [np.sign(y)]
    alive = np.abs(y) <= 1
    with np.errstate(all="ignore"):
        for _ in range(n):
            x, y = return_map_arrays(x, y, spectrum, ts)
            alive &= np.abs(y) <= 1
            signs.append(np.sign(y))
    S = np.array(signs).T
    return S, x, y, alive & np.all(S != 0, axis=1)


def _settle_index(word) -> int:
    """Index of the last switch; the itinerary is eventually periodic afterwards."""
    idx = np.flatnonzero(np.diff(word) != 0)
    return int(idx[-1] + 1) if idx.size else 0


def _robust(x, y, word, n, spectrum, ts, eps) -> bool:
    dx = np.array([eps, -eps, 0.0, 0.0, eps, -eps])
    dy = np.array([0.0, 0.0, eps, -eps, eps, -eps])
    k = _settle_index(word) + 1
    S, _, _, alive = _transients(x + dx, y + dy, max(k, 1), spectrum, ts)
    return bool(alive.all() and np.all(S[:, :k] == np.asarray(word[:k])))


# ---------------------------------------------------------------- horseshoe check


@dataclass(frozen=True)
class HorseshoeEvidence:
    rect: tuple  # (x_lo, x_hi, y_lo, y_hi), x measured as an unwrapped interval
    crossing_strips: tuple  # y-intervals of horizontal strips whose image crosses rect
    components: tuple  # maximal runs of crossing strips as y-intervals

    @property
    def double_crossing(self) -> bool:
        return len(self.components) >= 2


def _in_x(x, lo, hi):
    c = 0.5 * (lo + hi)
    return np.abs(_wrap_diff(x - c)) <= 0.5 * (hi - lo)


def horseshoe_contrast(
    rect: tuple,
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    n_strips: int = 400,
    n_edge: int = 64,
) -> HorseshoeEvidence:
    """Topological crossing check for the rectangle ``Q = [x_lo, x_hi] x [y_lo, y_hi]``.

    A thin horizontal strip ``H`` of ``Q`` crosses when the images of its two
    vertical edges lie beyond opposite horizontal sides of ``Q`` and the
    images of its horizontal edges stay within the width of ``Q`` wherever
    they are within its height, so ``R(H)`` cuts through ``Q`` from bottom to
    top. Strips are log-spaced in ``|y|``; a double crossing needs two runs
    of crossing strips separated by a non-crossing one.
    """
    xl, xh, yl, yh = (float(v) for v in rect)
    if not (xl < xh and yl < yh):
        raise InvalidRectangle("rectangle bounds must be increasing")
    if yl <= 0 <= yh:
        raise InvalidRectangle("rectangle touches the stable circle y = 0")
    if xh - xl >= TWO_PI:
        raise InvalidRectangle("rectangle wraps around the wall")
    sgn = 1.0 if yl > 0 else -1.0
    a, b = sorted((abs(yl), abs(yh)))
    edges = sgn * np.geomspace(a, b, n_strips + 1)
    edges.sort()
    xs = np.linspace(xl, xh, n_edge)
    crossing = np.zeros(n_strips, dtype=bool)
    with np.errstate(all="ignore"):
        for i in range(n_strips):
            lo, hi = edges[i], edges[i + 1]
            vy = np.linspace(lo, hi, 8)
            _, y0 = return_map_arrays(np.full(8, xl), vy, spectrum, tspec)
            _, y1 = return_map_arrays(np.full(8, xh), vy, spectrum, tspec)
            above0, below0 = np.all(y0 > yh), np.all(y0 < yl)
            above1, below1 = np.all(y1 > yh), np.all(y1 < yl)
            if not ((above0 and below1) or (below0 and above1)):
                continue
            ok = True
            for hy in (lo, hi):
                ex, ey = return_map_arrays(xs, np.full(n_edge, hy), spectrum, tspec)
                inside = (ey >= yl) & (ey <= yh)
                if not np.all(_in_x(ex[inside], xl, xh)):
                    ok = False
                    break
            crossing[i] = ok
    strips = tuple((float(edges[i]), float(edges[i + 1])) for i in np.flatnonzero(crossing))
    comps = []
    i = 0
    while i < n_strips:
        if crossing[i]:
            j = i
            while j + 1 < n_strips and crossing[j + 1]:
                j += 1
            comps.append((float(edges[i]), float(edges[j + 1])))
            i = j + 1
        else:
            i += 1
    return HorseshoeEvidence((xl, xh, yl, yh), strips, tuple(comps))


def horseshoe_search(
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    *,
    floors=(1e-8, 1e-7, 1e-6, 1e-5),
    tops=(1e-4, 1e-3, 1e-2, 1e-1),
    half_widths=(0.5, 1.0, 1.5),
    n_strips: int = 200,
) -> list[HorseshoeEvidence]:
    """Run the crossing check over a family of log-spaced rectangles centred at ``x = 0``."""
    out = []
    for w in half_widths:
        for lo in floors:
            for hi in tops:
                if lo < hi:
                    out.append(horseshoe_contrast((-w, w, lo, hi), spectrum, tspec, n_strips=n_strips))
    return out
