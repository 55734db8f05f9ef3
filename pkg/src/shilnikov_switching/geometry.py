"""Linearized flow in the cylindrical isolating block around the saddle-focus.

Coordinates follow the usual cylindrical chart ``(rho, theta, z)``. The block
``V`` has radius 1 and height 2; its wall carries the chart ``(x, y)`` and the
two caps carry polar charts ``(r, phi)``. Cap angles are kept unwrapped so
that winding can be counted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import singledispatch

from .errors import HypothesisViolation, OmegaHit, OutOfBlock, StableManifoldInput

TWO_PI = 2.0 * math.pi
# corner detection tolerance for the non-transverse set
OMEGA_TOL = 1e-14


def wrap_angle(a: float) -> float:
    """Reduce an angle to ``[0, 2*pi)``."""
    w = a % TWO_PI
    # a tiny negative input rounds up to exactly 2*pi
    return 0.0 if w == TWO_PI else w


def angle_diff(a: float, b: float) -> float:
    """Signed difference ``a - b`` reduced to ``[-pi, pi)``."""
    return (a - b + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class SaddleSpectrum:
    """Eigenvalues ``-C +- i*alpha`` and ``E`` of the saddle-focus.

    ``contrast=True`` must be passed explicitly to allow ``C <= E``; all
    results in that regime are outside the attracting setting.
    """

    C: float = 2.0
    E: float = 1.0
    alpha: float = 1.0
    contrast: bool = False

    def __post_init__(self):
        for name in ("C", "E", "alpha"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise HypothesisViolation(f"{name} must be a positive real, got {v!r}")
        if self.C <= self.E and not self.contrast:
            raise HypothesisViolation(
                f"C > E required (got C={self.C}, E={self.E}); set contrast=True to study C <= E"
            )

    @property
    def delta(self) -> float:
        """Saddle index ``C / E``."""
        return self.C / self.E

    @property
    def twist(self) -> float:
        """Angular gain per unit of ``-ln|y|``, i.e. ``alpha / E``."""
        return self.alpha / self.E


CANONICAL = SaddleSpectrum()


class Side(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    STABLE = "stable"


class Cap(enum.Enum):
    TOP = "top"
    BOTTOM = "bottom"

    @property
    def other(self) -> "Cap":
        return Cap.BOTTOM if self is Cap.TOP else Cap.TOP

    @property
    def height(self) -> float:
        return 1.0 if self is Cap.TOP else -1.0


class Boundary(enum.Enum):
    SIGMA_IN_PLUS = "SigmaInPlus"
    SIGMA_IN_MINUS = "SigmaInMinus"
    # wall circle y == 0; kept apart from Omega so segments may contain beta(0)
    SIGMA_IN_STABLE = "SigmaInStable"
    SIGMA_OUT_TOP = "SigmaOutTop"
    SIGMA_OUT_BOTTOM = "SigmaOutBottom"
    OMEGA = "Omega"
    INTERIOR = "Interior"


@dataclass(frozen=True)
class CylinderPoint:
    rho: float
    theta: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class WallPoint:
    """Point ``(x, y)`` on the ingoing wall; ``x`` is stored in ``[0, 2*pi)``."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", wrap_angle(self.x))
        if abs(self.y) > 1.0:
            raise OutOfBlock(f"wall height |y|={abs(self.y)} exceeds 1")

    @property
    def side(self) -> Side:
        if self.y > 0:
            return Side.PLUS
        if self.y < 0:
            return Side.MINUS
        return Side.STABLE

    def to_cylinder(self) -> CylinderPoint:
        return CylinderPoint(1.0, self.x, self.y)


@dataclass(frozen=True)
class CapPoint:
    """Point on an outgoing cap; ``phi`` is an unwrapped angle."""

    r: float
    phi: float
    cap: Cap

    @property
    def revolutions(self) -> float:
        return self.phi / TWO_PI

    def cartesian(self) -> tuple[float, float]:
        return self.r * math.cos(self.phi), self.r * math.sin(self.phi)

    def to_cylinder(self) -> CylinderPoint:
        return CylinderPoint(self.r, self.phi, self.cap.height)


def local_flow(p: CylinderPoint, t: float, spectrum: SaddleSpectrum = CANONICAL) -> CylinderPoint:
    """Exact time-``t`` map of the linear field; defined for every real ``t``."""
    return CylinderPoint(
        p.rho * math.exp(-spectrum.C * t),
        p.theta + spectrum.alpha * t,
        p.z * math.exp(spectrum.E * t),
    )


def _check_off_stable(y: float) -> float:
    if y == 0:
        raise StableManifoldInput("y = 0 lies on the local stable manifold; flight time is infinite")
    return abs(y)


def time_of_flight(w: WallPoint, spectrum: SaddleSpectrum = CANONICAL) -> float:
    """Time spent in the block by the trajectory entering at ``w``."""
    return -math.log(_check_off_stable(w.y)) / spectrum.E


def local_map(w: WallPoint, spectrum: SaddleSpectrum = CANONICAL) -> CapPoint:
    """First exit point on the caps for a trajectory entering at ``w``.

    ``y > 0`` exits through the top cap and ``y < 0`` through the bottom one,
    with ``r = |y|**delta`` in both cases.
    """
    ay = _check_off_stable(w.y)
    r = ay ** spectrum.delta
    phi = w.x - spectrum.twist * math.log(ay)
    return CapPoint(r, phi, Cap.TOP if w.y > 0 else Cap.BOTTOM)


@singledispatch
def apply_symmetry(p):
    """The Z2 action of ``-Id`` expressed in each chart. It is an involution."""
    raise TypeError(f"no symmetry action defined for {type(p).__name__}")


@apply_symmetry.register
def _(p: CylinderPoint) -> CylinderPoint:
    return CylinderPoint(p.rho, p.theta + math.pi, -p.z)


@apply_symmetry.register
def _(p: WallPoint) -> WallPoint:
    return WallPoint(p.x + math.pi, -p.y)


@apply_symmetry.register
def _(p: CapPoint) -> CapPoint:
    # unwrapped phi: going top -> bottom adds pi, bottom -> top removes it
    shift = math.pi if p.cap is Cap.TOP else -math.pi
    return CapPoint(p.r, p.phi + shift, p.cap.other)


def classify_boundary(p: CylinderPoint, tol: float = OMEGA_TOL) -> Boundary:
    if p.rho < -tol or p.rho > 1.0 + tol or abs(p.z) > 1.0 + tol:
        raise OutOfBlock(f"point {p} lies outside the block")
    on_wall = abs(p.rho - 1.0) <= tol
    on_cap = abs(abs(p.z) - 1.0) <= tol
    if on_wall and on_cap:
        return Boundary.OMEGA
    if on_cap:
        return Boundary.SIGMA_OUT_TOP if p.z > 0 else Boundary.SIGMA_OUT_BOTTOM
    if on_wall:
        if p.z > 0:
            return Boundary.SIGMA_IN_PLUS
        if p.z < 0:
            return Boundary.SIGMA_IN_MINUS
        return Boundary.SIGMA_IN_STABLE
    return Boundary.INTERIOR


def exit_point(w: WallPoint, spectrum: SaddleSpectrum = CANONICAL) -> CylinderPoint:
    """Flow ``w`` for its flight time; raises if the exit is on the corner set."""
    t = time_of_flight(w, spectrum)
    q = local_flow(w.to_cylinder(), t, spectrum)
    if classify_boundary(q) is Boundary.OMEGA:
        raise OmegaHit(f"trajectory from {w} exits on the corner circle")
    return q
