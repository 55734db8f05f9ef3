"""Transition maps along the two connections and the first return map.

The transition from the top cap is affine in Cartesian cap coordinates
``(u, v) = (r cos phi, r sin phi)``::

    x = (A @ (u, v))[0]  mod 2*pi
    y = mu + (A @ (u, v))[1]

The bottom-cap transition is the conjugate of the top one by ``-Id``, which
works out to ``x = pi - (A @ (u, v))[0]`` and ``y = -mu + (A @ (u, v))[1]``.
Only the top map is configurable.

The formulas below are written once over a tiny math namespace so the same
code runs on floats, numpy arrays and mpmath numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import SimpleNamespace

import numpy as np

from .errors import LeftNeighbourhood, OutsideFlowBox
from .geometry import (
    CANONICAL,
    Cap,
    CapPoint,
    SaddleSpectrum,
    TWO_PI,
    WallPoint,
    _check_off_stable,
    local_map,
)
from .paths import Symbol

MATH = SimpleNamespace(
    log=math.log, sin=math.sin, cos=math.cos, pi=math.pi, sign=lambda v: math.copysign(1.0, v)
)
NUMPY = SimpleNamespace(log=np.log, sin=np.sin, cos=np.cos, pi=np.pi, sign=np.sign)

IDENTITY = ((1.0, 0.0), (0.0, 1.0))


@dataclass(frozen=True)
class TransitionSpec:
    """Affine global map data.

    ``A`` is the differential of the top transition at the cap centre, ``mu``
    the splitting offset (0 keeps both connections), ``tau`` the time spent in
    the connection tube and ``r_max`` the radius on the caps where the flow-box
    description is trusted. Entry angles are fixed at 0 and pi.
    """

    A: tuple = IDENTITY
    mu: float = 0.0
    tau: float = 1.0
    r_max: float = 1.0
    entry_angles: tuple = field(default=(0.0, math.pi), init=False)

    def __post_init__(self):
        A = tuple(tuple(float(v) for v in row) for row in self.A)
        if len(A) != 2 or any(len(row) != 2 for row in A):
            raise ValueError("A must be a 2x2 matrix")
        object.__setattr__(self, "A", A)
        if self.det == 0:
            raise ValueError("A must be invertible")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")

    @property
    def det(self) -> float:
        (a, b), (c, d) = self.A
        return a * d - b * c

    @property
    def norm(self) -> float:
        """Spectral norm of ``A``."""
        return float(np.linalg.norm(np.array(self.A), 2))

    @property
    def intact(self) -> bool:
        return self.mu == 0


DEFAULT_TRANSITION = TransitionSpec()


def _affine(r, phi, side, ts: TransitionSpec, m):
    """Transition of the cap point ``(r, phi)``; ``side`` is +1 (top) or -1 (bottom)."""
    (a11, a12), (a21, a22) = ts.A
    c, s = m.cos(phi), m.sin(phi)
    u0 = r * (a11 * c + a12 * s)
    u1 = r * (a21 * c + a22 * s)
    x = (1 - side) * (m.pi / 2) + side * u0
    y = side * ts.mu + u1
    return x, y


def _kernel(x, y, sp: SaddleSpectrum, ts: TransitionSpec, m):
    """Return map without domain checks. Returns ``(x', y', r, phi)`` with ``x'`` unwrapped."""
    side = m.sign(y)
    ay = abs(y)
    phi = x - sp.twist * m.log(ay)
    r = ay ** sp.delta
    xn, yn = _affine(r, phi, side, ts, m)
    return xn, yn, r, phi


def transition(c: CapPoint, tspec: TransitionSpec = DEFAULT_TRANSITION, *, check: bool = True) -> WallPoint:
    if check and c.r > tspec.r_max:
        raise OutsideFlowBox(f"cap radius {c.r} exceeds r_max={tspec.r_max}")
    side = 1.0 if c.cap is Cap.TOP else -1.0
    x, y = _affine(c.r, c.phi, side, tspec, MATH)
    if abs(y) > 1.0:
        raise LeftNeighbourhood(f"transition image height {y} leaves the wall chart")
    return WallPoint(x, y)


def return_map(
    w: WallPoint, spectrum: SaddleSpectrum = CANONICAL, tspec: TransitionSpec = DEFAULT_TRANSITION
) -> tuple[WallPoint, Symbol]:
    """``Psi o Phi_O``; the symbol names the connection followed on the way."""
    return transition(local_map(w, spectrum), tspec), Symbol.from_sign(w.y)


def return_jacobian(
    w: WallPoint, spectrum: SaddleSpectrum = CANONICAL, tspec: TransitionSpec = DEFAULT_TRANSITION
) -> np.ndarray:
    _check_off_stable(w.y)
    return return_jacobian_arrays(np.float64(w.x), np.float64(w.y), spectrum, tspec)


def return_map_arrays(x, y, spectrum: SaddleSpectrum = CANONICAL, tspec: TransitionSpec = DEFAULT_TRANSITION):
    """Vectorised return map (no domain checks); ``x'`` is wrapped to ``[0, 2*pi)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        xn, yn, _, _ = _kernel(x, y, spectrum, tspec, NUMPY)
    return np.mod(xn, TWO_PI), yn


def return_jacobian_arrays(x, y, spectrum: SaddleSpectrum = CANONICAL, tspec: TransitionSpec = DEFAULT_TRANSITION):
    """Analytic Jacobian(s) of the return map, shape ``(..., 2, 2)``.

    Chain rule through ``r = |y|**delta``, ``phi = x - (alpha/E) ln|y|``, the
    Cartesian cap coordinates and ``A``; the bottom branch flips the sign of
    the first row because ``x' = pi - (A u)[0]`` there.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d, k = spectrum.delta, spectrum.twist
    side = np.sign(y)
    phi = x - k * np.log(np.abs(y))
    r = np.abs(y) ** d
    c, s = np.cos(phi), np.sin(phi)
    q = r / y
    M = np.empty(np.broadcast(x, y).shape + (2, 2))
    M[..., 0, 0] = -r * s
    M[..., 0, 1] = q * (d * c + k * s)
    M[..., 1, 0] = r * c
    M[..., 1, 1] = q * (d * s - k * c)
    J = np.asarray(tspec.A) @ M
    J[..., 0, :] *= side[..., None]
    return J
