"""Arithmetic backends for evaluating long compositions of the return map.

Orbits near the network lose height double-exponentially, so a few returns
exhaust the binary64 exponent range long before the mantissa is the limiting
factor. Three interchangeable backends are provided:

``binary64``
    Plain floats. Raises :class:`PrecisionExhausted` once a height underflows.
``log64``
    Stores ``(x, sign(y), ln|y|)`` with binary64 components, so heights have
    no exponent floor while the mantissa stays at 53 bits.
``extended``
    mpmath numbers with a configurable mantissa; exponents are unbounded too.

A state is an opaque tuple owned by its backend. All backends keep ``x``
unwrapped so the phase ``x - (alpha/E) ln|y|`` is continuous along segments.
"""

from __future__ import annotations

import math
import sys
from types import SimpleNamespace

import mpmath

from .errors import PrecisionExhausted
from .geometry import CANONICAL, SaddleSpectrum, TWO_PI
from .maps import DEFAULT_TRANSITION, MATH, TransitionSpec, _kernel

PRECISION_MODES = ("binary64", "log64", "extended")
FLOAT_TINY = sys.float_info.min


class Backend:
    """Common interface; subclasses implement ``make``, ``step`` and the readers."""

    name = "abstract"

    def __init__(self, spectrum: SaddleSpectrum = CANONICAL, tspec: TransitionSpec = DEFAULT_TRANSITION):
        self.spectrum = spectrum
        self.tspec = tspec

    # parameters are floats except in extended mode
    def param(self, s):
        return float(s)

    def mid(self, a, b):
        return a + (b - a) / 2

    def make(self, x, y):
        raise NotImplementedError

    def make_log(self, x, sign: int, log_abs_y: float):
        raise NotImplementedError

    def step(self, st):
        raise NotImplementedError

    def sign(self, st) -> int:
        raise NotImplementedError

    def log_abs_y(self, st) -> float:
        raise NotImplementedError

    def x(self, st) -> float:
        raise NotImplementedError

    def phase(self, st) -> float:
        """Exit angle ``x - (alpha/E) ln|y|`` of the next passage, unwrapped."""
        return self.x(st) - self.spectrum.twist * self.log_abs_y(st)

    def height(self, st) -> float:
        """``y`` as a float; may underflow to a signed zero."""
        ly = self.log_abs_y(st)
        return math.copysign(math.exp(ly), self.sign(st)) if ly > -745.2 else 0.0 * self.sign(st)

    def wall(self, st) -> tuple[float, float]:
        return self.x(st) % TWO_PI, self.height(st)

    def signs(self, st, n: int) -> list[int]:
        """Signs of the heights of ``st`` and its next ``n - 1`` returns."""
        out = []
        for i in range(n):
            if i:
                st = self.step(st)
            out.append(self.sign(st))
        return out

    def describe(self) -> dict:
        return {"precision": self.name}


class Binary64(Backend):
    name = "binary64"

    def make(self, x, y):
        return (float(x), float(y))

    def make_log(self, x, sign, log_abs_y):
        return (float(x), math.copysign(math.exp(log_abs_y), sign))

    def step(self, st):
        x, y = st
        if y == 0:
            raise PrecisionExhausted("return map evaluated on the stable manifold")
        xn, yn, r, _ = _kernel(x, y, self.spectrum, self.tspec, MATH)
        if r < FLOAT_TINY:
            raise PrecisionExhausted(f"cap radius {r!r} underflows binary64")
        return (xn, yn)

    def sign(self, st):
        y = st[1]
        return (y > 0) - (y < 0)

    def log_abs_y(self, st):
        return math.log(abs(st[1])) if st[1] else -math.inf

    def x(self, st):
        return st[0]

    def height(self, st):
        return st[1]


class Log64(Backend):
    name = "log64"

    def make(self, x, y):
        y = float(y)
        return self.make_log(x, (y > 0) - (y < 0), math.log(abs(y)) if y else -math.inf)

    def make_log(self, x, sign, log_abs_y):
        return (float(x), int(sign), float(log_abs_y))

    def step(self, st):
        x, sg, ly = st
        if sg == 0:
            raise PrecisionExhausted("return map evaluated on the stable manifold")
        sp, ts = self.spectrum, self.tspec
        phi = x - sp.twist * ly
        lr = sp.delta * ly
        c, s = math.cos(phi), math.sin(phi)
        (a11, a12), (a21, a22) = ts.A
        c0 = a11 * c + a12 * s
        c1 = a21 * c + a22 * s
        r = math.exp(lr) if lr > -745.2 else 0.0
        xn = (1 - sg) * (math.pi / 2) + sg * r * c0
        if ts.mu == 0 or lr < -745.2:
            # height is r*c1 exactly (or the offset dominates beyond any float)
            if ts.mu == 0:
                return (xn, (c1 > 0) - (c1 < 0), lr + math.log(abs(c1)) if c1 else -math.inf)
            yn = sg * ts.mu
        else:
            yn = sg * ts.mu + r * c1
        return (xn, (yn > 0) - (yn < 0), math.log(abs(yn)) if yn else -math.inf)

    def sign(self, st):
        return st[1]

    def log_abs_y(self, st):
        return st[2]

    def x(self, st):
        return st[0]


class Extended(Backend):
    """mpmath arithmetic on a private context so the global precision is untouched."""

    name = "extended"

    def __init__(self, spectrum=CANONICAL, tspec=DEFAULT_TRANSITION, bits: int = 256):
        super().__init__(spectrum, tspec)
        if bits < 53:
            raise ValueError("extended precision needs at least 53 mantissa bits")
        self.bits = int(bits)
        ctx = mpmath.MPContext()
        ctx.prec = self.bits
        self.ctx = ctx
        self.m = SimpleNamespace(
            log=ctx.log, sin=ctx.sin, cos=ctx.cos, pi=ctx.pi, sign=lambda v: ctx.mpf(ctx.sign(v))
        )
        self._sp = SimpleNamespace(delta=ctx.mpf(spectrum.C) / spectrum.E, twist=ctx.mpf(spectrum.alpha) / spectrum.E)
        self._ts = SimpleNamespace(A=tuple(tuple(ctx.mpf(v) for v in row) for row in tspec.A), mu=ctx.mpf(tspec.mu))

    def param(self, s):
        return self.ctx.mpf(s)

    def make(self, x, y):
        return (self.ctx.mpf(x), self.ctx.mpf(y))

    def make_log(self, x, sign, log_abs_y):
        return (self.ctx.mpf(x), sign * self.ctx.exp(self.ctx.mpf(log_abs_y)))

    def step(self, st):
        x, y = st
        if y == 0:
            raise PrecisionExhausted("return map evaluated on the stable manifold")
        xn, yn, _, _ = _kernel(x, y, self._sp, self._ts, self.m)
        return (xn, yn)

    def sign(self, st):
        return int(self.ctx.sign(st[1]))

    def log_abs_y(self, st):
        return float(self.ctx.log(abs(st[1]))) if st[1] else -math.inf

    def x(self, st):
        return float(st[0])

    def phase(self, st):
        x, y = st
        return float(x - self._sp.twist * self.ctx.log(abs(y))) if y else math.inf

    def describe(self):
        return {"precision": self.name, "bits": self.bits}


def make_backend(
    precision: str = "binary64",
    spectrum: SaddleSpectrum = CANONICAL,
    tspec: TransitionSpec = DEFAULT_TRANSITION,
    bits: int = 256,
) -> Backend:
    if precision == "binary64":
        return Binary64(spectrum, tspec)
    if precision == "log64":
        return Log64(spectrum, tspec)
    if precision == "extended":
        return Extended(spectrum, tspec, bits)
    raise ValueError(f"unknown precision mode {precision!r}; expected one of {PRECISION_MODES}")
