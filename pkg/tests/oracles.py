"""Independent reference computations used by the tests.

None of these call into the package: they integrate the linear vector field
directly, differentiate numerically or rebuild maps from their definitions.
"""

from __future__ import annotations

import math

import numpy as np


def field(state, C, E, alpha):
    """Cartesian vector field of the linear saddle-focus; ``state`` has shape (3, n)."""
    x, y, z = state
    return np.stack([-C * x - alpha * y, alpha * x - C * y, E * z])


def rk4(state, t, C, E, alpha, n_steps):
    """Classical RK4 from 0 to ``t`` (per column) with ``n_steps`` equal steps."""
    s = np.array(state, dtype=float)
    h = np.asarray(t, dtype=float) / n_steps
    for _ in range(n_steps):
        k1 = field(s, C, E, alpha)
        k2 = field(s + 0.5 * h * k1, C, E, alpha)
        k3 = field(s + 0.5 * h * k2, C, E, alpha)
        k4 = field(s + h * k3, C, E, alpha)
        s = s + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return s


def rk4_propagator(t, C, E, alpha, n_steps=4096):
    """The matrix of ``n_steps`` RK4 steps of size ``t / n_steps`` for the linear field.

    For a linear field one RK4 step is the degree-4 Taylor polynomial of
    ``exp(hL)``; powers are taken by repeated squaring, so ``n_steps`` should
    be a power of two. Shape ``(n, 3, 3)``.
    """
    L = np.array([[-C, -alpha, 0.0], [alpha, -C, 0.0], [0.0, 0.0, E]])
    h = (np.atleast_1d(np.asarray(t, dtype=float)) / n_steps)[:, None, None]
    hL = h * L
    step = np.eye(3) + hL
    term = hL
    for k in (2, 3, 4):
        term = term @ hL / k
        step = step + term
    return np.linalg.matrix_power(step, n_steps)


def propagate(state, t, C, E, alpha, h_max=2e-3):
    """RK4 solution at time ``t`` (per column) with step at most ``h_max``.

    Step counts are powers of two chosen per point, so the round-off of the
    repeated squaring stays proportional to the integration time.
    """
    state = np.asarray(state, dtype=float)
    t = np.asarray(t, dtype=float)
    n = 2 ** np.ceil(np.log2(np.maximum(np.abs(t) / h_max, 1.0))).astype(int)
    out = np.empty_like(state)
    for m in np.unique(n):
        sel = n == m
        P = rk4_propagator(t[sel], C, E, alpha, int(m))
        out[:, sel] = np.einsum("nij,jn->in", P, state[:, sel])
    return out


def integrate_to_cap(theta, y, C, E, alpha, newton=3):
    """Hitting time of ``|z| = 1`` and the hitting point, from RK4 alone.

    The hitting time solves ``ln|z(t)| = 0``; Newton uses the vector field's
    logarithmic growth rate ``E`` as the derivative and restarts RK4 from the
    wall each iteration.
    """
    theta = np.asarray(theta, dtype=float)
    y = np.asarray(y, dtype=float)
    s0 = np.stack([np.cos(theta), np.sin(theta), y])
    t = np.zeros_like(y)
    s = s0
    for _ in range(newton):
        t = t - np.log(np.abs(s[2])) / E
        s = propagate(s0, t, C, E, alpha)
    return t, s


def reference_return(x, y, C, E, alpha, A=((1.0, 0.0), (0.0, 1.0)), mu=0.0):
    """Return map rebuilt from the definitions, one scalar point at a time.

    Top exit ``(r, phi)`` goes to ``(A p)_0`` and ``mu + (A p)_1`` with
    ``p = (r cos phi, r sin phi)``. A bottom exit is conjugated through the
    symmetry ``(x, y) -> (x + pi, -y)``: mirror the start, apply the top
    branch, mirror back.
    """
    if y < 0:
        xm, ym = reference_return(x + math.pi, -y, C, E, alpha, A, mu)
        return (xm + math.pi) % (2 * math.pi), -ym
    r = y ** (C / E)
    phi = x - (alpha / E) * math.log(y)
    p0, p1 = r * math.cos(phi), r * math.sin(phi)
    u0 = A[0][0] * p0 + A[0][1] * p1
    u1 = A[1][0] * p0 + A[1][1] * p1
    return u0 % (2 * math.pi), mu + u1


def wrap(a):
    return (np.asarray(a) + np.pi) % (2 * np.pi) - np.pi


def mp_return(x, y, C, E, alpha, A, mu=0.0):
    """The return map in mpmath arithmetic (unwrapped ``x``), from the definitions."""
    import mpmath as mp

    side = 1 if y > 0 else -1
    ay = abs(y)
    r = ay ** (mp.mpf(C) / E)
    phi = x - (mp.mpf(alpha) / E) * mp.log(ay)
    p0, p1 = r * mp.cos(phi), r * mp.sin(phi)
    u0 = A[0][0] * p0 + A[0][1] * p1
    u1 = A[1][0] * p0 + A[1][1] * p1
    if side > 0:
        return u0, mu + u1
    return mp.pi - u0, -mu + u1


def mp_jacobian(x, y, C, E, alpha, A, mu=0.0, dps=50):
    """Jacobian of :func:`mp_return` by high-precision central differences."""
    import mpmath as mp

    with mp.workdps(dps):
        x, y = mp.mpf(x), mp.mpf(y)
        J = np.empty((2, 2))
        for j in range(2):
            def g(t, i, j=j):
                p = [x, y]
                p[j] = t
                return mp_return(p[0], p[1], C, E, alpha, A, mu)[i]

            for i in range(2):
                J[i, j] = float(mp.diff(lambda t: g(t, i), (x, y)[j]))
    return J
