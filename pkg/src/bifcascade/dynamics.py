"""Periodic orbits of f_c(z) = z**2 + c by multiple shooting.

A period-n cycle is the solution of the cyclic system

    g_i(z) = z_i**2 + c - z_{i+1 mod n} = 0,   i = 0..n-1.

Its Jacobian is 2*z_i on the diagonal and -1 on the cyclic superdiagonal,
so every linear solve is a forward recurrence plus one scalar closure
equation, O(n) regardless of the period.  The same elimination, bordered
by the multiplier equation prod(2 z_i) = lambda, gives Newton steps in
(z, c) for fixed multiplier; the component geometry is built on that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    CascadeError,
    ContinuationBlockedError,
    DivergedOrbitError,
    NoConvergenceError,
    SingularSystemError,
)
from .precision import BINARY64, Precision

ESCAPE_BOUND = 1e6
MAX_ITER = 200
MAX_BISECTION_DEPTH = 40


@dataclass(frozen=True)
class PeriodicOrbit:
    parameter: Any
    period: int
    points: tuple
    multiplier: Any
    residual: float
    exact_period: bool

    def __post_init__(self):
        if len(self.points) != self.period:
            raise ValueError("number of points must equal the period")


class StepRejected(CascadeError):
    """A continuation step that converged somewhere implausible."""


def iterate_with_derivatives(c, z0, n: int, *, escape: float = ESCAPE_BOUND,
                             precision: Precision = BINARY64):
    """Forward orbit z_0..z_n with d(f^n)/dz and d(f^n)/dc at z0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with precision.scope():
        c = precision.cnum(c)
        z = precision.cnum(z0)
        dz = precision.cnum(1)
        dc = precision.cnum(0)
        orbit = [z]
        for k in range(n):
            dz = 2 * z * dz
            dc = 2 * z * dc + 1
            z = z * z + c
            if not abs(z) <= escape:
                raise DivergedOrbitError(k + 1, z)
            orbit.append(z)
        return orbit, dz, dc


def multiplier_of(points: Sequence, precision: Precision = BINARY64):
    if len(points) == 0:
        raise ValueError("empty cycle")
    with precision.scope():
        rho = precision.cnum(1)
        for z in points:
            rho = rho * (2 * z)
        return rho


def cycle_residual(c, points: Sequence) -> float:
    n = len(points)
    worst = 0.0
    for i in range(n):
        r = abs(points[i] * points[i] + c - points[(i + 1) % n])
        if not r <= worst:
            worst = r
    return float(worst)


def _residuals(c, z):
    n = len(z)
    g = [z[i] * z[i] + c - z[i + 1] for i in range(n - 1)]
    g.append(z[-1] * z[-1] + c - z[0])
    return g


def _maxabs(values) -> float:
    worst = 0.0
    for v in values:
        a = abs(v)
        if not a <= worst:
            worst = a
    return float(worst)


def _cyclic_solve(z, g, eps: float):
    """Solve d_{i+1} = 2 z_i d_i + g_i with d_n = d_0.  Returns (d, rho)."""
    n = len(z)
    a = 1
    e = 0
    for i in range(n):
        t = 2 * z[i]
        a = t * a
        e = t * e + g[i]
    denom = 1 - a
    if abs(denom) <= 10 * eps:
        raise SingularSystemError("cycle multiplier is 1: Jacobian is singular")
    d = e / denom
    out = [d]
    for i in range(n - 1):
        d = 2 * z[i] * d + g[i]
        out.append(d)
    return out, a


def _bordered_solve(z, g, rhs_mult, eps: float):
    """Newton system in (z, c) with the multiplier equation appended.

    Solves  dz_{i+1} = 2 z_i dz_i + dc + g_i (cyclic)  and
    sum_i (d rho / d z_i) dz_i = rhs_mult.  Returns (dz, dc, rho).
    """
    n = len(z)
    A = [None] * n
    B = [None] * n
    E = [None] * n
    a, b, e = 1, 0, 0
    for i in range(n):
        A[i], B[i], E[i] = a, b, e
        t = 2 * z[i]
        a = t * a
        b = t * b + 1
        e = t * e + g[i]
    # d rho / d z_i = 2 * prod_{j<i} 2 z_j * prod_{j>i} 2 z_j
    sa = sb = se = 0
    suf = 1
    for i in range(n - 1, -1, -1):
        w = 2 * A[i] * suf
        sa += w * A[i]
        sb += w * B[i]
        se += w * E[i]
        suf = suf * (2 * z[i])
    a11, a12, r1 = a - 1, b, -e
    a21, a22, r2 = sa, sb, rhs_mult - se
    det = a11 * a22 - a12 * a21
    scale = abs(a11 * a22) + abs(a12 * a21)
    if not abs(det) > 10 * eps * scale:
        raise SingularSystemError("bordered multiplier system is singular")
    x = (r1 * a22 - a12 * r2) / det
    y = (a11 * r2 - a21 * r1) / det
    dz = [A[i] * x + B[i] * y + E[i] for i in range(n)]
    return dz, y, a


def parameter_tangent(c, points: Sequence, precision: Precision = BINARY64):
    """dz_i/dc along the cycle and d(multiplier)/dc."""
    with precision.scope():
        ones = [1] * len(points)
        w, rho = _cyclic_solve(points, ones, precision.eps)
        drho = 0
        n = len(points)
        pre = [None] * n
        a = 1
        for i in range(n):
            pre[i] = a
            a = a * (2 * points[i])
        suf = 1
        for i in range(n - 1, -1, -1):
            drho += 2 * pre[i] * suf * w[i]
            suf = suf * (2 * points[i])
        return w, drho


def _prime_factors(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def has_exact_period(points: Sequence, tol: float) -> bool:
    """True unless the cycle repeats with a proper divisor of its length.

    Checking the maximal proper divisors n/p suffices.  A coincidence test
    on binary64 coordinates catches any remaining near-equal pair.
    """
    n = len(points)
    thresh = 10 * tol
    for p in _prime_factors(n):
        d = n // p
        if all(abs(points[i] - points[(i + d) % n]) <= thresh for i in range(n)):
            return False
    if n > 1:
        xy = np.array([(float(z.real), float(z.imag)) for z in points])
        span = float(np.max(np.abs(xy))) if len(xy) else 1.0
        radius = max(thresh, 4e-15 * max(span, 1.0))
        for i, j in cKDTree(xy).query_pairs(radius):
            if abs(points[i] - points[j]) <= thresh:
                return False
    return True


def newton_goal(tol, eps) -> float:
    """Residual Newton aims for; ``tol`` only decides acceptance."""
    return min(tol, 1e4 * eps)


def _newton_cycle(c, z, tol, max_iter, eps, escape):
    goal = newton_goal(tol, eps)
    res = _maxabs(_residuals(c, z))
    it = 0
    while res > goal:
        if it >= max_iter:
            if res <= tol:
                break
            raise NoConvergenceError(f"Newton did not converge in {max_iter} iterations", res)
        d, _ = _cyclic_solve(z, _residuals(c, z), eps)
        z = [zi + di for zi, di in zip(z, d)]
        prev, res = res, _maxabs(_residuals(c, z))
        if not res < escape:
            raise NoConvergenceError("Newton iterates diverged", res)
        it += 1
        if res <= tol and res >= prev:
            break  # stagnated at the rounding floor
    # one more step: cheap at quadratic convergence, keeps the better iterate
    try:
        d, _ = _cyclic_solve(z, _residuals(c, z), eps)
        z2 = [zi + di for zi, di in zip(z, d)]
        res2 = _maxabs(_residuals(c, z2))
        if res2 < res:
            z, res = z2, res2
    except SingularSystemError:
        pass
    return z, res, it


def _make_orbit(c, z, res, tol, precision):
    rho = 1
    for zi in z:
        rho = rho * (2 * zi)
    return PeriodicOrbit(
        parameter=c,
        period=len(z),
        points=tuple(z),
        multiplier=rho,
        residual=float(res),
        exact_period=has_exact_period(z, max(float(res), newton_goal(tol, precision.eps))),
    )


def solve_periodic_orbit(c, n: int, seed: Sequence, tol: float | None = None, *,
                         max_iter: int = MAX_ITER, precision: Precision = BINARY64,
                         escape: float = ESCAPE_BOUND) -> PeriodicOrbit:
    """Period-n cycle of f_c by multiple-shooting Newton from ``seed``."""
    if n < 1 or len(seed) != n:
        raise ValueError("seed must contain exactly n points")
    tol = precision.default_tol if tol is None else tol
    if tol < precision.eps * 1e3 * 0.999:
        raise ValueError("tolerance below 1e3 * machine epsilon")
    with precision.scope():
        c = precision.cnum(c)
        z = [precision.cnum(s) for s in seed]
        z, res, _ = _newton_cycle(c, z, tol, max_iter, precision.eps, escape)
        return _make_orbit(c, z, res, tol, precision)


def march(step: Callable, state, *, h_init: float = 0.25, h_max: float = 0.25,
          max_depth: int = MAX_BISECTION_DEPTH, where: Callable = lambda s: s):
    """Drive s from 0 to 1 through ``state = step(state, s0, s1)``.

    Failed steps are halved; more than ``max_depth`` halvings below
    ``h_init`` means the path is blocked.
    """
    s = 0.0
    h = h_init
    h_floor = h_init * 2.0 ** (-max_depth)
    last_error = None
    while s < 1.0:
        h = min(h, 1.0 - s)
        s1 = 1.0 if 1.0 - (s + h) < 1e-15 else s + h
        try:
            state = step(state, s, s1)
        except CascadeError as exc:
            last_error = exc
            h /= 2
            if h < h_floor:
                raise ContinuationBlockedError(
                    f"continuation blocked at s={s:.6g}: {last_error}", parameter=where(s)
                ) from exc
            continue
        s = s1
        h = min(h * 1.6, h_max)
    return state


CORRECTOR_ITER = 8


def _orbit_step(z, c0, c1, tol, precision):
    eps = precision.eps
    dc = c1 - c0
    w, _ = _cyclic_solve(z, [1] * len(z), eps)
    # w = dz/dc: differentiate z_i^2 + c = z_{i+1}
    pred = [zi + wi * dc for zi, wi in zip(z, w)]
    step_size = _maxabs([wi * dc for wi in w])
    znew, res, _ = _newton_cycle(c1, pred, tol, CORRECTOR_ITER, eps, ESCAPE_BOUND)
    corr = _maxabs([a - b for a, b in zip(znew, pred)])
    if corr > max(0.3 * step_size, 1e3 * newton_goal(tol, eps)):
        raise StepRejected("corrector moved too far from the predictor")
    return znew, res


def continue_orbit(orbit: PeriodicOrbit, path: Sequence, tol: float | None = None, *,
                   precision: Precision = BINARY64,
                   max_depth: int = MAX_BISECTION_DEPTH) -> PeriodicOrbit:
    """Analytic continuation of ``orbit`` along a polyline of parameters."""
    tol = precision.default_tol if tol is None else tol
    if len(path) == 0:
        return orbit
    with precision.scope():
        pts = [precision.cnum(p) for p in path]
        c = precision.cnum(orbit.parameter)
        if abs(pts[0] - c) > max(1e3 * tol, 1e-9 * (1 + abs(c))):
            raise ValueError("path must start at the orbit's parameter")
        z = [precision.cnum(p) for p in orbit.points]
        res = orbit.residual
        for target in pts[1:]:
            start = c
            delta = target - start
            if delta == 0:
                continue

            def step(state, s0, s1, start=start, delta=delta, target=target):
                zz, _ = state
                ca = start + delta * s0 if s0 > 0 else start
                cb = target if s1 == 1.0 else start + delta * s1
                return _orbit_step(zz, ca, cb, tol, precision)

            z, res = march(step, (z, res), max_depth=max_depth,
                           where=lambda s, start=start, delta=delta: complex(start + delta * s))
            c = target
        z, res, _ = _newton_cycle(c, z, tol, MAX_ITER, precision.eps, ESCAPE_BOUND)
        return _make_orbit(c, z, res, tol, precision)


def bordered_newton(z, c, target, tol, precision: Precision, *, max_iter: int = MAX_ITER):
    """Newton in (z, c) for a cycle of multiplier ``target``.  Call in scope."""
    eps = precision.eps
    goal = newton_goal(tol, eps)
    res = math.inf
    it = 0
    while True:
        g = _residuals(c, z)
        rho = 1
        for zi in z:
            rho = rho * (2 * zi)
        prev, res = res, max(_maxabs(g), float(abs(rho - target)))
        if res <= goal or (res <= tol and res >= prev):
            break
        if it >= max_iter:
            if res <= tol:
                break
            raise NoConvergenceError("multiplier Newton did not converge", res)
        if not res < ESCAPE_BOUND:
            raise NoConvergenceError("multiplier Newton diverged", res)
        dz, dc, _ = _bordered_solve(z, g, target - rho, eps)
        z = [zi + di for zi, di in zip(z, dz)]
        c = c + dc
        it += 1
    try:
        g = _residuals(c, z)
        dz, dc, _ = _bordered_solve(z, g, target - rho, eps)
        z2 = [zi + di for zi, di in zip(z, dz)]
        c2 = c + dc
        rho2 = 1
        for zi in z2:
            rho2 = rho2 * (2 * zi)
        res2 = max(_maxabs(_residuals(c2, z2)), float(abs(rho2 - target)))
        if res2 < res:
            z, c, res = z2, c2, res2
    except SingularSystemError:
        pass
    return z, c, res, it


def multiplier_step(z, c, lam0, lam1, tol, precision: Precision):
    """One predictor-corrector step of the multiplier continuation.  In scope."""
    eps = precision.eps
    n = len(z)
    tz, tc, _ = _bordered_solve(z, [0] * n, 1, eps)
    dl = lam1 - lam0
    pz = [zi + ti * dl for zi, ti in zip(z, tz)]
    pc = c + tc * dl
    step_size = max(_maxabs([ti * dl for ti in tz]), float(abs(tc * dl)))
    nz, nc, res, _ = bordered_newton(pz, pc, lam1, tol, precision, max_iter=CORRECTOR_ITER)
    corr = max(_maxabs([a - b for a, b in zip(nz, pz)]), float(abs(nc - pc)))
    if corr > max(0.3 * step_size, 1e3 * newton_goal(tol, eps)):
        raise StepRejected("multiplier corrector moved too far")
    return nz, nc, res


def follow_multiplier(z, c, lam_of_s: Callable, tol, precision: Precision, *,
                      h_init: float = 0.25, h_max: float = 0.5,
                      max_depth: int = MAX_BISECTION_DEPTH):
    """Continue (cycle, parameter) while the multiplier follows lam_of_s(s), s in [0,1]."""

    def step(state, s0, s1):
        zz, cc, _ = state
        return multiplier_step(zz, cc, lam_of_s(s0), lam_of_s(s1), tol, precision)

    return march(step, (z, c, 0.0), h_init=h_init, h_max=h_max, max_depth=max_depth,
                 where=lambda s: complex(lam_of_s(s)))


def orbit_from_points(c, z, tol, precision: Precision) -> PeriodicOrbit:
    """Wrap converged points (in scope) as a PeriodicOrbit."""
    res = _maxabs(_residuals(c, z))
    return _make_orbit(c, list(z), res, tol, precision)


def critical_orbit_points(c, n: int):
    """0, c, c^2 + c, ... : the first n points of the critical orbit.  In scope."""
    z = 0 * c
    out = [z]
    for _ in range(n - 1):
        z = z * z + c
        out.append(z)
    return out
