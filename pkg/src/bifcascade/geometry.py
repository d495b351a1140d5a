"""Hyperbolic components of the Mandelbrot set and their explicit geometry.

Boundary points, centers and satellites are all reached by continuing a
cycle in its multiplier: the bordered Newton system of
:mod:`bifcascade.dynamics` fixes prod(2 z_i) and solves for (z, c).

The log-multiplier domains (Omega, the Yoccoz disks, the bifurcation
radius) are evaluated in binary64 or, for huge periods, in log space.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import dynamics
from .dynamics import (
    PeriodicOrbit,
    bordered_newton,
    critical_orbit_points,
    follow_multiplier,
    march,
    multiplier_step,
    orbit_from_points,
    parameter_tangent,
)
from .errors import CascadeError, DomainError, NoConvergenceError, SamplingTooCoarseError
from .precision import BINARY64, Precision
from .rotation import MP, RotationNumber, log_of

LOG2 = math.log(2.0)
# How far in front of the target multiplier the radial path stops before the
# final boundary solve.
BOUNDARY_GAP = 1e-6
# Outward offsets (times 1/q^2) in log-multiplier tried when stepping into a satellite.
SATELLITE_OFFSETS = (0.5, 0.25, 1.0, 0.125, 0.0625, 0.03125)
MAX_CRITICAL_CHUNKS = 400


@dataclass(frozen=True)
class HyperbolicComponent:
    period: int
    center: Any
    lineage: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lineage", tuple(self.lineage))
        prod = 1
        for t in self.lineage:
            prod *= t.q_int
        if self.period % prod:
            raise ValueError("period is not a multiple of the lineage denominators")

    @property
    def base_period(self) -> int:
        prod = 1
        for t in self.lineage:
            prod *= t.q_int
        return self.period // prod


def main_cardioid(precision: Precision = BINARY64) -> HyperbolicComponent:
    with precision.scope():
        return HyperbolicComponent(1, precision.cnum(0), ())


@dataclass(frozen=True)
class GeometryConstants:
    """Unquantified constants, exposed as configuration.

    ``C_big`` always equals 6400 * max(2, K); ``L_budget=None`` means delta / 2.
    """

    B0: float = 1.0
    A: float = 1.0
    K: float = 1.0
    beta: float = 1.0 / 32000.0
    delta: float = 0.05
    L_budget: Optional[float] = None
    C_big: float = field(init=False)

    def __post_init__(self):
        for name in ("B0", "A", "K", "beta", "delta"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
                raise ValueError(f"constant {name} must be a positive finite number, got {value!r}")
        if self.L_budget is not None and not self.L_budget > 0:
            raise ValueError("L_budget must be positive")
        object.__setattr__(self, "C_big", 6400.0 * max(2.0, float(self.K)))

    @property
    def budget(self) -> float:
        return self.delta / 2 if self.L_budget is None else self.L_budget


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError("radius must be nonnegative")

    def contains(self, point, inflate: float = 0.0, closed: bool = False) -> bool:
        d = abs(complex(point) - self.center)
        r = self.radius + inflate
        return d <= r if closed else d < r


def _t_value(t) -> float:
    return t.value if isinstance(t, RotationNumber) else float(t)


def _target_multiplier(t, precision: Precision):
    if isinstance(t, RotationNumber):
        return precision.expi(t.p, t.q_int)
    return precision.expi_real(float(t))


def main_cardioid_boundary(t, precision: Precision = BINARY64):
    """c = rho/2 - rho^2/4 at rho = exp(2 pi i t)."""
    with precision.scope():
        rho = _target_multiplier(t, precision)
        return rho / 2 - rho * rho / 4


def center_orbit(W: HyperbolicComponent, tol: Optional[float] = None,
                 precision: Precision = BINARY64) -> PeriodicOrbit:
    """The superattracting cycle through 0 at the center of W."""
    tol = precision.default_tol if tol is None else tol
    with precision.scope():
        c = precision.cnum(W.center)
        seed = critical_orbit_points(c, W.period)
        return dynamics.solve_periodic_orbit(c, W.period, seed, tol, precision=precision)


def _satellite_root(W: HyperbolicComponent, tol, precision):
    """Root of a satellite: where the parent cycle has multiplier exp(2 pi i p/q)."""
    t = W.lineage[-1]
    q = t.q_int
    m = W.period // q
    orb = center_orbit(W, tol, precision)
    near = 0.99
    z, c, _ = follow_multiplier(list(orb.points), orb.parameter, lambda s: near * s, tol, precision)
    # the q points of each cluster average to the parent point they surround
    seed = [sum(z[j + k * m] for k in range(q)) / q for j in range(m)]
    parent = dynamics.solve_periodic_orbit(c, m, seed, tol, precision=precision)
    target = precision.expi(t.p, q)
    zp, croot, _, _ = bordered_newton(list(parent.points), c, target, tol, precision)
    collapsed = list(zp) * q
    return croot, orbit_from_points(croot, collapsed, tol, precision)


def boundary_point(W: HyperbolicComponent, t, tol: Optional[float] = None,
                   precision: Precision = BINARY64):
    """c(W, t) and the cycle there, with multiplier exp(2 pi i t)."""
    tol = precision.default_tol if tol is None else tol
    with precision.scope():
        if W.lineage and _t_value(t) == 0:
            return _satellite_root(W, tol, precision)
        lam = _target_multiplier(t, precision)
        orb = center_orbit(W, tol, precision)
        near = lam * (1 - BOUNDARY_GAP)
        z, c, _ = follow_multiplier(list(orb.points), orb.parameter, lambda s: near * s,
                                    tol, precision)
        z, c, _, _ = bordered_newton(z, c, lam, tol, precision)
        return c, orbit_from_points(c, z, tol, precision)


def _attracting_cycle_seed(c, m: int, precision: Precision):
    """Iterate the critical point until it settles on an m-cycle, or give up."""
    z = 0 * c
    for _ in range(MAX_CRITICAL_CHUNKS):
        start = z
        for _ in range(m):
            z = z * z + c
        if not abs(z) < 4:
            return None
        if abs(z - start) < 1e-9:
            break
    else:
        return None
    pts = [z]
    for _ in range(m - 1):
        z = z * z + c
        pts.append(z)
    return pts


def child_component(W: HyperbolicComponent, t: RotationNumber, tol: Optional[float] = None,
                    precision: Precision = BINARY64, *, boundary=None) -> HyperbolicComponent:
    """The satellite W(t) of period n*q touching W at c(W, t)."""
    if t.is_zero:
        raise ValueError("child_component needs t != 0")
    tol = precision.default_tol if tol is None else tol
    with precision.scope():
        c0, orb0 = boundary if boundary is not None else boundary_point(W, t, tol, precision)
        q = t.q_int
        nq = W.period * q
        rho0 = _target_multiplier(t, precision)
        failures = []
        for kappa in SATELLITE_OFFSETS:
            offset = kappa / q ** 2
            try:
                z1, c1, _ = follow_multiplier(
                    list(orb0.points), precision.cnum(c0),
                    lambda s: rho0 * precision.exp(precision.cnum(s * offset)), tol, precision)
            except CascadeError as exc:
                failures.append(f"offset {kappa}: {exc}")
                continue
            seed = _attracting_cycle_seed(c1, nq, precision)
            if seed is None:
                failures.append(f"offset {kappa}: critical orbit did not settle")
                continue
            try:
                orb = dynamics.solve_periodic_orbit(c1, nq, seed, tol, precision=precision)
            except CascadeError as exc:
                failures.append(f"offset {kappa}: {exc}")
                continue
            if not orb.exact_period or not abs(orb.multiplier) < 1:
                failures.append(f"offset {kappa}: landed outside the satellite")
                continue
            lam1 = orb.multiplier
            z, c, _ = follow_multiplier(list(orb.points), c1, lambda s: lam1 * (1 - s), tol,
                                        precision)
            z, c, _, _ = bordered_newton(z, c, 0, tol, precision)
            return HyperbolicComponent(nq, c, W.lineage + (t,))
        raise NoConvergenceError("could not enter the satellite: " + "; ".join(failures))


def _psi_with_orbit(W, rho, tol, precision):
    orb = center_orbit(W, tol, precision)
    target = precision.cnum(rho)
    near = target * (1 - BOUNDARY_GAP) if abs(target) >= 1 - BOUNDARY_GAP else target
    z, c, _ = follow_multiplier(list(orb.points), orb.parameter, lambda s: near * s, tol, precision)
    z, c, _, _ = bordered_newton(z, c, target, tol, precision)
    return c, orbit_from_points(c, z, tol, precision)


def extend_psi(W: HyperbolicComponent, rho, constants: Optional[GeometryConstants] = None,
               tol: Optional[float] = None, precision: Precision = BINARY64):
    """psi_W(rho): the parameter where W's cycle has multiplier rho."""
    constants = constants or GeometryConstants()
    tol = precision.default_tol if tol is None else tol
    with precision.scope():
        r = complex(rho)
        if abs(r) >= 1 and not omega_tilde_membership(r, W.period, constants):
            raise DomainError(f"rho={r} lies outside the extension domain")
        c, _ = _psi_with_orbit(W, rho, tol, precision)
        return c


# ---------------------------------------------------------------- Omega domains

def log_omega_constant(n, B0: float):
    """log(4^n B0 / n) as an mpf; n may be an int or mpf."""
    n = MP.mpf(n)
    return n * MP.log(4) + MP.log(B0) - MP.log(n)


def omega_constant(n, B0: float = 1.0) -> float:
    lc = log_omega_constant(n, B0)
    return math.inf if lc > 700 else float(MP.exp(lc))


def _omega_gap(x, y, C):
    """|exp(x+iy) - 1| - C x, accurate for small x and y."""
    ex = np.expm1(x)
    cy, sy = np.cos(y), np.sin(y)
    re = ex * cy - 2.0 * np.sin(y / 2.0) ** 2
    im = ex * sy + sy
    with np.errstate(invalid="ignore"):
        cx = np.where(x == 0, 0.0, C * x)
    return np.hypot(re, im) - cx


def omega_membership(rho, C: float, resolution: int = 1024) -> bool:
    """rho in the component of {|rho-1| > C log|rho|} containing the unit disk."""
    rho = complex(rho)
    if rho == 0:
        return True  # log|rho| = -inf
    L = cmath.log(rho)
    x, y = L.real, L.imag
    if not _omega_gap(np.float64(x), np.float64(y), C) > 0:
        return False
    if x <= 0:
        return True
    xs = np.linspace(0.0, x, resolution + 1)
    return bool(np.all(_omega_gap(xs, np.full_like(xs, y), C) > 0))


def omega_tilde_membership(rho, n: int, constants: GeometryConstants) -> bool:
    rho = complex(rho)
    C = omega_constant(n, constants.B0)
    if not omega_membership(rho, C):
        return False
    if rho == 0:
        return True
    R = 2.0 * n * LOG2
    return abs(cmath.log(rho) - R) >= R


def _disk_distance(y0: float, R: float) -> float:
    return y0 * y0 / (math.sqrt(R * R + y0 * y0) + R)


@functools.lru_cache(maxsize=1024)
def _omega_tilde_distance_rays(t: float, n: int, C: float, rays: int = 4096,
                               samples: int = 256, bisections: int = 60) -> float:
    y0 = 2.0 * math.pi * t
    R = 2.0 * n * LOG2
    s_max = min(_disk_distance(abs(y0), R), abs(y0))
    guess = min(2.0 * abs(math.sin(math.pi * t)) / C, s_max)
    grid = np.geomspace(guess * 1e-3, s_max, samples)
    theta = 2.0 * math.pi * np.arange(rays) / rays
    ct, st = np.cos(theta)[:, None], np.sin(theta)[:, None]
    inside = _omega_gap(grid[None, :] * ct, y0 + grid[None, :] * st, C) > 0
    outside = ~inside
    hit = outside.any(axis=1)
    if not hit.any():
        return s_max
    first = np.argmax(outside, axis=1)[hit]
    hi = grid[first]
    lo = np.where(first > 0, grid[np.maximum(first - 1, 0)], 0.0)
    cth, sth = ct[hit, 0], st[hit, 0]
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        ok = _omega_gap(mid * cth, y0 + mid * sth, C) > 0
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return float(min(s_max, hi.min()))


def log_omega_tilde_distance(t, n, constants: GeometryConstants):
    """log dist(2 pi i t, boundary of the univalence domain), as an mpf.

    Small periods use ray bisection on the sampled boundary; huge periods or
    tiny |t| use the leading-order wedge and disk distances.
    """
    if isinstance(t, RotationNumber):
        if t.is_zero:
            return MP.ninf
        log_t = t.log_abs()
    else:
        if t == 0:
            return MP.ninf
        log_t = MP.log(abs(t))
    log_c = log_omega_constant(n, constants.B0)
    if log_c <= 25 and log_t >= MP.log(1e-6) and MP.mpf(n) < 10 ** 6:
        d = _omega_tilde_distance_rays(float(MP.exp(log_t)) * (1 if _sign(t) > 0 else -1),
                                       int(n), float(MP.exp(log_c)))
        return MP.log(d)
    log_y0 = MP.log(2 * MP.pi) + log_t
    if log_t >= MP.log(1e-6):
        tv = float(MP.exp(log_t))
        log_wedge = MP.log(2 * abs(math.sin(math.pi * tv))) - log_c
    else:
        log_wedge = log_y0 - log_c
    log_R = MP.log(2 * LOG2) + MP.log(n)
    if log_y0 - log_R < -30:
        log_disk = 2 * log_y0 - log_R - MP.log(2)
    else:
        y0, R = MP.exp(log_y0), MP.exp(log_R)
        log_disk = MP.log(y0 * y0 / (MP.sqrt(R * R + y0 * y0) + R))
    return min(log_wedge, log_disk, log_y0)


def _sign(t) -> int:
    if isinstance(t, RotationNumber):
        return 1 if t.p > 0 else -1
    return 1 if t > 0 else -1


def omega_tilde_distance(t, n, constants: Optional[GeometryConstants] = None) -> float:
    constants = constants or GeometryConstants()
    ld = log_omega_tilde_distance(t, n, constants)
    return 0.0 if ld == MP.ninf else float(MP.exp(ld))


def p_estimate(t, n) -> float:
    """min{n|t|/4^n, t^2/n}."""
    tv = abs(_t_value(t))
    if tv == 0:
        return 0.0
    first = MP.mpf(n) * tv * MP.power(4, -MP.mpf(n))
    return float(min(first, MP.mpf(tv) ** 2 / n))


def log_bifurcation_radius(t: RotationNumber, n, constants: GeometryConstants):
    first = -(MP.log(2) + MP.log(MP.mpf(n)) + 3 * log_of(t.q))
    return MP.log(0.5) + min(first, log_omega_tilde_distance(t, n, constants))


def bifurcation_radius(t: RotationNumber, n, constants: Optional[GeometryConstants] = None) -> float:
    """Half the smaller of 1/(2 n q^3) and the distance to the domain boundary."""
    constants = constants or GeometryConstants()
    return float(MP.exp(log_bifurcation_radius(t, n, constants)))


# ---------------------------------------------------------------- limbs

def yoccoz_circle(t: RotationNumber, n: int) -> Disk:
    r = n * LOG2 / t.q_int
    return Disk(complex(r, 2.0 * math.pi * t.value), r)


def limb_diameter_bound(n: int, p: int, constants: Optional[GeometryConstants] = None) -> float:
    constants = constants or GeometryConstants()
    if p == 0:
        raise ValueError("p must be nonzero")
    return constants.A * 4.0 ** n / abs(p)


def repelling_bound_sides(orbit: PeriodicOrbit, constants: Optional[GeometryConstants] = None,
                    precision: Precision = BINARY64) -> dict:
    """Both sides of the |rho - 1| bound for a repelling cycle, o(1) dropped."""
    constants = constants or GeometryConstants()
    _, drho = parameter_tangent(orbit.parameter, list(orbit.points), precision)
    rho = complex(orbit.multiplier)
    n = orbit.period
    rhs = constants.B0 * 4.0 ** n / n * (math.log(abs(rho)) + abs(complex(drho)) / abs(rho))
    return {"lhs": abs(rho - 1), "rhs": rhs, "holds": abs(rho - 1) <= rhs}


# ---------------------------------------------------------------- satellites

class SatelliteMap:
    """lambda = (multiplier of the n q-cycle) o psi_W near rho0 = exp(2 pi i t0).

    Evaluation continues both cycles from the previous evaluation point, so
    neighbouring arguments are cheap.  Paths are routed around rho0, where the
    n q-cycle collapses onto the n-cycle.
    """

    def __init__(self, W: HyperbolicComponent, t0: RotationNumber, tol: Optional[float] = None,
                 precision: Precision = BINARY64, child: Optional[HyperbolicComponent] = None,
                 boundary=None):
        if t0.is_zero:
            raise ValueError("t0 must be nonzero")
        self.W = W
        self.t0 = t0
        self.precision = precision
        self.tol = precision.default_tol if tol is None else tol
        with precision.scope():
            self.boundary = boundary or boundary_point(W, t0, self.tol, precision)
            self.rho0 = _target_multiplier(t0, precision)
            self.child = child or child_component(W, t0, self.tol, precision,
                                                  boundary=self.boundary)
            corb = center_orbit(self.child, self.tol, precision)
            m, q = W.period, t0.q_int
            seed = [sum(corb.points[j + k * m] for k in range(q)) / q for j in range(m)]
            parent = dynamics.solve_periodic_orbit(corb.parameter, m, seed, self.tol,
                                                   precision=precision)
            self._state = (list(parent.points), corb.parameter, list(corb.points))
            self.rho = parent.multiplier

    def _step(self, state, rho_a, rho_b):
        zp, c, zc = state
        zp2, c2, _ = multiplier_step(zp, c, rho_a, rho_b, self.tol, self.precision)
        zc2, _ = dynamics._orbit_step(zc, c, c2, self.tol, self.precision)
        return zp2, c2, zc2

    def _run_leg(self, leg, h_init):
        def step(state, s0, s1):
            return self._step(state, leg(s0), leg(s1))

        self._state = march(step, self._state, h_init=h_init, h_max=h_init,
                            where=lambda s: complex(leg(s)))
        self.rho = leg(1.0)

    def move_to(self, rho, h_init: float = 0.25):
        P = self.precision
        with P.scope():
            rho = P.cnum(rho)
            start = self.rho
            if start == rho:
                return
            r_s = abs(start - self.rho0)
            r_t = abs(rho - self.rho0)
            if r_t == 0:
                raise ValueError("rho0 itself is handled by evaluate()")
            d = rho - start
            # closest approach of the straight segment to rho0
            u = ((self.rho0 - start) * d.conjugate()).real / abs(d) ** 2
            u = min(max(float(u), 0.0), 1.0)
            closest = abs(start + d * u - self.rho0)
            if closest >= 0.5 * min(r_s, r_t):
                self._run_leg(lambda s: rho if s == 1.0 else start + d * s, h_init)
                return
            mid = self.rho0 + (start - self.rho0) * (r_t / r_s)
            self._run_leg(lambda s: mid if s == 1.0 else start + (mid - start) * s, h_init)
            a0 = P.log((mid - self.rho0) / r_t).imag
            a1 = P.log((rho - self.rho0) / r_t).imag
            da = a1 - a0
            pi = P.pi()
            if da > pi:
                da -= 2 * pi
            elif da < -pi:
                da += 2 * pi
            self._run_leg(lambda s: rho if s == 1.0 else
                          self.rho0 + r_t * P.exp(P.cnum(1j) * (a0 + da * s)), h_init)

    def evaluate(self, rho, h_init: float = 0.25):
        P = self.precision
        with P.scope():
            rho = P.cnum(rho)
            if abs(rho - self.rho0) <= dynamics.newton_goal(self.tol, P.eps):
                # the n q-cycle degenerates to the n-cycle run q times
                return P.cnum(self.boundary[1].multiplier) ** self.t0.q_int
            self.move_to(rho, h_init)
            lam = 1
            for z in self._state[2]:
                lam = lam * (2 * z)
            return lam

    @property
    def parameter(self):
        return self._state[1]


def satellite_multiplier(W: HyperbolicComponent, t0: RotationNumber, rho, tol: Optional[float] = None,
                         precision: Precision = BINARY64,
                         constants: Optional[GeometryConstants] = None):
    constants = constants or GeometryConstants()
    radius = bifurcation_radius(t0, W.period, constants)
    with precision.scope():
        rho0 = _target_multiplier(t0, precision)
        if not abs(complex(precision.cnum(rho) - rho0)) < radius:
            raise DomainError("rho is outside the bifurcation disk")
    return SatelliteMap(W, t0, tol, precision).evaluate(rho)


@dataclass(frozen=True)
class CoveringReport:
    passed: bool
    min_winding: int
    probe_radius: float
    clearance: float
    max_step: float
    n_samples: int
    n_probes: int


def default_probes(center: complex, radius: float, count: int = 64) -> list:
    rings = 8
    per = count // rings
    out = []
    for k in range(rings):
        r = radius * (2 * k + 1) / (2 * rings)
        for j in range(per):
            a = 2 * math.pi * (j + 0.5 * (k % 2)) / per
            out.append(center + r * cmath.exp(1j * a))
    return out


def winding_numbers(curve: np.ndarray, probes: Sequence[complex]) -> tuple[np.ndarray, float, float]:
    """Winding number of a closed sampled curve around each probe."""
    curve = np.asarray(curve, dtype=complex)
    probes = np.asarray(probes, dtype=complex)
    rel = curve[None, :] - probes[:, None]
    clearance = float(np.abs(rel).min())
    steps = np.abs(np.diff(np.concatenate([curve, curve[:1]])))
    ang = np.angle(rel)
    d = np.diff(np.concatenate([ang, ang[:, :1]], axis=1), axis=1)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    wind = np.rint(d.sum(axis=1) / (2 * np.pi)).astype(int)
    return wind, clearance, float(steps.max())


def covering_report(W: HyperbolicComponent, t0: RotationNumber, r: float, n_samples: int = 4096,
                    constants: Optional[GeometryConstants] = None, *, probes=None,
                    probe_scale: float = 1.0, tol: Optional[float] = None,
                    precision: Precision = BINARY64, smap: Optional[SatelliteMap] = None
                    ) -> CoveringReport:
    """Winding test that lambda(boundary of B(rho0, r)) surrounds B(1, q^2 r / 16)."""
    constants = constants or GeometryConstants()
    limit = bifurcation_radius(t0, W.period, constants)
    if not 0 < r <= limit:
        raise DomainError(f"r={r} exceeds the bifurcation radius {limit}")
    q = t0.q_int
    probe_radius = probe_scale * q * q * r / 16
    if probes is None:
        probes = default_probes(1.0, probe_radius)
    smap = smap or SatelliteMap(W, t0, tol, precision)
    P = precision
    with P.scope():
        rho0 = smap.rho0
        smap.move_to(rho0 + r)
        values = []
        for k in range(n_samples):
            rho = rho0 + r * P.exp(P.cnum(2j * math.pi * k / n_samples))
            values.append(complex(smap.evaluate(rho, h_init=1.0)))
    wind, clearance, max_step = winding_numbers(np.array(values), probes)
    if max_step >= clearance:
        raise SamplingTooCoarseError(
            f"boundary images {max_step:.3g} apart but probes only {clearance:.3g} away")
    return CoveringReport(bool((wind >= 1).all()), int(wind.min()), probe_radius, clearance,
                          max_step, n_samples, len(probes))


def covering_check(W: HyperbolicComponent, t0: RotationNumber, r: float, n_samples: int = 4096,
                   constants: Optional[GeometryConstants] = None, **kwargs) -> bool:
    return covering_report(W, t0, r, n_samples, constants, **kwargs).passed


def distortion_envelope(W: HyperbolicComponent, t: RotationNumber,
                        constants: Optional[GeometryConstants] = None, samples: int = 64,
                        tol: Optional[float] = None, precision: Precision = BINARY64) -> dict:
    """Image of |w - 2 pi i t| = r under w -> psi_W(exp w), r half the bifurcation radius.

    Returns the extreme ratios |psi(w) - c(W,t)| / (r |psi'|); univalence on
    the full disk puts them in [1/4, 4].
    """
    constants = constants or GeometryConstants()
    tol = precision.default_tol if tol is None else tol
    r = bifurcation_radius(t, W.period, constants) / 2
    P = precision
    with P.scope():
        c0, orb0 = boundary_point(W, t, tol, P)
        _, drho = parameter_tangent(c0, list(orb0.points), P)
        rho0 = _target_multiplier(t, P)
        dpsi = abs(complex(rho0 / drho))
        L0 = P.cnum(2j * math.pi * t.value) if not P.extended else P.log(rho0)
        z, c = list(orb0.points), c0
        z, c, _ = follow_multiplier(z, c, lambda s: rho0 * P.exp(P.cnum(r * s)), tol, P)
        ratios = []
        prev = rho0 * P.exp(P.cnum(r))
        for k in range(samples):
            rho = P.exp(L0 + r * P.exp(P.cnum(2j * math.pi * k / samples)))

            def step(state, s0, s1, a=prev, b=rho):
                zz, cc, _ = state
                la = a + (b - a) * s0
                lb = b if s1 == 1.0 else a + (b - a) * s1
                return multiplier_step(zz, cc, la, lb, tol, P)

            z, c, _ = march(step, (z, c, 0.0), h_init=1.0, h_max=1.0)
            prev = rho
            ratios.append(abs(complex(c - c0)) / (r * dpsi))
    return {"radius": r, "dpsi": dpsi, "min_ratio": min(ratios), "max_ratio": max(ratios),
            "holds": 0.25 <= min(ratios) and max(ratios) <= 4.0}
