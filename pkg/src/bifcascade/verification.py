"""Hard checks and diagnostics shared by the ``verify`` command and the test suite.

Hard checks compare against closed forms or proven identities and fail the
run.  Diagnostics involve unquantified constants; they report both sides and
never fail.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geometry
from .cascade import CascadeSpec, CascadeTrace, run_cascade
from .criteria import h_eval, h_upper_bound
from .geometry import GeometryConstants, SatelliteMap, main_cardioid
from .precision import BINARY64, Precision
from .rotation import RotationNumber

CARDIOID_ARGUMENTS = ((1, 2), (-1, 3), (1, 3), (-1, 4), (1, 4), (-1, 5), (1, 5), (1, 7), (3, 7))
YOCCOZ_SPEC = ((1, 3), (1, 8), (1, 12))


@dataclass(frozen=True)
class CheckResult:
    name: str
    hard: bool
    passed: bool
    measured: float
    threshold: float
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return str(v)
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        return {"name": self.name, "kind": "hard" if self.hard else "diagnostic",
                "passed": self.passed, "measured": clean(float(self.measured)),
                "threshold": clean(float(self.threshold)), "seconds": round(self.seconds, 3),
                "details": clean(self.details)}


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        res = fn(*args, **kwargs)
        return CheckResult(**{**res.__dict__, "seconds": time.perf_counter() - start})

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def cardioid_oracle(tol: Optional[float] = None, precision: Precision = BINARY64,
                    arguments=CARDIOID_ARGUMENTS, threshold: float = 1e-10) -> CheckResult:
    """boundary_point on the main cardioid against rho/2 - rho^2/4."""
    W = main_cardioid(precision)
    errs = {}
    for p, q in arguments:
        t = RotationNumber(p, q)
        c, _ = geometry.boundary_point(W, t, tol, precision)
        errs[str(t)] = abs(complex(c) - complex(geometry.main_cardioid_boundary(t)))
    worst = max(errs.values())
    return CheckResult("cardioid_oracle", True, worst <= threshold, worst, threshold,
                       details={"errors": errs})


def h_grid(rel_tol: float = 1e-12) -> CheckResult:
    """Monotonicity and both bounds of H on u = 0.01 ... 0.95.

    The upper bound is sharp to ~1e-19 relative beyond u = 0.8, so it is
    checked up to the evaluation accuracy ``rel_tol``.
    """
    start = time.perf_counter()
    us = [k / 100 for k in range(1, 96)]
    hs = [h_eval(u, rel_tol) for u in us]
    mono = sum(1 for a, b in zip(hs, hs[1:]) if not b > a)
    lower = sum(1 for u, h in zip(us, hs) if not h >= 16 * u)
    upper = sum(1 for u, h in zip(us, hs) if not h <= h_upper_bound(u) * (1 + rel_tol))
    bad = mono + lower + upper
    return CheckResult("h_grid", True, bad == 0, bad, 0, time.perf_counter() - start,
                       {"monotonicity_violations": mono, "lower_violations": lower,
                        "upper_violations": upper, "H(0.1)": h_eval(0.1)})


def satellite_derivative_error(q: int, tol: Optional[float] = None,
                               precision: Precision = BINARY64, h: float = 1e-5) -> float:
    """Relative error of the central difference of lambda at rho0 against -q^2/rho0."""
    t0 = RotationNumber(1, q)
    smap = SatelliteMap(main_cardioid(precision), t0, tol, precision)
    rho0 = complex(smap.rho0)
    plus = complex(smap.evaluate(rho0 + h))
    minus = complex(smap.evaluate(rho0 - h))
    fd = (plus - minus) / (2 * h)
    exact = -q * q / rho0
    return abs(fd - exact) / abs(exact)


@_timed
def satellite_derivative(qs=(2, 3, 4, 5), tol: Optional[float] = None,
                         precision: Precision = BINARY64, threshold: float = 1e-4
                         ) -> CheckResult:
    errs = {q: satellite_derivative_error(q, tol, precision) for q in qs}
    worst = max(errs.values())
    return CheckResult("satellite_derivative", True, worst <= threshold, worst, threshold,
                       details={"relative_errors": {str(k): v for k, v in errs.items()}})


@_timed
def covering(t0: RotationNumber = RotationNumber(1, 3), fraction: float = 0.25,
             n_samples: int = 4096, constants: Optional[GeometryConstants] = None,
             tol: Optional[float] = None, precision: Precision = BINARY64) -> CheckResult:
    constants = constants or GeometryConstants()
    W = main_cardioid(precision)
    r = fraction * geometry.bifurcation_radius(t0, W.period, constants)
    rep = geometry.covering_report(W, t0, r, n_samples, constants, tol=tol, precision=precision)
    return CheckResult("covering", True, rep.passed, rep.min_winding, 1,
                       details={"r": r, "probe_radius": rep.probe_radius,
                                "clearance": rep.clearance, "max_step": rep.max_step,
                                "probes": rep.n_probes, "samples": rep.n_samples})


# ---------------------------------------------------------------- Yoccoz containment

def _fixed_point_logs(path, legs_steps: int = 256):
    """log of the cardioid's alpha-fixed-point multiplier along a polyline.

    The polyline must start at a point of the cardioid boundary where the
    multiplier is exp(2 pi i t); the branch starts at 2 pi i t.
    """
    c = complex(path[0])
    z = (1 - cmath.sqrt(1 - 4 * c)) / 2
    L = cmath.log(2 * z)
    for target in path[1:]:
        target = complex(target)
        for k in range(1, legs_steps + 1):
            ck = c + (target - c) * k / legs_steps
            root = cmath.sqrt(1 - 4 * ck)
            cand = ((1 - root) / 2, (1 + root) / 2)
            nz = min(cand, key=lambda w: abs(w - z))
            L += cmath.log(nz / z)
            z = nz
        c = target
    return L


def yoccoz_parameters(trace: CascadeTrace) -> list:
    """(label, parameter, path) for every touch point and every non-base center."""
    out = []
    pts = [complex(c) for c in trace.touch_points]
    for m, c in enumerate(pts):
        out.append((f"c_{m}", c, pts[: m + 1]))
        center = complex(trace.components[m + 1].center)
        out.append((f"center_{m + 1}", center, pts[: m + 1] + [center]))
    return out


@_timed
def yoccoz_containment(trace: Optional[CascadeTrace] = None, tol: Optional[float] = None,
                       inflate: float = 1e-6) -> CheckResult:
    if trace is None:
        trace = run_cascade(CascadeSpec(tuple(RotationNumber(p, q) for p, q in YOCCOZ_SPEC),
                                        tol=tol))
    t0 = trace.arguments[0]
    n = trace.components[0].period
    if n != 1:
        raise ValueError("the containment check follows the cardioid's fixed point")
    disk = geometry.yoccoz_circle(t0, n)
    # the branch starts at 2 pi i t0 on the boundary of the disk
    excess = {}
    for label, c, path in yoccoz_parameters(trace):
        L = _fixed_point_logs(path)
        L = complex(L.real, L.imag)
        excess[label] = abs(L - disk.center) - disk.radius
    worst = max(excess.values())
    return CheckResult("yoccoz_containment", True, worst <= inflate and len(excess) >= 6, worst,
                       inflate, details={"excess": excess, "parameters": len(excess)})


# ---------------------------------------------------------------- diagnostics

def omega_vs_estimate(cases=((RotationNumber(1, 2), 1), (RotationNumber(1, 3), 2)),
                      constants: Optional[GeometryConstants] = None) -> CheckResult:
    """Empirical K-brackets dist / P(t, n); never fails."""
    constants = constants or GeometryConstants()
    start = time.perf_counter()
    ratios = {}
    for t, n in cases:
        d = geometry.omega_tilde_distance(t, n, constants)
        ratios[f"{t},n={n}"] = d / geometry.p_estimate(t, n)
    k_est = max(max(r, 1 / r) for r in ratios.values())
    return CheckResult("omega_vs_p_estimate", False, True, k_est, math.nan,
                       time.perf_counter() - start, {"ratios": ratios, "K_estimate": k_est})


def repelling_bound_sides(constants: Optional[GeometryConstants] = None) -> CheckResult:
    """Both sides of the |rho - 1| bound at a repelling fixed point (c = -1)."""
    from .dynamics import solve_periodic_orbit
    constants = constants or GeometryConstants()
    start = time.perf_counter()
    orb = solve_periodic_orbit(-1.0, 1, [(1 - math.sqrt(5)) / 2])
    sides = geometry.repelling_bound_sides(orb, constants)
    return CheckResult("repelling_bound", False, sides["holds"], sides["lhs"], sides["rhs"],
                       time.perf_counter() - start, sides)


def distortion(t: RotationNumber = RotationNumber(1, 3),
               constants: Optional[GeometryConstants] = None) -> CheckResult:
    start = time.perf_counter()
    rep = geometry.distortion_envelope(main_cardioid(), t, constants)
    return CheckResult("distortion_envelope", False, rep["holds"], rep["max_ratio"], 4.0,
                       time.perf_counter() - start, rep)


def limb_diameter(trace: CascadeTrace, constants: Optional[GeometryConstants] = None
                  ) -> CheckResult:
    """Empirical A from cascade parameters inside one limb of the base component."""
    constants = constants or GeometryConstants()
    start = time.perf_counter()
    t0 = trace.arguments[0]
    n = trace.components[0].period
    pts = np.array([c for _, c, _ in yoccoz_parameters(trace)])
    diam = float(np.abs(pts[:, None] - pts[None, :]).max())
    bound = geometry.limb_diameter_bound(n, t0.p, constants)
    a_est = diam * abs(t0.p) / 4.0 ** n
    return CheckResult("limb_diameter", False, diam <= bound, diam, bound,
                       time.perf_counter() - start, {"empirical_A": a_est})


def run_all(constants: Optional[GeometryConstants] = None, tol: Optional[float] = None,
            precision: Precision = BINARY64) -> list:
    constants = constants or GeometryConstants()
    start = time.perf_counter()
    trace = run_cascade(CascadeSpec(tuple(RotationNumber(p, q) for p, q in YOCCOZ_SPEC),
                                    precision=precision, tol=tol), constants)
    yc = yoccoz_containment(trace)
    yc = CheckResult(**{**yc.__dict__, "seconds": time.perf_counter() - start})
    return [
        cardioid_oracle(tol, precision),
        h_grid(),
        yc,
        covering(constants=constants, tol=tol, precision=precision),
        satellite_derivative(tol=tol, precision=precision),
        omega_vs_estimate(constants=constants),
        repelling_bound_sides(constants),
        distortion(constants=constants),
        limb_diameter(trace, constants),
    ]
