"""Cascades of successive satellite bifurcations W^0 -> W^1 -> ... and their limit.

A trace records the touch points c_m, the components, the limit estimate c_*
and, for every level, the cycle O_m continued to c_*.  The per-level
diagnostics (gaps, distance of O_m from the critical point, cluster sizes,
zeta ratios) are what the non-local-connectivity argument is about.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .criteria import h_eval, lemma_levels
from .dynamics import newton_goal, continue_orbit, orbit_from_points
from .errors import (CascadeError, ClusteringAmbiguousError, DegenerateClusterError,
                     LevelError)
from .geometry import (GeometryConstants, HyperbolicComponent, boundary_point, center_orbit,
                       child_component, main_cardioid)
from .precision import BINARY64, Precision
from .rotation import MP, RotationNumber, log_of


@dataclass(frozen=True)
class CascadeSpec:
    arguments: tuple
    base_period: int = 1
    precision: Precision = BINARY64
    tol: Optional[float] = None

    def __post_init__(self):
        args = tuple(RotationNumber.parse(t) for t in self.arguments)
        object.__setattr__(self, "arguments", args)
        if not args:
            raise ValueError("a cascade needs at least one rotation number")
        if any(t.is_zero for t in args):
            raise ValueError("rotation numbers of a cascade must be nonzero")
        if self.base_period < 1:
            raise ValueError("base_period must be positive")

    @property
    def tolerance(self) -> float:
        return self.precision.default_tol if self.tol is None else self.tol


@dataclass(frozen=True)
class ClusterStructure:
    m: int
    assignment: tuple  # index into O_{m-1} for every point of O_m
    clusters: tuple  # for each point of O_{m-1}, the indices of its cluster
    diameters: tuple


@dataclass(frozen=True)
class LevelRecord:
    m: int
    argument: RotationNumber
    period: int
    touch_point: complex
    gap: Optional[float]
    orbit_min_distance: float
    multiplier_abs: float
    cluster_diameter: Optional[float] = None
    zeta_ratio: Optional[float] = None
    h_bound: Optional[float] = None


@dataclass
class CascadeTrace:
    spec: CascadeSpec
    components: list
    touch_points: list
    boundary_orbits: list
    periods: list
    limit: object = None
    limit_error: float = math.inf
    orbits_at_limit: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    resolution_exhausted: bool = False

    @property
    def depth(self) -> int:
        return len(self.touch_points)

    @property
    def arguments(self) -> tuple:
        return self.spec.arguments[: self.depth]

    def gaps(self) -> list:
        return [abs(complex(b - a)) if not self.spec.precision.extended else float(abs(b - a))
                for a, b in zip(self.touch_points, self.touch_points[1:])]


def _resolution(precision: Precision, c) -> float:
    return 10 * precision.eps * max(1.0, abs(complex(c)))


def build_levels(spec: CascadeSpec, base: Optional[HyperbolicComponent] = None) -> CascadeTrace:
    """Touch points and components only; no limit and no orbits at the limit."""
    P = spec.precision
    tol = spec.tolerance
    if base is None:
        if spec.base_period != 1:
            raise ValueError("base_period != 1 needs an explicit base component")
        base = main_cardioid(P)
    elif base.period != spec.base_period:
        raise ValueError("base component period does not match the spec")
    W = base
    trace = CascadeTrace(spec, [W], [], [], [W.period])
    for m, t in enumerate(spec.arguments):
        try:
            c, orb = boundary_point(W, t, tol, P)
            if trace.touch_points:
                with P.scope():
                    gap = abs(c - trace.touch_points[-1])
                if gap < _resolution(P, c):
                    trace.resolution_exhausted = True
                    break
            child = child_component(W, t, tol, P, boundary=(c, orb))
        except CascadeError as exc:
            raise LevelError(m, exc) from exc
        trace.touch_points.append(c)
        trace.boundary_orbits.append(orb)
        trace.components.append(child)
        trace.periods.append(child.period)
        W = child
    return trace


def limit_parameter(trace: CascadeTrace):
    """Geometric extrapolation of the touch points; error_bound is inf if gaps do not contract."""
    pts = trace.touch_points
    if len(pts) < 3:
        raise ValueError("limit_parameter needs at least three touch points")
    P = trace.spec.precision
    with P.scope():
        deltas = [b - a for a, b in zip(pts, pts[1:])]
        gaps = [abs(complex(d)) if not P.extended else float(abs(d)) for d in deltas]
        ratios = [g1 / g0 if g0 > 0 else math.inf for g0, g1 in zip(gaps, gaps[1:])]
        recent = ratios[-3:]
        r_bar = max(recent)
        if not r_bar < 1:
            return pts[-1], math.inf
        r = deltas[-1] / deltas[-2]
        c_star = pts[-1] + deltas[-1] * r / (1 - r)
        return c_star, gaps[-1] * r_bar / (1 - r_bar)


def gap_ratios(trace: CascadeTrace) -> list:
    g = trace.gaps()
    return [b / a for a, b in zip(g, g[1:])]


def _orbits_at(trace: CascadeTrace, c_star) -> list:
    """O_0 ... O_M continued to c_star along the chain of touch points."""
    P = trace.spec.precision
    tol = trace.spec.tolerance
    M = trace.depth
    out = []
    with P.scope():
        c_star = P.cnum(c_star)
        for m in range(M):
            path = [trace.touch_points[m]] + list(trace.touch_points[m + 1:]) + [c_star]
            path = _dedupe(path)
            try:
                out.append(continue_orbit(trace.boundary_orbits[m], path, tol, precision=P))
            except CascadeError as exc:
                raise LevelError(m, exc) from exc
        last = trace.components[M]
        if M and c_star == trace.touch_points[-1]:
            # the newest cycle is born at c_star: it is O_{M-1} run q times
            q = trace.arguments[-1].q_int
            pts = list(trace.boundary_orbits[-1].points) * q
            out.append(orbit_from_points(c_star, pts, tol, P))
        else:
            try:
                start = center_orbit(last, tol, P)
                out.append(continue_orbit(start, [start.parameter, c_star], tol, precision=P))
            except CascadeError as exc:
                raise LevelError(M, exc) from exc
    return out


def _dedupe(path):
    out = [path[0]]
    for p in path[1:]:
        if p != out[-1]:
            out.append(p)
    return out


def run_cascade(spec: CascadeSpec, constants: Optional[GeometryConstants] = None,
                base: Optional[HyperbolicComponent] = None, *, limit=None) -> CascadeTrace:
    """Build the cascade, estimate c_*, continue every O_m there and fill the diagnostics.

    ``limit`` overrides the extrapolated c_* (used for touch-point evaluations).
    """
    constants = constants or GeometryConstants()
    trace = build_levels(spec, base)
    return finish_trace(trace, constants, limit=limit)


def finish_trace(trace: CascadeTrace, constants: GeometryConstants, *, limit=None
                 ) -> CascadeTrace:
    if limit is not None:
        with trace.spec.precision.scope():
            trace.limit = trace.spec.precision.cnum(limit)
        trace.limit_error = 0.0
    elif trace.depth >= 3:
        trace.limit, trace.limit_error = limit_parameter(trace)
    else:
        trace.limit, trace.limit_error = trace.touch_points[-1], math.inf
    trace.orbits_at_limit = _orbits_at(trace, trace.limit)
    trace.diagnostics = _diagnostics(trace, constants)
    return trace


def truncated(trace: CascadeTrace, depth: int, constants: Optional[GeometryConstants] = None
              ) -> CascadeTrace:
    """The trace the same spec would give at a smaller depth, reusing the levels."""
    constants = constants or GeometryConstants()
    spec = CascadeSpec(trace.spec.arguments[:depth], trace.spec.base_period,
                       trace.spec.precision, trace.spec.tol)
    short = CascadeTrace(spec, trace.components[: depth + 1], trace.touch_points[:depth],
                         trace.boundary_orbits[:depth], trace.periods[: depth + 1])
    return finish_trace(short, constants)


# ---------------------------------------------------------------- diagnostics

def orbit_min_distance(trace: CascadeTrace, m: int) -> float:
    if not 0 <= m <= trace.depth:
        raise ValueError("level out of range")
    return float(min(abs(complex(z)) for z in trace.orbits_at_limit[m].points))


def _as_array(points) -> np.ndarray:
    return np.array([complex(z) for z in points])


def cluster_structure(trace: CascadeTrace, m: int) -> ClusterStructure:
    """Group the points of O_m around their nearest point of O_{m-1}."""
    if not 1 <= m <= trace.depth:
        raise ValueError("cluster_structure needs 1 <= m <= depth")
    # separation scale: Newton accuracy, not the acceptance tolerance
    sep = 10 * newton_goal(trace.spec.tolerance, trace.spec.precision.eps)
    q = trace.arguments[m - 1].q_int
    child = _as_array(trace.orbits_at_limit[m].points)
    parent = _as_array(trace.orbits_at_limit[m - 1].points)
    tree = cKDTree(np.column_stack([parent.real, parent.imag]))
    k = 2 if len(parent) > 1 else 1
    dist, idx = tree.query(np.column_stack([child.real, child.imag]), k=k)
    if k == 2:
        if np.any(dist[:, 1] - dist[:, 0] <= sep):
            raise ClusteringAmbiguousError(f"level {m}: a point is equidistant from two parents")
        nearest = idx[:, 0]
    else:
        nearest = np.asarray(idx).reshape(-1)
    clusters = [[] for _ in parent]
    for i, j in enumerate(nearest):
        clusters[int(j)].append(i)
    sizes = {len(c) for c in clusters}
    if sizes != {q}:
        raise ClusteringAmbiguousError(
            f"level {m}: cluster sizes {sorted(sizes)} instead of {q}")
    diams = []
    for members in clusters:
        pts = child[members]
        diams.append(float(np.abs(pts[:, None] - pts[None, :]).max()))
    return ClusterStructure(m, tuple(int(j) for j in nearest),
                            tuple(tuple(c) for c in clusters), tuple(diams))


def zeta_ratio(trace: CascadeTrace, m: int, constants: Optional[GeometryConstants] = None,
               *, structure: Optional[ClusterStructure] = None, levels=None):
    """max |Z_{m+1} - Z_m| / |Z_m^+ - Z_m| over O_{m+1}, and the bound H(u_bar_m)."""
    constants = constants or GeometryConstants()
    if m < 1 or m + 1 > trace.depth:
        raise ValueError("zeta_ratio needs 1 <= m and m + 1 <= depth")
    sep = 10 * newton_goal(trace.spec.tolerance, trace.spec.precision.eps)
    structure = structure or cluster_structure(trace, m)
    zm = _as_array(trace.orbits_at_limit[m].points)
    zn = _as_array(trace.orbits_at_limit[m + 1].points)
    tree = cKDTree(np.column_stack([zm.real, zm.imag]))
    _, nearest = tree.query(np.column_stack([zn.real, zn.imag]))
    # nearest same-cluster neighbour of every point of O_m
    partner = np.empty(len(zm))
    for members in structure.clusters:
        pts = zm[list(members)]
        d = np.abs(pts[:, None] - pts[None, :])
        np.fill_diagonal(d, np.inf)
        partner[list(members)] = d.min(axis=1)
    if partner.min() < sep:
        raise DegenerateClusterError(f"level {m}: cluster points closer than the solver accuracy")
    ratio = float((np.abs(zn - zm[nearest]) / partner[nearest]).max())
    return ratio, _h_bound(trace, m, constants, levels)


def _h_bound(trace: CascadeTrace, m: int, constants: GeometryConstants, levels=None
             ) -> Optional[float]:
    """H(u_bar_m), or None when t_{m+1} is not part of the spec."""
    args = trace.spec.arguments
    if m + 1 >= len(args):
        return None
    if levels is None:
        levels = lemma_levels(args[: m + 2], trace.spec.base_period, constants)
    u = levels[m].u_bar
    return math.inf if u >= 1 else h_eval(float(u))


def mlc_rate_diagnostic(spec: CascadeSpec):
    """(max, per-level values) of log|p_m| / (n q_0 ... q_{m-1})."""
    vals = []
    log_prod = MP.mpf(0)
    for t in spec.arguments:
        vals.append(float(MP.log(abs(t.p)) / (spec.base_period * MP.exp(log_prod))))
        log_prod += log_of(t.q)
    return max(vals), vals


def _diagnostics(trace: CascadeTrace, constants: GeometryConstants) -> list:
    gaps = trace.gaps()
    args = trace.spec.arguments
    levels = lemma_levels(args, trace.spec.base_period, constants) if len(args) >= 2 else None
    out = []
    for m in range(trace.depth + 1):
        orb = trace.orbits_at_limit[m]
        rec = dict(
            m=m,
            argument=trace.arguments[m] if m < trace.depth else None,
            period=trace.periods[m],
            touch_point=trace.touch_points[m] if m < trace.depth else None,
            gap=gaps[m] if m < len(gaps) else None,
            orbit_min_distance=orbit_min_distance(trace, m),
            multiplier_abs=float(abs(orb.multiplier)),
        )
        if m >= 1:
            try:
                cs = cluster_structure(trace, m)
                rec["cluster_diameter"] = max(cs.diameters)
                if m + 1 <= trace.depth:
                    rec["zeta_ratio"], rec["h_bound"] = zeta_ratio(
                        trace, m, constants, structure=cs, levels=levels)
            except CascadeError:
                pass
        out.append(LevelRecord(**rec))
    return out
