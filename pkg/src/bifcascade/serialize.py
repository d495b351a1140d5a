"""JSON and CSV forms of traces and specs.

Complex values are written as exact decimal strings of their real and
imaginary parts so that documents read back to identical values at the same
precision.  Non-finite floats become the strings "inf", "-inf", "nan".
"""
from __future__ import annotations

import csv
import io
import math
from typing import Any, Optional

from .cascade import CascadeSpec, CascadeTrace, LevelRecord, gap_ratios
from .dynamics import PeriodicOrbit
from .geometry import GeometryConstants, HyperbolicComponent
from .precision import BINARY64, Precision, to_parts
from .rotation import RotationNumber

CSV_COLUMNS = ("m", "p", "q", "period", "touch_re", "touch_im", "gap", "gap_ratio",
               "orbit_min_distance", "multiplier_abs", "cluster_diameter", "zeta_ratio",
               "h_bound")


def float_to_json(x: Optional[float]):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else str(x)


def float_from_json(x):
    return None if x is None else float(x)


def complex_to_json(z) -> Optional[dict]:
    if z is None:
        return None
    re, im = to_parts(z)
    return {"re": re, "im": im}


def complex_from_json(d, precision: Precision = BINARY64):
    if d is None:
        return None
    with precision.scope():
        return precision.from_parts(d["re"], d["im"])


def precision_to_json(p: Precision):
    return p.digits


def precision_from_json(d) -> Precision:
    return BINARY64 if d is None else Precision(int(d))


def spec_to_json(spec: CascadeSpec) -> dict:
    return {"arguments": [t.to_json() for t in spec.arguments],
            "base_period": spec.base_period,
            "precision": precision_to_json(spec.precision),
            "tol": spec.tol}


def spec_from_json(d: dict) -> CascadeSpec:
    return CascadeSpec(tuple(RotationNumber.parse(t) for t in d["arguments"]),
                       int(d.get("base_period", 1)),
                       precision_from_json(d.get("precision")),
                       None if d.get("tol") is None else float(d["tol"]))


def constants_to_json(c: GeometryConstants) -> dict:
    return {"B0": c.B0, "A": c.A, "K": c.K, "beta": c.beta, "delta": c.delta,
            "L_budget": c.L_budget, "C_big": c.C_big}


def constants_from_json(d: Optional[dict]) -> GeometryConstants:
    d = dict(d or {})
    d.pop("C_big", None)
    unknown = set(d) - {"B0", "A", "K", "beta", "delta", "L_budget"}
    if unknown:
        raise ValueError(f"unknown constants: {sorted(unknown)}")
    return GeometryConstants(**d)


def component_to_json(W: HyperbolicComponent) -> dict:
    return {"period": W.period, "center": complex_to_json(W.center),
            "lineage": [t.to_json() for t in W.lineage]}


def component_from_json(d: dict, precision: Precision) -> HyperbolicComponent:
    return HyperbolicComponent(int(d["period"]), complex_from_json(d["center"], precision),
                               tuple(RotationNumber.parse(t) for t in d["lineage"]))


def orbit_to_json(o: PeriodicOrbit) -> dict:
    return {"parameter": complex_to_json(o.parameter), "period": o.period,
            "points": [complex_to_json(z) for z in o.points],
            "multiplier": complex_to_json(o.multiplier),
            "residual": float_to_json(o.residual), "exact_period": o.exact_period}


def orbit_from_json(d: dict, precision: Precision) -> PeriodicOrbit:
    return PeriodicOrbit(complex_from_json(d["parameter"], precision), int(d["period"]),
                         tuple(complex_from_json(z, precision) for z in d["points"]),
                         complex_from_json(d["multiplier"], precision),
                         float_from_json(d["residual"]), bool(d["exact_period"]))


def level_to_json(r: LevelRecord) -> dict:
    return {"m": r.m, "argument": None if r.argument is None else r.argument.to_json(),
            "period": r.period, "touch_point": complex_to_json(r.touch_point),
            "gap": float_to_json(r.gap), "orbit_min_distance": float_to_json(r.orbit_min_distance),
            "multiplier_abs": float_to_json(r.multiplier_abs),
            "cluster_diameter": float_to_json(r.cluster_diameter),
            "zeta_ratio": float_to_json(r.zeta_ratio), "h_bound": float_to_json(r.h_bound)}


def level_from_json(d: dict, precision: Precision) -> LevelRecord:
    return LevelRecord(
        int(d["m"]), None if d["argument"] is None else RotationNumber.parse(d["argument"]),
        int(d["period"]), complex_from_json(d["touch_point"], precision),
        float_from_json(d["gap"]), float_from_json(d["orbit_min_distance"]),
        float_from_json(d["multiplier_abs"]), float_from_json(d["cluster_diameter"]),
        float_from_json(d["zeta_ratio"]), float_from_json(d["h_bound"]))


def orbit_distance_floor(trace: CascadeTrace) -> float:
    return min(r.orbit_min_distance for r in trace.diagnostics)


def trace_to_json(trace: CascadeTrace) -> dict:
    return {
        "spec": spec_to_json(trace.spec),
        "components": [component_to_json(W) for W in trace.components],
        "touch_points": [complex_to_json(c) for c in trace.touch_points],
        "boundary_orbits": [orbit_to_json(o) for o in trace.boundary_orbits],
        "periods": list(trace.periods),
        "limit": complex_to_json(trace.limit),
        "limit_error": float_to_json(trace.limit_error),
        "orbits_at_limit": [orbit_to_json(o) for o in trace.orbits_at_limit],
        "diagnostics": [level_to_json(r) for r in trace.diagnostics],
        "resolution_exhausted": trace.resolution_exhausted,
        "summary": {
            "depth": trace.depth,
            "gap_ratios": [float_to_json(r) for r in gap_ratios(trace)],
            "orbit_distance_floor": float_to_json(orbit_distance_floor(trace)),
            "zeta_pairing": "nearest same-cluster neighbour (approximation of the rotated point)",
        },
    }


def trace_from_json(d: dict) -> CascadeTrace:
    spec = spec_from_json(d["spec"])
    P = spec.precision
    return CascadeTrace(
        spec=spec,
        components=[component_from_json(W, P) for W in d["components"]],
        touch_points=[complex_from_json(c, P) for c in d["touch_points"]],
        boundary_orbits=[orbit_from_json(o, P) for o in d["boundary_orbits"]],
        periods=[int(n) for n in d["periods"]],
        limit=complex_from_json(d["limit"], P),
        limit_error=float_from_json(d["limit_error"]),
        orbits_at_limit=[orbit_from_json(o, P) for o in d["orbits_at_limit"]],
        diagnostics=[level_from_json(r, P) for r in d["diagnostics"]],
        resolution_exhausted=bool(d["resolution_exhausted"]),
    )


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def trace_csv(trace: CascadeTrace) -> str:
    """One row per level m < depth."""
    ratios = gap_ratios(trace)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in trace.diagnostics[: trace.depth]:
        re, im = to_parts(r.touch_point)
        w.writerow([_cell(v) for v in (
            r.m, r.argument.p, r.argument.q, r.period, re, im, r.gap,
            ratios[r.m - 1] if 1 <= r.m <= len(ratios) else None,
            r.orbit_min_distance, r.multiplier_abs, r.cluster_diameter, r.zeta_ratio,
            r.h_bound)])
    return buf.getvalue()
