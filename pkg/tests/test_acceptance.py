"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records a one-line PASS/FAIL summary (echoed at the end of the
pytest run by conftest) before asserting.
"""
import json
import random
import time

import mpmath
import numpy as np

from bifcascade import cli
from bifcascade.cascade import gap_ratios, orbit_min_distance, run_cascade
from bifcascade.criteria import h_eval, milnor_series, milnor_terms, theorem2_condition
from bifcascade.dynamics import iterate_with_derivatives, solve_periodic_orbit
from bifcascade.geometry import (GeometryConstants, bifurcation_radius, boundary_point,
                                 covering_report, main_cardioid, main_cardioid_boundary)
from bifcascade.rotation import RotationNumber
from bifcascade.verification import h_grid, satellite_derivative_error, yoccoz_containment

from conftest import ACCEPTANCE_LINES, fast_decay_spec, period_doubling


def report(n, ok, text):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def h_product(u, k=50):
    """Defining product of H truncated at k factors, at 50 digits."""
    with mpmath.workdps(50):
        u = mpmath.mpf(u)
        prod = 16 * u
        for j in range(1, k + 1):
            prod *= ((1 + u ** (2 * j)) / (1 - u ** (2 * j - 1))) ** 8
        return float(prod)


def period_n_roots(c, n):
    """Points of exact period n <= 3 of z^2 + c, from closed forms or a companion matrix."""
    if n == 1:
        s = np.sqrt(complex(1 - 4 * c))
        return [(1 + s) / 2, (1 - s) / 2]
    if n == 2:
        s = np.sqrt(complex(-3 - 4 * c))
        return [(-1 + s) / 2, (-1 - s) / 2]
    # f^3(z) - z divided by the fixed-point factor z^2 - z + c
    f = np.polynomial.Polynomial([c, 0, 1])
    g = f(f(f)) - np.polynomial.Polynomial([0, 1])
    q, _ = divmod(g, np.polynomial.Polynomial([c, -1, 1]))
    roots = np.linalg.eigvals(_companion(q))
    # one Newton polish on the sextic against rounding in the eigen-solver
    dq = q.deriv()
    return [z - q(z) / dq(z) for z in roots]


def _companion(poly):
    coef = poly.coef / poly.coef[-1]
    deg = len(coef) - 1
    mat = np.zeros((deg, deg), dtype=complex)
    mat[1:, :-1] = np.eye(deg - 1)
    mat[:, -1] = -coef[:-1]
    return mat


def test_criterion_1_cardioid_oracle():
    ts = [RotationNumber(p, q) for p, q in ((1, 2), (1, 3), (-1, 3), (1, 4), (2, 5), (-2, 7),
                                            (3, 8), (5, 11))]
    start = time.perf_counter()
    W = main_cardioid()
    worst = max(abs(complex(boundary_point(W, t)[0]) - complex(main_cardioid_boundary(t)))
                for t in ts)
    secs = time.perf_counter() - start
    ok = worst <= 1e-10 and secs < 1
    report(1, ok, f"cardioid boundary max error {worst:.2e} (<= 1e-10) in {secs:.2f}s (< 1s)")
    assert ok


def test_criterion_2_period_doubling_limit():
    start = time.perf_counter()
    t12 = run_cascade(period_doubling(12))
    t14 = run_cascade(period_doubling(14))
    secs = time.perf_counter() - start
    c12, c14 = complex(t12.limit), complex(t14.limit)
    ratios = gap_ratios(t14)
    # ratios[j] = g_{j+1}/g_j; once depth 10 is reached (j >= 8) all later ones agree to 2%
    tail = ratios[8:]
    spread = max(abs(a - b) / abs(b) for a in tail for b in tail)
    anchor = f"{c12.real:.1f}" == "-1.4" and abs(c12.imag) < 1e-8
    ok = anchor and abs(c12 - c14) <= 1e-8 and spread <= 0.02 and secs < 60
    report(2, ok, f"limit {c12.real:.12f} (anchor -1.4: {anchor}), "
                  f"|c12 - c14| = {abs(c12 - c14):.1e} (<= 1e-8), "
                  f"gap ratio {abs(ratios[-1]):.5f}, spread over {len(tail)} ratios "
                  f"{spread:.1e} (<= 2%), {secs:.1f}s (< 60s)")
    assert ok


def test_criterion_3_h_function():
    start = time.perf_counter()
    grid = h_grid()
    h01 = h_eval(0.1)
    secs = time.perf_counter() - start
    ref = h_product(0.1)
    ok = grid.passed and abs(h01 - ref) <= 1e-3 and abs(h01 - 4.061) <= 1e-3 and secs < 1
    report(3, ok, f"grid violations {int(grid.measured)}, H(0.1) = {h01:.6f} "
                  f"(k=50 oracle {ref:.6f}), {secs:.3f}s (< 1s)")
    assert ok


def test_criterion_4_satellite_derivative():
    start = time.perf_counter()
    errs = {q: satellite_derivative_error(q) for q in (2, 3, 4, 5)}
    secs = time.perf_counter() - start
    worst = max(errs.values())
    ok = worst <= 1e-4 and secs < 10
    report(4, ok, f"d lambda/d rho vs -q^2/rho0, worst relative error {worst:.1e} (<= 1e-4) "
                  f"for q = 2..5, {secs:.2f}s (< 10s)")
    assert ok


def test_criterion_5_covering():
    start = time.perf_counter()
    constants = GeometryConstants()
    t0 = RotationNumber(1, 3)
    r = bifurcation_radius(t0, 1, constants) / 4
    rep = covering_report(main_cardioid(), t0, r, 4096, constants)
    secs = time.perf_counter() - start
    ok = rep.passed and rep.n_samples >= 4096 and rep.n_probes == 64 and secs < 30
    report(5, ok, f"winding test over {rep.n_probes} probes, {rep.n_samples} samples: "
                  f"min winding {rep.min_winding}, clearance {rep.clearance:.3f}, "
                  f"{secs:.2f}s (< 30s)")
    assert ok


def test_criterion_6_yoccoz_containment():
    res = yoccoz_containment()
    n = res.details["parameters"]
    ok = res.passed and n >= 6 and res.seconds < 30
    report(6, ok, f"{n} parameters, max excess over Y_1(1/3) {res.measured:.3f} "
                  f"(<= 1e-6), {res.seconds:.2f}s (< 30s)")
    assert ok


def test_criterion_7_witness_separation(feigenbaum12):
    start = time.perf_counter()
    fast = run_cascade(fast_decay_spec())
    floor = min(orbit_min_distance(fast, m) for m in range(0, 4))
    ratios = [orbit_min_distance(feigenbaum12, m + 1) / orbit_min_distance(feigenbaum12, m)
              for m in range(4, 10)]
    secs = time.perf_counter() - start
    in_band = all(abs(r - 0.40) <= 0.04 for r in ratios)
    ok = floor > 0.01 and in_band and secs < 120
    report(7, ok, f"fast-decay floor {floor:.4f} (> 0.01); period-doubling distance ratios "
                  f"{min(ratios):.4f}..{max(ratios):.4f} (0.40 +- 0.04), {secs:.1f}s (< 120s)")
    assert ok


def test_criterion_8_criteria_separation():
    start = time.perf_counter()
    ts = cli.generate_sequence({"kind": "tower", "q0": 2, "length": 6})
    terms = milnor_terms(ts)
    ms = milnor_series(ts)
    t2 = theorem2_condition(ts, 0.6)
    proxy = 0.6 - t2.margin
    secs = time.perf_counter() - start
    exact = all(x == mpmath.mpf(1) / 2 for x in terms)
    ok = (ms.verdict == "diverging" and exact and t2.verdict == "satisfied"
          and abs(proxy - 0.5) < 1e-12 and secs < 1)
    report(8, ok, f"Milnor series {ms.verdict} (terms exactly 1/2: {exact}); "
                  f"second condition {t2.verdict}, proxy {proxy:.3f} < 0.6, {secs:.3f}s (< 1s)")
    assert ok


def test_criterion_9_solver_oracle():
    rng = random.Random(20240611)
    start = time.perf_counter()
    worst_pt, worst_der, cases = 0.0, 0.0, 0
    for _ in range(100):
        c = complex(rng.uniform(-2, 0.5), rng.uniform(-0.5, 0.5))
        for n in (1, 2, 3):
            roots = period_n_roots(c, n)
            for z0 in roots:
                seed = [z0]
                for _ in range(n - 1):
                    seed.append(seed[-1] ** 2 + c)
                orb = solve_periodic_orbit(c, n, [s + 1e-4 for s in seed])
                for z in orb.points:
                    worst_pt = max(worst_pt, min(abs(complex(z) - r) for r in roots))
                cases += 1
            # derivative recurrences against central differences
            z0 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            _, dz, dc = iterate_with_derivatives(c, z0, n)
            h = 1e-6
            fz = [iterate_with_derivatives(c, z0 + s, n)[0][-1] for s in (h, -h)]
            fc = [iterate_with_derivatives(c + s, z0, n)[0][-1] for s in (h, -h)]
            for exact, (a, b) in ((dz, fz), (dc, fc)):
                fd = (a - b) / (2 * h)
                worst_der = max(worst_der, abs(fd - exact) / max(abs(exact), 1.0))
    secs = time.perf_counter() - start
    ok = worst_pt <= 1e-10 and worst_der <= 1e-6 and secs < 10
    report(9, ok, f"{cases} cycles at 100 random c: max point error {worst_pt:.1e} (<= 1e-10), "
                  f"derivative error {worst_der:.1e} (<= 1e-6), {secs:.2f}s (< 10s)")
    assert ok


def test_criterion_10_determinism(tmp_path):
    crit = tmp_path / "criteria.json"
    crit.write_text(json.dumps({"criteria": {"generator": {"kind": "tower", "q0": 2,
                                                           "length": 6}}}))
    img = tmp_path / "render.json"
    img.write_text(json.dumps({"image": {"center": [-0.75, 0.0], "width": 3.0,
                                         "pixels": [96, 64], "max_iter": 256}}))
    outputs = []
    for run in ("a", "b"):
        assert cli.main(["criteria", "--config", str(crit), "--out", str(tmp_path / run)]) == 0
        assert cli.main(["render", "--config", str(img), "--out", str(tmp_path / run)]) == 0
        outputs.append(((tmp_path / run / "criteria.json").read_bytes(),
                        (tmp_path / run / "render.ppm").read_bytes()))
    same_c = outputs[0][0] == outputs[1][0]
    same_r = outputs[0][1] == outputs[1][1]
    ok = same_c and same_r
    report(10, ok, f"criteria.json identical: {same_c}; render.ppm identical: {same_r}")
    assert ok
