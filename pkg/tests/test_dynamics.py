import cmath

import gmpy2
import pytest

from bifcascade.dynamics import (continue_orbit, critical_orbit_points, cycle_residual,
                                 has_exact_period, iterate_with_derivatives, multiplier_of,
                                 solve_periodic_orbit)
from bifcascade.errors import ContinuationBlockedError, DivergedOrbitError
from bifcascade.precision import Precision


def test_iterate_fixed_critical_point():
    orbit, dz, dc = iterate_with_derivatives(0, 0, 5)
    assert orbit == [0] * 6
    assert dz == 0 and dc == 1


def test_iterate_superattracting_two_cycle():
    orbit, dz, dc = iterate_with_derivatives(-1, 0, 2)
    assert orbit == [0, -1, 0]
    assert dz == 0 and dc == -1


def test_iterate_large_but_bounded():
    orbit, dz, _ = iterate_with_derivatives(0, 2, 3)
    assert orbit == [2, 4, 16, 256]
    assert dz == 1024


def test_iterate_escape_raises():
    with pytest.raises(DivergedOrbitError):
        iterate_with_derivatives(0, 2, 6)
    with pytest.raises(ValueError):
        iterate_with_derivatives(0, 0, 0)


def test_solve_fixed_point_at_zero():
    orb = solve_periodic_orbit(0, 1, [0.1])
    assert abs(orb.points[0]) < 1e-12
    assert abs(orb.multiplier) < 1e-12


def test_solve_superattracting_two_cycle():
    orb = solve_periodic_orbit(-1, 2, [0.1, -0.9])
    assert sorted(round(complex(z).real, 12) for z in orb.points) == [-1.0, 0.0]
    assert abs(orb.multiplier) < 1e-12
    assert orb.exact_period


def test_solve_two_cycle_multiplier_closed_form():
    orb = solve_periodic_orbit(-1.3, 2, [0.2, -1.2])
    pts = sorted(complex(z).real for z in orb.points)
    root = (-1 + cmath.sqrt(1 - 4 * (-1.3 + 1)).real) / 2
    assert pts == pytest.approx([-1 - root, root], abs=1e-12)
    assert complex(orb.multiplier) == pytest.approx(-1.2, abs=1e-12)


def test_seed_length_must_match():
    with pytest.raises(ValueError):
        solve_periodic_orbit(0, 2, [0.1])


def test_fixed_point_is_not_exact_period_two():
    # both seeds converge onto the same fixed point
    orb = solve_periodic_orbit(-0.5, 2, [-0.36, -0.37])
    assert not orb.exact_period
    assert not has_exact_period([0.5, 0.5], 1e-12)


def test_continue_along_real_axis():
    orb = solve_periodic_orbit(-1, 2, [0.1, -0.9])
    end = continue_orbit(orb, [-1, -1.1, -1.2, -1.3])
    assert complex(end.multiplier) == pytest.approx(-1.2, abs=1e-10)
    assert complex(end.parameter) == -1.3


def test_continue_constant_path_is_identity():
    orb = solve_periodic_orbit(0, 1, [0.0])
    end = continue_orbit(orb, [0, 0])
    assert complex(end.points[0]) == pytest.approx(complex(orb.points[0]), abs=1e-14)


def test_loop_around_quarter_swaps_fixed_points():
    # the two fixed points are exchanged by monodromy around c = 1/4
    orb = solve_periodic_orbit(0, 1, [0.0])
    loop = [0, 0.25 + 0.3j, 0.6, 0.25 - 0.3j, 0]
    try:
        end = continue_orbit(orb, loop)
    except ContinuationBlockedError:
        return
    assert complex(end.multiplier) == pytest.approx(2.0, abs=1e-9)


def test_path_must_start_at_parameter():
    orb = solve_periodic_orbit(0, 1, [0.0])
    with pytest.raises(ValueError):
        continue_orbit(orb, [0.1, 0.2])


def test_multiplier_of_examples():
    assert multiplier_of([0]) == 0
    assert multiplier_of([0, -1]) == 0
    c = -1.3
    r = (-1 + cmath.sqrt(1 - 4 * (c + 1))) / 2
    assert multiplier_of([r, -1 - r]) == pytest.approx(4 * (c + 1), abs=1e-12)
    with pytest.raises(ValueError):
        multiplier_of([])


def test_cycle_residual():
    assert cycle_residual(-1, [0, -1]) == 0
    assert cycle_residual(-1, [0.1, -1]) > 0


def test_extended_precision_cycle():
    P = Precision(40)
    with P.scope():
        c = gmpy2.mpc("-1.3")
        orb = solve_periodic_orbit(c, 2, [0.2, -1.2], precision=P)
        assert isinstance(orb.multiplier, gmpy2.mpc)
        assert abs(orb.multiplier - 4 * (c + 1)) < 1e-35


def test_critical_orbit_points():
    pts = critical_orbit_points(-1, 4)
    assert [complex(z) for z in pts][:3] == [0, -1, 0]
