"""Numerical laboratory for cascades of satellite bifurcations of z^2 + c."""
from .cascade import (CascadeSpec, CascadeTrace, cluster_structure, limit_parameter,
                      mlc_rate_diagnostic, orbit_min_distance, run_cascade, zeta_ratio)
from .criteria import (ConditionReport, h_eval, lemma_quantities, milnor_series,
                       theorem2_condition, theorem5_conditions)
from .dynamics import (PeriodicOrbit, continue_orbit, iterate_with_derivatives, multiplier_of,
                       solve_periodic_orbit)
from .errors import (CascadeError, ClusteringAmbiguousError, ContinuationBlockedError,
                     DegenerateClusterError, DivergedOrbitError, DomainError, LevelError,
                     NoConvergenceError, SamplingTooCoarseError, SingularSystemError)
from .geometry import (Disk, GeometryConstants, HyperbolicComponent, bifurcation_radius,
                       boundary_point, child_component, covering_check, extend_psi,
                       limb_diameter_bound, main_cardioid, main_cardioid_boundary,
                       omega_membership, omega_tilde_distance, omega_tilde_membership,
                       p_estimate, satellite_multiplier, yoccoz_circle)
from .precision import BINARY64, Precision
from .rotation import IntPower, RotationNumber

__version__ = "0.1.0"

__all__ = [
    "BINARY64", "CascadeError", "CascadeSpec", "CascadeTrace", "ClusteringAmbiguousError",
    "ConditionReport", "ContinuationBlockedError", "DegenerateClusterError", "Disk",
    "DivergedOrbitError", "DomainError", "GeometryConstants", "HyperbolicComponent", "IntPower",
    "LevelError", "NoConvergenceError", "PeriodicOrbit", "Precision", "RotationNumber",
    "SamplingTooCoarseError", "SingularSystemError", "bifurcation_radius", "boundary_point",
    "child_component", "cluster_structure", "continue_orbit", "covering_check", "extend_psi",
    "h_eval", "iterate_with_derivatives", "lemma_quantities", "limb_diameter_bound",
    "limit_parameter", "main_cardioid", "main_cardioid_boundary", "milnor_series",
    "mlc_rate_diagnostic", "multiplier_of", "omega_membership", "omega_tilde_distance",
    "omega_tilde_membership", "orbit_min_distance", "p_estimate", "run_cascade",
    "satellite_multiplier", "solve_periodic_orbit", "theorem2_condition", "theorem5_conditions",
    "yoccoz_circle", "zeta_ratio",
]

