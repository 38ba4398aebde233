"""Certified solvers for Zolotarev-2 and Wasserstein-2 distances.

Exact distances between finitely supported measures on R^d: W2 via the
transportation LP, Z2 via a two-sided bracket (feasible dual field below,
feasible 3-plan above) whose gap certifies the answer, plus the sharp
inequality chain W2^2/4 <= Z2 <= (sigma_mu + sigma_nu) W2 / 2.
"""

from .errors import (BarycentreMismatch, DimensionMismatch, InfeasibleSupport,
                     NotCertified, NotConverged, NotInConvexOrder, ParseError,
                     ZolotoError)
from .inequalities import (BoundReport, FamilySpec, check_bounds,
                           classify_lower_equality, classify_upper_equality,
                           estimate_h, gaussian_pair, scan_ratio,
                           scan_rows_to_csv, symmetric_dilation_pair,
                           two_atom_pair, two_atom_plan)
from .measures import (DiscreteMeasure, GeneratorSpec, MeasureStats, center,
                       dilate, dirac, from_atoms, from_json_dict,
                       gaussian_quantile_discretize, load_measure,
                       measures_equal, random_measure, save_measure, stats,
                       to_json_dict)
from .transport_plans import (CertifiedZ2, OptimalityReport, ThreePlan,
                              ValidationReport, build_candidate_support,
                              certify_z2, check_convex_order,
                              martingale_coupling, solve_variance_lp,
                              three_plan_cost, validate_three_plan,
                              verify_optimality_conditions,
                              z2_convex_order_closed_form)
from .wasserstein import Coupling, solve_w2, solve_w2_1d_monotone, w2_gaussian_1d
from .zolotarev import (DualReport, OneField, check_barycentres,
                        check_field_admissible, field_constraint_values,
                        magic_formula_value, pairwise_constraint,
                        solve_dual_z2, three_point_gap, union_support)

__version__ = "0.1.0"

__all__ = [
    "BarycentreMismatch", "BoundReport", "CertifiedZ2", "Coupling",
    "DimensionMismatch", "DiscreteMeasure", "DualReport", "FamilySpec",
    "GeneratorSpec", "InfeasibleSupport", "MeasureStats", "NotCertified",
    "NotConverged", "NotInConvexOrder", "OneField", "OptimalityReport",
    "ParseError", "ThreePlan", "ValidationReport", "ZolotoError",
    "build_candidate_support", "center", "certify_z2", "check_barycentres",
    "check_bounds", "check_convex_order", "check_field_admissible",
    "classify_lower_equality", "classify_upper_equality", "dilate", "dirac",
    "estimate_h", "field_constraint_values", "from_atoms", "from_json_dict",
    "gaussian_pair", "gaussian_quantile_discretize", "load_measure",
    "magic_formula_value", "martingale_coupling", "measures_equal",
    "pairwise_constraint", "random_measure", "save_measure", "scan_ratio",
    "scan_rows_to_csv", "solve_dual_z2", "solve_variance_lp", "solve_w2",
    "solve_w2_1d_monotone", "stats", "symmetric_dilation_pair",
    "three_plan_cost", "three_point_gap", "to_json_dict", "two_atom_pair",
    "two_atom_plan", "union_support", "validate_three_plan",
    "verify_optimality_conditions", "w2_gaussian_1d",
    "z2_convex_order_closed_form",
]
