"""Surfaces with a curve of umbilic points: charts, line fields, classification.

The package builds strip charts around a regular curve of umbilic points,
computes the principal-curvature-line equation both from truncated series and
from finite differences, classifies points of the curve by blow-up of the
direction field, and measures the first-return map of the foliation tangent
to a closed umbilic curve.
"""

from .blowup import (BlowUpSingularity, ClassificationReport, LocalInvariants,
                     a_zero_blowup, classify_invariants, classify_point, cubic_R,
                     darboux_jet, a_zero_jet, delta_Delta, eigenvalues_at,
                     local_invariants, phase_portrait_oracle, resultant_checks,
                     roots_R)
from .chart import (FundamentalForms, UmbilicSurfaceSpec, eval_chart,
                    focal_sheets, forms_numeric, forms_series, hk_series)
from .curvebuild import (ClosureReport, FrameField, closure_check,
                         darboux_from_frenet, integrate_darboux_frame)
from .holonomy import (ReturnMapReport, first_variation, return_map_analytic,
                       return_map_numeric, second_variation_ode)
from .lineode import (LineODECoeffs, Trajectory, integrate_principal_line,
                      ode_coeffs, ode_coeffs_series, principal_directions,
                      reduced_coeffs, reduced_equation)
from .profiles import DerivedProfile, ScalarProfile, constant_profile, eval_profile
from .scenario import Scenario, builtin_scenarios, load_scenario

__version__ = "0.1.0"

__all__ = [
    "BlowUpSingularity", "ClassificationReport", "ClosureReport", "DerivedProfile",
    "FrameField", "FundamentalForms", "LineODECoeffs", "LocalInvariants",
    "ReturnMapReport", "Scenario", "ScalarProfile", "Trajectory",
    "UmbilicSurfaceSpec", "a_zero_blowup", "a_zero_jet", "builtin_scenarios",
    "classify_invariants", "classify_point", "closure_check", "constant_profile",
    "cubic_R", "darboux_from_frenet", "darboux_jet", "delta_Delta",
    "eigenvalues_at", "eval_chart", "eval_profile", "first_variation",
    "focal_sheets", "forms_numeric", "forms_series", "hk_series",
    "integrate_darboux_frame", "integrate_principal_line", "load_scenario",
    "local_invariants", "ode_coeffs", "ode_coeffs_series",
    "phase_portrait_oracle", "principal_directions", "reduced_coeffs",
    "reduced_equation", "resultant_checks", "return_map_analytic",
    "return_map_numeric", "roots_R", "second_variation_ode",
]
