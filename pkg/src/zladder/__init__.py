"""Jacob's ladders for the Hardy Z-function.

Builds the monotone ladder phi_1 with d(phi_1)/dt = Z(t)^2 / ln t from a
Riemann-Siegel evaluator, inverts it, and verifies the weighted-orthogonality
identities it induces for Bessel functions and classical orthogonal
polynomials, at both the exact (change-of-variables) and asymptotic layers.
"""

from .exceptions import (AdmissibilityError, CacheError, ConvergenceError,
                         DomainError, PoleError, PrecisionError,
                         QuadratureError, ToleranceNotMetError, ZladderError)
from .ladder import (EULER_C, LadderTable, PrimePi, RetardationRow,
                     build_ladder, check_admissible, ladder_eval,
                     ladder_invert, log_stability_check, pushforward_integral,
                     retardation_report, ztilde_sq)
from .quadrature import (QuadratureResult, integrate_adaptive,
                         integrate_singular)
from .rszeta import ZEvaluator
from .specfun import (BesselZeroTable, PolyFamilySpec, bessel_j,
                      bessel_norm_sq, bessel_zero, gamma_fn, log_gamma,
                      poly_eval, poly_norm_sq, poly_weight)

__version__ = "0.1.0"

__all__ = [
    "ZEvaluator",
    "LadderTable", "PrimePi", "RetardationRow", "build_ladder", "ladder_eval",
    "ladder_invert", "pushforward_integral", "retardation_report",
    "log_stability_check", "ztilde_sq", "check_admissible", "EULER_C",
    "QuadratureResult", "integrate_adaptive", "integrate_singular",
    "BesselZeroTable", "PolyFamilySpec", "bessel_j", "bessel_norm_sq",
    "bessel_zero", "gamma_fn", "log_gamma", "poly_eval", "poly_norm_sq",
    "poly_weight",
    "ZladderError", "DomainError", "PoleError", "PrecisionError",
    "ConvergenceError", "QuadratureError", "ToleranceNotMetError",
    "AdmissibilityError", "CacheError",
    "__version__",
]
