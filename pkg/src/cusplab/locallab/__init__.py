"""Truncated equal-characteristic local objects and their character theory:
E = F_{q^n}((w)) at finite level, the twisted group algebra A, the division
algebra D = E<Pi>/(Pi^n - w), primitive characters, the theta_A / theta_D /
theta-tilde / sigma constructions, and the brute-force lemma scans.
"""

from .rings import TruncE, TruncA, TruncD, EUnit, q_basis
from .theta import ThetaChar, Psi0, list_primitive_theta, unit_group_dual, find_y_psi0
from .constructions import build_theta_tilde, build_sigma_level, theta_A_value, theta_D_value

__all__ = [
    "TruncE", "TruncA", "TruncD", "EUnit", "q_basis",
    "ThetaChar", "Psi0", "list_primitive_theta", "unit_group_dual", "find_y_psi0",
    "build_theta_tilde", "build_sigma_level", "theta_A_value", "theta_D_value",
]
