"""Jacobi theta series of even quadratic forms with spherical weights.

Exact Fourier coefficients, truncated numerical evaluation, the Psi
combinations with E2, Jacobi-like generating polynomials and numerical
verification of their transformation laws.
"""

from .errors import ThetaError
from .expansion import FourierExpansion, z_derivative
from .jacobi_group import (
    JacobiGroupElement,
    act,
    elliptic_factor,
    gamma0_element,
    modular_factor,
)
from .lattice import enumerate_congruence, enumerate_points
from .quadform import (
    DirectionSet,
    QuadraticForm,
    SphericalVector,
    bilinear,
    check_admissible,
    epsilon,
    kronecker,
    make_directions,
    make_spherical,
    quad,
    validate_form,
)
from .series import (
    ThetaSpec,
    TruncatedXPolynomial,
    congruence_theta_eval,
    delta_coeff,
    e2_hat_poly,
    eisenstein_e2,
    psi_coeffs,
    psi_eval,
    reconstruct_from_orthogonal,
    spherical_decomposition,
    theta_coeffs,
    theta_eval,
    theta_generating_poly,
)
from .verify import (
    VerificationReport,
    quasi_depth_fit,
    sample_points,
    verify_congruence,
    verify_elliptic,
    verify_generating,
    verify_modular,
    verify_support,
    verify_translation_polynomial,
)

__version__ = "0.1.0"

__all__ = [
    "DirectionSet",
    "FourierExpansion",
    "JacobiGroupElement",
    "QuadraticForm",
    "SphericalVector",
    "ThetaError",
    "ThetaSpec",
    "TruncatedXPolynomial",
    "VerificationReport",
    "act",
    "bilinear",
    "check_admissible",
    "congruence_theta_eval",
    "delta_coeff",
    "e2_hat_poly",
    "eisenstein_e2",
    "elliptic_factor",
    "enumerate_congruence",
    "enumerate_points",
    "epsilon",
    "gamma0_element",
    "kronecker",
    "reconstruct_from_orthogonal",
    "make_directions",
    "make_spherical",
    "modular_factor",
    "psi_coeffs",
    "psi_eval",
    "quad",
    "quasi_depth_fit",
    "sample_points",
    "spherical_decomposition",
    "theta_coeffs",
    "theta_eval",
    "theta_generating_poly",
    "validate_form",
    "verify_congruence",
    "verify_elliptic",
    "verify_generating",
    "verify_modular",
    "verify_support",
    "verify_translation_polynomial",
    "z_derivative",
]
