"""Special Kähler geometries realized as parabolic affine spheres.

Thin wrapper over the C++ extension; see the package README for the
mathematical conventions (working chart xi = (Re z, Im z), Darboux
coordinates (Re z, Re dF), Blaschke metric G = Hess u with det G = 1).
"""

from ._core import (  # noqa: F401
    ConfigError,
    ConnectionKind,
    DegeneratePointError,
    ExprDomainError,
    ExprParseError,
    HoloJet,
    Prepotential,
    Signature,
    SKPoint,
    ambient_gamma,
    conjugacy_residual,
    curvature_torsion,
    darboux,
    gauss_curvature,
    hermitian_form,
    hermitian_form_oracle,
    hermitian_signature,
    lagrangian_residual,
    ma_residual,
    make_point,
    metric_G,
    nijenhuis_residual,
    potential_u,
    run_check,
    scalar_curvature,
    shape_tensor,
    special_residuals,
)

__all__ = [name for name in dir() if not name.startswith("_")]
